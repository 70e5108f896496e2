"""JSON documents for every report type, and replay verification."""

from __future__ import annotations

from .classifier import ClassificationReport, Failure, ResidueScanReport, classify
from .covering import CoveringReport, check_covering, verify_covering_report
from .errors import QsectiveError
from .generate import FamilyResult, MinedPair, family_conditions, family_entries
from .oracle import FactorProof, OracleVerdict, WitnessCertificate
from .qfree import ProblemInstance, rad_q_abs, rad_q_signed, validate_instance
from .residue import RootCertificate

SCHEMA_VERSION = 1
SCHEMA_KEY = "qsective_schema"
# per-vector assignments are written out in full up to this many vectors
ASSIGNMENT_JSON_LIMIT = 4096


def document(command: str, **body) -> dict:
    return {SCHEMA_KEY: SCHEMA_VERSION, "command": command, **body}


def instance_json(inst: ProblemInstance) -> dict:
    return {"q": inst.q, "entries": list(inst.entries), "multiset": inst.multiset}


def covering_json(rep: CoveringReport) -> dict:
    out = {
        "q": rep.q,
        "k": rep.k,
        "hyperplanes": [list(h) for h in rep.hyperplanes],
        "covers": rep.covers,
        "vector_count": rep.vector_count,
        "uncovered_vector": list(rep.uncovered_vector) if rep.uncovered_vector is not None else None,
        "assignment_digest": rep.assignment_digest,
        "plane_counts": rep.plane_counts,
        "per_vector_assignment": None,
    }
    if rep.covers and rep.assignment is not None and rep.vector_count <= ASSIGNMENT_JSON_LIMIT:
        out["per_vector_assignment"] = rep.assignment.tolist()
    return out


def _failure_json(f: Failure | None) -> dict | None:
    return None if f is None else {"reason": f.reason, "prime": f.prime}


def classification_json(rep: ClassificationReport) -> dict:
    entries = rep.instance.entries

    def witness(w):
        if w is None:
            return None
        return {"index": w.index, "entry": entries[w.index], "modulus": w.modulus, "root": w.root}

    return {
        "instance": instance_json(rep.instance),
        "exponent_matrix": {
            "primes": list(rep.matrix.primes),
            "nu": [list(r) for r in rep.matrix.nu],
            "signs": list(rep.matrix.signs),
        },
        "verdict": rep.verdict,
        "condition1": covering_json(rep.condition1),
        "condition2": witness(rep.condition2),
        "condition3": {str(p): witness(w) for p, w in rep.condition3.items()},
        "failure_reason": _failure_json(rep.failure_reason),
        "failures": [_failure_json(f) for f in rep.failures],
    }


def witness_json(w: WitnessCertificate) -> dict:
    return {
        "modulus": w.modulus,
        "construction": {"kind": w.construction, "prime": w.prime, "exponent": w.exponent},
        "scan_proof": {"scan_range": list(w.scan_range)} if w.scan_verified else None,
        "factor_proofs": [{"index": f.index, "kind": f.kind, "level": f.level} for f in w.factor_proofs],
    }


def witness_from_json(d: dict) -> WitnessCertificate:
    c = d["construction"]
    return WitnessCertificate(
        d["modulus"],
        c["kind"],
        c["prime"],
        c["exponent"],
        d["scan_proof"] is not None,
        [FactorProof(f["index"], f["kind"], f["level"]) for f in d["factor_proofs"]],
    )


def oracle_json(v: OracleVerdict) -> dict:
    return {
        "bound": v.bound,
        "checked_moduli": v.checked_moduli,
        "first_failure": witness_json(v.first_failure) if v.first_failure else None,
        "roots": {str(m): x for m, x in sorted(v.roots.items())},
    }


def residue_scan_json(r: ResidueScanReport) -> dict:
    return {"prime_bound": r.prime_bound, "primes_checked": r.primes_checked, "first_failure": r.first_failure}


def root_certificate_json(c: RootCertificate | None) -> dict | None:
    if c is None:
        return None
    return {
        "modulus": c.modulus,
        "root": c.root,
        "factor_index": c.factor_index,
        "components": [
            {"prime": x.p, "exponent": x.e, "root": x.root, "factor_index": x.factor_index} for x in c.components
        ],
    }


def family_json(f: FamilyResult) -> dict:
    return {
        "p1": f.p1,
        "p2": f.p2,
        "report": classification_json(f.report),
        "family_conditions": {
            "some_power_mod_qq": f.some_power_mod_qq,
            "mutual_residues": f.mutual_residues,
            "verdict": f.conditions_verdict,
        },
    }


def mined_json(m: MinedPair) -> dict:
    return {
        **family_json(m.family),
        "spot_check": {
            "bound": m.spot_check.bound,
            "checked_moduli": m.spot_check.checked_moduli,
            "solvable": m.spot_check.solvable_everywhere,
        },
    }


def _instance_from(d: dict) -> ProblemInstance:
    return validate_instance(d["q"], d["entries"], allow_duplicates=d.get("multiset", False))


def _verify_classification(d: dict) -> list[str]:
    """Re-derive the report and compare field by field; then re-check certificates."""
    problems = []
    inst = _instance_from(d["instance"])
    fresh = classification_json(classify(inst))
    for key in ("exponent_matrix", "verdict", "condition2", "condition3", "failure_reason", "failures"):
        if d.get(key) != fresh[key]:
            problems.append(f"{key} differs from recomputation")
    cov = d["condition1"]
    if cov["covers"] != fresh["condition1"]["covers"] or cov["hyperplanes"] != fresh["condition1"]["hyperplanes"]:
        problems.append("condition1 differs from recomputation")
    elif cov["covers"]:
        if cov["assignment_digest"] != fresh["condition1"]["assignment_digest"]:
            problems.append("covering assignment digest mismatch")
        assign = cov.get("per_vector_assignment")
        if assign is not None:
            import numpy as np

            rep = CoveringReport(cov["q"], cov["k"], [tuple(h) for h in cov["hyperplanes"]], True,
                                 assignment=np.asarray(assign), assignment_digest=cov["assignment_digest"])
            if not verify_covering_report(rep):
                problems.append("per-vector covering assignment does not verify")
    else:
        rep = CoveringReport(cov["q"], cov["k"], [tuple(h) for h in cov["hyperplanes"]], False,
                             uncovered_vector=tuple(cov["uncovered_vector"]))
        if not verify_covering_report(rep):
            problems.append("uncovered vector lies on a hyperplane")
    q = inst.q
    for w in [d["condition2"], *d["condition3"].values()]:
        if w is not None and w["root"] is not None and (pow(w["root"], q, w["modulus"]) - inst.entries[w["index"]]) % w["modulus"]:
            problems.append(f"residue witness {w} does not verify")
    return problems


def verify_document(d: dict) -> list[str]:
    """Return a list of problems found when replaying ``d``; empty means verified."""
    if d.get(SCHEMA_KEY) != SCHEMA_VERSION:
        return [f"unsupported schema {d.get(SCHEMA_KEY)!r}"]
    cmd = d.get("command")
    try:
        if cmd == "classify":
            problems = _verify_classification(d)
            if "cross_check" in d:
                inst = _instance_from(d["instance"])
                cc = d["cross_check"]
                if cc["oracle"]["first_failure"] and not witness_from_json(cc["oracle"]["first_failure"]).verify(inst):
                    problems.append("oracle failure certificate does not verify")
                for m, x in cc["oracle"]["roots"].items():
                    if inst.evaluate(x, int(m)):
                        problems.append(f"oracle root {x} mod {m} does not verify")
                        break
            return problems
        if cmd == "witness":
            inst = _instance_from(d["instance"])
            return [] if witness_from_json(d["witness"]).verify(inst) else ["witness does not verify"]
        if cmd == "oracle":
            inst = _instance_from(d["instance"])
            o = d["oracle"]
            v = OracleVerdict(o["bound"], o["checked_moduli"],
                              witness_from_json(o["first_failure"]) if o["first_failure"] else None,
                              {int(m): x for m, x in o["roots"].items()})
            return [] if v.verify(inst) else ["oracle verdict does not verify"]
        if cmd == "rootmod":
            inst = _instance_from(d["instance"])
            c = d["certificate"]
            if c is None:
                return [] if d["m"] > 10**6 or _no_root_by_scan(inst, d["m"]) else ["a root exists but none was reported"]
            return [] if inst.evaluate(c["root"], c["modulus"]) == 0 and c["modulus"] == d["m"] else ["root does not verify"]
        if cmd == "radq":
            ok = d["signed"] == rad_q_signed(d["n"], d["q"]) and d["abs"] == rad_q_abs(d["n"], d["q"])
            return [] if ok else ["radical mismatch"]
        if cmd == "residue":
            r = d["root"]
            if r is None:
                return [] if d["modulus"] > 10**6 or _no_qth_root(d["a"], d["q"], d["modulus"]) else ["a root exists"]
            return [] if (pow(r, d["q"], d["modulus"]) - d["a"]) % d["modulus"] == 0 else ["root does not verify"]
        if cmd == "hensel":
            x = d["lifted"]
            if x is None:
                return []
            m = d["p"] ** d["b"]
            return [] if (pow(x, d["q"], m) - d["a"]) % m == 0 else ["lifted root does not verify"]
        if cmd == "covering":
            c = d["report"]
            fresh = check_covering([tuple(h) for h in c["hyperplanes"]], c["q"], c["k"])
            ok = fresh.covers == c["covers"] and fresh.assignment_digest == c["assignment_digest"]
            return [] if ok else ["covering report differs from recomputation"]
        if cmd in ("generate", "mine"):
            fam = d["family"] if cmd == "generate" else d
            q = fam["report"]["instance"]["q"]
            if fam["report"]["instance"]["entries"] != family_entries(q, fam["p1"], fam["p2"]):
                return ["family entries do not match (p1, p2)"]
            first, second = family_conditions(q, fam["p1"], fam["p2"])
            problems = _verify_classification({SCHEMA_KEY: SCHEMA_VERSION, **fam["report"]})
            if (first and second) != (fam["report"]["verdict"] == "intersective"):
                problems.append("family conditions disagree with verdict")
            return problems
        if cmd == "minlc":
            from .covering import min_covering_size

            return [] if min_covering_size(d["q"], d["k"]) == d["min_covering_size"] else ["covering number mismatch"]
    except (QsectiveError, KeyError, TypeError) as exc:
        return [f"malformed document: {exc!r}"]
    return [f"unknown command {cmd!r}"]


def _no_root_by_scan(inst: ProblemInstance, m: int) -> bool:
    from .residue import scan_root

    return scan_root(inst, m) is None


def _no_qth_root(a: int, q: int, m: int) -> bool:
    from .residue import qth_power_table

    return not (qth_power_table(q, m) == a % m).any()
