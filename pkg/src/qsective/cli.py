"""Command-line interface. Every result is one JSON document on stdout
(JSON lines for ``mine``); ``--pretty`` adds a short summary on stderr.

Exit codes: 0 success, 2 invalid input or usage, 3 refused because a
bound or the integer width was exceeded, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Callable

from . import __version__
from .classifier import check_residue_everywhere, classify
from .covering import check_covering, find_covering_of_size, hyperplanes_of, min_covering_size
from .errors import BoundExceeded, DomainError, WidthError
from .generate import family_q3, family_q5, mine_pairs
from .oracle import DEFAULT_SEARCH_BOUND, find_witness, scan_solvability
from .qfree import exponent_matrix, rad_q_abs, rad_q_signed, validate_instance
from .residue import hensel_lift, is_qth_power_mod, root_mod, root_mod_prime_power
from .serialize import (
    classification_json,
    covering_json,
    document,
    family_json,
    instance_json,
    mined_json,
    oracle_json,
    residue_scan_json,
    root_certificate_json,
    verify_document,
    witness_json,
)

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_REFUSED = 0, 1, 2, 3

_INT = r"-?[0-9]+"
_INT_RE = re.compile(rf"^{_INT}$")
_LIST_RE = re.compile(rf"^{_INT}(,{_INT})*$")
# flags whose value may begin with a minus sign
_SIGNED_FLAGS = {"--a", "--n"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def int_list(text: str) -> list[int]:
    if not _LIST_RE.match(text):
        raise argparse.ArgumentTypeError(f"expected comma-separated decimal integers, got {text!r}")
    return [int(t) for t in text.split(",")]


def integer(text: str) -> int:
    if not _INT_RE.match(text):
        raise argparse.ArgumentTypeError(f"expected a decimal integer, got {text!r}")
    return int(text)


def _join_signed(argv: list[str]) -> list[str]:
    """Rewrite ``--a -3,5`` as ``--a=-3,5`` so argparse does not read a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SIGNED_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and _LIST_RE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _instance(args):
    return validate_instance(args.q, args.a)


def cmd_classify(args):
    inst = _instance(args)
    rep = classify(inst)
    out = classification_json(rep)
    if args.cross_check:
        verdict = scan_solvability(inst, args.oracle_bound)
        residues = check_residue_everywhere(inst, args.oracle_bound)
        out["cross_check"] = {
            "oracle_bound": args.oracle_bound,
            "oracle": oracle_json(verdict),
            "residue_everywhere": residue_scan_json(residues),
            "oracle_agrees": verdict.solvable_everywhere == rep.intersective,
            # the residue scan only sees the covering condition
            "residue_agrees": residues.passed == (rep.condition1.covers and rep.matrix.k >= 2),
        }
    summary = f"verdict: {rep.verdict}"
    if rep.failure_reason:
        summary += f" ({rep.failure_reason.reason}" + (f" at p = {rep.failure_reason.prime})" if rep.failure_reason.prime else ")")
    return document("classify", **out), summary


def cmd_oracle(args):
    inst = _instance(args)
    v = scan_solvability(inst, args.bound)
    summary = f"checked {v.checked_moduli} prime powers up to {args.bound}: " + (
        "a root at each" if v.solvable_everywhere else f"no root mod {v.first_failure.modulus}"
    )
    return document("oracle", instance=instance_json(inst), oracle=oracle_json(v)), summary


def cmd_witness(args):
    inst = _instance(args)
    w = find_witness(inst, search_bound=args.search_bound)
    doc = document("witness", instance=instance_json(inst), witness=witness_json(w), modulus=w.modulus)
    return doc, f"no root modulo {w.modulus if w.modulus is not None else f'{w.prime}^{w.exponent}'}"


def cmd_radq(args):
    s, a = rad_q_signed(args.n, args.q), rad_q_abs(args.n, args.q)
    return document("radq", q=args.q, n=args.n, signed=s, abs=a), f"rad_{args.q}({args.n}) = {s}, |.| = {a}"


def cmd_covering(args):
    inst = _instance(args)
    m = exponent_matrix(inst)
    rep = check_covering(hyperplanes_of(m), inst.q, m.k)
    summary = "hyperplanes cover" if rep.covers else f"vector {rep.uncovered_vector} is not covered"
    return document("covering", instance=instance_json(inst), report=covering_json(rep)), summary


def cmd_residue(args):
    if args.q < 2:
        raise DomainError("q must be at least 2")
    if args.mod < 1:
        raise DomainError("modulus must be positive")
    r = is_qth_power_mod(args.a, args.q, args.mod)
    doc = document("residue", q=args.q, a=args.a, modulus=args.mod, is_power=r is not None, root=r)
    return doc, f"{args.a} is {'' if r is not None else 'not '}a {args.q}-th power mod {args.mod}"


def cmd_hensel(args):
    q, a, p, b = args.q, args.a, args.p, args.b
    seed, seed_modulus = args.root, None
    if seed is None:
        # a seed mod q^q always satisfies the lifting criterion when p = q
        level = min(q, b) if p == q else 1
        seed_modulus = p**level
        seed = root_mod_prime_power(a, q, p, level)
    doc = document("hensel", q=q, a=a, p=p, b=b, seed=seed, seed_modulus=seed_modulus, lifted=None, failure=None)
    if seed is None:
        doc["failure"] = {"kind": "no_seed", "message": f"no root of x^{q} - {a} modulo {seed_modulus}"}
        return doc, doc["failure"]["message"]
    try:
        doc["lifted"] = hensel_lift(a, q, p, seed, b)
    except DomainError as exc:
        if not hasattr(exc, "value_valuation"):
            raise
        doc["failure"] = {
            "kind": "hensel_criterion",
            "message": str(exc),
            "value_valuation": exc.value_valuation,
            "derivative_valuation": exc.derivative_valuation,
        }
        return doc, doc["failure"]["message"]
    return doc, f"lifted {seed} to {doc['lifted']} mod {p}^{b}"


def cmd_rootmod(args):
    inst = _instance(args)
    cert = root_mod(inst, args.m)
    doc = document("rootmod", instance=instance_json(inst), m=args.m, certificate=root_certificate_json(cert))
    return doc, (f"root {cert.root} mod {args.m}" if cert else f"no root mod {args.m}")


def cmd_generate(args):
    fam = (family_q3 if args.family == "q3" else family_q5)(args.p1, args.p2)
    return document("generate", family=family_json(fam)), f"({args.p1}, {args.p2}): {fam.report.verdict}"


def cmd_minlc(args):
    n = min_covering_size(args.q, args.k)
    cover = find_covering_of_size(args.q, args.k, n)
    doc = document(
        "minlc",
        q=args.q,
        k=args.k,
        min_covering_size=n,
        cover=[list(h) for h in cover],
        covers_with_q=find_covering_of_size(args.q, args.k, args.q) is not None,
    )
    return doc, f"F_{args.q}^{args.k} needs {n} hyperplanes"


def cmd_verify(args):
    text = sys.stdin.read() if args.file == "-" else open(args.file, encoding="utf-8").read()
    problems = []
    count = 0
    for line in text.splitlines() if _is_json_lines(text) else [text]:
        if not line.strip():
            continue
        count += 1
        try:
            problems.extend(verify_document(json.loads(line)))
        except json.JSONDecodeError as exc:
            raise DomainError(f"not valid JSON: {exc}") from exc
    doc = document("verify", documents=count, verified=not problems, problems=problems)
    return doc, f"{count} document(s): " + ("verified" if not problems else f"{len(problems)} problem(s)")


def _is_json_lines(text: str) -> bool:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        return False
    try:
        json.loads(lines[0])
    except json.JSONDecodeError:
        return False
    return True


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qsective", description="Roots of prod (x^q - a_j) modulo every integer.")
    parser.add_argument("--version", action="version", version=f"qsective {__version__}")
    parser.add_argument("--pretty", action="store_true", help="write a human-readable summary to stderr")
    parser.add_argument("--verify", metavar="FILE", help="replay a saved JSON report ('-' for stdin)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func: Callable, help_text, *, instance=True):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        if instance:
            p.add_argument("--q", type=integer, required=True)
            p.add_argument("--a", type=int_list, required=True, help="comma-separated entries")
        p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
        return p

    p = add("classify", cmd_classify, "decide intersectivity with certificates")
    p.add_argument("--oracle-bound", type=integer, default=10**4)
    p.add_argument("--cross-check", action="store_true")

    p = add("oracle", cmd_oracle, "scan every prime power up to a bound for a root")
    p.add_argument("--bound", type=integer, required=True)

    p = add("witness", cmd_witness, "modulus at which no root exists")
    p.add_argument("--search-bound", type=integer, default=DEFAULT_SEARCH_BOUND)

    p = add("radq", cmd_radq, "q-free part of an integer", instance=False)
    p.add_argument("--q", type=integer, required=True)
    p.add_argument("--n", type=integer, required=True)

    add("covering", cmd_covering, "hyperplane covering check")

    p = add("residue", cmd_residue, "q-th power test modulo m", instance=False)
    p.add_argument("--q", type=integer, required=True)
    p.add_argument("--a", type=integer, required=True)
    p.add_argument("--mod", type=integer, required=True)

    p = add("hensel", cmd_hensel, "lift a root of x^q - a to p^b", instance=False)
    p.add_argument("--q", type=integer, required=True)
    p.add_argument("--a", type=integer, required=True)
    p.add_argument("--p", type=integer, required=True)
    p.add_argument("--b", type=integer, required=True)
    p.add_argument("--root", type=integer, help="seed root; found by scanning when omitted")

    p = add("rootmod", cmd_rootmod, "certified root modulo m")
    p.add_argument("--m", type=integer, required=True)

    p = add("generate", cmd_generate, "two-prime family report", instance=False)
    p.add_argument("family", choices=["q3", "q5"])
    p.add_argument("--p1", type=integer, required=True)
    p.add_argument("--p2", type=integer, required=True)

    p = add("mine", None, "stream intersective two-prime families as JSON lines", instance=False)
    p.add_argument("--q", type=integer, required=True, choices=[3, 5])
    p.add_argument("--bound", type=integer, required=True)

    p = add("minlc", cmd_minlc, "fewest hyperplanes covering F_q^k", instance=False)
    p.add_argument("--q", type=integer, required=True)
    p.add_argument("--k", type=integer, required=True)

    p = add("verify", cmd_verify, "replay a saved JSON report", instance=False)
    p.add_argument("file", help="path, or '-' for stdin")
    return parser


def _run_mine(args, out, err) -> None:
    n = 0
    for pair in mine_pairs(args.q, args.bound):
        out.write(_dump(document("mine", **mined_json(pair))) + "\n")
        n += 1
        if args.pretty and n % 1000 == 0:
            err.write(f"{n} pairs\n")
    if args.pretty:
        err.write(f"{n} intersective pairs with p2 <= {args.bound}\n")


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_signed(argv))
        if args.verify is not None:
            if args.command is not None:
                raise UsageError("--verify replays a file and takes no subcommand")
            args.file, args.func = args.verify, cmd_verify
        elif args.command is None:
            parser.print_usage(err)
            return EXIT_INPUT
        if args.command == "mine":
            _run_mine(args, out, err)
            return EXIT_OK
        doc, summary = args.func(args)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_INPUT
    except (BoundExceeded, WidthError) as exc:
        err.write(f"refused: {exc}\n")
        return EXIT_REFUSED
    except (DomainError, OSError) as exc:
        err.write(f"invalid input: {exc}\n")
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - last-resort exit code
        err.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL
    out.write(_dump(doc) + "\n")
    if args.pretty:
        err.write(summary + "\n")
    if doc.get("command") == "verify" and not doc["verified"]:
        return EXIT_INTERNAL
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
