import io
import json

import pytest

from qsective.cli import _join_signed, int_list, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def doc_of(*argv):
    code, out, _ = call(*argv)
    assert code == 0, out
    return json.loads(out)


def test_classify_example():
    d = doc_of("classify", "--q", "3", "--a", "7,251,1757,12299")
    assert d["verdict"] == "intersective"
    assert d["qsective_schema"] == 1
    assert d["condition2"]["entry"] == 251 and d["condition2"]["modulus"] == 27


def test_witness_example():
    assert doc_of("witness", "--q", "3", "--a", "2,4")["modulus"] == 7


def test_radq_example():
    d = doc_of("radq", "--q", "3", "--n", "-104")
    assert (d["signed"], d["abs"]) == (-13, 13)


def test_negative_list():
    d = doc_of("classify", "--q", "3", "--a", "-7,251")
    assert d["instance"]["entries"] == [-7, 251]
    assert _join_signed(["--a", "-1,5", "--q", "3"]) == ["--a=-1,5", "--q", "3"]


@pytest.mark.parametrize("bad", ["+7,3", "7, 3", "7,,3", "", "7;3", "0x10", "1e3"])
def test_list_grammar(bad):
    with pytest.raises(Exception):
        int_list(bad)
    code, out, err = call("classify", "--q", "3", "--a", bad)
    assert code == 2 and out == ""


def test_exit_codes():
    assert call("classify", "--q", "4", "--a", "7")[0] == 2
    assert call("classify", "--q", "3", "--a", "16")[0] == 2
    assert call("nonsense")[0] == 2
    assert call("classify", "--q", "3")[0] == 2
    assert call("classify", "--q", "3", "--a", "7", "--bogus")[0] == 2
    assert call()[0] == 2
    assert call("residue", "--q", "3", "--a", "2", "--mod", str(1 << 128))[0] == 3
    assert call("oracle", "--q", "3", "--a", "2", "--bound", str(10**7))[0] == 2


def test_cross_check():
    d = doc_of("classify", "--q", "3", "--a", "7,251,1757,12299", "--cross-check", "--oracle-bound", "2000")
    cc = d["cross_check"]
    assert cc["oracle_agrees"] and cc["residue_agrees"]
    assert cc["oracle"]["first_failure"] is None


def test_pretty_goes_to_stderr():
    code, out, err = call("--pretty", "witness", "--q", "3", "--a", "2,4")
    assert code == 0 and "7" in err
    json.loads(out)
    code, out2, err = call("witness", "--q", "3", "--a", "2,4", "--pretty")
    assert out2 == out and err


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--q", "3", "--a", "7,251,1757,12299", "--cross-check", "--oracle-bound", "500"],
        ["classify", "--q", "3", "--a", "7,251,1757"],
        ["oracle", "--q", "3", "--a", "2,4", "--bound", "100"],
        ["witness", "--q", "3", "--a", "147,490,28,1764,12"],
        ["radq", "--q", "5", "--n", "-96"],
        ["covering", "--q", "3", "--a", "7,251,1757,12299"],
        ["residue", "--q", "3", "--a", "-1", "--mod", "27"],
        ["residue", "--q", "3", "--a", "2", "--mod", "7"],
        ["hensel", "--q", "3", "--a", "10", "--p", "3", "--b", "12"],
        ["hensel", "--q", "3", "--a", "4", "--p", "3", "--b", "12"],
        ["rootmod", "--q", "3", "--a", "7,251,1757,12299", "--m", "1000000007"],
        ["rootmod", "--q", "3", "--a", "2,4", "--m", "7"],
        ["generate", "q3", "--p1", "7", "--p2", "251"],
        ["generate", "q5", "--p1", "2", "--p2", "3"],
        ["minlc", "--q", "3", "--k", "2"],
    ],
)
def test_round_trip_and_determinism(argv, tmp_path):
    code, out, _ = call(*argv)
    assert code == 0
    assert call(*argv)[1] == out
    path = tmp_path / "report.json"
    path.write_text(out)
    for replay in (["verify", str(path)], ["--verify", str(path)]):
        d = doc_of(*replay)
        assert d["verified"], d["problems"]


def test_verify_catches_tampering(tmp_path):
    _, out, _ = call("classify", "--q", "3", "--a", "7,251,1757,12299")
    d = json.loads(out)
    d["condition2"]["root"] = 5
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d))
    code, out, _ = call("verify", str(path))
    assert code == 1 and not json.loads(out)["verified"]
    d = json.loads(call("witness", "--q", "3", "--a", "2,4")[1])
    d["witness"]["modulus"] = 31
    d["witness"]["construction"]["prime"] = 31  # 4^3 = 2 mod 31
    path.write_text(json.dumps(d))
    assert call("verify", str(path))[0] == 1


def test_hensel_structured_failure():
    d = doc_of("hensel", "--q", "3", "--a", "4", "--p", "3", "--b", "5", "--root", "1")
    assert d["lifted"] is None
    assert d["failure"]["kind"] == "hensel_criterion"
    assert d["failure"]["value_valuation"] == 1


def test_mine_stream(tmp_path):
    code, out, _ = call("mine", "--q", "3", "--bound", "100")
    assert code == 0
    lines = out.splitlines()
    docs = [json.loads(x) for x in lines]
    assert all(d["report"]["verdict"] == "intersective" for d in docs)
    pairs = [(d["p1"], d["p2"]) for d in docs]
    assert pairs == sorted(pairs)
    path = tmp_path / "mine.jsonl"
    path.write_text(out)
    d = doc_of("verify", str(path))
    assert d["verified"] and d["documents"] == len(lines)


def test_minlc_output():
    d = doc_of("minlc", "--q", "5", "--k", "2")
    assert d["min_covering_size"] == 6 and not d["covers_with_q"]
