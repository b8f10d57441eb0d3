import io
import json

import pytest

from perfcx.cli import run
from perfcx.complexes import direct_sum, homology, moore, shift
from perfcx.generation import plan
from perfcx.invariants import ThickSupport, report
from perfcx.matrix import Matrix
from perfcx.normal_forms import snf_full
from perfcx.rings import ZZ
from perfcx.serialize import certificate_to_doc, complex_to_doc, dumps, profile_to_doc


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return _write


def test_homology_matches_the_library(write):
    X = direct_sum(moore(ZZ, 12), shift(moore(ZZ, 9), 1))
    code, out, _ = cli("homology", "--file", write("x.json", complex_to_doc(X)), "--out", "json")
    assert code == 0 and json.loads(out) == profile_to_doc(ZZ, homology(X))


def test_invariants_and_k0(write):
    X = moore(ZZ, 8)
    f = write("x.json", complex_to_doc(X))
    code, out, _ = cli("invariants", "--file", f, "--out", "json")
    assert code == 0 and json.loads(out) == report(X)
    code, out, _ = cli("k0", "--ring", "Z", "--support", "2,3", "--file", f, "--out", "json")
    assert code == 0 and json.loads(out) == {"rank": 2, "basis": ["[M(2)]", "[M(3)]"], "class": [3, 0]}


def test_cangen_text_and_json(write):
    target = write("y.json", complex_to_doc(moore(ZZ, 4)))
    code, out, _ = cli("cangen", "--gen", "moore:2", "--target", target)
    assert code == 0 and out.splitlines()[:2] == ["verdict: yes", "lambda_2: 1 | 2"]
    small = write("m2.json", complex_to_doc(moore(ZZ, 2)))
    code, out, _ = cli("cangen", "--gen-file", target, "--target", small, "--out", "json")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "no" and doc["rows"][0]["divides"] is False


def test_plan_then_verify(write):
    target = write("y.json", complex_to_doc(moore(ZZ, 72)))
    code, out, _ = cli("plan", "--support", "2,3", "--target", target, "--strategy", "kill", "--out", "json")
    assert code == 0
    cert = json.loads(out)
    expected = certificate_to_doc(plan(ZZ, ThickSupport.primes([2, 3]), moore(ZZ, 72), "kill"))
    assert cert == json.loads(dumps(expected))
    code, out, _ = cli("verify", "--file", write("c.json", cert), "--out", "json")
    assert code == 0 and json.loads(out)["ok"] is True


def test_tampered_certificate_exits_2(write):
    target = write("y.json", complex_to_doc(moore(ZZ, 4)))
    _, out, _ = cli("plan", "--support", "2", "--target", target, "--out", "json")
    cert = json.loads(out)
    cert["claimed"] = {"0": {"free": 0, "factors": ["8"]}}
    code, out, err = cli("verify", "--file", write("bad.json", cert), "--out", "json")
    assert code == 2 and json.loads(out)["ok"] is False and "VerificationFailed" in err


def test_verify_batch_keeps_order(write):
    good = json.loads(dumps(certificate_to_doc(plan(ZZ, ThickSupport.primes([3]), moore(ZZ, 9)))))
    bad = json.loads(json.dumps(good))
    bad["claimed"] = {}
    docs = [good, bad, good, good, bad]
    code, out, _ = cli("verify", "--batch", write("b.json", docs), "--out", "json")
    assert code == 2
    assert [r["ok"] for r in json.loads(out)["reports"]] == [True, False, True, True, False]


def test_classify_and_snf(write):
    code, out, _ = cli("classify", "--multiple", "6", "--support", "Full", "--out", "json")
    assert code == 0 and json.loads(out) == {"ideal": True, "prime": False, "maximal": False, "submodule": True}
    rows = [[2, 4], [6, 8]]
    code, out, _ = cli("snf", "--file", write("m.json", rows), "--out", "json")
    s = snf_full(Matrix.from_rows(ZZ, rows))
    assert code == 0 and json.loads(out)["diag"] == [str(x) for x in s.diag] == ["2", "4"]


def test_pgroup_check_text(write):
    doc = {"p": 2, "groups": {"1": [2], "0": [2]}, "diff": {"1": [[2]]}}
    code, out, _ = cli("pgroup-check", "--file", write("c.json", doc))
    assert code == 0 and out.strip() == "lhs=0 rhs=0 equal=yes"


def test_selftest_is_deterministic():
    a = cli("selftest", "--seed", "7", "--cases", "3", "--out", "json")
    b = cli("selftest", "--seed", "7", "--cases", "3", "--out", "json")
    assert a == b and a[0] == 0
    assert all(json.loads(a[1])["suites"].values())


def test_json_output_is_byte_stable(write):
    f = write("x.json", complex_to_doc(moore(ZZ, 12)))
    outs = {cli("invariants", "--file", f, "--out", "json")[1] for _ in range(3)}
    assert len(outs) == 1


def test_error_exit_codes(write, tmp_path):
    code, out, err = cli("bogus")
    assert code == 1 and "UnknownCommand" in err
    code, out, err = cli("homology", "--file", str(tmp_path / "missing.json"), "--out", "json")
    assert code == 1 and json.loads(out)["error"] == "MalformedInput"
    bad = write("bad.json", {"ring": "Z", "ranks": {"0": 1, "1": 1}, "diff": {"1": [[1, 2]]}})
    code, out, err = cli("homology", "--file", bad, "--out", "json")
    assert code == 1 and json.loads(out)["location"] == "$.diff.1"
    f = write("x.json", complex_to_doc(moore(ZZ, 5)))
    code, _, err = cli("k0", "--ring", "Z", "--support", "2", "--file", f)
    assert code == 2 and err.startswith("error: UnsupportedSupport")
    code, _, err = cli("homology")
    assert code == 1


def test_top_level_help():
    code, out, _ = cli("--help")
    assert code == 0 and "cangen" in out and "selftest" in out
