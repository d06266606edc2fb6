import csv
import io
import json

import pytest

from torus_harmonics.cli import main
from torus_harmonics.config import RunConfig, thread_count
from torus_harmonics.errors import ConfigError
from torus_harmonics.reports import FindingsEntry, cnum, num, render, render_findings


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_run_config_validation():
    assert RunConfig().qs == (3, 5, 7)
    for bad in (dict(qs=(4,)), dict(qs=(3, 3)), dict(qs=()), dict(tolerance=1e-20),
                dict(tolerance=1e-3), dict(fmt="xml"), dict(seed=-1), dict(qs=(2,))):
        with pytest.raises(ConfigError):
            RunConfig(**bad)


def test_thread_env():
    assert thread_count({}) == 1
    assert thread_count({"TORUS_HARMONICS_THREADS": "4"}) == 4
    for bad in ("0", "x", "-2"):
        with pytest.raises(ConfigError):
            thread_count({"TORUS_HARMONICS_THREADS": bad})


def test_number_formatting():
    assert num(-0.0) == 0.0 and str(num(-1e-17)) == "0.0"
    assert num(1 / 3) == 0.333333333333
    assert cnum(1 + 0j) == "1" and cnum(-2j) == "-2j" and cnum(1 - 1j) == "1-1j"


def test_field_info(capsys):
    code, out, _ = run(capsys, "field-info", "--q", "3")
    info = {r["key"]: r["value"] for r in rows(out)}
    assert code == 0
    assert info["delta"] == "2" and info["order_G"] == "48" and info["double_cosets"] == "3"


def test_chartable(capsys):
    code, out, _ = run(capsys, "chartable", "--q", "5")
    r = rows(out)
    assert code == 0 and len(r) == 24 and len(r[0]) == 3 + 24


def test_doublecosets(capsys):
    code, out, _ = run(capsys, "doublecosets", "--q", "3")
    r = rows(out)
    assert [int(x["size"]) for x in r] == [8, 8, 32]
    assert list(r[0]) == ["coset_id", "size", "rep_a", "rep_b", "rep_c", "rep_d", "diagonal_as"]
    assert r[2]["diagonal_as"] == ""


def test_decompose_csv_and_json_agree(capsys):
    code, out, _ = run(capsys, "decompose", "--q", "3", "--phi", "0")
    r = rows(out)
    assert code == 0 and len(r) == 8
    assert list(r[0]) == ["family", "params", "dim", "mult_oracle", "mult_table1", "match"]
    code, js, _ = run(capsys, "decompose", "--q", "3", "--phi", "0", "--format", "json")
    assert [{k: str(v) for k, v in x.items()} for x in json.loads(js)] == r


def test_spherical(capsys):
    code, out, _ = run(capsys, "spherical", "--q", "5", "--phi", "0", "--lambda", "4")
    r = rows(out)
    assert code == 0 and len(r) == 5
    assert r[0]["value_averaging_re"] == "1.0" and r[0]["residual"] == "0.0"
    assert r[-1]["value_explicit_re"] == "n/a"


def test_uncertainty(capsys):
    code, out, _ = run(capsys, "uncertainty", "--q", "3", "--phi", "1", "--samples", "5",
                       "--seed", "42", "--exhaustive")
    r = rows(out)
    assert code == 0 and len(r) > 5
    assert all(int(x["margin"]) >= 0 for x in r)
    assert r[5]["trial_id"] == "coset0" and r[5]["extremal"] == "yes"


@pytest.mark.parametrize("argv", [
    ["selftest", "--q", "4"], ["selftest", "--q", "3", "--tolerance", "1e-20"],
    ["decompose", "--q", "9", "--phi", "0"], ["spherical", "--q", "3", "--phi", "0", "--lambda", "4"],
    ["spherical", "--q", "3", "--phi", "1", "--lambda", "2"], ["nonsense"], ["decompose", "--q", "3"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_output_file_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["uncertainty", "--q", "5", "--phi", "3", "--samples", "20", "--seed", "9",
                     "--output", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_selftest_q3(tmp_path, capsys):
    out = tmp_path / "rep"
    code, text, _ = run(capsys, "selftest", "--q", "3", "--output", str(out))
    lines = [l for l in text.splitlines() if l.startswith("criterion")]
    assert code == 0
    assert len(lines) == 15
    assert sum(" PASS " in l or " FAIL " in l for l in lines) >= 12
    findings = (out / "FINDINGS.md").read_text(encoding="utf-8")
    for cid in ("table1.onedim", "dcosets.diag-complete", "zeta.a-ne-minus1", "katz.interp-2"):
        assert f"`{cid}`" in findings
    first = {p.name: p.read_bytes() for p in out.iterdir()}
    run(capsys, "selftest", "--q", "3", "--output", str(out))
    assert first == {p.name: p.read_bytes() for p in out.iterdir()}


def test_findings_rendering():
    with pytest.raises(ValueError):
        FindingsEntry("x", "y", "maybe", "-")
    e = FindingsEntry("a.b", "loc", "partial", "- 1 of 2")
    with pytest.raises(ValueError):
        render_findings([e, e], (3,))
    assert render([], "json") == "[]\n"
