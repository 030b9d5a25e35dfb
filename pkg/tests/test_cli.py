import csv
import io
import json

import pytest

from renyi_parry.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_inline_json(capsys):
    code, out, _ = run(capsys, "expand", "1,1,0,-1,-1,-1,-1,-1,0,1,1", "--json")
    assert code == 0
    rec = json.loads(out)
    assert rec["pattern"] == "0.1(0^{10} 1 0^{18} 1 0^{12} 1 0^{18} 1 0^{12})^w"


def test_expand_file(capsys, tmp_path):
    p = tmp_path / "polys.txt"
    p.write_text("# two bases\n1 -1 -1 -1 1\n-1 -1 0 1\n")
    code, out, _ = run(capsys, "expand", str(p), "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["pattern"] for r in rows] == ["0.1(1 0^{2})^w", "0.1 0^{3} 1"]


def test_classify_budget_flag(capsys):
    code, out, _ = run(capsys, "classify", "1 1 0 -1 -1 -1 -1 -1 0 1 1", "--budget", "20")
    assert code == 1 and "UnknownWithinBudget" in out
    code, out, _ = run(capsys, "classify", "1 1 0 -1 -1 -1 -1 -1 0 1 1")
    assert code == 0 and "preperiod=1" in out and "period=74" in out


def test_zeta(capsys):
    code, out, _ = run(capsys, "--format", "json", "zeta", "-1 -1 0 1", "--at", "0.5")
    assert code == 0
    rec = json.loads(out)
    assert rec["identity_holds"] is True and "value" in rec


def test_trinomial(capsys):
    code, out, _ = run(capsys, "trinomial", "--n", "10..12", "--format", "json")
    assert code == 0
    recs = json.loads(out)
    assert [r["p_n"] for r in recs] == [3, 3, 5]
    assert recs[2]["theta_inv"].startswith("1.17295")


def test_trinomial_asymptotics(capsys):
    code, out, _ = run(capsys, "trinomial", "--n", "18..20", "--asymptotics")
    assert code == 0 and "max_deviation" in out


def test_rouche(capsys):
    code, out, _ = run(capsys, "rouche", "--n", "31..32", "--certify", "--format", "json")
    assert code == 0
    a, b = json.loads(out)
    assert a["verdict"] == "Failed" and b["verdict"] == "Certified"
    code, out, _ = run(capsys, "rouche", "--n", "12", "--certify")
    assert "NotApplicable" in out


def test_lenticulus(capsys):
    code, out, _ = run(capsys, "lenticulus", "--n", "37", "--series", "exps:1,37,73,146",
                       "--sector", "10", "--band", "0.8,1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    zeros = [(float(r["re"]), float(r["im"])) for r in rows if r["kind"] == "f_zero"]
    assert any(abs(x - 0.938471) < 1e-5 and abs(y - 0.134512) < 1e-5 for x, y in zeros)
    assert sum(1 for r in rows if r["kind"] == "Gn_root") == 3


def test_trail(capsys):
    code, out, _ = run(capsys, "trail", "--poly", "1 -1 -1 -1 1", "--s", "8,12", "--format", "json")
    assert code == 0
    recs = json.loads(out)
    assert [r["s"] for r in recs] == [8, 12]
    assert all(r["identity_holds"] for r in recs)


def test_table2(capsys):
    code, out, _ = run(capsys, "table2", "--format", "json")
    assert code == 0
    assert json.loads(out)["mismatch_count"] == 0


def test_table1_exit_code_and_out(capsys, tmp_path):
    target = tmp_path / "t1.json"
    code, out, _ = run(capsys, "table1", "--format", "json", "--out", str(target))
    assert code == 1 and out == ""
    assert len(json.loads(target.read_text())["rows"]) == 27


def test_constants_text(capsys):
    code, out, _ = run(capsys, "constants")
    assert code == 0 and "theta_31_inverse=1.08544" in out


def test_global_flag_positions(capsys):
    code, _, _ = run(capsys, "--precision-cap", "4096", "table2")
    assert code == 0
    code, _, _ = run(capsys, "table2", "--precision-cap", "4096", "--format", "csv")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["expand", "1 x 1"],
    ["trinomial", "--n", "5..2"],
    ["lenticulus", "--series", "bogus:1", "--sector", "10", "--band", "0.8,1"],
    ["lenticulus", "--series", "exps:3", "--sector", "10", "--band", "x"],
    ["nonsense"],
    ["expand", "/nonexistent/dir/file"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_help_is_success(capsys):
    assert main(["--help"]) == 0
