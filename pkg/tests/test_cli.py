import csv
import io
import json
import math

import pytest

from fccs import cli
from fccs.cli import emit, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_emit_complex_json():
    buf = io.StringIO()
    emit([{"value": 2 + 0j}], "json", buf)
    assert json.loads(buf.getvalue()) == {"value": {"re": 2.0, "im": 0.0}}


def test_emit_nan_is_explicit():
    buf = io.StringIO()
    emit([{"value": complex(math.nan, 0.0), "err": math.nan}], "json", buf)
    rec = json.loads(buf.getvalue())
    assert rec["value"]["re"] == "nan" and rec["err"] == "nan"
    buf = io.StringIO()
    emit([{"err": math.nan}], "csv", buf)
    assert buf.getvalue().splitlines() == ["err", "nan"]


def test_emit_full_precision():
    buf = io.StringIO()
    x = 0.1 + 0.2
    emit([{"x": x}], "csv", buf)
    assert float(buf.getvalue().splitlines()[1]) == x


def test_weights_csv(capsys):
    code, out, _ = run(capsys, "weights", "--omega", "10", "--max-degree", "3", "--check-oracle")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [r["n"] for r in rows] == ["0", "1", "2", "3"]
    assert float(rows[0]["W_re"]) == pytest.approx(2 * math.sin(10) / 10, abs=1e-15)
    assert all(float(r["oracle_diff"]) < 1e-12 for r in rows)


def test_weights_oracle_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "ORACLE_TOL", 0.0)
    code, _, _ = run(capsys, "weights", "--omega", "10", "--max-degree", "3", "--check-oracle")
    assert code == 1


def test_quad1d_reports_error(capsys):
    code, out, _ = run(capsys, "quad1d", "--omega", "5", "--level", "3", "--fn", "squares")
    rec = json.loads(out)
    assert code == 0 and rec["abs_err"] < 1e-15 and rec["nodes"] == 5


def test_fccs_json(capsys):
    code, out, _ = run(capsys, "fccs", "--k", "101.53", "--a", "1,1,1", "--r", "4", "--fn", "cosprod:2", "--ref-r", "10")
    rec = json.loads(out)
    assert code == 0
    assert set(rec) == {"value", "nodes", "abs_err", "rel_err"}
    assert rec["rel_err"] == pytest.approx(4.10e-2, rel=0.05)


def test_params_flag_equivalent(capsys):
    _, a, _ = run(capsys, "fccs", "--k", "20", "--a", "1,1", "--r", "3", "--fn", "cosprod:3")
    _, b, _ = run(capsys, "fccs", "--k", "20", "--a", "1,1", "--r", "3", "--fn", "cosprod", "--params", "3")
    assert a == b


def test_adaptive_json(capsys):
    code, out, _ = run(capsys, "adaptive", "--k", "101.53", "--a", "1,2", "--tol", "1e-3", "--fn", "const")
    rec = json.loads(out)
    assert code == 0 and rec["status"] == "converged" and rec["indices"][0] == [1, 1]
    assert rec["abs_err"] < 1e-13


def test_helmholtz_with_fem(capsys):
    code, out, _ = run(capsys, "helmholtz", "--k", "32", "--field", "builtin", "--y", "0.5,-0.5", "--fem", "--fem-h", "0.0001220703125")
    rec = json.loads(out)
    assert code == 0 and rec["diff"] < 1e-3


def test_uq_json(capsys):
    code, out, _ = run(capsys, "uq", "--k", "64", "--d", "6", "--method", "adaptive:0.00125")
    rec = json.loads(out)
    assert code == 0
    assert (rec["N_mu"], rec["N_nu"], rec["N_F"], rec["N_tot"]) == (141, 81, 13, 235)


def test_global_flags_on_either_side(capsys):
    _, a, _ = run(capsys, "--format", "csv", "fccs", "--k", "20", "--a", "1", "--r", "3", "--fn", "const")
    _, b, _ = run(capsys, "fccs", "--k", "20", "--a", "1", "--r", "3", "--fn", "const", "--format", "csv")
    assert a == b and a.startswith("value_re,value_im")


def test_unknown_integrand_is_usage_error(capsys):
    code, _, err = run(capsys, "fccs", "--k", "20", "--a", "1", "--r", "3", "--fn", "nope")
    assert code == 2 and "unknown integrand" in err


def test_bad_arguments_are_usage_errors(capsys):
    assert run(capsys, "fccs", "--k", "20")[0] == 2
    assert run(capsys, "uq", "--k", "8", "--d", "2", "--method", "mc:3")[0] == 2
    assert run(capsys, "--jobs", "0", "table", "T1")[0] == 2


def test_gated_table_refused_with_cost(capsys):
    code, _, err = run(capsys, "table", "T11")
    assert code == 2 and "--expensive" in err and "solves" in err


def test_table_csv_is_deterministic(capsys):
    _, a, _ = run(capsys, "table", "T1")
    _, b, _ = run(capsys, "--jobs", "3", "table", "T1")
    assert a == b
    rows = list(csv.DictReader(io.StringIO(a)))
    assert rows[0].keys() >= {"table", "k", "r", "computed", "expected", "pass"}
    assert all(r["pass"] == "True" for r in rows)


def test_table_writes_file(capsys, tmp_path):
    out = tmp_path / "t7.csv"
    assert run(capsys, "table", "T7", "--out", str(out))[0] == 0
    assert out.read_text().startswith("table,method,quantity")


@pytest.mark.parametrize(
    "command, expected",
    [
        ("helmholtz", ["default: 1)", "default: 1024)", "default: 10)"]),
        ("uq", ["default: 1)", "default: 1024)", "default: 10)", "default: 10000)"]),
        ("adaptive", ["default: 10000)", "default: midpoint)"]),
        ("fccs", ["--ref-r", "--level1", "--format", "--jobs", "--expensive"]),
        ("weights", ["--check-oracle", "--max-degree"]),
        ("quad1d", ["--omega", "--level", "--params"]),
        ("table", ["--out", "--expensive"]),
    ],
)
def test_help_lists_flags_and_defaults(capsys, command, expected):
    code, out, _ = run(capsys, command, "--help")
    assert code == 0
    for text in expected:
        assert text in out
