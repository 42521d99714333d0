import csv
import io
import json
import math

import pytest

from coulomb_infolab import cli
from coulomb_infolab.errors import ConvergenceError
from coulomb_infolab.laguerre_core import EULER_GAMMA


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.reader(io.StringIO(text)))


def test_report_ground_state(capsys):
    code, out, _ = run(capsys, "report", "--n", "1", "--Z", "1")
    assert code == 0
    data = json.loads(out)
    assert data["disequilibrium"]["exact"] == "3/8" and data["disequilibrium"]["approx"] == 0.375
    assert data["moments"]["1"]["exact"] == "1/1"
    assert data["power_moments"]["1"]["exact"] == "3/2"
    assert data["lengths"]["fisher"] == 0.5
    assert data["bounds"]["shannon"]["k"] == 3


def test_report_complexity_z_independent(capsys):
    values = []
    for z in ("1", "2.5"):
        code, out, _ = run(capsys, "report", "--n", "2", "--Z", z, "--k-max", "0")
        assert code == 0
        data = json.loads(out)
        assert "bounds" not in data
        values.append(data["complexity"])
    assert values[0] == pytest.approx(values[1], rel=1e-12)


def test_report_invalid_n(capsys):
    code, out, err = run(capsys, "report", "--n", "0")
    assert code == 2 and out == ""
    assert "n >= 1" in err


@pytest.mark.parametrize("argv", [
    ("report", "--n", "1", "--Z", "-1"),
    ("report", "--n", "1", "--q", "1"),
    ("scan", "--n-range", "3:1"),
    ("scan", "--n-range", "x"),
    ("figure", "9"),
])
def test_config_errors_exit_2(capsys, argv):
    # argparse rejects some of these itself via SystemExit(2)
    try:
        code = cli.main(list(argv))
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_threads_env_validated(capsys, monkeypatch):
    monkeypatch.setenv("COULOMB_INFOLAB_THREADS", "many")
    code, _, err = run(capsys, "scan", "--n-range", "1:2", "--k-max", "0")
    assert code == 2 and "COULOMB_INFOLAB_THREADS" in err


def test_capacity_exit_3(capsys):
    code, _, err = run(capsys, "report", "--n", "1200", "--k-max", "0")
    assert code == 3 and "4000" in err


def test_convergence_exit_4(capsys, monkeypatch):
    def fail(*a, **k):
        raise ConvergenceError("did not converge", value=1.0, estimate=0.5)

    monkeypatch.setattr(cli.ms, "state_report", fail)
    code, _, err = run(capsys, "report", "--n", "3")
    assert code == 4 and "converge" in err


def test_figure_headers(capsys):
    for fig, cols in cli.FIGURE_COLUMNS.items():
        code, out, _ = run(capsys, "figure", str(fig), "--n-range", "1:2", "--q", "2", "3", "--k-max", "30")
        assert code == 0
        rows = read_csv(out)
        assert tuple(rows[0]) == cols
        assert all(len(r) == len(cols) for r in rows)


def test_figure6_ground_row(capsys):
    code, out, _ = run(capsys, "figure", "6", "--n-range", "1")
    rows = read_csv(out)
    row = dict(zip(rows[0], rows[1]))
    assert float(row["L^S"]) == pytest.approx(math.exp(2 * EULER_GAMMA), rel=1e-13)
    assert float(row["δx"]) == 0.5
    assert float(row["L_2^R"]) == 8 / 3
    # standard deviation from the moments, sqrt(3)/2 at n=1
    assert float(row["Δx"]) == pytest.approx(math.sqrt(3) / 2, rel=1e-15)
    assert row["L^S"] == format(float(row["L^S"]), ".17g")


def test_figure_defaults_and_trends(capsys):
    code, out, _ = run(capsys, "figure", "1")
    rows = read_csv(out)[1:]
    assert [int(r[0]) for r in rows] == list(range(1, 11))
    ks = [int(r[1]) for r in rows]
    assert ks == sorted(ks)
    code, out, _ = run(capsys, "figure", "4", "--n-range", "1,2")
    rows = read_csv(out)[1:]
    assert len(rows) == 2 * len(cli.FIG4_Q)
    for n in ("1", "2"):
        series = [float(r[2]) for r in rows if r[0] == n]
        steps = [a - b for a, b in zip(series, series[1:])]
        assert all(s > 0 for s in steps) and steps[-1] < steps[0] / 10


def test_figure5_monotone(capsys):
    code, out, _ = run(capsys, "figure", "5", "--n-range", "1:40")
    rows = read_csv(out)[1:]
    for col in (1, 2):
        values = [float(r[col]) for r in rows]
        assert all(a < b for a, b in zip(values, values[1:]))


def test_determinism_and_sidecar(tmp_path, capsys, monkeypatch):
    outputs = []
    for threads, name in (("1", "a.csv"), ("4", "b.csv"), ("1", "c.csv")):
        monkeypatch.setenv("COULOMB_INFOLAB_THREADS", threads)
        path = tmp_path / name
        assert cli.main(["figure", "2", "--n-range", "1:6", "-o", str(path)]) == 0
        outputs.append(path.read_bytes())
        meta = json.loads((tmp_path / (name + ".meta.json")).read_text())
        assert meta["threads"] == int(threads) and meta["argv"][0] == "figure"
    assert outputs[0] == outputs[1] == outputs[2]
    assert capsys.readouterr().out == ""


def test_report_json_deterministic(capsys):
    first = run(capsys, "report", "--n", "4", "--q", "2", "2.5")[1]
    second = run(capsys, "report", "--n", "4", "--q", "2", "2.5")[1]
    assert first == second
    data = json.loads(first)
    assert "exact" not in data["moments"]["2.5"] and "exact" in data["moments"]["2"]


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--n-range", "1:3", "--k-max", "10")
    rows = read_csv(out)
    assert code == 0 and len(rows) == 4
    header = rows[0]
    assert "disequilibrium.exact" in header
    col = header.index("disequilibrium.exact")
    assert [r[col] for r in rows[1:]] == ["3/8", "33/256", "17/256"]


def test_validate_filter(capsys):
    code, out, _ = run(capsys, "validate", "--only", "disequilibrium", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert data["checks"] and {c["group"] for c in data["checks"]} == {"disequilibrium"}


def test_validate_impossible_tolerance(capsys):
    code, out, _ = run(capsys, "validate", "--only", "functionals", "moments", "--tolerance", "1e-20",
                       "--format", "json")
    data = json.loads(out)
    assert code == 1 and not data["passed"]
    failed = [c["name"] for c in data["checks"] if not c["passed"]]
    assert "iq_quadrature_agreement" in failed
    # exact checks ignore the tolerance override
    assert all(c["passed"] for c in data["checks"] if c["name"] == "lauricella_equals_expansion")


def test_validate_text_and_observations(capsys):
    code, out, _ = run(capsys, "validate", "--only", "laguerre", "--observations")
    assert code == 0
    assert out.splitlines()[0].startswith("PASS")
    assert "checks passed" in out and "crossover" in out
