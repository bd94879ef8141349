import csv

import numpy as np
import pytest

from qsph import experiments as ex
from qsph.cli import main
from qsph.config import ConfigError, default_config, load_config, parse_config_text
from qsph.plotting import CsvFormatError, emit_plot, read_sweep_csv
from qsph.sph import crossover_c, crossover_dx


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def small_fig5(tmp_path):
    return default_config("fig5", c_points=12, output_dir=str(tmp_path))


def test_fig5_csv(small_fig5):
    rows = read_rows(ex.run_fig5(small_fig5))
    assert rows and list(rows[0]) == list(ex.CSV_COLUMNS)
    for r in rows:
        assert abs(float(r["quantum_u0"]) + float(r["quantum_u1"]) - 1) <= 1e-10
        assert float(r["abs_error"]) <= 1e-10
        assert float(r["crossover"]) == pytest.approx(crossover_c(1.2, 0.5, 1), abs=1e-12)
    at_cross = [r for r in rows if float(r["c"]) == pytest.approx(1.44, abs=1e-12)]
    assert len(at_cross) == 4
    for r in at_cross:
        assert float(r["quantum_u0"]) == pytest.approx(0.5, abs=1e-9)
        assert float(r["quantum_u1"]) == pytest.approx(0.5, abs=1e-9)
    for r in rows:
        if float(r["c"]) == pytest.approx(1e-4):
            assert float(r["quantum_u0"]) == pytest.approx(float(r["u0_init"]), abs=5e-5)
            assert float(r["quantum_u1"]) == pytest.approx(float(r["u1_init"]), abs=5e-5)


def test_fig6_csv(tmp_path):
    cfg = default_config("fig6", output_dir=str(tmp_path))
    rows = read_rows(ex.run_fig6(cfg))
    assert {float(r["c"]) for r in rows} == {0.5, 1.0, 2.0}
    for r in rows:
        c, dx = float(r["c"]), float(r["dx"])
        cross = crossover_dx(1.4, c, 1)
        assert (r["crossover"] == "") == (cross is None)
        if cross is not None:
            assert float(r["crossover"]) == pytest.approx(cross, abs=1e-12)
        if dx >= 1.4:
            assert float(r["classical_u0"]) == float(r["u0_init"])
            assert float(r["classical_u1"]) == float(r["u1_init"])
            assert abs(float(r["quantum_u0"]) - float(r["u0_init"])) <= 1e-13
        if c == 2 and (float(r["u0_init"]), float(r["u1_init"])) == (0.2, 0.0) and 0.98 + 1e-9 < dx < 1.4:
            assert float(r["quantum_u0"]) < 0 and r["unstable"] == "1"
    marked = [r for r in rows if float(r["c"]) == 2 and float(r["dx"]) == pytest.approx(0.49, abs=1e-12)]
    assert marked


def test_fig6_unstable_example():
    row = ex.evaluate_point("fig6", "dx", 1.2, 0.2, 0.0, 2.0, 1.2, 1.4, 1.0, 1, 0.49)
    assert row.classical_u0 == pytest.approx(0.2 * (1 - 2 * 1.2 / 1.96), abs=1e-15)
    assert row.quantum_u0 < 0 and row.unstable


def test_fig7_csv(tmp_path):
    cfg = default_config("fig7", c_points=15, output_dir=str(tmp_path))
    rows = read_rows(ex.run_fig7(cfg))
    assert {int(r["T"]) for r in rows} == {1, 2, 3}
    for r in rows:
        assert abs(float(r["quantum_u0"]) + float(r["quantum_u1"]) - 1.2) <= 1e-10
        assert float(r["abs_error"]) <= 1e-10
    row = ex.evaluate_point("fig7", "c", 1, 0.8, 0.4, 1.0, 0.2, 1.2, 1.0, 2, None)
    assert (row.quantum_u0, row.quantum_u1) == pytest.approx((0.704320987654321, 0.495679012345679), abs=1e-13)


def test_csv_is_deterministic(tmp_path):
    a = default_config("fig7", c_points=5, output_dir=str(tmp_path / "a"))
    b = default_config("fig7", c_points=5, output_dir=str(tmp_path / "b"))
    assert ex.run_fig7(a).read_bytes() == ex.run_fig7(b).read_bytes()


def test_csv_full_precision(small_fig5):
    rows = read_rows(ex.run_fig5(small_fig5))
    val = rows[3]["quantum_u0"]
    assert float(val) == float(format(float(val), ".17g"))


def test_compare_report(tmp_path):
    cfg = default_config("compare", c_points=6, output_dir=str(tmp_path))
    report = ex.run_compare(cfg)
    assert report.ok
    assert set(report.max_errors) == {1, 2, 3}
    assert report.max_errors[1] < 1e-12
    assert report.max_errors[3] < 1e-10


def test_compare_negative_control(tmp_path):
    cfg = default_config("compare", c_points=4, T=(1,), coin_perturbation=0.01, output_dir=str(tmp_path))
    report = ex.run_compare(cfg)
    assert not report.ok
    assert any("worst at" in line for line in report.lines())


def test_invariants_suite(tmp_path):
    cfg = default_config("invariants", n_cases=40, output_dir=str(tmp_path))
    path, results = ex.run_invariants(cfg)
    assert all(r.passed for r in results)
    assert len(read_rows(path)) == len(results)


def test_config_parsing(tmp_path):
    text = """
    # comment
    c_min = 1e-3
    c_points = 7
    initial_conditions = 1,0; (0.5, 0.5)
    T = 1, 2
    emit_plots = yes
    """
    vals = parse_config_text(text)
    assert vals == {"c_min": 1e-3, "c_points": 7, "initial_conditions": ((1.0, 0.0), (0.5, 0.5)),
                    "T": (1, 2), "emit_plots": True}
    p = tmp_path / "cfg.txt"
    p.write_text(text)
    cfg = load_config("fig7", p, seed=3)
    assert cfg.c_points == 7 and cfg.seed == 3 and cfg.h == 1.2


@pytest.mark.parametrize("text,msg", [
    ("nonsense", ":1: expected"),
    ("foo = 1", "unknown key"),
    ("c_points = many", "bad value"),
    ("\ninitial_conditions = 1,2,3", ":2:"),
])
def test_config_errors(text, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config_text(text)


def test_config_validation():
    with pytest.raises(ConfigError):
        default_config("fig5", c_points=1)
    with pytest.raises(ConfigError):
        default_config("fig5", initial_conditions=((0, 0),))
    with pytest.raises(ConfigError):
        default_config("fig5", T=(4,))
    with pytest.raises(ConfigError):
        default_config("nope")


def test_emit_plot_panels(tmp_path):
    cfg = default_config("fig7", c_points=5, output_dir=str(tmp_path))
    svg = emit_plot(ex.run_fig7(cfg), tmp_path / "fig7.svg")
    text = svg.read_text()
    assert text.startswith("<?xml")
    assert text.count("T = ") >= 3


def test_emit_plot_rejects_bad_csv(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(",".join(ex.CSV_COLUMNS) + "\n")
    out = tmp_path / "x.svg"
    with pytest.raises(CsvFormatError):
        emit_plot(empty, out)
    assert not out.exists()
    bad = tmp_path / "bad.csv"
    bad.write_text(",".join(ex.CSV_COLUMNS) + "\n" + "1,2,3\n")
    with pytest.raises(CsvFormatError, match=":2:"):
        read_sweep_csv(bad)
    wrong = tmp_path / "wrong.csv"
    wrong.write_text("a,b\n1,2\n")
    with pytest.raises(CsvFormatError, match=":1:"):
        read_sweep_csv(wrong)


def test_cli_fig5(tmp_path, capsys):
    cfg = tmp_path / "c.txt"
    cfg.write_text("c_points = 5\n")
    assert main(["fig5", "--config", str(cfg), "--out", str(tmp_path), "--plots"]) == 0
    assert (tmp_path / "fig5.csv").exists() and (tmp_path / "fig5.svg").exists()
    assert "max |quantum - classical|" in capsys.readouterr().out


def test_cli_compare_exit_codes(tmp_path, capsys):
    cfg = tmp_path / "c.txt"
    cfg.write_text("c_points = 3\nT = 1\n")
    assert main(["compare", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    cfg.write_text("c_points = 3\nT = 1\ncoin_perturbation = 0.01\n")
    assert main(["compare", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_cli_tolerance_flag(tmp_path):
    cfg = tmp_path / "c.txt"
    cfg.write_text("c_points = 3\nT = 3\n")
    assert main(["compare", "--config", str(cfg), "--out", str(tmp_path), "--tol", "1e-30"]) == 1


def test_cli_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fig9"])
    assert exc.value.code == 2
    assert main(["fig5", "--config", str(tmp_path / "missing.txt")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("bogus = 1\n")
    assert main(["fig5", "--config", str(bad)]) == 2
    assert "unknown key" in capsys.readouterr().err


def test_cli_invariants(tmp_path, capsys):
    cfg = tmp_path / "c.txt"
    cfg.write_text("n_cases = 20\n")
    assert main(["invariants", "--config", str(cfg), "--out", str(tmp_path), "--seed", "5"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 8


def test_crossover_column_is_exact():
    cfg = default_config("fig6", dx_points=10)
    for r in ex.fig6_rows(cfg):
        if r.crossover is not None:
            assert r.crossover == crossover_dx(1.4, r.c, 1)
    assert np.isclose(crossover_c(1.2, 0.5), 1.44)
