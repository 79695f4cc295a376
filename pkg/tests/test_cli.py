import json

import numpy as np
import pytest

from l1impute import diagnostics
from l1impute.mask import generic_mask, load_mask, mask_to_text, uniform_mask
from l1impute.spectral import Signal
from l1impute_tools import cli


def _wave(n=32):
    x = np.arange(n)
    return list(20 + 4 * np.cos(2 * np.pi * 3 * x / n) + 2 * np.sin(2 * np.pi * x / n))


def _error(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


def test_impute_fills_missing_cells(tmp_path, series_csv):
    values = _wave()
    values[4] = values[17] = None
    path = series_csv(values)
    out, report = tmp_path / "g.csv", tmp_path / "r.json"
    code = cli.main(["impute", "--in", str(path), "--method", "l1-exact", "--out", str(out), "--report", str(report)])
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "index,value,imputed_flag"
    assert [line.split(",")[2] for line in lines[1:]].count("1") == 2
    payload = json.loads(report.read_text(encoding="utf-8"))
    assert payload["method"] == "l1-exact"
    assert payload["mask_size"] == 2
    assert payload["solver"]["converged"] is True
    assert payload["evaluation"] is None
    assert "epsilon" in payload["diagnostics"]


def test_impute_with_drawn_mask_evaluates_against_input(tmp_path, series_csv):
    path = series_csv(_wave())
    code = cli.main(["impute", "--in", str(path), "--method", "l1-loose", "--alpha", "0.01", "--mask-p", "0.5", "--seed", "7"])
    # Exit 1 only flags a slow solve; the outputs are written either way.
    assert code in (cli.EXIT_OK, cli.EXIT_NOT_CONVERGED)
    payload = json.loads((tmp_path / "series.report.json").read_text(encoding="utf-8"))
    assert payload["mask_size"] == generic_mask(32, 0.5, 7).size
    assert payload["evaluation"]["mae_ratio"] is not None
    assert (tmp_path / "series.imputed.csv").exists()


@pytest.mark.parametrize("method", ["linear", "trig"])
def test_impute_baselines(tmp_path, series_csv, method):
    path = series_csv(_wave())
    code = cli.main(["impute", "--in", str(path), "--method", method, "--mask-size", "6", "--seed", "1"])
    assert code == 0
    payload = json.loads((tmp_path / "series.report.json").read_text(encoding="utf-8"))
    assert payload["solver"] is None
    assert payload["evaluation"]["mae"] >= 0


def test_impute_outputs_are_byte_identical(tmp_path, series_csv):
    path = series_csv(_wave())
    runs = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.csv"
        report = tmp_path / f"{name}.json"
        cli.main(["impute", "--in", str(path), "--mask-p", "0.3", "--seed", "3", "--out", str(out), "--report", str(report)])
        runs.append((out.read_bytes(), report.read_bytes()))
    assert runs[0] == runs[1]


def test_impute_reports_non_convergence(tmp_path, series_csv):
    path = series_csv(_wave())
    code = cli.main(["impute", "--in", str(path), "--mask-size", "8", "--max-iters", "1"])
    assert code == 1
    assert (tmp_path / "series.imputed.csv").exists()


def test_malformed_csv_exits_with_error_json(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("1\nbanana\n", encoding="utf-8")
    assert cli.main(["impute", "--in", str(path)]) == 2
    error = _error(capsys)
    assert error["error"] == "DataError"
    assert "banana" in error["message"]


def test_unknown_flag_is_an_input_error(capsys):
    assert cli.main(["impute", "--bogus"]) == 2
    assert _error(capsys)["error"] == "ParameterError"


def test_mask_command_is_reproducible(tmp_path, capsys):
    assert cli.main(["mask", "--n", "100", "--model", "generic", "--p", "0.3", "--seed", "1"]) == 0
    printed = capsys.readouterr().out
    assert printed == mask_to_text(generic_mask(100, 0.3, 1))
    out = tmp_path / "m.txt"
    assert cli.main(["mask", "--n", "100", "--model", "generic", "--p", "0.3", "--seed", "1", "--out", str(out)]) == 0
    assert out.read_text(encoding="ascii") == printed
    assert load_mask(str(out)) == generic_mask(100, 0.3, 1)


def test_mask_command_rejects_full_uniform_mask(capsys):
    assert cli.main(["mask", "--n", "10", "--model", "uniform", "--size", "10"]) == 2
    assert _error(capsys)["error"] == "ParameterError"


def test_mask_seeds_do_not_collide(tmp_path):
    texts = set()
    for seed in range(200):
        out = tmp_path / f"m{seed}.txt"
        cli.main(["mask", "--n", "100", "--model", "generic", "--p", "0.3", "--seed", str(seed), "--out", str(out)])
        texts.add(out.read_text(encoding="ascii"))
    assert len(texts) == 200


def test_impute_with_mask_file(tmp_path, series_csv):
    path = series_csv(_wave())
    mask_path = tmp_path / "m.txt"
    mask_path.write_text("# n=32\n2\n9\n", encoding="ascii")
    assert cli.main(["impute", "--in", str(path), "--method", "linear", "--mask", str(mask_path)]) == 0
    rows = (tmp_path / "series.imputed.csv").read_text(encoding="utf-8").splitlines()[1:]
    assert [int(r.split(",")[0]) for r in rows if r.endswith(",1")] == [2, 9]


def test_mask_file_length_must_match(tmp_path, series_csv, capsys):
    path = series_csv(_wave())
    mask_path = tmp_path / "m.txt"
    mask_path.write_text("# n=10\n2\n", encoding="ascii")
    assert cli.main(["impute", "--in", str(path), "--mask", str(mask_path)]) == 2
    assert _error(capsys)["error"] == "DataError"


def test_diagnose_constant_series(tmp_path, series_csv):
    path = series_csv([5.0] * 20)
    out = tmp_path / "d.json"
    assert cli.main(["diagnose", "--in", str(path), "--mask-size", "4", "--s-size", "1", "--out", str(out)]) == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["epsilon"] == pytest.approx(0.0, abs=1e-12)
    assert report["m_size"] == 4


def test_diagnose_full_s_size_prints_json(series_csv, capsys):
    path = series_csv(_wave(24))
    assert cli.main(["diagnose", "--in", str(path), "--mask-size", "3", "--s-size", "24", "--c-t", "2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["epsilon"] == 0.0
    assert report["param_c_t"] == 2.0
    assert report["threshold_talagrand"] is not None


def test_diagnose_needs_complete_series(series_csv, capsys):
    path = series_csv([1.0, None, 3.0])
    assert cli.main(["diagnose", "--in", str(path)]) == 2
    assert _error(capsys)["error"] == "DataError"


def test_bench_command(tmp_path):
    data = tmp_path / "series.csv"
    data.write_text("\n".join(repr(float(v)) for v in _wave(40)) + "\n", encoding="utf-8")
    config = tmp_path / "bench.yaml"
    config.write_text(
        "bench:\n"
        "  dataset: series.csv\n"
        "  limit: 40\n"
        "  methods: [linear, l1-exact]\n"
        "  seeds: [0, 1]\n"
        "  workers: 2\n",
        encoding="utf-8",
    )
    code = cli.main(["bench", "--config", str(config), "--out-dir", str(tmp_path / "out")])
    assert code in (cli.EXIT_OK, cli.EXIT_NOT_CONVERGED)
    assert (tmp_path / "out" / "results.csv").exists()
    assert (tmp_path / "out" / "error_diff_l1-exact.csv").exists()


def test_bench_missing_dataset(tmp_path, capsys):
    config = tmp_path / "bench.yaml"
    config.write_text("bench:\n  dataset: nowhere.csv\n", encoding="utf-8")
    assert cli.main(["bench", "--config", str(config)]) == 2
    assert _error(capsys)["error"] == "ConfigError"


def test_bench_empty_seeds(tmp_path, capsys):
    config = tmp_path / "bench.yaml"
    config.write_text("bench:\n  seeds: []\n", encoding="utf-8")
    assert cli.main(["bench", "--config", str(config)]) == 2
    assert _error(capsys)["error"] == "ConfigError"


def test_hoeffding_command(capsys):
    assert cli.main(["hoeffding", "--n", "64", "--p", "0.3", "--points", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t_over_f_inf,tail"
    assert len(lines) == 5
    tails = [float(line.split(",")[1]) for line in lines[1:]]
    assert tails == sorted(tails, reverse=True)


DIAGNOSTICS_KEYS = {
    "n", "m_size", "s_size", "sigma_size", "epsilon", "delta", "delta_prime",
    "concentration_set", "hoeffding_tail",
    "bound_quantitative", "bound_loose", "bound_random", "bound_random_noisy",
    "threshold_donoho_stark", "threshold_talagrand", "threshold_bourgain", "threshold_transference",
    "threshold_bourgain_mask_size", "threshold_random_mask_size", "threshold_mae_budget",
    "threshold_alpha_in_range",
    "param_gamma0", "param_c_t", "param_c_q", "param_q", "param_p", "param_t", "param_alpha",
    "param_noise_delta", "param_support_tol", "param_mae_target", "param_bourgain_eps",
}
REPORT_KEYS = {"method", "n", "mask_size", "solver", "diagnostics", "evaluation"}
SOLVER_KEYS = {"objective", "iterations", "converged", "status", "feasibility_gap", "imag_discarded", "alpha"}
EVALUATION_KEYS = {"mae", "mae_weighted", "mean_abs_h_on_m", "mean_abs_f", "mae_baseline", "mae_ratio", "error_diff"}


def test_diagnostics_report_has_documented_keys():
    f = Signal.time(_wave())
    payload = diagnostics.report_to_dict(diagnostics.full_report(f, uniform_mask(32, 4, 0), 2))
    assert set(payload) == DIAGNOSTICS_KEYS


def test_impute_report_has_documented_keys(tmp_path, series_csv):
    path = series_csv(_wave())
    code = cli.main(["impute", "--in", str(path), "--method", "l1-exact", "--mask-size", "4", "--seed", "2"])
    assert code in (cli.EXIT_OK, cli.EXIT_NOT_CONVERGED)
    payload = json.loads((tmp_path / "series.report.json").read_text(encoding="utf-8"))
    assert set(payload) == REPORT_KEYS
    assert set(payload["solver"]) == SOLVER_KEYS
    assert set(payload["diagnostics"]) == DIAGNOSTICS_KEYS
    assert set(payload["evaluation"]) == EVALUATION_KEYS
    assert len(payload["evaluation"]["error_diff"]) == 4


def test_diagnose_output_has_documented_keys(series_csv, capsys):
    path = series_csv(_wave())
    assert cli.main(["diagnose", "--in", str(path), "--mask-p", "0.3", "--seed", "5"]) == 0
    assert set(json.loads(capsys.readouterr().out)) == DIAGNOSTICS_KEYS


def test_loose_solve_to_zero_still_writes_outputs(tmp_path, series_csv):
    values = _wave()
    values[5] = values[20] = None
    path = series_csv(values)
    # alpha >= 1 lets the all-zero series through the constraint.
    code = cli.main(["impute", "--in", str(path), "--method", "l1-loose", "--alpha", "2"])
    assert code == cli.EXIT_OK
    payload = json.loads((tmp_path / "series.report.json").read_text(encoding="utf-8"))
    assert payload["diagnostics"] is None
    assert payload["solver"]["objective"] == pytest.approx(0.0, abs=1e-6)
    rows = (tmp_path / "series.imputed.csv").read_text(encoding="utf-8").splitlines()
    assert len(rows) == 33


def test_zero_series_imputes_without_diagnostics(tmp_path, series_csv):
    path = series_csv([0.0] * 16)
    code = cli.main(["impute", "--in", str(path), "--method", "linear", "--mask-size", "3"])
    assert code == cli.EXIT_OK
    payload = json.loads((tmp_path / "series.report.json").read_text(encoding="utf-8"))
    assert payload["diagnostics"] is None
    assert payload["evaluation"]["mae"] == 0.0
    assert payload["evaluation"]["mae_weighted"] is None
    values = [float(r.split(",")[1]) for r in (tmp_path / "series.imputed.csv").read_text(encoding="utf-8").splitlines()[1:]]
    assert values == [0.0] * 16
