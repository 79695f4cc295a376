"""Command line surface.

    l1impute impute    --in series.csv [--method l1-exact] [--mask-p 0.5 --seed 7]
    l1impute diagnose  --in series.csv --mask-size 20 --s-size 8
    l1impute mask      --n 100 --model generic --p 0.3 --seed 1
    l1impute bench     --config bench.yaml
    l1impute hoeffding --n 256 --p 0.3

Exit codes: 0 success, 1 solver non-convergence (outputs still written),
2 input or configuration error. Errors are reported on stderr as one JSON
object ``{"error": <class>, "message": <text>}``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import List, Optional, Sequence, Tuple

import numpy as np

from l1impute import baselines, diagnostics, evaluation, solver
from l1impute.config import ImputeConfig, load_config
from l1impute.errors import DataError, ImputeError, ParameterError
from l1impute.mask import (
    Mask,
    generic_mask,
    load_mask,
    mask_from_missing_values,
    mask_to_text,
    save_mask,
    uniform_mask,
)
from l1impute.spectral import Signal

from . import bench as bench_mod
from . import series_io


_LOGGER = logging.getLogger("l1impute_tools.cli")

EXIT_OK = 0
EXIT_NOT_CONVERGED = 1
EXIT_INPUT_ERROR = 2

IMPUTE_METHODS = ("l1-exact", "l1-loose", "l1-noisy", "linear", "trig")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise ParameterError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="YAML configuration file")
    parser.add_argument("--log-level", help="overrides logging.level from the config")


def _add_mask_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--mask", dest="mask_file", help="mask file ('# n=<N>' header, one index per line)")
    group.add_argument("--mask-p", type=float, help="draw a generic mask with this inclusion probability")
    group.add_argument("--mask-size", type=int, help="draw a uniform mask of this size")
    parser.add_argument("--seed", type=int, default=0)


def _add_constants(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--s-size", type=int, help="size of the concentration set S (default ceil(N/20))")
    parser.add_argument("--gamma0", type=float)
    parser.add_argument("--c-t", type=float)
    parser.add_argument("--c-q", type=float)
    parser.add_argument("--q", type=float)
    parser.add_argument("--t", type=float, help="Hoeffding deviation threshold")
    parser.add_argument("--p", type=float, help="generic-mask probability for the Hoeffding tail")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="l1impute", description="L1 Fourier minimization imputation")
    sub = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)
    sub.required = True

    impute = sub.add_parser("impute", help="fill missing values in a CSV series")
    _add_common(impute)
    impute.add_argument("--in", dest="input", required=True)
    impute.add_argument("--out", help="imputed CSV (default <input>.imputed.csv)")
    impute.add_argument("--report", help="JSON report (default <input>.report.json)")
    impute.add_argument("--truth", help="complete CSV series to evaluate against")
    impute.add_argument("--method", choices=IMPUTE_METHODS, default="l1-exact")
    impute.add_argument("--alpha", type=float, help="constraint radius factor for l1-loose")
    impute.add_argument("--noise-delta", type=float, help="noise level for l1-noisy")
    impute.add_argument("--harmonics", type=int, help="degree of the trigonometric fit")
    impute.add_argument("--cyclic", action="store_true", help="wrap linear interpolation around Z_N")
    impute.add_argument("--max-iters", type=int)
    impute.add_argument("--tol", type=float)
    _add_mask_source(impute)
    _add_constants(impute)

    diagnose = sub.add_parser("diagnose", help="concentration, bounds and thresholds for one instance")
    _add_common(diagnose)
    diagnose.add_argument("--in", dest="input", required=True)
    diagnose.add_argument("--out", help="JSON report (default stdout)")
    diagnose.add_argument("--alpha", type=float)
    diagnose.add_argument("--noise-delta", type=float)
    _add_mask_source(diagnose)
    _add_constants(diagnose)

    mask = sub.add_parser("mask", help="draw a random mask file")
    _add_common(mask)
    mask.add_argument("--n", type=int, required=True)
    mask.add_argument("--model", choices=("generic", "uniform"), required=True)
    mask.add_argument("--p", type=float)
    mask.add_argument("--size", type=int)
    mask.add_argument("--seed", type=int, default=0)
    mask.add_argument("--out", help="mask file (default stdout)")

    bench = sub.add_parser("bench", help="run the imputation benchmark described by a config file")
    _add_common(bench)
    bench.add_argument("--out-dir", help="overrides bench.output_dir")

    hoeffding = sub.add_parser("hoeffding", help="emit the Hoeffding tail curve as CSV")
    _add_common(hoeffding)
    hoeffding.add_argument("--n", type=int, required=True)
    hoeffding.add_argument("--p", type=float, required=True)
    hoeffding.add_argument("--f-inf", type=float, default=1.0)
    hoeffding.add_argument("--t-max", type=float, default=1.0)
    hoeffding.add_argument("--points", type=int, default=50)
    hoeffding.add_argument("--out", help="CSV file (default stdout)")
    return parser


def _configure_logging(config: ImputeConfig, override: Optional[str]) -> None:
    level = str(override or config.logging.level or "INFO").upper()
    root = logging.getLogger()
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        root.addHandler(handler)
    root.setLevel(getattr(logging, level, logging.INFO))


def _apply_overrides(config: ImputeConfig, args: argparse.Namespace) -> None:
    constants = config.constants
    for attr, name in (("gamma0", "gamma0"), ("c_t", "c_t"), ("c_q", "c_q"), ("q", "q")):
        value = getattr(args, name, None)
        if value is not None:
            setattr(constants, attr, value)
    diag = config.diagnostics
    for name in ("s_size", "t", "p", "alpha", "noise_delta"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(diag, name, value)
    if getattr(args, "max_iters", None) is not None:
        config.solver.max_iters = args.max_iters
    if getattr(args, "tol", None) is not None:
        config.solver.tol = args.tol
    if getattr(args, "harmonics", None) is not None:
        config.baselines.harmonics = args.harmonics
    if getattr(args, "cyclic", False):
        config.baselines.cyclic = True
    config.solver.validate()


def _stem(path: str) -> str:
    root, _ = os.path.splitext(path)
    return root


def _resolve_mask(args: argparse.Namespace, values: List[Optional[float]], config: ImputeConfig) -> Tuple[Signal, Mask]:
    """Observed signal (placeholders at masked indices) and the combined mask."""
    n = len(values)
    if args.mask_file:
        drawn = load_mask(args.mask_file)
    elif args.mask_p is not None:
        drawn = generic_mask(n, args.mask_p, args.seed, gamma0=config.constants.gamma0)
    elif args.mask_size is not None:
        drawn = uniform_mask(n, args.mask_size, args.seed)
    else:
        drawn = Mask.empty(n)
    if drawn.n != n:
        raise DataError(f"mask is for n={drawn.n} but the series has {n} values")
    hidden = set(drawn.indices)
    combined = [None if i in hidden else v for i, v in enumerate(values)]
    return mask_from_missing_values(combined)


def _s_size(config: ImputeConfig, n: int) -> int:
    return bench_mod.default_s_size(config, n)


def _diagnostic_params(config: ImputeConfig) -> dict:
    diag = config.diagnostics
    params = dict(config.constants.__dict__)
    params.update(
        {
            "t": diag.t,
            "p": diag.p,
            "alpha": diag.alpha,
            "noise_delta": diag.noise_delta,
            "support_tol": diag.support_tol,
            "mae_target": diag.mae_target,
            "bourgain_eps": diag.bourgain_eps,
        }
    )
    return params


def _impute_diagnostics(subject: Signal, mask: Mask, config: ImputeConfig) -> Optional[dict]:
    try:
        report = diagnostics.full_report(subject, mask, _s_size(config, subject.n), _diagnostic_params(config))
    except DataError as exc:
        # An all-zero subject has no concentration; the imputation itself stands.
        _LOGGER.warning("Diagnostics skipped. reason=%s", exc)
        return None
    return diagnostics.report_to_dict(report)


def cmd_impute(args: argparse.Namespace, config: ImputeConfig) -> int:
    data = series_io.read_series(args.input)
    observed, mask = _resolve_mask(args, data.values, config)
    method = args.method
    result = None
    if method == "linear":
        g = baselines.linear_interpolation(observed, mask, cyclic=config.baselines.cyclic)
    elif method == "trig":
        g = baselines.trig_poly_regression(observed, mask, config.baselines.harmonics)
    else:
        if method == "l1-exact":
            result = solver.impute_exact(observed, mask, config.solver)
        elif method == "l1-loose":
            result = solver.impute_loose(observed, mask, config.diagnostics.alpha, config.solver)
        else:
            result = solver.impute_noisy(observed, mask, config.diagnostics.noise_delta, config.solver)
        g = result.g

    truth = None
    if args.truth:
        truth = series_io.complete_signal(series_io.read_series(args.truth), "truth series")
    elif data.complete and mask.size:
        truth = series_io.complete_signal(data, "input series")
    if truth is not None and truth.n != g.n:
        raise DataError(f"truth has {truth.n} values but the series has {g.n}")

    # Diagnostics describe the true series when known, otherwise the imputed one.
    subject = truth if truth is not None else g
    report = {
        "method": method,
        "n": g.n,
        "mask_size": mask.size,
        "solver": result.to_dict() if result is not None else None,
        "diagnostics": _impute_diagnostics(subject, mask, config),
        "evaluation": None,
    }
    if truth is not None and mask.size:
        linear = baselines.linear_interpolation(observed, mask, cyclic=config.baselines.cyclic)
        report["evaluation"] = evaluation.report_to_dict(evaluation.evaluate(truth, g, mask, baseline=linear))

    out_path = args.out or _stem(args.input) + ".imputed.csv"
    report_path = args.report or _stem(args.input) + ".report.json"
    series_io.write_imputed(out_path, g, mask)
    series_io.write_json(report_path, report)
    _LOGGER.info("Imputation written. out=%s report=%s", out_path, report_path)
    if result is not None and not result.converged:
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_diagnose(args: argparse.Namespace, config: ImputeConfig) -> int:
    data = series_io.read_series(args.input)
    f = series_io.complete_signal(data, "input series")
    _, mask = _resolve_mask(args, data.values, config)
    report = diagnostics.full_report(f, mask, _s_size(config, f.n), _diagnostic_params(config))
    payload = diagnostics.report_to_dict(report)
    if args.out:
        series_io.write_json(args.out, payload)
    else:
        sys.stdout.write(series_io.dumps_json(payload))
    return EXIT_OK


def cmd_mask(args: argparse.Namespace, config: ImputeConfig) -> int:
    if args.model == "generic":
        if args.p is None:
            raise ParameterError("--p is required for the generic model")
        drawn = generic_mask(args.n, args.p, args.seed, gamma0=config.constants.gamma0)
    else:
        if args.size is None:
            raise ParameterError("--size is required for the uniform model")
        drawn = uniform_mask(args.n, args.size, args.seed)
    if args.out:
        save_mask(args.out, drawn)
    else:
        sys.stdout.write(mask_to_text(drawn))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, config: ImputeConfig) -> int:
    if args.out_dir:
        config.bench.output_dir = args.out_dir
    result = bench_mod.run_bench(config)
    written = bench_mod.write_outputs(result, config.bench.output_dir)
    _LOGGER.info("Bench outputs written. files=%s", len(written))
    return EXIT_OK if result.all_converged else EXIT_NOT_CONVERGED


def cmd_hoeffding(args: argparse.Namespace, config: ImputeConfig) -> int:
    if args.points < 1 or args.t_max <= 0:
        raise ParameterError("--points must be >= 1 and --t-max > 0")
    # --t-max is in units of ||f||_inf.
    ts = np.linspace(args.t_max / args.points, args.t_max, args.points) * args.f_inf
    rows = [
        {"t_over_f_inf": x, "tail": y}
        for x, y in diagnostics.hoeffding_curve(ts, args.p, args.n, args.f_inf)
    ]
    series_io.write_table(args.out or sys.stdout, rows, ["t_over_f_inf", "tail"])
    return EXIT_OK


COMMANDS = {
    "impute": cmd_impute,
    "diagnose": cmd_diagnose,
    "mask": cmd_mask,
    "bench": cmd_bench,
    "hoeffding": cmd_hoeffding,
}


def _report_error(exc: BaseException) -> None:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = load_config(args.config)
        _configure_logging(config, args.log_level)
        _apply_overrides(config, args)
        return COMMANDS[args.command](args, config)
    except (ImputeError, OSError) as exc:
        _report_error(exc)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
