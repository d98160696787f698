"""
Command line entry point.

    npgc test      --input data.csv --y-col rp --z-col vrp [...]
    npgc simulate  --dgp P1 --n 100 --seed 3
    npgc mc        --dgp S1,P1 --n 100,200 --bandwidth-c 0.5,1.0 --reps 500 --B 200
    npgc granger   --input data.csv --y-col rp --z-col vrp --horizons 1,3,6,9 --nonparametric

Every failure ends with one stderr line `npgc-error: <Class>: <message>`;
exit code 2 for usage and validation errors, 1 for I/O errors.
"""
import argparse
import json
import sys
import time

import numpy as np

from npgc.config import ExperimentGrid, SimulateConfig, TestConfig, parse_config
from npgc.constants import DEFAULT_BURN_IN, FULL_BOOTSTRAP, FULL_REPS
from npgc.errors import InvalidConfigError, NpgcError
from npgc.eval.dgplib import DgpSpec, simulate_sample
from npgc.eval.empirical import predictability_study
from npgc.eval.mcharness import run_experiment
from npgc.eval.summarize import format_table
from npgc.model.resample import bootstrap_test
from npgc.serve.ingest import load_csv, read_columns
from npgc.serve.report import emit_report, make_report, utc_now
from npgc.utils import build_logger, error_line

logger = build_logger("cli", "cli.log")


class UsageError(NpgcError):
    pass


class ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(message)


def _list(cast):
    def parse(text):
        try:
            return [cast(item) for item in text.split(",") if item.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid list {text!r}") from None
    return parse


def _add_output_args(parser):
    parser.add_argument("--output", type=str, default=None, help="report path (default: stdout)")
    parser.add_argument("--format", type=str, choices=["json", "csv"], default=None)
    parser.add_argument("--config", type=str, default=None, help="JSON file of config values; flags override it")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--stamp", action="store_true", help="add wall-clock timestamps to the provenance block")


def _add_test_args(parser, bandwidth_list=False):
    cast = _list(float) if bandwidth_list else float
    parser.add_argument("--bandwidth-c", type=cast, default=None)
    parser.add_argument("--bandwidth", type=str, choices=["auto", "fixed"], default=None)
    parser.add_argument("--weight-family", type=str, choices=["indicator", "sine", "complex_exp"], default=None)
    parser.add_argument("--bootstrap", type=str, choices=["multiplier", "block"], default=None)
    parser.add_argument("--block-a", type=cast, default=None)
    parser.add_argument("--B", type=int, default=None)
    parser.add_argument("--alpha", type=float, default=None)


def _add_input_args(parser):
    parser.add_argument("--input", type=str, required=True)
    parser.add_argument("--y-col", type=str, default=None)
    parser.add_argument("--z-col", type=str, default=None)


def build_parser():
    parser = ArgumentParser(prog="npgc", description="Nonparametric conditional independence tests for time series.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test Y _|_ Z | W on a CSV file")
    _add_input_args(p)
    p.add_argument("--w-cols", type=_list(str), default=None)
    p.add_argument("--lags", type=int, default=None)
    p.add_argument("--horizon", type=int, default=None)
    _add_test_args(p)
    _add_output_args(p)

    p = sub.add_parser("simulate", help="write a simulated (W, Y, Z) triplet")
    p.add_argument("--dgp", type=str, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--burn-in", type=int, default=None, help=f"default {DEFAULT_BURN_IN}")
    _add_output_args(p)

    p = sub.add_parser("mc", help="Monte Carlo rejection rates")
    p.add_argument("--dgp", type=_list(str), default=None)
    p.add_argument("--n", type=_list(int), default=None)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--full-scale", action="store_true", help=f"R={FULL_REPS}, B={FULL_BOOTSTRAP} unless given")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--keep-pvalues", action="store_true")
    _add_test_args(p, bandwidth_list=True)
    _add_output_args(p)

    p = sub.add_parser("granger", help="linear HAC Granger test, optionally with the nonparametric tests")
    _add_input_args(p)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--horizons", type=_list(int), default=None)
    p.add_argument("--hac-lags", type=int, default=None)
    p.add_argument("--nonparametric", action="store_true")
    _add_test_args(p, bandwidth_list=True)
    _add_output_args(p)
    return parser


def _read_config_file(path):
    if path is None:
        return None
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidConfigError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None
        except UnicodeDecodeError as e:
            raise InvalidConfigError(f"{path}: not UTF-8 ({e.reason} at byte {e.start})") from None
    if not isinstance(data, dict):
        raise InvalidConfigError(f"{path}: expected a JSON object")
    return data


def _check_bandwidth(bandwidth, c_value):
    """Applied to merged file and flag values."""
    if bandwidth == "auto" and c_value is not None:
        raise UsageError("--bandwidth-c (bandwidth_c) conflicts with --bandwidth auto")


def _merge(file_values, flags):
    merged = dict(file_values or {})
    merged.update({k: v for k, v in flags.items() if v is not None})
    return merged


def _plain(value):
    """numpy scalars to Python, NaN to None."""
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def _test_flags(args):
    return {
        "bandwidth": args.bandwidth,
        "weight_family": args.weight_family,
        "bootstrap": args.bootstrap,
        "B": args.B,
        "alpha": args.alpha,
        "seed": args.seed,
        "output_format": args.format,
    }


def _emit(args, kind, result, config, seed, file_values, started):
    stamps = {}
    if args.stamp:
        stamps = {"started_at": started[0], "finished_at": utc_now(), "elapsed": time.perf_counter() - started[1]}
    report = make_report(kind, result, config, seed, config_file=file_values, **stamps)
    fmt = args.format or config.get("output_format") or (file_values or {}).get("output_format") or "json"
    emit_report(report, fmt, args.output)
    if args.output:
        logger.info(f"{kind} report written to {args.output}")


def cmd_test(args, file_values, started):
    flags = _test_flags(args)
    flags.update({
        "bandwidth_c": args.bandwidth_c,
        "block_a": args.block_a,
        "y_col": args.y_col,
        "z_col": args.z_col,
        "w_cols": args.w_cols,
        "lags": args.lags,
        "horizon": args.horizon,
    })
    merged = _merge(file_values, flags)
    _check_bandwidth(merged.get("bandwidth"), merged.get("bandwidth_c"))
    cfg = parse_config(TestConfig, merged)
    if cfg.y_col is None or cfg.z_col is None:
        raise UsageError("test needs --y-col and --z-col")
    sample = load_csv(args.input, cfg.y_col, cfg.z_col, cfg.w_cols, lags=cfg.lags, horizon=cfg.horizon)
    logger.info(f"test on {args.input}: n={sample.n}, d_w={sample.d_w}, bootstrap={cfg.bootstrap}, B={cfg.B}")
    result = bootstrap_test(sample, cfg)
    _emit(args, "test", result.to_dict(), cfg.dict(), cfg.seed, file_values, started)


def cmd_simulate(args, file_values, started):
    flags = {"dgp": args.dgp, "n": args.n, "burn_in": args.burn_in, "seed": args.seed, "output_format": args.format}
    cfg = parse_config(SimulateConfig, _merge(file_values, flags))
    spec = DgpSpec(dgp=cfg.dgp, n=cfg.n, burn_in=cfg.burn_in, seed=cfg.seed)
    sample = simulate_sample(spec)
    columns = ([f"w{i + 1}" for i in range(sample.d_w)] + [f"y{i + 1}" for i in range(sample.d_y)]
               + [f"z{i + 1}" for i in range(sample.d_z)])
    data = np.hstack([sample.W, sample.Y, sample.Z]).tolist()
    config = {"dgp": spec.dgp.value, "n": spec.n, "burn_in": spec.burn_in, "seed": spec.seed}
    result = dict(config, rows=sample.n, columns=columns, data=data)
    _emit(args, "simulate", result, config, spec.seed, file_values, started)


def cmd_mc(args, file_values, started):
    flags = {
        "dgps": [d.upper() for d in args.dgp] if args.dgp else None,
        "sizes": args.n,
        "bandwidth_cs": args.bandwidth_c,
        "data_driven": True if args.bandwidth == "auto" else None,
        "weight_family": args.weight_family,
        "bootstrap": args.bootstrap,
        "block_as": args.block_a,
        "reps": args.reps,
        "B": args.B,
        "alpha": args.alpha,
        "burn_in": args.burn_in,
        "seed": args.seed,
        "keep_pvalues": True if args.keep_pvalues else None,
    }
    merged = _merge(file_values, flags)
    _check_bandwidth("auto" if merged.get("data_driven") else None, merged.get("bandwidth_cs"))
    if args.full_scale:
        merged.setdefault("reps", FULL_REPS)
        merged.setdefault("B", FULL_BOOTSTRAP)
    grid = parse_config(ExperimentGrid, merged)
    report = run_experiment(grid, workers=args.workers, progress=sys.stderr.isatty())
    for statistic in ("cvm", "ks"):
        logger.info(f"{statistic} rejection rates:\n{format_table(report.table(statistic))}")
    _emit(args, "mc", report.to_dict(include_timing=args.stamp), grid.dict(), grid.seed, file_values, started)


def cmd_granger(args, file_values, started):
    if args.horizon is not None and args.horizons is not None:
        raise UsageError("--horizon conflicts with --horizons")
    values = dict(file_values or {})
    horizons = args.horizons or ([args.horizon] if args.horizon is not None else values.pop("horizons", [1]))
    hac_lags = args.hac_lags if args.hac_lags is not None else values.pop("hac_lags", None)
    bandwidth_cs = args.bandwidth_c or values.pop("bandwidth_cs", None)
    _check_bandwidth(args.bandwidth or values.get("bandwidth"), bandwidth_cs)
    bandwidth_cs = bandwidth_cs or [1.0]
    block_as = args.block_a or values.pop("block_as", [])
    if len(block_as) > 1:
        raise UsageError("granger takes a single --block-a")

    flags = _test_flags(args)
    flags.update({"y_col": args.y_col, "z_col": args.z_col})
    cfg = parse_config(TestConfig, _merge(values, flags))
    if cfg.y_col is None or cfg.z_col is None:
        raise UsageError("granger needs --y-col and --z-col")

    data = read_columns(args.input, [cfg.y_col, cfg.z_col])
    table = predictability_study(
        data[cfg.y_col],
        data[cfg.z_col],
        horizons=horizons,
        bandwidth_cs=bandwidth_cs,
        block_a=block_as[0] if block_as else None,
        seed=cfg.seed,
        hac_lags=hac_lags,
        nonparametric=args.nonparametric,
        base=cfg,
    )
    config = dict(cfg.dict(), horizons=list(horizons), hac_lags=hac_lags, bandwidth_cs=list(bandwidth_cs),
                  block_a=block_as[0] if block_as else None, nonparametric=args.nonparametric)
    rows = [{key: _plain(value) for key, value in row.items()} for row in table.to_dict(orient="records")]
    _emit(args, "granger", {"rows": rows}, config, cfg.seed, file_values, started)


COMMANDS = {
    "test": cmd_test,
    "simulate": cmd_simulate,
    "mc": cmd_mc,
    "granger": cmd_granger,
}


def run_cli(argv=None):
    started = (utc_now(), time.perf_counter())
    try:
        args = build_parser().parse_args(argv)
        file_values = _read_config_file(args.config)
        COMMANDS[args.command](args, file_values, started)
    except NpgcError as e:
        print(error_line(e), file=sys.stderr)
        return 2
    except OSError as e:
        print(error_line(e), file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
