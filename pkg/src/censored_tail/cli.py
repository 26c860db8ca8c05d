"""
Command-line front end.

    censored-tail estimate --input data.csv --beta 0.05 --gamma0 0.2
    censored-tail simulate --case 1 --seed 7 --out results/
    censored-tail sweep --case 2 --n 2500,10000,40000 --beta 0.1

Exit codes: 0 success, 1 I/O or parse error, 2 invalid configuration or
violated tuning constraint.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .distributions import expected_censor_rate
from .estimators import TuningError, derive_tuning, estimate_gamma_x, manual_tuning
from .io import DataFileError, dump_json, read_data_file, write_results_csv
from .montecarlo import BUILTIN_CASES, ConfigError, ExperimentConfig, get_case, run_sweep

OUT_ENV = "CENSORED_TAIL_OUT"
DEFAULT_OUT = "results"

EXIT_IO = 1
EXIT_CONFIG = 2


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _tuning_for(args, n):
    if args.t is not None:
        s = args.s if args.s is not None else n**-0.25
        if args.h is not None:
            h = args.h
        elif n >= 16:
            h = 1.0 / math.log(math.log(n))
        else:
            raise TuningError(f"requires --h when n < 16 (n={n})")
        return manual_tuning(n, args.t, s, h)
    if args.beta is None:
        raise TuningError("requires --beta (or an explicit --t)")
    tuning = derive_tuning(n, args.beta, args.gamma0, args.c)
    overrides = {k: getattr(args, k) for k in ("s", "h") if getattr(args, k) is not None}
    return dataclasses.replace(tuning, **overrides) if overrides else tuning


def cmd_estimate(args):
    sample = read_data_file(args.input)
    report = estimate_gamma_x(sample, _tuning_for(args, sample.n))
    out = report.to_dict()
    out["n"] = sample.n
    sys.stdout.write(dump_json(out))
    return 0


def _load_config(args):
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: invalid JSON: {exc}") from exc
        config = ExperimentConfig.from_dict(raw)
    elif args.case is not None:
        config = get_case(args.case)
    else:
        raise ConfigError("one of --case or --config is required")
    changes = {}
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if args.reps is not None:
        changes["replications"] = args.reps
    if args.c is not None:
        changes["c"] = args.c
    if args.beta is not None:
        changes["beta_grid"] = tuple(args.beta)
    if getattr(args, "n", None) is not None and len(args.n) == 1:
        changes["n"] = args.n[0]
    return dataclasses.replace(config, **changes) if changes else config


def _out_dir(args):
    path = Path(args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _print_table(summary, stream=None):
    stream = stream or sys.stdout
    config = summary.config
    stream.write(f"case {config.case_id}: gamma_X={config.gamma_x:g} reps={config.replications} "
                 f"seed={config.master_seed}\n")
    stream.write(f"{'n':>8} {'beta':>10} {'min':>9} {'mean':>9} {'median':>9} {'max':>9} {'cut_s':>6} {'cut_h':>6}\n")
    for r in summary.rows:
        stream.write(
            f"{r.n:>8d} {r.beta:>10.6f} {r.min:>9.5f} {r.mean:>9.5f} {r.median:>9.5f} {r.max:>9.5f} "
            f"{r.truncated_by_s:>6d} {r.truncated_by_h:>6d}\n"
        )
    stream.write(f"mean censor rate: {summary.mean_censor_rate:.4f}\n")


def _write_outputs(summary, out_dir, prefix):
    csv_path = out_dir / f"{prefix}_rows.csv"
    json_path = out_dir / f"{prefix}_summary.json"
    write_results_csv(csv_path, summary.records)
    payload = summary.to_dict()
    payload["expected_censor_rate"] = expected_censor_rate(summary.config.cm)
    reference = BUILTIN_CASES.get(summary.config.case_id)
    payload["reference_censor_rate"] = reference[-1] if reference else None
    dump_json(payload, json_path)
    return csv_path, json_path


def cmd_simulate(args):
    config = _load_config(args)
    out_dir = _out_dir(args)
    summary = run_sweep(config, threads=args.threads)
    paths = _write_outputs(summary, out_dir, f"case{config.case_id}")
    _print_table(summary)
    for p in paths:
        sys.stdout.write(f"wrote {p}\n")
    return 0


def cmd_sweep(args):
    config = _load_config(args)
    n_values = args.n or [config.n]
    out_dir = _out_dir(args)
    summary = run_sweep(config, n_values=n_values, threads=args.threads)
    paths = _write_outputs(summary, out_dir, f"sweep_case{config.case_id}")
    _print_table(summary)
    for p in paths:
        sys.stdout.write(f"wrote {p}\n")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="censored-tail", description="Tail index estimation under random right censoring."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate gamma_X from a z,delta CSV file")
    est.add_argument("--input", required=True, help="CSV with header 'z,delta'")
    est.add_argument("--beta", type=float, help="threshold exponent")
    est.add_argument("--gamma0", type=float, help="known lower bound gamma0 (selects t = n^beta)")
    est.add_argument("--c", type=float, help="floor exponent, s = n^-c")
    est.add_argument("--t", type=float, help="explicit threshold (overrides --beta)")
    est.add_argument("--s", type=float, help="explicit floor on p(t)")
    est.add_argument("--h", type=float, help="explicit floor on rho")
    est.set_defaults(func=cmd_estimate)

    for name, func, help_text in (
        ("simulate", cmd_simulate, "replicate one built-in or configured case"),
        ("sweep", cmd_sweep, "replicate a case over several sample sizes"),
    ):
        p = sub.add_parser(name, help=help_text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--case", help=f"built-in case id ({', '.join(BUILTIN_CASES)})")
        src.add_argument("--config", help="JSON experiment config")
        p.add_argument("--beta", type=_float_list, help="comma-separated beta grid")
        p.add_argument("--n", type=_int_list, help="comma-separated sample sizes")
        p.add_argument("--c", type=float, help="floor exponent, s = n^-c")
        p.add_argument("--reps", type=int, help="replications per beta")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--threads", type=int, help="worker threads (default: all cores)")
        p.add_argument("--out", help=f"output directory (default: ${OUT_ENV} or ./{DEFAULT_OUT})")
        p.set_defaults(func=func)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "simulate" and args.n is not None and len(args.n) != 1:
        sys.stderr.write("error: simulate takes a single --n; use sweep for several\n")
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (TuningError, ConfigError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except (DataFileError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
