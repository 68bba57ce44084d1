"""Command-line front end.

Exit codes: 0 success, 2 usage or configuration error, 3 I/O or parse error,
4 numerical failure (degenerate path).
"""

import argparse
import json
import math
import os
import sys
import time

from . import __version__
from .estimators import Method, estimate
from .exceptions import DegeneratePathError, InvalidInputError
from .io import (CsvFormatError, histogram_to_csv, path_to_csv, read_path, samples_to_csv,
                 summary_rows_to_csv)
from .kernel import ModelParams, RngStream, Scheme, SimGrid, simulate_path
from .montecarlo import (ExperimentConfig, default_histogram_range, histogram, normalized_errors,
                         run_experiment)

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4

CONFIG_KEYS = ("theta", "sigma", "x0", "b", "h", "n", "scheme", "method", "n_replications", "base_seed")
REQUIRED_KEYS = ("theta", "sigma", "h", "n", "n_replications", "base_seed")

# rows of the published simulation table: (theta, sigma) x n, h = 0.01
TABLE1_PARAMS = ((0.5, 0.2), (0.5, 0.5), (1.0, 1.0))
TABLE1_SIZES = (10**3, 10**4, 10**5)
TABLE1_H = 0.01


class UsageError(Exception):
    pass


def _err(msg):
    print(f"reflected-ou: error: {msg}", file=sys.stderr)


def _finite_float(text):
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"non-finite value {text!r}")
    return v


def _build_parser():
    parser = argparse.ArgumentParser(prog="reflected-ou", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="simulate one path and write it as CSV")
    sim.add_argument("--theta", type=_finite_float, required=True)
    sim.add_argument("--sigma", type=_finite_float, required=True)
    sim.add_argument("--x0", type=_finite_float, default=0.0)
    sim.add_argument("--h", type=_finite_float, required=True)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--scheme", choices=[s.value for s in Scheme], default=None,
                     help="default: bridge (one-sided), projection (two-sided)")
    sim.add_argument("--barrier", choices=["one", "two"], default="one")
    sim.add_argument("--b", type=_finite_float, default=None, help="upper barrier (two-sided only)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--stream", type=int, default=0, help="stream id under the seed")
    sim.add_argument("--out", default=None, help="output file (default: stdout)")

    est = sub.add_parser("estimate", help="estimate theta from a path CSV")
    est.add_argument("--in", dest="infile", required=True)
    est.add_argument("--method", required=True,
                     choices=[m.value for m in Method])
    est.add_argument("--sigma", type=_finite_float, default=None, help="required for --method moment")

    exp = sub.add_parser("experiment", help="run a Monte Carlo experiment")
    src = exp.add_mutually_exclusive_group(required=True)
    src.add_argument("config", nargs="?", default=None, help="flat JSON config file")
    src.add_argument("--preset", choices=["table1"])
    exp.add_argument("--out-dir", default=".")
    exp.add_argument("--jobs", type=int, default=1)
    exp.add_argument("--bins", type=int, default=30)
    exp.add_argument("--hist-lo", type=_finite_float, default=None)
    exp.add_argument("--hist-hi", type=_finite_float, default=None)
    exp.add_argument("--replications", type=int, default=1000, help="preset only")
    exp.add_argument("--seed", type=int, default=42, help="preset only")
    return parser


def _cmd_simulate(args):
    if args.barrier == "two" and args.b is None:
        raise UsageError("--barrier two requires --b")
    if args.barrier == "one" and args.b is not None:
        raise UsageError("--b is only meaningful with --barrier two")
    params = ModelParams(args.theta, args.sigma, args.x0, args.b)
    path = simulate_path(params, SimGrid(args.h, args.n), args.scheme, RngStream(args.seed, args.stream))
    text = path_to_csv(path)
    if args.out is None:
        sys.stdout.write(text)
    else:
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise CsvFormatError(f"cannot write {args.out}: {exc}") from exc
    return EXIT_OK


def _cmd_estimate(args):
    if args.method == Method.MOMENT.value and args.sigma is None:
        raise UsageError("--method moment requires --sigma")
    path = read_path(args.infile)
    est = estimate(path, args.method, sigma=args.sigma)
    sys.stdout.write("method,theta_hat,T,n\n")
    sys.stdout.write(f"{est.method.value},{est.theta_hat:.17g},{est.horizon_T:.17g},{est.n_obs}\n")
    return EXIT_OK


def config_from_dict(d):
    """Build an :class:`ExperimentConfig` from the flat JSON form (strict keys)."""
    if not isinstance(d, dict):
        raise UsageError("config must be a JSON object")
    unknown = sorted(set(d) - set(CONFIG_KEYS))
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    missing = [k for k in REQUIRED_KEYS if k not in d]
    if missing:
        raise UsageError(f"missing config keys: {', '.join(missing)}")
    try:
        theta, sigma = d["theta"], d["sigma"]
        x0 = d.get("x0")
        if x0 is None:
            # stationary root-mean-square level
            x0 = sigma / math.sqrt(2.0 * theta) if theta > 0 else 0.0
        return ExperimentConfig(
            params=ModelParams(theta, sigma, x0, d.get("b")),
            grid=SimGrid(d["h"], d["n"]),
            scheme=d.get("scheme"),
            method=d.get("method", Method.LSE_DISCRETE.value),
            n_replications=d["n_replications"],
            base_seed=d["base_seed"],
        )
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid config: {exc}") from exc


def config_to_dict(config):
    p, g = config.params, config.grid
    return {
        "theta": p.theta, "sigma": p.sigma, "x0": p.x0, "b": p.b,
        "h": g.h, "n": g.n,
        "scheme": config.scheme.value, "method": config.method.value,
        "n_replications": config.n_replications, "base_seed": config.base_seed,
    }


def table1_configs(n_replications=1000, base_seed=42):
    out = []
    for theta, sigma in TABLE1_PARAMS:
        for n in TABLE1_SIZES:
            out.append(config_from_dict({
                "theta": theta, "sigma": sigma, "h": TABLE1_H, "n": n,
                "n_replications": n_replications, "base_seed": base_seed,
            }))
    return out


def _load_config(fname):
    try:
        with open(fname) as fh:
            raw = fh.read()
    except OSError as exc:
        raise CsvFormatError(f"cannot read {fname}: {exc}") from exc
    try:
        d = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CsvFormatError(f"{fname}: invalid JSON: {exc}") from exc
    return config_from_dict(d)


def _tag(config):
    p, g = config.params, config.grid
    return f"theta{p.theta:g}_sigma{p.sigma:g}_n{g.n}"


def run_experiments(configs, out_dir, jobs=1, bins=30, hist_lo=None, hist_hi=None, tagged=False):
    """Run each config and write summary, samples, histogram CSVs and a manifest.

    Returns the manifest dict.
    """
    if bins < 1:
        raise UsageError("--bins must be >= 1")
    if (hist_lo is None) != (hist_hi is None):
        raise UsageError("--hist-lo and --hist-hi go together")
    start = time.perf_counter()
    results, files, excluded = [], {}, {}
    for config in configs:
        summary, samples = run_experiment(config, jobs=jobs)
        z = normalized_errors(samples, config.params.theta)
        rng = default_histogram_range(config.params.theta) if hist_lo is None else (hist_lo, hist_hi)
        try:
            hist = histogram(z, bins, rng)
        except InvalidInputError as exc:
            raise UsageError(str(exc)) from exc
        suffix = f"_{_tag(config)}" if tagged else ""
        files[f"samples{suffix}.csv"] = samples_to_csv(samples, z)
        files[f"histogram{suffix}.csv"] = histogram_to_csv(hist)
        excluded[f"histogram{suffix}.csv"] = hist.excluded
        results.append((config, summary))
    files["summary.csv"] = summary_rows_to_csv(results)

    try:
        os.makedirs(out_dir, exist_ok=True)
        for name, text in files.items():
            with open(os.path.join(out_dir, name), "w", newline="") as fh:
                fh.write(text)
    except OSError as exc:
        raise CsvFormatError(f"cannot write to {out_dir}: {exc}") from exc

    echo = [config_to_dict(c) for c in configs]
    manifest = {
        "tool": "reflected-ou",
        "version": __version__,
        "config": echo[0] if len(echo) == 1 and not tagged else echo,
        "base_seed": configs[0].base_seed,
        "histogram": {"bins": bins, "range": None if hist_lo is None else [hist_lo, hist_hi],
                      "excluded": excluded},
        "outputs": sorted(files) + ["manifest.json"],
        "duration_seconds": round(time.perf_counter() - start, 3),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def _cmd_experiment(args):
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    if args.preset == "table1":
        configs = table1_configs(args.replications, args.seed)
        tagged = True
    else:
        configs = [_load_config(args.config)]
        tagged = False
    run_experiments(configs, args.out_dir, args.jobs, args.bins, args.hist_lo, args.hist_hi, tagged)
    return EXIT_OK


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    handler = {"simulate": _cmd_simulate, "estimate": _cmd_estimate,
               "experiment": _cmd_experiment}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except CsvFormatError as exc:
        _err(str(exc))
        return EXIT_IO
    except DegeneratePathError as exc:
        _err(str(exc))
        return EXIT_NUMERIC
    except InvalidInputError as exc:
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
