"""Command-line entry point.

Subcommands:
  gen     write a synthetic stream CSV
  run     run a learner over a stream (file or generated), write report CSVs
  sweep   grid-tune a learner on a single stream, write best params JSON
  verify  run the numerical certification suites (nonzero exit on violation)
  report  aggregate report CSVs into a summary CSV plus a gnuplot script

Flags can be preloaded from a JSON config file via --config; explicit
flags override config values. All randomness is seed-controlled, so any
command is deterministic given its flags. Diagnostics go to stderr; exit
codes: 0 ok, 1 violation or I/O failure, 2 usage error.
"""

import argparse
import json
import sys

from . import harness, suites
from .datagen import DatasetSpec, gen_stream, read_stream_csv, write_stream_csv
from .errors import DriftLearnError


def _dataset_flags(p: argparse.ArgumentParser) -> None:
    # --kind stays optional at parse time so --config can supply it;
    # commands that need it validate after the merge
    p.add_argument("--kind", choices=("A", "B", "C", "D"), default=None,
                   help="stream kind: A/B noise-free, C/D noisy; A/C constant-rate, B/D switching")
    p.add_argument("--T", type=int, default=2000, help="stream length")
    p.add_argument("--d", type=int, default=20, help="input dimension")
    p.add_argument("--seed", type=int, default=0, help="stream seed")
    p.add_argument("--rotation-rate", type=float, default=None,
                   help="per-step rotation angle for kinds A/C (default 0.2)")
    p.add_argument("--switch-period", type=int, default=50,
                   help="steps between pair switches for kinds B/D")
    p.add_argument("--noise-var", type=float, default=None,
                   help="label noise variance for kinds C/D (default 0.05)")
    p.add_argument("--initial-angle", type=float, default=0.0)
    p.add_argument("--no-wrap", action="store_true",
                   help="freeze on the last pair instead of cycling (kinds B/D)")


def _dataset_from_args(args, seed=None) -> DatasetSpec:
    return DatasetSpec(
        kind=args.kind,
        T=args.T,
        d=args.d,
        seed=args.seed if seed is None else seed,
        rotation_rate=args.rotation_rate,
        switch_period=args.switch_period,
        noise_var=args.noise_var,
        initial_angle=args.initial_angle,
        wrap_pairs=not args.no_wrap,
    )


def _algo_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algo", required=True,
                   choices=("laser", "aar", "nlms", "crrls", "hinf"))
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--c", type=float, default=None, help="use 'inf' for the stationary learner")
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--reset-period", type=int, default=None)
    p.add_argument("--b-reset", type=float, default=None)
    p.add_argument("--track-f", action="store_true")
    p.add_argument("--clip-bound", type=float, default=None)
    p.add_argument("--tuned-regime", choices=("low", "high"), default=None)
    p.add_argument("--eps-ratio", type=float, default=None)


def _params_from_args(args) -> dict:
    params = {}
    if args.algo == "laser":
        if args.tuned_regime is not None:
            params["tuned_regime"] = args.tuned_regime
            if args.eps_ratio is not None:
                params["eps_ratio"] = args.eps_ratio
        else:
            if args.b is not None:
                params["b"] = args.b
            if args.c is not None:
                params["c"] = args.c
        if args.track_f:
            params["track_f"] = True
        if args.clip_bound is not None:
            params["clip_bound"] = args.clip_bound
    elif args.algo == "aar":
        if args.b is not None:
            params["b"] = args.b
    elif args.algo == "nlms":
        if args.eta is not None:
            params["eta"] = args.eta
        if args.eps is not None:
            params["eps"] = args.eps
    elif args.algo == "crrls":
        if args.reset_period is not None:
            params["reset_period"] = args.reset_period
        if args.b_reset is not None:
            params["b_reset"] = args.b_reset
    elif args.algo == "hinf":
        for k in ("a", "b", "c"):
            v = getattr(args, k)
            if v is not None:
                params[k] = v
    return params


def _load_grid(text: str) -> dict:
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    return json.loads(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="driftlearn",
        description="Online regression under target drift: learners, "
                    "benchmarks, and numerical bound certification.",
    )
    ap.add_argument("--config", default=None,
                    help="JSON file of flag defaults (explicit flags override)")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    g = sub.add_parser("gen", help="write a synthetic stream CSV")
    _dataset_flags(g)
    g.add_argument("--out", required=True, help="output CSV path")

    r = sub.add_parser("run", help="run a learner, write report + bounds CSVs")
    _algo_flags(r)
    r.add_argument("--data", default=None, help="stream CSV (else use dataset flags)")
    _dataset_flags(r)
    r.add_argument("--seeds", type=int, default=1, help="number of seeds (generated data)")
    r.add_argument("--base-seed", type=int, default=0)
    r.add_argument("--full", action="store_true",
                   help="full-scale defaults: T=2000 d=20 seeds=100")
    r.add_argument("--out-prefix", default="run", help="prefix for <prefix>_report.csv etc.")

    s = sub.add_parser("sweep", help="grid-tune a learner on one stream")
    s.add_argument("--algo", required=True,
                   choices=("laser", "aar", "nlms", "crrls", "hinf"))
    s.add_argument("--grid", required=True,
                   help="JSON grid {param: [values...]} or @file.json")
    _dataset_flags(s)
    s.add_argument("--tuning-seed", type=int, default=0)
    s.add_argument("--out", required=True, help="best-params JSON path")

    v = sub.add_parser("verify", help="run numerical certification suites")
    v.add_argument("--suite", choices=suites.SUITE_KEYS, default="all",
                   help="which certification suite to run")
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)

    rp = sub.add_parser("report", help="aggregate report CSVs into mean curves")
    rp.add_argument("--inputs", nargs="+", required=True)
    rp.add_argument("--out", required=True, help="summary CSV path")
    rp.add_argument("--plot", default=None, help="gnuplot script path")
    return ap


def _cmd_gen(args) -> int:
    if args.kind is None:
        print("gen: --kind is required (flag or config)", file=sys.stderr)
        return 2
    stream = gen_stream(_dataset_from_args(args))
    write_stream_csv(stream, args.out)
    return 0


def _cmd_run(args) -> int:
    if args.data is not None:
        stream = read_stream_csv(args.data)
        reports = [harness.run_learner(args.algo, _params_from_args(args), stream,
                                       seed=args.base_seed)]
    else:
        if args.kind is None:
            print("run: need --data or --kind", file=sys.stderr)
            return 2
        if args.full:
            args.T, args.d, args.seeds = 2000, 20, 100
        dataset = _dataset_from_args(args)
        seeds = [args.base_seed + i for i in range(args.seeds)]
        reports = harness.experiment(
            dataset, [(args.algo, _params_from_args(args))], seeds
        )
    harness.write_report_csv(reports, f"{args.out_prefix}_report.csv")
    harness.write_bounds_csv(reports, f"{args.out_prefix}_bounds.csv")
    for r in reports:
        bad = [b.name for b in r.bound_checks if not b.holds]
        if bad:
            print(f"warning: seed {r.seed}: failed checks: {', '.join(bad)}",
                  file=sys.stderr)
    return 0


def _cmd_sweep(args) -> int:
    if args.kind is None:
        print("sweep: --kind is required (flag or config)", file=sys.stderr)
        return 2
    try:
        grid = _load_grid(args.grid)
    except json.JSONDecodeError as exc:
        print(f"sweep: bad grid JSON: {exc}", file=sys.stderr)
        return 2
    spec = harness.SweepSpec(
        algo_id=args.algo, grid=grid, tuning_seed=args.tuning_seed
    )
    result = harness.sweep(spec, _dataset_from_args(args))
    payload = {
        "algo": args.algo,
        "best_params": result.best_params,
        "best_loss": result.best_loss,
        "evaluated": len(result.evaluated),
        "skipped": [{"params": p, "reason": r} for p, r in result.skipped],
    }
    with open(args.out, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for p, reason in result.skipped:
        print(f"skipped {p}: {reason}", file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    results = suites.run_suites(args.suite, trials=args.trials, seed=args.seed)
    ok = True
    for r in results:
        print(r.line())
        ok = ok and r.ok
    return 0 if ok else 1


def _cmd_report(args) -> int:
    rows = []
    for path in args.inputs:
        rows.extend(harness.read_report_csv(path))
    summary = harness.summarize_report_rows(rows)
    harness.write_summary_csv(summary, args.out)
    if args.plot is not None:
        algos = sorted({s.algo_id for s in summary})
        with open(args.plot, "w") as fh:
            fh.write(_plot_script(args.out, algos))
    return 0


def _plot_script(summary_csv: str, algos: list[str]) -> str:
    """Gnuplot script for the mean cumulative-loss curves (emitted, never
    executed; no graphics dependency here)."""
    lines = [
        "set datafile separator ','",
        "set xlabel 'step'",
        "set ylabel 'mean cumulative squared loss'",
        "set key top left",
    ]
    plots = [
        f"'{summary_csv}' every ::1 using 2:(strcol(1) eq '{a}' ? column(3) : 1/0) "
        f"with lines title '{a}'"
        for a in algos
    ]
    lines.append("plot \\\n  " + ", \\\n  ".join(plots))
    return "\n".join(lines) + "\n"


_COMMANDS = {
    "gen": _cmd_gen,
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "report": _cmd_report,
}


def _apply_config(args: argparse.Namespace, config: dict, argv: list[str]) -> None:
    """Fill in config values for flags not given explicitly on the line."""
    explicit = set()
    for tok in argv:
        if tok.startswith("--"):
            explicit.add(tok[2:].split("=", 1)[0].replace("-", "_"))
    for key, value in config.items():
        if key not in explicit and hasattr(args, key):
            setattr(args, key, value)


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        try:
            with open(args.config) as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        _apply_config(args, config, argv)
    try:
        return _COMMANDS[args.subcommand](args)
    except DriftLearnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
