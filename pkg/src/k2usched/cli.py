"""Command-line front end: ``analyze``, ``compare`` and ``sweep``.

Exit codes: 0 success, 2 usage or configuration error, 3 a polynomial test
accepted a task the demand oracle rejects.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .analysis import analyze_taskset, taskset_verdicts
from .presets import PRESETS
from .task_model import ModelError, assign_priorities, classify, load_taskset
from .taskgen import GenSpec, generate

EXIT_OK, EXIT_USAGE, EXIT_UNSOUND = 0, 2, 3
CSV_HEADER = ("total_U", "test", "accepted", "trials")


class UsageError(Exception):
    pass


def _config(args) -> dict:
    cfg = {
        "sigma": args.sigma, "b": args.b, "M": args.M, "delta": args.delta,
        "T_cycle": args.tcycle, "C_slot": args.cslot, "gamma": args.gamma,
        "t_delay": args.tdelay, "b_burst": args.b_burst, "extra_Ck": args.extra_ck,
    }
    return {k: v for k, v in cfg.items() if v is not None}


def _add_platform_flags(p):
    p.add_argument("--preset", required=True, help="one of: " + ", ".join(PRESETS))
    p.add_argument("--sigma", type=float, help="override the interference multiplier")
    p.add_argument("--b", type=float, help="override the per-task inflation")
    p.add_argument("--M", type=int, help="processor count (mp_global, mp_partitioned)")
    p.add_argument("--delta", type=float, help="uniform release jitter, as a fraction of T_i")
    p.add_argument("--tcycle", type=float, help="TDMA cycle length")
    p.add_argument("--cslot", type=float, help="TDMA slot length")
    p.add_argument("--gamma", type=float, help="bounded-delay service rate")
    p.add_argument("--tdelay", type=float, help="bounded-delay service delay")
    p.add_argument("--b-burst", type=float, dest="b_burst", help="first-job burst (bursty)")
    p.add_argument("--extra-ck", type=float, dest="extra_ck",
                   help="demand added to C_k, e.g. an equivalent DAG execution time")
    p.add_argument("--priority", choices=("RM", "DM", "as_given"), default="as_given",
                   help="priority order of the task set (sweep: as_given means RM)")
    p.add_argument("--out", help="write to this file instead of stdout")


def _check_preset(name):
    if name not in PRESETS:
        raise UsageError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


def _read_taskset(path, policy):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return assign_priorities(load_taskset(text), policy)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x):
    return "-" if x is None else f"{x:.6g}"


def _text_report(reports):
    lines = []
    for r in reports:
        verdicts = "  ".join(f"{n}={'S' if v.schedulable else '?'}" for n, v in r.verdicts.items())
        lines.append(f"task {r.task_id}: {verdicts}")
        if r.params is not None:
            lines.append(f"  C_k_eff={_fmt(r.params.C_k_eff)} t_k={_fmt(r.params.t_k)} "
                         f"hp2={list(r.params.hp2_ids)}")
            for e in r.params.entries:
                lines.append(f"    {e.task_id:>12}  t={_fmt(e.t)}  alpha={_fmt(e.alpha)}  "
                             f"beta={_fmt(e.beta)}  U={_fmt(e.U)}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    _check_preset(args.preset)
    tasks = _read_taskset(args.taskset, args.priority)
    reports = analyze_taskset(tasks, args.preset, _config(args))
    if args.format == "text":
        text = _text_report(reports)
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("task", "test", "schedulable", "margin"))
        for r in reports:
            for n, v in r.verdicts.items():
                w.writerow((r.task_id, n, int(v.schedulable), v.margin))
        text = buf.getvalue()
    else:
        doc = {"preset": args.preset, "deadlines": classify(tasks),
               "tasks": [r.to_dict() for r in reports],
               "taskset": taskset_verdicts(reports)}
        text = json.dumps(doc, indent=2, default=float) + "\n"
    _emit(text, args.out)
    return EXIT_OK


CELLS = ("accept/accept", "unknown/accept", "accept/unknown", "unknown/unknown")


def compare_counts(reports) -> dict:
    """Per polynomial test, counts of (test verdict)/(oracle verdict) pairs."""
    out = {}
    for r in reports:
        oracle_ok = r.verdicts["tda"].schedulable
        for name, v in r.verdicts.items():
            if name == "tda":
                continue
            cell = f"{'accept' if v.schedulable else 'unknown'}/{'accept' if oracle_ok else 'unknown'}"
            out.setdefault(name, dict.fromkeys(CELLS, 0))[cell] += 1
    return out


def cmd_compare(args) -> int:
    _check_preset(args.preset)
    tasks = _read_taskset(args.taskset, args.priority)
    counts = compare_counts(analyze_taskset(tasks, args.preset, _config(args)))
    forbidden = sum(c["accept/unknown"] for c in counts.values())
    if args.format == "text":
        lines = [f"{name:>24}  " + "  ".join(f"{k}={c[k]}" for k in CELLS)
                 for name, c in counts.items()]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({"preset": args.preset, "counts": counts,
                           "forbidden": forbidden}, indent=2) + "\n"
    _emit(text, args.out)
    if forbidden:
        print(f"soundness violation: {forbidden} accept/unknown cell(s)", file=sys.stderr)
        return EXIT_UNSOUND
    return EXIT_OK


def _u_grid(lo, hi, step):
    n = int(round((hi - lo) / step))
    return [round(lo + i * step, 10) for i in range(n + 1)]


def _sweep_point(job):
    """Accept counts for one utilization level; seeded by (seed, level index)."""
    idx, U, args = job
    rng = np.random.default_rng([args["seed"], idx])
    counts, unsound = {}, 0
    for _ in range(args["trials"]):
        spec = GenSpec(n=args["n"], total_U=U, period_range=tuple(args["period_range"]),
                       deadline_factor=args["deadline_factor"])
        tasks = assign_priorities(generate(spec, rng), args["priority"])
        verdicts = taskset_verdicts(analyze_taskset(tasks, args["preset"], args["config"]))
        for name, ok in verdicts.items():
            counts[name] = counts.get(name, 0) + int(ok)
        if any(ok and not verdicts["tda"] for name, ok in verdicts.items()):
            unsound += 1
    return U, counts, unsound


def run_sweep(preset, config, n, u_values, trials, seed=0, period_range=(1.0, 100.0),
              deadline_factor=None, priority="RM", jobs=1) -> tuple:
    """Acceptance counts per (U, test). Returns (rows, unsound_tasksets)."""
    shared = dict(seed=seed, trials=trials, n=n, period_range=list(period_range),
                  deadline_factor=deadline_factor, priority=priority,
                  preset=preset, config=config)
    work = [(i, U, shared) for i, U in enumerate(u_values)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_sweep_point, work))
    else:
        results = [_sweep_point(w) for w in work]
    rows, unsound = [], 0
    for U, counts, bad in results:
        unsound += bad
        rows.extend((U, name, counts[name], trials) for name in sorted(counts))
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows, unsound


def cmd_sweep(args) -> int:
    _check_preset(args.preset)
    if args.trials < 1 or args.n < 1 or args.ustep <= 0 or args.umin <= 0 or args.umax < args.umin:
        raise UsageError("need trials >= 1, n >= 1, 0 < umin <= umax and ustep > 0")
    factor = tuple(args.deadline_factor) if args.deadline_factor else None
    rows, unsound = run_sweep(args.preset, _config(args), args.n,
                              _u_grid(args.umin, args.umax, args.ustep), args.trials,
                              seed=args.seed, period_range=(args.tmin, args.tmax),
                              deadline_factor=factor,
                              priority="RM" if args.priority == "as_given" else args.priority,
                              jobs=args.jobs)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    _emit(buf.getvalue(), args.out)
    if unsound:
        print(f"soundness violation in {unsound} task set(s)", file=sys.stderr)
        return EXIT_UNSOUND
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="k2usched", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="per-task verdicts and derived parameters")
    p.add_argument("taskset")
    _add_platform_flags(p)
    p.add_argument("--format", choices=("json", "text", "csv"), default="json")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", help="agreement of each polynomial test with the oracle")
    p.add_argument("taskset")
    _add_platform_flags(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="acceptance ratio over random task sets (CSV)")
    _add_platform_flags(p)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--umin", type=float, default=0.1)
    p.add_argument("--umax", type=float, default=1.0)
    p.add_argument("--ustep", type=float, default=0.1)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tmin", type=float, default=1.0)
    p.add_argument("--tmax", type=float, default=100.0)
    p.add_argument("--deadline-factor", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("csv",), default="csv")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ModelError) as e:
        print(f"k2usched: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
