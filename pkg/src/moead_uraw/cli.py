"""Campaign runner: seeded run batches, normalized scoring, tables and plots.

Subcommands:
    run     execute runs x algorithms x problems x objective counts,
            one record file per run plus a campaign manifest
    report  min-max normalize final sets per instance, score hypervolume,
            emit CSV and a summary table with significance marks
    plot    two-objective scatter of the best and median runs

Exit codes: 0 success, 2 configuration error, 3 unsupported request,
4 partial campaign failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path

import numpy as np

from . import __version__, kernels, metrics, stats
from .core import derive_seed, rng_stream
from .engine import ALGORITHMS, RunConfig, load_record, run, save_record

DEFAULT_PROBLEMS = ["WFG41", "WFG42", "WFG43", "WFG44",
                    "WFG45", "WFG46", "WFG47", "WFG48"]
DEFAULT_OBJECTIVES = [2, 3, 4, 5, 6]
DEFAULT_ALGORITHMS = ["DD", "UR", "TSF", "URAW"]
DEFAULT_RUNS = 100

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNSUPPORTED = 3
EXIT_PARTIAL = 4

# Exact hypervolume is the default up to this objective count; beyond it the
# report falls back to a seeded Monte Carlo estimate for tractability.
EXACT_HV_MAX_M = 4
REPORT_MC_SAMPLES = 1_000_000


class ConfigError(Exception):
    pass


# ----------------------------------------------------------------------
# campaign configuration


def _parse_list(text: str) -> list[str]:
    return [tok.strip() for tok in text.replace(",", " ").split() if tok.strip()]


def load_campaign_file(path) -> dict:
    """INI config with [campaign] and [run] sections."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    out: dict = {"campaign": {}, "run": {}}
    if parser.has_section("campaign"):
        out["campaign"] = dict(parser.items("campaign"))
    if parser.has_section("run"):
        out["run"] = dict(parser.items("run"))
    return out


_RUN_FIELD_TYPES = {
    "pop_size": int,
    "neighborhood_size": int,
    "max_generations": int,
    "nus": int,
    "delta": float,
    "nr": int,
    "cr": float,
    "f_scale": float,
    "p_m": float,
    "eta_m": float,
    "pool_size": int,
    "apply_ws_transform": lambda s: str(s).lower() in ("1", "true", "yes", "on"),
    "repair": str,
    "trim_policy": str,
    "distance_params": int,
    "shape_config": str,
}


def _coerce_run_overrides(raw: dict) -> dict:
    out = {}
    for key, value in raw.items():
        if key not in _RUN_FIELD_TYPES:
            raise ConfigError(f"unknown [run] option {key!r}")
        if value is None or value == "":
            continue
        try:
            out[key] = _RUN_FIELD_TYPES[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for [run] {key}: {value!r}") from exc
    return out


def resolve_campaign(args) -> dict:
    """Merge config-file values and CLI flags (flags win)."""
    file_cfg = {"campaign": {}, "run": {}}
    if args.config:
        file_cfg = load_campaign_file(args.config)
    camp = file_cfg["campaign"]

    def pick(flag_value, key, fallback, cast):
        if flag_value is not None:
            return flag_value
        if key in camp and camp[key] != "":
            raw = camp[key]
            return cast(raw)
        return fallback

    problems_list = pick(args.problems, "problems", DEFAULT_PROBLEMS, _parse_list)
    objectives = pick(
        args.objectives, "objectives", DEFAULT_OBJECTIVES,
        lambda s: [int(v) for v in _parse_list(s)],
    )
    algorithms = pick(args.algorithms, "algorithms", DEFAULT_ALGORITHMS, _parse_list)
    algorithms = [a.upper() for a in algorithms]
    for alg in algorithms:
        if alg not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {alg!r}; known: {sorted(ALGORITHMS)}")
    runs = pick(args.runs, "runs", DEFAULT_RUNS, int)
    if runs < 1:
        raise ConfigError("runs must be at least 1")
    seed = pick(args.seed, "seed", 0, int)
    out_dir = pick(args.out, "out", "campaign", str)
    jobs = pick(args.jobs, "jobs", os.cpu_count() or 1, int)

    run_overrides = _coerce_run_overrides(file_cfg["run"])
    if getattr(args, "max_generations", None) is not None:
        run_overrides["max_generations"] = args.max_generations
    if getattr(args, "pop_size", None) is not None:
        run_overrides["pop_size"] = args.pop_size
    if getattr(args, "shape_config", None) is not None:
        run_overrides["shape_config"] = args.shape_config

    return {
        "problems": [p.upper() for p in problems_list],
        "objectives": objectives,
        "algorithms": algorithms,
        "runs": runs,
        "seed": seed,
        "out": out_dir,
        "jobs": max(1, jobs),
        "run_overrides": run_overrides,
    }


# ----------------------------------------------------------------------
# run


def record_path(out_dir, problem: str, m: int, algorithm: str, run_idx: int) -> Path:
    return Path(out_dir) / problem / f"m{m}" / algorithm / f"run{run_idx:04d}.json"


def _execute_task(task: dict) -> dict:
    """Worker entry: run one config and write its record atomically."""
    t0 = time.perf_counter()
    entry = {k: task[k] for k in ("problem", "m", "algorithm", "run", "seed")}
    entry["path"] = task["path"]
    try:
        cfg = RunConfig.for_algorithm(
            task["algorithm"],
            problem=task["problem"],
            m=task["m"],
            seed=task["seed"],
            **task["overrides"],
        )
        record = run(cfg)
        path = Path(task["path"])
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        save_record(record, tmp)
        tmp.replace(path)
        entry["status"] = "ok"
    except Exception as exc:  # per-run failure; campaign continues
        entry["status"] = "failed"
        entry["error"] = f"{type(exc).__name__}: {exc}"
    entry["wall_time_s"] = time.perf_counter() - t0
    return entry


def cmd_run(args) -> int:
    try:
        camp = resolve_campaign(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    tasks = []
    for problem in camp["problems"]:
        for m in camp["objectives"]:
            for algorithm in camp["algorithms"]:
                for run_idx in range(camp["runs"]):
                    seed = derive_seed(camp["seed"], problem, m, algorithm, run_idx)
                    tasks.append(
                        {
                            "problem": problem,
                            "m": m,
                            "algorithm": algorithm,
                            "run": run_idx,
                            "seed": seed,
                            "path": str(
                                record_path(camp["out"], problem, m, algorithm, run_idx)
                            ),
                            "overrides": camp["run_overrides"],
                        }
                    )

    out_dir = Path(camp["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    print(
        f"campaign: {len(tasks)} runs "
        f"({len(camp['problems'])} problems x {len(camp['objectives'])} objective "
        f"counts x {len(camp['algorithms'])} algorithms x {camp['runs']} runs), "
        f"jobs={camp['jobs']}, backend={kernels.active.NAME}"
    )

    entries = []
    if camp["jobs"] == 1:
        for task in tasks:
            entries.append(_execute_task(task))
    else:
        with ProcessPoolExecutor(max_workers=camp["jobs"]) as pool:
            futures = [pool.submit(_execute_task, t) for t in tasks]
            for fut in as_completed(futures):
                entries.append(fut.result())

    entries.sort(key=lambda e: (e["problem"], e["m"], e["algorithm"], e["run"]))
    failures = [e for e in entries if e["status"] != "ok"]
    manifest = {
        "campaign_seed": camp["seed"],
        "problems": camp["problems"],
        "objectives": camp["objectives"],
        "algorithms": camp["algorithms"],
        "runs": camp["runs"],
        "run_overrides": camp["run_overrides"],
        "versions": _versions(),
        "entries": entries,
        "failures": len(failures),
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="ascii"
    )
    print(f"completed: {len(entries) - len(failures)} ok, {len(failures)} failed")
    for e in failures:
        print(f"  failed: {e['problem']} m{e['m']} {e['algorithm']} "
              f"run{e['run']}: {e.get('error')}", file=sys.stderr)
    return EXIT_PARTIAL if failures else EXIT_OK


def _versions() -> dict:
    versions = {
        "moead_uraw": __version__,
        "numpy": np.__version__,
        "backend": kernels.active.NAME,
    }
    if kernels.numba_backend is not None:
        import numba

        versions["numba"] = numba.__version__
    return versions


# ----------------------------------------------------------------------
# report


def scan_records(records_dir) -> list[dict]:
    """Metadata for every record under the campaign layout."""
    found = []
    for path in sorted(Path(records_dir).glob("*/m*/*/run*.json")):
        problem, m_tag, algorithm, run_name = path.parts[-4:]
        found.append(
            {
                "problem": problem,
                "m": int(m_tag[1:]),
                "algorithm": algorithm,
                "run": int(run_name[3:7]),
                "path": path,
            }
        )
    return found


def normalized_scores(metas: list[dict]) -> tuple[dict, list[str]]:
    """Normalized hypervolume per run, grouped per instance.

    Normalization bounds come from the union of the final population sets of
    all algorithms and runs of one (problem, m) instance. Returns
    ({(problem, m): {algorithm: [(run, seed, hv), ...]}}, skipped_instances).
    """
    instances: dict = {}
    for meta in metas:
        instances.setdefault((meta["problem"], meta["m"]), []).append(meta)

    scores: dict = {}
    skipped: list[str] = []
    for key in sorted(instances):
        problem, m = key
        group = instances[key]
        algorithms = sorted({g["algorithm"] for g in group})
        if len(algorithms) < 2:
            skipped.append(f"{problem} m{m}: records for fewer than 2 algorithms")
            continue
        loaded = [(meta, load_record(meta["path"])) for meta in group]
        try:
            bounds = metrics.NormalizationBounds.from_point_sets(
                [rec.objectives for _, rec in loaded]
            )
        except ValueError as exc:
            skipped.append(f"{problem} m{m}: {exc}")
            continue
        per_alg: dict = {alg: [] for alg in algorithms}
        for meta, rec in loaded:
            pts = metrics.normalize(rec.objectives, bounds)
            if m <= EXACT_HV_MAX_M:
                hv = metrics.hypervolume(pts)
            else:
                hv_rng = rng_stream(
                    derive_seed("report-hv", problem, m, meta["algorithm"], meta["run"])
                )
                hv = metrics.hypervolume(
                    pts, method="mc", samples=REPORT_MC_SAMPLES, rng=hv_rng
                )
            per_alg[meta["algorithm"]].append((meta["run"], rec.seed, hv))
        scores[key] = per_alg
    return scores, skipped


def write_csv(scores: dict, path) -> int:
    lines = ["problem,m,algorithm,run,seed,hv"]
    for (problem, m) in sorted(scores):
        for algorithm in sorted(scores[(problem, m)]):
            for run_idx, seed, hv in sorted(scores[(problem, m)][algorithm]):
                lines.append(f"{problem},{m},{algorithm},{run_idx},{seed},{float(hv)!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
    return len(lines) - 1


def cmd_report(args) -> int:
    records_dir = Path(args.records)
    if not records_dir.exists():
        print(f"error: records directory {records_dir} not found", file=sys.stderr)
        return EXIT_CONFIG
    metas = scan_records(records_dir)
    if not metas:
        print(f"error: no records under {records_dir}", file=sys.stderr)
        return EXIT_CONFIG

    scores, skipped = normalized_scores(metas)
    for line in skipped:
        print(f"skipped instance: {line}", file=sys.stderr)
    if not scores:
        print("error: no complete instances to report", file=sys.stderr)
        return EXIT_CONFIG

    out_dir = Path(args.out) if args.out else records_dir / "report"
    out_dir.mkdir(parents=True, exist_ok=True)
    n_rows = write_csv(scores, out_dir / "summary.csv")

    # instances missing any algorithm seen elsewhere are excluded from tables
    all_algorithms = sorted({alg for per in scores.values() for alg in per})
    complete = {
        key: {alg: np.array([hv for _, _, hv in per[alg]]) for alg in per}
        for key, per in scores.items()
        if sorted(per) == all_algorithms
    }
    for key in sorted(set(scores) - set(complete)):
        print(f"skipped in tables (incomplete coverage): {key[0]} m{key[1]}",
              file=sys.stderr)
    if complete:
        rows = stats.summarize(complete)
        table = stats.format_summary_table(rows)
        (out_dir / "summary.txt").write_text(table + "\n", encoding="ascii")
        (out_dir / "summary_stats.csv").write_text(
            "\n".join(stats.summary_csv_lines(rows)) + "\n", encoding="ascii"
        )
        print(table)
    print(f"wrote {n_rows} rows to {out_dir / 'summary.csv'}")
    return EXIT_OK


# ----------------------------------------------------------------------
# plot


def lower_median_index(values: np.ndarray) -> int:
    """Index of the lower median (deterministic for even counts)."""
    order = np.argsort(values, kind="stable")
    return int(order[(len(values) - 1) // 2])


def cmd_plot(args) -> int:
    records_dir = Path(args.records)
    if not records_dir.exists():
        print(f"error: records directory {records_dir} not found", file=sys.stderr)
        return EXIT_CONFIG
    objectives = args.objectives or [2]
    if any(m != 2 for m in objectives):
        print("error: scatter plots support 2 objectives only", file=sys.stderr)
        return EXIT_UNSUPPORTED

    metas = scan_records(records_dir)
    metas = [meta for meta in metas if meta["m"] == 2]
    if args.problems:
        wanted = {p.upper() for p in args.problems}
        metas = [meta for meta in metas if meta["problem"] in wanted]
    if args.algorithms:
        wanted = {a.upper() for a in args.algorithms}
        metas = [meta for meta in metas if meta["algorithm"] in wanted]
    if not metas:
        print("error: no matching two-objective records", file=sys.stderr)
        return EXIT_UNSUPPORTED

    scores, skipped = normalized_scores(metas)
    for line in skipped:
        print(f"skipped instance: {line}", file=sys.stderr)

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(args.out) if args.out else records_dir / "plots"
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for (problem, m) in sorted(scores):
        for algorithm in sorted(scores[(problem, m)]):
            entries = sorted(scores[(problem, m)][algorithm])
            hvs = np.array([hv for _, _, hv in entries])
            best_run = entries[int(np.argmax(hvs))][0]
            median_run = entries[lower_median_index(hvs)][0]
            best = load_record(record_path(records_dir, problem, m, algorithm, best_run))
            median = load_record(
                record_path(records_dir, problem, m, algorithm, median_run)
            )
            fig, ax = plt.subplots(figsize=(4.2, 4.2))
            ax.scatter(
                best.objectives[:, 0], best.objectives[:, 1],
                facecolors="none", edgecolors="tab:blue", s=28,
                label=f"best (run {best_run})",
            )
            ax.scatter(
                median.objectives[:, 0], median.objectives[:, 1],
                marker="x", color="tab:green", s=28,
                label=f"median (run {median_run})",
            )
            ax.set_xlabel("f1")
            ax.set_ylabel("f2")
            ax.set_title(f"{problem} m={m} {algorithm}")
            ax.legend(loc="upper right", fontsize=8)
            fig.tight_layout()
            path = out_dir / f"{problem}_m{m}_{algorithm}.svg"
            fig.savefig(path)
            plt.close(fig)
            written.append(path)
    print(f"wrote {len(written)} plots to {out_dir}")
    return EXIT_OK


# ----------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moead-uraw",
        description="Decomposition-based multi-objective benchmark campaigns "
                    "with adaptive weight vectors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a seeded campaign")
    run_p.add_argument("--config", help="INI file with [campaign] and [run] sections; "
                                        "CLI flags override file values")
    run_p.add_argument("--out", help="output directory (default: campaign)")
    run_p.add_argument("--seed", type=int, help="campaign seed (default: 0)")
    run_p.add_argument("--problems", type=_parse_list,
                       help="comma-separated problem ids")
    run_p.add_argument("--objectives", type=lambda s: [int(v) for v in _parse_list(s)],
                       help="comma-separated objective counts")
    run_p.add_argument("--algorithms", type=_parse_list,
                       help=f"subset of {sorted(ALGORITHMS)}")
    run_p.add_argument("--runs", type=int, help="independent runs per instance")
    run_p.add_argument("--jobs", type=int, help="parallel workers (default: cores)")
    run_p.add_argument("--max-generations", type=int, dest="max_generations")
    run_p.add_argument("--pop-size", type=int, dest="pop_size")
    run_p.add_argument("--shape-config", dest="shape_config",
                       help="JSON file overriding the front-shape registry")
    run_p.set_defaults(func=cmd_run)

    report_p = sub.add_parser("report", help="score records and emit tables/CSV")
    report_p.add_argument("records", help="campaign output directory")
    report_p.add_argument("--out", help="report directory (default: <records>/report)")
    report_p.set_defaults(func=cmd_report)

    plot_p = sub.add_parser("plot", help="scatter plots of best/median runs (m=2)")
    plot_p.add_argument("records", help="campaign output directory")
    plot_p.add_argument("--out", help="plot directory (default: <records>/plots)")
    plot_p.add_argument("--problems", type=_parse_list)
    plot_p.add_argument("--algorithms", type=_parse_list)
    plot_p.add_argument("--objectives", type=lambda s: [int(v) for v in _parse_list(s)])
    plot_p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
