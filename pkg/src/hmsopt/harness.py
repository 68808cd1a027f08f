"""Experiment runner and replay CLI.

``run`` executes the (dims x functions x algorithms x runs) matrix with
per-run streams derived from the master seed, writing a raw CSV (one row
per run) and a summary CSV (mean/std error and rank per function and
algorithm). Row order is fixed (dim, then function, then algorithm, then
run) and numbers are serialized with 17 significant digits, so output is
byte-identical across repetitions and across parallelism levels (only the
wall_ms column varies).

``replay`` recomputes rank summaries, pairwise counts and Wilcoxon tests
from the shipped reference result tables (the previously reported
30-function comparisons at D=30/50/100) and prints them next to the
reported values.

``ranks`` emits a per-function rank CSV from either a summary CSV or a
reference table.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field, fields
from functools import lru_cache
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed

from .baselines import PsoConfig, run_pso
from .benchmarks import make_suite
from .core import RunConfig, derive_seed
from .hms import run_hms
from .mcs import run_mcs_hms
from .stats import (
    ResultTable,
    pairwise_compare,
    rank_row,
    rank_summary,
    wilcoxon_signed_rank,
)

DEFAULT_POP_SIZE = 50

# Stable stream-derivation ids; independent of CLI ordering.
ALGORITHM_IDS = {"hms": 0, "mcs-hms": 1, "pso": 2}

RAW_HEADER = ["function", "algorithm", "dim", "run", "seed", "best_error", "nfe_used", "wall_ms"]
SUMMARY_HEADER = ["function", "algorithm", "dim", "mean_error", "std_error", "rank"]

FIXTURE_IDS = ("D30", "D50", "D100")
_DATA_DIR = Path(__file__).resolve().parent / "data"


@dataclass
class ExperimentConfig:
    suite: str = "classic10"
    dims: tuple[int, ...] = (10,)
    algorithms: tuple[str, ...] = ("hms", "mcs-hms", "pso")
    runs: int = 25
    nfe_max: int = 100_000
    master_seed: int = 0
    out_dir: str = "results"
    parallelism: int = 1

    def validate(self) -> None:
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if not self.dims:
            raise ValueError("dims must be non-empty")
        if not self.algorithms:
            raise ValueError("algorithms must be non-empty")
        for algo in self.algorithms:
            if algo not in ALGORITHM_IDS:
                raise ValueError(f"unknown algorithm {algo!r}, choose from {sorted(ALGORITHM_IDS)}")
        if self.parallelism < 1:
            raise ValueError(f"parallelism must be >= 1, got {self.parallelism}")
        if self.nfe_max < DEFAULT_POP_SIZE:
            raise ValueError(f"nfe_max must be >= {DEFAULT_POP_SIZE}, got {self.nfe_max}")
        for dim in self.dims:
            make_suite(self.suite, dim, self.master_seed)  # raises on bad suite/dim


@lru_cache(maxsize=None)
def _suite(name: str, dim: int, seed: int):
    return make_suite(name, dim, seed)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _execute_run(suite, dim, func_idx, algo, run_idx, nfe_max, master_seed):
    objective = _suite(suite, dim, master_seed)[func_idx]
    seed = derive_seed(master_seed, ALGORITHM_IDS[algo], func_idx, run_idx)
    stream = np.random.Generator(np.random.Philox(key=seed))
    t0 = time.perf_counter()
    if algo == "pso":
        result = run_pso(
            objective, PsoConfig(pop_size=DEFAULT_POP_SIZE, nfe_max=nfe_max, seed=seed), stream
        )
    else:
        cfg = RunConfig(pop_size=DEFAULT_POP_SIZE, nfe_max=nfe_max, seed=seed)
        runner = run_hms if algo == "hms" else run_mcs_hms
        result = runner(objective, cfg, stream)
    wall_ms = int(round((time.perf_counter() - t0) * 1000.0))
    return {
        "function": objective.name,
        "algorithm": algo,
        "dim": dim,
        "run": run_idx,
        "seed": seed,
        "best_error": result.error,
        "nfe_used": result.nfe_used,
        "wall_ms": wall_ms,
    }


def run_experiment(config: ExperimentConfig) -> tuple[Path, Path]:
    """Execute the full run matrix; returns (raw CSV path, summary CSV path)."""
    config.validate()
    n_funcs = {dim: len(_suite(config.suite, dim, config.master_seed)) for dim in config.dims}
    jobs = [
        (config.suite, dim, f, algo, r, config.nfe_max, config.master_seed)
        for dim in config.dims
        for f in range(n_funcs[dim])
        for algo in config.algorithms
        for r in range(config.runs)
    ]
    if config.parallelism > 1:
        rows = Parallel(n_jobs=config.parallelism)(delayed(_execute_run)(*job) for job in jobs)
    else:
        rows = [_execute_run(*job) for job in jobs]

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    raw_path = out_dir / "raw.csv"
    with raw_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RAW_HEADER)
        for row in rows:
            writer.writerow(
                [
                    row["function"],
                    row["algorithm"],
                    row["dim"],
                    row["run"],
                    row["seed"],
                    _fmt(row["best_error"]),
                    row["nfe_used"],
                    row["wall_ms"],
                ]
            )

    summary_path = out_dir / "summary.csv"
    with summary_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_HEADER)
        for dim in config.dims:
            suite = _suite(config.suite, dim, config.master_seed)
            for f, objective in enumerate(suite):
                errors = {
                    algo: [
                        row["best_error"]
                        for row in rows
                        if row["dim"] == dim
                        and row["function"] == objective.name
                        and row["algorithm"] == algo
                    ]
                    for algo in config.algorithms
                }
                means = np.array([np.mean(errors[a]) for a in config.algorithms])
                stds = np.array(
                    [np.std(errors[a], ddof=1) if len(errors[a]) > 1 else 0.0 for a in config.algorithms]
                )
                ranks = rank_row(means)
                for j, algo in enumerate(config.algorithms):
                    writer.writerow(
                        [objective.name, algo, dim, _fmt(means[j]), _fmt(stds[j]), _fmt(ranks[j])]
                    )
    return raw_path, summary_path


# --------------------------------------------------------------------------
# reference-table replay


def load_fixture(fixture: str) -> ResultTable:
    fixture = fixture.upper()
    if fixture not in FIXTURE_IDS:
        raise ValueError(f"unknown fixture {fixture!r}, choose from {FIXTURE_IDS}")
    return ResultTable.from_csv(_DATA_DIR / f"reported_mean_errors_{fixture.lower()}.csv")


def _load_reported(name: str) -> list[dict]:
    with (_DATA_DIR / name).open(newline="") as fh:
        return list(csv.DictReader(fh))


@dataclass
class ReplayReport:
    fixture: str
    dim: int
    rank_rows: list[dict] = field(default_factory=list)
    pairwise_rows: list[dict] = field(default_factory=list)
    wilcoxon_rows: list[dict] = field(default_factory=list)

    def render(self) -> str:
        lines = [f"replay {self.fixture}: recomputed vs reported", ""]
        lines.append(
            f"{'algorithm':10s} {'avg':>7s} {'rep':>5s} {'delta':>7s}  "
            f"{'best':>4s} {'rep':>4s}  {'worst':>5s} {'rep':>4s}  {'std':>6s} {'rep':>5s} {'delta':>7s}"
        )
        for r in self.rank_rows:
            lines.append(
                f"{r['algorithm']:10s} {r['avg_rank']:7.3f} {r['reported_avg_rank']:5.2f} "
                f"{r['avg_rank'] - r['reported_avg_rank']:+7.3f}  "
                f"{r['best_rank']:4.0f} {r['reported_best_rank']:4.0f}  "
                f"{r['worst_rank']:5.0f} {r['reported_worst_rank']:4.0f}  "
                f"{r['std_dev']:6.3f} {r['reported_std_dev']:5.2f} "
                f"{r['std_dev'] - r['reported_std_dev']:+7.3f}"
            )
        lines.append("")
        lines.append(f"{'MCS-HMS vs':10s} {'better':>6s} {'rep':>4s}  {'worse':>5s} {'rep':>4s}")
        for r in self.pairwise_rows:
            lines.append(
                f"{r['opponent']:10s} {r['better']:6d} {r['reported_better']:4d}  "
                f"{r['worse']:5d} {r['reported_worse']:4d}"
            )
        lines.append("")
        lines.append(f"{'MCS-HMS vs':10s} {'W':>7s} {'p':>10s} {'reported p':>11s}")
        for r in self.wilcoxon_rows:
            lines.append(
                f"{r['opponent']:10s} {r['statistic']:7.1f} {r['p_value']:10.3e} {r['reported_p']:11.2e}"
            )
        return "\n".join(lines)


def replay_fixtures(fixture: str) -> ReplayReport:
    """Recompute rank/pairwise/Wilcoxon summaries from a reference table."""
    table = load_fixture(fixture)
    dim = int(fixture.upper()[1:])
    report = ReplayReport(fixture=fixture.upper(), dim=dim)

    summary = rank_summary(table)
    reported_ranks = {
        row["algorithm"]: row
        for row in _load_reported("reported_rank_summary.csv")
        if int(row["dim"]) == dim
    }
    for algo in table.algorithms:
        avg, best, worst, std = summary.row(algo)
        rep = reported_ranks[algo]
        report.rank_rows.append(
            {
                "algorithm": algo,
                "avg_rank": avg,
                "best_rank": best,
                "worst_rank": worst,
                "std_dev": std,
                "reported_avg_rank": float(rep["avg_rank"]),
                "reported_best_rank": float(rep["best_rank"]),
                "reported_worst_rank": float(rep["worst_rank"]),
                "reported_std_dev": float(rep["std_dev"]),
            }
        )

    reported_pairs = {
        row["opponent"]: row
        for row in _load_reported("reported_pairwise.csv")
        if int(row["dim"]) == dim
    }
    reported_wil = {
        row["opponent"]: row
        for row in _load_reported("reported_wilcoxon.csv")
        if int(row["dim"]) == dim
    }
    mcs = table.column("MCS-HMS")
    for opponent in table.algorithms:
        if opponent == "MCS-HMS":
            continue
        better, worse = pairwise_compare(table, "MCS-HMS", opponent)
        rep = reported_pairs[opponent]
        report.pairwise_rows.append(
            {
                "opponent": opponent,
                "better": better,
                "worse": worse,
                "reported_better": int(rep["better"]),
                "reported_worse": int(rep["worse"]),
            }
        )
        res = wilcoxon_signed_rank(mcs, table.column(opponent))
        report.wilcoxon_rows.append(
            {
                "opponent": opponent,
                "statistic": res.statistic,
                "p_value": res.p_value,
                "method": res.method,
                "reported_p": float(reported_wil[opponent]["p_value"]),
            }
        )
    return report


# --------------------------------------------------------------------------
# per-function rank report


def report_ranks(table: ResultTable) -> list[tuple[str, str, float]]:
    """Flatten per-function ranks to (function, algorithm, rank) rows."""
    out = []
    for i, function in enumerate(table.functions):
        ranks = rank_row(table.values[i])
        for j, algo in enumerate(table.algorithms):
            out.append((function, algo, float(ranks[j])))
    return out


def summary_to_table(path: str | Path, dim: int | None = None) -> ResultTable:
    """Rebuild a functions x algorithms mean-error table from a summary CSV."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "algorithm" not in reader.fieldnames:
            raise ValueError(f"{path}: missing algorithm column")
        for column in SUMMARY_HEADER[:-1]:
            if column not in reader.fieldnames:
                raise ValueError(f"{path}: missing {column} column")
        rows = list(reader)
    dims = sorted({int(r["dim"]) for r in rows})
    if dim is None:
        if len(dims) > 1:
            raise ValueError(f"{path} holds dims {dims}; pass an explicit dim")
        dim = dims[0]
    rows = [r for r in rows if int(r["dim"]) == dim]
    if not rows:
        raise ValueError(f"{path}: no rows for dim {dim}")
    functions = list(dict.fromkeys(r["function"] for r in rows))
    algorithms = list(dict.fromkeys(r["algorithm"] for r in rows))
    values = np.full((len(functions), len(algorithms)), np.nan)
    for r in rows:
        values[functions.index(r["function"]), algorithms.index(r["algorithm"])] = float(
            r["mean_error"]
        )
    return ResultTable(functions, algorithms, values)


def write_rank_csv(rows: list[tuple[str, str, float]], target) -> None:
    writer = csv.writer(target)
    writer.writerow(["function", "algorithm", "rank"])
    for function, algo, rank in rows:
        writer.writerow([function, algo, _fmt(rank)])


# --------------------------------------------------------------------------
# configuration file + CLI

_CONFIG_KEYS = {f.name for f in fields(ExperimentConfig)}


def load_config_file(path: str | Path) -> dict:
    """Parse a flat ``key = value`` config file mirroring ExperimentConfig."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _parse_dims(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


def _parse_algorithms(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def build_experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    config = ExperimentConfig()
    if args.config:
        file_values = load_config_file(args.config)
        updates = {}
        for key, value in file_values.items():
            if key == "dims":
                updates[key] = _parse_dims(value)
            elif key == "algorithms":
                updates[key] = _parse_algorithms(value)
            elif key in ("runs", "nfe_max", "master_seed", "parallelism"):
                updates[key] = int(value)
            else:
                updates[key] = value
        config = ExperimentConfig(**{**config.__dict__, **updates})
    overrides = {}
    if args.suite is not None:
        overrides["suite"] = args.suite
    if args.dims is not None:
        overrides["dims"] = _parse_dims(args.dims)
    if args.algorithms is not None:
        overrides["algorithms"] = _parse_algorithms(args.algorithms)
    if args.runs is not None:
        overrides["runs"] = args.runs
    if args.nfe_max is not None:
        overrides["nfe_max"] = args.nfe_max
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.parallelism is not None:
        overrides["parallelism"] = args.parallelism
    if overrides:
        config = ExperimentConfig(**{**config.__dict__, **overrides})
    return config


def _cmd_run(args: argparse.Namespace) -> int:
    stage = "configuration"
    try:
        config = build_experiment_config(args)
        config.validate()
        stage = "execution"
        raw_path, summary_path = run_experiment(config)
        print(f"wrote {raw_path}")
        print(f"wrote {summary_path}")
    except Exception as exc:
        print(f"hmsopt run: {stage} stage failed: {exc}", file=sys.stderr)
        return 2
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    stage = "replay"
    try:
        report = replay_fixtures(args.fixture)
        text = report.render()
        if args.out:
            Path(args.out).write_text(text + "\n")
            print(f"wrote {args.out}")
        else:
            print(text)
    except Exception as exc:
        print(f"hmsopt replay: {stage} stage failed: {exc}", file=sys.stderr)
        return 2
    return 0


def _cmd_ranks(args: argparse.Namespace) -> int:
    stage = "rank report"
    try:
        if (args.fixture is None) == (args.summary is None):
            raise ValueError("pass exactly one of --fixture or --summary")
        if args.fixture:
            table = load_fixture(args.fixture)
        else:
            table = summary_to_table(args.summary, dim=args.dim)
        rows = report_ranks(table)
        if args.out:
            with Path(args.out).open("w", newline="") as fh:
                write_rank_csv(rows, fh)
            print(f"wrote {args.out}")
        else:
            write_rank_csv(rows, sys.stdout)
    except Exception as exc:
        print(f"hmsopt ranks: {stage} stage failed: {exc}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hmsopt",
        description="HMS / MCS-HMS benchmark experiments and reported-table replay",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment matrix")
    p_run.add_argument("--config", help="flat key=value config file")
    p_run.add_argument("--suite", help="benchmark suite name (classic10)")
    p_run.add_argument("--dims", help="comma-separated dimensionalities, e.g. 10,30")
    p_run.add_argument("--algorithms", help="comma-separated subset of hms,mcs-hms,pso")
    p_run.add_argument("--runs", type=int, help="independent runs per cell")
    p_run.add_argument("--nfe-max", type=int, dest="nfe_max", help="evaluation budget per run")
    p_run.add_argument("--seed", type=int, help="master seed")
    p_run.add_argument("--out", help="output directory")
    p_run.add_argument("--parallelism", type=int, help="worker processes across runs")
    p_run.set_defaults(func=_cmd_run)

    p_replay = sub.add_parser("replay", help="recompute summaries from a reported table")
    p_replay.add_argument("fixture", choices=[f for f in FIXTURE_IDS] + [f.lower() for f in FIXTURE_IDS])
    p_replay.add_argument("--out", help="write the report to this file instead of stdout")
    p_replay.set_defaults(func=_cmd_replay)

    p_ranks = sub.add_parser("ranks", help="emit per-function ranks as CSV")
    p_ranks.add_argument("--fixture", help="reference table id (D30, D50, D100)")
    p_ranks.add_argument("--summary", help="summary CSV produced by 'run'")
    p_ranks.add_argument("--dim", type=int, help="dim filter when the summary holds several")
    p_ranks.add_argument("--out", help="output CSV path (default: stdout)")
    p_ranks.set_defaults(func=_cmd_ranks)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
