"""Experiment runner: expands a configuration into (strategy, repetition)
runs, executes them in a worker pool, and writes trace/summary CSV files.

File bytes are reproducible: all model quantities are pure functions of the
configured seed, rows are sorted before writing, and the informational
wall-clock column is zeroed in files (measured timings stay available on the
in-memory traces) so a rerun or a different worker count never changes the
output.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .learner import Pool, RunTrace, al_run
from .metrics import aggregate_curves
from .nn import MlpBinaryClassifier, MlpRegressor, _derive_seed
from .oracles import make_oracle

TRACE_HEADER = "strategy,rep,iteration,n_labeled,accuracy,wall_ms"
SUMMARY_HEADER = "strategy,iteration,n_labeled,mean_accuracy,std_accuracy"

WORKERS_ENV = "BATCHAL_WORKERS"
PARTIAL_MARKER = "PARTIAL"

_POOL_SEED_TAG = 424242
_START_SEED_TAG = 515151


@dataclass(frozen=True)
class ResultRow:
    strategy: str
    rep: int
    iteration: int
    n_labeled: int
    accuracy: float
    wall_ms: float

    def sort_key(self):
        return (self.strategy, self.rep, self.iteration)


def write_csv(rows, path) -> None:
    """Write trace rows: fixed header, accuracy at 6 decimals, LF endings."""
    lines = [TRACE_HEADER]
    for r in rows:
        lines.append("%s,%d,%d,%d,%.6f,%d"
                     % (r.strategy, r.rep, r.iteration, r.n_labeled,
                        r.accuracy, round(r.wall_ms)))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trace(path) -> list[ResultRow]:
    """Parse a trace file written by ``write_csv``."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != TRACE_HEADER:
        raise ValueError("%s does not start with the trace header" % path)
    rows = []
    for line in lines[1:]:
        strategy, rep, it, n, acc, ms = line.split(",")
        rows.append(ResultRow(strategy, int(rep), int(it), int(n),
                              float(acc), float(ms)))
    return rows


def _write_summary(rows: list[ResultRow], path) -> None:
    """Per-strategy mean/std over repetitions, computed from the same 6-decimal
    accuracy values the trace stores so the two files agree exactly."""
    curves: dict[str, dict[int, list]] = {}
    meta: dict[tuple[str, int], int] = {}
    for r in rows:
        curves.setdefault(r.strategy, {}).setdefault(r.rep, []).append(r)
        meta[(r.strategy, r.iteration)] = r.n_labeled

    lines = [SUMMARY_HEADER]
    for strategy in sorted(curves):
        reps = curves[strategy]
        acc = [[row.accuracy for row in sorted(reps[rep], key=lambda x: x.iteration)]
               for rep in sorted(reps)]
        mean, std = aggregate_curves(np.round(acc, 6))
        for it, (m, s) in enumerate(zip(mean, std)):
            lines.append("%s,%d,%d,%r,%r"
                         % (strategy, it, meta[(strategy, it)], float(m), float(s)))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _build_nets(cfg: ExperimentConfig):
    student = MlpRegressor(**cfg.student)
    teacher = MlpBinaryClassifier(**cfg.teacher)
    return student, teacher


def _build_oracle(cfg: ExperimentConfig):
    oracle = make_oracle(cfg.oracle)
    space = oracle.space
    for name, lo, hi in cfg.space_overrides:
        space = space.replace_bounds(name, lo, hi)
    oracle.space = space
    return oracle


def _execute_run(cfg: ExperimentConfig, strategy_index: int, rep: int) -> RunTrace:
    """One (strategy, repetition) cell; all randomness derives from the
    configured base seed, the strategy index and the repetition index.

    Runs of the same repetition share a start seed across strategies, so
    they begin from the same warm-up set and initial weights and form a
    matched pair; only the strategy's own draws differ."""
    oracle = _build_oracle(cfg)
    pool = Pool.from_space(oracle.space, cfg.pool_size,
                           _derive_seed(cfg.base_seed, _POOL_SEED_TAG))
    student, teacher = _build_nets(cfg)
    run_seed = _derive_seed(cfg.base_seed, strategy_index, rep)
    start_seed = _derive_seed(cfg.base_seed, _START_SEED_TAG, rep)
    strategy = cfg.strategies[strategy_index]
    return al_run(oracle, pool, strategy, cfg.al, run_seed,
                  student=student, teacher=teacher, start_seed=start_seed)


def _worker_count(cfg: ExperimentConfig, n_tasks: int) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env is not None:
        try:
            workers = int(env)
        except ValueError:
            raise ValueError("%s must be an integer, got %r" % (WORKERS_ENV, env))
    elif cfg.workers is not None:
        workers = cfg.workers
    else:
        workers = min(os.cpu_count() or 1, n_tasks)
    if workers < 1:
        raise ValueError("worker count must be >= 1")
    return min(workers, max(n_tasks, 1))


def run_experiment(cfg: ExperimentConfig):
    """Execute every (strategy, repetition) pair and write result files.

    Returns (trace_path, summary_path, traces).  If any run raises, the rows
    produced so far are still written together with a ``PARTIAL`` marker
    file describing the failure, and the error is re-raised.
    """
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tasks = [(si, rep)
             for si in range(len(cfg.strategies))
             for rep in range(cfg.repetitions)]
    workers = _worker_count(cfg, len(tasks))

    traces: list[tuple[int, int, RunTrace]] = []
    failure: Exception | None = None
    try:
        if workers == 1:
            for si, rep in tasks:
                traces.append((si, rep, _execute_run(cfg, si, rep)))
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [(si, rep, pool.submit(_execute_run, cfg, si, rep))
                           for si, rep in tasks]
                for si, rep, fut in futures:
                    traces.append((si, rep, fut.result()))
    except Exception as exc:   # noqa: BLE001 - marker file must reflect any failure
        failure = exc

    rows = []
    for si, rep, trace in traces:
        for rec in trace.records:
            # The wall column is informational; files store zero so reruns
            # and worker-count changes stay byte-identical.
            rows.append(ResultRow(trace.strategy_label, rep, rec.iteration,
                                  rec.n_labeled, rec.accuracy, 0.0))
    rows.sort(key=ResultRow.sort_key)

    trace_path = out / "trace.csv"
    summary_path = out / "summary.csv"
    write_csv(rows, trace_path)

    if failure is not None:
        marker = out / PARTIAL_MARKER
        marker.write_text("experiment aborted: %r\n" % failure, encoding="utf-8")
        raise failure
    _write_summary(rows, summary_path)
    return trace_path, summary_path, [t for _, _, t in traces]
