"""Pool-based batch active learning around a student/teacher pair.

One run proceeds as: label a random warm-up set, train the student surrogate
on it, then repeat for a fixed number of iterations -- retrain the student on
everything labeled so far, stamp each labeled point as pass/fail at the
fractional tolerance, train the teacher classifier on those labels, score the
unlabeled pool with it, hand the scores to the query strategy, and label the
returned batch.  After every stage the student is scored on the leftover
(never-trained) part of the pool; those oracle labels are memoized per run
and kept out of training.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import clone

from .metrics import DEFAULT_TOLERANCE, accuracy, failure_labels
from .nn import MlpBinaryClassifier, MlpRegressor, _derive_seed
from .oracles import Oracle, sample_pool
from .strategies import Strategy


@dataclass
class ALConfig:
    """Budget and tolerance knobs for one active learning run."""

    warmup: int = 100           # initial random labels
    iterations: int = 25        # selection rounds after warm-up
    batch: int = 10             # labels added per round
    aa: float = DEFAULT_TOLERANCE
    warm_start: bool = True     # continue nets from the previous round
    inner_split: float | None = None  # e.g. 0.8 trains the student on a subset

    def __post_init__(self):
        if self.warmup < 1:
            raise ValueError("warmup size must be >= 1")
        if self.iterations < 0:
            raise ValueError("iteration count must be >= 0")
        if self.batch < 1:
            raise ValueError("batch size must be >= 1")
        if not (0 < self.aa < 1):
            raise ValueError("tolerance aa must lie in (0, 1)")
        if self.inner_split is not None and not (0 < self.inner_split < 1):
            raise ValueError("inner_split must lie in (0, 1)")

    @property
    def total_budget(self) -> int:
        return self.warmup + self.iterations * self.batch


@dataclass
class Pool:
    """Candidate design points with stable integer ids 0..n-1."""

    x: np.ndarray
    labeled: np.ndarray = field(default=None)

    def __post_init__(self):
        self.x = np.atleast_2d(np.asarray(self.x, dtype=float))
        if self.labeled is None:
            self.labeled = np.zeros(self.x.shape[0], dtype=bool)
        self.labeled = np.asarray(self.labeled, dtype=bool).copy()
        if self.labeled.shape != (self.x.shape[0],):
            raise ValueError("labeled mask must have one entry per point")

    @classmethod
    def from_space(cls, space, n: int, seed: int) -> "Pool":
        return cls(sample_pool(space, n, seed))

    def __len__(self) -> int:
        return self.x.shape[0]

    @property
    def ids(self) -> np.ndarray:
        return np.arange(len(self))

    def unlabeled_ids(self) -> np.ndarray:
        return np.flatnonzero(~self.labeled)

    def labeled_ids(self) -> np.ndarray:
        return np.flatnonzero(self.labeled)


@dataclass
class IterationRecord:
    iteration: int
    selected_ids: tuple[int, ...]
    n_labeled: int
    accuracy: float
    wall_ms: float


@dataclass
class RunTrace:
    strategy_label: str
    seed: int
    records: list[IterationRecord]
    final_student: "Surrogate"

    def accuracies(self) -> np.ndarray:
        return np.array([r.accuracy for r in self.records])


class Surrogate:
    """Trained student with the run's input/target scaling baked in."""

    def __init__(self, student: MlpRegressor, space, y_mean: float, y_std: float):
        self.student = student
        self.space = space
        self.y_mean = y_mean
        self.y_std = y_std

    def predict(self, x) -> np.ndarray:
        xn = self.space.normalize(x)
        return self.student.predict(xn) * self.y_std + self.y_mean


class _LabelCache:
    """Memoized oracle labels so each pool point is labeled at most once."""

    def __init__(self, oracle: Oracle, pool: Pool):
        self._oracle = oracle
        self._pool = pool
        self._y = np.full(len(pool), np.nan)
        self._have = np.zeros(len(pool), dtype=bool)

    def labels(self, ids: np.ndarray) -> np.ndarray:
        ids = np.asarray(ids, dtype=int)
        missing = ids[~self._have[ids]]
        if missing.size:
            self._y[missing] = self._oracle.label(self._pool.x[missing])
            self._have[missing] = True
        return self._y[ids]


def evaluate_on_leftover(predict, pool: Pool, oracle: Oracle,
                         aa: float = DEFAULT_TOLERANCE,
                         cache: _LabelCache | None = None) -> float:
    """Fractional-error accuracy of ``predict`` on the unlabeled pool part."""
    leftover = pool.unlabeled_ids()
    if leftover.size == 0:
        raise ValueError("no leftover points: the whole pool is labeled")
    if cache is None:
        cache = _LabelCache(oracle, pool)
    truth = cache.labels(leftover)
    return accuracy(np.asarray(predict(pool.x[leftover])), truth, aa)


def al_run(oracle: Oracle, pool: Pool, strategy: Strategy, cfg: ALConfig,
           seed: int, student: MlpRegressor | None = None,
           teacher: MlpBinaryClassifier | None = None,
           start_seed: int | None = None) -> RunTrace:
    """Execute one active learning run and return its trace.

    Args:
        oracle: labeling function; also supplies the design space used for
            input normalization.
        pool: candidate points; the caller's labeled mask is not modified.
        strategy: query policy invoked once per iteration.
        cfg: budgets and tolerance; the pool must be able to fund the warmup,
            every batch, and a nonempty leftover test set.
        seed: master seed; by default the warm-up choice, network training
            and strategy draws all derive independent streams from it.
        student, teacher: optional template estimators (cloned, never fitted
            in place).  Defaults follow the surrogate/guide sizing used by
            the bundled experiments.
        start_seed: optional separate seed for the starting conditions
            (warm-up choice and network init).  Giving runs of different
            strategies the same start_seed makes them matched pairs: they
            share the warm-up set and initial weights and differ only in
            what the strategy selects.
    """
    if cfg.total_budget + 1 > len(pool):
        raise ValueError("pool of %d cannot fund warmup %d + %d x %d and a "
                         "test leftover" % (len(pool), cfg.warmup,
                                            cfg.iterations, cfg.batch))
    start = seed if start_seed is None else start_seed
    pool = Pool(pool.x, pool.labeled)
    student = clone(student) if student is not None else MlpRegressor()
    teacher = clone(teacher) if teacher is not None else MlpBinaryClassifier()
    student.set_params(warm_start=cfg.warm_start,
                       random_state=_derive_seed(start, 1))
    teacher.set_params(warm_start=cfg.warm_start,
                       random_state=_derive_seed(start, 2))
    warmup_rng = np.random.default_rng(_derive_seed(start, 3))
    strategy_rng = np.random.default_rng(_derive_seed(seed, 4))
    split_rng = np.random.default_rng(_derive_seed(start, 5))

    cache = _LabelCache(oracle, pool)
    xn = oracle.space.normalize(pool.x)
    scale = {"mean": 0.0, "std": 1.0}

    def fit_student(ids: np.ndarray):
        y = cache.labels(ids)
        scale["mean"] = float(y.mean())
        scale["std"] = float(max(y.std(), 1e-12))
        train_ids = ids
        if cfg.inner_split is not None and ids.size >= 2:
            n_train = max(1, int(round(cfg.inner_split * ids.size)))
            train_ids = split_rng.permutation(ids)[:n_train]
        yn = (cache.labels(train_ids) - scale["mean"]) / scale["std"]
        student.fit(xn[train_ids], yn)

    def predict_ids(ids: np.ndarray) -> np.ndarray:
        return student.predict(xn[ids]) * scale["std"] + scale["mean"]

    def leftover_accuracy() -> float:
        leftover = pool.unlabeled_ids()
        if leftover.size == 0:
            raise ValueError("no leftover points left for evaluation")
        return accuracy(predict_ids(leftover), cache.labels(leftover), cfg.aa)

    records = []
    t0 = time.perf_counter()
    warm_ids = np.sort(warmup_rng.choice(pool.unlabeled_ids(), size=cfg.warmup,
                                         replace=False))
    pool.labeled[warm_ids] = True
    fit_student(pool.labeled_ids())
    records.append(IterationRecord(0, tuple(int(i) for i in warm_ids),
                                   int(pool.labeled.sum()), leftover_accuracy(),
                                   (time.perf_counter() - t0) * 1e3))

    for t in range(1, cfg.iterations + 1):
        t0 = time.perf_counter()
        labeled = pool.labeled_ids()
        fit_student(labeled)
        fails = failure_labels(predict_ids(labeled), cache.labels(labeled), cfg.aa)
        teacher.fit(xn[labeled], fails)
        unlabeled = pool.unlabeled_ids()
        scores = teacher.predict_proba(xn[unlabeled])[:, 1]
        picked = strategy.select(unlabeled, xn[unlabeled], scores, cfg.batch,
                                 t, max(cfg.iterations, 1), strategy_rng)
        picked = np.asarray(picked, dtype=int)
        if picked.size != cfg.batch or np.unique(picked).size != cfg.batch:
            raise ValueError("strategy %s returned a bad batch" % strategy.label)
        if pool.labeled[picked].any():
            raise ValueError("strategy %s picked already-labeled ids" % strategy.label)
        cache.labels(picked)
        pool.labeled[picked] = True
        records.append(IterationRecord(t, tuple(int(i) for i in picked),
                                       int(pool.labeled.sum()), leftover_accuracy(),
                                       (time.perf_counter() - t0) * 1e3))

    final = Surrogate(student, oracle.space, scale["mean"], scale["std"])
    return RunTrace(strategy.label, seed, records, final)
