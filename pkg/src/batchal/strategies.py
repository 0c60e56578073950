"""Batch query strategies over teacher failure scores.

Four policies are provided: uniform random, top-b by score, diverse batch
selection (score-weighted k-means over a score-prefiltered subset), and an
epsilon split between the predicted-failure region and the rest of the pool.
All of them consume a vector of ids, the matching normalized coordinates,
per-id failure scores, and an explicit RNG, and return exactly b distinct ids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

STRATEGY_NAMES = ("random", "top_b", "dbal", "eps_hqs")


def _check_batch(ids: np.ndarray, b: int) -> np.ndarray:
    ids = np.asarray(ids)
    if b < 1:
        raise ValueError("batch size must be >= 1")
    if b > ids.size:
        raise ValueError("batch of %d exceeds the %d available ids" % (b, ids.size))
    return ids


def select_random(ids, b: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform batch without replacement."""
    ids = _check_batch(ids, b)
    return rng.choice(ids, size=b, replace=False)


def select_top_b(ids, scores, b: int) -> np.ndarray:
    """The b ids with the largest scores; ties go to the smaller id."""
    ids = _check_batch(ids, b)
    scores = np.asarray(scores, dtype=float)
    if scores.shape != ids.shape:
        raise ValueError("scores and ids must align")
    order = np.lexsort((ids, -scores))
    return ids[order[:b]]


def _sq_dists(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = x[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _weighted_pp_seeds(x: np.ndarray, w: np.ndarray, k: int,
                       rng: np.random.Generator) -> np.ndarray:
    """Weighted k-means++ seeding: pick by weight, then weight x distance^2."""
    n = x.shape[0]
    chosen = np.empty(k, dtype=int)

    def draw(prob: np.ndarray, taken: np.ndarray) -> int:
        prob = prob.copy()
        prob[taken] = 0.0
        total = prob.sum()
        if total <= 0:
            # Degenerate pools (duplicates, all mass on centers): any
            # untaken point is as good as another.
            free = np.flatnonzero(~taken)
            return int(free[rng.integers(free.size)])
        return int(rng.choice(n, p=prob / total))

    taken = np.zeros(n, dtype=bool)
    chosen[0] = draw(w.astype(float), taken)
    taken[chosen[0]] = True
    for j in range(1, k):
        d2 = _sq_dists(x, x[chosen[:j]]).min(axis=1)
        chosen[j] = draw(w * d2, taken)
        taken[chosen[j]] = True
    return x[chosen].copy()


class WeightedKMeans(ClusterMixin, BaseEstimator):
    """Lloyd clustering that minimizes sum_i w_i * ||x_i - center(i)||^2.

    Centers update to the weighted mean of their members, so zero-weight
    points are assigned to clusters but never pull a center.  Each restart
    is seeded by weighted k-means++ and the best restart by objective is
    kept; ``objective_history_`` records the kept run's objective after each
    assignment step, which is non-increasing.
    """

    def __init__(self, n_clusters: int = 8, n_init: int = 10,
                 max_iter: int = 300, random_state=None):
        self.n_clusters = n_clusters
        self.n_init = n_init
        self.max_iter = max_iter
        self.random_state = random_state

    def fit(self, x, sample_weight=None):
        x = check_array(x, dtype=float)
        n = x.shape[0]
        if sample_weight is None:
            w = np.ones(n)
        else:
            w = np.asarray(sample_weight, dtype=float)
        if w.shape != (n,):
            raise ValueError("sample_weight must be one value per point")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and >= 0")
        if not np.any(w > 0):
            raise ValueError("at least one weight must be positive")
        k = self.n_clusters
        if not (1 <= k <= n):
            raise ValueError("need 1 <= n_clusters <= n_points, got %d for %d"
                             % (k, n))
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        rng = np.random.default_rng(self.random_state)

        best = None
        for _ in range(max(1, self.n_init)):
            result = self._lloyd(x, w, k, rng)
            if best is None or result[2] < best[2]:
                best = result
        centers, labels, objective, history, iters = best
        self.cluster_centers_ = centers
        self.labels_ = labels
        self.inertia_ = objective
        self.objective_history_ = history
        self.n_iter_ = iters
        return self

    def _lloyd(self, x, w, k, rng):
        centers = _weighted_pp_seeds(x, w, k, rng)
        labels = None
        history = []
        for it in range(1, self.max_iter + 1):
            d2 = _sq_dists(x, centers)
            new_labels = d2.argmin(axis=1)
            history.append(float((w * d2[np.arange(x.shape[0]), new_labels]).sum()))
            if labels is not None and np.array_equal(new_labels, labels):
                labels = new_labels
                break
            labels = new_labels
            for j in range(k):
                member = labels == j
                wj = w[member]
                if wj.sum() > 0:
                    centers[j] = np.average(x[member], axis=0, weights=wj)
                elif member.any():
                    centers[j] = x[member].mean(axis=0)
                else:
                    # Re-seed an empty cluster at the costliest point.
                    cost = w * d2[np.arange(x.shape[0]), labels]
                    centers[j] = x[int(cost.argmax())]
        return centers, labels, history[-1], history, it

    def predict(self, x) -> np.ndarray:
        check_is_fitted(self, "cluster_centers_")
        x = check_array(x, dtype=float)
        return _sq_dists(x, self.cluster_centers_).argmin(axis=1)


def weighted_kmeans(points, weights, k: int, max_iters: int = 300,
                    rng=None) -> tuple[np.ndarray, np.ndarray, float]:
    """Functional front-end returning (centers, assignment, objective)."""
    km = WeightedKMeans(n_clusters=k, max_iter=max_iters, random_state=rng)
    km.fit(points, sample_weight=weights)
    return km.cluster_centers_, km.labels_, km.inertia_


def select_dbal(ids, points, scores, b: int, beta: float,
                rng: np.random.Generator) -> np.ndarray:
    """Diverse batch: prefilter beta*b top scores, cluster, take medoids.

    Points should arrive min-max normalized so distances are comparable
    across dimensions.  Each of the b cluster centers contributes its
    nearest member (ties to the smaller id); clusters left empty by
    degeneracy fall back to the best-scored unselected prefiltered id.
    """
    ids = _check_batch(ids, b)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    scores = np.asarray(scores, dtype=float)
    if scores.shape != ids.shape or points.shape[0] != ids.size:
        raise ValueError("ids, points and scores must align")
    if beta < 1:
        raise ValueError("prefilter factor beta must be >= 1")

    keep = min(int(beta * b), ids.size)
    order = np.lexsort((ids, -scores))[:keep]
    sub_ids, sub_x, sub_w = ids[order], points[order], scores[order]
    if keep == b:
        return sub_ids.copy()

    km = WeightedKMeans(n_clusters=b, random_state=rng).fit(sub_x, sample_weight=sub_w)
    selected: list[int] = []
    short = 0
    for j in range(b):
        member = np.flatnonzero(km.labels_ == j)
        if member.size == 0:
            short += 1
            continue
        d = np.sqrt(((sub_x[member] - km.cluster_centers_[j]) ** 2).sum(axis=1))
        pick = member[np.lexsort((sub_ids[member], d))[0]]
        selected.append(int(sub_ids[pick]))
    for _ in range(short):
        # sub_ids is already in score order, so the first unselected entry
        # is the highest-scored remaining candidate.
        for cand in sub_ids:
            if int(cand) not in selected:
                selected.append(int(cand))
                break
    return np.array(selected)


def eps_schedule(eps, t: int, horizon: int) -> float:
    """Exploit fraction at iteration t of `horizon` total iterations.

    A number is used as-is on every iteration; the string ``"greedy"``
    selects the rising schedule ln(1 + t) / ln(1 + horizon), which reaches
    1 at the final iteration.
    """
    if horizon < 1 or not (1 <= t <= horizon):
        raise ValueError("need 1 <= t <= horizon")
    if isinstance(eps, str):
        if eps != "greedy":
            raise ValueError("unknown schedule %r" % eps)
        return math.log(1.0 + t) / math.log(1.0 + horizon)
    eps = float(eps)
    if not (0.0 <= eps <= 1.0):
        raise ValueError("constant eps must lie in [0, 1]")
    return eps


def select_eps_hqs(ids, scores, b: int, eps: float, threshold: float,
                   rng: np.random.Generator, return_parts: bool = False):
    """Split the batch between the predicted-failure region and the pool.

    floor(eps * b) ids are drawn uniformly from {score >= threshold}
    (capped by that region's size); the rest of the batch is drawn
    uniformly from all still-unselected ids.
    """
    ids = _check_batch(ids, b)
    scores = np.asarray(scores, dtype=float)
    if scores.shape != ids.shape:
        raise ValueError("scores and ids must align")
    if not (0.0 <= eps <= 1.0):
        raise ValueError("eps must lie in [0, 1]")
    if not (0.0 < threshold < 1.0):
        raise ValueError("threshold must lie in (0, 1)")

    region = ids[scores >= threshold]
    n_f = min(int(math.floor(eps * b + 1e-9)), region.size)
    empty = np.array([], dtype=np.asarray(ids).dtype)
    from_region = rng.choice(region, size=n_f, replace=False) if n_f else empty
    if n_f < b:
        rest_pool = np.setdiff1d(ids, from_region, assume_unique=True)
        filler = rng.choice(rest_pool, size=b - n_f, replace=False)
    else:
        filler = empty
    batch = np.concatenate([from_region, filler])
    if return_parts:
        return batch, from_region, filler
    return batch


@dataclass(frozen=True)
class Strategy:
    """Configured query policy; ``label`` names it in result files."""

    name: str
    beta: float = 10.0
    eps: float | str = "greedy"
    threshold: float = 0.5

    def __post_init__(self):
        if self.name not in STRATEGY_NAMES:
            raise ValueError("unknown strategy %r (have %r)"
                             % (self.name, list(STRATEGY_NAMES)))
        if self.name == "eps_hqs" and isinstance(self.eps, str) and self.eps != "greedy":
            raise ValueError("eps must be a number in [0, 1] or 'greedy'")

    @property
    def label(self) -> str:
        if self.name == "dbal":
            return "dbal%g" % self.beta
        if self.name == "eps_hqs":
            if isinstance(self.eps, str):
                return "eps_hqs_greedy"
            return "eps_hqs_%g" % self.eps
        return self.name

    def select(self, ids, points, scores, b: int, t: int, horizon: int,
               rng: np.random.Generator) -> np.ndarray:
        if self.name == "random":
            return select_random(ids, b, rng)
        if self.name == "top_b":
            return select_top_b(ids, scores, b)
        if self.name == "dbal":
            return select_dbal(ids, points, scores, b, self.beta, rng)
        eps_t = eps_schedule(self.eps, t, horizon)
        return select_eps_hqs(ids, scores, b, eps_t, self.threshold, rng)
