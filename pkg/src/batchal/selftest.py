"""Built-in sanity checks runnable from the command line.

Each check recomputes an expected result by an independent route (finite
differences, exhaustive enumeration, grid scans, closed forms) and compares
the implementation against it.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from . import nn, oracles, strategies


def check_gradients(n_draws: int = 8, seed: int = 20240) -> bool:
    """Analytic backprop vs central differences over both activations/losses."""
    rng = np.random.default_rng(seed)
    combos = [("relu", "identity", "mae"), ("relu", "sigmoid", "bce"),
              ("tanh", "identity", "mae"), ("tanh", "sigmoid", "bce")]
    for i in range(n_draws):
        hidden, output, loss = combos[i % len(combos)]
        sizes = (int(rng.integers(2, 5)), int(rng.integers(3, 7)), 1)
        cfg = nn.MlpConfig(sizes, hidden, output, seed=int(rng.integers(1 << 30)))
        params = nn.init_mlp(cfg)
        x = rng.standard_normal((6, sizes[0]))
        if loss == "bce":
            y = rng.integers(0, 2, (6, 1)).astype(float)
        else:
            y = rng.standard_normal((6, 1))
        if nn.grad_check(params, cfg, x, y, loss=loss) >= 1e-4:
            return False
    return True


def check_top_b(n_draws: int = 50, seed: int = 20241) -> bool:
    """Greedy top-b equals exhaustive best-subset search on small pools."""
    rng = np.random.default_rng(seed)
    for _ in range(n_draws):
        n = int(rng.integers(2, 13))
        b = int(rng.integers(1, n + 1))
        ids = np.arange(n)
        scores = rng.random(n)
        got = strategies.select_top_b(ids, scores, b)
        best = max(sum(scores[list(c)]) for c in combinations(range(n), b))
        if not np.isclose(scores[got].sum(), best):
            return False
    return True


def check_kmeans_triples(n_draws: int = 50, seed: int = 20242) -> bool:
    """Weighted 2-means on 1-D triples equals brute-force partitioning."""
    rng = np.random.default_rng(seed)
    for _ in range(n_draws):
        pts = np.sort(rng.random(3) * 10)
        w = rng.random(3) + 0.05
        km = strategies.WeightedKMeans(n_clusters=2, random_state=rng)
        km.fit(pts.reshape(-1, 1), sample_weight=w)
        best = np.inf
        for split in ([0], [1], [2], [0, 1], [0, 2], [1, 2]):
            rest = [i for i in range(3) if i not in split]
            obj = 0.0
            for block in (split, rest):
                center = np.average(pts[block], weights=w[block])
                obj += float((w[block] * (pts[block] - center) ** 2).sum())
            best = min(best, obj)
        if not np.isclose(km.inertia_, best, atol=1e-9):
            return False
        if np.any(np.diff(km.objective_history_) > 1e-12):
            return False
    return True


def check_vessel_stress() -> bool:
    """Closed-form wall maximum agrees with a dense radial scan."""
    depth, length, a, t = 500.0, 0.100, 0.040, 0.010
    closed = oracles.max_vessel_stress(depth, length, a, t)
    p_o = oracles.crush_pressure(depth)
    grid = np.linspace(a, a + t, 1000)
    scanned = max(oracles.von_mises(*oracles.lame_stresses(a, t, p_o, r))
                  for r in grid)
    if abs(scanned - closed) / closed >= 1e-9:
        return False
    st, sr, sl = oracles.lame_stresses(a, t, p_o, a)
    if abs(sr) > 1e-6:
        return False
    st, sr, sl = oracles.lame_stresses(a, t, p_o, a + t)
    return abs(sr + p_o) / p_o < 1e-12


def check_hull_profile(n_draws: int = 50, seed: int = 20243) -> bool:
    """Profile endpoints and section joins for random hull parameters."""
    rng = np.random.default_rng(seed)
    for _ in range(n_draws):
        a = rng.uniform(0.05, 0.6)
        b = rng.uniform(0.001, 1.85)
        c = rng.uniform(0.05, 0.6)
        D = rng.uniform(0.05, 0.2)
        n = rng.uniform(1.0, 5.0)
        th = rng.uniform(0.0, 0.87)
        r = lambda x: oracles.myring_radius(x, a, b, c, D, n, th)
        if abs(r(0.0)) > 1e-12 * D:
            return False
        if abs(r(a) - D / 2) > 1e-12 * D:
            return False
        if abs(r(a + b + c)) > 1e-9 * D:
            return False
        for x in (a, a + b):
            lo, hi = r(x - 1e-9), r(x + 1e-9)
            if abs(hi - lo) > 1e-6 * D:
                return False
    return True


def check_eps_split(seed: int = 20244) -> bool:
    """The failure-region share of the batch is exactly floor(eps * b)."""
    rng = np.random.default_rng(seed)
    ids = np.arange(100)
    scores = np.where(ids < 40, 0.9, 0.1)
    for eps, want in ((0.0, 0), (0.25, 2), (0.5, 5), (0.75, 7), (1.0, 10)):
        _, part, _ = strategies.select_eps_hqs(ids, scores, 10, eps, 0.5, rng,
                                               return_parts=True)
        if part.size != want or not np.all(part < 40):
            return False
    return True


CHECKS = (
    ("gradient check vs finite differences", check_gradients),
    ("top-b vs exhaustive subset search", check_top_b),
    ("weighted 2-means vs brute-force partitions", check_kmeans_triples),
    ("vessel stress closed form vs radial scan", check_vessel_stress),
    ("hull profile endpoints and continuity", check_hull_profile),
    ("epsilon batch split counts", check_eps_split),
)


def run_selftest(print_fn=print) -> bool:
    ok = True
    for name, fn in CHECKS:
        passed = bool(fn())
        ok = ok and passed
        print_fn("[%s] %s" % ("ok" if passed else "FAIL", name))
    return ok
