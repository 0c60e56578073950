"""Closed-form engineering label sources and their design spaces.

Two labelers are registered: the peak wall stress of an externally
pressurized thick-walled cylindrical hull at depth, and the enclosed volume
of a streamlined hull of revolution (power-law nose, cylindrical body, cubic
tail).  Everything works in SI units internally; config files may append a
``mm`` suffix to bound overrides and the value is converted at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

SEA_WATER_DENSITY = 1027.0      # kg/m^3
GRAVITY = 9.81                  # m/s^2
DESIGN_SAFETY_FACTOR = 1.5


@dataclass(frozen=True)
class VesselConstants:
    rho: float = SEA_WATER_DENSITY
    g: float = GRAVITY
    safety_factor: float = DESIGN_SAFETY_FACTOR


DEFAULT_VESSEL_CONSTANTS = VesselConstants()


@dataclass(frozen=True)
class Dimension:
    """One input variable: closed lower bound, open upper bound for sampling."""

    name: str
    lo: float
    hi: float
    unit: str = ""

    def __post_init__(self):
        if not self.name:
            raise ValueError("dimension name must be non-empty")
        if not (self.lo < self.hi):
            raise ValueError("dimension %r needs lo < hi, got [%g, %g]"
                             % (self.name, self.lo, self.hi))


@dataclass(frozen=True)
class DesignSpace:
    """Axis-aligned box of design variables, optionally with a joint constraint.

    ``constraint`` maps an (n, d) array of points to a boolean keep-mask; it
    is enforced during sampling by redrawing rejected rows.
    """

    dims: tuple[Dimension, ...]
    constraint: Callable[[np.ndarray], np.ndarray] | None = field(
        default=None, compare=False)

    def __post_init__(self):
        names = [d.name for d in self.dims]
        if len(set(names)) != len(names):
            raise ValueError("dimension names must be unique, got %r" % names)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.dims)

    @property
    def lows(self) -> np.ndarray:
        return np.array([d.lo for d in self.dims])

    @property
    def highs(self) -> np.ndarray:
        return np.array([d.hi for d in self.dims])

    def __len__(self) -> int:
        return len(self.dims)

    def normalize(self, x: np.ndarray) -> np.ndarray:
        """Min-max scale points into the unit box."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return (x - self.lows) / (self.highs - self.lows)

    def contains(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        ok = np.all((x >= self.lows) & (x <= self.highs), axis=1)
        if self.constraint is not None:
            ok &= self.constraint(x)
        return ok

    def replace_bounds(self, name: str, lo: float, hi: float) -> "DesignSpace":
        if name not in self.names:
            raise ValueError("unknown dimension %r (have %r)" % (name, self.names))
        dims = tuple(Dimension(d.name, lo, hi, d.unit) if d.name == name else d
                     for d in self.dims)
        return DesignSpace(dims, self.constraint)


def sample_pool(space: DesignSpace, n: int, seed: int) -> np.ndarray:
    """Draw n design points, each coordinate uniform on [lo, hi).

    Rows violating the space's joint constraint are redrawn, so the result
    always satisfies ``space.contains``.  Deterministic for a fixed seed.
    """
    if n < 0:
        raise ValueError("sample count must be >= 0")
    rng = np.random.default_rng(seed)
    lo, hi = space.lows, space.highs

    def draw(k: int) -> np.ndarray:
        return lo + rng.random((k, len(space))) * (hi - lo)

    x = draw(n)
    if space.constraint is not None:
        bad = ~space.constraint(x)
        while np.any(bad):
            x[bad] = draw(int(bad.sum()))
            bad = ~space.constraint(x)
    return x


def crush_pressure(depth: float,
                   consts: VesselConstants = DEFAULT_VESSEL_CONSTANTS) -> float:
    """Design pressure at depth: hydrostatic head times the safety factor."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return consts.rho * consts.g * depth * consts.safety_factor


def lame_stresses(a: float, t: float, p_o: float, r: float):
    """Stress components in a thick-walled cylinder under external pressure.

    Args:
        a: inner radius (m).
        t: wall thickness (m), outer radius is b = a + t.
        p_o: external pressure (Pa).
        r: radial position, must lie within the wall [a, b].

    Returns:
        Tuple (tangential, radial, longitudinal) stress in Pa; compressive
        values are negative.
    """
    if a <= 0 or t <= 0:
        raise ValueError("radii require a > 0 and t > 0")
    b = a + t
    if not (a <= r <= b):
        raise ValueError("r=%g outside the wall [%g, %g]" % (r, a, b))
    k = p_o * b * b / (b * b - a * a)
    ratio = (a * a) / (r * r)
    sigma_t = -k * (1.0 + ratio)
    sigma_r = -k * (1.0 - ratio)
    sigma_l = -k
    return sigma_t, sigma_r, sigma_l


def von_mises(sigma_1: float, sigma_2: float, sigma_3: float) -> float:
    """Equivalent stress of a principal triple; invariant to ordering."""
    return math.sqrt(((sigma_1 - sigma_2) ** 2
                      + (sigma_2 - sigma_3) ** 2
                      + (sigma_3 - sigma_1) ** 2) / 2.0)


def max_vessel_stress(depth: float, length: float, a: float, t: float,
                      consts: VesselConstants = DEFAULT_VESSEL_CONSTANTS) -> float:
    """Largest equivalent stress in the hull wall at the given depth.

    The wall maximum sits at the inner surface, where the equivalent stress
    reduces to sqrt(3) * p_o * b^2 / (b^2 - a^2).  The hull length does not
    enter the closed form; it is accepted so call sites can pass a full
    design point.
    """
    del length
    if a <= 0 or t <= 0:
        raise ValueError("radii require a > 0 and t > 0")
    p_o = crush_pressure(depth, consts)
    b = a + t
    return math.sqrt(3.0) * p_o * b * b / (b * b - a * a)


def myring_radius(x: float, a: float, b: float, c: float,
                  D: float, n: float, theta: float) -> float:
    """Hull radius at axial station x.

    The profile is a power-law nose on [0, a], a cylinder of diameter D on
    (a, a+b], and a cubic tail on (a+b, a+b+c] that closes to zero radius
    with exit slope controlled by theta (radians).
    """
    if min(a, b, c, D) <= 0:
        raise ValueError("a, b, c, D must all be > 0")
    if n < 1:
        raise ValueError("nose index n must be >= 1")
    if not (0 <= theta < math.pi / 2):
        raise ValueError("tail angle must lie in [0, pi/2)")
    total = a + b + c
    if not (0 <= x <= total):
        raise ValueError("x=%g outside the hull [0, %g]" % (x, total))
    if x <= a:
        frac = (x - a) / a
        return 0.5 * D * (1.0 - frac * frac) ** (1.0 / n)
    if x <= a + b:
        return 0.5 * D
    xi = x - a - b
    tan_th = math.tan(theta)
    r = (0.5 * D
         - (3.0 * D / (2.0 * c * c) - tan_th / c) * xi * xi
         + (D / (c * c * c) - tan_th / (c * c)) * xi * xi * xi)
    # The cubic closes to exactly zero at the tail tip analytically; rounding
    # can leave a value like -6e-17 there, so clamp to keep the radius a radius.
    return max(r, 0.0)


def _simpson(f: Callable[[np.ndarray], np.ndarray],
             lo: float, hi: float, n_intervals: int) -> float:
    """Composite Simpson quadrature on a uniform grid."""
    if n_intervals % 2:
        n_intervals += 1
    x = np.linspace(lo, hi, n_intervals + 1)
    y = f(x)
    h = (hi - lo) / n_intervals
    return float(h / 3.0 * (y[0] + y[-1]
                            + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def hull_volume(a: float, b: float, c: float, D: float, n: float,
                theta: float, n_intervals: int = 20000) -> float:
    """Enclosed volume pi * integral of r(x)^2 dx.

    Nose and tail sections are integrated by composite Simpson's rule with
    ``n_intervals`` subintervals each; the cylindrical body contributes its
    exact value.  The default interval count keeps the quadrature error
    under 1e-6 relative even for the flattest nose shapes (large n), which
    behave like a fractional power at the tip.
    """
    if n_intervals < 2000:
        raise ValueError("need at least 2000 Simpson intervals")
    if min(a, b, c, D) <= 0:
        raise ValueError("a, b, c, D must all be > 0")
    if n < 1:
        raise ValueError("nose index n must be >= 1")
    if not (0 <= theta < math.pi / 2):
        raise ValueError("tail angle must lie in [0, pi/2)")

    def nose_sq(x: np.ndarray) -> np.ndarray:
        frac = (x - a) / a
        return (0.5 * D) ** 2 * np.maximum(1.0 - frac * frac, 0.0) ** (2.0 / n)

    tan_th = math.tan(theta)

    def tail_sq(x: np.ndarray) -> np.ndarray:
        xi = x - a - b
        r = (0.5 * D
             - (3.0 * D / (2.0 * c * c) - tan_th / c) * xi * xi
             + (D / (c * c * c) - tan_th / (c * c)) * xi * xi * xi)
        return r * r

    nose = _simpson(nose_sq, 0.0, a, n_intervals)
    body = (0.5 * D) ** 2 * b
    tail = _simpson(tail_sq, a + b, a + b + c, n_intervals)
    return math.pi * (nose + body + tail)


class Oracle:
    """Named labeling function over a design space.

    ``label`` validates that queried points lie inside the space (bounds and
    joint constraint) and returns one float per row; it is deterministic.
    """

    def __init__(self, name: str, space: DesignSpace,
                 fn: Callable[[np.ndarray], np.ndarray]):
        self.name = name
        self.space = space
        self._fn = fn

    def label(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != len(self.space):
            raise ValueError("point has %d coordinates, space %r has %d"
                             % (x.shape[1], self.name, len(self.space)))
        ok = self.space.contains(x)
        if not np.all(ok):
            i = int(np.flatnonzero(~ok)[0])
            raise ValueError("point %r outside the %s design space"
                             % (x[i].tolist(), self.name))
        return np.asarray(self._fn(x), dtype=float)


def _vessel_space() -> DesignSpace:
    dims = (
        Dimension("depth", 100.0, 6000.0, "m"),
        Dimension("length", 0.050, 0.600, "m"),
        Dimension("inner_radius", 0.020, 0.300, "m"),
        Dimension("thickness", 0.005, 0.060, "m"),
    )
    return DesignSpace(dims, constraint=_thinner_than_bore)


def _thinner_than_bore(x: np.ndarray) -> np.ndarray:
    # Wall thinner than the bore keeps the thick-cylinder model sensible.
    return x[:, 3] < x[:, 2]


def _vessel_labels(x: np.ndarray) -> np.ndarray:
    depth, a, t = x[:, 0], x[:, 2], x[:, 3]
    p_o = SEA_WATER_DENSITY * GRAVITY * depth * DESIGN_SAFETY_FACTOR
    b = a + t
    return np.sqrt(3.0) * p_o * b * b / (b * b - a * a)


def _myring_space() -> DesignSpace:
    dims = (
        Dimension("nose_length", 0.050, 0.600, "m"),
        Dimension("body_length", 0.001, 1.850, "m"),
        Dimension("tail_length", 0.050, 0.600, "m"),
        Dimension("diameter", 0.050, 0.200, "m"),
        Dimension("nose_index", 1.0, 5.0, ""),
        Dimension("tail_angle", 0.0, 0.873, "rad"),
    )
    return DesignSpace(dims)


def _myring_labels(x: np.ndarray) -> np.ndarray:
    return np.array([hull_volume(*row) for row in x])


def make_oracle(name: str) -> Oracle:
    """Look up a registered oracle by name."""
    if name == "vessel_max_stress":
        return Oracle(name, _vessel_space(), _vessel_labels)
    if name == "myring_volume":
        return Oracle(name, _myring_space(), _myring_labels)
    raise ValueError("unknown oracle %r (have %r)" % (name, list(ORACLE_NAMES)))


ORACLE_NAMES = ("vessel_max_stress", "myring_volume")
