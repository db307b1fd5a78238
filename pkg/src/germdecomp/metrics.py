"""Model metrics for the cone pieces, and the numerics run against them.

Five chart families: the plain metric cone, the Hsiang-Pati chart, the
Cheeger-Nagase chart on a cone over a thickened torus, the shrinking
Euclidean-annulus family, and the mapping-torus cone.  On top of the
pointwise tensors: curve length by composite Gauss-Legendre quadrature,
fiber diameters, log-log fitting of shrink exponents, the exact
change-of-variables identity between the annulus family and the
Cheeger-Nagase chart, and empirical bi-Lipschitz ratios.

Coordinate conventions (all charts exclude t = 0):
  ConeMetric      (t, x...)        dt^2 + t^2 g(x)
  HsiangPati      (t, theta, y1, y2)   dt^2 + t^2 dtheta^2 + t^{2 nu} g~(y)
  CheegerNagase   (t, theta, s, Theta) dt^2 + t^2 dtheta^2
                                       + t^{2 nu} (ds^2 + h(t,s)^2 dTheta^2)
                  with h(t, s) = (s + t^{nu' - nu}) / (2 pi)
  AnnulusFamily   (t, theta, r, psi)   dt^2 + t^2 dtheta^2
                                       + (t^nu - t^nu')^2 dr^2
                                       + ((r-1) t^nu + (2-r) t^nu')^2 dpsi^2
  MappingTorusCone (t, theta, y1, y2)  dt^2 + t^2 dtheta^2 + t^{2 nu} g_theta(y)

At fixed t the annulus fiber {r in [1,2], psi in [0, 2pi]} is isometric to
the Cheeger-Nagase fiber via s = (r - 1)(1 - t^{nu'-nu}), Theta = 2 pi psi;
see cn_annulus_map and verify_cn_identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi
COLLAR_DELTA = 0.1          # width of the two monodromy collars in theta


class MetricError(Exception):
    pass


# ---------------------------------------------------------------------------
# base metrics on the fiber
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BaseMetric:
    """Coefficient field on fiber coordinates; must be symmetric positive
    definite wherever sampled."""
    dimension: int
    coefficients: Callable[[np.ndarray], np.ndarray]
    name: str = "custom"

    def at(self, y) -> np.ndarray:
        m = np.asarray(self.coefficients(np.asarray(y, dtype=float)),
                       dtype=float)
        if m.shape != (self.dimension, self.dimension):
            raise MetricError(
                f"base metric returned shape {m.shape}, expected "
                f"({self.dimension}, {self.dimension})")
        return m


def flat_square(scale: float = 1.0) -> BaseMetric:
    g = (scale ** 2) * np.eye(2)
    return BaseMetric(2, lambda y: g, name=f"flat_square(scale={scale})")


def flat_circle(radius: float = 1.0) -> BaseMetric:
    g = np.array([[radius ** 2]])
    return BaseMetric(1, lambda y: g, name=f"flat_circle(radius={radius})")


@dataclass(frozen=True)
class LinearMonodromy:
    """Finite-order linear gluing of the flat fiber; identity by default."""
    matrix: tuple[tuple[float, ...], ...] = ((1.0, 0.0), (0.0, 1.0))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)

    @property
    def is_identity(self) -> bool:
        a = self.as_array()
        return bool(np.allclose(a, np.eye(a.shape[0]), atol=1e-14))


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeMetric:
    base: BaseMetric

    @property
    def dimension(self) -> int:
        return 1 + self.base.dimension


@dataclass(frozen=True)
class HsiangPati:
    nu: Fraction
    base: BaseMetric = field(default_factory=flat_square)

    def __post_init__(self):
        if self.nu < 1:
            raise MetricError("Hsiang-Pati rate must satisfy nu >= 1")
        if self.base.dimension != 2:
            raise MetricError("Hsiang-Pati fiber must be two-dimensional")

    dimension = 4


@dataclass(frozen=True)
class CheegerNagase:
    nu: Fraction
    nu_prime: Fraction

    def __post_init__(self):
        if not (self.nu_prime > self.nu >= 1):
            raise MetricError("Cheeger-Nagase rates need nu' > nu >= 1")

    dimension = 4

    def h(self, t: float, s: float) -> float:
        return (s + t ** float(self.nu_prime - self.nu)) / TWO_PI


@dataclass(frozen=True)
class AnnulusFamily:
    nu: Fraction
    nu_prime: Fraction

    def __post_init__(self):
        if not (self.nu_prime > self.nu >= 1):
            raise MetricError("annulus family needs nu' > nu >= 1")

    dimension = 4

    def radii(self, t: float) -> tuple[float, float]:
        """Outer and inner radius of the fiber annulus at parameter t."""
        return t ** float(self.nu), t ** float(self.nu_prime)


@dataclass(frozen=True)
class MappingTorusCone:
    nu: Fraction
    base: BaseMetric = field(default_factory=flat_square)
    monodromy: LinearMonodromy = field(default_factory=LinearMonodromy)

    def __post_init__(self):
        if self.nu < 1:
            raise MetricError("mapping-torus rate must satisfy nu >= 1")

    dimension = 4

    def base_at(self, theta: float, y) -> np.ndarray:
        """Two-collar interpolation: the plain fiber metric near theta = 0,
        its monodromy pullback near theta = 2 pi, linear in between."""
        g0 = self.base.at(y)
        if self.monodromy.is_identity:
            return g0
        a = self.monodromy.as_array()
        g1 = a.T @ self.base.at(a @ np.asarray(y, dtype=float)) @ a
        th = float(theta) % TWO_PI
        if th <= COLLAR_DELTA:
            return g0
        if th >= TWO_PI - COLLAR_DELTA:
            return g1
        lam = (th - COLLAR_DELTA) / (TWO_PI - 2 * COLLAR_DELTA)
        return (1 - lam) * g0 + lam * g1


MetricChart = ConeMetric | HsiangPati | CheegerNagase | AnnulusFamily | MappingTorusCone


def metric_tensor_at(chart: MetricChart, point) -> np.ndarray:
    p = np.asarray(point, dtype=float)
    if p.ndim != 1 or p.shape[0] != chart.dimension:
        raise MetricError(
            f"point has {p.shape} coordinates, chart needs {chart.dimension}")
    t = p[0]
    if t <= 0:
        raise MetricError("charts are defined for t > 0 only")
    if isinstance(chart, ConeMetric):
        g = np.zeros((chart.dimension, chart.dimension))
        g[0, 0] = 1.0
        g[1:, 1:] = t ** 2 * chart.base.at(p[1:])
        return g
    if isinstance(chart, HsiangPati):
        g = np.zeros((4, 4))
        g[0, 0] = 1.0
        g[1, 1] = t ** 2
        g[2:, 2:] = t ** (2 * float(chart.nu)) * chart.base.at(p[2:])
        return g
    if isinstance(chart, CheegerNagase):
        s = p[2]
        scale = t ** (2 * float(chart.nu))
        return np.diag([1.0, t ** 2, scale, scale * chart.h(t, s) ** 2])
    if isinstance(chart, AnnulusFamily):
        r = p[2]
        ro, ri = chart.radii(t)
        return np.diag([1.0, t ** 2, (ro - ri) ** 2,
                        ((r - 1) * ro + (2 - r) * ri) ** 2])
    if isinstance(chart, MappingTorusCone):
        g = np.zeros((4, 4))
        g[0, 0] = 1.0
        g[1, 1] = t ** 2
        g[2:, 2:] = t ** (2 * float(chart.nu)) * chart.base_at(p[1], p[2:])
        return g
    raise MetricError(f"unknown chart type {type(chart).__name__}")


# ---------------------------------------------------------------------------
# curves and quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParamCurve:
    """gamma: [a, b] -> chart coordinates; derivative optional (central
    differences otherwise)."""
    a: float
    b: float
    func: Callable[[float], Sequence[float]]
    deriv: Callable[[float], Sequence[float]] | None = None

    def point(self, u: float) -> np.ndarray:
        return np.asarray(self.func(u), dtype=float)

    def velocity(self, u: float) -> np.ndarray:
        if self.deriv is not None:
            return np.asarray(self.deriv(u), dtype=float)
        h = 1e-6 * max(1.0, abs(self.b - self.a))
        return (self.point(u + h) - self.point(u - h)) / (2 * h)


def segment_curve(p, q) -> ParamCurve:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return ParamCurve(0.0, 1.0, lambda u: p + u * (q - p),
                      lambda u: q - p)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def curve_length(chart: MetricChart, curve: ParamCurve, steps: int = 32) -> float:
    """Composite 8-point Gauss-Legendre over `steps` subintervals of
    sqrt(gamma'^T G gamma')."""
    if steps < 2:
        raise MetricError("need at least 2 quadrature subintervals")
    a, b = curve.a, curve.b
    if not b > a:
        raise MetricError("curve parameter interval must be nondegenerate")
    width = (b - a) / steps
    total = 0.0
    for i in range(steps):
        left = a + i * width
        mid = left + width / 2
        half = width / 2
        for node, weight in zip(_GL_NODES, _GL_WEIGHTS):
            u = mid + half * node
            v = curve.velocity(u)
            g = metric_tensor_at(chart, curve.point(u))
            total += weight * half * math.sqrt(max(v @ g @ v, 0.0))
    return total


def fiber_diameter(chart: MetricChart, t: float, samples: int = 9) -> float:
    """Diameter of the shrinking fiber factor at parameter t: t^nu times
    the diameter of the base.  Constant flat bases get the exact diagonal;
    anything else is bounded below by dense pairwise straight segments."""
    if not 0 < t <= 1:
        raise MetricError("fiber diameter needs 0 < t <= 1")
    if isinstance(chart, ConeMetric):
        raise MetricError("cone metric has no designated shrinking fiber")
    if isinstance(chart, (HsiangPati, MappingTorusCone)):
        base = chart.base
        nu = float(chart.nu)
        corners = [np.zeros(base.dimension), np.ones(base.dimension)]
        g0 = base.at(corners[0])
        if np.allclose(g0, base.at(0.5 * np.ones(base.dimension))):
            diag = corners[1] - corners[0]
            diam = math.sqrt(diag @ g0 @ diag)
        else:
            diam = _sampled_diameter(base.at, base.dimension, samples)
        return t ** nu * diam
    if isinstance(chart, CheegerNagase):
        coeff = lambda y: np.diag([1.0, chart.h(t, y[0]) ** 2])
        return t ** float(chart.nu) * _sampled_diameter(coeff, 2, samples)
    if isinstance(chart, AnnulusFamily):
        ro, ri = chart.radii(t)
        # annulus of radii ri < ro in the plane: diameter 2 ro
        return 2.0 * ro
    raise MetricError(f"unknown chart type {type(chart).__name__}")


def _sampled_diameter(coeff, dim: int, samples: int) -> float:
    grid = np.linspace(0.0, 1.0, samples)
    pts = np.stack(np.meshgrid(*([grid] * dim), indexing="ij"),
                   axis=-1).reshape(-1, dim)
    best = 0.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = pts[j] - pts[i]
            mid = 0.5 * (pts[i] + pts[j])
            best = max(best, math.sqrt(d @ coeff(mid) @ d))
    return best


# ---------------------------------------------------------------------------
# shrink-exponent fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShrinkFit:
    exponent: float
    residual: float
    t_samples: tuple[float, ...]
    lengths: tuple[float, ...]

    @property
    def metrically_conical(self) -> bool:
        return abs(self.exponent - 1.0) <= 1e-2


def fit_shrink_exponent(chart: MetricChart,
                        loop_family: Callable[[float], ParamCurve],
                        t_samples: Sequence[float],
                        steps: int = 32) -> ShrinkFit:
    """Least-squares slope of log(length) against log(t)."""
    ts = [float(t) for t in t_samples]
    if len(ts) < 3:
        raise MetricError("need at least 3 t-samples")
    if any(not 0 < t <= 1 for t in ts):
        raise MetricError("t-samples must lie in (0, 1]")
    if max(ts) / min(ts) < 100:
        raise MetricError("t-samples should span at least two decades")
    lengths = [curve_length(chart, loop_family(t), steps) for t in ts]
    if any(l <= 0 for l in lengths):
        raise MetricError("degenerate loop of zero length")
    lx = np.log(ts)
    ly = np.log(lengths)
    (slope, intercept), res = np.polyfit(lx, ly, 1, full=True)[:2]
    residual = float(res[0]) if len(res) else 0.0
    return ShrinkFit(float(slope), residual, tuple(ts), tuple(lengths))


# ---------------------------------------------------------------------------
# the annulus / Cheeger-Nagase identity
# ---------------------------------------------------------------------------

def cn_annulus_map(chart: AnnulusFamily, point) -> np.ndarray:
    """Fiberwise isometry onto the Cheeger-Nagase chart with the same
    rates: s = (r - 1)(1 - t^{nu' - nu}), Theta = 2 pi psi."""
    t, theta, r, psi = np.asarray(point, dtype=float)
    gap = 1.0 - t ** float(chart.nu_prime - chart.nu)
    return np.array([t, theta, (r - 1.0) * gap, TWO_PI * psi])


def verify_cn_identity(nu: Fraction, nu_prime: Fraction,
                       samples: Sequence[Sequence[float]]) -> float:
    """Max pointwise coefficient deviation between the annulus family and
    the Cheeger-Nagase form pulled back through cn_annulus_map.  The
    identity is algebraic, so the deviation is rounding noise only."""
    if nu_prime == nu:
        return 0.0          # both sides the flat annulus scaled by t^nu
    if not nu_prime > nu >= 1:
        raise MetricError("rates must satisfy nu' > nu >= 1")
    cn = CheegerNagase(nu, nu_prime)
    ann = AnnulusFamily(nu, nu_prime)
    worst = 0.0
    for t, r, psi in samples:
        t, r, psi = float(t), float(r), float(psi)
        if not 0 < t <= 1:
            raise MetricError("samples need t in (0, 1]")
        ro, ri = ann.radii(t)
        gap = 1.0 - t ** float(nu_prime - nu)
        s = (r - 1.0) * gap
        scale = t ** (2 * float(nu))
        # dr^2 coefficients: (t^nu - t^nu')^2 vs t^{2 nu} (ds/dr)^2
        lhs_r = (ro - ri) ** 2
        rhs_r = scale * gap ** 2
        # dpsi^2 coefficients: interpolation^2 vs t^{2 nu} h^2 (dTheta/dpsi)^2
        lhs_p = ((r - 1) * ro + (2 - r) * ri) ** 2
        rhs_p = scale * cn.h(t, s) ** 2 * TWO_PI ** 2
        worst = max(worst, abs(lhs_r - rhs_r), abs(lhs_p - rhs_p))
    return worst


def bilipschitz_ratio(chart_a: MetricChart, chart_b: MetricChart,
                      coordinate_map: Callable[[Sequence[float]], Sequence[float]],
                      curves: Sequence[ParamCurve],
                      steps: int = 32) -> float:
    """Empirical lower bound for the bi-Lipschitz constant: worst
    length-distortion ratio over the sampled curves."""
    if not curves:
        raise MetricError("need at least one sample curve")
    worst = 1.0
    for curve in curves:
        # drop any closed-form derivative so both lengths use the same
        # velocity scheme; identical inputs then give the ratio 1.0 exactly
        plain = ParamCurve(curve.a, curve.b, curve.func)
        la = curve_length(chart_a, plain, steps)
        mapped = ParamCurve(curve.a, curve.b,
                            lambda u, c=plain: coordinate_map(c.point(u)))
        lb = curve_length(chart_b, mapped, steps)
        if la <= 0 or lb <= 0:
            raise MetricError("degenerate curve in ratio computation")
        worst = max(worst, la / lb, lb / la)
    return worst
