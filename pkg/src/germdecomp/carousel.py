"""Carousel partition of a truncated cone neighborhood of a tangent line.

The neighborhood A = {|x| <= eps, |y - alpha*x| <= mu*|x|} is cut into
bands around the truncated Puiseux approximants of a discriminant branch:
Upsilon_k at scale |x|^{nu_k} for each characteristic exponent nu_k,
transition collars Omega_k between consecutive scales, and the leftover
Lambda pieces.  Classification is a deterministic decision list, so every
point of A lands in exactly one region.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .polynomials import PolyError
from .puiseux import PuiseuxBranch, characteristic_data, _principal_power


class CarouselError(PolyError):
    pass


@dataclass(frozen=True)
class CarouselConfig:
    """Band constants; the construction only needs them positive with
    alpha_band < beta_band.  Defaults keep every region nonempty at desk
    scale."""
    epsilon: float = 0.25
    mu: float = 2.0
    alpha_band: float = 0.5     # lower band constant alpha_k (all levels)
    beta_band: float = 2.0      # upper band constant beta_k
    gamma_band: float = 0.25    # collar constant gamma_k

    def validate(self) -> None:
        if not (0 < self.epsilon <= 1):
            raise CarouselError("epsilon must be in (0, 1]")
        if min(self.mu, self.alpha_band, self.beta_band, self.gamma_band) <= 0:
            raise CarouselError("constants must be positive")
        if self.alpha_band >= self.beta_band:
            raise CarouselError("need alpha_band < beta_band")


@dataclass(frozen=True)
class Region:
    kind: str                      # "upsilon" | "omega" | "lambda" | "outer"
    index: int                     # level k (lambda pieces: 1..m+1)
    nu: Fraction                   # shrink rate of the region
    nu_prev: Fraction | None       # inner/outer exponent pair for omega
    approximant: tuple = ()        # truncated branch terms defining the band

    @property
    def label(self) -> str:
        if self.kind == "upsilon":
            return f"Upsilon_{self.index}"
        if self.kind == "omega":
            return f"Omega_{self.index}"
        if self.kind == "lambda":
            return f"Lambda_{self.index}"
        return "OuterA"


@dataclass(frozen=True)
class CarouselSpec:
    epsilon: float
    mu: float
    tangent_coefficient: complex
    branch: PuiseuxBranch
    levels: tuple[Fraction, ...]             # characteristic exponents
    approximants: tuple[tuple, ...]          # per level: terms below nu_k
    constants: tuple[tuple[float, float, float], ...]   # (alpha, beta, gamma)
    regions: tuple[Region, ...]


def _approximant_terms(branch: PuiseuxBranch, cutoff: Fraction) -> tuple:
    return tuple((e, c) for e, c in branch.terms if e < cutoff)


def _eval_terms(terms, x: complex) -> complex:
    return sum((complex(c) * _principal_power(x, e) for e, c in terms), 0j)


def build_carousel(branches: Sequence[PuiseuxBranch],
                   config: CarouselConfig | None = None
                   ) -> tuple[CarouselSpec, tuple[Region, ...]]:
    """Region list for one tangent direction, outermost to innermost.
    The first branch fixes the level structure; additional branches must
    share its tangent coefficient."""
    if not branches:
        raise CarouselError("at least one branch is required")
    config = config or CarouselConfig()
    config.validate()
    primary = branches[0]
    char = characteristic_data(primary)
    levels = char.exponents
    tangent = next((c for e, c in primary.terms if e == 1), Fraction(0))
    for other in branches[1:]:
        other_tangent = next((c for e, c in other.terms if e == 1), Fraction(0))
        if abs(complex(other_tangent) - complex(tangent)) > 1e-9:
            raise CarouselError(
                "branches with distinct tangent lines need separate carousels")

    m = len(levels)
    approximants = tuple(_approximant_terms(primary, nu) for nu in levels)
    constants = tuple((config.alpha_band, config.beta_band, config.gamma_band)
                      for _ in range(m))

    regions: list[Region] = [Region("lambda", 1, Fraction(1), None)]
    for k in range(1, m + 1):
        nu_prev = Fraction(1) if k == 1 else levels[k - 2]
        if k >= 2:
            regions.append(Region("lambda", k, nu_prev, None,
                                  approximants[k - 1]))
        regions.append(Region("omega", k, levels[k - 1], nu_prev,
                              approximants[k - 1]))
        regions.append(Region("upsilon", k, levels[k - 1], None,
                              approximants[k - 1]))
    if m:
        regions.append(Region("lambda", m + 1, levels[-1], None,
                              _approximant_terms(primary, levels[-1] + 1)))
    regions.append(Region("outer", 0, Fraction(1), None))

    spec = CarouselSpec(config.epsilon, config.mu, complex(tangent), primary,
                        levels, approximants, constants, tuple(regions))
    return spec, tuple(regions)


def _region_by(spec: CarouselSpec, kind: str, index: int) -> Region:
    for r in spec.regions:
        if r.kind == kind and r.index == index:
            return r
    raise CarouselError(f"no region {kind}/{index} in this carousel")


def classify_point(spec: CarouselSpec, x: complex, y: complex) -> Region:
    """Deterministic membership: Upsilon bands first (lowest level wins),
    then Omega collars, then the Lambda gaps, innermost Lambda last."""
    x = complex(x)
    y = complex(y)
    if x == 0:
        raise CarouselError("the cone apex x = 0 is not classified")
    ax = abs(x)
    if ax > spec.epsilon:
        raise CarouselError(f"|x| exceeds epsilon = {spec.epsilon}")
    if abs(y - spec.tangent_coefficient * x) > spec.mu * ax:
        return _region_by(spec, "outer", 0)

    m = len(spec.levels)
    if m == 0:
        return _region_by(spec, "lambda", 1)
    # distances to the truncated approximants, and the band scales
    r = [abs(y - _eval_terms(spec.approximants[k], x)) for k in range(m)]
    t = [ax ** float(nu) for nu in spec.levels]
    t_outer = [ax] + t[:-1]

    for k in range(m):
        alpha, beta, _ = spec.constants[k]
        if alpha * t[k] <= r[k] <= beta * t[k]:
            return _region_by(spec, "upsilon", k + 1)
    for k in range(m):
        _, beta, gamma = spec.constants[k]
        if beta * t[k] < r[k] <= gamma * t_outer[k]:
            return _region_by(spec, "omega", k + 1)
    for k in range(m):
        _, _, gamma = spec.constants[k]
        if k == 0:
            if r[0] > gamma * t_outer[0]:
                return _region_by(spec, "lambda", 1)
        else:
            alpha_prev = spec.constants[k - 1][0]
            if gamma * t_outer[k] < r[k] < alpha_prev * t_outer[k]:
                return _region_by(spec, "lambda", k + 1)
    return _region_by(spec, "lambda", m + 1)


@dataclass(frozen=True)
class MetricAssignment:
    kind: str                      # "mapping_torus_cone" | "cheeger_nagase"
                                   # | "seifert_cone"
    nu: Fraction
    nu_prime: Fraction | None
    base: str                      # "polygon" | "disk" | "link"
    metrically_conical: bool


def region_metric_type(region: Region) -> MetricAssignment:
    """Model metric attached to a carousel region: mapping-torus cones on
    the Upsilon bands and inner Lambda pieces, Cheeger-Nagase on the Omega
    collars, metrically conical Seifert cones at rate 1."""
    if region.kind == "upsilon":
        return MetricAssignment("mapping_torus_cone", region.nu, None,
                                "polygon", region.nu == 1)
    if region.kind == "omega":
        return MetricAssignment("cheeger_nagase", region.nu_prev, region.nu,
                                "torus", False)
    if region.kind in ("lambda", "outer"):
        if region.nu == 1:
            return MetricAssignment("seifert_cone", Fraction(1), None, "link",
                                    True)
        return MetricAssignment("mapping_torus_cone", region.nu, None, "disk",
                                False)
    raise CarouselError(f"unknown region kind {region.kind!r}")
