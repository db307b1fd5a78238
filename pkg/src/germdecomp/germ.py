"""Germ-level analysis for surfaces of the shape z3^d = g(z1, z2).

Covers detection of that shape, the one-dimensional singular locus of the
double cover, normalization for d = 2, the discriminant curve of the
normalized germ, and the small amount of transversal-slice data the
decomposition needs.  Inputs outside the supported class raise
CapabilityError rather than returning wrong answers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .polynomials import (
    MPoly,
    PolyError,
    bivariate_gcd,
    partial_derivative,
    resultant,
    squarefree_decompose,
    squarefree_part,
)

Z1, Z2, Z3 = 0, 1, 2


class CapabilityError(Exception):
    """Raised when an input is valid but outside the supported class."""


@dataclass(frozen=True)
class GermInput:
    f: MPoly
    form: str                    # "vertical" or "general"
    d: int | None = None         # z3-degree for the vertical class
    g: MPoly | None = None       # f = z3^d - g when vertical

    @property
    def is_vertical(self) -> bool:
        return self.form == "vertical"


@dataclass(frozen=True)
class SingularLocusReport:
    curve_branches: tuple[tuple[MPoly, int], ...]   # (branch, multiplicity in g)
    embedded_equations: tuple[tuple[str, str], ...]
    isolated_candidates: tuple[tuple[Fraction, Fraction], ...] | str
    d: int


@dataclass(frozen=True)
class NormalizedGerm:
    f_bar: MPoly
    q: MPoly                     # substitution z3 -> q * w
    s: MPoly                     # squarefree part under the square root
    smooth_after_normalization: bool

    @property
    def substitution(self) -> str:
        return f"z3 -> ({self.q.render()}) * w"


@dataclass(frozen=True)
class TransversalData:
    d: int
    m: int

    @property
    def milnor_number(self) -> int:
        return (self.d - 1) * (self.m - 1)

    @property
    def link_components(self) -> int:
        return math.gcd(self.d, self.m)


def classify_input(f: MPoly) -> GermInput:
    """Detect the z3^d - g(z1, z2) shape with unit leading coefficient."""
    if f.is_zero():
        raise PolyError("zero polynomial does not define a germ")
    if f.eval_rational((0, 0, 0)) != 0:
        raise PolyError("germ must vanish at the origin")
    z3_terms = {e: c for e, c in f.terms.items() if e[Z3] > 0}
    if len(z3_terms) == 1:
        (e, c), = z3_terms.items()
        d = e[Z3]
        if e[Z1] == 0 and e[Z2] == 0 and c == 1 and d >= 2:
            g = -(f - MPoly.monomial((0, 0, d)))
            return GermInput(f, "vertical", d=d, g=g)
    return GermInput(f, "general")


def _require_vertical(germ: GermInput) -> None:
    if not germ.is_vertical:
        raise CapabilityError(
            "germ is not of the form z3^d - g(z1, z2); "
            "general germs are out of scope")


def _isolated_candidates(s: MPoly, grid: int = 4) -> tuple:
    """Grid-sampled candidates for isolated singular points of s = 0.
    Heuristic only; points are not certified."""
    if s.is_constant():
        return ()
    s1 = partial_derivative(s, Z1)
    s2 = partial_derivative(s, Z2)
    found = []
    vals = [Fraction(k, grid) for k in range(-grid, grid + 1)]
    for x in vals:
        for y in vals:
            p = (x, y, Fraction(0))
            if s.eval_rational(p) == 0 and s1.eval_rational(p) == 0 \
                    and s2.eval_rational(p) == 0:
                found.append((x, y))
    return tuple(found)


def singular_locus(germ: GermInput) -> SingularLocusReport:
    """One-dimensional singular locus of z3^d = g: the repeated factors of
    g (all factors once d >= 3, since z3 = 0 forces g = 0 there)."""
    _require_vertical(germ)
    dec = squarefree_decompose(germ.g, Z2)
    if germ.d >= 3:
        branches = tuple((f, m) for f, m in dec.factors)
    else:
        branches = tuple((f, m) for f, m in dec.factors if m >= 2)
    embedded = tuple(("z3 = 0", f"{b.render()} = 0") for b, _ in branches)
    s = MPoly.constant(dec.unit)
    for f, m in dec.factors:
        if m % 2 == 1 or germ.d != 2:
            s = s * f
    return SingularLocusReport(branches, embedded, _isolated_candidates(s),
                               germ.d)


def normalize_double_cover(germ: GermInput) -> NormalizedGerm:
    """Write g = s * q^2 and pass to z3^2 - s via z3 -> q * w."""
    _require_vertical(germ)
    if germ.d != 2:
        raise CapabilityError(
            f"normalization is implemented for d = 2 only (got d = {germ.d})")
    dec = squarefree_decompose(germ.g, Z2)
    q = MPoly.constant(1)
    s = MPoly.constant(dec.unit)
    for f, m in dec.factors:
        q = q * f ** (m // 2)
        if m % 2 == 1:
            s = s * f
    f_bar = MPoly.monomial((0, 0, 2)) - s
    return NormalizedGerm(f_bar, q, s, smooth_after_normalization=s.is_constant())


def discriminant_curve(f_bar: MPoly) -> MPoly:
    """Squarefree, sign/content-normalized z3-resultant of f_bar with its
    z3-derivative."""
    if not f_bar.uses_var(Z3):
        raise CapabilityError("normalized germ must depend on z3")
    res = resultant(f_bar, partial_derivative(f_bar, Z3), Z3)
    if res.is_zero():
        raise PolyError("resultant vanishes identically (non-reduced input)")
    if res.is_constant():
        raise PolyError("discriminant is constant: no discriminant curve")
    return squarefree_part(res, Z2 if res.uses_var(Z2) else Z1)


def axis_multiplicity(branch: MPoly, axis: int) -> int:
    """Multiplicity of the projection of the branch curve onto one axis:
    the degree in the fiber variable, after a genericity check on the
    leading coefficient."""
    if branch.uses_var(Z3):
        raise PolyError("branch must be a curve in z1, z2")
    if axis not in (Z1, Z2):
        raise PolyError("axis must be z1 or z2")
    fiber = Z2 if axis == Z1 else Z1
    deg = branch.degree(fiber)
    if deg <= 0:
        raise CapabilityError("branch does not depend on the fiber variable")
    lead = branch.leading_coeff_in(fiber)
    if lead.eval_rational((0, 0, 0)) == 0:
        raise CapabilityError(
            "non-generic coordinates: leading coefficient in the fiber "
            "variable vanishes at the origin")
    return deg


def transversal_data(d: int, m: int) -> TransversalData:
    """Plane-germ model z3^d = w^m transverse to a singular branch."""
    if d < 2 or m < 2:
        raise PolyError("transversal model requires d >= 2 and m >= 2")
    return TransversalData(d, m)
