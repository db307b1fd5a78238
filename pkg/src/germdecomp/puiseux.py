"""Newton polygon and Newton-Puiseux expansion of plane-curve branches.

Branches are fractional-power series y(x) with exact rational exponents.
Coefficients stay exact rationals as long as every root extracted along
the way is rational; the first irrational root switches the branch to
complex floats, but exponents (and hence characteristic data) remain
exact either way.  Conjugate branches are represented once, by the
principal-root representative, with the conjugacy-class size recorded.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .polynomials import MPoly, PolyError, _univariate_gcd, bivariate_gcd

Coeff = Fraction | complex   # exact preferred; complex only when forced

_NUM_TOL = 1e-12


class PuiseuxError(PolyError):
    pass


# ---------------------------------------------------------------------
# Newton polygon
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class NewtonEdge:
    start: tuple[int, int]       # (z1-exponent, z2-exponent), smaller i
    end: tuple[int, int]
    slope: Fraction              # Delta j / Delta i, negative
    exponent: Fraction           # candidate leading exponent, -1/slope


@dataclass(frozen=True)
class NewtonPolygon:
    support: frozenset[tuple[int, int]]
    edges: tuple[NewtonEdge, ...]   # sorted by increasing |slope|


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    points = sorted(set(points))
    hull: list[tuple[int, int]] = []
    for p in points:
        while len(hull) > 1:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (p[0] - x1) * (y2 - y1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton_polygon(g: MPoly) -> NewtonPolygon:
    """Lower convex hull of the support of a bivariate g with g(0,0) = 0.
    Only the negative-slope edges carry Puiseux leading exponents."""
    if g.is_zero() or g.is_constant():
        raise PuiseuxError("Newton polygon needs a nonconstant polynomial")
    if g.uses_var(2):
        raise PuiseuxError("Newton polygon expects a curve in z1, z2")
    if g.eval_rational((0, 0, 0)) != 0:
        raise PuiseuxError("curve must pass through the origin")
    support = [(e[0], e[1]) for e in g.terms]
    hull = _lower_hull(support)
    edges = []
    for a, b in zip(hull, hull[1:]):
        di, dj = b[0] - a[0], b[1] - a[1]
        if dj < 0:
            slope = Fraction(dj, di)
            edges.append(NewtonEdge(a, b, slope, -1 / slope))
    edges.sort(key=lambda e: abs(e.slope))
    return NewtonPolygon(frozenset(support), tuple(edges))


# ---------------------------------------------------------------------
# Branches
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class PuiseuxBranch:
    """One conjugacy class of Puiseux roots of a plane curve."""

    terms: tuple[tuple[Fraction, Coeff], ...]   # exponent -> coefficient
    ramification: int                            # lcm of exponent denominators
    class_size: int                              # number of conjugates
    truncation_order: Fraction | None            # None when exact
    residual_valuation: Fraction | float         # inf when the series is exact
    stable: bool                                 # expanded past the last
                                                 # characteristic exponent

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for _, c in self.terms)

    @property
    def is_terminated(self) -> bool:
        return self.residual_valuation == math.inf

    def evaluate(self, x: complex) -> complex:
        """Principal-power numeric evaluation of the representative."""
        total = 0j
        for e, c in self.terms:
            total += complex(c) * _principal_power(x, e)
        return total

    def leading(self) -> tuple[Fraction, Coeff] | None:
        return self.terms[0] if self.terms else None


def _principal_power(x: complex, e: Fraction) -> complex:
    if x == 0:
        return 0j if e > 0 else complex(1)
    if isinstance(x, (int, float, Fraction)) and x > 0:
        return complex(float(x) ** float(e))
    return cmath.exp(float(e) * cmath.log(x))


def _coeffs_equal(a: Coeff, b: Coeff, tol: float = 1e-9) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(a)),
                                                     abs(complex(b)))


# -- root extraction --------------------------------------------------

def _rational_roots(coeffs: list[Fraction]) -> list[tuple[Fraction, int]]:
    """All rational roots (with multiplicity) of sum coeffs[k] T^k."""
    denom_lcm = reduce(lambda a, b: a * b // math.gcd(a, b),
                       (c.denominator for c in coeffs), 1)
    ints = [int(c * denom_lcm) for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    lead, const = ints[-1], ints[0]
    if const == 0:
        return []   # callers guarantee a nonzero constant term

    def divisors(n: int) -> list[int]:
        n = abs(n)
        out = []
        for d in range(1, int(math.isqrt(n)) + 1):
            if n % d == 0:
                out.extend((d, n // d))
        return sorted(set(out))

    roots = []
    for p in divisors(const):
        for q in divisors(lead):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                mult = 0
                work = ints
                while True:
                    # synthetic division, exact
                    rem = Fraction(0)
                    quot = [Fraction(0)] * (len(work) - 1)
                    for k in range(len(work) - 1, 0, -1):
                        quot[k - 1] = Fraction(work[k]) + rem
                        rem = quot[k - 1] * cand
                    if Fraction(work[0]) + rem != 0:
                        break
                    mult += 1
                    denom = reduce(lambda a, b: a * b // math.gcd(a, b),
                                   (c.denominator for c in quot), 1)
                    work = [int(c * denom) for c in quot]
                if mult and all(r[0] != cand for r in roots):
                    roots.append((cand, mult))
    return roots


def _phi_roots(coeffs: list[Coeff]) -> list[tuple[Coeff, int]]:
    """Nonzero roots of the edge polynomial, with multiplicities.
    Rational roots are found exactly; the rest numerically."""
    if all(isinstance(c, Fraction) for c in coeffs):
        fracs = [Fraction(c) for c in coeffs]
        found = _rational_roots(fracs)
        total_mult = sum(m for _, m in found)
        deg = len(fracs) - 1
        if total_mult == deg:
            return list(found)
        # deflate the rational roots, solve the rest numerically
        work = [Fraction(c) for c in fracs]
        for r, m in found:
            for _ in range(m):
                out = [Fraction(0)] * (len(work) - 1)
                acc = Fraction(0)
                for k in range(len(work) - 1, 0, -1):
                    out[k - 1] = work[k] + acc
                    acc = out[k - 1] * r
                work = out
        numeric = _numeric_roots([complex(c) for c in work])
        return list(found) + numeric
    return _numeric_roots([complex(c) for c in coeffs])


def _numeric_roots(coeffs: list[complex]) -> list[tuple[complex, int]]:
    if len(coeffs) <= 1:
        return []
    arr = np.array(coeffs[::-1], dtype=complex)
    raw = np.roots(arr)
    clusters: list[list[complex]] = []
    scale = max(1.0, max(abs(r) for r in raw))
    for r in sorted(raw, key=lambda z: (z.real, z.imag)):
        for cl in clusters:
            if abs(cl[0] - r) <= 1e-6 * scale:
                cl.append(r)
                break
        else:
            clusters.append([r])
    return [(sum(cl) / len(cl), len(cl)) for cl in clusters]


def _principal_qth_root(zeta: Coeff, q: int) -> Coeff:
    """Root with smallest argument in [0, 2*pi); exact when possible."""
    if q == 1:
        return zeta
    if isinstance(zeta, Fraction) and zeta > 0:
        num = round(zeta.numerator ** (1.0 / q))
        den = round(zeta.denominator ** (1.0 / q))
        if num ** q == zeta.numerator and den ** q == zeta.denominator:
            return Fraction(num, den)
        return complex(float(zeta) ** (1.0 / q))
    z = complex(zeta)
    r = abs(z)
    theta = cmath.phase(z) % (2 * math.pi)
    return r ** (1.0 / q) * cmath.exp(1j * theta / q)


# -- the expansion ----------------------------------------------------

Support = dict[tuple[int, int], Coeff]


def _chop(w: Support) -> Support:
    if not w:
        return w
    scale = max(abs(complex(c)) for c in w.values())
    return {e: c for e, c in w.items()
            if (isinstance(c, Fraction) and c != 0)
            or (not isinstance(c, Fraction) and abs(c) > _NUM_TOL * scale)}


def _edges_of(w: Support) -> list[tuple[int, int, list[Coeff]]]:
    """Negative-slope lower-hull edges as (p, q, phi-coefficients)."""
    pts = _lower_hull([(i, j) for (i, j) in w])
    edges = []
    for a, b in zip(pts, pts[1:]):
        di, dj = b[0] - a[0], b[1] - a[1]
        if dj >= 0:
            continue
        g = math.gcd(di, -dj)
        p, q = di // g, -dj // g
        k_max = -dj // q
        # phi(T) with T = c^q: coefficients read off from the bottom-right
        # endpoint of the edge upward, so phi's roots are the admissible
        # leading coefficients (q-th powers)
        phi: list[Coeff] = []
        for k in range(k_max + 1):
            j = b[1] + k * q
            i = b[0] - k * p
            phi.append(w.get((i, j), Fraction(0)))
        edges.append((p, q, phi))
    return edges


def _substitute(w: Support, p: int, q: int, c: Coeff) -> tuple[Support, int]:
    """Apply x -> x^q, y -> x^p (c + y) and strip the common x power."""
    out: Support = {}
    for (i, j), a in w.items():
        cpow: Coeff = Fraction(1) if isinstance(c, Fraction) else complex(1)
        for l in range(j, -1, -1):
            e = (i * q + p * j, l)
            term = a * math.comb(j, l) * cpow
            prev = out.get(e)
            out[e] = term if prev is None else prev + term
            cpow = cpow * c
    out = _chop(out)
    gamma = min(i for (i, _) in out)
    return {(i - gamma, j): a for (i, j), a in out.items()}, gamma


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _is_squarefree(g: MPoly) -> bool:
    """Whether gcd(g, dg/dz2) is constant, for g with constant leading
    z2-coefficient.

    Since the leading z2-coefficient never vanishes, specializing z1 at any
    rational point can only grow the gcd degree, so a constant specialized
    gcd certifies that g is squarefree.  Only inconclusive specializations
    fall back to the much slower bivariate gcd."""
    dg = g.derivative(1)
    for a in (Fraction(1), Fraction(-2), Fraction(17, 13)):
        pt = MPoly.constant(a)
        if _univariate_gcd(g.subs_var(0, pt), dg.subs_var(0, pt),
                           1).is_constant():
            return True
    return bivariate_gcd(g, dg).is_constant()


def puiseux_expand(g: MPoly, order: Fraction | int,
                   ram_bound: int = 64) -> list[PuiseuxBranch]:
    """Puiseux roots of a squarefree, z2-regular bivariate curve through
    the origin, one branch per conjugacy class, each expanded until the
    residual valuation exceeds `order` and the ramification is stable."""
    order = Fraction(order)
    if g.is_zero() or g.uses_var(2):
        raise PuiseuxError("expected a nonzero curve in z1, z2")
    d2 = g.degree(1)
    if d2 <= 0:
        raise PuiseuxError("curve has z2-degree 0: no branches over the z1-axis")
    if g.eval_rational((0, 0, 0)) != 0:
        raise PuiseuxError("curve must pass through the origin")
    lead = g.leading_coeff_in(1)
    if not lead.is_constant():
        raise PuiseuxError("curve is not z2-regular: leading z2-coefficient "
                           "is non-constant (choose more generic coordinates)")
    if not _is_squarefree(g):
        raise PuiseuxError("curve is not squarefree")

    w0: Support = {(e[0], e[1]): c for e, c in g.terms.items()}
    branches: list[PuiseuxBranch] = []
    _expand(w0, Fraction(1), Fraction(0), (), 1, order, ram_bound, branches)
    branches.sort(key=lambda b: (b.terms[0][0] if b.terms else Fraction(0)))
    return branches


def _make_branch(prefix, class_size, residual, truncation, stable) -> PuiseuxBranch:
    ram = 1
    for e, _ in prefix:
        ram = _lcm(ram, e.denominator)
    return PuiseuxBranch(tuple(prefix), ram, class_size, truncation,
                         residual, stable)


def _expand(w: Support, unit: Fraction, removed: Fraction,
            prefix: tuple, class_size: int, order: Fraction,
            ram_bound: int, out: list[PuiseuxBranch]) -> None:
    if not w:
        raise PuiseuxError("degenerate expansion state")
    min_j = min(j for (_, j) in w)
    if min_j > 0:
        # the partial sum is an exact root
        out.append(_make_branch(prefix, class_size, math.inf, None, True))
        w = {(i, j - min_j): c for (i, j), c in w.items()}
    if max(j for (_, j) in w) == 0:
        return
    if (0, 0) in w:
        # remaining y-roots have nonzero limit: not branches through 0
        return

    lin = w.get((0, 1))
    if lin is not None:
        # simple-root regime: ramification is stable.  The residual
        # y - (partial sum) is x^{e_last} times the remaining local root,
        # whose valuation is unit * min_i0, so the next series term sits
        # exactly at next_exp; stop once it clears the requested order.
        min_i0 = min(i for (i, j) in w if j == 0)
        if prefix:
            next_exp = prefix[-1][0] + unit * min_i0
            if next_exp > order:
                out.append(_make_branch(prefix, class_size, next_exp,
                                        next_exp, True))
                return

    for p, q, phi in _edges_of(w):
        if class_size * q > ram_bound:
            raise PuiseuxError(f"ramification exceeds bound {ram_bound}")
        for zeta, mult in _phi_roots(phi):
            c = _principal_qth_root(zeta, q)
            w2, gamma = _substitute(w, p, q, c)
            unit2 = unit / q
            # exponents accumulate as shift + unit * p / q, where shift
            # is the exponent of the previously extracted term
            shift = prefix[-1][0] if prefix else Fraction(0)
            term_exp = shift + unit * Fraction(p, q)
            _expand(w2, unit2, removed + unit2 * gamma,
                    prefix + ((term_exp, c),), class_size * q,
                    order, ram_bound, out)


# ---------------------------------------------------------------------
# Characteristic data
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class PuiseuxCharacteristic:
    exponents: tuple[Fraction, ...]
    pairs: tuple[tuple[int, int], ...]
    valuation: Fraction | float   # -inf for the zero branch


def characteristic_data(branch: PuiseuxBranch) -> PuiseuxCharacteristic:
    """Characteristic exponents and Puiseux pairs of an expanded branch:
    the exponents whose denominators enlarge the lattice generated so far."""
    if not branch.stable:
        raise PuiseuxError("branch not expanded past its last characteristic "
                           "exponent (ramification not yet stable)")
    if not branch.terms:
        if branch.is_terminated:
            # the zero branch; valuation convention -inf
            return PuiseuxCharacteristic((), (), -math.inf)
        return PuiseuxCharacteristic((), (), math.inf)
    exponents = []
    pairs = []
    lattice = 1
    for e, _ in branch.terms:
        den = e.denominator
        if lattice % den != 0:
            new_lattice = _lcm(lattice, den)
            n = new_lattice // lattice
            m = int(e * new_lattice)
            exponents.append(e)
            pairs.append((m, n))
            lattice = new_lattice
    return PuiseuxCharacteristic(tuple(exponents), tuple(pairs),
                                 branch.terms[0][0])


def branch_distance_exponent(b1: PuiseuxBranch, b2: PuiseuxBranch) -> Fraction | float:
    """Contact order: the exponent of the first differing term; inf when
    the branches agree to their (common) truncation."""
    horizon = min(
        b1.truncation_order if b1.truncation_order is not None else math.inf,
        b2.truncation_order if b2.truncation_order is not None else math.inf)
    t1 = dict(b1.terms)
    t2 = dict(b2.terms)
    for e in sorted(set(t1) | set(t2)):
        if e > horizon:
            break
        c1 = t1.get(e, Fraction(0))
        c2 = t2.get(e, Fraction(0))
        if not _coeffs_equal(c1, c2):
            return e
    if b1.is_terminated and b2.is_terminated:
        return math.inf
    if horizon == math.inf:
        return math.inf
    raise PuiseuxError("truncations too short to distinguish the branches")
