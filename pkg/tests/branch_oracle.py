"""Construct exact curve equations with prescribed Puiseux branches.

For a branch y(x) = sum c_k x^{e_k} with ramification N (= lcm of the
exponent denominators, all c_k rational), the minimal polynomial over
Q[x] is the characteristic polynomial det(y I - C) of the multiplication
operator C by phi(T) = sum c_k T^{e_k N} on Q[x][T] / (T^N - x).  The
determinant is computed exactly with the package's fraction-free Bareiss
kernel, so the oracle shares no code path with the expansion under test.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from germdecomp.polynomials import MPoly, _bareiss_det


def minimal_polynomial(terms: list[tuple[Fraction, Fraction]]) -> MPoly:
    """Monic (in z2) irreducible equation of the branch z2 = sum c x^e."""
    if not terms:
        return MPoly.monomial((0, 1, 0))
    n = lcm(*[e.denominator for e, _ in terms])
    # multiplication-by-phi matrix over Q[z1] in the basis 1, T, ..., T^{n-1}
    c_matrix = [[MPoly.constant(0) for _ in range(n)] for _ in range(n)]
    for e, c in terms:
        big = int(e * n)
        for j in range(n):
            power, row = divmod(big + j, n)
            c_matrix[row][j] = c_matrix[row][j] + MPoly.monomial(
                (power, 0, 0), c)
    y = MPoly.monomial((0, 1, 0))
    m = [[(y if i == j else MPoly.constant(0)) - c_matrix[i][j]
          for j in range(n)] for i in range(n)]
    return _bareiss_det(m)
