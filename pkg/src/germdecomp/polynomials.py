"""Exact sparse polynomial arithmetic in up to three variables over Q.

Everything downstream (singular locus, discriminant, Puiseux exponents)
needs exact rational answers, so no floating point enters this module.
Polynomials are sparse maps from exponent triples to nonzero Fractions,
with graded-lex ordering fixing rendering and leading-term conventions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

Rational = Fraction

DEFAULT_VARS = ("z1", "z2", "z3")

Expo = tuple[int, int, int]


class PolyError(Exception):
    pass


class ParseError(PolyError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _grlex_key(e: Expo) -> tuple:
    return (sum(e), e)


class MPoly:
    """Sparse exact-rational polynomial in the variables z1, z2, z3.

    Immutable; never stores zero coefficients.
    """

    __slots__ = ("terms", "vars")

    def __init__(self, terms: dict[Expo, Fraction] | None = None,
                 vars: tuple[str, ...] = DEFAULT_VARS):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    clean[(int(e[0]), int(e[1]), int(e[2]))] = c
        self.terms = clean
        self.vars = tuple(vars)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "MPoly":
        return MPoly({})

    @staticmethod
    def constant(c) -> "MPoly":
        return MPoly({(0, 0, 0): Fraction(c)})

    @staticmethod
    def variable(idx: int) -> "MPoly":
        e = [0, 0, 0]
        e[idx] = 1
        return MPoly({tuple(e): Fraction(1)})

    @staticmethod
    def monomial(e: Expo, c=1) -> "MPoly":
        return MPoly({tuple(e): Fraction(c)})

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(e == (0, 0, 0) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolyError("polynomial is not constant")
        return self.terms.get((0, 0, 0), Fraction(0))

    def degree(self, var: int) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(e[var] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def uses_var(self, var: int) -> bool:
        return any(e[var] > 0 for e in self.terms)

    def leading_term(self) -> tuple[Expo, Fraction]:
        """Graded-lex leading term."""
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MPoly.constant(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other) -> "MPoly":
        other = _coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return MPoly(terms, self.vars)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other) -> "MPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "MPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "MPoly":
        other = _coerce(other)
        terms: dict[Expo, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return MPoly(terms, self.vars)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise PolyError("negative power of a polynomial")
        result = MPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "MPoly":
        c = Fraction(c)
        return MPoly({e: c * v for e, v in self.terms.items()}, self.vars)

    def derivative(self, var: int) -> "MPoly":
        terms = {}
        for e, c in self.terms.items():
            if e[var] > 0:
                ne = list(e)
                ne[var] -= 1
                terms[tuple(ne)] = c * e[var]
        return MPoly(terms, self.vars)

    def coeffs_in(self, var: int) -> dict[int, "MPoly"]:
        """Coefficients as polynomials in the remaining variables."""
        out: dict[int, dict[Expo, Fraction]] = {}
        for e, c in self.terms.items():
            k = e[var]
            ne = list(e)
            ne[var] = 0
            out.setdefault(k, {})[tuple(ne)] = c
        return {k: MPoly(t, self.vars) for k, t in out.items()}

    def leading_coeff_in(self, var: int) -> "MPoly":
        d = self.degree(var)
        if d < 0:
            return MPoly.zero()
        return self.coeffs_in(var).get(d, MPoly.zero())

    def eval_rational(self, point: tuple) -> Fraction:
        """Evaluate at a tuple of three rational values."""
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for i in range(3):
                if e[i]:
                    v *= Fraction(point[i]) ** e[i]
            total += v
        return total

    def subs_var(self, var: int, value: "MPoly") -> "MPoly":
        """Substitute a polynomial for one variable."""
        result = MPoly.zero()
        powers: dict[int, MPoly] = {0: MPoly.constant(1)}

        def power(k: int) -> MPoly:
            if k not in powers:
                powers[k] = power(k - 1) * value
            return powers[k]

        for e, c in self.terms.items():
            ne = list(e)
            k = ne[var]
            ne[var] = 0
            result = result + MPoly.monomial(tuple(ne), c) * power(k)
        return result

    # -- division -----------------------------------------------------

    def exact_div(self, divisor: "MPoly") -> "MPoly":
        """Exact division; raises PolyError if the division is not exact."""
        divisor = _coerce(divisor)
        if divisor.is_zero():
            raise PolyError("division by zero polynomial")
        if divisor.is_constant():
            return self.scale(1 / divisor.constant_value())
        rem = dict(self.terms)
        out: dict[Expo, Fraction] = {}
        de, dc = divisor.leading_term()
        while rem:
            e = max(rem, key=_grlex_key)
            c = rem[e]
            qe = (e[0] - de[0], e[1] - de[1], e[2] - de[2])
            if min(qe) < 0:
                raise PolyError("inexact polynomial division")
            qc = c / dc
            out[qe] = out.get(qe, Fraction(0)) + qc
            for ge, gc in divisor.terms.items():
                te = (qe[0] + ge[0], qe[1] + ge[1], qe[2] + ge[2])
                nv = rem.get(te, Fraction(0)) - qc * gc
                if nv == 0:
                    rem.pop(te, None)
                else:
                    rem[te] = nv
        return MPoly(out, self.vars)

    def divides(self, other: "MPoly") -> bool:
        try:
            other.exact_div(self)
            return True
        except PolyError:
            return False

    # -- normalization ------------------------------------------------

    def normalized(self) -> "MPoly":
        """Scale so coefficients are coprime integers and the graded-lex
        leading coefficient is positive. Deterministic representative of
        the associate class."""
        if not self.terms:
            return self
        denom_lcm = 1
        for c in self.terms.values():
            denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
        num_gcd = 0
        for c in self.terms.values():
            num_gcd = math.gcd(num_gcd, abs(c.numerator * denom_lcm // c.denominator))
        scale = Fraction(denom_lcm, num_gcd)
        _, lc = self.leading_term()
        if lc < 0:
            scale = -scale
        return self.scale(scale)

    # -- rendering ----------------------------------------------------

    def sorted_terms(self) -> list[tuple[Expo, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]),
                      reverse=True)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for i, name in enumerate(self.vars):
                if e[i] == 1:
                    factors.append(name)
                elif e[i] > 1:
                    factors.append(f"{name}^{e[i]}")
            mag = abs(c)
            if not factors or mag != 1:
                factors.insert(0, str(mag))
            body = "*".join(factors)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"MPoly({self.render()})"


def _coerce(x) -> MPoly:
    if isinstance(x, MPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return MPoly.constant(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to MPoly")


# ---------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------

_TOKEN_CHARS = set("+-*^()/")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        elif ch in _TOKEN_CHARS:
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    """Recursive descent over: expr := term (('+'|'-') term)*;
    term := factor ('*' factor)*; factor := ('-')* atom ('^' int)?;
    atom := literal | var | '(' expr ')'.  No implicit multiplication."""

    def __init__(self, text: str, var_map: dict[str, int]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.var_map = var_map

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> MPoly:
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return p

    def expr(self) -> MPoly:
        if self.peek()[0] == "+":
            self.next()
        result = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> MPoly:
        result = self.factor()
        while self.peek()[0] == "*":
            self.next()
            result = result * self.factor()
        return result

    def factor(self) -> MPoly:
        if self.peek()[0] == "-":
            self.next()
            return -self.factor()
        base = self.atom()
        if self.peek()[0] == "^":
            self.next()
            tok = self.expect("int")
            return base ** int(tok[1])
        return base

    def atom(self) -> MPoly:
        tok = self.next()
        if tok[0] == "int":
            num = int(tok[1])
            # rational literal p/q
            if self.peek()[0] == "/":
                self.next()
                den_tok = self.expect("int")
                den = int(den_tok[1])
                if den == 0:
                    raise ParseError("zero denominator in literal", den_tok[2])
                return MPoly.constant(Fraction(num, den))
            return MPoly.constant(num)
        if tok[0] == "name":
            idx = self.var_map.get(tok[1])
            if idx is None:
                raise ParseError(f"unknown identifier {tok[1]!r}", tok[2])
            return MPoly.variable(idx)
        if tok[0] == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2])


def parse_poly(text: str, vars: Iterable[str] = DEFAULT_VARS) -> MPoly:
    """Parse an expression over +, -, *, ^, rational literals and the
    declared variables (positionally mapped onto the three axes)."""
    names = list(vars)
    if not 1 <= len(names) <= 3:
        raise PolyError("between one and three variables required")
    var_map = {name: i for i, name in enumerate(names)}
    if len(var_map) != len(names):
        raise PolyError("duplicate variable name")
    poly = _Parser(text, var_map).parse()
    full = tuple(names) + DEFAULT_VARS[len(names):]
    return MPoly(poly.terms, full)


def partial_derivative(p: MPoly, var: int) -> MPoly:
    """Formal partial derivative; var in {0, 1, 2}."""
    if var not in (0, 1, 2):
        raise PolyError("variable index must be 0, 1 or 2")
    return p.derivative(var)


# ---------------------------------------------------------------------
# Resultants
# ---------------------------------------------------------------------

def _bareiss_det(m: list[list[MPoly]]) -> MPoly:
    """Fraction-free determinant; all interior divisions are exact."""
    n = len(m)
    if n == 0:
        return MPoly.constant(1)
    m = [row[:] for row in m]
    sign = 1
    prev = MPoly.constant(1)
    for k in range(n - 1):
        pivot_row = next((r for r in range(k, n) if not m[r][k].is_zero()), None)
        if pivot_row is None:
            return MPoly.zero()
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]).exact_div(prev)
            m[i][k] = MPoly.zero()
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def resultant(a: MPoly, b: MPoly, var: int) -> MPoly:
    """Sylvester resultant eliminating `var`, exact over Q."""
    if a.is_zero() and b.is_zero():
        raise PolyError("resultant of two zero polynomials")
    if a.is_zero() or b.is_zero():
        return MPoly.zero()
    da, db = a.degree(var), b.degree(var)
    ca, cb = a.coeffs_in(var), b.coeffs_in(var)
    if da == 0 and db == 0:
        return MPoly.constant(1)
    if da == 0:
        return a ** db
    if db == 0:
        return b ** da
    n = da + db
    zero = MPoly.zero()
    rows: list[list[MPoly]] = []
    arow = [ca.get(da - k, zero) for k in range(da + 1)]
    brow = [cb.get(db - k, zero) for k in range(db + 1)]
    for shift in range(db):
        rows.append([zero] * shift + arow + [zero] * (n - da - 1 - shift))
    for shift in range(da):
        rows.append([zero] * shift + brow + [zero] * (n - db - 1 - shift))
    return _bareiss_det(rows)


# ---------------------------------------------------------------------
# GCDs
# ---------------------------------------------------------------------

def _univariate_gcd(a: MPoly, b: MPoly, var: int) -> MPoly:
    """Euclidean gcd of polynomials in a single variable over Q; remainders
    are renormalized to primitive integer form each round to keep the
    coefficients from exploding."""
    if not a.is_zero():
        a = a.normalized()
    if not b.is_zero():
        b = b.normalized()
    while not b.is_zero():
        cb = b.coeffs_in(var)
        da, db = a.degree(var), b.degree(var)
        if da < db:
            a, b = b, a
            continue
        # single long-division remainder step
        r = a
        while not r.is_zero() and r.degree(var) >= db:
            dr = r.degree(var)
            lead_r = r.coeffs_in(var)[dr].constant_value()
            lead_b = cb[db].constant_value()
            shift = [0, 0, 0]
            shift[var] = dr - db
            r = r - b.scale(lead_r / lead_b) * MPoly.monomial(tuple(shift))
        if not r.is_zero():
            r = r.normalized()
        a, b = b, r
    return a.normalized() if not a.is_zero() else a


def _only_vars(p: MPoly, allowed: set[int]) -> bool:
    return all(all(e[i] == 0 for i in range(3) if i not in allowed)
               for e in p.terms)


def _content_in(p: MPoly, var: int) -> MPoly:
    """GCD of the coefficients of p viewed in `var` (a polynomial in the
    other variables; here always effectively univariate)."""
    coeffs = list(p.coeffs_in(var).values())
    g = MPoly.zero()
    other = next((i for i in range(3) if i != var and any(c.uses_var(i) for c in coeffs)), None)
    for c in coeffs:
        if g.is_zero():
            g = c.normalized()
        elif other is None:
            g = MPoly.constant(1)
        else:
            g = _univariate_gcd(g, c, other)
        if g.is_constant():
            return MPoly.constant(1)
    return g


def bivariate_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Primitive gcd of polynomials in z1, z2 via a primitive
    pseudo-remainder sequence in z2 over Q[z1]."""
    if not (_only_vars(a, {0, 1}) and _only_vars(b, {0, 1})):
        raise PolyError("bivariate_gcd expects polynomials in z1, z2 only")
    if a.is_zero():
        return b.normalized()
    if b.is_zero():
        return a.normalized()
    if not a.uses_var(1) and not b.uses_var(1):
        return _univariate_gcd(a, b, 0)
    if not a.uses_var(1):
        return _univariate_gcd(a, _content_in(b, 1), 0)
    if not b.uses_var(1):
        return _univariate_gcd(b, _content_in(a, 1), 0)

    cont = _univariate_gcd(_content_in(a, 1), _content_in(b, 1), 0)
    a = a.exact_div(_content_in(a, 1))
    b = b.exact_div(_content_in(b, 1))
    if a.degree(1) < b.degree(1):
        a, b = b, a
    while True:
        r = _pseudo_remainder(a, b, 1)
        if r.is_zero():
            g = b.exact_div(_content_in(b, 1)) if b.uses_var(1) else MPoly.constant(1)
            break
        if not r.uses_var(1):
            g = MPoly.constant(1)
            break
        r = r.exact_div(_content_in(r, 1))
        a, b = b, r
    return (g * cont).normalized()


def _pseudo_remainder(a: MPoly, b: MPoly, var: int) -> MPoly:
    da, db = a.degree(var), b.degree(var)
    if da < db:
        return a
    lb = b.leading_coeff_in(var)
    r = a.scale(1) * lb ** (da - db + 1)
    while not r.is_zero() and r.degree(var) >= db:
        dr = r.degree(var)
        lr = r.coeffs_in(var)[dr]
        shift = [0, 0, 0]
        shift[var] = dr - db
        # lr is divisible by lb at every step of the pseudo-division
        r = r - b * lr.exact_div(lb) * MPoly.monomial(tuple(shift))
    return r


# ---------------------------------------------------------------------
# Squarefree decomposition
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class SquarefreeDecomposition:
    factors: tuple[tuple[MPoly, int], ...]
    unit: Fraction

    def reconstruct(self) -> MPoly:
        p = MPoly.constant(self.unit)
        for f, m in self.factors:
            p = p * f ** m
        return p


def _gcd_for(a: MPoly, b: MPoly, main_var: int) -> MPoly:
    if main_var == 2 or a.uses_var(2) or b.uses_var(2):
        raise PolyError("squarefree decomposition supports z1, z2 inputs only")
    return bivariate_gcd(a, b)


def _yun(p: MPoly, main_var: int) -> list[tuple[MPoly, int]]:
    """Yun's squarefree decomposition of a primitive polynomial, viewed
    univariately in main_var over the fraction field of the other variable."""
    factors = []
    dp = p.derivative(main_var)
    a = _gcd_for(p, dp, main_var)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    d = c - b.derivative(main_var)
    i = 1
    while b.total_degree() > 0:
        f = _gcd_for(b, d, main_var)
        if f.total_degree() > 0:
            factors.append((f.normalized(), i))
        b = b.exact_div(f)
        c = d.exact_div(f)
        d = c - b.derivative(main_var)
        i += 1
    return factors


def squarefree_decompose(p: MPoly, main_var: int) -> SquarefreeDecomposition:
    """Yun-style squarefree decomposition in main_var; the content with
    respect to main_var is decomposed separately and merged back in."""
    if p.is_zero():
        raise PolyError("squarefree decomposition of zero")
    if p.is_constant():
        return SquarefreeDecomposition((), p.constant_value())
    factors: list[tuple[MPoly, int]] = []
    work = p
    if work.uses_var(main_var):
        cont = _content_in(work, main_var)
        if cont.total_degree() > 0:
            work = work.exact_div(cont)
            other = next(i for i in range(3) if cont.uses_var(i))
            factors.extend(_yun(cont, other))
        factors.extend(_yun(work.normalized(), main_var))
    else:
        other = next(i for i in range(3) if work.uses_var(i))
        factors.extend(_yun(work.normalized(), other))
    product = MPoly.constant(1)
    for f, m in factors:
        product = product * f ** m
    unit = p.exact_div(product)
    return SquarefreeDecomposition(tuple(factors), unit.constant_value())


def squarefree_part(p: MPoly, main_var: int = 1) -> MPoly:
    """Product of the distinct factors, normalized."""
    dec = squarefree_decompose(p, main_var)
    out = MPoly.constant(1)
    for f, _ in dec.factors:
        out = out * f
    return out.normalized()
