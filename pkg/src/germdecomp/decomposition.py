"""Annotated decomposition graph of metric-cone pieces.

Assembles the carousel regions and the singular-locus data into a graph
with four piece kinds: Seifert cones (metrically conical, rate 1),
thickened-torus cones (the gluing collars, two rates), mapping-torus
cones (one fractional rate), and tubular cones around the singular
branches.  Collar pieces always separate the other kinds.  Also here:
the combinatorial circle gluing used to compare with plumbing
descriptions, Hirzebruch-Jung negative continued fractions, and DOT
serialization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .carousel import Region
from .germ import SingularLocusReport, TransversalData
from .metrics import (
    CheegerNagase,
    ConeMetric,
    HsiangPati,
    MappingTorusCone as MappingTorusChart,
    MetricChart,
    flat_circle,
    flat_square,
)


class GraphError(Exception):
    pass


SEIFERT = "SeifertCone"
THICKENED_TORUS = "ThickenedTorusCone"
MAPPING_TORUS = "MappingTorusCone"
TUBULAR = "TubularCone"
KINDS = (SEIFERT, THICKENED_TORUS, MAPPING_TORUS, TUBULAR)


@dataclass(frozen=True)
class Piece:
    kind: str
    nu: Fraction
    nu_prime: Fraction | None
    chart: MetricChart
    provenance: str
    transversal: TransversalData | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GraphError(f"unknown piece kind {self.kind!r}")
        if self.kind == SEIFERT and self.nu != 1:
            raise GraphError("Seifert cones are metrically conical (nu = 1)")
        if self.kind == THICKENED_TORUS and not (self.nu_prime or 0) > self.nu:
            raise GraphError("thickened-torus cone needs nu' > nu")
        if self.kind == TUBULAR and self.transversal is None:
            raise GraphError("tubular cone must reference a singular branch")

    @property
    def metrically_conical(self) -> bool:
        # tubular pieces around the singular branches are never conical,
        # whatever their radial rate
        return self.kind != TUBULAR and self.nu == 1 and self.nu_prime is None

    @property
    def label(self) -> str:
        if self.kind == THICKENED_TORUS:
            return f"{self.kind}({self.nu},{self.nu_prime})"
        if self.kind == TUBULAR:
            tr = self.transversal
            return f"{self.kind}(d={tr.d},m={tr.m})"
        return f"{self.kind}({self.nu})"


@dataclass(frozen=True)
class DecompositionGraph:
    pieces: tuple[Piece, ...]
    edges: tuple[tuple[int, int, str], ...]
    boundary_order: tuple[tuple[int, ...], ...]   # per piece: incident edges

    def __post_init__(self):
        n = len(self.pieces)
        for i, j, _ in self.edges:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise GraphError("edge endpoints out of range")
        if n and not self._connected():
            raise GraphError("decomposition graph must be connected")
        for idx, piece in enumerate(self.pieces):
            deg = sum(1 for i, j, _ in self.edges if idx in (i, j))
            if piece.kind == THICKENED_TORUS and deg != 2:
                raise GraphError(
                    f"collar piece {idx} has degree {deg}, expected 2")
            if piece.kind != THICKENED_TORUS:
                for i, j, _ in self.edges:
                    if idx in (i, j):
                        other = self.pieces[j if i == idx else i]
                        if other.kind != THICKENED_TORUS:
                            raise GraphError(
                                "non-collar pieces must be separated by a "
                                "thickened-torus cone")

    def _connected(self) -> bool:
        seen = {0}
        frontier = [0]
        while frontier:
            v = frontier.pop()
            for i, j, _ in self.edges:
                if i == v and j not in seen:
                    seen.add(j); frontier.append(j)
                elif j == v and i not in seen:
                    seen.add(i); frontier.append(i)
        return len(seen) == len(self.pieces)


def _collar_chart(nu: Fraction, nu_prime: Fraction) -> MetricChart:
    return CheegerNagase(nu, nu_prime)


def _make_piece(kind: str, nu: Fraction, nu_prime: Fraction | None,
                provenance: str,
                transversal: TransversalData | None = None) -> Piece:
    if kind == SEIFERT:
        chart: MetricChart = ConeMetric(flat_circle())
    elif kind == THICKENED_TORUS:
        chart = _collar_chart(nu, nu_prime)
    elif kind == MAPPING_TORUS:
        chart = MappingTorusChart(nu)
    else:
        chart = ConeMetric(flat_circle())
    return Piece(kind, nu, nu_prime, chart, provenance, transversal)


def assemble(locus: SingularLocusReport,
             regions: Sequence[Region],
             transversal: Mapping[int, TransversalData] | Sequence[TransversalData]
             ) -> DecompositionGraph:
    """Chain assembly in carousel nesting order.  The outer Lambda piece
    and the cone frame merge into one Seifert cone; inner Lambda gaps are
    absorbed by the enclosing mapping-torus piece; each Omega collar is a
    thickened-torus cone; one tubular cone per singular branch sits at the
    inner end behind its own collar."""
    branches = locus.curve_branches
    if isinstance(transversal, Mapping):
        tdata = [transversal.get(i) for i in range(len(branches))]
    else:
        tdata = list(transversal)
    if len(tdata) != len(branches) or any(t is None for t in tdata):
        raise GraphError(
            f"need one transversal datum per singular branch "
            f"({len(branches)} branches, {len(tdata)} given)")

    levels = sorted({r.nu for r in regions if r.kind == "upsilon"})
    pieces: list[Piece] = [
        _make_piece(SEIFERT, Fraction(1), None, "Lambda_1+frame")]
    for k, nu in enumerate(levels, start=1):
        nu_prev = Fraction(1) if k == 1 else levels[k - 2]
        pieces.append(_make_piece(THICKENED_TORUS, nu_prev, nu, f"Omega_{k}"))
        pieces.append(_make_piece(MAPPING_TORUS, nu, None,
                                  f"Upsilon_{k}+Lambda_{k + 1}"))
    inner_nu = levels[-1] if levels else Fraction(1)
    for i, ((branch, mult), tr) in enumerate(zip(branches, tdata)):
        pieces.append(_make_piece(THICKENED_TORUS, inner_nu, inner_nu + 1,
                                  f"collar(branch_{i})"))
        pieces.append(_make_piece(TUBULAR, Fraction(1), None,
                                  f"branch_{i}:{branch.render()}",
                                  transversal=tr))

    edges: list[tuple[int, int, str]] = []
    # the carousel chain
    chain_len = 1 + 2 * len(levels)
    for a in range(chain_len - 1):
        edges.append((a, a + 1, "isometric boundary identification"))
    # tubular branches hang off the innermost chain piece
    anchor = chain_len - 1
    idx = chain_len
    for i in range(len(branches)):
        edges.append((anchor, idx, "isometric boundary identification"))
        edges.append((idx, idx + 1, "isometric boundary identification"))
        idx += 2

    boundary = []
    for v in range(len(pieces)):
        incident = tuple(e for e, (i, j, _) in enumerate(edges)
                         if v in (i, j))
        boundary.append(incident)
    return DecompositionGraph(tuple(pieces), tuple(edges), tuple(boundary))


# ---------------------------------------------------------------------------
# circle gluing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MarkedCircle:
    branch: int
    sheet: int
    degree: int
    host: str = ""

    def __post_init__(self):
        if self.degree < 1:
            raise GraphError("covering degree must be >= 1")


@dataclass(frozen=True)
class GluedCircle:
    target: str
    members: tuple[MarkedCircle, ...]
    degree: int


def glue_circles(circles: Sequence[MarkedCircle],
                 images: Mapping[tuple[int, int], str]) -> tuple[GluedCircle, ...]:
    """Partition the marked circles by their image circle; each class
    becomes one identified circle and must have a uniform covering
    degree."""
    classes: dict[str, list[MarkedCircle]] = {}
    for c in circles:
        key = (c.branch, c.sheet)
        if key not in images:
            raise GraphError(f"circle {key} has no assigned target")
        classes.setdefault(images[key], []).append(c)
    out = []
    for target in sorted(classes):
        members = classes[target]
        degrees = {c.degree for c in members}
        if len(degrees) != 1:
            raise GraphError(
                f"inconsistent covering degrees {sorted(degrees)} over "
                f"target {target!r}")
        out.append(GluedCircle(target, tuple(members), degrees.pop()))
    return tuple(out)


# ---------------------------------------------------------------------------
# Hirzebruch-Jung continued fractions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HJFraction:
    n: int
    q: int
    entries: tuple[int, ...]

    def value(self) -> Fraction:
        acc = Fraction(self.entries[-1])
        for a in reversed(self.entries[:-1]):
            acc = a - 1 / acc
        return acc


def hj_continued_fraction(n: int, q: int) -> HJFraction:
    """Negative-regular continued fraction n/q = a1 - 1/(a2 - 1/(...)),
    all entries >= 2."""
    if not (isinstance(n, int) and isinstance(q, int)):
        raise GraphError("arguments must be integers")
    if not n > q >= 1:
        raise GraphError("need n > q >= 1")
    if math.gcd(n, q) != 1:
        raise GraphError("n and q must be coprime")
    n0, q0 = n, q
    entries = []
    while q > 0:
        a = -(-n // q)           # ceil(n / q)
        entries.append(a)
        n, q = q, a * q - n
    return HJFraction(n0, q0, tuple(entries))


# ---------------------------------------------------------------------------
# summaries and serialization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraphSummary:
    counts: tuple[tuple[str, int], ...]
    flags: tuple[tuple[int, str, str, bool], ...]   # index, kind, rate, conical

    @property
    def conical_count(self) -> int:
        return sum(1 for _, _, _, c in self.flags if c)


def summary(graph: DecompositionGraph) -> GraphSummary:
    counts = {k: 0 for k in KINDS}
    flags = []
    for i, p in enumerate(graph.pieces):
        counts[p.kind] += 1
        rate = str(p.nu) if p.nu_prime is None else f"{p.nu}->{p.nu_prime}"
        flags.append((i, p.kind, rate, p.metrically_conical))
    return GraphSummary(tuple((k, counts[k]) for k in KINDS if counts[k]),
                        tuple(flags))


def to_dot(graph: DecompositionGraph) -> str:
    lines = ["graph G {"]
    for i, p in enumerate(graph.pieces):
        lines.append(f'  n{i} [label="{p.label}"];')
    for i, j, ann in graph.edges:
        lines.append(f'  n{i} -- n{j} [label="{ann}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
