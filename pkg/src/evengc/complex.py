"""The edge-contraction differential and its matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .graphs import (
    DEFAULT_VERTEX_CAP,
    CanonicalGraph,
    GradedBasis,
    LabelledGraph,
    canonicalize,
    enumerate_basis,
)
from .linalg import SparseRationalMatrix, write_sms

__all__ = [
    "GraphVector",
    "DifferentialMatrix",
    "contract_edge",
    "delta",
    "delta_labelled",
    "delta_matrix",
]


@dataclass
class GraphVector:
    """Rational combination of canonical classes in one bigrade."""

    k: int
    ell: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {g: Fraction(c) for g, c in self.terms.items() if c}
        for g in self.terms:
            if (g.degree, g.excess) != (self.k, self.ell):
                raise ValueError(f"class {g} is not in bigrade ({self.k}, {self.ell})")

    @classmethod
    def from_graph(cls, g: LabelledGraph, coeff=1) -> "GraphVector":
        """The vector ``coeff * [g]``; zero when the class of ``g`` vanishes."""
        out = cls(g.degree, g.excess)
        out.add_graph(g, coeff)
        return out

    def add_graph(self, g: LabelledGraph, coeff=1) -> None:
        if (g.degree, g.excess) != (self.k, self.ell):
            raise ValueError("bigrade mismatch")
        c = canonicalize(g)
        if c is None:
            return
        cg, sign = c
        self._add(cg, sign * Fraction(coeff))

    def _add(self, cg: CanonicalGraph, coeff: Fraction) -> None:
        x = self.terms.get(cg, 0) + coeff
        if x:
            self.terms[cg] = x
        else:
            self.terms.pop(cg, None)

    def __add__(self, other: "GraphVector") -> "GraphVector":
        if (self.k, self.ell) != (other.k, other.ell):
            raise ValueError("bigrade mismatch")
        out = GraphVector(self.k, self.ell, dict(self.terms))
        for g, c in other.terms.items():
            out._add(g, c)
        return out

    def __neg__(self) -> "GraphVector":
        return self.scale(-1)

    def __sub__(self, other: "GraphVector") -> "GraphVector":
        return self + (-other)

    def scale(self, c) -> "GraphVector":
        return GraphVector(self.k, self.ell, {g: c * x for g, x in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def coordinates(self, basis: GradedBasis) -> list[Fraction]:
        out = [Fraction(0)] * len(basis)
        for g, c in self.terms.items():
            out[basis.index(g)] = c
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphVector):
            return NotImplemented
        return (self.k, self.ell, self.terms) == (other.k, other.ell, other.terms)


def contract_edge(g: LabelledGraph, i: int) -> tuple[LabelledGraph, int] | None:
    """Contract the edge labelled ``i`` (1-based).

    The endpoints ``j0 < j1`` merge into ``j0``, vertex labels above ``j1``
    drop by one and edge labels above ``i`` drop by one.  The sign
    ``(-1)^(i-1)`` comes from moving edge ``i`` to the front.  Edges parallel
    to ``i`` turn into self-loops and are kept.  Returns ``None`` for a
    self-loop.
    """
    if not 1 <= i <= g.e:
        raise IndexError(f"edge label {i} out of range 1..{g.e}")
    j0, j1 = g.edges[i - 1]
    if j0 == j1:
        return None

    def shift(x):
        if x == j1:
            return j0
        return x - 1 if x > j1 else x

    edges = tuple((shift(a), shift(b)) for n, (a, b) in enumerate(g.edges) if n != i - 1)
    sign = -1 if (i - 1) % 2 else 1
    return LabelledGraph(g.v - 1, edges), sign


def delta_labelled(g: LabelledGraph) -> GraphVector:
    """Differential of a labelled presentation; equals ``sign * delta(class)``."""
    out = GraphVector(g.degree, g.excess + 1)
    for i in range(1, g.e + 1):
        c = contract_edge(g, i)
        if c is None:
            continue
        h, sign = c
        out.add_graph(h, sign)
    return out


def delta(g: CanonicalGraph) -> GraphVector:
    return delta_labelled(g.underlying)


@dataclass(frozen=True)
class DifferentialMatrix:
    """Matrix of delta from bigrade (k, ell) to (k, ell + 1).

    Columns follow ``source`` order, rows follow ``target`` order.  The dual
    map is the transpose.
    """

    k: int
    ell: int
    source: GradedBasis
    target: GradedBasis
    matrix: SparseRationalMatrix

    @property
    def dual(self) -> SparseRationalMatrix:
        return self.matrix.transpose()

    def to_sms(self) -> str:
        return write_sms(self.matrix)


@lru_cache(maxsize=None)
def _delta_matrix(k: int, ell: int, cap: int) -> DifferentialMatrix:
    source = enumerate_basis(k, ell, cap)
    target = enumerate_basis(k, ell + 1, cap)
    entries = {}
    for col, g in enumerate(source):
        for h, c in delta(g).terms.items():
            entries[(target.index(h), col)] = c
    m = SparseRationalMatrix(len(target), len(source), entries)
    return DifferentialMatrix(k, ell, source, target, m)


def delta_matrix(k: int, ell: int, cap_vertices: int = DEFAULT_VERTEX_CAP) -> DifferentialMatrix:
    return _delta_matrix(k, ell, cap_vertices)
