"""Cohomology dimensions and the trivalent quotient space A_k."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .complex import GraphVector, delta_matrix
from .graphs import DEFAULT_VERTEX_CAP, CanonicalGraph, GradedBasis, enumerate_basis
from .linalg import RREF, rank, reduce_with, rref

__all__ = [
    "AkSpace",
    "excess_range",
    "delta_rank",
    "dim_cohomology",
    "ak_space",
    "reduce_to_ak",
    "euler_characteristic_check",
    "dims_report",
]


def excess_range(k: int) -> range:
    """Excess values with at least four vertices, ``0 <= ell <= 2k - 4``."""
    return range(0, max(0, 2 * k - 3))


@lru_cache(maxsize=None)
def _rank(k: int, ell: int, cap: int) -> int:
    if ell < 0 or 2 * k - ell < 4:
        return 0
    return rank(delta_matrix(k, ell, cap).matrix)


def delta_rank(k: int, ell: int, cap_vertices: int = DEFAULT_VERTEX_CAP) -> int:
    return _rank(k, ell, cap_vertices)


def dim_cohomology(k: int, ell: int, cap_vertices: int = DEFAULT_VERTEX_CAP) -> int:
    n = len(enumerate_basis(k, ell, cap_vertices))
    return n - delta_rank(k, ell, cap_vertices) - delta_rank(k, ell - 1, cap_vertices)


@dataclass(frozen=True)
class AkSpace:
    """Trivalent classes modulo the image of the dual differential.

    ``relations`` is the RREF of the matrix of delta out of excess 0; its rows
    span the IHX relations in trivalent coordinates.  The quotient basis is the
    set of non-pivot columns.
    """

    k: int
    generators: GradedBasis
    relations: RREF

    @property
    def quotient_basis(self) -> list[int]:
        return self.relations.free_columns()

    @property
    def dim(self) -> int:
        return len(self.generators) - self.relations.rank

    def basis_classes(self) -> list[CanonicalGraph]:
        return [self.generators.classes[i] for i in self.quotient_basis]

    def coordinates(self, vec) -> list[Fraction]:
        reduced = reduce_with(vec, self.relations)
        return [reduced[i] for i in self.quotient_basis]


@lru_cache(maxsize=None)
def _ak(k: int, cap: int) -> AkSpace:
    dm = delta_matrix(k, 0, cap)
    return AkSpace(k, dm.source, rref(dm.matrix))


def ak_space(k: int, cap_vertices: int = DEFAULT_VERTEX_CAP) -> AkSpace:
    return _ak(k, cap_vertices)


def reduce_to_ak(vec: GraphVector, space: AkSpace) -> list[Fraction]:
    if (vec.k, vec.ell) != (space.k, 0):
        raise ValueError(f"vector in bigrade ({vec.k}, {vec.ell}), expected ({space.k}, 0)")
    return space.coordinates(vec.coordinates(space.generators))


def euler_characteristic_check(k: int, cap_vertices: int = DEFAULT_VERTEX_CAP) -> bool:
    chain = 0
    homology = 0
    for ell in excess_range(k):
        sign = -1 if ell % 2 else 1
        chain += sign * len(enumerate_basis(k, ell, cap_vertices))
        homology += sign * dim_cohomology(k, ell, cap_vertices)
    return chain == homology


def dims_report(k: int, cap_vertices: int = DEFAULT_VERTEX_CAP) -> dict:
    return {
        "k": k,
        "dims_by_excess": [len(enumerate_basis(k, ell, cap_vertices)) for ell in excess_range(k)],
        "dim_H0": dim_cohomology(k, 0, cap_vertices) if k >= 1 else 0,
        "dim_Ak": ak_space(k, cap_vertices).dim,
    }
