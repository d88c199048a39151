"""Arrow graphs, the Y-link linking system and the combinatorial pairing I.

Half-edges of edge ``a`` (1-based) are numbered ``2(a-1)`` for ``e_a+`` and
``2(a-1)+1`` for ``e_a-``.  The ``+`` end sits at the head of the arrow and
has odd degree 1; the ``-`` end sits at the tail and has even degree ``d-2``
(``d`` is even).  A vertex lists its three half-edges in slots, incoming
first.

I(test) is computed as the coefficient of the fundamental monomial
``prod_q (x_q1 x_q2 x_q3)`` in the wedge over test edges of the linking
forms, summed over vertex bijections and multiplied by the per-vertex triple
integrals (``alpha`` for type I, ``beta`` for type II).  Each symbol ``x_qs``
carries the parity of its half-edge.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .complex import GraphVector
from .graphs import (
    CanonicalGraph,
    LabelledGraph,
    automorphisms,
    permutation_sign,
)
from .homology import AkSpace, reduce_to_ak

__all__ = [
    "ArrowGraph",
    "SurgeryData",
    "halfedge_index",
    "halfedge_sign",
    "koszul_sign",
    "orient_arrows",
    "all_arrow_orientations",
    "arrow_graph",
    "surgery_data",
    "evaluate_I",
    "sigma_contributions",
    "z_k",
    "global_sign",
    "int_b_eta_sign",
    "int_a_eta_sign",
    "linking_coefficient",
    "derive_int_eta_signs",
    "sign_table",
]


def halfedge_index(edge: int, plus: bool) -> int:
    return 2 * (edge - 1) + (0 if plus else 1)


def _is_odd(h: int) -> bool:
    # e+ has degree 1, e- has degree d-2 (even)
    return h % 2 == 0


def koszul_sign(items: Sequence, odd) -> int:
    """Sign for sorting ``items`` when elements with ``odd(x)`` anticommute."""
    sign = 1
    odds = [x for x in items if odd(x)]
    for i in range(len(odds)):
        for j in range(i + 1, len(odds)):
            if odds[i] > odds[j]:
                sign = -sign
    return sign


# -- arrow graphs --------------------------------------------------------------


@dataclass(frozen=True)
class ArrowGraph:
    """Trivalent simple graph with edge directions and vertex slot orders.

    ``direction[a]`` is ``(tail, head)`` for edge ``a + 1``; ``slots[x]`` is
    the ordered triple of half-edges at vertex ``x + 1``.
    """

    base: CanonicalGraph
    direction: tuple
    slots: tuple

    def __post_init__(self):
        g = self.base
        if any(val != 3 for val in g.underlying.valences()):
            raise ValueError("arrow graphs need a trivalent base")
        for (a, b), (t, h) in zip(g.edges, self.direction):
            if {a, b} != {t, h}:
                raise ValueError("direction does not match edge endpoints")
        indeg = self.in_degrees()
        if any(x not in (1, 2) for x in indeg):
            raise ValueError("every vertex needs incoming and outgoing edges")
        for x, triple in enumerate(self.slots):
            if sorted(triple) != sorted(self._halfedges_at(x + 1)):
                raise ValueError(f"slots at vertex {x + 1} do not match incident half-edges")
            n_in = indeg[x]
            if not all(_is_odd(h) for h in triple[:n_in]):
                raise ValueError(f"incoming slots must come first at vertex {x + 1}")

    @property
    def k(self) -> int:
        return self.base.degree

    def in_degrees(self) -> list[int]:
        indeg = [0] * self.base.v
        for _, h in self.direction:
            indeg[h - 1] += 1
        return indeg

    def vertex_type(self, x: int) -> str:
        """'I' for two incoming edges, 'II' for one; ``x`` is 1-based."""
        return "I" if self.in_degrees()[x - 1] == 2 else "II"

    def type_counts(self) -> tuple[int, int]:
        indeg = self.in_degrees()
        return indeg.count(2), indeg.count(1)

    def _halfedges_at(self, x: int) -> list[int]:
        out = []
        for a, (t, h) in enumerate(self.direction, start=1):
            if h == x:
                out.append(halfedge_index(a, True))
            if t == x:
                out.append(halfedge_index(a, False))
        return out

    def slot_of(self, h: int) -> tuple[int, int]:
        """(vertex, slot) of a half-edge, both 1-based."""
        for x, triple in enumerate(self.slots, start=1):
            if h in triple:
                return x, triple.index(h) + 1
        raise KeyError(h)

    def vertex_order(self) -> list[int]:
        """Half-edges listed vertex by vertex in slot order."""
        return [h for triple in self.slots for h in triple]

    def to_json(self) -> dict:
        return {
            "v": self.base.v,
            "edges": [list(e) for e in self.base.edges],
            "directions": [list(p) for p in self.direction],
            "slots": [list(t) for t in self.slots],
        }


def halfedge_sign(g: ArrowGraph, reordering: Sequence[int]) -> int:
    """Graded sign of listing the half-edges in ``reordering``.

    Relative to the edge-label order ``e1+ e1- e2+ e2- ...``; only swaps of
    two ``e+`` factors contribute.
    """
    if sorted(reordering) != list(range(2 * g.base.e)):
        raise ValueError("reordering must be a permutation of the half-edges")
    return koszul_sign(list(reordering), _is_odd)


def _default_slots(base: CanonicalGraph, direction) -> tuple:
    slots = []
    for x in range(1, base.v + 1):
        ins = [halfedge_index(a, True) for a, (t, h) in enumerate(direction, 1) if h == x]
        outs = [halfedge_index(a, False) for a, (t, h) in enumerate(direction, 1) if t == x]
        slots.append(tuple(sorted(ins) + sorted(outs)))
    return slots


def arrow_graph(base: CanonicalGraph, direction: Sequence) -> ArrowGraph:
    """Arrow graph with slots made compatible with the edge-label orientation.

    Slots start incoming-then-outgoing in index order.  If the resulting
    vertex-by-vertex half-edge order has sign -1, the two incoming slots at
    the lowest type I vertex are swapped.
    """
    direction = tuple(tuple(p) for p in direction)
    slots = _default_slots(base, direction)
    order = [h for t in slots for h in t]
    if koszul_sign(order, _is_odd) < 0:
        for x, t in enumerate(slots):
            if _is_odd(t[0]) and _is_odd(t[1]):
                slots[x] = (t[1], t[0], t[2])
                break
    return ArrowGraph(base, direction, tuple(slots))


def _valid(v: int, direction) -> bool:
    indeg = [0] * (v + 1)
    for _, h in direction:
        indeg[h] += 1
    return all(x in (1, 2) for x in indeg[1:])


def all_arrow_orientations(base: CanonicalGraph) -> list[ArrowGraph]:
    """Every valid arrow orientation by exhaustive search over 2^e choices."""
    out = []
    for flips in itertools.product((False, True), repeat=base.e):
        direction = [(b, a) if f else (a, b) for (a, b), f in zip(base.edges, flips)]
        if _valid(base.v, direction):
            out.append(arrow_graph(base, direction))
    return out


# Inductive construction: remove an edge uv, smooth u and v, orient the smaller
# trivalent graph, then route a path through u and v and orient uv.  Edges of
# the smaller graph are paths (vertex sequence, original edge ids).


def _smooth(paths: list, x: int):
    ends = [i for i, (vs, _) in enumerate(paths) for end in (vs[0], vs[-1]) if end == x]
    if len(ends) != 2 or ends[0] == ends[1]:
        return None
    i, j = ends
    vi, ei = paths[i]
    vj, ej = paths[j]
    if vi[-1] != x:
        vi, ei = vi[::-1], ei[::-1]
    if vj[0] != x:
        vj, ej = vj[::-1], ej[::-1]
    merged = (vi + vj[1:], ei + ej)
    if merged[0][0] == merged[0][-1]:
        return None
    rest = [p for n, p in enumerate(paths) if n not in (i, j)]
    return rest + [merged]


def _path_connected(paths: list) -> bool:
    verts = {p[0][0] for p in paths} | {p[0][-1] for p in paths}
    return _connected_ends(verts, [(p[0][0], p[0][-1]) for p in paths])


def _connected_ends(verts, pairs) -> bool:
    start = next(iter(verts))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for a, b in pairs:
            for s, t in ((a, b), (b, a)):
                if s == x and t not in seen:
                    seen.add(t)
                    stack.append(t)
    return seen == verts


def _orient_paths(paths: list) -> dict | None:
    verts = sorted({p[0][0] for p in paths} | {p[0][-1] for p in paths})
    out: dict = {}

    def along(vs, es, forward):
        if not forward:
            vs, es = vs[::-1], es[::-1]
        for n, e in enumerate(es):
            out[e] = (vs[n], vs[n + 1])

    if len(verts) == 2:
        x, y = verts
        if len(paths) != 3:
            return None
        for n, (vs, es) in enumerate(paths):
            along(vs, es, (vs[0] == x) == (n < 2))
        return out
    for c, (vs, es) in enumerate(paths):
        u, w = vs[0], vs[-1]
        rest = paths[:c] + paths[c + 1:]
        rest = _smooth(rest, u)
        if rest is None:
            continue
        rest = _smooth(rest, w)
        if rest is None or not _path_connected(rest):
            continue
        inner = _orient_paths(rest)
        if inner is None:
            continue
        out.update(inner)
        along(vs, es, True)
        return out
    return None


def orient_arrows(base: CanonicalGraph) -> ArrowGraph:
    """Deterministic valid arrow orientation via edge removal and smoothing."""
    if not base.underlying.is_simple() or any(x != 3 for x in base.underlying.valences()):
        raise ValueError("orient_arrows needs a simple trivalent graph")
    paths = [((a, b), (n,)) for n, (a, b) in enumerate(base.edges)]
    found = _orient_paths(paths)
    if found is not None:
        direction = [found[n] for n in range(base.e)]
        if _valid(base.v, direction):
            return arrow_graph(base, direction)
    options = all_arrow_orientations(base)
    if not options:
        raise ValueError("no valid arrow orientation")
    return options[0]


# -- linking system and the pairing --------------------------------------------


def linking_coefficient(d: int) -> int:
    """L = (-1)^(d-1) Lk for the Hopf link of one edge."""
    return -1 if d % 2 == 0 else 1


@dataclass(frozen=True)
class SurgeryData:
    """Arrow graph plus the linking matrix of its Y-link.

    ``linking`` maps ``(i, l, j, m)`` (vertex, slot, vertex, slot; all 1-based)
    to a nonzero integer.  ``alpha``/``beta`` are the triple integrals at type
    I/II vertices.
    """

    arrow: ArrowGraph
    d: int
    linking: dict
    alpha: int = 1
    beta: int = 1

    def __post_init__(self):
        if self.d < 4 or self.d % 2:
            raise ValueError("d must be even and at least 4")
        for (i, l, j, m), val in self.linking.items():
            hi = self.arrow.slots[i - 1][l - 1]
            hj = self.arrow.slots[j - 1][m - 1]
            if _is_odd(hi) == _is_odd(hj):
                raise ValueError(f"slots ({i},{l}) and ({j},{m}) do not have complementary degrees")
            if self.linking.get((j, m, i, l)) != val:
                raise ValueError("linking matrix must be symmetric")

    @classmethod
    def from_linking(cls, arrow: ArrowGraph, d: int, table: dict, alpha: int = 1, beta: int = 1):
        """Raw constructor for experiments; ``table`` is symmetrised."""
        full = {}
        for (i, l, j, m), val in table.items():
            if val:
                full[(i, l, j, m)] = val
                full[(j, m, i, l)] = val
        return cls(arrow, d, full, alpha, beta)

    @property
    def k(self) -> int:
        return self.arrow.k

    def L(self, i: int, l: int, j: int, m: int) -> int:
        return self.linking.get((i, l, j, m), 0)

    def vertex_factor(self, x: int) -> int:
        return self.alpha if self.arrow.vertex_type(x) == "I" else self.beta

    def to_json(self) -> str:
        return json.dumps({**self.arrow.to_json(), "d": self.d}, sort_keys=True)


def surgery_data(arrow: ArrowGraph, d: int = 4, alpha: int = 1, beta: int = 1) -> SurgeryData:
    """Linking system of the Y-link: one Hopf link of linking number +1 per edge."""
    c = linking_coefficient(d)
    table = {}
    for a in range(1, arrow.base.e + 1):
        i, l = arrow.slot_of(halfedge_index(a, True))
        j, m = arrow.slot_of(halfedge_index(a, False))
        table[(i, l, j, m)] = c
        table[(j, m, i, l)] = c
    return SurgeryData(arrow, d, table, alpha, beta)


def _test_graph(test) -> LabelledGraph:
    g = test.underlying if isinstance(test, CanonicalGraph) else test
    if not g.is_simple():
        raise ValueError("test graph has a self-loop or multiple edge; its class is zero")
    return g


def _bijections(data: SurgeryData, g: LabelledGraph, brute: bool) -> Iterator[tuple[int, ...]]:
    """Vertex maps ``sigma[x-1] = base vertex`` that can contribute."""
    n = g.v
    if brute:
        yield from (tuple(p) for p in itertools.permutations(range(1, n + 1)))
        return
    nbr_base = [set() for _ in range(n + 1)]
    for (i, _, j, _), _v in data.linking.items():
        nbr_base[i].add(j)
    nbr_test = [set() for _ in range(n + 1)]
    for a, b in g.edges:
        nbr_test[a].add(b)
        nbr_test[b].add(a)
    sigma = [0] * (n + 1)
    used = [False] * (n + 1)

    def rec(x):
        if x > n:
            yield tuple(sigma[1:])
            return
        for y in range(1, n + 1):
            if used[y]:
                continue
            if any(w < x and sigma[w] not in nbr_base[y] for w in nbr_test[x]):
                continue
            sigma[x] = y
            used[y] = True
            yield from rec(x + 1)
            used[y] = False
        sigma[x] = 0

    yield from rec(1)


def _sigma_value(data: SurgeryData, g: LabelledGraph, sigma: Sequence[int]) -> int:
    arrow = data.arrow
    parity = {}
    for x, triple in enumerate(arrow.slots, start=1):
        for s, h in enumerate(triple, start=1):
            parity[(x, s)] = _is_odd(h)
    terms = [(1, ())]
    for a, b in g.edges:
        i, j = sigma[a - 1], sigma[b - 1]
        pairs = [(l, m, data.L(i, l, j, m)) for l in (1, 2, 3) for m in (1, 2, 3)]
        pairs = [p for p in pairs if p[2]]
        if not pairs:
            return 0
        terms = [(c * val, mono + ((i, l), (j, m))) for c, mono in terms for l, m, val in pairs]
    total = 0
    fundamental = sorted(parity)
    for c, mono in terms:
        if sorted(mono) != fundamental:
            continue
        total += c * koszul_sign(list(mono), lambda s: parity[s])
    factor = 1
    for x in range(1, g.v + 1):
        factor *= data.vertex_factor(x)
    return factor * total


def sigma_contributions(data: SurgeryData, test, brute: bool = False) -> dict:
    """Nonzero summands of I(test) keyed by vertex bijection."""
    g = _test_graph(test)
    if (g.degree, g.excess) != (data.k, 0):
        raise ValueError(f"test graph in bigrade ({g.degree}, {g.excess}), expected ({data.k}, 0)")
    out = {}
    for sigma in _bijections(data, g, brute):
        val = _sigma_value(data, g, sigma)
        if val:
            out[sigma] = val
    return out


def evaluate_I(data: SurgeryData, test, brute: bool = False) -> Fraction:
    return Fraction(sum(sigma_contributions(data, test, brute).values()))


def global_sign(data: SurgeryData) -> int:
    """The sign eps with I(base) = eps |Aut base|; 0 if the base class vanishes."""
    base = data.arrow.base
    aut, _ = automorphisms(base.underlying)
    val = evaluate_I(data, base) / aut
    return int(val)


def z_k(data: SurgeryData, space: AkSpace) -> list[Fraction]:
    """Sum over trivalent classes of I(class) / |Aut class| times its image in A_k."""
    if space.k != data.k:
        raise ValueError("degree of the surgery data does not match the space")
    total = [Fraction(0)] * space.dim
    for cls in space.generators:
        val = evaluate_I(data, cls)
        if not val:
            continue
        coords = reduce_to_ak(GraphVector(space.k, 0, {cls: 1}), space)
        w = val / cls.aut_order
        total = [t + w * c for t, c in zip(total, coords)]
    return total


# -- sign constants ------------------------------------------------------------


def int_b_eta_sign(k: int, d: int) -> int:
    """Integral of eta_S(a) over a pushed-in b cycle, with k = dim a."""
    return -1 if (k * d + k + d - 1) % 2 else 1


def int_a_eta_sign(k: int, d: int) -> int:
    """Integral of eta_S(b) over a pushed-out a cycle, with k = dim a."""
    return -1 if (d + k) % 2 else 1


def _blade_sign(sign: int, idx: Sequence[int]) -> int:
    """Orientation of ``sign * e_idx[0] ^ ...`` relative to the standard one."""
    order = sorted(range(len(idx)), key=lambda n: idx[n])
    return sign * permutation_sign(order)


def _coorientation(sign: int, idx: tuple, d: int) -> tuple[int, tuple]:
    comp = tuple(x for x in range(1, d + 1) if x not in idx)
    return _blade_sign(sign, idx + comp), comp


def _frame_det(columns: Sequence[tuple[int, int]]) -> int:
    """det of columns ``sign * e_index``."""
    sign = 1
    for s, _ in columns:
        sign *= s
    return sign * permutation_sign([i - 1 for _, i in columns])


def derive_int_eta_signs(k: int, d: int, alpha: int = 1) -> dict:
    """Recompute the local intersection signs from oriented frames.

    Local model: ``a`` spans x1..xk, ``b`` spans x(k+1)..x(d-1), x_d is the
    outward normal of the handlebody.  The product ``alpha * beta`` is fixed by Lk(b-, a) = +1.
    """
    a_idx = tuple(range(1, k + 1))
    b_idx = tuple(range(k + 1, d))
    # phi at the centre is e_d; d(a - b-)/dx' = -e_j, d/dx'' = e_i
    cols = [(1, d)] + [(-1, j) for j in b_idx] + [(1, i) for i in a_idx]
    alpha_beta = _frame_det(cols)
    beta = alpha * alpha_beta
    # outward normal first; S(a) lies inside (normal +e_d), S(b) outside (-e_d)
    sa = _blade_sign(alpha, (d,) + a_idx)
    sb = _blade_sign(-beta, (d,) + b_idx)
    ca_sign, ca = _coorientation(sa, a_idx + (d,), d)
    cb_sign, cb = _coorientation(sb, b_idx + (d,), d)
    assert ca == b_idx and cb == a_idx
    return {
        "alpha_beta": alpha_beta,
        "int_b_eta": beta * ca_sign,
        "int_a_eta": alpha * cb_sign,
        "linking": linking_coefficient(d),
    }


def sign_table(dims: Sequence[int] = (4, 6, 8)) -> list[dict]:
    rows = []
    for d in dims:
        for k in range(1, d - 1):
            rows.append({
                "d": d,
                "k": k,
                "int_b_eta": int_b_eta_sign(k, d),
                "int_a_eta": int_a_eta_sign(k, d),
                "linking": linking_coefficient(d),
            })
    return rows

