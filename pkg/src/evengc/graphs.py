"""Labelled graphs, canonical forms and graded bases of the even graph complex.

A labelled graph is a vertex count and an ordered edge list; the position of
an edge in the list is its label, and the list order is the orientation of
``R^{edges}``.  Vertex labels never affect signs.

The canonical form of a simple graph is the lexicographically smallest sorted
edge list over all vertex relabelings.  Any optimal relabeling numbers the
vertices in breadth-first fashion (a row's unseen neighbours must receive the
next free labels), so the search only branches over the order in which those
neighbours are numbered.  Every optimal relabeling is found, which yields the
automorphism group as a by-product.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

__all__ = [
    "GraphFormatError",
    "ResourceLimitError",
    "LabelledGraph",
    "CanonicalGraph",
    "GradedBasis",
    "parse_graph",
    "format_graph",
    "permutation_sign",
    "canonical_form",
    "canonicalize",
    "automorphisms",
    "automorphism_group",
    "relabel",
    "enumerate_simple_graphs",
    "enumerate_basis",
    "DEFAULT_VERTEX_CAP",
    "NAMED_GRAPHS",
]

DEFAULT_VERTEX_CAP = 10


class GraphFormatError(ValueError):
    """Malformed graph text; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class ResourceLimitError(RuntimeError):
    pass


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation of ``0..n-1`` given in one-line notation."""
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class LabelledGraph:
    """Connected multigraph with valence >= 3.

    ``edges[i]`` is the edge labelled ``i + 1``; vertices are ``1..v``.
    Pairs are stored with the smaller endpoint first.
    """

    v: int
    edges: tuple

    def __post_init__(self):
        edges = tuple(tuple(sorted((int(a), int(b)))) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.v < 1:
            raise GraphFormatError("vertex count must be positive")
        valence = [0] * (self.v + 1)
        for a, b in edges:
            if not (1 <= a <= self.v and 1 <= b <= self.v):
                raise GraphFormatError(f"vertex index out of range in edge ({a},{b})")
            valence[a] += 1
            valence[b] += 1
        low = [x for x in range(1, self.v + 1) if valence[x] < 3]
        if low:
            raise GraphFormatError(f"vertex {low[0]} has valence {valence[low[0]]} < 3")
        if not _connected(self.v, edges):
            raise GraphFormatError("graph is disconnected")

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def degree(self) -> int:
        """k = e - v."""
        return self.e - self.v

    @property
    def excess(self) -> int:
        """l = 2e - 3v."""
        return 2 * self.e - 3 * self.v

    def has_self_loop(self) -> bool:
        return any(a == b for a, b in self.edges)

    def has_multi_edge(self) -> bool:
        return len(set(self.edges)) != len(self.edges)

    def is_simple(self) -> bool:
        return not self.has_self_loop() and not self.has_multi_edge()

    def valences(self) -> list[int]:
        val = [0] * self.v
        for a, b in self.edges:
            val[a - 1] += 1
            val[b - 1] += 1
        return val

    def permute_edges(self, perm: Sequence[int]) -> "LabelledGraph":
        """New graph whose edge ``i`` is the old edge ``perm[i]`` (0-based)."""
        return LabelledGraph(self.v, tuple(self.edges[p] for p in perm))

    def __str__(self) -> str:
        return format_graph(self)


def _connected(v: int, edges: Iterable) -> bool:
    adj = [[] for _ in range(v + 1)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {1}
    stack = [1]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == v


# -- text format -------------------------------------------------------------

_INT = re.compile(r"\d+")


def _parse_text(text: str) -> LabelledGraph:
    pos = 0
    n = len(text)

    def skip():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def expect(ch):
        nonlocal pos
        skip()
        if pos >= n or text[pos] != ch:
            found = text[pos] if pos < n else "end of input"
            raise GraphFormatError(f"expected {ch!r}, found {found!r}", pos)
        pos += 1

    def integer():
        nonlocal pos
        skip()
        m = _INT.match(text, pos)
        if not m:
            raise GraphFormatError("expected an integer", pos)
        pos = m.end()
        return int(m.group())

    expect("v")
    expect("=")
    v = integer()
    expect(";")
    expect("e")
    expect("=")
    edges = []
    starts = []
    skip()
    while pos < n and text[pos] == "(":
        starts.append(pos)
        pos += 1
        a = integer()
        expect(",")
        b = integer()
        expect(")")
        edges.append((a, b))
        skip()
    if pos < n:
        raise GraphFormatError(f"unexpected character {text[pos]!r}", pos)
    if not edges:
        raise GraphFormatError("no edges given", pos)
    for (a, b), at in zip(edges, starts):
        if not (1 <= a <= v and 1 <= b <= v):
            raise GraphFormatError(f"vertex index out of range in edge ({a},{b})", at)
    return LabelledGraph(v, tuple(edges))


def parse_graph(text: str) -> LabelledGraph:
    """Parse ``v=<int>; e=(a,b)(c,d)...`` or ``{"v": n, "edges": [[a, b], ...]}``."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc.msg}", exc.pos) from None
        try:
            v = int(obj["v"])
            edges = tuple((int(a), int(b)) for a, b in obj["edges"])
        except (KeyError, TypeError, ValueError):
            raise GraphFormatError("JSON graph needs 'v' and a list of [a, b] 'edges'") from None
        return LabelledGraph(v, edges)
    return _parse_text(text)


def format_graph(g: LabelledGraph) -> str:
    return f"v={g.v}; e=" + "".join(f"({a},{b})" for a, b in g.edges)


def graph_to_json(g: LabelledGraph) -> dict:
    return {"v": g.v, "edges": [list(e) for e in g.edges]}


# -- canonical form ----------------------------------------------------------


@dataclass(frozen=True)
class CanonicalGraph:
    """Isomorphism class of a simple graph with its canonical labelling.

    Equality and hashing use only the canonical edge list.
    """

    underlying: LabelledGraph
    aut_order: int = field(compare=False)
    orientation_reversing: bool = field(compare=False)

    @property
    def v(self) -> int:
        return self.underlying.v

    @property
    def e(self) -> int:
        return self.underlying.e

    @property
    def edges(self) -> tuple:
        return self.underlying.edges

    @property
    def degree(self) -> int:
        return self.underlying.degree

    @property
    def excess(self) -> int:
        return self.underlying.excess

    def __str__(self) -> str:
        return format_graph(self.underlying)


def _adjacency(v: int, edges: Iterable) -> list[list[int]]:
    """0-based adjacency lists from 1-based simple edges."""
    adj = [[] for _ in range(v)]
    for a, b in edges:
        adj[a - 1].append(b - 1)
        adj[b - 1].append(a - 1)
    return adj


def _canonical_search(v: int, adj: list[list[int]]):
    """Return (rows, labellings) for the lex-minimal relabeling.

    ``rows[r]`` lists labels of the neighbours of label ``r`` that exceed
    ``r``, terminated by a sentinel ``v``.  ``labellings`` holds every vertex
    -> label map achieving the minimum.
    """
    sentinel = v
    deg = [len(a) for a in adj]
    top = max(deg)
    best_rows: list | None = None
    best_labels: list = []
    generation = [0]
    lab = [-1] * v
    order: list[int] = []
    rows: list = []

    # status: 0 = prefix equals best, -1 = prefix strictly smaller than best
    def recurse(r: int, status: int):
        nonlocal best_rows, best_labels
        if r == v:
            if best_rows is None or status < 0:
                best_rows = list(rows)
                best_labels = [list(lab)]
                generation[0] += 1
            else:
                best_labels.append(list(lab))
            return
        u = order[r]
        fresh = [w for w in adj[u] if lab[w] < 0]
        m = len(order)
        row = sorted(lab[w] for w in adj[u] if lab[w] > r)
        row.extend(range(m, m + len(fresh)))
        row.append(sentinel)
        row = tuple(row)
        if best_rows is not None and status == 0:
            ref = best_rows[r]
            if row > ref:
                return
            if row < ref:
                status = -1
        rows.append(row)
        if not fresh:
            recurse(r + 1, status)
        else:
            for perm in itertools.permutations(fresh):
                for i, w in enumerate(perm):
                    lab[w] = m + i
                    order.append(w)
                gen = generation[0]
                recurse(r + 1, status)
                if generation[0] != gen:
                    status = 0
                for w in perm:
                    lab[w] = -1
                del order[m:]
        rows.pop()

    for root in range(v):
        if deg[root] != top:
            continue
        lab[root] = 0
        order.append(root)
        recurse(0, 0 if best_rows is not None else -1)
        lab[root] = -1
        order.clear()
    return best_rows, best_labels


def _rows_to_edges(rows) -> tuple:
    edges = []
    for r, row in enumerate(rows):
        for x in row[:-1]:
            edges.append((r + 1, x + 1))
    return tuple(edges)


def _edge_perm(g_edges: Sequence, labelling: Sequence[int], position: dict) -> list[int]:
    """Position in the canonical list of each input edge under ``labelling``."""
    out = []
    for a, b in g_edges:
        x, y = labelling[a - 1] + 1, labelling[b - 1] + 1
        out.append(position[(x, y) if x < y else (y, x)])
    return out


def _require_simple(g: LabelledGraph) -> None:
    if not g.is_simple():
        raise ValueError("graph has a self-loop or a multiple edge")


@lru_cache(maxsize=200_000)
def _canonical_data(v: int, edges: tuple):
    """Canonical edges, aut order, reversing flag and sign for a simple graph."""
    adj = _adjacency(v, edges)
    rows, labellings = _canonical_search(v, adj)
    canon = _rows_to_edges(rows)
    position = {e: i for i, e in enumerate(canon)}
    signs = {permutation_sign(_edge_perm(edges, lab, position)) for lab in labellings}
    reversing = len(signs) > 1
    sign = permutation_sign(_edge_perm(edges, labellings[0], position))
    return canon, len(labellings), reversing, sign, tuple(tuple(l) for l in labellings)


def canonical_form(g: LabelledGraph) -> tuple[CanonicalGraph, int]:
    """Canonical class and edge-permutation sign for any simple graph.

    Unlike :func:`canonicalize` this also returns classes with an
    orientation-reversing automorphism (for which the sign is arbitrary).
    """
    _require_simple(g)
    canon, aut, reversing, sign, _ = _canonical_data(g.v, g.edges)
    cg = CanonicalGraph(LabelledGraph(g.v, canon), aut, reversing)
    return cg, sign


def canonicalize(g: LabelledGraph) -> tuple[CanonicalGraph, int] | None:
    """Canonical representative and sign, or ``None`` for the zero class.

    The class is zero when ``g`` has a self-loop, a parallel edge pair or an
    automorphism acting on edges by an odd permutation.  Otherwise ``g`` equals
    ``sign`` times the returned class.
    """
    if not g.is_simple():
        return None
    cg, sign = canonical_form(g)
    if cg.orientation_reversing:
        return None
    return cg, sign


def automorphisms(g: LabelledGraph) -> tuple[int, bool]:
    """(|Aut g|, whether some automorphism permutes edges oddly)."""
    _require_simple(g)
    _, aut, reversing, _, _ = _canonical_data(g.v, g.edges)
    return aut, reversing


def automorphism_group(g: LabelledGraph) -> list[tuple[int, ...]]:
    """All automorphisms as 0-based vertex maps ``x -> perm[x]``."""
    _require_simple(g)
    _, _, _, _, labellings = _canonical_data(g.v, g.edges)
    ref = labellings[0]
    inv = [0] * g.v
    for x, l in enumerate(ref):
        inv[l] = x
    return sorted(tuple(inv[lab[x]] for x in range(g.v)) for lab in labellings)


def relabel(g: LabelledGraph, vertex_perm: Sequence[int], edge_perm: Sequence[int] | None = None) -> LabelledGraph:
    """Apply a 0-based vertex map and optionally reorder edges (see ``permute_edges``)."""
    edges = tuple((vertex_perm[a - 1] + 1, vertex_perm[b - 1] + 1) for a, b in g.edges)
    h = LabelledGraph(g.v, edges)
    return h.permute_edges(edge_perm) if edge_perm is not None else h


# -- enumeration ---------------------------------------------------------------


def _generate_labelled(v: int, e: int, maxdeg: int) -> Iterator[list[tuple[int, int]]]:
    """Connected simple graphs with min valence 3, one or more per class.

    Rows are filled in vertex order.  Vertices beyond the current row that are
    adjacent to the same earlier rows are interchangeable, so only a prefix of
    each such twin class is ever chosen as neighbours.  Vertex 0 is given the
    maximum valence.
    """
    adj = [set() for _ in range(v)]
    deg = [0] * v
    edges: list[tuple[int, int]] = []

    def rec(i: int, classes: list[list[int]], cap: int):
        if i == v:
            if len(edges) == e and _connected(v, [(a + 1, b + 1) for a, b in edges]):
                yield list(edges)
            return
        rest = [c for c in classes]
        if rest and rest[0] and rest[0][0] == i:
            rest[0] = rest[0][1:]
            if not rest[0]:
                rest = rest[1:]
        later = v - i - 1
        lo = max(0, 3 - deg[i])
        hi = min(cap - deg[i], later, e - len(edges))
        if lo > hi:
            return
        for counts in _bounded_compositions([len(c) for c in rest], lo, hi):
            chosen = []
            ok = True
            for c, n in zip(rest, counts):
                for w in c[:n]:
                    if deg[w] >= cap:
                        ok = False
                        break
                    chosen.append(w)
                if not ok:
                    break
            if not ok:
                continue
            new_cap = cap
            if i == 0:
                new_cap = len(chosen)
                if new_cap < 3:
                    continue
            for w in chosen:
                adj[i].add(w)
                adj[w].add(i)
                deg[i] += 1
                deg[w] += 1
                edges.append((i, w))
            if _feasible(i, deg, v, e, len(edges), new_cap):
                refined = []
                for c, n in zip(rest, counts):
                    if n:
                        refined.append(c[:n])
                    if n < len(c):
                        refined.append(c[n:])
                yield from rec(i + 1, refined, new_cap)
            for w in chosen:
                adj[i].discard(w)
                adj[w].discard(i)
                deg[i] -= 1
                deg[w] -= 1
                edges.pop()

    yield from rec(0, [list(range(v))], maxdeg)


def _bounded_compositions(sizes: list[int], lo: int, hi: int):
    """All count vectors ``0 <= c_j <= sizes[j]`` with ``lo <= sum <= hi``."""
    out = []

    def go(j, acc, total):
        if j == len(sizes):
            if lo <= total <= hi:
                out.append(tuple(acc))
            return
        for n in range(0, min(sizes[j], hi - total) + 1):
            acc.append(n)
            go(j + 1, acc, total + n)
            acc.pop()

    go(0, [], 0)
    return out


def _feasible(i: int, deg: list[int], v: int, e: int, have: int, cap: int) -> bool:
    if deg[i] < 3:
        return False
    others = v - i - 2  # later vertices each can still meet
    need = 0
    room = 0
    for w in range(i + 1, v):
        if deg[w] > cap:
            return False
        short = 3 - deg[w]
        if short > others:
            return False
        need += max(0, short)
        room += min(cap - deg[w], others)
    left = e - have
    return (need + 1) // 2 <= left and left <= room // 2


@lru_cache(maxsize=None)
def enumerate_simple_graphs(v: int, e: int) -> tuple[CanonicalGraph, ...]:
    """Every class of connected simple graph with ``v`` vertices, ``e`` edges and
    min valence 3, including classes that vanish in the even complex."""
    if v < 4 or 2 * e < 3 * v or e > v * (v - 1) // 2:
        return ()
    maxdeg = min(v - 1, 2 * e - 3 * (v - 1))
    found: dict = {}
    for edges in _generate_labelled(v, e, maxdeg):
        g = LabelledGraph(v, tuple((a + 1, b + 1) for a, b in edges))
        cg, _ = canonical_form(g)
        found.setdefault(cg.edges, cg)
    return tuple(found[key] for key in sorted(found))


@dataclass(frozen=True)
class GradedBasis:
    k: int
    ell: int
    classes: tuple

    def __post_init__(self):
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(self.classes)})

    @property
    def v(self) -> int:
        return 2 * self.k - self.ell

    @property
    def e(self) -> int:
        return 3 * self.k - self.ell

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def index(self, cg: CanonicalGraph) -> int:
        return self._index[cg]


@lru_cache(maxsize=None)
def _basis(k: int, ell: int) -> GradedBasis:
    v, e = 2 * k - ell, 3 * k - ell
    classes = tuple(c for c in enumerate_simple_graphs(v, e) if not c.orientation_reversing)
    return GradedBasis(k, ell, classes)


def enumerate_basis(k: int, ell: int, cap_vertices: int = DEFAULT_VERTEX_CAP) -> GradedBasis:
    """Nonzero canonical classes with ``v = 2k - ell``, ``e = 3k - ell``.

    Ordered lexicographically by canonical edge list.
    """
    if k < 0 or ell < 0:
        raise ValueError(f"bigrade (k={k}, ell={ell}) out of range")
    if 2 * k - ell > cap_vertices:
        raise ResourceLimitError(
            f"bigrade (k={k}, ell={ell}) needs {2 * k - ell} vertices, cap is {cap_vertices}"
        )
    return _basis(k, ell)


def _named() -> dict[str, LabelledGraph]:
    k4 = LabelledGraph(4, ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)))
    prism = LabelledGraph(6, ((1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6), (1, 4), (2, 5), (3, 6)))
    k33 = LabelledGraph(6, tuple((a, b) for a in (1, 2, 3) for b in (4, 5, 6)))
    return {"K4": k4, "W4": k4, "prism": prism, "K33": k33}


NAMED_GRAPHS = _named()
