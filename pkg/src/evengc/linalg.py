"""Exact linear algebra over the rationals.

Sparse matrices are stored as ``{(row, col): Fraction}`` maps. Row reduction
works on sparse row dictionaries; a fraction-free Bareiss routine and a
modular rank are kept alongside as independent cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "SparseRationalMatrix",
    "RREF",
    "rref",
    "rank",
    "rank_mod_p",
    "bareiss_rank",
    "bareiss_det",
    "kernel_basis",
    "reduce_mod_image",
    "read_sms",
    "write_sms",
]


@dataclass(frozen=True)
class SparseRationalMatrix:
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        clean = {}
        for (i, j), x in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            x = Fraction(x)
            if x:
                clean[(i, j)] = x
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseRationalMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            for j, x in enumerate(row):
                if x:
                    entries[(i, j)] = x
        return cls(nrows, ncols, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseRationalMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseRationalMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def row_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def transpose(self) -> "SparseRationalMatrix":
        return SparseRationalMatrix(
            self.cols, self.rows, {(j, i): x for (i, j), x in self.entries.items()}
        )

    T = property(transpose)

    def __matmul__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        right = other.row_dicts()
        acc: dict = {}
        for (i, k), x in self.entries.items():
            for j, y in right[k].items():
                acc[(i, j)] = acc.get((i, j), 0) + x * y
        return SparseRationalMatrix(self.rows, other.cols, acc)

    def apply(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        out = [Fraction(0)] * self.rows
        for (i, j), x in self.entries.items():
            out[i] += x * vec[j]
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def nnz(self) -> int:
        return len(self.entries)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries.values())


@dataclass(frozen=True)
class RREF:
    """Reduced row-echelon form: nonzero rows only, one per pivot."""

    rows: tuple  # tuple of dict col -> Fraction, pivot entry normalized to 1
    pivots: tuple
    cols: int

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def free_columns(self) -> list[int]:
        piv = set(self.pivots)
        return [j for j in range(self.cols) if j not in piv]

    def to_dense(self) -> list[list[Fraction]]:
        return [[r.get(j, Fraction(0)) for j in range(self.cols)] for r in self.rows]


def _pivot_weight(x: Fraction) -> int:
    return abs(x.numerator * x.denominator)


def rref(m: SparseRationalMatrix) -> RREF:
    """Gauss-Jordan elimination on sparse rows.

    Pivot rule: smallest column first; within the column the entry with the
    smallest ``|num*den|``, ties to the lower row index.
    """
    rows = [r for r in m.row_dicts() if r]
    # column -> set of row ids holding a nonzero there
    where: dict[int, set] = {}
    for idx, r in enumerate(rows):
        for j in r:
            where.setdefault(j, set()).add(idx)

    pivot_rows: list[int] = []
    pivots: list[int] = []
    used: set = set()
    for col in sorted(where):
        cand = [i for i in where.get(col, ()) if i not in used]
        if not cand:
            continue
        p = min(cand, key=lambda i: (_pivot_weight(rows[i][col]), i))
        prow = rows[p]
        inv = 1 / prow[col]
        if inv != 1:
            for j in prow:
                prow[j] *= inv
        for i in list(where[col]):
            if i == p:
                continue
            r = rows[i]
            f = r[col]
            for j, x in prow.items():
                y = r.get(j, 0) - f * x
                if y:
                    if j not in r:
                        where.setdefault(j, set()).add(i)
                    r[j] = y
                else:
                    if j in r:
                        del r[j]
                        where[j].discard(i)
        used.add(p)
        pivot_rows.append(p)
        pivots.append(col)
    return RREF(tuple(dict(rows[p]) for p in pivot_rows), tuple(pivots), m.cols)


def rank(m: SparseRationalMatrix, method: str = "auto") -> int:
    """Exact rank over Q.

    ``method`` is ``"sparse"`` (rational Gauss-Jordan), ``"bareiss"``
    (fraction-free on the dense matrix) or ``"auto"``, which uses Bareiss for
    small dense blocks.
    """
    if method == "auto":
        size = m.rows * m.cols
        method = "bareiss" if size and size <= 4096 and m.nnz() > size // 2 else "sparse"
    if method == "sparse":
        return rref(m).rank
    if method == "bareiss":
        return bareiss_rank(m.to_dense())
    raise ValueError(f"unknown rank method {method!r}")


def _integer_rows(dense: Sequence[Sequence]) -> list[list[int]]:
    from math import lcm

    out = []
    for row in dense:
        row = [Fraction(x) for x in row]
        den = 1
        for x in row:
            den = lcm(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _bareiss(a: list[list[int]]) -> tuple[int, int]:
    """Fraction-free elimination in place. Returns (rank, sign of row swaps)."""
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    prev = 1
    r = 0
    sign = 1
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            sign = -sign
        piv = a[r][c]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[c]
            for j in range(c + 1, ncols):
                ai[j] = (piv * ai[j] - f * a[r][j]) // prev
            ai[c] = 0
        prev = piv
        r += 1
    return r, sign


def bareiss_rank(dense: Sequence[Sequence]) -> int:
    if not dense or not dense[0]:
        return 0
    return _bareiss(_integer_rows(dense))[0]


def bareiss_det(dense: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square rational matrix."""
    n = len(dense)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in dense):
        raise ValueError("determinant needs a square matrix")
    rows = [[Fraction(x) for x in row] for row in dense]
    scale = Fraction(1)
    from math import lcm

    ints = []
    for row in rows:
        den = 1
        for x in row:
            den = lcm(den, x.denominator)
        scale *= den
        ints.append([int(x * den) for x in row])
    r, sign = _bareiss(ints)
    if r < n:
        return Fraction(0)
    return Fraction(sign * ints[n - 1][n - 1]) / scale


def rank_mod_p(m: SparseRationalMatrix, p: int) -> int:
    """Rank of the reduction mod a prime ``p`` (entries must be p-integral)."""
    rows = []
    for r in m.row_dicts():
        red = {}
        for j, x in r.items():
            if x.denominator % p == 0:
                raise ValueError(f"entry {x} is not {p}-integral")
            y = x.numerator * pow(x.denominator, -1, p) % p
            if y:
                red[j] = y
        if red:
            rows.append(red)
    rk = 0
    for col in range(m.cols):
        p_idx = next((i for i in range(rk, len(rows)) if col in rows[i]), None)
        if p_idx is None:
            continue
        rows[rk], rows[p_idx] = rows[p_idx], rows[rk]
        prow = rows[rk]
        inv = pow(prow[col], -1, p)
        for i in range(rk + 1, len(rows)):
            r = rows[i]
            if col not in r:
                continue
            f = r[col] * inv % p
            for j, x in prow.items():
                y = (r.get(j, 0) - f * x) % p
                if y:
                    r[j] = y
                else:
                    r.pop(j, None)
        rk += 1
    return rk


def kernel_basis(m: SparseRationalMatrix) -> list[list[Fraction]]:
    """Basis of ``{x : m x = 0}``, one vector per free column."""
    red = rref(m)
    basis = []
    for f in red.free_columns():
        x = [Fraction(0)] * m.cols
        x[f] = Fraction(1)
        for row, p in zip(red.rows, red.pivots):
            c = row.get(f)
            if c:
                x[p] = -c
        basis.append(x)
    return basis


def image_reducer(m: SparseRationalMatrix) -> RREF:
    """RREF of the transpose: row space of ``m.T`` is the column space of ``m``."""
    return rref(m.transpose())


def reduce_with(vec: Sequence, red: RREF) -> list[Fraction]:
    out = [Fraction(x) for x in vec]
    if len(out) != red.cols:
        raise ValueError(f"vector of length {len(out)} does not match {red.cols}")
    for row, p in zip(red.rows, red.pivots):
        c = out[p]
        if c:
            for j, x in row.items():
                out[j] -= c * x
    return out


def reduce_mod_image(vec: Sequence, m: SparseRationalMatrix) -> list[Fraction]:
    """Canonical representative of ``vec`` modulo the column space of ``m``.

    The result vanishes on the pivot coordinates of RREF(m.T); it is zero iff
    ``vec`` lies in the image.
    """
    if len(vec) != m.rows:
        raise ValueError(f"vector of length {len(vec)} but matrix has {m.rows} rows")
    return reduce_with(vec, image_reducer(m))


# -- SMS triplet format ----------------------------------------------------


def write_sms(m: SparseRationalMatrix) -> str:
    lines = [f"{m.rows} {m.cols} M"]
    for (i, j) in sorted(m.entries):
        lines.append(f"{i + 1} {j + 1} {m.entries[(i, j)]}")
    lines.append("0 0 0")
    return "\n".join(lines) + "\n"


def read_sms(text: str | Iterable[str]) -> SparseRationalMatrix:
    lines = text.splitlines() if isinstance(text, str) else list(text)
    lines = [ln.strip() for ln in lines if ln.strip()]
    if not lines:
        raise ValueError("empty SMS input")
    head = lines[0].split()
    if len(head) != 3 or head[2] not in ("M", "Q", "R"):
        raise ValueError(f"bad SMS header: {lines[0]!r}")
    nrows, ncols = int(head[0]), int(head[1])
    entries = {}
    for n, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"line {n}: expected 'i j value'")
        if parts == ["0", "0", "0"]:
            break
        i, j = int(parts[0]), int(parts[1])
        if not (1 <= i <= nrows and 1 <= j <= ncols):
            raise ValueError(f"line {n}: index ({i}, {j}) outside {nrows}x{ncols}")
        entries[(i - 1, j - 1)] = Fraction(parts[2])
    else:
        raise ValueError("SMS input missing '0 0 0' terminator")
    return SparseRationalMatrix(nrows, ncols, entries)
