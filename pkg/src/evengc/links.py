"""Parametrized Hopf and Borromean links and the Gauss linking integral.

Spheres are sampled through two stereographic charts on the unit ball, one
per hemisphere.  The linking integral of ``a: S^p -> R^d`` and
``b: S^q -> R^d`` with ``p + q = d - 1`` is the degree of
``phi = (b - a) / |b - a|``; its density in chart coordinates is

    (-1)^p det[phi, da/dw, db/dw'] / (r^(d-1) vol(S^(d-1)))

times the chart and component orientation signs.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .graphs import permutation_sign
from .linalg import bareiss_det

__all__ = [
    "LinkError",
    "ParamSphere",
    "ParamLink",
    "MCResult",
    "make_hopf",
    "make_borromean",
    "make_split",
    "gauss_linking",
    "antipodal_symmetry_check",
    "borromean_triple_sign",
    "sphere_volume",
    "hopf_local_degree",
]

CHUNK = 1 << 16
FD_STEP = 1e-5
MIN_DISTANCE = 1e-6


class LinkError(ValueError):
    pass


def sphere_volume(n: int) -> float:
    """Volume of the unit n-sphere in R^(n+1)."""
    return 2 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)


def ball_volume(n: int) -> float:
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


# -- charts ---------------------------------------------------------------------


def _chart(w: np.ndarray, north: np.ndarray):
    """Points of S^p and their w-partials for a batch of chart coordinates.

    South chart: s = (2w, |w|^2 - 1) / (1 + |w|^2).  North chart uses
    (2Rw, 1 - |w|^2) / (1 + |w|^2) where R flips w_1, so both charts carry
    the same orientation.  Returns ``s`` (N, p+1) and ``ds`` (N, p, p+1).
    """
    n_pts, p = w.shape
    w = w.copy()
    w[north, 0] *= -1
    sq = np.einsum("ij,ij->i", w, w)
    n = 1 + sq
    s = np.empty((n_pts, p + 1))
    s[:, :p] = 2 * w / n[:, None]
    last = np.where(north, 1 - sq, sq - 1)
    s[:, p] = last / n
    ds = np.empty((n_pts, p, p + 1))
    eye = np.eye(p)
    ds[:, :, :p] = 2 * eye[None] / n[:, None, None] - 4 * w[:, :, None] * w[:, None, :] / (n**2)[:, None, None]
    sgn = np.where(north, -1.0, 1.0)
    ds[:, :, p] = sgn[:, None] * 4 * w / (n**2)[:, None]
    ds[north, 0, :] *= -1
    return s, ds


def _chart_sign(p: int) -> int:
    """Orientation of the charts against outward-normal-first on S^p."""
    w = np.zeros((2, p))
    s, ds = _chart(w, np.array([False, True]))
    signs = {int(np.sign(np.linalg.det(np.vstack([s[i], ds[i]])))) for i in range(2)}
    assert len(signs) == 1
    return signs.pop()


def _sample_ball(rng: np.random.Generator, n: int, p: int) -> np.ndarray:
    if p == 1:
        return rng.uniform(-1.0, 1.0, size=(n, 1))
    g = rng.standard_normal((n, p))
    g /= np.linalg.norm(g, axis=1)[:, None]
    r = rng.uniform(0.0, 1.0, size=n) ** (1.0 / p)
    return g * r[:, None]


# -- spheres and links -----------------------------------------------------------


@dataclass(frozen=True)
class ParamSphere:
    """Embedded p-sphere in R^d.

    Either affine, ``x = center + A s`` for ``s`` on the unit sphere of
    R^(p+1), or given by ``func`` mapping an (N, p+1) array of sphere points to
    (N, d).  Non-affine maps get central finite-difference partials.
    ``orientation_sign`` is relative to the pushforward of the outward-normal-
    first orientation of S^p.
    """

    p: int
    d: int
    center: np.ndarray | None = None
    A: np.ndarray | None = None
    func: Callable | None = None
    orientation_sign: int = 1
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.func is None and (self.center is None or self.A is None):
            raise LinkError("give either an affine map or a function")
        if self.A is not None and np.shape(self.A) != (self.d, self.p + 1):
            raise LinkError(f"affine matrix must be {self.d}x{self.p + 1}")

    def reversed(self) -> "ParamSphere":
        return replace(self, orientation_sign=-self.orientation_sign)

    def embed(self, s: np.ndarray) -> np.ndarray:
        if self.func is not None:
            return np.asarray(self.func(s), dtype=float)
        return self.center[None, :] + s @ self.A.T

    def evaluate(self, w: np.ndarray, north: np.ndarray):
        """Positions (N, d) and partials (N, p, d) at chart points."""
        s, ds = _chart(w, north)
        if self.func is None:
            return self.embed(s), ds @ self.A.T
        x = self.embed(s)
        parts = np.empty((len(w), self.p, self.d))
        for i in range(self.p):
            h = np.zeros_like(w)
            h[:, i] = FD_STEP
            # finite differences in the chart, then undo the flip applied inside
            sp, _ = _chart(w + h, north)
            sm, _ = _chart(w - h, north)
            parts[:, i, :] = (self.embed(sp) - self.embed(sm)) / (2 * FD_STEP)
        return x, parts


@dataclass(frozen=True)
class ParamLink:
    components: tuple
    convention: str = ""

    def __getitem__(self, i: int) -> ParamSphere:
        return self.components[i]

    def __len__(self) -> int:
        return len(self.components)

    def min_distance(self, i: int, j: int, samples: int = 3000, seed: int = 0) -> float:
        """Sampled lower-bound check of the distance between two components."""
        rng = np.random.Generator(np.random.Philox(key=[seed, 1 << 40]))
        a, b = self.components[i], self.components[j]
        xa = a.embed(_uniform_sphere(rng, samples, a.p))
        xb = b.embed(_uniform_sphere(rng, samples, b.p))
        best = np.inf
        for start in range(0, samples, 2000):
            diff = xa[start:start + 2000, None, :] - xb[None, :, :]
            best = min(best, float(np.sqrt((diff**2).sum(-1)).min()))
        return best


def _uniform_sphere(rng, n, p):
    g = rng.standard_normal((n, p + 1))
    return g / np.linalg.norm(g, axis=1)[:, None]


def _block(d: int, rows: Sequence[int], scale: Sequence[float]) -> np.ndarray:
    A = np.zeros((d, len(rows)))
    for c, (r, f) in enumerate(zip(rows, scale)):
        A[r, c] = f
    return A


def _det_of_unit_columns(cols: Sequence[tuple[int, int]]) -> int:
    """Exact det of columns ``sign * e_index`` (0-based indices)."""
    sign = 1
    for s, _ in cols:
        sign *= s
    return sign * permutation_sign([i for _, i in cols])


def hopf_local_degree(p: int, q: int, sign_p: int = 1, sign_q: int = 1) -> int:
    """Exact local degree of the Gauss map at its unique preimage of +v_1.

    Coordinates (t, u_1..u_p, v_1..v_q).  The preimage is a = (1, 0, 0) with
    s = e_0 on S^p and b = (1, 0, e_1) with s' = e_1 on S^q.  Positive tangent
    frames there are (e_1..e_p) and (-e_0, e_2..e_q).
    """
    t, u, v = 0, list(range(1, p + 1)), list(range(p + 1, p + q + 1))
    phi = [(1, v[0])]
    da = [(-1, x) for x in u]  # d(b - a) along a
    db = [(-1, t)] + [(1, x) for x in v[1:]]
    return sign_p * sign_q * _det_of_unit_columns(phi + da + db)


def make_hopf(p: int, q: int, d: int, standard_orientation: bool = False) -> ParamLink:
    """Hopf link in R^d = R_t x R^p_u x R^q_v.

    S^p: t^2 + |u|^2 = 1, v = 0.  S^q: (t - 1)^2 + |v|^2 = 1, u = 0.
    For p = 1 the circle is oriented by d/du_1 at (1, 0, ..., 0) and S^q by
    d/dv_1 ^ ... ^ d/dv_q at the origin, opposite to its boundary orientation.
    Other (p, q) orient S^q so the linking number is +1.  With
    ``standard_orientation`` both components use the boundary orientation.
    """
    if not (0 < p < d - 1 and 0 < q < d - 1) or p + q != d - 1:
        raise LinkError(f"Hopf link needs 0 < p, q < d-1 and p + q = d - 1, got ({p}, {q}, {d})")
    A = _block(d, range(0, p + 1), [1.0] * (p + 1))
    B = _block(d, [0] + list(range(p + 1, d)), [1.0] * (q + 1))
    cb = np.zeros(d)
    cb[0] = 1.0
    if standard_orientation:
        sp, sq, conv = 1, 1, "boundary orientation on both components"
    elif p == 1:
        # d/du_1 at s = e_0 is the positive boundary frame; d/dv at s = -e_0 is not
        sp, sq, conv = 1, -1, "S^1 by d/du_1 at (1,0,...,0); S^(d-2) by d/dv_1^...^d/dv_(d-2) at 0"
        assert hopf_local_degree(p, q, sp, sq) == 1
    else:
        sp = 1
        sq = hopf_local_degree(p, q)
        conv = f"S^{p} boundary orientation; S^{q} oriented so that Lk = +1"
    a = ParamSphere(p, d, np.zeros(d), A, orientation_sign=sp, label=f"S^{p}")
    b = ParamSphere(q, d, cb, B, orientation_sign=sq, label=f"S^{q}")
    return ParamLink((a, b), conv)


def make_split(p: int, q: int, d: int, offset: float = 10.0) -> ParamLink:
    """Two round spheres in disjoint balls."""
    if p + q != d - 1 or p < 1 or q < 1:
        raise LinkError("split link needs p + q = d - 1")
    A = _block(d, range(0, p + 1), [1.0] * (p + 1))
    B = _block(d, range(0, q + 1), [1.0] * (q + 1))
    cb = np.zeros(d)
    cb[-1] = offset
    a = ParamSphere(p, d, np.zeros(d), A, label=f"S^{p}")
    b = ParamSphere(q, d, cb, B, label=f"S^{q}")
    return ParamLink((a, b), "boundary orientation on both components")


def _borromean_blocks(p: int, q: int, r: int, d: int):
    if not all(0 < x < d - 1 for x in (p, q, r)) or p + q + r != 2 * d - 3:
        raise LinkError(f"Borromean link needs 0 < p, q, r < d-1 and p+q+r = 2d-3, got ({p},{q},{r},{d})")
    c1, c2, c3 = d - p - 1, d - q - 1, d - r - 1
    x = list(range(0, c1))
    y = list(range(c1, c1 + c2))
    z = list(range(c1 + c2, d))
    return x, y, z


def _coorientation_sign(span: list[int], conormal: list[int], d: int) -> int:
    """Sign c with c * (span frame) ^ (conormal frame) ~ o(R^d)."""
    return permutation_sign(span + conormal)


def make_borromean(p: int, q: int, r: int, d: int) -> ParamLink:
    """Borromean link in R^d = R^c1_x x R^c2_y x R^c3_z, c_i the codimensions minus 1.

    L1: x = 0, |y|^2/4 + |z|^2 = 1.  L2: y = 0, |z|^2/4 + |x|^2 = 1.
    L3: z = 0, |x|^2/4 + |y|^2 = 1.  Each bounds a disk cooriented by the
    coordinates it kills; the disk orientation follows from the
    coorientation and the component gets the boundary orientation.
    """
    x, y, z = _borromean_blocks(p, q, r, d)
    comps = []
    specs = [
        (p, y + z, [2.0] * len(y) + [1.0] * len(z), x),
        (q, x + z, [1.0] * len(x) + [2.0] * len(z), y),
        (r, x + y, [2.0] * len(x) + [1.0] * len(y), z),
    ]
    for n, (dim, rows, scale, killed) in enumerate(specs, start=1):
        # rows are listed in increasing coordinate order, so the linear map
        # onto the disk coordinates is orientation preserving
        sign = _coorientation_sign(rows, killed, d)
        A = _block(d, rows, scale)
        comps.append(ParamSphere(dim, d, np.zeros(d), A, orientation_sign=sign, label=f"L{n}"))
    return ParamLink(tuple(comps), "components oriented as boundaries of cooriented spanning disks")


def borromean_triple_sign(p: int, q: int, r: int, d: int, order: Sequence[int] = (0, 1, 2)) -> int:
    """Sign of the triple intersection of the spanning disks at the origin.

    The intersection is cooriented by the wedge of the three coorientation
    frames (dx, dy, dz); compared to o(R^d) with an exact determinant.
    ``order`` permutes the blocks, for sanity checks.
    """
    blocks = _borromean_blocks(p, q, r, d)
    cols = [i for b in order for i in blocks[b]]
    m = [[Fraction(1 if row == col else 0) for col in cols] for row in range(d)]
    det = bareiss_det(m)
    return 1 if det > 0 else -1


# -- Monte Carlo ------------------------------------------------------------------


@dataclass(frozen=True)
class MCResult:
    estimate: float
    stderr: float
    samples: int
    seed: int
    convention: str = ""
    min_distance: float = float("nan")

    def to_json(self) -> dict:
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
            "convention": self.convention,
        }


def _density(a: ParamSphere, b: ParamSphere, wa, na, wb, nb):
    xa, da = a.evaluate(wa, na)
    xb, db = b.evaluate(wb, nb)
    diff = xb - xa
    r = np.linalg.norm(diff, axis=1)
    # coincident points give nan here; the caller rejects them by distance
    with np.errstate(invalid="ignore", divide="ignore"):
        phi = diff / r[:, None]
        mats = np.concatenate([phi[:, None, :], da, db], axis=1)
        det = np.linalg.det(mats)
    d = a.d
    sign = (-1) ** a.p * _chart_sign(a.p) * _chart_sign(b.p) * a.orientation_sign * b.orientation_sign
    return sign * det / (r ** (d - 1) * sphere_volume(d - 1)), r


def _chunk_stats(a, b, seed, chunk, n, antithetic):
    rng = np.random.Generator(np.random.Philox(key=[seed, chunk]))
    wa = _sample_ball(rng, n, a.p)
    wb = _sample_ball(rng, n, b.p)
    na = rng.integers(0, 2, size=n).astype(bool)
    nb = rng.integers(0, 2, size=n).astype(bool)
    weight = 4 * ball_volume(a.p) * ball_volume(b.p)
    f, r = _density(a, b, wa, na, wb, nb)
    rmin = float(r.min())
    if antithetic:
        g, r2 = _density(a, b, -wa, na, -wb, nb)
        f = 0.5 * (f + g)
        rmin = min(rmin, float(r2.min()))
    f = f * weight
    mean = float(f.mean())
    m2 = float(((f - mean) ** 2).sum())
    return n, mean, m2, rmin


def _combine(stats):
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b, _ in stats:
        if n == 0:
            n, mean, m2 = nb, mb, m2b
            continue
        tot = n + nb
        delta = mb - mean
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    return n, mean, m2


def gauss_linking(
    a: ParamSphere,
    b: ParamSphere,
    samples: int = 100_000,
    seed: int = 0,
    threads: int = 1,
    antithetic: bool = False,
    convention: str = "",
) -> MCResult:
    """Monte Carlo estimate of Lk(a, b).

    Samples are split into fixed chunks with Philox streams keyed by
    (seed, chunk), and chunk statistics are merged in chunk order, so the
    result does not depend on ``threads``.  With ``antithetic`` each sample
    also uses the reflected chart point and ``samples`` counts pairs.
    """
    if a.d != b.d or a.p + b.p != a.d - 1:
        raise LinkError(f"dimensions {a.p} + {b.p} do not add up to {a.d} - 1")
    if samples < 2:
        raise LinkError("need at least two samples")
    sizes = [CHUNK] * (samples // CHUNK)
    if samples % CHUNK:
        sizes.append(samples % CHUNK)
    jobs = [(a, b, seed, c, n, antithetic) for c, n in enumerate(sizes)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            stats = list(pool.map(lambda job: _chunk_stats(*job), jobs))
    else:
        stats = [_chunk_stats(*job) for job in jobs]
    rmin = min(s[3] for s in stats)
    if rmin < MIN_DISTANCE:
        raise LinkError(f"components too close (sampled distance {rmin:.3g})")
    n, mean, m2 = _combine(stats)
    std = math.sqrt(m2 / (n - 1))
    return MCResult(mean, std / math.sqrt(n), n, seed, convention, rmin)


# -- exact sign checks ------------------------------------------------------------


def _rational_sphere_point(w: Sequence[Fraction]) -> list[Fraction]:
    sq = sum(x * x for x in w)
    n = 1 + sq
    return [2 * x / n for x in w] + [(sq - 1) / n]


def antipodal_symmetry_check(d: int, trials: int = 50, seed: int = 0) -> bool:
    """det[-x, -v_1, ...] == (-1)^d det[x, v_1, ...] for rational x on S^(d-1)."""
    if d < 2:
        raise ValueError("d must be at least 2")
    rng = np.random.Generator(np.random.Philox(key=[seed, 7]))

    def rat():
        return Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 8)))

    for _ in range(trials):
        x = _rational_sphere_point([rat() for _ in range(d - 1)])
        if sum(c * c for c in x) != 1:
            return False
        vs = [[rat() for _ in range(d)] for _ in range(d - 1)]
        cols = [x] + vs
        m = [[cols[c][r] for c in range(d)] for r in range(d)]
        neg = [[-e for e in row] for row in m]
        if bareiss_det(neg) != (-1) ** d * bareiss_det(m):
            return False
    return True
