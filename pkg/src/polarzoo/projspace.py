"""Projective spaces PG(n,q): points, subspaces, group orders, Klein map, field reduction."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

from . import linalg
from .gf import GF, FieldError, field_of_order, prime_power

DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(RuntimeError):
    pass


def gaussian_binomial(r: int, h: int, q: int) -> int:
    """Number of h-dimensional subspaces of an r-dimensional GF(q)-space (0 if h > r)."""
    if h < 0 or h > r:
        return 0
    num = den = 1
    for i in range(h):
        num *= q ** (r - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def theta(n: int, q: int) -> int:
    """Number of points of PG(n,q)."""
    if n < 0:
        return 0
    return (q ** (n + 1) - 1) // (q - 1)


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple
    q: int

    @staticmethod
    def make(F: GF, coords) -> "ProjPoint":
        v = np.asarray(coords, dtype=np.int64)
        if not v.any():
            raise ValueError("the zero vector is not a point")
        return ProjPoint(tuple(int(x) for x in linalg.normalize_rows(F, v[None])[0]), F.q)

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def __str__(self) -> str:
        return ":".join(str(c) for c in self.coords)


class Subspace:
    """A projective subspace stored as its reduced echelon basis."""

    __slots__ = ("F", "n", "basis", "_key")

    def __init__(self, F: GF, n: int, rows=None, *, canonical: bool = False):
        self.F, self.n = F, n
        if rows is None or len(rows) == 0:
            B = np.zeros((0, n + 1), dtype=np.int64)
        elif canonical:
            B = np.asarray(rows, dtype=np.int64)
        else:
            B, _ = linalg.rref(F, linalg.as_matrix(rows))
        if B.shape[1] != n + 1:
            raise ValueError("basis width does not match the ambient dimension")
        self.basis = B
        self._key = (F.q, n, B.shape[0], B.tobytes())

    @property
    def projdim(self) -> int:
        return self.basis.shape[0] - 1

    @property
    def vdim(self) -> int:
        return self.basis.shape[0]

    def key(self) -> tuple:
        return self._key

    def flat(self) -> tuple:
        return tuple(int(x) for x in self.basis.ravel())

    def __eq__(self, other):
        return isinstance(other, Subspace) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return (self.vdim, self.flat()) < (other.vdim, other.flat())

    def __repr__(self):
        return f"Subspace(PG({self.n},{self.F.q}), projdim={self.projdim}, {self.basis.tolist()})"

    def points(self) -> np.ndarray:
        """All normalized points of the subspace, in lexicographic order."""
        k = self.vdim
        if k == 0:
            return np.zeros((0, self.n + 1), dtype=np.int64)
        coeffs = enumerate_point_array(self.F, k - 1)
        pts = linalg.normalize_rows(self.F, linalg.matmul(self.F, coeffs, self.basis))
        order = np.lexsort(pts.T[::-1])
        return pts[order]

    def contains_vector(self, v) -> bool:
        return contains(self, v)


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.F is not b.F or a.n != b.n:
        raise ValueError("ambient mismatch")


def span(a: Subspace, b) -> Subspace:
    if isinstance(b, Subspace):
        _check_ambient(a, b)
        rows = np.vstack([a.basis, b.basis])
    else:
        rows = np.vstack([a.basis, np.asarray(b, dtype=np.int64).reshape(-1, a.n + 1)])
    return Subspace(a.F, a.n, rows)


def span_vectors(F: GF, n: int, rows) -> Subspace:
    return Subspace(F, n, np.asarray(rows, dtype=np.int64).reshape(-1, n + 1))


def dual_basis(S: Subspace) -> np.ndarray:
    """Rows spanning the annihilator {y : B y = 0}."""
    return linalg.nullspace(S.F, S.basis, S.n + 1)


def meet(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    eqs = np.vstack([dual_basis(a), dual_basis(b)])
    return Subspace(a.F, a.n, linalg.nullspace(a.F, eqs, a.n + 1))


def contains(a: Subspace, p) -> bool:
    if isinstance(p, Subspace):
        return span(a, p).vdim == a.vdim
    if isinstance(p, ProjPoint):
        p = p.coords
    v = np.asarray(p, dtype=np.int64).reshape(1, -1)
    return linalg.rank(a.F, np.vstack([a.basis, v])) == a.vdim


def enumerate_point_array(F: GF, n: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Points of PG(n,q) as an int array, normalized, lexicographically ordered."""
    q = F.q
    total = theta(n, q)
    if total > budget:
        raise BudgetExceeded(f"PG({n},{q}) has {total} points")
    blocks = []
    for lead in range(n, -1, -1):
        tail = n - lead
        m = q**tail
        block = np.zeros((m, n + 1), dtype=np.int64)
        block[:, lead] = 1
        if tail:
            idx = np.arange(m)
            for j in range(tail):
                block[:, lead + 1 + j] = (idx // q ** (tail - 1 - j)) % q
        blocks.append(block)
    return np.vstack(blocks)


def enumerate_points(n: int, q: int, budget: int = DEFAULT_BUDGET) -> list[ProjPoint]:
    F = field_of_order(q)
    return [ProjPoint(tuple(int(x) for x in row), q) for row in enumerate_point_array(F, n, budget)]


def enumerate_subspace_list(F: GF, n: int, projdim: int, budget: int = DEFAULT_BUDGET) -> list[Subspace]:
    k = projdim + 1
    count = gaussian_binomial(n + 1, k, F.q)
    if count > budget:
        raise BudgetExceeded(f"{count} subspaces requested")
    if k == 0:
        return [Subspace(F, n)]
    out = []
    q = F.q
    for piv in itertools.combinations(range(n + 1), k):
        free = [(i, c) for i in range(k) for c in range(piv[i] + 1, n + 1) if c not in piv]
        for vals in itertools.product(range(q), repeat=len(free)):
            B = np.zeros((k, n + 1), dtype=np.int64)
            for i, c in enumerate(piv):
                B[i, c] = 1
            for (i, c), v in zip(free, vals):
                B[i, c] = v
            out.append(Subspace(F, n, B, canonical=True))
    out.sort(key=lambda s: s.flat())
    return out


def enumerate_subspaces(n: int, q: int, projdim: int, budget: int = DEFAULT_BUDGET) -> list[Subspace]:
    return enumerate_subspace_list(field_of_order(q), n, projdim, budget)


class PointIndex:
    """Lookup from normalized coordinate vectors to positions in a point list."""

    def __init__(self, F: GF, points: np.ndarray):
        self.F = F
        self.points = np.asarray(points, dtype=np.int64)
        self.width = self.points.shape[1]
        self._pw = F.q ** np.arange(self.width - 1, -1, -1, dtype=np.int64)
        codes = self.points @ self._pw
        size = F.q**self.width
        if size <= 20_000_000:
            table = np.full(size, -1, dtype=np.int64)
            table[codes] = np.arange(len(codes))
            self._table, self._dict = table, None
        else:
            self._table = None
            self._dict = {int(c): i for i, c in enumerate(codes)}

    def __len__(self):
        return len(self.points)

    def lookup(self, vecs, normalize: bool = True) -> np.ndarray:
        """Indices of the given vectors (-1 when absent)."""
        V = np.asarray(vecs, dtype=np.int64).reshape(-1, self.width)
        if normalize:
            V = linalg.normalize_rows(self.F, V)
        codes = V @ self._pw
        if self._table is not None:
            return self._table[codes]
        return np.array([self._dict.get(int(c), -1) for c in codes], dtype=np.int64)

    def index(self, vec) -> int:
        return int(self.lookup(vec)[0])


class ProjectiveSpace:
    """PG(n,q) with its enumerated point array and index."""

    def __init__(self, n: int, F: GF | int):
        self.F = F if isinstance(F, GF) else field_of_order(F)
        self.n = n

    @property
    def q(self) -> int:
        return self.F.q

    @cached_property
    def points(self) -> np.ndarray:
        return enumerate_point_array(self.F, self.n)

    @cached_property
    def index(self) -> PointIndex:
        return PointIndex(self.F, self.points)

    def subspace(self, rows) -> Subspace:
        return span_vectors(self.F, self.n, rows)

    def point_ids_of(self, S: Subspace) -> np.ndarray:
        return np.sort(self.index.lookup(S.points()))

    def hyperplanes(self) -> np.ndarray:
        """Hyperplanes as dual coordinate vectors (same list as the points)."""
        return self.points

    def __repr__(self):
        return f"PG({self.n},{self.q})"


# group orders

def _gl(r, q):
    out = q ** (r * (r - 1) // 2)
    for j in range(1, r + 1):
        out *= q**j - 1
    return out


def _gu(r, q):
    out = q ** (r * (r - 1) // 2)
    for j in range(1, r + 1):
        out *= q**j - (-1) ** j
    return out


def _sp(r, q):
    if r % 2:
        raise ValueError("symplectic groups need even dimension")
    m = r // 2
    out = q ** (m * m)
    for i in range(1, m + 1):
        out *= q ** (2 * i) - 1
    return out


def _go(sign, r, q):
    if sign == 0:
        if r % 2 == 0:
            raise ValueError("parabolic orthogonal groups need odd dimension")
        m = (r - 1) // 2
        base = _sp(2 * m, q)
        return base if q % 2 == 0 else 2 * base
    if r % 2:
        raise ValueError("hyperbolic/elliptic orthogonal groups need even dimension")
    m = r // 2
    out = 2 * q ** (m * (m - 1)) * (q**m - sign)
    for i in range(1, m):
        out *= q ** (2 * i) - 1
    return out


@dataclass(frozen=True)
class GroupOrder:
    family: str
    r: int
    q: int
    order: int


_FAMILIES = (
    "GL", "SL", "PGL", "PSL", "PGammaL", "Sp", "PSp", "GU", "SU", "PGU", "PSU",
    "GO+", "GO-", "GO", "PGO+", "PGO-", "PGO",
)


def group_order(family: str, r: int, q: int) -> GroupOrder:
    """Exact order of a classical group acting on an r-dimensional space.

    For the unitary families q is the order of the fixed field, so the
    matrices live over GF(q^2).
    """
    fam = family.replace("Γ", "Gamma")
    p, e = prime_power(q)
    if fam == "GL":
        n = _gl(r, q)
    elif fam in ("SL", "PGL"):
        n = _gl(r, q) // (q - 1)
    elif fam == "PSL":
        n = _gl(r, q) // (q - 1) // gcd(r, q - 1)
    elif fam == "PGammaL":
        n = e * _gl(r, q) // (q - 1)
    elif fam == "Sp":
        n = _sp(r, q)
    elif fam == "PSp":
        n = _sp(r, q) // gcd(2, q - 1)
    elif fam == "GU":
        n = _gu(r, q)
    elif fam in ("SU", "PGU"):
        n = _gu(r, q) // (q + 1)
    elif fam == "PSU":
        n = _gu(r, q) // (q + 1) // gcd(r, q + 1)
    elif fam in ("GO+", "GO-", "GO"):
        n = _go({"GO+": 1, "GO-": -1, "GO": 0}[fam], r, q)
    elif fam in ("PGO+", "PGO-", "PGO"):
        base = _go({"PGO+": 1, "PGO-": -1, "PGO": 0}[fam], r, q)
        n = base // gcd(2, q - 1) if fam != "PGO" else base // (2 if q % 2 else 1)
    else:
        raise ValueError(f"unsupported family {family!r}; known: {', '.join(_FAMILIES)}")
    return GroupOrder(fam, r, q, n)


# Klein correspondence

PLUCKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def plucker_vector(F: GF, a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return np.array(
        [F.sub(F.mul(int(a[i]), int(b[j])), F.mul(int(a[j]), int(b[i]))) for i, j in PLUCKER_PAIRS],
        dtype=np.int64,
    )


def klein_map(line: Subspace) -> ProjPoint:
    if line.n != 3 or line.projdim != 1:
        raise ValueError("klein_map needs a line of PG(3,q)")
    F = line.F
    return ProjPoint.make(F, plucker_vector(F, line.basis[0], line.basis[1]))


def klein_quadric_value(F: GF, x) -> int:
    x = [int(t) for t in x]
    v = F.mul(x[0], x[5])
    v = F.sub(v, F.mul(x[1], x[4]))
    return F.add(v, F.mul(x[2], x[3]))


def klein_form(F: GF, x, y) -> int:
    """Polar form of X0X5 - X1X4 + X2X3."""
    x = [int(t) for t in x]
    y = [int(t) for t in y]
    terms = [(0, 5, 1), (5, 0, 1), (1, 4, -1), (4, 1, -1), (2, 3, 1), (3, 2, 1)]
    acc = 0
    for i, j, s in terms:
        t = F.mul(x[i], y[j])
        acc = F.add(acc, t) if s > 0 else F.sub(acc, t)
    return acc


def klein_inverse(F: GF, point) -> Subspace:
    p = [int(t) for t in (point.coords if isinstance(point, ProjPoint) else point)]
    if klein_quadric_value(F, p) != 0:
        raise ValueError("point is not on the Klein quadric")
    P = [[0] * 4 for _ in range(4)]
    for (i, j), v in zip(PLUCKER_PAIRS, p):
        P[i][j] = v
        P[j][i] = F.neg(v)
    rows = np.array(P, dtype=np.int64)
    S = Subspace(F, 3, rows)
    if S.projdim != 1:
        raise ValueError("not a Plücker vector")
    return S


def lines_intersect(l1: Subspace, l2: Subspace) -> bool:
    return span(l1, l2).projdim <= 2


def klein_orthogonal(F: GF, x: ProjPoint, y: ProjPoint) -> bool:
    return klein_form(F, x.coords, y.coords) == 0


# field reduction

class FieldReduction:
    """The F_q-linear identification of F_{q^n}^r with F_q^{rn}."""

    def __init__(self, r: int, n: int, q: int):
        self.r, self.n = r, n
        self.small = field_of_order(q)
        self.big = field_of_order(q**n)
        if self.big.p != self.small.p:
            raise FieldError("characteristics differ")
        m = self.small.e
        self.embed = self.big.embedding(m)
        back = np.full(self.big.q, -1, dtype=np.int64)
        back[self.embed] = np.arange(self.small.q)
        self.unembed = back
        g = self.big.primitive
        self.basis = [self.big.pow(g, j) for j in range(n)]
        # coordinates of every big element in the basis 1, g, ..., g^(n-1)
        coords = np.full((self.big.q, n), -1, dtype=np.int64)
        for cs in itertools.product(range(self.small.q), repeat=n):
            acc = 0
            for c, b in zip(cs, self.basis):
                acc = self.big.add(acc, self.big.mul(int(self.embed[c]), b))
            coords[acc] = cs
        self.coords = coords
        self.source_n = r - 1
        self.target_n = r * n - 1

    def vector(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return self.coords[x].reshape(-1)

    def point_image(self, x) -> Subspace:
        rows = [self.vector(self.big.vmul(x, b)) for b in self.basis]
        return Subspace(self.small, self.target_n, np.array(rows))

    def image(self, S: Subspace) -> Subspace:
        rows = [self.vector(self.big.vmul(v, b)) for v in S.basis for b in self.basis]
        if not rows:
            return Subspace(self.small, self.target_n)
        return Subspace(self.small, self.target_n, np.array(rows))


def field_reduction(r: int, n: int, q: int) -> FieldReduction:
    return FieldReduction(r, n, q)


def is_spread(subspaces: list[Subspace], space: ProjectiveSpace) -> dict:
    """Check pairwise disjointness and cover of the point set."""
    counts = np.zeros(len(space.points), dtype=np.int64)
    for S in subspaces:
        np.add.at(counts, space.index.lookup(S.points()), 1)
    return {
        "size": len(subspaces),
        "partition": bool((counts == 1).all()),
        "max_cover": int(counts.max()) if len(counts) else 0,
    }
