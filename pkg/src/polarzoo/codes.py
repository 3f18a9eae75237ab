"""Linear codes from projective point sets: weight enumerators and two-weight certification."""
from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .certificates import make_certificate
from .gf import GF, field_of_order
from .graphs import linear_representation_graph, srg_check
from .polar import PolarSpace
from .projspace import BudgetExceeded, enumerate_point_array, plucker_vector


class CodeError(ValueError):
    pass


@dataclass
class ProjectiveSet:
    F: GF
    points: np.ndarray  # one normalized row per point

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def k(self) -> int:
        return self.points.shape[1]


@dataclass
class LinearCode:
    F: GF
    G: np.ndarray  # k x n generator matrix
    info: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.G.shape[1]

    @property
    def k(self) -> int:
        return self.G.shape[0]


@dataclass
class WeightDistribution:
    counts: list[int]

    @property
    def support(self) -> set[int]:
        return {w for w, c in enumerate(self.counts) if c and w}

    @property
    def min_distance(self) -> int:
        return min(self.support) if self.support else 0

    def total(self) -> int:
        return sum(self.counts)


def projective_set(F: GF, points) -> ProjectiveSet:
    P = linalg.normalize_rows(F, np.asarray(points, dtype=np.int64))
    if len({tuple(r) for r in P.tolist()}) != len(P):
        raise CodeError("repeated point")
    return ProjectiveSet(F, P)


def code_from_set(S: ProjectiveSet) -> LinearCode:
    """Generator matrix whose columns are the points in the given order."""
    if S.n == 0 or linalg.rank(S.F, S.points) != S.k:
        raise CodeError("the points do not span the ambient space")
    return LinearCode(S.F, S.points.T.copy(), {"points": S.n})


def messages(F: GF, k: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    stop = F.q**k if stop is None else stop
    idx = np.arange(start, stop)
    return np.array(np.unravel_index(idx, (F.q,) * k)).T.astype(np.int64)


def encode(C: LinearCode, x) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=np.int64))
    return linalg.matmul(C.F, x, C.G)


def weight_enumerator(C: LinearCode, budget: int = 10**7, chunk: int = 1 << 14) -> WeightDistribution:
    """Exhaustive count over all q^k messages."""
    total = C.F.q**C.k
    if total > budget:
        raise BudgetExceeded(f"{total} codewords exceed the budget {budget}")
    counts = np.zeros(C.n + 1, dtype=np.int64)
    for s in range(0, total, chunk):
        W = (encode(C, messages(C.F, C.k, s, min(total, s + chunk))) != 0).sum(axis=1)
        counts += np.bincount(W, minlength=C.n + 1)
    return WeightDistribution([int(c) for c in counts])


def hyperplane_counts(S: ProjectiveSet) -> Counter:
    """Histogram of |x^perp n S| over the hyperplanes x of the ambient space."""
    X = enumerate_point_array(S.F, S.k - 1)
    dots = linalg.matmul(S.F, X, S.points.T)
    return Counter(int(c) for c in (dots == 0).sum(axis=1))


def two_weight_certify(C: LinearCode, budget: int = 10**7) -> "Certificate":
    t0 = time.perf_counter()
    wd = weight_enumerator(C, budget)
    sup = sorted(wd.support)
    q = C.F.q
    # exact average weight: every column is nonzero, so each contributes (q-1) q^(k-1)
    avg_ok = sum(w * c for w, c in enumerate(wd.counts)) == C.n * (q - 1) * q ** (C.k - 1)
    data = {"n": C.n, "k": C.k, "q": q, "weights": sup, "distribution": {w: c for w, c in enumerate(wd.counts) if c},
            "min_distance": wd.min_distance, "total_ok": wd.total() == q**C.k and wd.counts[0] == 1,
            "average_ok": avg_ok}
    return make_certificate("two-weight-code", {"n": C.n, "k": C.k, "q": q}, len(sup) == 2,
                            data=data, counters={"codewords": wd.total()}, started=t0)


def weight_section_identity(S: ProjectiveSet, C: LinearCode) -> bool:
    """w(xG) + |x^perp n S| = n for every nonzero message x."""
    X = messages(S.F, S.k)[1:]
    w = (encode(C, X) != 0).sum(axis=1)
    sect = (linalg.matmul(S.F, X, S.points.T) == 0).sum(axis=1)
    return bool((w + sect == S.n).all())


def srg_code_bridge(S: ProjectiveSet, budget: int = 10**6) -> "Certificate":
    """G(Omega) strongly regular, S a two-intersection set, the code two-weight: all or none."""
    t0 = time.perf_counter()
    C = code_from_set(S)
    tw = two_weight_certify(C)
    hc = hyperplane_counts(S)
    two_int = len(hc) == 2
    G = linear_representation_graph(S.F, S.points, budget)
    r = srg_check(G)
    srg = r.ok
    sides = {"srg": srg, "two_intersection": two_int, "two_weight": tw.ok}
    holds = len(set(sides.values())) == 1
    data = {"sides": sides, "equivalence_holds": holds, "hyperplane_counts": dict(sorted(hc.items())),
            "weights": tw["weights"], "min_distance": tw["min_distance"],
            "params": list(r.params.as_tuple()) if srg else None}
    return make_certificate("srg-code-bridge", {"n": S.n, "k": S.k, "q": S.F.q}, holds,
                            data=data, counters={"vertices": G.n, "hyperplanes": sum(hc.values())},
                            started=t0)


# line sets of H(3,q^2) as point sets of Q-(5,q)

def hodge_conjugate(K: GF, p: np.ndarray, q: int) -> np.ndarray:
    """Plucker vector of the polar line for the identity Hermitian form over GF(q^2)."""
    if q * q != K.q:
        raise CodeError("field is not a quadratic extension")
    c = K.vpow(np.asarray(p, dtype=np.int64), q)
    # pairs (01,02,03,12,13,23) -> (23,-13,12,03,-02,01)
    out = c[..., [5, 4, 3, 2, 1, 0]].copy()
    out[..., 1] = K.vneg(out[..., 1])
    out[..., 4] = K.vneg(out[..., 4])
    return out


def klein_image(ps: PolarSpace, lines) -> tuple[ProjectiveSet, dict]:
    """Points of PG(5,q) for lines of H(3,q^2) given as point-id rows.

    Each Plucker vector is rescaled to be fixed by the semilinear involution coming
    from the Hermitian polarity; the fixed vectors form a GF(q)-space whose
    coordinates give the image.
    """
    K = ps.F
    q = math.isqrt(K.q)
    if ps.family != "H" or ps.d != 2:
        raise CodeError("klein_image needs H(3,q^2)")
    F = field_of_order(q)
    emb = K.embedding(F.e)
    back = {int(v): i for i, v in enumerate(emb)}
    all_lines = ps.level_point_ids(2)

    def fixed(row):
        a, b = ps.points[row[0]], ps.points[row[1]]
        p = plucker_vector(K, a, b)
        for mu in range(1, K.q):
            v = K.vmul(mu, p)
            if np.array_equal(hodge_conjugate(K, v, q), v):
                return v
        raise CodeError("Plucker vector has no fixed rescaling")

    allfix = np.array([fixed(r) for r in all_lines])
    basis_rows = []
    for v in allfix:
        trial = np.array(basis_rows + [v])
        if linalg.rank(K, trial) == len(trial):
            basis_rows.append(v)
        if len(basis_rows) == 6:
            break
    B = np.array(basis_rows)
    out = []
    for row in np.asarray(lines, dtype=np.int64):
        c = linalg.solve_combination(K, B, fixed(row))
        if c is None or any(int(x) not in back for x in c):
            raise CodeError("image leaves the subgeometry")
        out.append([back[int(x)] for x in c])
    return projective_set(F, out), {"basis": B.tolist()}
