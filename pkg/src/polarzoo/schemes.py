"""Association schemes on generators, exact idempotents, designs and chain liftings."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .certificates import make_certificate
from .constructions import RegularSystem, generator_classes, verify_regular_system
from .graphs import Graph, dual_polar_graph, generator_incidence, meet_sizes, spectrum_certify
from .polar import Form, PolarSpace
from .projspace import BudgetExceeded, Subspace, enumerate_point_array, gaussian_binomial, theta

_EXACT = 2**53


class SchemeError(ValueError):
    pass


def int_matmul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Exact integer product; float64 BLAS when the entry bound allows it."""
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    bound = X.shape[1] * int(np.abs(X).max(initial=0)) * int(np.abs(Y).max(initial=0))
    if bound < _EXACT:
        return np.rint(X.astype(np.float64) @ Y.astype(np.float64)).astype(np.int64)
    out = X.astype(object) @ Y.astype(object)
    if bound < 2**63:
        return out.astype(np.int64)
    return out


# eigenvalues of the distance graphs

def _qpow(q: int, exponent: Fraction) -> Fraction:
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        return Fraction(q) ** int(exponent)
    r = math.isqrt(q)
    if r * r != q or (2 * exponent).denominator != 1:
        raise SchemeError("half-integer powers need a square q")
    return Fraction(r) ** int(2 * exponent)


def distance_eigenvalue(d: int, e, q: int, i: int, j: int) -> int:
    """Eigenvalue number j of the i-th distance graph of a rank-d polar space with parameter e."""
    e = Fraction(e)
    total = Fraction(0)
    for u in range(max(0, j - i), min(d - i, j) + 1):
        a = u + i - j
        ex = Fraction(a * (a + 2 * e - 1), 2) + Fraction((j - u) * (j - u - 1), 2)
        term = gaussian_binomial(d - j, d - i - u, q) * gaussian_binomial(j, u, q) * _qpow(q, ex)
        total += term if (j + u) % 2 == 0 else -term
    if total.denominator != 1:
        raise SchemeError("non-integral eigenvalue")
    return int(total)


def distance_eigenvalues(d: int, e, q: int, i: int) -> list[int]:
    return [distance_eigenvalue(d, e, q, i, j) for j in range(d + 1)]


def certify_distance_spectrum(ps: PolarSpace, i: int, meets: np.ndarray | None = None) -> dict:
    """Annihilation certificate for D^i with the closed-form eigenvalues."""
    G = dual_polar_graph(ps, i, meets)
    vals = distance_eigenvalues(ps.d, ps.e, ps.q, i)
    cert = spectrum_certify(G, vals)
    last = vals[ps.d]
    return {"i": i, "eigenvalues": vals, "multiplicities": cert.multiplicities, "ok": cert.ok,
            "annihilated": cert.annihilated, "degree": int(G.degrees()[0]) if G.n else 0,
            "largest": max(vals), "smallest": min(vals), "smallest_is_last": min(vals) == last,
            "graph": G, "spectrum": cert}


# scheme

@dataclass
class Scheme:
    space: PolarSpace
    gens: np.ndarray  # point ids per generator
    relation: np.ndarray  # relation index per pair
    p: np.ndarray  # p[i, j, k]
    info: dict = field(default_factory=dict)

    @property
    def d(self) -> int:
        return self.p.shape[0] - 1

    @property
    def n(self) -> int:
        return self.relation.shape[0]

    def A(self, i: int) -> np.ndarray:
        return (self.relation == i).astype(np.int64)

    def valencies(self) -> list[int]:
        return [int(self.p[i, i, 0]) for i in range(self.d + 1)]


def scheme_from_polar(ps: PolarSpace, budget: int = 1500) -> Scheme:
    """Distance relations on generators from meet sizes, with the Bose-Mesner axioms checked."""
    t0 = time.perf_counter()
    inc = generator_incidence(ps)
    n = inc.shape[0]
    if n > budget:
        raise BudgetExceeded(f"{n} generators exceed the scheme budget {budget}")
    meets = meet_sizes(inc)
    d = ps.d
    rel = np.full((n, n), -1, dtype=np.int64)
    for i in range(d + 1):
        rel[meets == theta(d - i - 1, ps.q)] = i
    if (rel < 0).any():
        raise SchemeError("a pair of generators meets in no subspace of the expected size")
    As = [(rel == i).astype(np.int64) for i in range(d + 1)]
    p = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
    reps = [tuple(np.argwhere(rel == k)[0]) for k in range(d + 1)]
    closure = True
    for i in range(d + 1):
        for j in range(d + 1):
            prod = int_matmul(As[i], As[j])
            for k, (x, y) in enumerate(reps):
                p[i, j, k] = prod[x, y]
            rebuilt = sum(p[i, j, k] * As[k] for k in range(d + 1))
            closure &= bool((prod == rebuilt).all())
    axioms = {
        "A0_identity": bool((As[0] == np.eye(n, dtype=np.int64)).all()),
        "sum_is_J": bool((sum(As) == 1).all()),
        "symmetric": bool((rel == rel.T).all()),
        "closure": closure,
        "p_symmetric": bool((p == p.transpose(1, 0, 2)).all()),
    }
    info = {"axioms": axioms, "ok": all(axioms.values()), "wall": time.perf_counter() - t0, "meets": meets}
    return Scheme(ps, ps.level_point_ids(d), rel, p, info)


# idempotents

@dataclass
class Idempotents:
    """E_j = N[j] / den[j] with integer matrices N[j]; strata ordered as the eigenvalue formula."""
    N: list
    den: list
    theta: list  # eigenvalue of A_1 on each stratum
    P: list  # P[j][l]: eigenvalue of A_l on stratum j
    multiplicities: list
    checks: dict

    def E(self, j: int) -> np.ndarray:
        """Exact rational matrix as an object array (small cases)."""
        return np.vectorize(lambda x: Fraction(int(x), self.den[j]), otypes=[object])(self.N[j])


def minimal_idempotents(S: Scheme, verify: bool = True) -> Idempotents:
    ps = S.space
    d, n = S.d, S.n
    thetas = distance_eigenvalues(d, ps.e, ps.q, 1)
    if len(set(thetas)) != len(thetas):
        raise SchemeError("repeated eigenvalue of A_1")
    A1 = S.A(1)
    I = np.eye(n, dtype=np.int64)
    N, den = [], []
    for j, t in enumerate(thetas):
        M = I.copy()
        dd = 1
        for l, s in enumerate(thetas):
            if l != j:
                M = int_matmul(M, A1 - s * I)
                dd *= t - s
        if dd < 0:
            M, dd = -M, -dd
        g = math.gcd(int(np.gcd.reduce(np.abs(M).ravel())), dd)
        N.append(M // g)
        den.append(dd // g)
    # eigenvalue table: A_l N_j = P[j][l] N_j
    P = []
    for j in range(d + 1):
        x, y = map(int, np.argwhere(N[j] != 0)[0])
        row = []
        for l in range(d + 1):
            AN = int_matmul(S.A(l), N[j])
            val = Fraction(int(AN[x, y]), int(N[j][x, y]))
            if val.denominator != 1 or not (AN == int(val) * N[j]).all():
                raise SchemeError(f"stratum {j} is not an eigenspace of A_{l}")
            row.append(int(val))
        P.append(row)
    mult = [Fraction(int(np.trace(N[j])), den[j]) for j in range(d + 1)]
    checks = {"E0_is_J_over_n": bool((N[0] * n == den[0]).all()) if den[0] else False}
    checks["integral_multiplicities"] = all(m.denominator == 1 and m > 0 for m in mult)
    if verify:
        L = math.lcm(*den)
        total = sum(N[j] * (L // den[j]) for j in range(d + 1))
        checks["sum_is_identity"] = bool((total == L * I).all())
        orth = True
        for i in range(d + 1):
            checks_sym = bool((N[i] == N[i].T).all())
            orth &= checks_sym
            for j in range(i, d + 1):
                prod = int_matmul(N[i], N[j])
                want = N[i] * den[j] if i == j else 0
                orth &= bool((prod == want).all())
        checks["orthogonal_idempotents"] = orth
        checks["formula_eigenvalues"] = [P[j][1] for j in range(d + 1)] == thetas
    checks["ok"] = all(v for v in checks.values())
    return Idempotents(N, den, thetas, P, [int(m) for m in mult], checks)


def krein_parameters(idem: Idempotents, n: int) -> np.ndarray:
    """q^k_ij from the eigenmatrices: q^k_ij = (1/n) sum_l Q_l(i) Q_l(j) P_k(l)."""
    d = len(idem.P) - 1
    Pm = [[Fraction(x) for x in row] for row in idem.P]
    # Q = n P^{-1}, indexed Q[l][i]
    Pinv = _inverse([row[:] for row in Pm])
    Q = [[n * Pinv[l][i] for i in range(d + 1)] for l in range(d + 1)]
    out = np.empty((d + 1, d + 1, d + 1), dtype=object)
    for i in range(d + 1):
        for j in range(d + 1):
            for k in range(d + 1):
                out[i, j, k] = sum(Q[l][i] * Q[l][j] * Pm[k][l] for l in range(d + 1)) / n
    return out


def _inverse(M: list[list[Fraction]]) -> list[list[Fraction]]:
    s = len(M)
    A = [row + [Fraction(int(i == r)) for i in range(s)] for r, row in enumerate(M)]
    for c in range(s):
        piv = next(r for r in range(c, s) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for r in range(s):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [row[s:] for row in A]


# designs

def characteristic_vector(n: int, members) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[np.asarray(members, dtype=np.int64)] = 1
    return v


def dual_degree_set(idem: Idempotents, chi) -> set[int]:
    chi = np.asarray(chi, dtype=np.int64)
    return {j for j in range(1, len(idem.N)) if int_matmul(idem.N[j], chi.reshape(-1, 1)).any()}


def is_k_design(idem: Idempotents, chi, k: int) -> bool:
    return not (dual_degree_set(idem, chi) & set(range(1, k + 1)))


def is_k_antidesign(idem: Idempotents, chi, k: int) -> bool:
    return dual_degree_set(idem, chi) <= set(range(1, k + 1))


def generators_through(S: Scheme, sigma_ids) -> np.ndarray:
    """Generators containing every point of sigma (point ids)."""
    sig = np.asarray(sigma_ids, dtype=np.int64)
    inc = np.zeros((S.n, len(S.space.points)), dtype=bool)
    inc[np.repeat(np.arange(S.n), S.gens.shape[1]), S.gens.ravel()] = True
    return np.nonzero(inc[:, sig].all(axis=1))[0]


def antidesign_witness(S: Scheme, idem: Idempotents, sigma_ids, r: int) -> dict:
    """Generators through an (r-1)-space and their dual degree set, which must lie in 1..r."""
    members = generators_through(S, sigma_ids)
    chi = characteristic_vector(S.n, members)
    dds = dual_degree_set(idem, chi)
    return {"members": members, "dual_degree_set": sorted(dds), "antidesign": dds <= set(range(1, r + 1))}


def strata_order_check(S: Scheme, idem: Idempotents) -> dict:
    """Im(C_k^T) is the sum of the strata 0..k: N_j C_k^T vanishes exactly for j > k."""
    ps = S.space
    out = {}
    for k in range(1, S.d + 1):
        subs = ps.level_point_ids(k)
        inc = np.zeros((S.n, len(ps.points)), dtype=bool)
        inc[np.repeat(np.arange(S.n), S.gens.shape[1]), S.gens.ravel()] = True
        Ck_T = np.stack([inc[:, s].all(axis=1) for s in subs], axis=1).astype(np.int64)
        zero = [not int_matmul(idem.N[j], Ck_T).any() for j in range(S.d + 1)]
        out[k] = zero == [j > k for j in range(S.d + 1)]
    return out


def design_regular_agreement(S: Scheme, idem: Idempotents, members, k: int) -> dict:
    """Regularity by direct incidence count against the k-design test."""
    cert = verify_regular_system(S.space, S.gens[np.asarray(members, dtype=np.int64)], k)
    design = is_k_design(idem, characteristic_vector(S.n, members), k)
    return {"regular": cert.ok, "m": cert["m"] if cert.data else None, "design": design,
            "agree": cert.ok == design}


def orthogonal_intersection(S1, S2, n: int) -> dict:
    a, b = set(map(int, S1)), set(map(int, S2))
    pred = Fraction(len(a) * len(b), n)
    return {"intersection": len(a & b), "predicted": pred, "equal": pred == len(a & b)}


# chain liftings and switching

def extend_form(form: Form) -> Form:
    """Add one coordinate with a diagonal 1 (quadratic or Hermitian forms)."""
    N = form.dim
    G = np.zeros((N + 1, N + 1), dtype=np.int64)
    G[:N, :N] = form.gram
    G[N, N] = 1
    return Form(form.F, form.kind, G)


def chain_lift(ps: PolarSpace, members: np.ndarray, direction: str = "up", k: int = 1) -> dict:
    """Lift a regular system to the next polar space up, or restrict it to a hyperplane section.

    up:   ps sits in the hyperplane X_n = 0 of a space one dimension higher; the lift
          is every generator there whose hyperplane section is a member.
    down: members inside the least hyperplane whose section has the same rank and
          the smaller parameter e.
    """
    t0 = time.perf_counter()
    members = np.asarray(members, dtype=np.int64)
    if direction == "up":
        if ps.family not in ("Q", "Q-", "H"):
            raise SchemeError(f"no upward chain from {ps.family}")
        big = PolarSpace(extend_form(ps.form))
        F = big.F
        gens = big.level_point_ids(big.d)
        # points of the small space, padded, looked up in the big space
        small_pts = np.hstack([ps.points, np.zeros((len(ps.points), 1), dtype=np.int64)])
        to_big = big.index.lookup(small_pts)
        keys = {tuple(sorted(to_big[row].tolist())) for row in members}
        in_hyper = np.zeros(len(big.points), dtype=bool)
        in_hyper[to_big] = True
        lifted = []
        for g, row in enumerate(gens):
            sec = tuple(sorted(row[in_hyper[row]].tolist()))
            if sec in keys:
                lifted.append(g)
        lifted_rows = gens[lifted]
        cert = verify_regular_system(big, lifted_rows, k)
        return {"space": big, "members": lifted_rows, "certificate": cert, "wall": time.perf_counter() - t0}
    if direction == "down":
        if k < 2:
            raise SchemeError("restriction to a hyperplane section needs k >= 2")
        F = ps.F
        want = {"Q": "Q+", "Q-": "Q", "H": "H"}.get(ps.family)
        if want is None:
            raise SchemeError(f"no downward chain from {ps.family}")
        for h in enumerate_point_array(F, ps.n):
            basis = linalg.nullspace(F, h.reshape(1, -1), ps.n + 1)
            H = Subspace(F, ps.n, basis)
            sec = ps.section(H)
            if sec["vertex_projdim"] != -1 or not sec["base"].startswith(want + "("):
                continue
            sub = ps.restricted_space(H, want)
            if sub.d != ps.d:
                continue
            inside = linalg.matmul(F, ps.points, h.reshape(-1, 1))[:, 0] == 0
            keep = members[inside[members].all(axis=1)]
            # coordinates of the kept generators inside the hyperplane basis
            coords = _coords_in_basis(F, ps.points, basis)
            rows = []
            for row in keep:
                rows.append(np.sort(sub.index.lookup(coords[row])))
            rows = np.array(rows, dtype=np.int64).reshape(-1, theta(sub.d - 1, sub.q))
            cert = verify_regular_system(sub, rows, k - 1)
            return {"space": sub, "hyperplane": h.tolist(), "members": rows, "certificate": cert,
                    "wall": time.perf_counter() - t0}
        raise SchemeError("no suitable hyperplane section")
    raise SchemeError("direction must be 'up' or 'down'")


def _coords_in_basis(F, pts: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Coordinates of points (assumed inside span(basis)) with respect to basis; -1 rows elsewhere."""
    out = np.full((len(pts), basis.shape[0]), -1, dtype=np.int64)
    for i, v in enumerate(pts):
        c = linalg.solve_combination(F, basis, v)
        if c is not None:
            out[i] = c
    return out


def latin_greek(ps: PolarSpace) -> tuple[np.ndarray, np.ndarray]:
    """The two generator classes of a hyperbolic quadric."""
    if ps.family != "Q+":
        raise SchemeError("generator classes need a hyperbolic quadric")
    cls = generator_classes(ps)
    gens = ps.level_point_ids(ps.d)
    return gens[cls == 0], gens[cls == 1]


def hyperbolic_switch(ps: PolarSpace, sigma_ids, which: int = 0) -> np.ndarray:
    """(M_i minus Z_i) together with Z_j, where Z are the generators through sigma."""
    M = latin_greek(ps)
    sig = np.asarray(sigma_ids, dtype=np.int64)
    Mi, Mj = M[which], M[1 - which]
    zi = np.isin(Mi, sig).sum(axis=1) == len(sig)
    zj = np.isin(Mj, sig).sum(axis=1) == len(sig)
    return np.vstack([Mi[~zi], Mj[zj]])
