"""Dense graphs from polar spaces, strong regularity, exact spectra and clique statistics.

Adjacency is a boolean numpy matrix.  Integer products of 0/1 matrices go through
float64 BLAS, which is exact while every entry stays below 2**53; the helpers
below assert that bound before relying on it.
"""
from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .certificates import make_certificate
from .gf import field_of_order
from .polar import Form, PolarSpace
from .projspace import BudgetExceeded, enumerate_point_array, theta

_EXACT = 2**53


class GraphError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    adj: np.ndarray
    labels: list = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        A = np.asarray(self.adj, dtype=bool)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise GraphError("adjacency must be square")
        if (A != A.T).any():
            raise GraphError("adjacency must be symmetric")
        if A.diagonal().any():
            raise GraphError("loops are not allowed")
        object.__setattr__(self, "adj", A)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def neighbours(self, u: int) -> np.ndarray:
        return np.nonzero(self.adj[u])[0]

    def complement(self) -> "Graph":
        C = ~self.adj
        np.fill_diagonal(C, False)
        return Graph(C, self.labels, f"complement of {self.name}" if self.name else "")

    def induced(self, vertices) -> "Graph":
        v = np.asarray(vertices, dtype=np.int64)
        labels = [self.labels[i] for i in v] if self.labels else []
        return Graph(self.adj[np.ix_(v, v)], labels)

    def edges(self) -> np.ndarray:
        return np.argwhere(np.triu(self.adj, 1))

    def same_edges(self, other: "Graph") -> bool:
        return self.n == other.n and bool((self.adj == other.adj).all())

    def components(self) -> list[list[int]]:
        seen = np.zeros(self.n, dtype=bool)
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp, stack = [], [s]
            seen[s] = True
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self.neighbours(u):
                    if not seen[w]:
                        seen[w] = True
                        stack.append(int(w))
            out.append(sorted(comp))
        return out


def common_neighbours(A: np.ndarray) -> np.ndarray:
    """Integer matrix A @ A for a 0/1 matrix, computed in float64 and checked for exactness."""
    n = A.shape[0]
    if n >= _EXACT:
        raise BudgetExceeded("matrix too large for exact float products")
    M = A.astype(np.float64)
    return (M @ M).astype(np.int64)


# strong regularity

@dataclass(frozen=True)
class SrgParams:
    v: int
    k: int
    lam: int
    mu: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.lam, self.mu)

    def complement(self) -> "SrgParams":
        v, k, l, m = self.as_tuple()
        return SrgParams(v, v - k - 1, v - 2 * k + m - 2, v - 2 * k + l)

    def identity_holds(self) -> bool:
        v, k, l, m = self.as_tuple()
        return k * (k - l - 1) == m * (v - k - 1)

    def eigenvalues(self) -> tuple[int, int] | None:
        """Restricted eigenvalues r > s when they are integers."""
        v, k, l, m = self.as_tuple()
        disc = (l - m) ** 2 + 4 * (k - m)
        root = math.isqrt(disc)
        if root * root != disc or (l - m + root) % 2:
            return None
        return ((l - m + root) // 2, (l - m - root) // 2)

    def multiplicities(self) -> tuple[Fraction, Fraction]:
        v, k, l, m = self.as_tuple()
        disc = (l - m) ** 2 + 4 * (k - m)
        root = math.isqrt(disc)
        if root * root != disc:
            raise GraphError("irrational eigenvalues")
        r, s = Fraction(l - m + root, 2), Fraction(l - m - root, 2)
        f = Fraction(-(v - 1) * s - k, 1) / (r - s)
        g = Fraction((v - 1) * r + k, 1) / (r - s)
        return f, g

    def feasible(self) -> dict:
        out = {"identity": self.identity_holds()}
        try:
            f, g = self.multiplicities()
            out["multiplicities"] = [str(f), str(g)]
            out["integral_multiplicities"] = f.denominator == 1 and g.denominator == 1 and f >= 0 and g >= 0
        except GraphError:
            out["multiplicities"] = None
            out["integral_multiplicities"] = False
        out["feasible"] = out["identity"] and out["integral_multiplicities"]
        return out


@dataclass
class SrgResult:
    params: SrgParams | None
    regular: bool
    degenerate: str | None = None
    counterexample: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.params is not None


def srg_check(G: Graph) -> SrgResult:
    """Brute force over all pairs via the common-neighbour matrix."""
    if G.n < 2:
        raise GraphError("need at least two vertices")
    deg = G.degrees()
    if (deg != deg[0]).any():
        u = int(np.nonzero(deg != deg[0])[0][0])
        return SrgResult(None, False, counterexample=("degree", 0, u))
    k = int(deg[0])
    C = common_neighbours(G.adj)
    iu = np.triu_indices(G.n, 1)
    adj_pairs = G.adj[iu]
    vals_adj = C[iu][adj_pairs]
    vals_non = C[iu][~adj_pairs]
    if len(vals_non) == 0 or len(vals_adj) == 0:
        kind = "complete" if len(vals_non) == 0 else "empty"
        return SrgResult(None, True, degenerate=f"trivial SRG ({kind} graph)")
    lam, mu = int(vals_adj[0]), int(vals_non[0])
    for vals, want, adjacent in ((vals_adj, lam, True), (vals_non, mu, False)):
        bad = np.nonzero(vals != want)[0]
        if len(bad):
            pairs = np.stack(iu, axis=1)[adj_pairs if adjacent else ~adj_pairs]
            i, j = map(int, pairs[bad[0]])
            return SrgResult(None, True, counterexample=("lambda" if adjacent else "mu", i, j))
    return SrgResult(SrgParams(G.n, k, lam, mu), True)


def srg_certificate(G: Graph, expected: tuple | None = None, claim: str = "srg") -> "Certificate":
    t0 = time.perf_counter()
    res = srg_check(G)
    data: dict = {"n": G.n}
    witness: dict = {}
    ok = res.ok
    if res.ok:
        p = res.params
        data["params"] = list(p.as_tuple())
        data["feasibility"] = p.feasible()
        comp = srg_check(G.complement())
        data["complement_params"] = list(comp.params.as_tuple()) if comp.ok else None
        data["complement_law"] = comp.ok and comp.params == p.complement()
        data["eigenvalues"] = p.eigenvalues()
        ok = data["complement_law"] and data["feasibility"]["identity"]
        if expected is not None:
            data["expected"] = list(expected)
            ok = ok and tuple(expected) == p.as_tuple()
    else:
        witness["counterexample"] = res.counterexample
        data["degenerate"] = res.degenerate
    return make_certificate(claim, {"graph": G.name, "n": G.n}, ok, witness=witness, data=data, started=t0)


# exact spectra

def _primes_below(limit: int, count: int) -> list[int]:
    out, c = [], limit
    while len(out) < count:
        c -= 1
        if c < 2:
            raise GraphError("ran out of primes")
        if all(c % p for p in range(2, math.isqrt(c) + 1)):
            out.append(c)
    return out


def _modmul(X: np.ndarray, Y: np.ndarray, p: int) -> np.ndarray:
    """X @ Y mod p for entries in [0, p), exact through float64 when n p^2 < 2^53."""
    return np.mod((X.astype(np.float64) @ Y.astype(np.float64)), p).astype(np.int64)


@dataclass
class SpectrumCertificate:
    eigenvalues: list[int]
    multiplicities: list[int]
    annihilated: bool
    primes: list[int]
    trace_checks: dict

    @property
    def ok(self) -> bool:
        return self.annihilated and self.trace_checks.get("ok", False)

    def smallest(self) -> int:
        return min(e for e, m in zip(self.eigenvalues, self.multiplicities) if m > 0)

    def largest(self) -> int:
        return max(e for e, m in zip(self.eigenvalues, self.multiplicities) if m > 0)


def spectrum_certify(G: Graph, eigenvalues) -> SpectrumCertificate:
    """Certify that the claimed integers carry the whole spectrum of a regular graph.

    The product of (A - theta I) over the claimed values is shown to vanish modulo
    enough primes to exceed the entry bound, and multiplicities come from the
    exact trace system tr(A^j) = sum m_i theta_i^j.
    """
    claims = []
    for t in eigenvalues:
        if isinstance(t, Fraction) and t.denominator != 1:
            raise GraphError("only integral eigenvalues are certified")
        if int(t) != t:
            raise GraphError("only integral eigenvalues are certified")
        if int(t) not in claims:
            claims.append(int(t))
    n = G.n
    A = G.adj.astype(np.int64)
    rowmax = int(G.degrees().max()) if n else 0
    bound = 1
    for t in claims:
        bound *= rowmax + abs(t)
    pmax = int(math.isqrt(_EXACT // max(n, 1))) - 1
    primes, prod = [], 1
    cand = _primes_below(min(pmax, 2**31), 64)
    for p in cand:
        primes.append(p)
        prod *= p
        if prod > 2 * bound:
            break
    annihilated = True
    for p in primes:
        M = np.eye(n, dtype=np.int64)
        for t in claims:
            B = np.mod(A - t * np.eye(n, dtype=np.int64), p)
            M = _modmul(M, B, p)
        if M.any():
            annihilated = False
            break
    # traces of powers modulo the same primes, lifted by the Chinese remainder theorem
    s = len(claims)
    traces = []
    tr_bound = n * max(rowmax, 1) ** max(s - 1, 1)
    tprimes, tprod = [], 1
    for p in cand:
        tprimes.append(p)
        tprod *= p
        if tprod > 2 * tr_bound:
            break
    per_prime = []
    for p in tprimes:
        vals, P = [], np.eye(n, dtype=np.int64)
        for j in range(s):
            vals.append(int(np.trace(P)) % p)
            P = _modmul(P, np.mod(A, p), p)
        per_prime.append(vals)
    for j in range(s):
        x = 0
        for p, vals in zip(tprimes, per_prime):
            m = tprod // p
            x += vals[j] * m * pow(m, -1, p)
        x %= tprod
        if x > tprod // 2:
            x -= tprod
        traces.append(x)
    mult = _solve_vandermonde(claims, traces)
    integral = all(m.denominator == 1 and m >= 0 for m in mult)
    checks = {
        "sum_multiplicities": sum(mult) == n,
        "trace_zero": sum(m * t for m, t in zip(mult, claims)) == 0,
        "integral": integral,
    }
    if n:
        deg = int(G.degrees()[0])
        checks["trace_square"] = sum(m * t * t for m, t in zip(mult, claims)) == n * deg if (G.degrees() == deg).all() else None
    checks["ok"] = all(v for v in checks.values() if v is not None)
    return SpectrumCertificate(claims, [int(m) if m.denominator == 1 else m for m in mult],
                               annihilated, primes, checks)


def _solve_vandermonde(nodes: list[int], rhs: list[int]) -> list[Fraction]:
    s = len(nodes)
    M = [[Fraction(t) ** j for t in nodes] + [Fraction(rhs[j])] for j in range(s)]
    for c in range(s):
        piv = next(r for r in range(c, s) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        for r in range(s):
            if r != c and M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [M[i][s] / M[i][i] for i in range(s)]


def hoffman_bound(G: Graph, spectrum: SpectrumCertificate) -> Fraction | None:
    """Ratio bound -v lambda_min / (k - lambda_min); None for the edgeless graph."""
    if not spectrum.ok:
        raise GraphError("spectrum not certified")
    k = spectrum.largest()
    s = spectrum.smallest()
    if k == 0:
        return None
    return Fraction(-G.n * s, k - s)


# cliques and cocliques with bitsets

def _bitsets(A: np.ndarray) -> list[int]:
    out = []
    for row in A:
        bits = 0
        for j in np.nonzero(row)[0]:
            bits |= 1 << int(j)
        out.append(bits)
    return out


def _members(bits: int):
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def max_clique(A: np.ndarray, target: int | None = None, budget_nodes: int | None = None) -> dict:
    """Branch and bound with a greedy colouring bound; stops early once target is reached."""
    nb = _bitsets(A)
    n = len(nb)
    best: list[int] = []
    nodes = 0
    exhausted = False

    class _Stop(Exception):
        pass

    def colour_order(P: int):
        order, bounds = [], []
        colour = 0
        U = P
        while U:
            colour += 1
            Q = U
            while Q:
                v = (Q & -Q).bit_length() - 1
                Q &= ~nb[v] & ~(1 << v)
                U &= ~(1 << v)
                order.append(v)
                bounds.append(colour)
        return order, bounds

    def expand(R: list[int], P: int):
        nonlocal best, nodes
        nodes += 1
        if budget_nodes is not None and nodes > budget_nodes:
            raise _Stop
        order, bounds = colour_order(P)
        for i in range(len(order) - 1, -1, -1):
            if len(R) + bounds[i] <= len(best):
                return
            v = order[i]
            R2 = R + [v]
            P2 = P & nb[v]
            if P2:
                expand(R2, P2)
            elif len(R2) > len(best):
                best = R2
                if target is not None and len(best) >= target:
                    raise _Stop
            P &= ~(1 << v)

    try:
        expand([], (1 << n) - 1)
        exhausted = True
    except _Stop:
        exhausted = False
    return {"clique": sorted(best), "size": len(best), "nodes": nodes, "exhaustive": exhausted}


def coclique_search(G: Graph, target: int, budget_nodes: int | None = None) -> dict:
    """Find a coclique of size target or prove none exists."""
    C = ~G.adj
    np.fill_diagonal(C, False)
    res = max_clique(C, target=target, budget_nodes=budget_nodes)
    found = res["size"] >= target
    status = "found" if found else ("exhausted" if res["exhaustive"] else "budget_exhausted")
    return {"status": status, "coclique": res["clique"] if found else None,
            "max_size_found": res["size"], "nodes": res["nodes"]}


def maximal_cliques(G: Graph, budget: int = 5_000_000):
    """Bron-Kerbosch with pivot of highest degree into the candidate set, ties to the least index."""
    nb = _bitsets(G.adj)
    count = 0
    stack = [(0, (1 << G.n) - 1, 0)]
    # iterative version to avoid deep recursion
    while stack:
        R, P, X = stack.pop()
        if not P and not X:
            count += 1
            if count > budget:
                raise BudgetExceeded("maximal-clique budget exceeded")
            yield sorted(_members(R))
            continue
        best_u, best_d = -1, -1
        for u in _members(P | X):
            d = bin(P & nb[u]).count("1")
            if d > best_d:
                best_u, best_d = u, d
        ext = []
        for v in _members(P & ~nb[best_u]):
            ext.append((R | (1 << v), P & nb[v], X & nb[v]))
            P &= ~(1 << v)
            X |= 1 << v
        stack.extend(reversed(ext))


def clique_census(G: Graph, budget: int = 5_000_000, representatives: int = 1, classify=None) -> dict:
    """Histogram of maximal cliques by size, and by (size, classify(clique)) when given."""
    hist: Counter = Counter()
    classes: Counter = Counter()
    reps: dict = {}
    for c in maximal_cliques(G, budget):
        hist[len(c)] += 1
        key = len(c) if classify is None else (len(c), classify(c))
        classes[key] += 1
        if len(reps.setdefault(key, [])) < representatives:
            reps[key].append(c)
    out = {"histogram": dict(sorted(hist.items())), "sizes": sorted(hist), "representatives": reps}
    if classify is not None:
        out["classes"] = dict(sorted(classes.items()))
    return out


def collinearity_profile(F, pts: np.ndarray) -> tuple[int, ...]:
    """Sizes (>= 3) of the collinear subsets cut out by lines through pairs of plane points."""
    P = np.asarray(pts, dtype=np.int64)
    seen = set()
    sizes = []
    for i, j in combinations(range(len(P)), 2):
        if (i, j) in seen:
            continue
        # points of P on the line through P[i], P[j]: the 3x3 determinant vanishes
        a, b = P[i], P[j]
        cross = np.array([
            F.sub(F.mul(a[1], b[2]), F.mul(a[2], b[1])),
            F.sub(F.mul(a[2], b[0]), F.mul(a[0], b[2])),
            F.sub(F.mul(a[0], b[1]), F.mul(a[1], b[0])),
        ])
        on = F.vsum(F.vmul(P, cross[None, :]), axis=1) == 0
        members = np.nonzero(on)[0].tolist()
        for x, y in combinations(members, 2):
            seen.add((x, y))
        if len(members) >= 3:
            sizes.append(len(members))
    return tuple(sorted(sizes, reverse=True))


def unital_clique_census(G: Graph, q: int, budget: int = 5_000_000) -> dict:
    """Clique census of a unital graph with cliques classed by their collinear subsets."""
    K = field_of_order(q * q)
    pts = np.array(G.labels, dtype=np.int64)
    return clique_census(G, budget, classify=lambda c: collinearity_profile(K, pts[c]))


# automorphisms of small graphs

def _refine(A: np.ndarray, colours: list[int]) -> list[int]:
    """Colour refinement to a stable partition; colours are canonical ranks."""
    n = len(colours)
    cur = list(colours)
    while True:
        sig = [(cur[v], tuple(sorted(cur[w] for w in np.nonzero(A[v])[0]))) for v in range(n)]
        keys = sorted(set(sig))
        rank = {s: i for i, s in enumerate(keys)}
        new = [rank[s] for s in sig]
        if len(set(new)) == len(set(cur)):
            return new
        cur = new


def _joint_refine(A: np.ndarray, c1: list[int], c2: list[int]):
    """Refine two colourings of the same graph with shared colour names."""
    n = len(c1)
    a, b = list(c1), list(c2)
    while True:
        s1 = [(a[v], tuple(sorted(a[w] for w in np.nonzero(A[v])[0]))) for v in range(n)]
        s2 = [(b[v], tuple(sorted(b[w] for w in np.nonzero(A[v])[0]))) for v in range(n)]
        if Counter(s1) != Counter(s2):
            return None, None
        keys = sorted(set(s1))
        rank = {s: i for i, s in enumerate(keys)}
        na, nb_ = [rank[s] for s in s1], [rank[s] for s in s2]
        if len(keys) == len(set(a)):
            return na, nb_
        a, b = na, nb_


def _extend(A: np.ndarray, src: list[int], dst: list[int]) -> bool:
    """Is there an automorphism mapping src[i] to dst[i] for every i?"""
    n = A.shape[0]
    c1, c2 = [0] * n, [0] * n
    for i, (s, d) in enumerate(zip(src, dst)):
        c1[s] = c2[d] = i + 1
    a, b = _joint_refine(A, c1, c2)
    if a is None:
        return False
    cells = Counter(a)
    if all(v == 1 for v in cells.values()):
        perm = [0] * n
        where = {col: v for v, col in enumerate(b)}
        for v in range(n):
            perm[v] = where[a[v]]
        P = np.array(perm)
        return bool((A[np.ix_(P, P)] == A).all())
    col = min((c for c, m in cells.items() if m > 1), key=lambda c: (cells[c], c))
    x = a.index(col)
    for y in [v for v in range(n) if b[v] == col]:
        if _extend(A, src + [x], dst + [y]):
            return True
    return False


def automorphism_count(G: Graph, limit: int = 40) -> int:
    """Order of Aut(G) via a stabiliser chain: |G_i| = |orbit of v_i in G_i| * |G_{i+1}|."""
    if G.n > limit:
        raise BudgetExceeded(f"automorphism counting is limited to {limit} vertices")
    A = G.adj
    n = G.n
    order = 1
    base: list[int] = []
    while True:
        c = [0] * n
        for i, v in enumerate(base):
            c[v] = i + 1
        col = _refine(A, c)
        cells = Counter(col)
        nontrivial = [cc for cc, m in cells.items() if m > 1]
        if not nontrivial:
            return order
        target = min(nontrivial, key=lambda cc: (cells[cc], cc))
        v = col.index(target)
        orbit = 1
        for w in range(n):
            if w != v and col[w] == target and _extend(A, base + [v], base + [w]):
                orbit += 1
        order *= orbit
        base.append(v)


# triples

def triple_census(G: Graph, budget: int = 500) -> Counter:
    """|N(u) & N(v) & N(w)| over all pairwise adjacent triples u < v < w."""
    if G.n > budget:
        raise BudgetExceeded(f"full triple census limited to {budget} vertices")
    A = G.adj
    Af = A.astype(np.float64)
    out: Counter = Counter()
    for u in range(G.n):
        Nu = A[u]
        for v in np.nonzero(Nu)[0]:
            if v <= u:
                continue
            C = Nu & A[v]
            ws = np.nonzero(C)[0]
            ws = ws[ws > v]
            if len(ws) == 0:
                continue
            cnt = (Af[ws] @ C.astype(np.float64)).astype(np.int64)
            out.update(cnt.tolist())
    return out


def triple_value(G: Graph, u: int, v: int, w: int) -> int:
    return int((G.adj[u] & G.adj[v] & G.adj[w]).sum())


# graph families

def collinearity_graph(ps: PolarSpace) -> Graph:
    A = ps.orth.copy()
    np.fill_diagonal(A, False)
    return Graph(A, [p.tolist() for p in ps.points], f"collinearity of {ps.label}")


def hermitian_form(n: int, q: int) -> Form:
    """x_0 y_0^q + ... + x_{n-1} y_{n-1}^q on GF(q^2)^n."""
    K = field_of_order(q * q)
    return Form(K, "hermitian", np.eye(n, dtype=np.int64))


def nu_parameters(n: int, q: int) -> tuple[int, int, int, int]:
    """Parameters of NU(n, q^2), the tangent graph in PG(n-1, q^2)."""
    m = n - 1
    eps = (-1) ** (m + 1)
    v = q**m * (q ** (m + 1) - eps) // (q + 1)
    k = (q**m + eps) * (q ** (m - 1) - eps)
    lam = q ** (2 * m - 3) * (q + 1) - eps * q ** (m - 1) * (q - 1) - 2
    mu = q ** (m - 2) * (q + 1) * (q ** (m - 1) - eps)
    return v, k, lam, mu


def tangent_adjacency(form: Form, pts: np.ndarray) -> np.ndarray:
    """Two non-isotropic points are adjacent when their line is tangent to the variety."""
    K = form.F
    q = int(round(math.sqrt(K.q)))
    H = form.beta(pts, pts)
    d = np.diag(H)
    lhs = K.vmul(d[:, None], d[None, :])
    rhs = K.vpow(H, q + 1)
    A = lhs == rhs
    np.fill_diagonal(A, False)
    return A


def nu_graph(n: int, q: int, budget: int = 12_000) -> Graph:
    form = hermitian_form(n, q)
    K = form.F
    if theta(n - 1, K.q) > 4 * budget:
        raise BudgetExceeded("NU graph too large")
    allp = enumerate_point_array(K, n - 1)
    ext = allp[~form.is_isotropic(allp)]
    if len(ext) > budget:
        raise BudgetExceeded(f"NU({n},{q * q}) has {len(ext)} vertices")
    A = tangent_adjacency(form, ext)
    return Graph(A, [p.tolist() for p in ext], f"NU({n},{q * q})")


def generator_incidence(ps: PolarSpace) -> np.ndarray:
    gens = ps.level_point_ids(ps.d)
    inc = np.zeros((len(gens), len(ps.points)), dtype=bool)
    inc[np.repeat(np.arange(len(gens)), gens.shape[1]), gens.ravel()] = True
    return inc


def meet_sizes(inc: np.ndarray) -> np.ndarray:
    M = inc.astype(np.float64)
    return (M @ M.T).astype(np.int64)


def dual_polar_graph(ps: PolarSpace, i: int, meets: np.ndarray | None = None) -> Graph:
    """D^i: generators adjacent when they meet in a (d-i-1)-space."""
    if not 0 <= i <= ps.d:
        raise GraphError(f"i must lie in 0..{ps.d}")
    if meets is None:
        meets = meet_sizes(generator_incidence(ps))
    A = meets == theta(ps.d - i - 1, ps.q)
    if i == 0:
        A = np.zeros_like(A)
    else:
        np.fill_diagonal(A, False)
    return Graph(A, [], f"D^{i} of {ps.label}")


def hemisystem_line_graph(ps: PolarSpace, system_ids) -> Graph:
    """Generators not in the system, adjacent when they share a point."""
    inc = generator_incidence(ps)
    keep = np.ones(len(inc), dtype=bool)
    keep[np.asarray(system_ids, dtype=np.int64)] = False
    sub = inc[keep]
    A = meet_sizes(sub) > 0
    np.fill_diagonal(A, False)
    return Graph(A, np.nonzero(keep)[0].tolist(), f"line graph of a hemisystem of {ps.label}")


def linear_representation_graph(F, points: np.ndarray, budget: int = 10**6) -> Graph:
    """Affine points of AG(n+1,q) adjacent when their difference is a direction in the set."""
    P = np.asarray(points, dtype=np.int64)
    dim = P.shape[1]
    v = F.q**dim
    if v > budget:
        raise BudgetExceeded(f"{v} vertices")
    if v > 20_000:
        raise BudgetExceeded("dense adjacency limited to 20000 vertices")
    pw = F.q ** np.arange(dim - 1, -1, -1)
    dirs = set()
    for c in range(1, F.q):
        for row in F.vmul(c, P):
            dirs.add(int(row @ pw))
    vecs = np.array(np.unravel_index(np.arange(v), (F.q,) * dim)).T
    A = np.zeros((v, v), dtype=bool)
    code = np.zeros(v, dtype=bool)
    code[list(dirs)] = True
    for x in range(v):
        diff = F.vsub(vecs, vecs[x][None, :])
        A[x] = code[diff @ pw]
    np.fill_diagonal(A, False)
    return Graph(A, [], f"linear representation graph on {len(P)} directions")


def hemisystem_line_graph_params(q: int, m: int) -> tuple[int, int, int, int]:
    return ((q**3 + 1) * (q + 1 - m), (q * q + 1) * (q - m), q - 1 - m, q * q + 1 - m * (q + 1))


def linear_representation_params(q: int) -> tuple[int, int, int, int]:
    """Parameters of the graph on a (q+1)/2-ovoid of Q-(5,q), from the two code weights."""
    n = (q**3 + 1) * (q + 1) // 2
    k = (q - 1) * n
    r = k - q * (q * q * (q * q - 1) // 2)
    s = k - q * (q * q * (q * q + 1) // 2)
    return (q**6, k, k + r + s + r * s, k + r * s)


# Brouwer-Wilbrink fan of H(3,q^2)

def hermitian_fan(q: int) -> dict:
    """Partition of the points of H(3,q^2) into q^2+1 ovoids."""
    ps = PolarSpace(hermitian_form(4, q), "H")
    K = ps.F
    allp = enumerate_point_array(K, 3)
    P = allp[~ps.form.is_isotropic(allp)][0]
    Pperp = ps.form.beta(ps.points, P)[:, 0] == 0
    X_id = int(np.nonzero(Pperp)[0][0])
    X = ps.points[X_id]
    # tangent line at X inside P^perp: X^perp meet P^perp
    cand = allp[(ps.form.beta(allp, X)[:, 0] == 0) & (ps.form.beta(allp, P)[:, 0] == 0)]
    t = [y for y in cand if not (y == X).all()]
    fan = {tuple(X.tolist()): np.nonzero(Pperp)[0]}
    for Y in t:
        Yperp = ps.form.beta(ps.points, Y)[:, 0] == 0
        members = Yperp & ~Pperp
        scal = np.arange(K.q)
        line = np.vstack([K.vadd(P[None, :], K.vmul(scal[:, None], Y[None, :])), Y[None, :]])
        line_ids = ps.index.lookup(line)
        members[line_ids[line_ids >= 0]] = True
        fan[tuple(Y.tolist())] = np.nonzero(members)[0]
    return {"space": ps, "P": P.tolist(), "ovoids": list(fan.values()), "labels": list(fan)}


def verify_fan(ps: PolarSpace, ovoids) -> "Certificate":
    t0 = time.perf_counter()
    cover = np.zeros(len(ps.points), dtype=np.int64)
    for o in ovoids:
        cover[np.asarray(o)] += 1
    gens = ps.level_point_ids(ps.d)
    per_gen = []
    for o in ovoids:
        mem = np.zeros(len(ps.points), dtype=bool)
        mem[np.asarray(o)] = True
        per_gen.append(set(mem[gens].sum(axis=1).tolist()))
    ok = bool((cover == 1).all()) and all(s == {1} for s in per_gen)
    data = {"ovoids": len(ovoids), "partition": bool((cover == 1).all()),
            "meets_per_generator": [sorted(s) for s in per_gen]}
    return make_certificate("hermitian-fan", {"space": ps.label}, ok, data=data, started=t0)


# export

def to_bitrows(G: Graph) -> str:
    """Header n, then the lower triangle one row per line as hex (row i holds columns 0..i-1)."""
    lines = [str(G.n)]
    for i in range(G.n):
        bits = 0
        for j in np.nonzero(G.adj[i, :i])[0]:
            bits |= 1 << int(j)
        lines.append(format(bits, "x"))
    return "\n".join(lines) + "\n"


def from_bitrows(text: str) -> Graph:
    rows = text.split()
    n = int(rows[0])
    A = np.zeros((n, n), dtype=bool)
    for i in range(n):
        bits = int(rows[1 + i], 16)
        for j in _members(bits):
            A[i, j] = A[j, i] = True
    return Graph(A)


def to_edge_list(G: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in G.edges())


def from_edge_list(text: str, n: int) -> Graph:
    A = np.zeros((n, n), dtype=bool)
    for line in text.splitlines():
        if line.strip():
            u, v = map(int, line.split())
            A[u, v] = A[v, u] = True
    return Graph(A)


def unital_graph(U) -> Graph:
    """Points off an embedded unital, adjacent when their line is tangent to it."""
    from .constructions import tangent_graph_data

    ext, adj, _ = tangent_graph_data(U)
    return Graph(adj, [p.tolist() for p in ext], f"unital graph ({U.kind}, q={U.q})")
