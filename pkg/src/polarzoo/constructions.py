"""Partial ovoids, regular systems, tangent-sets and unitals, with their verifiers.

Each generator returns plain point or line data.  The ``verify_*`` functions only
use the polar-space substrate and never call back into the generators.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from . import linalg
from .certificates import make_certificate
from .gf import GF, field_of_order
from .polar import Form, FormError, PolarSpace, polar_space, sqrt_order
from .projspace import (
    BudgetExceeded,
    PointIndex,
    ProjectiveSpace,
    Subspace,
    enumerate_point_array,
    enumerate_subspace_list,
    span,
    theta,
)


class ConstructionError(ValueError):
    pass


@dataclass
class PartialOvoid:
    space: PolarSpace
    points: np.ndarray  # coordinate rows
    claimed_maximal: bool = False
    info: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    def ids(self) -> np.ndarray:
        return self.space.index.lookup(self.points)


@dataclass
class RegularSystem:
    space: PolarSpace
    generators: np.ndarray  # rows of point ids (one row per generator)
    k: int
    m: int
    info: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.generators)


# verifiers

def verify_partial_ovoid(ps: PolarSpace, points, *, check_maximal: bool = False) -> "Certificate":
    """Check that no two points are collinear in ps; optionally check maximality."""
    t0 = time.perf_counter()
    P = linalg.normalize_rows(ps.F, np.asarray(points, dtype=np.int64).reshape(-1, ps.n + 1))
    data, witness = {"size": len(P)}, {}
    iso = ps.form.is_isotropic(P)
    if not iso.all():
        witness["non_isotropic"] = int(np.nonzero(~iso)[0][0])
        return make_certificate("partial-ovoid", {"space": ps.label}, False, witness=witness, data=data, started=t0)
    ids = ps.index.lookup(P)
    if len(np.unique(ids)) != len(ids):
        witness["repeated_point"] = True
        return make_certificate("partial-ovoid", {"space": ps.label}, False, witness=witness, data=data, started=t0)
    # route 1: pairwise orthogonality
    B = ps.form.beta(P, P) == 0
    np.fill_diagonal(B, False)
    pairwise_ok = not B.any()
    if not pairwise_ok:
        i, j = map(int, np.argwhere(B)[0])
        witness["collinear_pair"] = [i, j]
    # route 2: walk the totally isotropic lines through each member
    member = np.zeros(len(ps.points), dtype=bool)
    member[ids] = True
    lines_checked = 0
    lines_ok = True
    for pid in ids:
        line_pts = _lines_through(ps, int(pid))
        lines_checked += len(line_pts)
        if (member[line_pts].sum(axis=1) > 1).any():
            lines_ok = False
            break
    data.update(pairwise_ok=pairwise_ok, lines_ok=lines_ok)
    ok = pairwise_ok and lines_ok
    if check_maximal and ok:
        ext = extension_points(ps, P)
        data["maximal"] = len(ext) == 0
        if len(ext):
            witness["extension_point"] = ps.points[ext[0]].tolist()
        ok = ok and data["maximal"]
    return make_certificate(
        "partial-ovoid", {"space": ps.label, "maximal_claim": check_maximal}, ok,
        witness=witness, counters={"lines_checked": lines_checked}, data=data, started=t0,
    )


def _lines_through(ps: PolarSpace, pid: int) -> np.ndarray:
    """Point ids of the totally isotropic lines through a point, one row per line."""
    P = ps.points[pid]
    coll = np.nonzero(ps.form.beta(P, ps.points)[0] == 0)[0]
    coll = coll[coll != pid]
    seen = np.zeros(len(ps.points), dtype=bool)
    scal = np.arange(ps.q, dtype=np.int64)
    rows = []
    for c in coll:
        if seen[c]:
            continue
        # points P + t*X and X itself
        X = ps.points[c]
        vecs = ps.F.vadd(P[None, :], ps.F.vmul(scal[1:, None], X[None, :]))
        ids = ps.index.lookup(np.vstack([vecs, X[None, :]]))
        ids = np.append(ids, pid)
        seen[ids] = True
        rows.append(np.sort(ids))
    return np.array(rows, dtype=np.int64).reshape(-1, ps.q + 1)


def extension_points(ps: PolarSpace, points) -> np.ndarray:
    """Ids of points of ps that can be added to a partial ovoid."""
    P = np.asarray(points, dtype=np.int64).reshape(-1, ps.n + 1)
    ids = ps.index.lookup(P)
    out = np.ones(len(ps.points), dtype=bool)
    out[ids] = False
    chunk = 4096
    for s in range(0, len(ps.points), chunk):
        blk = ps.form.beta(ps.points[s:s + chunk], P) == 0
        out[s:s + chunk] &= ~blk.any(axis=1)
    return np.nonzero(out)[0]


def verify_regular_system(ps: PolarSpace, generators, k: int = 1) -> "Certificate":
    """Count members through every totally isotropic (k-1)-space.

    generators: rows of point ids of the members, or Subspace objects.
    """
    t0 = time.perf_counter()
    params = {"space": ps.label, "k": k}
    if k < 1 or k > max(1, ps.d - 1):
        raise ValueError(f"k must lie in 1..{ps.d - 1}")
    gen_pts = _member_point_ids(ps, generators)
    witness: dict = {}
    # every member must be a generator
    per_gen = theta(ps.d - 1, ps.q)
    for i, row in enumerate(gen_pts):
        if len(row) != per_gen or (row < 0).any():
            witness["bad_member"] = i
            return make_certificate("regular-system", params, False, witness=witness, started=t0)
        R = ps.points[row]
        if not (ps.form.beta(R, R) == 0).all() or linalg.rank(ps.F, R) != ps.d:
            witness["bad_member"] = i
            return make_certificate("regular-system", params, False, witness=witness, started=t0)
    if len(np.unique(np.sort(gen_pts, axis=1), axis=0)) != len(gen_pts):
        witness["repeated_member"] = True
        return make_certificate("regular-system", params, False, witness=witness, started=t0)
    inc = np.zeros((len(gen_pts), len(ps.points)), dtype=bool)
    if len(gen_pts):
        inc[np.repeat(np.arange(len(gen_pts)), gen_pts.shape[1]), gen_pts.ravel()] = True
    if k == 1:
        counts = inc.sum(axis=0)
    else:
        subs = ps.level_point_ids(k)
        counts = np.array([inc[:, s].all(axis=1).sum() for s in subs], dtype=np.int64)
    m = int(counts[0]) if len(counts) else 0
    ok = bool((counts == m).all())
    if not ok:
        witness["violating_subspace"] = int(np.nonzero(counts != m)[0][0])
    size_formula = m * np.prod([ps.qpow(ps.d + ps.e - i) + 1 for i in range(1, k + 1)])
    size_ok = int(size_formula) == len(gen_pts)
    data = {"m": m, "size": len(gen_pts), "size_formula_ok": bool(size_ok)}
    return make_certificate(
        "regular-system", params, ok and size_ok, witness=witness,
        counters={"subspaces_checked": int(len(counts))}, data=data, started=t0,
    )


def _member_point_ids(ps: PolarSpace, generators) -> np.ndarray:
    if isinstance(generators, np.ndarray):
        return generators.reshape(-1, theta(ps.d - 1, ps.q)) if generators.size else np.zeros((0, theta(ps.d - 1, ps.q)), dtype=np.int64)
    rows = []
    for g in generators:
        if isinstance(g, Subspace):
            ids = ps.index.lookup(g.points())
            rows.append(np.sort(ids))
        else:
            rows.append(np.sort(np.asarray(g, dtype=np.int64)))
    if not rows:
        return np.zeros((0, theta(ps.d - 1, ps.q)), dtype=np.int64)
    lens = {len(r) for r in rows}
    if len(lens) != 1:
        width = max(lens)
        return np.array([np.pad(r, (0, width - len(r)), constant_values=-1) for r in rows])
    return np.array(rows, dtype=np.int64)


# generator classes and reguli

def generator_classes(ps: PolarSpace, gen_pts: np.ndarray | None = None) -> np.ndarray:
    """Latin/Greek class (0 or 1) of each generator of a hyperbolic quadric."""
    if ps.family != "Q+":
        raise FormError("generator classes exist for hyperbolic quadrics only")
    gp = ps.level_point_ids(ps.d) if gen_pts is None else gen_pts
    base = set(gp[0].tolist())
    out = np.zeros(len(gp), dtype=np.int64)
    for i, row in enumerate(gp):
        meet = len(base.intersection(row.tolist()))
        pd = _projdim_from_count(meet, ps.q)
        out[i] = (ps.d - 1 - pd) % 2
    return out


def _projdim_from_count(c: int, q: int) -> int:
    pd, t = -1, 0
    while t < c:
        pd += 1
        t = theta(pd, q)
    if t != c:
        raise ValueError(f"{c} is not the size of a projective subspace over GF({q})")
    return pd


def split_reguli(lines: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split the lines of a hyperbolic quadric Q+(3,q) into its two reguli.

    The first regulus is the one holding the first line in the given order.
    """
    first = set(lines[0].tolist())
    same = np.array([i == 0 or not first.intersection(r.tolist()) for i, r in enumerate(lines)])
    return lines[same], lines[~same]


def generators_in(ps: PolarSpace, S: Subspace, gen_pts: np.ndarray) -> np.ndarray:
    """Indices of the generators (given by point ids) contained in the subspace S."""
    D = linalg.nullspace(ps.F, S.basis, ps.n + 1)
    if D.shape[0] == 0:
        inside = np.ones(len(ps.points), dtype=bool)
    else:
        inside = (linalg.matmul(ps.F, ps.points, D.T) == 0).all(axis=1)
    return np.nonzero(inside[gen_pts].all(axis=1))[0]


# elliptic hemisystem

def _solid_lines(F: GF, n: int, solid: Subspace) -> list[Subspace]:
    k = solid.vdim - 1
    return [Subspace(F, n, linalg.matmul(F, L.basis, solid.basis)) for L in enumerate_subspace_list(F, k, 1)]


def _meet_dim(a: Subspace, b: Subspace) -> int:
    return a.vdim + b.vdim - span(a, b).vdim - 1


def elliptic_hemisystem(q: int, flip: int | None = None) -> dict:
    """Hemisystem of Q-(5,q), q odd, from a partition into hyperbolic sections.

    flip: index of one section whose regulus choice is swapped.
    """
    t0 = time.perf_counter()
    if q % 2 == 0:
        raise ConstructionError("q must be odd")
    ps = polar_space("Q-", 2, q)
    F = ps.F
    count_num = (q**2 + 1) * (q**3 + 1)
    if count_num % (2 * (q + 1)):
        raise ConstructionError(f"partition size {count_num}/{2 * (q + 1)} is not an integer")
    expected = count_num // (2 * (q + 1))

    def external(L: Subspace) -> bool:
        return ps.meet_count(L) == 0

    ell = next(L for L in enumerate_subspace_list(F, 5, 1) if external(L))
    Pi = ps.perp(ell)
    X = [L for L in _solid_lines(F, 5, Pi) if external(L)]
    ell1 = X[0]
    ell2 = Subspace(F, 5, _meet_rows(ps.perp(ell1), Pi))
    Pi1, Pi2 = ps.perp(ell1), ps.perp(ell2)
    X1 = [L for L in _solid_lines(F, 5, Pi1) if external(L) and _meet_dim(L, ell) >= 0]
    X2 = [
        L for L in _solid_lines(F, 5, Pi2)
        if external(L) and _meet_dim(L, ell) == 0 and _meet_dim(L, ell1) == 0
    ]
    members: list[Subspace] = []
    for L in X + X1 + X2:
        if L not in members:
            members.append(L)
    sizes = {"X": len(X), "X1": len(X1), "X2": len(X2), "total": len(members)}
    if len(members) != expected:
        raise ConstructionError(f"expected {expected} lines, built {len(members)}")
    # pairwise conditions
    for a, b in combinations(range(len(members)), 2):
        r, s = members[a], members[b]
        md = _meet_dim(r, s)
        c = ps.meet_count(span(r, s))
        if (md == 0 and c == 1) or (md == -1 and c == q + 1):
            raise ConstructionError(f"pair ({a},{b}) violates the intersection condition")
    gen_pts = ps.level_point_ids(2)
    owner = np.full(len(gen_pts), -1, dtype=np.int64)
    chosen = []
    for t, r in enumerate(members):
        idx = generators_in(ps, ps.perp(r), gen_pts)
        if len(idx) != 2 * (q + 1) or (owner[idx] >= 0).any():
            raise ConstructionError(f"section {t} is not a fresh Q+(3,{q})")
        owner[idx] = t
        reg_a, reg_b = split_reguli(gen_pts[idx])
        chosen.append(reg_b if flip == t else reg_a)
    if (owner < 0).any():
        raise ConstructionError("sections do not partition the generators")
    system = np.vstack(chosen)
    order = np.lexsort(system.T[::-1])
    return {
        "space": ps, "members": members, "sizes": sizes, "partition": owner,
        "system": system[order], "m": (q**2 + 1) // 2, "wall": time.perf_counter() - t0,
    }


def _meet_rows(a: Subspace, b: Subspace) -> np.ndarray:
    from .projspace import meet

    return meet(a, b).basis


def hyperplane_section_counts(ps: PolarSpace, system: np.ndarray, family: str = "Q") -> list[int]:
    """Members of a regular system lying in each hyperplane section of the given family."""
    out = []
    F = ps.F
    for h in enumerate_point_array(F, ps.n):
        H = Subspace(F, ps.n, linalg.nullspace(F, h.reshape(1, -1), ps.n + 1))
        sec = ps.section(H)
        if sec["vertex_projdim"] != -1 or not sec["base"].startswith(family + "("):
            continue
        inside = (linalg.matmul(F, ps.points, h.reshape(-1, 1))[:, 0] == 0)
        out.append(int(inside[system].all(axis=1).sum()))
    return out


# Q(6,3) 1-system

def diagonal_parabolic(q: int = 3) -> PolarSpace:
    F = field_of_order(q)
    return PolarSpace(Form(F, "quadratic", np.eye(7, dtype=np.int64)), "Q")


def q63_one_system() -> dict:
    """The 1-system of Q(6,3) built from reguli on a self-polar simplex."""
    t0 = time.perf_counter()
    ps = diagonal_parabolic(3)
    F = ps.F
    E = np.eye(7, dtype=np.int64)

    def P(i):  # simplex points P1..P7
        return E[i - 1]

    def sub(*idx):
        return Subspace(F, 6, np.array([P(i) for i in idx]))

    r = [sub(1, 2), sub(2, 3), sub(3, 1)]
    ell = [sub(4, 5), sub(4, 7), sub(4, 6)]
    ellp = [sub(6, 7), sub(5, 6), sub(5, 7)]
    solids = []
    for i in range(3):
        solids.append(span(r[i], ell[i]))
        solids.append(span(r[i], ellp[i]))
    solids.append(sub(4, 5, 6, 7))
    lines = ps.level_point_ids(2)
    S, So = [], []
    for T in solids:
        idx = generators_in(ps, T, lines)
        if len(idx) != 8:
            raise ConstructionError("simplex solid is not a hyperbolic quadric")
        a, b = split_reguli(lines[idx])
        S.append(a)
        So.append(b)
    S, So = np.vstack(S), np.vstack(So)
    planes = ps.level_point_ids(3)
    return {"space": ps, "S": S, "S_opp": So, "planes": planes, "wall": time.perf_counter() - t0}


def verify_one_system(ps: PolarSpace, lines: np.ndarray, planes: np.ndarray | None = None) -> "Certificate":
    """Planes through a member line avoid the points of all other members."""
    t0 = time.perf_counter()
    planes = ps.level_point_ids(3) if planes is None else planes
    cover = np.zeros(len(ps.points), dtype=np.int64)
    for L in lines:
        cover[L] += 1
    ok, witness = True, {}
    disjoint = bool((cover <= 1).all())
    pin = np.zeros((len(planes), len(ps.points)), dtype=bool)
    pin[np.repeat(np.arange(len(planes)), planes.shape[1]), planes.ravel()] = True
    for t, L in enumerate(lines):
        through = np.nonzero(pin[:, L].all(axis=1))[0]
        others = cover.copy()
        others[L] -= 1
        for p in through:
            if (others[planes[p]] > 0).any():
                ok = False
                witness = {"line": t, "plane": planes[p].tolist()}
                break
        if not ok:
            break
    size_ok = len(lines) == ps.q**3 + 1
    return make_certificate(
        "one-system", {"space": ps.label}, ok and disjoint and size_ok, witness=witness,
        data={"lines": len(lines), "points_covered": int((cover > 0).sum()), "disjoint": disjoint},
        started=t0,
    )


def planes_through_lines(planes: np.ndarray, lines: np.ndarray, npoints: int) -> np.ndarray:
    pin = np.zeros((len(planes), npoints), dtype=bool)
    pin[np.repeat(np.arange(len(planes)), planes.shape[1]), planes.ravel()] = True
    hit = np.zeros(len(planes), dtype=bool)
    for L in lines:
        hit |= pin[:, L].all(axis=1)
    return planes[hit]


# hemisystem search

def search_hemisystem(ps: PolarSpace, m: int | None = None, *, budget_nodes: int = 2_000_000,
                      budget_seconds: float | None = None) -> dict:
    """Backtracking search for an m-regular system (w.r.t. points) of a rank-2 space.

    Variables are the generators in lexicographic order.  The branching point is the
    least point still short of m; the branching generator is the least undecided one
    through it, tried in before out.  Generator 0 is fixed in when 0 < m.
    """
    t0 = time.perf_counter()
    gens = ps.level_point_ids(ps.d)
    npts = len(ps.points)
    per_point = np.bincount(gens.ravel(), minlength=npts)
    r = int(per_point[0])
    if m is None:
        if r % 2:
            raise ConstructionError("no hemisystem: odd number of generators per point")
        m = r // 2
    through = [[] for _ in range(npts)]
    for g, row in enumerate(gens):
        for p in row:
            through[p].append(g)
    G = len(gens)
    state = np.zeros(G, dtype=np.int8)  # 0 undecided, 1 in, -1 out
    cnt_in = np.zeros(npts, dtype=np.int64)
    cnt_free = per_point.copy()
    nodes = 0
    trail: list[int] = []

    def assign(g, v):
        state[g] = v
        trail.append(g)
        pts = gens[g]
        cnt_free[pts] -= 1
        if v == 1:
            cnt_in[pts] += 1

    def undo(to):
        while len(trail) > to:
            g = trail.pop()
            pts = gens[g]
            cnt_free[pts] += 1
            if state[g] == 1:
                cnt_in[pts] -= 1
            state[g] = 0

    def propagate(start_pts) -> bool:
        queue = list(start_pts)
        while queue:
            p = queue.pop()
            if cnt_in[p] > m or cnt_in[p] + cnt_free[p] < m:
                return False
            if cnt_free[p] == 0:
                continue
            if cnt_in[p] == m:
                v = -1
            elif cnt_in[p] + cnt_free[p] == m:
                v = 1
            else:
                continue
            for g in through[p]:
                if state[g] == 0:
                    assign(g, v)
                    queue.extend(gens[g].tolist())
        return True

    def pick():
        short = np.nonzero(cnt_in < m)[0]
        for p in short:
            for g in through[p]:
                if state[g] == 0:
                    return g
        return None

    result = None
    exhausted = True

    def rec():
        nonlocal nodes, result
        nodes += 1
        if nodes > budget_nodes or (budget_seconds and time.perf_counter() - t0 > budget_seconds):
            raise BudgetExceeded(f"hemisystem search stopped after {nodes} nodes")
        g = pick()
        if g is None:
            if (cnt_in == m).all():
                result = np.nonzero(state == 1)[0]
                return True
            return False
        for v in (1, -1):
            mark = len(trail)
            assign(g, v)
            if propagate(gens[g].tolist()) and rec():
                return True
            undo(mark)
        return False

    status = "found"
    try:
        if m > 0:
            assign(0, 1)
            ok = propagate(gens[0].tolist()) and rec()
        else:
            ok = True
            result = np.zeros(0, dtype=np.int64)
        if not ok:
            status = "none"
    except BudgetExceeded:
        status, exhausted = "budget_exhausted", False
    system = gens[result] if result is not None else None
    return {"status": status, "m": m, "system": system, "indices": result, "nodes": nodes,
            "exhaustive": exhausted, "wall": time.perf_counter() - t0}


# W(3,q): twisted cubic plus an orbit

def twisted_cubic_space(q: int) -> PolarSpace:
    F = field_of_order(q)
    m1 = F.neg(1)
    J = np.array([[0, 0, 0, 1], [0, 0, 1, 0], [0, m1, 0, 0], [m1, 0, 0, 0]], dtype=np.int64)
    return PolarSpace(Form(F, "alternating", J), "W")


def _cubic_point(F: GF, t: int) -> list[int]:
    return [1, F.neg(F.mul(F.from_int(3), t)), F.mul(t, t), F.pow(t, 3)]


def twisted_cubic_partial_ovoid(q: int, eps: int | None = None) -> PartialOvoid:
    """Twisted cubic of W(3,q) glued to an orbit of size sqrt(q)(q-1)/3, q an odd square."""
    r = sqrt_order(q)
    if q % 2 == 0 or q % 3 == 0:
        raise ConstructionError("q must be an odd square prime to 3")
    want = 1 if r % 3 == 1 else -1
    if eps is None:
        eps = want
    if eps != want:
        raise ConstructionError(f"sqrt(q) = {r} forces eps = {want}")
    ps = twisted_cubic_space(q)
    F = ps.F
    sub = set(F.subfield(F.e // 2).tolist())
    cubic = np.array([_cubic_point(F, t) for t in range(q)] + [[0, 0, 0, 1]], dtype=np.int64)
    x = None
    for cand in range(1, q):
        if cand in sub or F.is_cube(cand):
            continue
        if eps == -1 and F.pow(cand, r + 1) == 1:
            continue
        x = cand
        break
    if x is None:
        raise ConstructionError("no admissible x")
    tuples = _group_tuples(F, eps, r)
    a, b, c, d = tuples.T
    pts = _orbit_images(F, x, a, b, c, d)
    pts = linalg.normalize_rows(F, pts)
    orbit = np.unique(pts, axis=0)
    # stabiliser of R = U1 + x U4 inside the group, modulo scalars
    R = linalg.normalize_rows(F, np.array([[1, 0, 0, x]]))[0]
    fix = int((pts == R).all(axis=1).sum())
    scalars = _scalar_count(F, eps, r)
    group_order = len(tuples) // scalars
    info = {"x": x, "eps": eps, "orbit": len(orbit), "cubic": len(cubic), "group_order": group_order,
            "stabiliser_order": fix // scalars}
    pts_all = np.vstack([cubic, orbit])
    po = PartialOvoid(ps, pts_all, False, info)
    po.info["lambda_candidates"] = _lambda_extensions(ps, eps, r)
    return po


def _group_tuples(F: GF, eps: int, r: int) -> np.ndarray:
    if eps == 1:
        vals = F.subfield(F.e // 2)
    else:
        vals = np.arange(F.q, dtype=np.int64)
    grid = np.array(list(product(vals.tolist(), repeat=4)), dtype=np.int64)
    a, b, c, d = grid.T
    det = F.vsub(F.vmul(a, d), F.vmul(b, c))
    keep = det != 0
    if eps == -1:
        c1 = F.vsub(F.vmul(a, F.vpow(b, r)), F.vmul(c, F.vpow(d, r)))
        e = r + 1
        c2 = F.vsub(F.vadd(F.vpow(a, e), F.vpow(b, e)), F.vadd(F.vpow(c, e), F.vpow(d, e)))
        keep &= (c1 == 0) & (c2 == 0)
    return grid[keep]


def _scalar_count(F: GF, eps: int, r: int) -> int:
    return r - 1 if eps == 1 else F.q - 1


def _orbit_images(F: GF, x: int, a, b, c, d) -> np.ndarray:
    three = F.from_int(3)
    c3 = lambda v: F.vpow(v, 3)
    p0 = F.vadd(c3(a), F.vmul(x, c3(b)))
    p1 = F.vneg(F.vmul(three, F.vadd(F.vmul(F.vmul(a, a), c), F.vmul(x, F.vmul(F.vmul(b, b), d)))))
    p2 = F.vadd(F.vmul(a, F.vmul(c, c)), F.vmul(x, F.vmul(b, F.vmul(d, d))))
    p3 = F.vadd(c3(c), F.vmul(x, c3(d)))
    return np.stack([p0, p1, p2, p3], axis=1)


def _lambda_extensions(ps: PolarSpace, eps: int, r: int) -> np.ndarray:
    """Points of the Baer subgeometry off every osculating plane of its twisted cubic."""
    F = ps.F
    sub = F.subfield(F.e // 2)
    if eps == 1:
        lam = enumerate_point_array(F, 3)
        lam = lam[np.isin(lam, sub).all(axis=1)]
        cub = np.array([_cubic_point(F, int(t)) for t in sub] + [[0, 0, 0, 1]], dtype=np.int64)
    else:
        al, be = np.meshgrid(np.arange(F.q), np.arange(F.q), indexing="ij")
        al, be = al.ravel(), be.ravel()
        nz = (al != 0) | (be != 0)
        al, be = al[nz], be[nz]
        three = F.from_int(3)
        lam = np.stack([al, F.vneg(F.vmul(three, be)), F.vpow(be, r), F.vpow(al, r)], axis=1)
        lam = np.unique(linalg.normalize_rows(F, lam), axis=0)
        ts = [t for t in range(1, F.q) if F.pow(t, r + 1) == 1]
        cub = np.array([_cubic_point(F, t) for t in ts], dtype=np.int64)
    on_osc = (ps.form.beta(lam, cub) == 0).any(axis=1)
    return lam[~on_osc]


# W(5,q) cyclic orbit

def w5_cyclic_partial_ovoid(q: int, c: int = 1) -> PartialOvoid:
    """Orbit of P_{1,c} under the norm-one diagonal group, as a point set of W(5,q)."""
    if c == 0:
        raise ConstructionError("c must be nonzero")
    F = field_of_order(q)
    K = field_of_order(q**3)
    emb = K.embedding(F.e)
    basis, coords = _subfield_coords(K, F, 3)
    ps = PolarSpace(Form(F, "alternating", _w5_trace_gram(K, F, basis, coords)), "W")
    cK = int(emb[c])
    xs = [x for x in range(1, K.q) if K.norm(x, F.e) == 1]
    pts = []
    for x in xs:
        a, b = x, K.mul(cK, K.inv(x))
        pts.append(np.concatenate([coords[a], coords[b]]))
    pts = linalg.normalize_rows(F, np.array(pts, dtype=np.int64))
    info = {"q": q, "c": c, "norm_one": len(xs), "basis": basis}
    return PartialOvoid(ps, np.unique(pts, axis=0), True, info)


def _subfield_coords(K: GF, F: GF, deg: int) -> tuple[list[int], np.ndarray]:
    """Coordinates of K over F in the basis 1, g, g^2, ... with g primitive in K."""
    emb = K.embedding(F.e)
    g = K.primitive
    basis = [K.pow(g, j) for j in range(deg)]
    coords = np.zeros((K.q, deg), dtype=np.int64)
    for combo in product(range(F.q), repeat=deg):
        acc = 0
        for cc, bj in zip(combo, basis):
            acc = K.add(acc, K.mul(int(emb[cc]), bj))
        coords[acc] = combo
    return basis, coords


def _w5_trace_gram(K: GF, F: GF, basis, coords) -> np.ndarray:
    """Gram matrix over F of T(a b') - T(a' b) on pairs (a, b) of elements of K."""
    deg = len(basis)
    back = {int(v): i for i, v in enumerate(K.embedding(F.e))}
    G = np.zeros((2 * deg, 2 * deg), dtype=np.int64)
    for i in range(deg):
        for j in range(deg):
            t = K.trace(K.mul(basis[i], basis[j]), F.e)
            G[i, deg + j] = back[t]
            G[deg + j, i] = F.neg(back[t])
    return G


def sherk_surface(alpha: int, beta: int, gamma: int, delta: int, q: int) -> dict:
    """Brute-force points of S(alpha, beta, gamma, delta) in GF(q^3) plus infinity.

    alpha, delta are given as elements of GF(q) (indices of that field); beta, gamma
    as elements of GF(q^3).
    """
    F = field_of_order(q)
    K = field_of_order(q**3)
    emb = K.embedding(F.e)
    a, d = int(emb[alpha]), int(emb[delta])
    xs = np.arange(K.q, dtype=np.int64)
    m = F.e
    val = K.vmul(a, K.vnorm(xs, m))
    b2 = K.pow(beta, q * q)
    val = K.vadd(val, K.vtrace(K.vmul(b2, K.vpow(xs, q + 1)), m))
    val = K.vadd(val, K.vtrace(K.vmul(gamma, xs), m))
    val = K.vadd(val, d)
    pts = xs[val == 0].tolist()
    infinity = alpha == 0
    size = len(pts) + int(infinity)
    allowed = {1, q * q - q + 1, q * q + 1, q * q + q + 1}
    return {"points": pts, "infinity": infinity, "size": size, "size_allowed": size in allowed}


# W(5,q), q even

def w5_even_space(q: int) -> PolarSpace:
    F = field_of_order(q)
    G = np.zeros((6, 6), dtype=np.int64)
    for i, j in ((0, 1), (2, 3), (4, 5)):
        G[i, j] = G[j, i] = 1
    return PolarSpace(Form(F, "alternating", G), "W")


def least_trace_one_delta(F: GF) -> int:
    """Least delta with X^2 + X + delta irreducible over F."""
    for dlt in range(1, F.q):
        if all(F.add(F.add(F.mul(t, t), t), dlt) != 0 for t in range(F.q)):
            return dlt
    raise ConstructionError("no irreducible X^2+X+delta")


def w5_even_partial_ovoid(q: int) -> PartialOvoid:
    if q % 2:
        raise ConstructionError("q must be even")
    ps = w5_even_space(q)
    F = ps.F
    dl = least_trace_one_delta(F)
    A = [[0, 1, 0, 0, 0, 0]]
    E1 = [[0, 1, 0, 0, 0, 0]]
    for c, d in product(range(q), repeat=2):
        v = F.add(F.add(F.mul(c, c), F.mul(c, d)), F.mul(dl, F.mul(d, d)))
        A.append([1, v, F.sqrt(v), 0, c, d])
    for a, b in product(range(q), repeat=2):
        v = F.add(F.add(F.mul(a, a), F.mul(a, b)), F.mul(dl, F.mul(b, b)))
        E1.append([1, v, a, b, 0, 0])
    A = np.array(A, dtype=np.int64)
    E1 = np.array(E1, dtype=np.int64)
    off_sigma = E1[E1[:, 3] != 0]
    pts = np.unique(np.vstack([A, off_sigma]), axis=0)
    return PartialOvoid(ps, pts, True, {"delta": dl, "A": A, "E1": E1, "E1_off_sigma": len(off_sigma)})


# tangent-sets of H(3,q^2) and the lift to H(4,q^2)

def pencil_parameters(q: int) -> tuple[int, list[int]]:
    """(iota, [xi_1, ..., xi_q]) for the Hermitian pencil over GF(q^2).

    For q odd iota is the least nonzero element with iota + iota^q = 0 and the xi_i
    are the solutions of xi + xi^q = 0.  For q even that equation only returns GF(q),
    which collapses the pencil, so iota = 1 and xi_i runs over the least coset
    representatives of GF(q) in GF(q^2), one per value of xi^q - xi.
    """
    K = field_of_order(q * q)
    if q % 2:
        iota = next(i for i in range(1, K.q) if K.add(i, K.pow(i, q)) == 0)
        xis = [x for x in range(K.q) if K.add(x, K.pow(x, q)) == 0]
    else:
        iota = 1
        seen, xis = set(), []
        for x in range(K.q):
            t = K.sub(K.pow(x, q), x)
            if t not in seen:
                seen.add(t)
                xis.append(x)
    return iota, xis


def pencil_form(q: int, xi: int, n: int = 2) -> Form:
    K = field_of_order(q * q)
    iota, _ = pencil_parameters(q)
    N = 2 * n
    M = np.zeros((N, N), dtype=np.int64)
    for i in range(n):
        M[i, n + i] = 1
        M[n + i, i] = K.neg(1)
    M[N - 1, N - 1] = K.sub(K.pow(xi, q), xi)
    return Form(K, "hermitian", K.vmul(iota, M))


def standard_symplectic(q: int, n: int = 2) -> Form:
    F = field_of_order(q)
    N = 2 * n
    B = np.zeros((N, N), dtype=np.int64)
    for i in range(n):
        B[i, n + i] = 1
        B[n + i, i] = F.neg(1)
    return Form(F, "alternating", B)


def elliptic_ovoid_w3(q: int) -> np.ndarray:
    """Points of an elliptic quadric through U2 whose polar form is the standard symplectic one (q even)."""
    if q % 2:
        raise ConstructionError("elliptic quadric ovoids of W(3,q) need q even")
    F = field_of_order(q)
    dl = least_trace_one_delta(F)
    C = np.zeros((4, 4), dtype=np.int64)
    C[0, 0], C[0, 2], C[2, 2], C[1, 3] = 1, 1, dl, 1
    Q = Form(F, "quadratic", C)
    pts = enumerate_point_array(F, 3)
    return pts[Q.is_isotropic(pts)]


def greedy_partial_ovoid(ps: PolarSpace) -> np.ndarray:
    chosen = []
    for P in ps.points:
        if all(ps.form.beta(P, c)[0, 0] != 0 for c in chosen):
            chosen.append(P)
    return np.array(chosen, dtype=np.int64)


@dataclass
class TangentSet:
    q: int
    form: Form  # the Hermitian form H_1
    points: np.ndarray
    info: dict = field(default_factory=dict)


def tangent_set(q: int, ovoid: np.ndarray | None = None, n: int = 2) -> TangentSet:
    """Union of copies of a (partial) ovoid of W(2n-1,q) placed in the pencil subgeometries."""
    F = field_of_order(q)
    K = field_of_order(q * q)
    emb = K.embedding(F.e)
    _, xis = pencil_parameters(q)
    if ovoid is None:
        if n == 2 and q % 2 == 0:
            ovoid = elliptic_ovoid_w3(q)
        else:
            B = standard_symplectic(q, n)
            ovoid = greedy_partial_ovoid(PolarSpace(B, "W"))
    O = np.asarray(ovoid, dtype=np.int64)
    B = standard_symplectic(q, n)
    bb = B.beta(O, O) == 0
    np.fill_diagonal(bb, False)
    if bb.any():
        raise ConstructionError("input is not a partial ovoid of W(2n-1,q)")
    big = emb[O]
    pts = []
    for xi in xis:
        img = big.copy()
        img[:, n - 1] = K.vadd(img[:, n - 1], K.vmul(xi, img[:, -1]))
        pts.append(img)
    pts = np.unique(linalg.normalize_rows(K, np.vstack(pts)), axis=0)
    on_pi = int((O[:, -1] == 0).sum())
    info = {"ovoid_size": len(O), "ovoid_on_hyperplane": on_pi, "xis": xis}
    return TangentSet(q, pencil_form(q, xis[0], n), pts, info)


def verify_tangent_set(T: TangentSet, *, check_maximal: bool = False) -> "Certificate":
    """Every line tangent to or inside the Hermitian variety meets T at most once."""
    t0 = time.perf_counter()
    form, K = T.form, T.form.F
    n = form.dim - 1
    q = sqrt_order(K.q)
    P = T.points
    bad = None
    scal = np.arange(K.q, dtype=np.int64)
    pairs = 0

    def line_hits(a, b):
        vecs = np.vstack([K.vadd(a[None, :], K.vmul(scal[:, None], b[None, :])), b[None, :]])
        return int(form.is_isotropic(vecs).sum())

    for i, j in combinations(range(len(P)), 2):
        pairs += 1
        h = line_hits(P[i], P[j])
        if h == 1 or h == K.q + 1:
            bad = [i, j]
            break
    ok = bad is None
    data = {"size": len(P), "pairs_ok": ok}
    witness = {"pair": bad} if bad else {}
    # second route: classify every line of the ambient space (small cases)
    if n == 3 and K.q <= 9:
        nlines = 0
        worst = 0
        inT = np.zeros(theta(n, K.q), dtype=bool)
        amb = PointIndex(K, enumerate_point_array(K, n))
        inT[amb.lookup(P)] = True
        iso = form.is_isotropic(amb.points)
        for L in enumerate_subspace_list(K, n, 1):
            ids = amb.lookup(L.points())
            h = int(iso[ids].sum())
            if h in (1, K.q + 1):
                nlines += 1
                worst = max(worst, int(inT[ids].sum()))
        data["lines_ok"] = worst <= 1
        data["tangent_or_isotropic_lines"] = nlines
        ok = ok and data["lines_ok"]
    if ok and check_maximal:
        allp = enumerate_point_array(K, n)
        inT = set(map(tuple, P.tolist()))
        extendable = None
        for R in allp:
            if tuple(R.tolist()) in inT:
                continue
            if not any(line_hits(R, t) in (1, K.q + 1) for t in P):
                extendable = R.tolist()
                break
        data["maximal"] = extendable is None
        if extendable is not None:
            witness["extension_point"] = extendable
        ok = data["maximal"]
    return make_certificate("tangent-set", {"q": q, "n": n}, ok, witness=witness,
                            counters={"pairs": pairs}, data=data, started=t0)


def hermitian_lift(T: TangentSet) -> PartialOvoid:
    """Points of H(2n,q^2) on the lines joining P = (0,...,0,1) to the points of T."""
    K = T.form.F
    N = T.form.dim
    G = np.zeros((N + 1, N + 1), dtype=np.int64)
    G[:N, :N] = T.form.gram
    G[N, N] = 1
    ps = PolarSpace(Form(K, "hermitian", G))
    q = sqrt_order(K.q)
    out = []
    for R in T.points:
        h = int(T.form.value(R)[0])
        if h == 0:
            out.append(np.append(R, 0))
            continue
        target = K.neg(h)
        for lam in range(1, K.q):
            if K.pow(lam, q + 1) == target:
                out.append(np.append(R, lam))
    pts = linalg.normalize_rows(K, np.array(out, dtype=np.int64))
    on = int((T.form.value(T.points) == 0).sum())
    info = {"expected": (q + 1) * (len(T.points) - on) + on}
    return PartialOvoid(ps, np.unique(pts, axis=0), True, info)


# unitals of PG(2,q^2)

@dataclass
class Unital:
    kind: str
    q: int
    points: np.ndarray  # coordinate rows in PG(2,q^2); empty for abstract designs
    blocks: list  # tuples of indices into points
    info: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)


def _in_subfield(K: GF, a: int, q: int) -> bool:
    return K.pow(a, q) == a


def bm_parameters_valid(q: int, alpha: int, beta: int) -> bool:
    K = field_of_order(q * q)
    if alpha == 0:
        return False
    if q % 2:
        d = K.sub(beta, K.pow(beta, q))
        v = K.add(K.mul(d, d), K.mul(K.from_int(4), K.pow(alpha, q + 1)))
        # v lies in GF(q); it must be a non-square there
        return v != 0 and K.pow(v, (q - 1) // 2) != 1
    if _in_subfield(K, beta, q):
        return False
    s = K.add(beta, K.pow(beta, q))
    v = K.div(K.pow(alpha, q + 1), K.mul(s, s))
    # absolute trace of v, an element of GF(q)
    acc, x = 0, v
    for _ in range(K.e // 2):
        acc, x = K.add(acc, x), K.mul(x, x)
    return acc == 0


def least_bm_parameters(q: int) -> tuple[int, int]:
    K = field_of_order(q * q)
    for alpha, beta in product(range(1, K.q), range(K.q)):
        if bm_parameters_valid(q, alpha, beta):
            return alpha, beta
    raise ConstructionError(f"no valid Buekenhout-Metz parameters for q = {q}")


def make_unital(kind: str, q: int, parameters: dict | None = None) -> Unital:
    """Point set and blocks of a classical, Buekenhout-Metz or Buekenhout-Tits unital."""
    parameters = dict(parameters or {})
    K = field_of_order(q * q)
    Fq = K.subfield(K.e // 2)
    xs = np.arange(K.q, dtype=np.int64)
    info: dict = {}
    if kind == "classical":
        pts = enumerate_point_array(K, 2)
        pts = pts[K.vsum(K.vpow(pts, q + 1), axis=1) == 0]
    elif kind == "buekenhout_metz":
        if "alpha" in parameters:
            alpha, beta = parameters["alpha"], parameters["beta"]
            if not bm_parameters_valid(q, alpha, beta):
                raise ConstructionError(f"invalid (alpha, beta) = ({alpha}, {beta}) for q = {q}")
        else:
            alpha, beta = least_bm_parameters(q)
        info.update(alpha=alpha, beta=beta)
        base = K.vadd(K.vmul(alpha, K.vmul(xs, xs)), K.vmul(beta, K.vpow(xs, q + 1)))
        rows = [[x, K.add(int(b), int(z)), 1] for x, b in zip(xs, base) for z in Fq]
        pts = np.array(rows + [[0, 1, 0]], dtype=np.int64)
    elif kind == "buekenhout_tits":
        p, m = K.p, K.e // 2
        if p != 2 or m % 2 == 0 or m == 1:
            raise ConstructionError("Buekenhout-Tits unitals need q = 2^m with m odd and m > 1")
        delta = 2 ** ((m + 1) // 2)
        beta = parameters.get("beta")
        if beta is None:
            beta = next(b for b in range(K.q) if not _in_subfield(K, b, q))
        info.update(beta=beta, delta=delta)
        rows = []
        for x0, x1, z in product(Fq.tolist(), repeat=3):
            y = K.add(K.add(K.pow(x0, delta + 2), K.mul(x0, x1)), K.pow(x1, delta))
            rows.append([K.add(x0, K.mul(x1, beta)), K.add(K.mul(y, beta), z), 1])
        pts = np.array(rows + [[0, 1, 0]], dtype=np.int64)
    else:
        raise ConstructionError(f"unknown unital kind {kind!r}")
    pts = np.unique(linalg.normalize_rows(K, pts), axis=0)
    lines = enumerate_point_array(K, 2)
    inc = _plane_incidence(K, pts, lines)
    sec = inc.sum(axis=0) == q + 1
    blocks = [tuple(np.nonzero(inc[:, j])[0].tolist()) for j in np.nonzero(sec)[0]]
    return Unital(kind, q, pts, blocks, info)


def _plane_incidence(K: GF, pts: np.ndarray, lines: np.ndarray) -> np.ndarray:
    """inc[i, j] is True when point i lies on line j (lines given by dual coordinates)."""
    acc = np.zeros((len(pts), len(lines)), dtype=np.int64)
    for c in range(pts.shape[1]):
        acc = K.vadd(acc, K.vmul(pts[:, c][:, None], lines[:, c][None, :]))
    return acc == 0


def verify_unital(U: Unital, plane: bool = True) -> "Certificate":
    """2-(a^3+1, a+1, 1) design check on the blocks; in the plane, also the line intersection sizes."""
    t0 = time.perf_counter()
    npts = len(U.points) if len(U.points) else U.info.get("npoints", 0)
    witness: dict = {}
    data: dict = {"points": npts, "blocks": len(U.blocks)}
    ok = True
    sizes = {len(b) for b in U.blocks}
    a = round((npts - 1) ** (1 / 3)) if npts else 0
    if a ** 3 + 1 != npts or sizes != {a + 1}:
        ok = False
        witness["shape"] = {"points": npts, "block_sizes": sorted(sizes)}
    cover = np.zeros((npts, npts), dtype=np.int64)
    for b in U.blocks:
        idx = np.array(b)
        cover[np.ix_(idx, idx)] += 1
    np.fill_diagonal(cover, 1)
    data["pair_cover"] = sorted(set(cover.ravel().tolist()))
    if ok and not (cover == 1).all():
        ok = False
        i, j = map(int, np.argwhere(cover != 1)[0])
        witness["pair"] = [i, j, int(cover[i, j])]
    if plane and len(U.points):
        K = field_of_order(U.q * U.q)
        lines = enumerate_point_array(K, 2)
        meets = _plane_incidence(K, U.points, lines).sum(axis=0)
        hist = {int(k): int(v) for k, v in zip(*np.unique(meets, return_counts=True))}
        data["line_meets"] = hist
        data["tangent_lines"] = hist.get(1, 0)
        data["secant_lines"] = hist.get(U.q + 1, 0)
        if set(hist) - {1, U.q + 1}:
            ok = False
            witness["bad_line_meet"] = sorted(set(hist) - {1, U.q + 1})
    data["design"] = f"2-({npts},{a + 1},1)" if ok else None
    return make_certificate("unital", {"kind": U.kind, "q": U.q}, ok, witness=witness, data=data, started=t0)


def tangent_graph_data(U: Unital) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """External points of the plane, their tangent-adjacency matrix and the line incidence."""
    K = field_of_order(U.q * U.q)
    allp = enumerate_point_array(K, 2)
    lines = allp
    on_u = np.zeros(len(allp), dtype=bool)
    on_u[PointIndex(K, allp).lookup(U.points)] = True
    inc = _plane_incidence(K, allp, lines)
    tangent = inc[on_u].sum(axis=0) == 1
    ext = allp[~on_u]
    inc_ext = inc[~on_u]
    adj = (inc_ext[:, tangent].astype(np.int64) @ inc_ext[:, tangent].T.astype(np.int64)) > 0
    np.fill_diagonal(adj, False)
    return ext, adj, inc_ext


def dual_onan_search(U: Unital, limit: int = 1) -> dict:
    """Exhaustive search for four external points, no three collinear, joined by tangent lines."""
    t0 = time.perf_counter()
    ext, adj, inc = tangent_graph_data(U)
    found = []
    nodes = 0
    n = len(ext)
    nbrs = [np.nonzero(adj[i])[0] for i in range(n)]
    for a in range(n):
        for b in nbrs[a][nbrs[a] > a]:
            common_ab = nbrs[a][adj[b, nbrs[a]]]
            line_ab = inc[a] & inc[b]
            for c in common_ab[common_ab > b]:
                nodes += 1
                if (inc[c] & line_ab).any():
                    continue
                cand = common_ab[(common_ab > c) & adj[c, common_ab]]
                for d in cand:
                    nodes += 1
                    quad = [a, b, c, d]
                    if any((inc[x] & inc[y] & inc[z]).any() for x, y, z in combinations(quad, 3)):
                        continue
                    found.append([ext[i].tolist() for i in quad])
                    if len(found) >= limit:
                        return {"found": found, "exhaustive": False, "nodes": nodes,
                                "wall": time.perf_counter() - t0}
    return {"found": found, "exhaustive": True, "nodes": nodes, "wall": time.perf_counter() - t0}


# arithmetic side conditions

def quartic_square_count(q: int) -> dict:
    """n_q = #{xi in GF(q) : xi^4 - 48 xi^2 + 64 is a square}, with the two candidate values."""
    F = field_of_order(q)
    c48, c64 = F.from_int(48), F.from_int(64)
    n = zeros = 0
    for xi in range(q):
        x2 = F.mul(xi, xi)
        v = F.add(F.sub(F.mul(x2, x2), F.mul(c48, x2)), c64)
        n += F.is_square(v)
        zeros += v == 0
    cands = {"half_q_plus_1": (q + 1) // 2, "half_q_minus_3": (q - 3) // 2}
    return {"q": q, "n_q": n, "roots": zeros, "n_q_nonzero": n - zeros, **cands,
            "matches": [k for k, v in cands.items() if v == n]}
