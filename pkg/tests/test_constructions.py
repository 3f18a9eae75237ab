import numpy as np
import pytest

from polarzoo import constructions as cons
from polarzoo.polar import parse_descriptor, polar_space


def orth_oracle(ps, points):
    """Independent check through the orthogonality matrix: (partial ovoid, maximal)."""
    ids = ps.index.lookup(points)
    sub = ps.orth[np.ix_(ids, ids)] & ~np.eye(len(ids), dtype=bool)
    outside = np.setdiff1d(np.arange(len(ps.points)), ids)
    maximal = bool(ps.orth[np.ix_(outside, ids)].any(axis=1).all())
    return not sub.any(), maximal


# partial ovoids

@pytest.mark.parametrize("q,size", [(2, 7), (3, 13), (4, 21)])
def test_w5_cyclic_orbit(q, size):
    po = cons.w5_cyclic_partial_ovoid(q)
    assert len(po) == size == q * q + q + 1
    cert = cons.verify_partial_ovoid(po.space, po.points, check_maximal=True)
    assert cert.ok and cert["maximal"]
    assert orth_oracle(po.space, po.points) == (True, True)


@pytest.mark.parametrize("q,size", [(2, 7), (4, 29)])
def test_w5_even(q, size):
    po = cons.w5_even_partial_ovoid(q)
    assert len(po) == size
    assert orth_oracle(po.space, po.points) == (True, True)


def test_twisted_cubic_q25():
    tc = cons.twisted_cubic_partial_ovoid(25)
    info = tc.info
    assert len(tc) == 66
    assert (info["orbit"], info["cubic"]) == (40, 26)
    assert info["group_order"] == 120 and info["stabiliser_order"] == 3
    cert = cons.verify_partial_ovoid(tc.space, tc.points, check_maximal=True)
    assert cert["pairwise_ok"] and cert["lines_ok"] and not cert["maximal"]
    assert cert.verdict == "refuted"
    ext = np.array(cert.witness["extension_point"])
    assert cons.verify_partial_ovoid(tc.space, np.vstack([tc.points, ext])).ok
    # pairwise oracle straight from the form; the space is too large for the orth matrix
    B = tc.space.form.beta(tc.points, tc.points)
    assert (B[~np.eye(len(tc.points), dtype=bool)] != 0).all()


def test_partial_ovoid_rejects_collinear_pair():
    ps = polar_space("W", 2, 3)
    line = ps.level_point_ids(2)[0]
    cert = cons.verify_partial_ovoid(ps, ps.points[line[:2]])
    assert cert.verdict == "refuted" and "collinear_pair" in cert.witness


def test_sherk_surfaces():
    assert cons.sherk_surface(1, 0, 0, 1, 2)["size"] == 7
    assert cons.sherk_surface(0, 0, 0, 1, 2)["size"] == 1


def test_tangent_sets_and_lift():
    T = cons.tangent_set(2)
    cert = cons.verify_tangent_set(T, check_maximal=True)
    assert len(T.points) == 9 and cert.ok
    assert cert["tangent_or_isotropic_lines"] == 117 and cert["maximal"]
    T3 = cons.tangent_set(3)
    c3 = cons.verify_tangent_set(T3, check_maximal=True)
    assert len(T3.points) == 10 and c3.ok
    L = cons.hermitian_lift(T)
    assert len(L) == 17 == L.info["expected"]
    assert orth_oracle(L.space, L.points) == (True, True)


# regular systems

def test_segre_search():
    ps = polar_space("H", 2, 9)
    res = cons.search_hemisystem(ps)
    assert res["status"] == "found" and len(res["system"]) == 56
    counts = np.bincount(res["system"].ravel(), minlength=len(ps.points))
    assert set(counts.tolist()) == {2}


def test_search_budget_reports_exhaustion():
    res = cons.search_hemisystem(polar_space("H", 2, 9), budget_nodes=2)
    assert res["status"] == "budget_exhausted" and not res["exhaustive"]


def test_no_hemisystem_when_lines_per_point_is_odd():
    with pytest.raises(cons.ConstructionError):
        cons.search_hemisystem(polar_space("W", 2, 2))


def test_empty_system_is_zero_regular():
    cert = cons.verify_regular_system(parse_descriptor("Q-:5:3"), np.zeros((0, 4), dtype=np.int64), 1)
    assert cert.ok and cert["m"] == 0


def test_elliptic_hemisystem_q3():
    eh = cons.elliptic_hemisystem(3)
    assert eh["sizes"]["total"] == 35 and len(eh["system"]) == 140
    cert = cons.verify_regular_system(eh["space"], eh["system"], 1)
    assert cert.ok and cert["m"] == 5


def test_elliptic_hemisystem_needs_odd_q():
    with pytest.raises(cons.ConstructionError):
        cons.elliptic_hemisystem(2)


def test_q63_one_system_and_derived_planes():
    o = cons.q63_one_system()
    ps = o["space"]
    assert cons.verify_one_system(ps, o["S"], o["planes"]).ok
    half = cons.planes_through_lines(o["planes"], o["S"], len(ps.points))
    c4 = cons.verify_regular_system(ps, half, 1)
    assert len(half) == 112 and c4.ok and c4["m"] == 4
    both = cons.planes_through_lines(o["planes"], np.vstack([o["S"], o["S_opp"]]), len(ps.points))
    c8 = cons.verify_regular_system(ps, both, 1)
    assert len(both) == 224 and c8.ok and c8["m"] == 8


# unitals

@pytest.mark.parametrize("kind,q,points", [
    ("classical", 2, 9), ("classical", 3, 28), ("buekenhout_metz", 3, 28),
    ("buekenhout_metz", 4, 65), ("buekenhout_tits", 8, 513),
])
def test_unitals_are_designs(kind, q, points):
    U = cons.make_unital(kind, q)
    cert = cons.verify_unital(U, plane=q <= 4)
    assert cert.ok and cert["points"] == points
    assert cert["design"] == f"2-({points},{q + 1},1)"


def test_classical_unital_line_counts():
    cert = cons.verify_unital(cons.make_unital("classical", 3))
    assert cert["tangent_lines"] == 28 and cert["secant_lines"] == 63


def test_bm_parameters():
    assert cons.least_bm_parameters(3) == (4, 0)
    assert cons.least_bm_parameters(4) == (1, 6)
    with pytest.raises(cons.ConstructionError):
        cons.least_bm_parameters(2)


def test_dual_onan_configurations():
    found = cons.dual_onan_search(cons.make_unital("buekenhout_metz", 3))
    assert found["found"]
    for q in (2, 3):
        res = cons.dual_onan_search(cons.make_unital("classical", q))
        assert res["found"] == [] and res["exhaustive"]


@pytest.mark.parametrize("q,n", [(5, 1), (13, 9), (17, 9)])
def test_quartic_square_count(q, n):
    res = cons.quartic_square_count(q)
    assert res["n_q"] == n
    # direct oracle over the integers mod q
    squares = {x * x % q for x in range(q)}
    assert res["n_q"] == sum((x**4 - 48 * x * x + 64) % q in squares for x in range(q))
