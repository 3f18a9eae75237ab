from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polarzoo import constructions as cons
from polarzoo import graphs as gr
from polarzoo import schemes as sch
from polarzoo.polar import polar_space


@pytest.fixture(scope="module")
def w32():
    S = sch.scheme_from_polar(polar_space("W", 2, 2))
    return S, sch.minimal_idempotents(S)


@pytest.mark.parametrize("fam,d,q", [("W", 2, 2), ("W", 2, 3), ("Q", 2, 3), ("Q+", 2, 2), ("Q", 3, 2)])
def test_distance_spectra_against_numpy(fam, d, q):
    ps = polar_space(fam, d, q)
    meets = gr.meet_sizes(gr.generator_incidence(ps))
    for i in range(1, d + 1):
        r = sch.certify_distance_spectrum(ps, i, meets)
        assert r["ok"]
        ev = np.rint(np.linalg.eigvalsh(r["graph"].adj.astype(float))).astype(int)
        want = {e: m for e, m in zip(r["eigenvalues"], r["multiplicities"]) if m}
        assert Counter(ev.tolist()) == want


def test_q63_spectrum():
    r = sch.certify_distance_spectrum(polar_space("Q", 3, 3), 2)
    assert r["ok"] and r["largest"] == 351 and r["smallest"] == -9


def test_smallest_eigenvalue_position():
    r = sch.certify_distance_spectrum(polar_space("Q", 3, 2), 1)
    assert r["smallest_is_last"]
    r2 = sch.certify_distance_spectrum(polar_space("Q", 3, 2), 2)
    assert not r2["smallest_is_last"]


def test_scheme_axioms_and_eigenmatrix(w32):
    S, idem = w32
    assert S.info["ok"] and S.valencies() == [1, 6, 8]
    assert idem.checks["ok"]
    assert idem.P == [[1, 6, 8], [1, 1, -2], [1, -3, 2]]
    assert idem.multiplicities == [1, 9, 5]


def test_krein_conditions(w32):
    S, idem = w32
    K = sch.krein_parameters(idem, S.n)
    assert all(x >= 0 for x in K.ravel())
    # q^0_jj is the multiplicity of stratum j
    assert [K[j, j, 0] for j in range(3)] == idem.multiplicities


def test_idempotent_entries_are_exact(w32):
    S, idem = w32
    E1 = idem.E(1)
    assert sum(E1[i, i] for i in range(S.n)) == idem.multiplicities[1]


@given(st.lists(st.booleans(), min_size=15, max_size=15))
def test_design_iff_regular(w32, bits):
    S, idem = w32
    members = [i for i, b in enumerate(bits) if b]
    if not members:
        return
    res = sch.design_regular_agreement(S, idem, members, 1)
    assert res["agree"]


def test_spread_is_design(w32):
    S, idem = w32
    # greedy pairwise disjoint lines
    gens = S.gens
    chosen = []
    for i, row in enumerate(gens):
        if all(not set(row) & set(gens[j]) for j in chosen):
            chosen.append(i)
    res = sch.design_regular_agreement(S, idem, chosen, 1)
    assert res["agree"]
    assert res["regular"] == (len(chosen) == 5)


def test_pencil_is_antidesign(w32):
    S, idem = w32
    w = sch.antidesign_witness(S, idem, [0], 1)
    assert len(w["members"]) == 3 and w["antidesign"]


def test_strata_order(w32):
    S, idem = w32
    assert all(sch.strata_order_check(S, idem).values())


def test_hemisystem_meets_pencil_in_two():
    ps = polar_space("H", 2, 9)
    S = sch.scheme_from_polar(ps)
    idem = sch.minimal_idempotents(S)
    hemi = cons.search_hemisystem(ps)["indices"]
    pencil = sch.generators_through(S, [0])
    oi = sch.orthogonal_intersection(hemi, pencil, S.n)
    assert oi["equal"] and oi["intersection"] == 2
    assert sch.is_k_design(idem, sch.characteristic_vector(S.n, hemi), 1)


def test_chain_lift_up():
    eh = cons.elliptic_hemisystem(3)
    up = sch.chain_lift(eh["space"], eh["system"], "up", 1)
    assert up["space"].label == "Q(6,3)"
    assert up["certificate"].ok and up["certificate"]["m"] == 20 and len(up["members"]) == 560


def test_chain_restrict_down():
    o = cons.q63_one_system()
    dn = sch.chain_lift(o["space"], o["planes"], "down", 2)
    assert dn["space"].label == "Q+(5,3)"
    assert dn["certificate"].ok and dn["certificate"]["m"] == 8 and len(dn["members"]) == 80
    with pytest.raises(sch.SchemeError):
        sch.chain_lift(o["space"], o["planes"], "down", 1)
    with pytest.raises(sch.SchemeError):
        sch.chain_lift(o["space"], o["planes"], "sideways", 1)


def test_hyperbolic_switch():
    ps = polar_space("Q+", 3, 2)
    latin, greek = sch.latin_greek(ps)
    assert len(latin) == len(greek) == 15
    sw = sch.hyperbolic_switch(ps, [0])
    assert len(sw) == 15
    c1 = cons.verify_regular_system(ps, sw, 1)
    c2 = cons.verify_regular_system(ps, sw, 2)
    assert c1.ok and c1["m"] == 3
    # lines missing the point but inside a removed plane lose their only cover
    assert c2.verdict == "refuted"
    lines = ps.level_point_ids(2)
    cover = Counter(sum(set(l) <= set(g) for g in sw.tolist()) for l in lines.tolist())
    assert set(cover) == {0, 1, 2}
    assert cons.verify_regular_system(ps, latin, 2)["m"] == 1


def test_latin_greek_needs_hyperbolic():
    with pytest.raises(sch.SchemeError):
        sch.latin_greek(polar_space("Q", 2, 3))


def test_int_matmul_large_entries():
    X = np.full((2, 2), 2**40, dtype=np.int64)
    out = sch.int_matmul(X, X)
    assert int(out[0, 0]) == 2 * 2**80
