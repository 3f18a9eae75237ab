import numpy as np
import pytest
from hypothesis import given, strategies as st

from polarzoo import switching as sw
from polarzoo.graphs import Graph, nu_graph


@pytest.fixture(scope="module")
def nu52():
    return nu_graph(5, 2)


def test_line_switch_q2(nu52):
    Gs, cfg, G = sw.build_switched_nu(4, 2, "line", base=nu52)
    assert cfg.info["sizes"] == {"A": 24, "A1": 8, "A2": 8}
    assert cfg.expected_sizes() == {"A": 24, "A1": 8}
    assert cfg.info["switched_is_A1_A2"] and cfg.info["in_P_perp"]
    cert = sw.certify_cospectral_nonisomorphic(G, Gs, cfg)
    assert cert.ok and cert["params_G"] == cert["params_H"] == [176, 135, 102, 108]
    assert cert["census_G"] != cert["census_H"]


def test_double_switch_restores(nu52):
    Gs, cfg, G = sw.build_switched_nu(4, 2, "line", base=nu52)
    back, S = sw.wqh_switch(Gs, cfg.l1, cfg.l2)
    assert back.same_edges(G) and len(S) == 16


def test_pencil_q2_is_trivial(nu52):
    _, cfg, _ = sw.build_switched_nu(4, 2, "pencil", base=nu52)
    assert cfg.info["trivial"] and cfg.info["sizes"] == {"A": 36, "A1": 0, "A2": 0}


def test_bad_arguments(nu52):
    with pytest.raises(sw.SwitchingError):
        sw.build_switched_nu(3, 2, "line")
    with pytest.raises(sw.SwitchingError):
        sw.switching_configuration(nu52, 4, 2, "plane")


def test_hypothesis_violation_is_reported():
    A = np.zeros((5, 5), dtype=bool)
    for u, v in [(0, 4), (1, 4), (2, 4)]:
        A[u, v] = A[v, u] = True
    with pytest.raises(sw.SwitchingError, match="vertex 4"):
        sw.wqh_switch(Graph(A), [0, 1], [2, 3])


def test_pencil_switch_q3():
    Gs, cfg, G = sw.build_switched_nu(4, 3, "pencil")
    assert cfg.info["sizes"] == {"A": 144, "A1": 144, "A2": 144} and cfg.info["sizes_ok"]
    cert = sw.certify_cospectral_nonisomorphic(G, Gs, cfg)
    assert cert.ok and cert["params_H"] == [4941, 2240, 1024, 1008]


@st.composite
def switchable(draw):
    m = draw(st.integers(1, 3))
    rest = draw(st.integers(1, 6))
    n = 2 * m + rest
    A = np.zeros((n, n), dtype=bool)
    for x in range(2 * m, n):
        kind = draw(st.sampled_from(["first", "second", "none", "both"]))
        cols = {"first": range(m), "second": range(m, 2 * m), "none": (), "both": range(2 * m)}[kind]
        for c in cols:
            A[x, c] = A[c, x] = True
        for y in range(2 * m, x):
            if draw(st.booleans()):
                A[x, y] = A[y, x] = True
    return Graph(A), list(range(m)), list(range(m, 2 * m))


@given(switchable())
def test_switch_preserves_spectrum(case):
    G, l1, l2 = case
    H, _ = sw.wqh_switch(G, l1, l2)
    e1 = np.linalg.eigvalsh(G.adj.astype(float))
    e2 = np.linalg.eigvalsh(H.adj.astype(float))
    assert np.allclose(e1, e2, atol=1e-8)
