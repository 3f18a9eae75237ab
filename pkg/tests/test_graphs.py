from collections import Counter
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polarzoo import graphs as gr
from polarzoo.polar import polar_space
from polarzoo.projspace import BudgetExceeded


def graph_from_edges(n, edges):
    A = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        A[u, v] = A[v, u] = True
    return gr.Graph(A)


def petersen():
    pairs = list(combinations(range(5), 2))
    return graph_from_edges(10, [(i, j) for i, j in combinations(range(10), 2)
                                 if not set(pairs[i]) & set(pairs[j])])


def cycle(n):
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return graph_from_edges(n, combinations(range(n), 2))


def naive_srg(G):
    A = G.adj
    n = G.n
    deg = {int(A[u].sum()) for u in range(n)}
    lam = {int((A[u] & A[v]).sum()) for u, v in combinations(range(n), 2) if A[u, v]}
    mu = {int((A[u] & A[v]).sum()) for u, v in combinations(range(n), 2) if not A[u, v]}
    if len(deg) == len(lam) == len(mu) == 1:
        return (n, deg.pop(), lam.pop(), mu.pop())
    return None


def test_petersen_is_srg():
    G = petersen()
    res = gr.srg_check(G)
    assert res.params.as_tuple() == naive_srg(G) == (10, 3, 0, 1)
    cert = gr.srg_certificate(G, expected=(10, 3, 0, 1))
    assert cert.ok and cert["complement_params"] == [10, 6, 3, 4]


def test_irregular_graph_gives_degree_counterexample():
    G = graph_from_edges(4, [(0, 1), (1, 2), (2, 3)])
    res = gr.srg_check(G)
    assert not res.ok and res.counterexample[0] == "degree"


def test_complete_graph_is_degenerate():
    res = gr.srg_check(complete(5))
    assert not res.ok and "complete" in res.degenerate


def test_cycle_six_is_not_srg():
    res = gr.srg_check(cycle(6))
    assert not res.ok and res.counterexample[0] in {"lambda", "mu"}
    assert naive_srg(cycle(6)) is None


@pytest.mark.parametrize("params", [(10, 3, 0, 1), (16, 5, 0, 2), (27, 10, 1, 5), (40, 12, 2, 4), (45, 12, 3, 3)])
def test_complement_law_on_parameters(params):
    p = gr.SrgParams(*params)
    assert p.identity_holds() and p.complement().identity_holds()
    assert p.complement().complement() == p
    f, g = p.multiplicities()
    r, s = p.eigenvalues()
    assert 1 + f + g == p.v and p.k + f * r + g * s == 0


def test_spectrum_certificate_matches_numpy():
    G = petersen()
    spectrum = gr.spectrum_certify(G, [3, 1, -2])
    assert spectrum.ok and spectrum.multiplicities == [1, 5, 4]
    ev = np.rint(np.linalg.eigvalsh(G.adj.astype(float))).astype(int)
    assert Counter(ev.tolist()) == {3: 1, 1: 5, -2: 4}
    assert gr.hoffman_bound(G, spectrum) == Fraction(4)


def test_spectrum_rejects_incomplete_claim():
    spectrum = gr.spectrum_certify(petersen(), [3, 1])
    assert not spectrum.ok
    with pytest.raises(gr.GraphError):
        gr.hoffman_bound(petersen(), spectrum)


def test_max_clique_and_coclique():
    G = petersen()
    assert gr.max_clique(G.adj)["size"] == 2
    assert gr.coclique_search(G, 4)["status"] == "found"
    assert gr.coclique_search(G, 5)["status"] == "exhausted"
    assert gr.max_clique(complete(4).adj)["size"] == 4


def naive_maximal_cliques(G):
    out = []
    n = G.n
    for r in range(1, n + 1):
        for S in combinations(range(n), r):
            if all(G.adj[u, v] for u, v in combinations(S, 2)):
                if not any(all(G.adj[w, u] for u in S) for w in range(n) if w not in S):
                    out.append(sorted(S))
    return out


@pytest.mark.parametrize("make", [petersen, lambda: cycle(7), lambda: complete(4)])
def test_maximal_cliques_against_enumeration(make):
    G = make()
    assert sorted(gr.maximal_cliques(G)) == sorted(naive_maximal_cliques(G))


def test_nu_small_is_complete_multipartite():
    G = gr.nu_graph(3, 2)
    assert gr.nu_parameters(3, 2) == (12, 9, 6, 9)
    assert gr.srg_check(G).params.as_tuple() == (12, 9, 6, 9)
    assert gr.clique_census(G)["histogram"] == {4: 81}
    assert gr.automorphism_count(G) == 31104


@pytest.mark.parametrize("n,q", [(3, 3), (4, 2)])
def test_nu_parameters(n, q):
    G = gr.nu_graph(n, q)
    assert gr.srg_check(G).params.as_tuple() == gr.nu_parameters(n, q)


def test_nu_3_9_clique_census():
    assert gr.clique_census(gr.nu_graph(3, 3))["histogram"] == {5: 1512, 9: 28}


@pytest.mark.parametrize("make,order", [(lambda: complete(5), 120), (lambda: cycle(5), 10), (petersen, 120),
                                        (lambda: cycle(8), 16)])
def test_automorphism_count(make, order):
    assert gr.automorphism_count(make()) == order


def test_automorphism_budget():
    with pytest.raises(BudgetExceeded):
        gr.automorphism_count(complete(50))


def test_triple_census_against_naive():
    G = gr.collinearity_graph(polar_space("W", 2, 2))
    naive = Counter()
    for u, v, w in combinations(range(G.n), 3):
        if G.adj[u, v] and G.adj[u, w] and G.adj[v, w]:
            naive[gr.triple_value(G, u, v, w)] += 1
    assert gr.triple_census(G) == naive


def test_collinearity_graph_of_gq():
    G = gr.collinearity_graph(polar_space("W", 2, 3))
    assert gr.srg_check(G).params.as_tuple() == (40, 12, 2, 4)


def test_dual_polar_graph_q52():
    ps = polar_space("Q", 2, 2)
    assert gr.srg_check(gr.dual_polar_graph(ps, 1)).params.as_tuple() == (15, 6, 1, 3)
    with pytest.raises(gr.GraphError):
        gr.dual_polar_graph(ps, 3)


def test_hermitian_fan_q2():
    fan = gr.hermitian_fan(2)
    assert len(fan["ovoids"]) == 5
    assert gr.verify_fan(fan["space"], fan["ovoids"]).ok


def test_hemisystem_line_graph_params_formula():
    assert gr.hemisystem_line_graph_params(3, 2) == (56, 10, 0, 2)


@given(st.integers(1, 14), st.data())
def test_export_round_trip(n, data):
    bits = data.draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    A = np.zeros((n, n), dtype=bool)
    A[np.tril_indices(n, -1)] = bits
    G = gr.Graph(A | A.T)
    assert gr.from_bitrows(gr.to_bitrows(G)).same_edges(G)
    assert gr.from_edge_list(gr.to_edge_list(G), n).same_edges(G)


def test_bitrow_format():
    assert gr.to_bitrows(complete(3)) == "3\n0\n1\n3\n"
