import numpy as np
import pytest
from hypothesis import given, strategies as st

from polarzoo import linalg
from polarzoo.gf import field_of_order
from polarzoo.projspace import (
    ProjectiveSpace, Subspace, enumerate_point_array, enumerate_subspace_list, field_reduction,
    gaussian_binomial, group_order, is_spread, klein_inverse, klein_map, klein_orthogonal,
    lines_intersect, meet, span, theta,
)


@pytest.mark.parametrize("n,q", [(1, 2), (2, 3), (3, 2), (3, 4), (4, 3), (2, 9)])
def test_point_count_matches_enumeration(n, q):
    assert len(enumerate_point_array(field_of_order(q), n)) == theta(n, q)


@pytest.mark.parametrize("n,k,q", [(3, 1, 2), (3, 1, 3), (4, 2, 2), (5, 2, 2), (3, 2, 4)])
def test_gaussian_binomial_counts_subspaces(n, k, q):
    assert len(enumerate_subspace_list(field_of_order(q), n, k)) == gaussian_binomial(n + 1, k + 1, q)


def test_gaussian_binomial_edges():
    assert gaussian_binomial(4, 0, 3) == 1
    assert gaussian_binomial(4, 5, 3) == 0
    assert gaussian_binomial(4, 2, 2) == 35


@pytest.mark.parametrize("family,r,q,order", [
    ("PSL", 2, 7, 168), ("PGL", 2, 5, 120), ("PSL", 3, 4, 20160),
    ("PSp", 4, 3, 25920), ("PSU", 4, 2, 25920), ("PSp", 4, 2, 720), ("PSU", 3, 3, 6048),
])
def test_known_group_orders(family, r, q, order):
    assert group_order(family, r, q).order == order


@st.composite
def subspace(draw, n=4, q_choices=(2, 3, 4, 5)):
    q = draw(st.sampled_from(q_choices))
    F = field_of_order(q)
    k = draw(st.integers(1, n + 1))
    rows = [[draw(st.integers(0, q - 1)) for _ in range(n + 1)] for _ in range(k)]
    return F, Subspace(F, n, np.array(rows))


@given(st.data())
def test_grassmann_dimension_formula(data):
    F, A = data.draw(subspace())
    rows = [[data.draw(st.integers(0, F.q - 1)) for _ in range(5)] for _ in range(data.draw(st.integers(1, 5)))]
    B = Subspace(F, 4, np.array(rows))
    assert span(A, B).vdim + meet(A, B).vdim == A.vdim + B.vdim


@given(st.data())
def test_subspace_point_count(data):
    F, A = data.draw(subspace(n=3))
    assert len(A.points()) == (theta(A.vdim - 1, F.q) if A.vdim else 0)


def _random_line(data, F):
    pts = enumerate_point_array(F, 3)
    i = data.draw(st.integers(0, len(pts) - 1))
    j = data.draw(st.integers(0, len(pts) - 1).filter(lambda t: t != i))
    return Subspace(F, 3, pts[[i, j]])


@given(st.sampled_from([2, 3, 4, 5]), st.data())
def test_klein_map_inverts_and_detects_meets(q, data):
    F = field_of_order(q)
    L, M = _random_line(data, F), _random_line(data, F)
    assert klein_inverse(F, klein_map(L).coords) == L
    assert lines_intersect(L, M) == klein_orthogonal(F, klein_map(L), klein_map(M))


@pytest.mark.parametrize("r,n,q", [(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2)])
def test_field_reduction_gives_a_spread(r, n, q):
    fr = field_reduction(r, n, q)
    big = ProjectiveSpace(r - 1, fr.big)
    elems = [fr.point_image(p) for p in big.points]
    res = is_spread(elems, ProjectiveSpace(r * n - 1, fr.small))
    assert res["partition"]
    assert res["size"] == theta(r - 1, q**n) == (q ** (r * n) - 1) // (q**n - 1)
    assert {e.vdim for e in elems} == {n}


def test_rank_of_identity():
    F = field_of_order(7)
    assert linalg.rank(F, np.eye(4, dtype=np.int64)) == 4
