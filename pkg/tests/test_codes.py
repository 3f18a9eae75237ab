from collections import Counter
from itertools import combinations_with_replacement, product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polarzoo import codes, linalg
from polarzoo.constructions import search_hemisystem
from polarzoo.gf import field_of_order
from polarzoo.graphs import linear_representation_params
from polarzoo.polar import polar_space
from polarzoo.projspace import BudgetExceeded, enumerate_point_array


def naive_weights(points, p):
    """Weight distribution over a prime field by plain integer arithmetic."""
    k = len(points[0])
    out = Counter()
    for x in product(range(p), repeat=k):
        out[sum(sum(a * b for a, b in zip(x, pt)) % p != 0 for pt in points)] += 1
    return out


@pytest.fixture(scope="module")
def hemi_image():
    ps = polar_space("H", 2, 9)
    res = search_hemisystem(ps)
    S, _ = codes.klein_image(ps, res["system"])
    return ps, res, S


def test_simplex_code_has_one_weight():
    F = field_of_order(2)
    S = codes.projective_set(F, enumerate_point_array(F, 2))
    C = codes.code_from_set(S)
    cert = codes.two_weight_certify(C)
    assert cert["weights"] == [4] and cert.verdict == "refuted"
    assert cert["total_ok"] and cert["average_ok"]


def test_zero_message_has_weight_zero():
    F = field_of_order(3)
    C = codes.code_from_set(codes.projective_set(F, np.eye(3, dtype=np.int64)))
    assert not codes.encode(C, [0, 0, 0]).any()
    assert codes.weight_enumerator(C).counts[0] == 1


def test_rejections():
    F = field_of_order(3)
    with pytest.raises(codes.CodeError):
        codes.code_from_set(codes.projective_set(F, [[1, 0, 0], [0, 1, 0]]))
    with pytest.raises(codes.CodeError):
        codes.projective_set(F, [[1, 0, 0], [2, 0, 0]])
    C = codes.code_from_set(codes.projective_set(F, np.eye(3, dtype=np.int64)))
    with pytest.raises(BudgetExceeded):
        codes.weight_enumerator(C, budget=10)


def test_hemisystem_code(hemi_image):
    _, _, S = hemi_image
    C = codes.code_from_set(S)
    assert (C.n, C.k, C.F.q) == (56, 6, 3)
    cert = codes.two_weight_certify(C)
    assert cert.ok and cert["weights"] == [36, 45] and cert["min_distance"] == 36
    assert cert["total_ok"] and cert["average_ok"]
    assert codes.weight_section_identity(S, C)
    assert sorted(codes.hyperplane_counts(S)) == [11, 20]
    naive = naive_weights(S.points.tolist(), 3)
    assert {w: c for w, c in enumerate(codes.weight_enumerator(C).counts) if c} == dict(naive)


def test_hemisystem_bridge(hemi_image):
    _, _, S = hemi_image
    cert = codes.srg_code_bridge(S)
    assert cert.ok and all(cert["sides"].values())
    assert cert["params"] == [729, 112, 1, 20]
    assert tuple(cert["params"]) == linear_representation_params(3)


def test_bridge_on_non_two_intersection_set():
    F = field_of_order(3)
    pts = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 0]]
    S = codes.projective_set(F, pts)
    assert len(codes.hyperplane_counts(S)) > 2
    cert = codes.srg_code_bridge(S)
    assert cert.ok and not any(cert["sides"].values())


def test_klein_image_lies_on_a_quadric(hemi_image):
    ps, _, _ = hemi_image
    S, _ = codes.klein_image(ps, ps.level_point_ids(2))
    assert S.n == 112
    F = S.F
    monos = list(combinations_with_replacement(range(6), 2))
    M = np.array([[F.mul(int(p[i]), int(p[j])) for i, j in monos] for p in S.points], dtype=np.int64)
    assert len(linalg.nullspace(F, M, len(monos))) == 1


def test_klein_image_needs_hermitian():
    with pytest.raises(codes.CodeError):
        codes.klein_image(polar_space("W", 2, 3), [])


@st.composite
def point_sets(draw):
    p, k = draw(st.sampled_from([(2, 3), (2, 4), (3, 3)]))
    F = field_of_order(p)
    allp = enumerate_point_array(F, k - 1)
    ids = draw(st.lists(st.integers(0, len(allp) - 1), min_size=k, max_size=len(allp), unique=True))
    return F, allp[sorted(ids)]


@given(point_sets())
def test_weights_and_sections(case):
    F, pts = case
    S = codes.projective_set(F, pts)
    if linalg.rank(F, S.points) < S.k:
        return
    C = codes.code_from_set(S)
    wd = codes.weight_enumerator(C)
    assert {w: c for w, c in enumerate(wd.counts) if c} == dict(naive_weights(S.points.tolist(), F.q))
    assert codes.weight_section_identity(S, C)
    hc = codes.hyperplane_counts(S)
    assert sorted(wd.support) == sorted(S.n - c for c in hc)
