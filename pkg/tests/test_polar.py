import numpy as np
import pytest
from hypothesis import given, strategies as st

from polarzoo.polar import FormError, from_dimension, parse_descriptor, polar_space, q4_spread, verify_polar_axioms
from polarzoo.projspace import Subspace


@pytest.mark.parametrize("desc,points,gens", [
    ("W:3:2", 15, 15), ("Q-:5:2", 27, 45), ("H:3:q2=4", 45, 27), ("H:3:q2=9", 280, 112),
    ("Q:4:3", 40, 40), ("Q+:3:3", 16, 8), ("H:2:q2=4", 9, 9), ("Q:6:3", 364, 1120),
])
def test_counts(desc, points, gens):
    ps = parse_descriptor(desc)
    assert len(ps.points) == points == ps.formula_count(1)
    assert len(ps.level(ps.d)) == gens == ps.formula_count(ps.d)


def test_ovoid_number_and_gq_order():
    ps = polar_space("H", 2, 9)
    assert ps.ovoid_number() == 28
    assert ps.gq_params() == (9, 3)
    assert polar_space("W", 2, 3).gq_params() == (3, 3)


def test_bad_descriptors():
    with pytest.raises(FormError):
        parse_descriptor("Q-:4:3")
    with pytest.raises(FormError):
        parse_descriptor("X:3:3")
    with pytest.raises(FormError):
        from_dimension("Q", 5, 3)


SPACES = ["W:3:3", "Q:4:3", "H:3:q2=4", "Q-:5:2", "Q+:3:3", "W:5:2", "H:2:q2=9"]


@given(st.sampled_from(SPACES), st.data())
def test_polarity_is_an_involution(desc, data):
    ps = parse_descriptor(desc)
    F = ps.F
    k = data.draw(st.integers(1, ps.n + 1))
    rows = np.array([[data.draw(st.integers(0, F.q - 1)) for _ in range(ps.n + 1)] for _ in range(k)])
    S = Subspace(F, ps.n, rows)
    P = ps.perp(S)
    assert S.vdim + P.vdim == ps.n + 1
    assert ps.perp(P) == S


@given(st.sampled_from(SPACES), st.data())
def test_orthogonality_is_symmetric(desc, data):
    ps = parse_descriptor(desc)
    i = data.draw(st.integers(0, len(ps.points) - 1))
    j = data.draw(st.integers(0, len(ps.points) - 1))
    assert ps.orth[i, j] == ps.orth[j, i]


@pytest.mark.parametrize("desc", ["W:3:2", "W:3:3", "Q:4:3", "Q-:5:2", "Q+:3:2", "H:3:q2=4", "H:4:q2=4"])
def test_buekenhout_shult_axioms(desc):
    cert = verify_polar_axioms(parse_descriptor(desc))
    assert cert.ok, cert.data


def test_generators_are_totally_isotropic():
    ps = parse_descriptor("Q-:5:3")
    for row in ps.level_point_ids(2)[:50]:
        R = ps.points[row]
        assert (ps.form.beta(R, R) == 0).all()


@pytest.mark.parametrize("q,exists", [(2, True), (3, False), (4, True)])
def test_spreads_of_parabolic_quadric(q, exists):
    res = q4_spread(q)
    assert res["exists"] == exists
    if exists:
        assert len(res["spread"]) == q * q + 1
