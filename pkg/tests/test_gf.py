import pytest
from hypothesis import given, strategies as st

from polarzoo.gf import GF, FieldError, field_laws, field_of_order, prime_powers

ORDERS = prime_powers(512)


def test_prime_powers_up_to_16():
    assert prime_powers(16) == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


@pytest.mark.parametrize("q", [2, 4, 8, 9, 25, 27, 49, 64])
def test_field_laws_full_triples(q):
    res = field_laws(field_of_order(q), full_triples=True)
    assert res["ok"], res


def test_field_laws_every_order_up_to_512():
    bad = [q for q in ORDERS if not field_laws(field_of_order(q))["ok"]]
    assert bad == []


def test_field_is_cached():
    assert GF(3, 2) is field_of_order(9)


def test_non_prime_power_rejected():
    with pytest.raises(Exception):
        field_of_order(12)
    with pytest.raises(FieldError):
        GF(4, 1)


@st.composite
def field_and_elements(draw, k=3):
    q = draw(st.sampled_from(ORDERS))
    F = field_of_order(q)
    return F, [draw(st.integers(0, q - 1)) for _ in range(k)]


@given(field_and_elements())
def test_ring_laws(fe):
    F, (a, b, c) = fe
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.sub(F.add(a, b), b) == a
    if b:
        assert F.div(F.mul(a, b), b) == a


@given(field_and_elements())
def test_frobenius_is_additive_and_multiplicative(fe):
    F, (a, b, _) = fe
    assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
    assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))
    assert F.frobenius(a, F.e) == a


@given(st.sampled_from([4, 8, 9, 16, 25, 27, 64, 81, 256]), st.data())
def test_norm_and_trace_land_in_subfield(q, data):
    F = field_of_order(q)
    for m in range(1, F.e + 1):
        if F.e % m:
            continue
        sub = set(F.subfield(m).tolist())
        a = data.draw(st.integers(0, q - 1))
        b = data.draw(st.integers(0, q - 1))
        assert F.norm(a, m) in sub and F.trace(a, m) in sub
        assert F.trace(F.add(a, b), m) == F.add(F.trace(a, m), F.trace(b, m))
        assert F.norm(F.mul(a, b), m) == F.mul(F.norm(a, m), F.norm(b, m))


@given(field_and_elements(1))
def test_square_roots(fe):
    F, (a,) = fe
    s = F.mul(a, a)
    assert F.is_square(s)
    r = F.sqrt(s)
    assert F.mul(r, r) == s


def test_subfield_sizes():
    F = field_of_order(64)
    assert [len(F.subfield(m)) for m in (1, 2, 3, 6)] == [2, 4, 8, 64]


def test_square_count_odd_field():
    F = field_of_order(25)
    assert sum(F.is_square(a) for a in range(1, 25)) == 12
