import itertools

import pytest
from hypothesis import given, strategies as st

from sosident.errors import BadModulus, DivisionByZero, NoImaginaryUnit
from sosident.gf import FieldElement, Modulus, default_modulus, ff_inv, sqrt_minus_one


def egcd_inverse(a, p):
    """Extended Euclid, written out independently of pow(a, -1, p)."""
    old_r, r = a, p
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    assert old_r == 1
    return old_s % p


def test_ff_inv_examples():
    m = Modulus(101)
    assert ff_inv(1, m) == 1
    assert egcd_inverse(2, 101) == 51
    assert ff_inv(2, m).value == 51
    with pytest.raises(DivisionByZero):
        ff_inv(0, m)
    with pytest.raises(ZeroDivisionError):
        FieldElement(0, m).inverse()


@pytest.mark.parametrize("p", [2, 3, 5, 7, 101, 65537])
def test_ff_inv_matches_euclid(p):
    for a in list(range(1, min(p, 200))):
        assert ff_inv(a, p).value == egcd_inverse(a, p)


@given(st.integers(min_value=1, max_value=100))
def test_double_inverse(a):
    m = Modulus(101)
    assert ff_inv(ff_inv(a, m), m) == a


def test_sqrt_minus_one():
    assert sqrt_minus_one(5).value == 2
    i = sqrt_minus_one(101)
    assert i.value in (10, 91)
    assert i * i == -1
    with pytest.raises(NoImaginaryUnit):
        sqrt_minus_one(7)
    for p in (13, 17, 29, 37, 41, 1009):
        i = sqrt_minus_one(p)
        assert (i.value ** 2 + 1) % p == 0


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_field_axioms_exhaustive(p):
    els = [FieldElement(v, p) for v in range(p)]
    zero, one = els[0], els[1]
    for a, b, c in itertools.product(els, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a in els:
        assert a + zero == a and a * one == a
        assert a + (-a) == zero
        if a:
            assert a * a.inverse() == one
            assert one / a == a.inverse()


def test_modulus_validation():
    with pytest.raises(BadModulus):
        Modulus(100)
    with pytest.raises(BadModulus):
        Modulus(2**31 + 11)
    m = Modulus(7)
    m.require_above(6)
    with pytest.raises(BadModulus):
        m.require_above(7)
    with pytest.raises(BadModulus):
        FieldElement(1, 5) + FieldElement(1, 7)


def test_default_modulus_env(monkeypatch):
    monkeypatch.delenv("SOSIDENT_MODULUS", raising=False)
    assert default_modulus().p == 101
    monkeypatch.setenv("SOSIDENT_MODULUS", "103")
    assert default_modulus().p == 103
    monkeypatch.setenv("SOSIDENT_MODULUS", "104")
    with pytest.raises(BadModulus):
        default_modulus()


def test_element_canonical():
    assert FieldElement(-1, 101).value == 100
    assert FieldElement(205, 101).value == 3
    assert int(FieldElement(3, 7) ** -1) == 5
