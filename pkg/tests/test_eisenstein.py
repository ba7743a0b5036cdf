from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from zeta3pell.eisenstein import (
    LAMBDA,
    ONE,
    UNITS,
    ZERO,
    ZETA3,
    EisensteinInt,
    Unit,
    canonical_associate,
    factor,
    gcd,
    is_admissible,
    is_one_mod_3,
    parse,
    primary2_assoc,
    primary3_assoc,
    split_prime,
)

E = EisensteinInt
ints = st.integers(-10**6, 10**6)
eis = st.builds(E, ints, ints)
nonzero = eis.filter(bool)


def test_ring_examples():
    assert ZETA3 * ZETA3 == E(-1, -1)
    assert LAMBDA.conj() == E(2, 1)
    assert E(-5, -3) * E(-2, 3) == E(19, 0)
    assert ZETA3**3 == ONE


def test_norm_examples():
    assert LAMBDA.norm() == 3
    assert ZERO.norm() == 0
    assert E(5, 3).norm() == 19


def test_divmod_examples():
    assert divmod(E(19), E(-5, -3)) == (E(-2, 3), ZERO)
    x = E(7, -4)
    assert divmod(x, ONE) == (x, ZERO)
    q, r = divmod(ONE, LAMBDA)
    assert r.norm() < 3 and q * LAMBDA + r == ONE


def test_gcd_examples():
    x = E(12, 5)
    assert gcd(x, 0) == canonical_associate(x)
    assert gcd(E(-5, -3), E(-2, 3)).is_unit()
    assert gcd(E(19), E(-5, -3)) == canonical_associate(E(-5, -3))
    with pytest.raises(ValueError):
        gcd(0, 0)


def test_primary_examples():
    assert primary2_assoc(E(3, 1)) == E(-2, -3)
    assert primary2_assoc(ONE) == ONE
    with pytest.raises(ValueError):
        primary2_assoc(LAMBDA)
    assert primary3_assoc(E(5, 3)) == E(-5, -3)
    assert primary3_assoc(E(1, 3)) is None
    assert primary3_assoc(ONE) == ONE


def test_factor_examples():
    f = factor(3)
    assert f.unit == Unit(1) and UNITS[1] == E(1, 1)  # -zeta^2
    assert f.factors == ((LAMBDA, 2),)
    f = factor(19)
    assert [p for p, _ in f.factors] == [E(-5, -3), E(-2, 3)] and f.expand() == E(19)
    assert factor(LAMBDA).factors == ((LAMBDA, 1),) and factor(LAMBDA).unit == Unit(0)


def test_admissible_examples():
    p19, p7, p37 = split_prime(19)[0], split_prime(7)[0], split_prime(37)[1]
    assert is_admissible(p19) and is_admissible(p37)
    assert not is_admissible(p7)
    assert not is_admissible(E(-17))  # inert primes are never admissible


def test_units_are_sixth_roots():
    assert len(set(UNITS)) == 6
    assert all(u.norm() == 1 for u in UNITS)
    assert UNITS[3] == E(-1)


def test_parse():
    assert parse("3,-2") == E(3, -2) and parse("7") == E(7)
    with pytest.raises(ValueError):
        parse("1,2,3")
    with pytest.raises(ValueError):
        parse("a,b")


@given(eis, eis, eis)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x * y).conj() == x.conj() * y.conj()


@given(eis, nonzero)
def test_divmod_contract(x, y):
    q, r = divmod(x, y)
    assert q * y + r == x
    assert 4 * r.norm() <= 3 * y.norm()  # coordinatewise rounding: N(r/y) <= 3/4


@given(nonzero, nonzero)
def test_gcd_divides(x, y):
    g = gcd(x, y)
    assert g.divides(x) and g.divides(y)
    assert canonical_associate(g) == g


@given(nonzero.filter(lambda x: x.norm() < 10**10))
def test_factor_roundtrip(x):
    f = factor(x)
    assert f.expand() == x
    for p, e in f.factors:
        assert e >= 1 and (p == LAMBDA or is_one_mod_3(p))


@given(nonzero.filter(lambda x: not LAMBDA.divides(x)))
def test_primary2_unique(x):
    p = primary2_assoc(x)
    assert is_one_mod_3(p)
    assert sum(is_one_mod_3(u * x) for u in UNITS) == 1


def test_pickle_roundtrip():
    import pickle

    x = E(-5, 3)
    assert pickle.loads(pickle.dumps(x)) == x
