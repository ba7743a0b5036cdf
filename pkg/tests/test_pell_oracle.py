from __future__ import annotations

import json
import random

from hypothesis import given, settings, strategies as st

from zeta3pell.census import enumerate_admissible_primes
from zeta3pell.eisenstein import LAMBDA, ONE, ZETA3, EisensteinInt
from zeta3pell.pell_oracle import (
    CubicElt,
    ExhaustedBound,
    Found,
    OrderElt,
    conjugate_product_norm,
    element_norm,
    order_shift,
    relative_norm,
    search_norm_zeta3,
    verify_witness,
)

E = EisensteinInt
PI = E(-5, -3)
small = st.integers(-50, 50)
eis = st.builds(E, small, small)
elts = st.builds(CubicElt, eis, eis, eis)
alphas = eis.filter(bool)


def test_norm_examples():
    a = E(7, 2)
    assert relative_norm(CubicElt.of(1), a) == ONE
    assert relative_norm(CubicElt.of(0, 1), a) == a
    assert relative_norm(CubicElt.of(ZETA3), a) == ONE
    assert conjugate_product_norm(CubicElt.of(0, 0, 1), a) == a * a
    assert relative_norm(CubicElt.of(1, 1, 1), 1) == 0


def test_verify_examples():
    assert not verify_witness(CubicElt.of(1), PI)
    assert not verify_witness(CubicElt.of(ZETA3), PI)


@settings(max_examples=300, deadline=None)
@given(elts, alphas)
def test_norm_forms_agree(x, a):
    assert relative_norm(x, a) == conjugate_product_norm(x, a)


@settings(max_examples=200, deadline=None)
@given(elts, elts, alphas)
def test_norm_multiplicative(x, y, a):
    assert relative_norm(x.mul(y, a), a) == relative_norm(x, a) * relative_norm(y, a)


@settings(max_examples=200, deadline=None)
@given(elts)
def test_monogenic_order_norms_are_pm1_mod_lambda2(x):
    # why the search uses O_K[theta]: nothing in O_K[t] has norm zeta_3 when alpha = 1 mod lambda^3
    n = relative_norm(x, PI)
    if not LAMBDA.divides(n):
        assert (LAMBDA * LAMBDA).divides(n - 1) or (LAMBDA * LAMBDA).divides(n + 1)


def test_order_shift():
    assert order_shift(PI) == 1
    assert order_shift(-PI) == -1
    assert order_shift(ZETA3 * PI) == 0
    assert order_shift(LAMBDA * PI) == 0


@settings(max_examples=100, deadline=None)
@given(eis, eis, eis)
def test_order_square_and_norm(u, v, w):
    for alpha in (PI, E(19), ZETA3 * PI, LAMBDA * PI):
        x = OrderElt(u, v, w, order_shift(alpha))
        x2 = x.square(alpha)
        y = x.numerator()
        # lambda^k x^2 numerator = (numerator of x)^2, k = denominator exponent
        scale = LAMBDA ** x.denominator_exp
        lhs = x2.numerator()
        rhs = y.mul(y, alpha)
        assert CubicElt(lhs.u * scale, lhs.v * scale, lhs.w * scale) == rhs
        assert element_norm(x2, alpha) == element_norm(x, alpha) ** 2


def test_search_finds_witnesses_over_19_and_37():
    for alpha in enumerate_admissible_primes(40):
        out = search_norm_zeta3(alpha, 1)
        assert isinstance(out, Found)
        assert verify_witness(out.witness, alpha)
        assert element_norm(out.raw, alpha) == (ZETA3 if out.raw_norm == "zeta3" else ZETA3 * ZETA3)
        if out.raw_norm == "zeta3^2":
            assert out.witness == out.raw.square(alpha)


def test_witness_roundtrip_and_determinism():
    alpha = E(-5, -3) * E(7, 3)
    out = search_norm_zeta3(alpha, 1)
    assert isinstance(out, Found)
    again = OrderElt.from_json(json.loads(json.dumps(out.witness.to_json())), alpha)
    assert again == out.witness and verify_witness(again, alpha)
    assert search_norm_zeta3(alpha, 1) == out
    assert search_norm_zeta3(alpha, 1, workers=2) == out


def test_exhausted_is_reported():
    r = random.Random(3)
    ps = enumerate_admissible_primes(2000)
    outcomes = [search_norm_zeta3(r.choice(ps) * r.choice(ps[10:]), 1) for _ in range(6)]
    for out in outcomes:
        assert isinstance(out, (Found, ExhaustedBound))
        if isinstance(out, ExhaustedBound):
            assert out.bound == 1


def test_lambda_ramified_search_runs():
    for alpha in (ZETA3 * PI, LAMBDA * PI):
        out = search_norm_zeta3(alpha, 1)
        if isinstance(out, Found):
            assert verify_witness(out.witness, alpha)
