from __future__ import annotations

import random

import pytest

from zeta3pell.census import enumerate_admissible_primes
from zeta3pell.cubic_residue import euler_symbol
from zeta3pell.eisenstein import LAMBDA, ZETA3, EisensteinInt
from zeta3pell.f3_linalg import F3Matrix
from zeta3pell.redei import (
    S_DOUBLE_PRIME,
    S_PRIME,
    TAME,
    FieldSpec,
    RedeiMatrix,
    SpecError,
    alpha_prime_is_one_mod_lambda4,
    build_matrix,
    direct_diagonal,
    extended_redei_matrix,
    negative_criterion,
    positive_criterion,
    redei_corank,
    redei_matrix,
    spec_from_alpha,
)

E = EisensteinInt
PI, PIBAR = E(-5, -3), E(-2, 3)  # the primes over 19
PRIMES = enumerate_admissible_primes(3000)


def random_spec(r: random.Random, kind: str = TAME, max_n: int = 5) -> FieldSpec:
    n = r.randint(1, max_n)
    ps = tuple(sorted(r.sample(PRIMES, n), key=EisensteinInt.sort_key))
    ex = (1,) + tuple(r.choice((1, 2)) for _ in range(n - 1))
    z = r.choice((1, 2)) if kind == S_PRIME else r.choice((0, 1, 2)) if kind == S_DOUBLE_PRIME else 0
    l = r.choice((1, 2)) if kind == S_DOUBLE_PRIME else 0
    return FieldSpec(ps, ex, z, l)


def test_spec_invariants():
    with pytest.raises(SpecError):
        FieldSpec((E(3, 1),), (1,))  # norm 7, not 1 mod lambda^3
    with pytest.raises(SpecError):
        FieldSpec((PI, PI), (1, 1))
    with pytest.raises(SpecError):
        FieldSpec((PI,), (3,))
    with pytest.raises(SpecError):
        FieldSpec((), ())
    s = FieldSpec((PI, PIBAR), (1, 1))
    assert s.alpha == E(19) and s.disc_norm == 361**2 and s.kind == TAME
    assert FieldSpec((PI,), (1,), 1).disc_norm == 361 * 27
    assert FieldSpec((PI,), (1,), 0, 2).disc_norm == 361 * 81


def test_spec_from_alpha():
    assert spec_from_alpha(E(19)) == FieldSpec((PI, PIBAR), (1, 1))
    s = spec_from_alpha(ZETA3 * LAMBDA**2 * PI**4)
    assert (s.primes, s.exponents, s.zeta_exp, s.lambda_exp) == ((PI,), (1,), 1, 2)


def test_single_prime_tame():
    rm = redei_matrix(FieldSpec((PI,), (1,)))
    assert rm.matrix == F3Matrix([[0]])
    assert positive_criterion(rm) and redei_corank(rm) == 0


def test_alpha_19():
    s = euler_symbol(PI, PIBAR).log
    rm = redei_matrix(spec_from_alpha(E(19)))
    assert rm.matrix == F3Matrix([[-s, s], [s, -s]])
    assert s == 0  # frozen: 19 is the rank-deficient case
    assert not positive_criterion(rm) and redei_corank(rm) == 1


def test_positive_n2_iff_symbol_nonzero():
    r = random.Random(11)
    for _ in range(200):
        a, b = sorted(r.sample(PRIMES, 2), key=EisensteinInt.sort_key)
        for e in (1, 2):
            rm = redei_matrix(FieldSpec((a, b), (1, e)))
            assert positive_criterion(rm) == (euler_symbol(a, b).log != 0)


def test_zero_matrix_criteria():
    rm = RedeiMatrix(F3Matrix.zeros(3, 3), (1, 1, 1), TAME, 3)
    assert not positive_criterion(rm) and redei_corank(rm) == 2


def test_negative_criterion_examples():
    assert negative_criterion(1, 0)
    assert not negative_criterion(0, 5)
    assert not negative_criterion(2, 2)


def test_tame_invariants_and_diagonal():
    r = random.Random(5)
    for _ in range(100):
        spec = random_spec(r)
        rm = redei_matrix(spec)
        a = spec.exponents
        assert rm.matrix.is_symmetric()
        assert not any(rm.matrix.matvec(a)) and not any(rm.matrix.vecmat(a))
        for i in range(spec.n):
            assert direct_diagonal(spec, i) == rm.matrix[i, i]


def test_doubling_invariance():
    r = random.Random(6)
    for kind in (TAME, S_PRIME, S_DOUBLE_PRIME):
        for _ in range(40):
            spec = random_spec(r, kind)
            assert build_matrix(spec).rank == build_matrix(spec.squared()).rank


def test_s_prime_structure():
    r = random.Random(7)
    for _ in range(150):
        spec = random_spec(r, S_PRIME, 4)
        rm = extended_redei_matrix(spec)
        n = spec.n
        assert rm.matrix.rows == rm.matrix.cols == n + 1
        assert all(rm.matrix[i, n] == 0 for i in range(n))
        assert (rm.corner == 0) == alpha_prime_is_one_mod_lambda4(spec)
        for i in range(n):
            assert direct_diagonal(spec, i) == rm.matrix[i, i]
        assert not any(rm.matrix.vecmat(rm.exponent_vector))
        assert positive_criterion(rm) == (redei_corank(rm) == 0)


def test_s_prime_single_prime():
    spec = FieldSpec((PI,), (1,), 1)
    rm = extended_redei_matrix(spec)
    lam = euler_symbol(LAMBDA, PI).log
    assert rm.matrix.tolist() == [[rm.matrix[0, 0], 0], [lam, (-lam) % 3]]


def test_s_double_prime_structure():
    r = random.Random(8)
    for _ in range(100):
        spec = random_spec(r, S_DOUBLE_PRIME, 4)
        rm = extended_redei_matrix(spec)
        assert (rm.matrix.rows, rm.matrix.cols) == (spec.n + 1, spec.n)
        assert not any(rm.matrix.vecmat(rm.exponent_vector))
        for i in range(spec.n):
            assert direct_diagonal(spec, i) == rm.matrix[i, i]
        assert redei_corank(rm) >= 0


def test_wrong_kind_errors():
    with pytest.raises(SpecError):
        redei_matrix(FieldSpec((PI,), (1,), 1))
    with pytest.raises(SpecError):
        extended_redei_matrix(FieldSpec((PI,), (1,)))
