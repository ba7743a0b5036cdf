"""Redei matrices for L = K(cbrt(alpha)) and the solvability criteria they feed.

Three shapes of alpha are handled:

* tame (``S``): alpha = prod pi_i^a_i with every pi_i = 1 mod lambda^3;
* ``S'``: alpha = zeta^a prod pi_i^a_i, a != 0;
* ``S''``: alpha = zeta^c lambda^b prod pi_i^a_i, b != 0.

Rows are indexed by ramified primes, columns by genus characters, with
entry (i, j) = log (pi_i / pi_j)_3 off the diagonal.  Diagonal entries come
from the relation prod P_i^a_i = (cbrt(alpha)), which kills the row space
against the exponent vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .cubic_residue import euler_symbol, fast_symbol
from .eisenstein import (
    LAMBDA,
    ONE,
    ZETA3,
    EisensteinInt,
    IntLike,
    pow_mod,
    factor,
    is_one_mod_lambda3,
)
from .f3_linalg import F3Matrix, rank

TAME, S_PRIME, S_DOUBLE_PRIME = "S", "S'", "S''"


class SpecError(ValueError):
    """A field specification violates its invariants."""


@dataclass(frozen=True)
class FieldSpec:
    primes: tuple[EisensteinInt, ...]
    exponents: tuple[int, ...]
    zeta_exp: int = 0
    lambda_exp: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "primes", tuple(self.primes))
        object.__setattr__(self, "exponents", tuple(int(a) for a in self.exponents))
        n = len(self.primes)
        if n < 1 or len(self.exponents) != n:
            raise SpecError("need n >= 1 primes with one exponent each")
        if any(a not in (1, 2) for a in self.exponents):
            raise SpecError("exponents must be 1 or 2")
        if self.zeta_exp not in (0, 1, 2) or self.lambda_exp not in (0, 1, 2):
            raise SpecError("zeta_exp and lambda_exp must lie in {0, 1, 2}")
        for p in self.primes:
            if p.norm() % 3 != 1 or not is_one_mod_lambda3(p):
                raise SpecError(f"{p!r} is not a prime = 1 mod lambda^3")
        if len({p for p in self.primes}) != n:
            raise SpecError("primes must be pairwise distinct")

    @property
    def n(self) -> int:
        return len(self.primes)

    @property
    def kind(self) -> str:
        if self.lambda_exp:
            return S_DOUBLE_PRIME
        if self.zeta_exp:
            return S_PRIME
        return TAME

    @property
    def alpha(self) -> EisensteinInt:
        x = ZETA3**self.zeta_exp * LAMBDA**self.lambda_exp
        for p, a in zip(self.primes, self.exponents):
            x = x * p**a
        return x

    @property
    def disc_norm(self) -> int:
        prod = 1
        for p in self.primes:
            prod *= p.norm()
        return prod * prod * {TAME: 1, S_PRIME: 27, S_DOUBLE_PRIME: 81}[self.kind]

    def squared(self) -> "FieldSpec":
        """Spec of alpha^2 (same field), exponents reduced mod 3."""
        return FieldSpec(
            self.primes,
            tuple(2 * a % 3 for a in self.exponents),
            2 * self.zeta_exp % 3,
            2 * self.lambda_exp % 3,
        )


def spec_from_alpha(alpha: IntLike) -> FieldSpec:
    """Read a FieldSpec off alpha, reducing exponents mod 3 (cube factors drop out)."""
    alpha = EisensteinInt.coerce(alpha)
    f = factor(alpha)
    primes, exps, lam = [], [], 0
    for p, e in f.factors:
        if p == LAMBDA:
            lam = e % 3
        elif e % 3:
            primes.append(p)
            exps.append(e % 3)
    # UNITS[k] = (-1)^k zeta^(2k) and -1 is a cube
    zeta = (2 * f.unit.k) % 3
    return FieldSpec(tuple(primes), tuple(exps), zeta, lam)


@lru_cache(maxsize=1 << 16)
def prime_log(num: EisensteinInt, pi: EisensteinInt) -> int:
    """log (num/pi)_3 for coprime arguments; raises if they are not coprime."""
    s = fast_symbol(num, pi)
    if s.log is None:
        raise SpecError(f"{num!r} and {pi!r} are not coprime")
    return s.log


def _inv(a: int) -> int:
    return a % 3  # 1 -> 1, 2 -> 2


@dataclass(frozen=True)
class RedeiMatrix:
    """Redei matrix with the exponent vector of the class-group relation.

    ``kind`` is the spec kind.  Tame matrices are n x n; ``S'`` matrices are
    (n+1) x (n+1) with the lambda row last; ``S''`` matrices are (n+1) x n,
    rows pi_1..pi_n, lambda and one column per genus character.
    """

    matrix: F3Matrix
    exponent_vector: tuple[int, ...]
    kind: str
    n: int

    @property
    def extended(self) -> bool:
        return self.kind == S_PRIME

    @property
    def corner(self) -> Optional[int]:
        return self.matrix[self.n, self.n] if self.kind == S_PRIME else None

    @property
    def rank(self) -> int:
        return rank(self.matrix)


def _tame_block(spec: FieldSpec) -> list[list[int]]:
    n = spec.n
    ps, a = spec.primes, spec.exponents
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                m[i][j] = prime_log(ps[i], ps[j])
    for i in range(n):
        # column i is the character of pi_i; sum_j a_j m[j][i] + extra = 0
        s = sum(a[j] * m[j][i] for j in range(n) if j != i)
        s += spec.zeta_exp * prime_log(ZETA3, ps[i]) + spec.lambda_exp * prime_log(LAMBDA, ps[i])
        m[i][i] = (-_inv(a[i]) * s) % 3
    return m


def redei_matrix(spec: FieldSpec) -> RedeiMatrix:
    """Tame Redei matrix: symmetric, with the exponent vector in its kernel."""
    if spec.kind != TAME:
        raise SpecError("redei_matrix needs a tame spec; use extended_redei_matrix")
    m = F3Matrix(_tame_block(spec))
    rm = RedeiMatrix(m, spec.exponents, TAME, spec.n)
    if not m.is_symmetric():
        raise ArithmeticError(f"Redei matrix not symmetric for {spec}: reciprocity violated?")
    return rm


def extended_redei_matrix(spec: FieldSpec) -> RedeiMatrix:
    """Redei matrix for lambda-ramified alpha.

    ``S'``: the tame block (diagonal absorbing zeta^a), a lambda row of
    log (lambda/pi_j)_3, a zero column above the corner, and corner
    -a^-1 sum_i a_i log (lambda/pi_i)_3.

    ``S''``: lambda is one more ramified prime; its row holds
    log (lambda/pi_j)_3 and the diagonal relation includes lambda^b.
    """
    n = spec.n
    lam_row = [prime_log(LAMBDA, p) for p in spec.primes]
    block = _tame_block(spec)
    if spec.kind == S_PRIME:
        a = spec.zeta_exp
        corner = (-_inv(a) * sum(ai * li for ai, li in zip(spec.exponents, lam_row))) % 3
        rows = [r + [0] for r in block] + [lam_row + [corner]]
        # lambda does not enter the relation prod P_i^a_i = (cbrt(alpha))
        return RedeiMatrix(F3Matrix(rows), spec.exponents + (0,), S_PRIME, n)
    if spec.kind == S_DOUBLE_PRIME:
        rows = block + [lam_row]
        return RedeiMatrix(F3Matrix(rows), spec.exponents + (spec.lambda_exp,), S_DOUBLE_PRIME, n)
    raise SpecError("extended_redei_matrix needs a lambda-ramified spec")


def build_matrix(spec: FieldSpec) -> RedeiMatrix:
    return redei_matrix(spec) if spec.kind == TAME else extended_redei_matrix(spec)


def target_rank(rm: RedeiMatrix) -> int:
    """Largest rank the matrix can have given its forced relation."""
    return rm.n - 1 if rm.kind == TAME else rm.n


def positive_criterion(rm: RedeiMatrix) -> bool:
    """Full rank, hence a unit of norm zeta_3 exists."""
    if rm.kind == S_PRIME:
        block = F3Matrix(rm.matrix.entries[: rm.n, : rm.n])
        return rank(block) == rm.n - 1 and rm.corner != 0
    return rm.rank == target_rank(rm)


def redei_corank(rm: RedeiMatrix) -> int:
    """Deficiency from the positive criterion; zero exactly when it holds.

    For ``S'`` the block and the corner are counted separately: the lambda
    row can lift the rank to n even when the corner vanishes.
    """
    if rm.kind == S_PRIME:
        block = F3Matrix(rm.matrix.entries[: rm.n, : rm.n])
        return (rm.n - 1 - rank(block)) + (rm.corner == 0)
    return target_rank(rm) - rm.rank


def negative_criterion(corank: int, cl_dim: int) -> bool:
    """Insoluble when the kernel is bigger than dim (sigma-1)Cl/(sigma-1)^2."""
    return corank > cl_dim


# -- independent oracle for the diagonal -------------------------------------------


def direct_diagonal(spec: FieldSpec, i: int) -> int:
    """a_i^-1 log ((pi_i^a_i / alpha) / pi_i)_3 evaluated on the actual residue.

    pi_i^a_i / alpha is a unit at pi_i; its residue is computed as the inverse
    of alpha / pi_i^a_i modulo pi_i (Fermat in the residue field), and the
    symbol is taken with the Euler criterion.
    """
    pi = spec.primes[i]
    rest = ZETA3**spec.zeta_exp * LAMBDA**spec.lambda_exp
    for j, (p, a) in enumerate(zip(spec.primes, spec.exponents)):
        if j != i:
            rest = rest * p**a
    inv = pow_mod(rest, pi.norm() - 2, pi)
    if not pi.divides(inv * rest - ONE):
        raise ArithmeticError("modular inverse failed")
    s = euler_symbol(inv, pi)
    return (_inv(spec.exponents[i]) * s.log) % 3


def alpha_prime_is_one_mod_lambda4(spec: FieldSpec) -> bool:
    """alpha * zeta^-a = 1 mod lambda^4 (= mod 9)."""
    x = spec.alpha * ZETA3 ** ((3 - spec.zeta_exp) % 3)
    return (LAMBDA**4).divides(x - ONE)
