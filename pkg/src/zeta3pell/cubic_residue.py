"""Cubic residue symbol (v/w)_3 over Z[w].

Two independent routes are provided.  ``euler_symbol``/``general_symbol``
follow the definition: Euler's criterion at each prime factor of the
denominator.  ``fast_symbol`` never factors; it runs a Euclid-style descent
driven by cubic reciprocity and the supplementary laws for units and lambda.
The slow route is the permanent test oracle for the fast one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .eisenstein import (
    LAMBDA,
    ONE,
    UNITS,
    ZETA3,
    EisensteinInt,
    IntLike,
    factor,
    is_irreducible,
    is_one_mod_3,
    pow_mod,
)


@dataclass(frozen=True)
class CubicSymbol:
    """Value of a cubic residue symbol.

    ``log`` is j in {0, 1, 2} when the symbol equals w**j, and ``None`` when
    numerator and denominator share a prime (symbol value 0).
    """

    log: Optional[int]

    @property
    def not_coprime(self) -> bool:
        return self.log is None

    def __add__(self, other: "CubicSymbol") -> "CubicSymbol":
        if self.log is None or other.log is None:
            return NOT_COPRIME
        return LOGS[(self.log + other.log) % 3]

    def scale(self, k: int) -> "CubicSymbol":
        if self.log is None:
            return NOT_COPRIME
        return LOGS[(k * self.log) % 3]

    def __str__(self) -> str:
        if self.log is None:
            return "0"
        return ("1", "zeta3", "zeta3^2")[self.log]


NOT_COPRIME = CubicSymbol(None)
LOGS = (CubicSymbol(0), CubicSymbol(1), CubicSymbol(2))


class SymbolDomainError(ValueError):
    """Symbol requested for a denominator outside its domain."""


_ZETA_POWERS = (ONE, ZETA3, ZETA3 * ZETA3)


def euler_symbol(v: IntLike, pi: IntLike) -> CubicSymbol:
    """(v/pi)_3 for an irreducible pi not associate to lambda, by Euler's criterion."""
    v, pi = EisensteinInt.coerce(v), EisensteinInt.coerce(pi)
    n = pi.norm()
    if n == 3 or not is_irreducible(pi):
        raise SymbolDomainError(f"{pi!r} is not an irreducible prime coprime to 3")
    if pi.divides(v):
        return NOT_COPRIME
    r = pow_mod(v, (n - 1) // 3, pi)
    hits = [j for j, z in enumerate(_ZETA_POWERS) if pi.divides(r - z)]
    if len(hits) != 1:
        raise ArithmeticError(f"Euler residue of {v!r} mod {pi!r} is not a cube root of unity")
    return LOGS[hits[0]]


def general_symbol(v: IntLike, w: IntLike) -> CubicSymbol:
    """(v/w)_3 for w coprime to 3, multiplicatively over the factorization of w."""
    v, w = EisensteinInt.coerce(v), EisensteinInt.coerce(w)
    if not w or LAMBDA.divides(w):
        raise SymbolDomainError(f"denominator {w!r} is not coprime to 3")
    total = LOGS[0]
    for p, e in factor(w).factors:
        total = total + euler_symbol(v, p).scale(e)
        if total.not_coprime:
            break
    return total


# Supplementary laws for w = 1 mod 3, written w = 1 + 3(c + d*w):
#   (w/w)_3      has log (N(w) - 1)/3  mod 3
#   (lambda/w)_3 has log c             mod 3
# Both are additive in w modulo 3, so they hold for composite w as well.
def _log_zeta(w: EisensteinInt) -> int:
    return ((w.norm() - 1) // 3) % 3


def _log_lambda(w: EisensteinInt) -> int:
    return ((w.a - 1) // 3) % 3


def _unit_log_zeta(u_index: int) -> int:
    # UNITS[k] = (-w^2)^k = (-1)^k w^(2k); -1 is a cube
    return (2 * u_index) % 3


def _split_unit_lambda(x: EisensteinInt) -> tuple[int, int, EisensteinInt]:
    """x = UNITS[k] * lambda**e * y with y = 1 mod 3; returns (k, e, y)."""
    e = 0
    while LAMBDA.divides(x):
        x = x.exact_div(LAMBDA)
        e += 1
    for k, u in enumerate(UNITS):
        y = u * x
        if is_one_mod_3(y):
            # x = u^{-1} y
            return (-k) % 6, e, y
    raise AssertionError("unreachable: one associate is 1 mod 3")


def fast_symbol(v: IntLike, w: IntLike) -> CubicSymbol:
    """(v/w)_3 by reciprocity descent; agrees with ``general_symbol`` everywhere."""
    v, w = EisensteinInt.coerce(v), EisensteinInt.coerce(w)
    if not w or LAMBDA.divides(w):
        raise SymbolDomainError(f"denominator {w!r} is not coprime to 3")
    _, _, w = _split_unit_lambda(w)
    acc = 0
    while True:
        if w == ONE:
            return LOGS[acc % 3]
        v = v % w
        if not v:
            return NOT_COPRIME
        k, e, y = _split_unit_lambda(v)
        acc += _unit_log_zeta(k) * _log_zeta(w) + e * _log_lambda(w)
        if y == ONE:
            return LOGS[acc % 3]
        # both primary and coprime to 3: (y/w) = (w/y)
        v, w = w, y
