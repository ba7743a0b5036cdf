"""Exact arithmetic in the Eisenstein integers Z[w], w = zeta_3.

Elements are stored as ``a + b*w`` with ``w**2 = -1 - w``.  The ring is
Euclidean for the norm ``a*a - a*b + b*b``; everything here is exact integer
arithmetic, no floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Union

from sympy import factorint, sqrt_mod

IntLike = Union["EisensteinInt", int]


def _round_half_toward_zero(n: int, d: int) -> int:
    """Nearest integer to n/d (d > 0); exact halves go toward zero."""
    q = (2 * abs(n) + d - 1) // (2 * d)
    return q if n >= 0 else -q


class EisensteinInt:
    """An element ``a + b*w`` of Z[w]."""

    __slots__ = ("a", "b")

    def __init__(self, a: int = 0, b: int = 0) -> None:
        object.__setattr__(self, "a", int(a))
        object.__setattr__(self, "b", int(b))

    def __setattr__(self, name, value):
        raise AttributeError("EisensteinInt is immutable")

    def __reduce__(self):
        return (EisensteinInt, (self.a, self.b))

    @staticmethod
    def coerce(x: IntLike) -> "EisensteinInt":
        if isinstance(x, EisensteinInt):
            return x
        if isinstance(x, int):
            return EisensteinInt(x, 0)
        raise TypeError(f"cannot interpret {x!r} as an Eisenstein integer")

    # -- ring structure -------------------------------------------------------
    def __add__(self, other: IntLike) -> "EisensteinInt":
        o = EisensteinInt.coerce(other)
        return EisensteinInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: IntLike) -> "EisensteinInt":
        o = EisensteinInt.coerce(other)
        return EisensteinInt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: IntLike) -> "EisensteinInt":
        return EisensteinInt.coerce(other) - self

    def __neg__(self) -> "EisensteinInt":
        return EisensteinInt(-self.a, -self.b)

    def __mul__(self, other: IntLike) -> "EisensteinInt":
        o = EisensteinInt.coerce(other)
        a, b, c, d = self.a, self.b, o.a, o.b
        bd = b * d
        return EisensteinInt(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "EisensteinInt":
        if e < 0:
            raise ValueError("negative exponent")
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "EisensteinInt":
        return EisensteinInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        a, b = self.a, self.b
        return a * a - a * b + b * b

    def __divmod__(self, other: IntLike) -> tuple["EisensteinInt", "EisensteinInt"]:
        y = EisensteinInt.coerce(other)
        n = y.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[w]")
        num = self * y.conj()
        q = EisensteinInt(_round_half_toward_zero(num.a, n), _round_half_toward_zero(num.b, n))
        return q, self - q * y

    def __floordiv__(self, other: IntLike) -> "EisensteinInt":
        return divmod(self, other)[0]

    def __mod__(self, other: IntLike) -> "EisensteinInt":
        return divmod(self, other)[1]

    def divides(self, other: IntLike) -> bool:
        """True if ``self`` divides ``other`` exactly."""
        o = EisensteinInt.coerce(other)
        n = self.norm()
        if n == 0:
            return not o
        num = o * self.conj()
        return num.a % n == 0 and num.b % n == 0

    def exact_div(self, other: IntLike) -> "EisensteinInt":
        """``self / other``, which must be exact."""
        y = EisensteinInt.coerce(other)
        n = y.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[w]")
        num = self * y.conj()
        if num.a % n or num.b % n:
            raise ArithmeticError(f"{y} does not divide {self}")
        return EisensteinInt(num.a // n, num.b // n)

    # -- comparison / display -------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, EisensteinInt):
            return self.a == other.a and self.b == other.b
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __iter__(self) -> Iterator[int]:
        yield self.a
        yield self.b

    def __repr__(self) -> str:
        return f"EisensteinInt({self.a}, {self.b})"

    def __str__(self) -> str:
        return f"{self.a},{self.b}"

    def sort_key(self) -> tuple[int, int, int]:
        return (self.norm(), self.a, self.b)

    def is_unit(self) -> bool:
        return self.norm() == 1


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
ZETA3 = EisensteinInt(0, 1)
LAMBDA = EisensteinInt(1, -1)  # 1 - w, the prime above 3


def norm(x: EisensteinInt) -> int:
    return x.norm()


def pow_mod(x: EisensteinInt, e: int, m: EisensteinInt) -> EisensteinInt:
    """x**e reduced modulo m by square-and-multiply."""
    result = ONE % m
    base = x % m
    while e:
        if e & 1:
            result = (result * base) % m
        base = (base * base) % m
        e >>= 1
    return result


@dataclass(frozen=True, order=True)
class Unit:
    """The unit ``(-w**2)**k``; multiplication adds indices mod 6."""

    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", self.k % 6)

    def value(self) -> EisensteinInt:
        return UNITS[self.k]

    def __mul__(self, other: "Unit") -> "Unit":
        return Unit(self.k + other.k)

    def inverse(self) -> "Unit":
        return Unit(-self.k)

    @staticmethod
    def of(x: EisensteinInt) -> "Unit":
        try:
            return Unit(UNITS.index(x))
        except ValueError:
            raise ValueError(f"{x!r} is not a unit") from None


def _unit_table() -> tuple[EisensteinInt, ...]:
    g = EisensteinInt(1, 1)  # -w^2 = 1 + w
    out = [ONE]
    for _ in range(5):
        out.append(out[-1] * g)
    return tuple(out)


UNITS = _unit_table()


def gcd(x: IntLike, y: IntLike) -> EisensteinInt:
    """Greatest common divisor in canonical associate form."""
    x, y = EisensteinInt.coerce(x), EisensteinInt.coerce(y)
    if not x and not y:
        raise ValueError("gcd(0, 0) is undefined")
    while y:
        x, y = y, x % y
    return canonical_associate(x)


def _lambda_valuation(x: EisensteinInt) -> tuple[int, EisensteinInt]:
    k = 0
    while LAMBDA.divides(x):
        x = x.exact_div(LAMBDA)
        k += 1
    return k, x


def is_one_mod_3(x: EisensteinInt) -> bool:
    return x.a % 3 == 1 and x.b % 3 == 0


def primary2_assoc(x: IntLike) -> EisensteinInt:
    """The unique associate of x congruent to 1 mod 3 (= mod lambda**2)."""
    x = EisensteinInt.coerce(x)
    if LAMBDA.divides(x):
        raise ValueError(f"{x!r} is divisible by lambda")
    found = [u * x for u in UNITS if is_one_mod_3(u * x)]
    # units are pairwise distinct mod 3, so exactly one associate qualifies
    assert len(found) == 1, found
    return found[0]


LAMBDA3 = LAMBDA**3


def is_one_mod_lambda3(x: EisensteinInt) -> bool:
    return LAMBDA3.divides(x - ONE)


def primary3_assoc(x: IntLike) -> Optional[EisensteinInt]:
    """Associate of x congruent to 1 mod lambda**3, or None if none exists."""
    x = EisensteinInt.coerce(x)
    p = primary2_assoc(x)
    # only the unit 1 is 1 mod 3, so p is the only candidate
    return p if is_one_mod_lambda3(p) else None


def canonical_associate(x: EisensteinInt) -> EisensteinInt:
    """``lambda**k * primary2_assoc(rest)``; zero maps to zero."""
    if not x:
        return x
    k, rest = _lambda_valuation(x)
    return LAMBDA**k * primary2_assoc(rest)


@dataclass(frozen=True)
class Factorization:
    unit: Unit
    factors: tuple[tuple[EisensteinInt, int], ...]

    def expand(self) -> EisensteinInt:
        out = self.unit.value()
        for p, e in self.factors:
            out = out * p**e
        return out


@lru_cache(maxsize=4096)
def split_prime(p: int) -> tuple[EisensteinInt, EisensteinInt]:
    """The two canonical primes over a rational prime p = 1 mod 3, sorted."""
    if p % 3 != 1:
        raise ValueError(f"{p} does not split in Z[w]")
    s = sqrt_mod(-3, p)
    r = ((s - 1) * pow(2, -1, p)) % p  # image of w: a root of x^2 + x + 1
    pi = gcd(EisensteinInt(p, 0), EisensteinInt(-r, 1))
    if pi.norm() != p:
        raise ArithmeticError(f"failed to split {p}")
    pair = sorted((pi, primary2_assoc(pi.conj())), key=EisensteinInt.sort_key)
    return pair[0], pair[1]


def factor(x: IntLike) -> Factorization:
    """Factor x into canonical primes times a unit."""
    return _factor(EisensteinInt.coerce(x))


@lru_cache(maxsize=1 << 14)
def _factor(x: EisensteinInt) -> Factorization:
    if not x:
        raise ValueError("cannot factor zero")
    rest = x
    factors: list[tuple[EisensteinInt, int]] = []
    for p, e in sorted(factorint(x.norm()).items()):
        if p == 3:
            k, rest = _lambda_valuation(rest)
            factors.append((LAMBDA, k))
        elif p % 3 == 2:
            q = EisensteinInt(-p, 0)  # -p = 1 mod 3 is the primary associate
            k = e // 2
            for _ in range(k):
                rest = rest.exact_div(q)
            factors.append((q, k))
        else:
            for pi in split_prime(p):
                k = 0
                while pi.divides(rest):
                    rest = rest.exact_div(pi)
                    k += 1
                if k:
                    factors.append((pi, k))
    factors.sort(key=lambda pe: pe[0].sort_key())
    return Factorization(Unit.of(rest), tuple(factors))


def is_irreducible(x: EisensteinInt) -> bool:
    n = x.norm()
    if n < 2:
        return False
    f = factorint(n)
    if len(f) != 1:
        return False
    (p, e), = f.items()
    if e == 1:
        return p == 3 or p % 3 == 1
    return e == 2 and p % 3 == 2


def is_admissible(pi: IntLike) -> bool:
    """Whether pi may divide alpha in the census: split prime with norm = 1 mod 9.

    Inert primes are never admissible (see README).
    """
    pi = EisensteinInt.coerce(pi)
    if not is_irreducible(pi):
        raise ValueError(f"{pi!r} is not irreducible")
    n = pi.norm()
    if n == 3:
        raise ValueError("lambda is handled separately from admissible primes")
    if n % 3 != 1 or factorint(n).get(n) != 1:
        return False  # inert
    return n % 9 == 1


def parse(text: str) -> EisensteinInt:
    """Parse ``"a,b"`` (meaning a + b*w) or a bare integer."""
    parts = [s.strip() for s in text.split(",")]
    if len(parts) == 1:
        return EisensteinInt(int(parts[0]), 0)
    if len(parts) == 2:
        return EisensteinInt(int(parts[0]), int(parts[1]))
    raise ValueError(f"expected 'a,b' or an integer, got {text!r}")
