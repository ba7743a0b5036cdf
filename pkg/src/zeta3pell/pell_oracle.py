"""Brute-force search for units of relative norm zeta_3 in K(cbrt(alpha)).

Elements are written over t = cbrt(alpha).  The search runs in the
monogenic order O_K[theta], where theta = (t - c)/lambda when alpha = c
mod lambda^3 (c = +-1) and theta = t otherwise.  For such alpha, O_K[t]
itself is useless: every element of it has norm = +-1 mod lambda^2 while
zeta_3 = 1 - lambda.  O_K[theta] can still be smaller than the maximal
order (e.g. at primes with exponent 2), so ``ExhaustedBound`` never proves
insolubility.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Optional, Union

import numpy as np

from .eisenstein import LAMBDA, LAMBDA3, ZETA3, EisensteinInt, IntLike

ZETA3_SQ = ZETA3 * ZETA3


@dataclass(frozen=True)
class CubicElt:
    """u + v t + w t^2 with t^3 = alpha."""

    u: EisensteinInt
    v: EisensteinInt
    w: EisensteinInt

    @classmethod
    def of(cls, u: IntLike, v: IntLike = 0, w: IntLike = 0) -> "CubicElt":
        c = EisensteinInt.coerce
        return cls(c(u), c(v), c(w))

    def mul(self, other: "CubicElt", alpha: EisensteinInt) -> "CubicElt":
        u1, v1, w1 = self.u, self.v, self.w
        u2, v2, w2 = other.u, other.v, other.w
        return CubicElt(
            u1 * u2 + alpha * (v1 * w2 + w1 * v2),
            u1 * v2 + v1 * u2 + alpha * (w1 * w2),
            u1 * w2 + w1 * u2 + v1 * v2,
        )

    def twist(self, k: int) -> "CubicElt":
        """Image under t -> zeta^k t."""
        z = ZETA3**k
        return CubicElt(self.u, self.v * z, self.w * z * z)

    def to_json(self) -> dict:
        return {"u": [self.u.a, self.u.b], "v": [self.v.a, self.v.b], "w": [self.w.a, self.w.b]}

    @classmethod
    def from_json(cls, d: dict) -> "CubicElt":
        return cls(*(EisensteinInt(*d[k]) for k in ("u", "v", "w")))


def relative_norm(x: CubicElt, alpha: IntLike) -> EisensteinInt:
    """u^3 + alpha v^3 + alpha^2 w^3 - 3 alpha u v w."""
    alpha = EisensteinInt.coerce(alpha)
    u, v, w = x.u, x.v, x.w
    return u**3 + alpha * v**3 + alpha * alpha * w**3 - 3 * alpha * u * v * w


def conjugate_product_norm(x: CubicElt, alpha: IntLike) -> EisensteinInt:
    """Product of the three conjugates, multiplied out in O_K[t]."""
    alpha = EisensteinInt.coerce(alpha)
    p = x.mul(x.twist(1), alpha).mul(x.twist(2), alpha)
    if p.v or p.w:
        raise ArithmeticError("product of conjugates is not in O_K")
    return p.u


def order_shift(alpha: IntLike) -> int:
    """c in {1, -1} with alpha = c mod lambda^3, or 0 if there is none.

    When c != 0, theta = (t - c)/lambda is integral: the elementary symmetric
    functions of its conjugates are -3/lambda, 3/lambda^2 and
    (alpha - c)/lambda^3.  O_K[theta] contains O_K[t] with index lambda^3.
    """
    alpha = EisensteinInt.coerce(alpha)
    for c in (1, -1):
        if LAMBDA3.divides(alpha - c):
            return c
    return 0


@dataclass(frozen=True)
class OrderElt:
    """u + v theta + w theta^2, theta = (t - shift)/lambda (or t when shift == 0)."""

    u: EisensteinInt
    v: EisensteinInt
    w: EisensteinInt
    shift: int

    @property
    def denominator_exp(self) -> int:
        return 0 if self.shift == 0 else 2

    def numerator(self) -> CubicElt:
        """y in O_K[t] with self = y / lambda^denominator_exp."""
        if self.shift == 0:
            return CubicElt(self.u, self.v, self.w)
        c = self.shift
        l2 = LAMBDA * LAMBDA
        # lambda^2 (u + v theta + w theta^2) = lambda^2 u + lambda v (t - c) + w (t - c)^2
        return CubicElt(l2 * self.u - LAMBDA * self.v * c + self.w * (c * c),
                        LAMBDA * self.v - self.w * (2 * c),
                        self.w)

    def to_json(self) -> dict:
        return {"u": [self.u.a, self.u.b], "v": [self.v.a, self.v.b], "w": [self.w.a, self.w.b]}

    @classmethod
    def from_json(cls, d: dict, alpha: IntLike) -> "OrderElt":
        return cls(*(EisensteinInt(*d[k]) for k in ("u", "v", "w")), order_shift(alpha))

    def square(self, alpha: IntLike) -> "OrderElt":
        """self^2, recomputed in theta coordinates."""
        alpha = EisensteinInt.coerce(alpha)
        if self.shift == 0:
            y = CubicElt(self.u, self.v, self.w)
            y2 = y.mul(y, alpha)
            return OrderElt(y2.u, y2.v, y2.w, 0)
        # theta^3 = e1 theta^2 - e2 theta + e3
        c = self.shift
        e1 = EisensteinInt(-3 * c, 0).exact_div(LAMBDA)
        e2 = EisensteinInt(3, 0).exact_div(LAMBDA * LAMBDA)
        e3 = (alpha - c).exact_div(LAMBDA3)
        u, v, w = self.u, self.v, self.w
        # (u + v T + w T^2)^2 = u^2 + 2uv T + (v^2 + 2uw) T^2 + 2vw T^3 + w^2 T^4
        c0, c1, c2, c3, c4 = u * u, 2 * u * v, v * v + 2 * u * w, 2 * v * w, w * w
        # T^4 = e1 T^3 - e2 T^2 + e3 T
        c3 = c3 + c4 * e1
        c2 = c2 - c4 * e2
        c1 = c1 + c4 * e3
        return OrderElt(c0 + c3 * e3, c1 - c3 * e2, c2 + c3 * e1, c)


def element_norm(x: "OrderElt", alpha: IntLike) -> EisensteinInt:
    """N_{L/K}(x) via the closed-form norm of its O_K[t] numerator."""
    y = x.numerator()
    return relative_norm(y, alpha).exact_div(LAMBDA ** (3 * x.denominator_exp))


def verify_witness(x: Union[CubicElt, OrderElt], alpha: IntLike) -> bool:
    """Norm is exactly zeta_3, by the closed form and by the conjugate product."""
    if isinstance(x, OrderElt):
        y, k = x.numerator(), x.denominator_exp
    else:
        y, k = x, 0
    target = ZETA3 * LAMBDA ** (3 * k)
    n = relative_norm(y, alpha)
    return n == target and conjugate_product_norm(y, alpha) == n


@dataclass(frozen=True)
class Found:
    witness: OrderElt  # norm zeta_3
    raw: OrderElt  # element hit by the scan
    raw_norm: str  # "zeta3" or "zeta3^2"


@dataclass(frozen=True)
class ExhaustedBound:
    bound: int


SearchOutcome = Union[Found, ExhaustedBound]


# -- vectorised scan ----------------------------------------------------------------


def _emul(a1, b1, a2, b2):
    bd = b1 * b2
    return a1 * a2 - bd, a1 * b2 + b1 * a2 - bd


def _norm_arrays(u, v, w, alpha: EisensteinInt):
    """Componentwise relative norm for coordinate arrays (each a pair)."""
    al = (alpha.a, alpha.b)
    al2 = _emul(*al, *al)
    u3 = _emul(*_emul(*u, *u), *u)
    v3 = _emul(*_emul(*v, *v), *v)
    w3 = _emul(*_emul(*w, *w), *w)
    t1 = _emul(*al, *v3)
    t2 = _emul(*al2, *w3)
    t3 = _emul(*al, *_emul(*_emul(*u, *v), *w))
    return u3[0] + t1[0] + t2[0] - 3 * t3[0], u3[1] + t1[1] + t2[1] - 3 * t3[1]


def _box(bound: int) -> np.ndarray:
    r = range(-bound, bound + 1)
    return np.array(list(product(r, r)), dtype=np.int64)


def _scan_key(coords: tuple[int, ...]) -> tuple[int, ...]:
    ua, ub, va, vb, wa, wb = coords
    return (abs(ua) + abs(ub), abs(va) + abs(vb), abs(wa) + abs(wb)) + coords


def _needs_bigint(alpha: EisensteinInt, bound: int) -> bool:
    amax = max(abs(alpha.a), abs(alpha.b), 1)
    # numerator coordinates are at most ~10 B; each norm term is ~ amax^2 (10 B)^3
    return 1000 * amax * amax * (10 * bound) ** 3 >= 2**62


def _scan_slice(args) -> Optional[tuple[tuple[int, ...], str]]:
    alpha_ab, shift, bound, ua, ub = args
    alpha = EisensteinInt(*alpha_ab)
    pts = _box(bound)
    if _needs_bigint(alpha, bound):
        pts = pts.astype(object)
    va, vb = np.repeat(pts[:, 0], len(pts)), np.repeat(pts[:, 1], len(pts))
    wa, wb = np.tile(pts[:, 0], len(pts)), np.tile(pts[:, 1], len(pts))
    one = np.ones_like(va)
    u = (ua * one, ub * one)
    if shift == 0:
        ny = (u, (va, vb), (wa, wb))
        k = 0
    else:
        # numerator coordinates, as in OrderElt.numerator
        c = shift
        l2 = (0, -3)  # lambda^2 = -3 w
        lv = _emul(1, -1, va, vb)
        yu = _emul(*l2, *u)
        yu = (yu[0] - c * lv[0] + wa, yu[1] - c * lv[1] + wb)
        yv = (lv[0] - 2 * c * wa, lv[1] - 2 * c * wb)
        ny = (yu, yv, (wa, wb))
        k = 2
    na, nb = _norm_arrays(*ny, alpha)
    scale = LAMBDA ** (3 * k)
    best = None
    for z, label in ((ZETA3, "zeta3"), (ZETA3_SQ, "zeta3^2")):
        target = z * scale
        hit = np.nonzero((na == target.a) & (nb == target.b))[0]
        for h in hit:
            coords = (ua, ub, int(va[h]), int(vb[h]), int(wa[h]), int(wb[h]))
            if best is None or _scan_key(coords) < _scan_key(best[0]):
                best = (coords, label)
    return best


def search_norm_zeta3(alpha: IntLike, coeff_bound: int, workers: int = 1) -> SearchOutcome:
    """Scan theta-coordinates in [-B, B] for an element of norm zeta_3.

    Hits of norm zeta_3^2 are squared.  Among all hits the smallest in the
    order (|u|_1, |v|_1, |w|_1, coordinates) wins, so the answer does not
    depend on how the box is split across workers.
    """
    alpha = EisensteinInt.coerce(alpha)
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be >= 1")
    shift = order_shift(alpha)
    r = range(-coeff_bound, coeff_bound + 1)
    jobs = [((alpha.a, alpha.b), shift, coeff_bound, ua, ub) for ua, ub in product(r, r)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_slice, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_scan_slice(j) for j in jobs]
    hits = [h for h in results if h is not None]
    if not hits:
        return ExhaustedBound(coeff_bound)
    coords, label = min(hits, key=lambda h: _scan_key(h[0]))
    ua, ub, va, vb, wa, wb = coords
    raw = OrderElt(EisensteinInt(ua, ub), EisensteinInt(va, vb), EisensteinInt(wa, wb), shift)
    witness = raw if label == "zeta3" else raw.square(alpha)
    if not verify_witness(witness, alpha):
        raise ArithmeticError(f"scan hit {raw} failed verification")
    return Found(witness, raw, label)
