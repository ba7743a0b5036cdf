"""Dense linear algebra over F_3.

Matrices are small (tens to a couple hundred rows), so everything is dense
``int8`` numpy.  ``batch_rank`` eliminates a whole stack of matrices at once,
which is what the Monte Carlo code uses.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

# in F_3 every nonzero element is its own inverse
INV = np.array([0, 1, 2], dtype=np.int8)


class F3Matrix:
    """Immutable dense matrix with entries in {0, 1, 2}."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[Iterable[int]] | np.ndarray, cols: int | None = None) -> None:
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0 and cols is not None:
            arr = arr.reshape(0, cols)
        if arr.ndim != 2:
            raise ValueError("F3Matrix needs a 2-d array")
        arr = (arr % 3).astype(np.int8)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def __setattr__(self, name, value):
        raise AttributeError("F3Matrix is immutable")

    def __reduce__(self):
        return (F3Matrix, (self.entries.copy(),))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "F3Matrix":
        return cls(np.zeros((rows, cols), dtype=np.int8))

    @classmethod
    def identity(cls, n: int) -> "F3Matrix":
        return cls(np.eye(n, dtype=np.int8))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def T(self) -> "F3Matrix":
        return F3Matrix(self.entries.T)

    def __getitem__(self, ij):
        return int(self.entries[ij])

    def __eq__(self, other) -> bool:
        if not isinstance(other, F3Matrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((self.entries.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"F3Matrix({self.tolist()})"

    def tolist(self) -> list[list[int]]:
        return self.entries.astype(int).tolist()

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and bool(np.array_equal(self.entries, self.entries.T))

    def matvec(self, v: Sequence[int]) -> tuple[int, ...]:
        x = np.asarray(v, dtype=np.int64)
        return tuple(int(y) for y in (self.entries.astype(np.int64) @ x) % 3)

    def vecmat(self, v: Sequence[int]) -> tuple[int, ...]:
        x = np.asarray(v, dtype=np.int64)
        return tuple(int(y) for y in (x @ self.entries.astype(np.int64)) % 3)


def _rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    r = (a.astype(np.int64) % 3).copy()
    m, n = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        p = row + int(nz[0])
        if p != row:
            r[[row, p]] = r[[p, row]]
        r[row] = (r[row] * INV[r[row, col]]) % 3
        others = np.nonzero(r[:, col])[0]
        for i in others:
            if i != row:
                r[i] = (r[i] - r[i, col] * r[row]) % 3
        pivots.append(col)
        row += 1
    return r, pivots


def rank(m: F3Matrix) -> int:
    return len(_rref(m.entries)[1])


def kernel_basis(m: F3Matrix) -> list[tuple[int, ...]]:
    """Basis of {v : M v = 0}, one vector per free column."""
    r, pivots = _rref(m.entries)
    n = m.cols
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-r[i, f]) % 3
        basis.append(tuple(int(x) for x in v))
    return basis


def _batch_rank_dense(a: np.ndarray) -> np.ndarray:
    a = (a % 3).astype(np.int16)
    bsz, m, n = a.shape
    prow = np.zeros(bsz, dtype=np.int64)
    rows = np.arange(m)
    for col in range(n):
        cand = (a[:, :, col] != 0) & (rows[None, :] >= prow[:, None])
        has = cand.any(axis=1) & (prow < m)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        piv = np.argmax(cand[b], axis=1)
        tgt = prow[b]
        pr = a[b, piv].copy()
        a[b, piv] = a[b, tgt]
        pr = (pr * INV[pr[:, col]][:, None]) % 3
        a[b, tgt] = pr
        below = rows[None, :] > tgt[:, None]
        f = a[b, :, col] * below
        a[b] = (a[b] - f[:, :, None] * pr[:, None, :]) % 3
        prow[b] += 1
    return prow


def _f3_add(x1, x2, y1, y2):
    """Bit-sliced F_3 addition; bit k of (x1, x2) flags entry k == 1 / == 2."""
    xz = ~(x1 | x2)
    yz = ~(y1 | y2)
    s1 = (x1 & yz) | (y1 & xz) | (x2 & y2)
    s2 = (x2 & yz) | (y2 & xz) | (x1 & y1)
    return s1, s2


def _batch_rank_packed(a: np.ndarray) -> np.ndarray:
    bsz, m, n = a.shape
    weights = np.left_shift(np.uint64(1), np.arange(n, dtype=np.uint64))
    p1 = ((a == 1).astype(np.uint64) * weights).sum(axis=2, dtype=np.uint64)
    p2 = ((a == 2).astype(np.uint64) * weights).sum(axis=2, dtype=np.uint64)
    prow = np.zeros(bsz, dtype=np.int64)
    rows = np.arange(m)
    idx = np.arange(bsz)
    one = np.uint64(1)
    for col in range(n):
        sh = np.uint64(col)
        c1 = (p1 >> sh) & one
        c2 = (p2 >> sh) & one
        cand = ((c1 | c2) == one) & (rows[None, :] >= prow[:, None])
        has = cand.any(axis=1) & (prow < m)
        if not has.any():
            continue
        b = idx[has]
        piv = np.argmax(cand[b], axis=1)
        tgt = prow[b]
        v1, v2 = p1[b, piv].copy(), p2[b, piv].copy()
        p1[b, piv], p2[b, piv] = p1[b, tgt], p2[b, tgt]
        neg = ((v2 >> sh) & one) == one
        v1, v2 = np.where(neg, v2, v1), np.where(neg, v1, v2)
        p1[b, tgt], p2[b, tgt] = v1, v2
        # rows below: entry 1 -> subtract pivot (add its negation), entry 2 -> add pivot
        below = rows[None, :] > tgt[:, None]
        r1, r2 = p1[b], p2[b]
        e1 = (((r1 >> sh) & one) == one) & below
        e2 = (((r2 >> sh) & one) == one) & below
        y1 = np.where(e1, v2[:, None], np.where(e2, v1[:, None], np.uint64(0)))
        y2 = np.where(e1, v1[:, None], np.where(e2, v2[:, None], np.uint64(0)))
        p1[b], p2[b] = _f3_add(r1, r2, y1, y2)
        prow[b] += 1
    return prow


def batch_rank(mats: np.ndarray) -> np.ndarray:
    """Ranks of a stack of matrices of shape (B, m, n) over F_3."""
    a = np.asarray(mats) % 3
    if a.shape[2] <= 64:
        return _batch_rank_packed(a)
    return _batch_rank_dense(a)


def random_symmetric_batch(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent uniform symmetric n x n matrices, shape (count, n, n)."""
    iu = np.triu_indices(n)
    out = np.zeros((count, n, n), dtype=np.int8)
    vals = rng.integers(0, 3, size=(count, iu[0].size), dtype=np.int8)
    out[:, iu[0], iu[1]] = vals
    out[:, iu[1], iu[0]] = vals
    return out


def random_symmetric(n: int, rng: np.random.Generator) -> F3Matrix:
    if n < 1:
        raise ValueError("n must be positive")
    return F3Matrix(random_symmetric_batch(n, 1, rng)[0])


MAX_EXACT_N = 4


def all_symmetric(n: int) -> np.ndarray:
    iu = np.triu_indices(n)
    k = iu[0].size
    vals = np.array(list(product(range(3), repeat=k)), dtype=np.int8).reshape(-1, k)
    out = np.zeros((vals.shape[0], n, n), dtype=np.int8)
    out[:, iu[0], iu[1]] = vals
    out[:, iu[1], iu[0]] = vals
    return out


def exact_corank_distribution(n: int) -> dict[int, Fraction]:
    """Corank law of a uniform symmetric n x n matrix, by enumerating all of them."""
    if not 1 <= n <= MAX_EXACT_N:
        raise ValueError(f"exhaustive enumeration supports 1 <= n <= {MAX_EXACT_N}")
    mats = all_symmetric(n)
    coranks = n - batch_rank(mats)
    total = mats.shape[0]
    values, counts = np.unique(coranks, return_counts=True)
    return {int(v): Fraction(int(c), total) for v, c in zip(values, counts)}
