"""Random-matrix constants and Monte Carlo checks of the corank law.

Partial products and series are accumulated as exact ``Fraction`` values,
each paired with a rigorous truncation bound; conversion to ``Decimal``
happens only when a report is rendered.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Context, Decimal
from fractions import Fraction

import numpy as np

from .f3_linalg import batch_rank, random_symmetric_batch

MC_CHUNK = 10_000
REPORTED_CORANKS = 5  # m = 0..4


def to_decimal(x: Fraction, bits: int) -> Decimal:
    ctx = Context(prec=max(8, math.ceil(bits * math.log10(2)) + 2))
    return ctx.divide(Decimal(x.numerator), Decimal(x.denominator))


@dataclass(frozen=True)
class Bounded:
    """An exact rational approximation with |true - value| <= error."""

    value: Fraction
    error: Fraction

    def contains(self, target: Fraction, slack: Fraction = Fraction(0)) -> bool:
        return abs(self.value - target) <= self.error + slack


def beta_first_form(terms: int) -> Bounded:
    """prod_{i<terms} (1 - 3^-(2i+1)), with the tail bounded below by 1 - sum of the tail."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    p = Fraction(1)
    for i in range(terms):
        p *= 1 - Fraction(1, 3 ** (2 * i + 1))
    # tail: prod_{i>=T}(1 - 3^-(2i+1)) >= 1 - (9/8) 3^-(2T+1)
    return Bounded(p, p * Fraction(9, 8) / 3 ** (2 * terms + 1))


def beta_second_form(terms: int) -> Bounded:
    """prod_{j=1..terms} (1 + 3^-j)^-1."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    p = Fraction(1)
    for j in range(1, terms + 1):
        p /= 1 + Fraction(1, 3**j)
    # tail: prod_{j>J}(1 + 3^-j)^-1 >= 1 - sum_{j>J} 3^-j = 1 - 3^-J / 2
    return Bounded(p, p / (2 * 3**terms))


def beta_exact(terms: int = 40) -> Bounded:
    first = beta_first_form(terms)
    second = beta_second_form(terms)
    if abs(first.value - second.value) > first.error + second.error:
        raise ArithmeticError("the two product forms of beta disagree beyond truncation")
    return first


def beta(terms: int = 40, precision: int = 128) -> Decimal:
    return to_decimal(beta_exact(terms).value, precision)


def _denominator(m: int) -> int:
    return math.prod(3**j - 1 for j in range(1, m + 1))


def beta_m_exact(m: int, terms: int = 40) -> Bounded:
    if m < 0:
        raise ValueError("m must be >= 0")
    b = beta_exact(terms)
    d = _denominator(m)
    return Bounded(b.value / d, b.error / d)


def beta_m(m: int, terms: int = 40, precision: int = 128) -> Decimal:
    return to_decimal(beta_m_exact(m, terms).value, precision)


@dataclass(frozen=True)
class ConstantsReport:
    beta: Bounded
    beta_second_form: Bounded
    beta_m: tuple[Bounded, ...]
    sum_beta_m: Bounded
    upper_sum: Bounded
    upper_product: Bounded
    stevenhagen_sum: Bounded
    conjecture_value: Bounded
    lambda_lower: Bounded
    lambda_upper: Fraction
    trivial_lower: Bounded
    trivial_upper: Fraction
    precision_bits: int
    truncation_terms: int
    checks: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        bits = self.precision_bits

        def dec(b: Bounded) -> dict:
            return {"value": str(to_decimal(b.value, bits)), "error_bound": f"{float(b.error):.3e}"}

        return {
            "precision_bits": bits,
            "truncation_terms": self.truncation_terms,
            "beta": dec(self.beta),
            "beta_second_form": dec(self.beta_second_form),
            "beta_m": [dec(b) for b in self.beta_m],
            "sum_beta_m": dec(self.sum_beta_m),
            "upper_sum": dec(self.upper_sum),
            "upper_product": dec(self.upper_product),
            "stevenhagen_sum": dec(self.stevenhagen_sum),
            "two_minus_two_beta": dec(self.conjecture_value),
            "lambda_lower": dec(self.lambda_lower),
            "lambda_upper": {"num": str(self.lambda_upper.numerator),
                             "den": str(self.lambda_upper.denominator)},
            "trivial_lower": dec(self.trivial_lower),
            "trivial_upper": {"num": str(self.trivial_upper.numerator),
                              "den": str(self.trivial_upper.denominator)},
            "checks": self.checks,
        }


def _series(b: Bounded, coeffs: list[Fraction], tail: Fraction) -> Bounded:
    s = sum(coeffs, Fraction(0))
    # error from beta's truncation plus the dropped tail (coefficients of the tail times beta <= 1)
    return Bounded(b.value * s, b.error * s + tail)


def series_checks(precision: int = 128, terms: int = 40) -> ConstantsReport:
    """Evaluate the corank-law series and check them against their closed forms."""
    b = beta_exact(terms)
    b2 = beta_second_form(terms)
    c = [Fraction(1, _denominator(m)) for m in range(terms + 2)]
    # c_{m+1}/c_m <= 1/2, so each tail is at most twice its first dropped term
    tail = 2 * c[terms + 1]

    sum_bm = _series(b, c[: terms + 1], tail)
    upper = _series(b, [c[m] / 3**m for m in range(terms + 1)], tail)
    # 2 beta / ((3^{m+1} - 1) prod_{j=1..m}(3^j - 1)) = 2 beta_{m+1}
    stev_coeffs = [Fraction(2, (3 ** (m + 1) - 1) * _denominator(m)) for m in range(terms)]
    steven = _series(b, stev_coeffs, 2 * tail)

    # product side of the q-binomial identity: sum_m 3^-m c_m = prod_{m>=0} (1 + 3^-(m+2))
    prod = Fraction(1)
    for m in range(terms):
        prod *= 1 + Fraction(1, 3 ** (m + 2))
    # dropped factors multiply to at most exp(3^-(terms+1)); the value is below 1
    upper_product = Bounded(b.value * prod, b.error * prod + Fraction(1, 3**terms))

    conj = Bounded(2 - 2 * b.value, 2 * b.error)
    lower, upper_bound = lambda_bound_checks(terms)
    trivial_lower = Bounded(Fraction(27, 31) * b.value, Fraction(27, 31) * b.error)

    tol = Fraction(1, 10**9)
    checks = {
        "beta_forms_agree_1e-12": abs(b.value - b2.value) <= Fraction(1, 10**12),
        "upper_sum_is_3/4": upper.contains(Fraction(3, 4), tol),
        "upper_product_is_3/4": upper_product.contains(Fraction(3, 4), tol),
        "sum_beta_m_is_1": sum_bm.contains(Fraction(1), tol),
        "stevenhagen_sum_is_2(1-beta)": abs(steven.value - 2 * (1 - b.value)) <= steven.error + 2 * b.error + tol,
    }
    return ConstantsReport(
        beta=b,
        beta_second_form=b2,
        beta_m=tuple(Bounded(b.value * c[m], b.error * c[m]) for m in range(REPORTED_CORANKS)),
        sum_beta_m=sum_bm,
        upper_sum=upper,
        upper_product=upper_product,
        stevenhagen_sum=steven,
        conjecture_value=conj,
        lambda_lower=lower,
        lambda_upper=upper_bound,
        trivial_lower=trivial_lower,
        trivial_upper=Fraction(97, 124),
        precision_bits=precision,
        truncation_terms=terms,
        checks=checks,
    )


# densities of S, S', S'' inside S_lambda, and the solvable density each contributes
SPLIT = (Fraction(27, 31), Fraction(2, 31), Fraction(2, 31))
S_PRIME_FULL_RANK = Fraction(2, 3)  # times beta
UPPER_SUM = Fraction(3, 4)


def lambda_bound_checks(terms: int = 40) -> tuple[Bounded, Fraction]:
    """Recompose the lambda-ramified bounds from their component densities.

    Lower: S and S'' contribute beta, S' contributes 2 beta / 3.  Upper: S and S''
    contribute 3/4, S' is bounded only by 1.
    """
    b = beta_exact(terms)
    s, s1, s2 = SPLIT
    lower_coeff = s + s2 + s1 * S_PRIME_FULL_RANK
    if lower_coeff != Fraction(91, 93):
        raise ArithmeticError(f"lower-bound recomposition gave {lower_coeff} * beta")
    upper = s * UPPER_SUM + s2 * UPPER_SUM + s1 * 1
    if upper != Fraction(95, 124):
        raise ArithmeticError(f"upper-bound recomposition gave {upper}")
    if s * UPPER_SUM + (s1 + s2) * 1 != Fraction(97, 124):
        raise ArithmeticError("trivial upper bound recomposition failed")
    return Bounded(lower_coeff * b.value, lower_coeff * b.error), upper


# -- Monte Carlo -----------------------------------------------------------------


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng([seed, chunk])


def _corank_chunk(args: tuple[int, int, int, int]) -> dict[int, int]:
    n, count, seed, chunk = args
    rng = _chunk_rng(seed, chunk)
    coranks = n - batch_rank(random_symmetric_batch(n, count, rng))
    values, counts = np.unique(coranks, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def _chunks(samples: int) -> list[tuple[int, int]]:
    out = []
    start = 0
    i = 0
    while start < samples:
        size = min(MC_CHUNK, samples - start)
        out.append((i, size))
        start += size
        i += 1
    return out


def _run(fn, jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def merge_counts(parts) -> dict[int, int]:
    total: dict[int, int] = {}
    for part in parts:
        for k, v in part.items():
            total[k] = total.get(k, 0) + v
    return dict(sorted(total.items()))


@dataclass(frozen=True)
class MCRankReport:
    n: int
    samples: int
    seed: int
    corank_counts: dict[int, int]
    comparison: dict[int, dict[str, float]]

    def frequency(self, m: int) -> float:
        return self.corank_counts.get(m, 0) / self.samples

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "corank_counts": {str(k): v for k, v in self.corank_counts.items()},
            "comparison": {str(k): v for k, v in self.comparison.items()},
        }


def corank_mc(n: int, samples: int, seed: int = 0, workers: int = 1) -> MCRankReport:
    """Corank frequencies of uniform random symmetric n x n matrices over F_3.

    Samples are drawn in fixed-size chunks, chunk k from the stream seeded by
    (seed, k), so the result does not depend on ``workers``.
    """
    if n < 1 or samples < 1:
        raise ValueError("n and samples must be positive")
    jobs = [(n, size, seed, i) for i, size in _chunks(samples)]
    counts = merge_counts(_run(_corank_chunk, jobs, workers))
    comparison = {}
    for m in range(REPORTED_CORANKS):
        expected = float(beta_m_exact(m).value)
        freq = counts.get(m, 0) / samples
        comparison[m] = {"frequency": freq, "beta_m": expected, "deviation": freq - expected}
    return MCRankReport(n, samples, seed, counts, comparison)


@dataclass(frozen=True)
class SplittingReport:
    m: int
    samples: int
    seed: int
    conditional_frequency: float
    conditional_expected: Fraction
    composite_counts: dict[int, int]
    composite_mass: float
    composite_expected: Fraction

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "samples": self.samples,
            "seed": self.seed,
            "note": "checks the arithmetic of the beta_m * 3^-m model only",
            "conditional_frequency": self.conditional_frequency,
            "conditional_expected": str(self.conditional_expected),
            "composite_counts": {str(k): v for k, v in self.composite_counts.items()},
            "composite_mass": self.composite_mass,
            "composite_expected": str(self.composite_expected),
        }


def _corank_law(max_m: int = 12) -> np.ndarray:
    p = np.array([float(beta_m_exact(m).value) for m in range(max_m + 1)])
    return p / p.sum()


def splitting_mc(m: int, samples: int, seed: int = 0) -> SplittingReport:
    """Simulate 'corank m, then survive with probability 3^-m'.

    The conditional Bernoulli at the requested m is sampled directly; the
    composite mass draws the corank from the beta_m law first, and should
    come out near sum beta_m 3^-m = 3/4.
    """
    if m < 0 or samples < 1:
        raise ValueError("m must be >= 0 and samples positive")
    rng = np.random.default_rng([seed, m])
    hits = int((rng.random(samples) < 3.0**-m).sum())
    law = _corank_law()
    coranks = rng.choice(law.size, size=samples, p=law)
    survive = rng.random(samples) < np.power(3.0, -coranks)
    values, counts = np.unique(coranks[survive], return_counts=True)
    return SplittingReport(
        m=m,
        samples=samples,
        seed=seed,
        conditional_frequency=hits / samples,
        conditional_expected=Fraction(1, 3**m),
        composite_counts={int(v): int(c) for v, c in zip(values, counts)},
        composite_mass=float(survive.mean()),
        composite_expected=Fraction(3, 4),
    )
