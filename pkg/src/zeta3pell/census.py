"""Enumerate Kummer fields K(cbrt(alpha)) by discriminant and classify them.

Each field is reduced to a canonical ``FieldSpec`` (primes sorted, first
exponent 1, so exactly one of alpha and alpha^2 is kept).  A field is
classified by the Redei criterion first, then by the unit search, then by
externally supplied class-group data.
"""

from __future__ import annotations

import json
import math
import os
import subprocess
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Iterable, Iterator, Optional

import numpy as np
from sympy import primerange

from .eisenstein import EisensteinInt, primary3_assoc, split_prime
from .heuristics import SPLIT, beta_m
from .pell_oracle import ExhaustedBound, Found, OrderElt, search_norm_zeta3
from .redei import (
    S_DOUBLE_PRIME,
    S_PRIME,
    TAME,
    FieldSpec,
    build_matrix,
    negative_criterion,
    positive_criterion,
    redei_corank,
)

SCHEMA_VERSION = 1
TAME_VARIANT, LAMBDA_VARIANT = "tame", "lambda_all"
VARIANTS = (TAME_VARIANT, LAMBDA_VARIANT)

SOLVABLE_REDEI = "SOLVABLE_REDEI"
SOLVABLE_ORACLE = "SOLVABLE_ORACLE"
INSOLUBLE_EXTERNAL = "INSOLUBLE_EXTERNAL"
UNKNOWN = "UNKNOWN"
VERDICTS = (SOLVABLE_REDEI, SOLVABLE_ORACLE, INSOLUBLE_EXTERNAL, UNKNOWN)

# disc_norm = (prod N(pi))^2 * factor
_LAMBDA_FACTOR = {TAME: 1, S_PRIME: 27, S_DOUBLE_PRIME: 81}

WITNESS_BASIS = "u + v*theta + w*theta^2; theta = (t - c)/lambda if alpha = c mod lambda^3 (c = +-1), else theta = t"


# -- enumeration ---------------------------------------------------------------------


def enumerate_admissible_primes(bound: int) -> list[EisensteinInt]:
    """Primes = 1 mod lambda^3 of norm <= bound, i.e. both primes over each p = 1 mod 9."""
    out = []
    for p in primerange(19, bound + 1):
        if p % 9 != 1:
            continue
        for pi in split_prime(p):
            q = primary3_assoc(pi)
            if q is None:
                raise ArithmeticError(f"no associate of {pi!r} is 1 mod lambda^3")
            out.append(q)
    return sorted(out, key=EisensteinInt.sort_key)


def _spec_sort_key(spec: FieldSpec) -> tuple[int, int, int, int]:
    a = spec.alpha
    return (spec.disc_norm, a.norm(), a.a, a.b)


def _prime_sets(primes: list[EisensteinInt], limit: int) -> Iterator[tuple[EisensteinInt, ...]]:
    """Nonempty subsets (in list order) whose norm product is <= limit."""
    norms = [p.norm() for p in primes]

    def rec(start: int, prod: int, chosen: tuple[EisensteinInt, ...]):
        for i in range(start, len(primes)):
            nxt = prod * norms[i]
            if nxt > limit:
                break  # norms are sorted
            yield chosen + (primes[i],)
            yield from rec(i + 1, nxt, chosen + (primes[i],))

    yield from rec(0, 1, ())


def _variants(variant: str) -> list[tuple[int, int]]:
    """(zeta_exp, lambda_exp) pairs to attach to each prime set."""
    if variant == TAME_VARIANT:
        return [(0, 0)]
    if variant == LAMBDA_VARIANT:
        return [(0, 0), (1, 0), (2, 0)] + [(z, l) for l in (1, 2) for z in (0, 1, 2)]
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def enumerate_fields(X: int, variant: str = TAME_VARIANT) -> list[FieldSpec]:
    """Canonical specs with disc_norm <= X, sorted by (disc_norm, N(alpha), a, b)."""
    variants = _variants(variant)
    limit = math.isqrt(X)
    primes = enumerate_admissible_primes(limit)
    specs = []
    for ps in _prime_sets(primes, limit):
        prod = 1
        for p in ps:
            prod *= p.norm()
        for z, l in variants:
            kind = S_DOUBLE_PRIME if l else S_PRIME if z else TAME
            if prod * prod * _LAMBDA_FACTOR[kind] > X:
                continue
            for rest in product((1, 2), repeat=len(ps) - 1):
                specs.append(FieldSpec(ps, (1,) + rest, z, l))
    specs.sort(key=_spec_sort_key)
    return specs


# -- classification ------------------------------------------------------------------


@dataclass(frozen=True)
class FieldRecord:
    spec: FieldSpec
    redei_rank: int
    corank: int
    verdict: str
    witness: Optional[OrderElt] = None
    cl_dim: Optional[int] = None

    @property
    def alpha(self) -> EisensteinInt:
        return self.spec.alpha

    @property
    def disc_norm(self) -> int:
        return self.spec.disc_norm

    def to_json(self) -> dict:
        a = self.alpha
        s = self.spec
        return {
            "alpha_a": a.a,
            "alpha_b": a.b,
            "primes": [[p.a, p.b] for p in s.primes],
            "exponents": list(s.exponents),
            "zeta_exp": s.zeta_exp,
            "lambda_exp": s.lambda_exp,
            "disc_norm": str(s.disc_norm),
            "redei_rank": self.redei_rank,
            "corank": self.corank,
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_json(),
            "cl_dim": self.cl_dim,
        }

    def to_line(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, d: dict) -> "FieldRecord":
        spec = FieldSpec(
            tuple(EisensteinInt(*p) for p in d["primes"]),
            tuple(d["exponents"]),
            d["zeta_exp"],
            d["lambda_exp"],
        )
        if str(spec.disc_norm) != d["disc_norm"] or [spec.alpha.a, spec.alpha.b] != [d["alpha_a"], d["alpha_b"]]:
            raise ValueError(f"inconsistent record {d}")
        w = d["witness"]
        return cls(
            spec,
            d["redei_rank"],
            d["corank"],
            d["verdict"],
            None if w is None else OrderElt.from_json(w, spec.alpha),
            d["cl_dim"],
        )

    def sort_key(self) -> tuple[int, int, int, int]:
        return _spec_sort_key(self.spec)


def classify(spec: FieldSpec, oracle_bound: int = 1, cl_dim: Optional[int] = None) -> FieldRecord:
    """Verdict for one field.  ``oracle_bound = 0`` skips the unit search.

    The negative criterion is applied to tame and ``S''`` fields only; for
    ``S'`` the corank mixes the block and the corner and no bound from
    class-group data is claimed.
    """
    rm = build_matrix(spec)
    r, corank = rm.rank, redei_corank(rm)
    if positive_criterion(rm):
        return FieldRecord(spec, r, corank, SOLVABLE_REDEI, None, cl_dim)
    if oracle_bound > 0:
        try:
            outcome = search_norm_zeta3(spec.alpha, oracle_bound)
        except MemoryError:
            outcome = ExhaustedBound(oracle_bound)
        if isinstance(outcome, Found):
            return FieldRecord(spec, r, corank, SOLVABLE_ORACLE, outcome.witness, cl_dim)
    if cl_dim is not None and spec.kind != S_PRIME and negative_criterion(corank, cl_dim):
        return FieldRecord(spec, r, corank, INSOLUBLE_EXTERNAL, None, cl_dim)
    return FieldRecord(spec, r, corank, UNKNOWN, None, cl_dim)


def _classify_job(args) -> str:
    spec, oracle_bound, cl_dim = args
    return classify(spec, oracle_bound, cl_dim).to_line()


# -- statistics ----------------------------------------------------------------------


def _frac_json(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _ratio(a: int, b: int) -> Fraction:
    return Fraction(a, b) if b else Fraction(0)


@dataclass
class CensusStats:
    total: int = 0
    by_corank: dict[int, int] = field(default_factory=dict)
    by_verdict: dict[str, int] = field(default_factory=lambda: {v: 0 for v in VERDICTS})
    by_kind: dict[str, int] = field(default_factory=lambda: {TAME: 0, S_PRIME: 0, S_DOUBLE_PRIME: 0})

    def add(self, rec: FieldRecord) -> None:
        self.total += 1
        self.by_corank[rec.corank] = self.by_corank.get(rec.corank, 0) + 1
        self.by_verdict[rec.verdict] += 1
        self.by_kind[rec.spec.kind] += 1

    @property
    def solvable_lower(self) -> int:
        return self.by_verdict[SOLVABLE_REDEI] + self.by_verdict[SOLVABLE_ORACLE]

    @property
    def insoluble_count(self) -> int:
        return self.by_verdict[INSOLUBLE_EXTERNAL]

    @property
    def unknown_count(self) -> int:
        return self.by_verdict[UNKNOWN]

    def bracket(self) -> tuple[Fraction, Fraction]:
        """[solvable/total, 1 - insoluble/total]."""
        return _ratio(self.solvable_lower, self.total), 1 - _ratio(self.insoluble_count, self.total)

    def corank_frequencies(self) -> dict[int, Fraction]:
        return {m: _ratio(c, self.total) for m, c in sorted(self.by_corank.items())}

    def to_json(self, header: Optional[dict] = None) -> dict:
        lo, hi = self.bracket()
        out = dict(header or {})
        out.update({
            "total": self.total,
            "solvable_lower": self.solvable_lower,
            "insoluble_count": self.insoluble_count,
            "unknown_count": self.unknown_count,
            "by_verdict": self.by_verdict,
            "by_corank": {str(m): c for m, c in sorted(self.by_corank.items())},
            "fractions": {
                "solvable_lower": _frac_json(lo),
                "not_insoluble": _frac_json(hi),
                "corank_0": _frac_json(_ratio(self.by_corank.get(0, 0), self.total)),
            },
            "bracket": [_frac_json(lo), _frac_json(hi)],
            "corank_vs_beta_m": [
                {"m": m, "empirical": _frac_json(f), "beta_m": float(beta_m(m))}
                for m, f in self.corank_frequencies().items()
            ],
            "kind_fractions": {
                k: {
                    "empirical": _frac_json(_ratio(c, self.total)),
                    "reference": _frac_json(ref),
                    "limit_under_disc_rule": lim,
                }
                for (k, c), ref, lim in zip(self.by_kind.items(), SPLIT, _kind_limits())
            },
        })
        return out


def _kind_limits() -> tuple[float, float, float]:
    """Limiting S/S'/S'' shares implied by the discriminant rule.

    Counts of prime products up to Y grow like Y (log Y)^k, and the bound on
    prod N(pi) is sqrt(X / 3^v).  Per prime set there are 1, 2 and 6 canonical
    exponent patterns, giving weights 1, 2/sqrt(27), 6/sqrt(81).
    """
    w = (1.0, 2 / math.sqrt(27), 6 / 9)
    t = sum(w)
    return tuple(x / t for x in w)


# -- persistence ---------------------------------------------------------------------


def build_id() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        pass
    return "unversioned"


def make_header(X: int, variant: str, oracle_bound: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "X": str(X),
        "variant": variant,
        "oracle_bound": oracle_bound,
        "build_id": build_id(),
        "witness_basis": WITNESS_BASIS,
    }


def load_cl_data(path: str | os.PathLike) -> dict[EisensteinInt, int]:
    """cl_data JSON lines {"alpha_a", "alpha_b", "cl_dim"} keyed by canonical alpha."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                d = json.loads(line)
                out[EisensteinInt(d["alpha_a"], d["alpha_b"])] = int(d["cl_dim"])
    return out


def _read_log(path: Path, header: dict) -> dict[tuple[int, int], str]:
    """Records already in an append-only log written for the same run."""
    done: dict[tuple[int, int], str] = {}
    if not path.exists():
        return done
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        return done
    old = json.loads(lines[0])
    keys = ("schema_version", "X", "variant", "oracle_bound")
    if any(old.get(k) != header[k] for k in keys):
        raise ValueError(f"{path} belongs to a different run")
    for line in lines[1:]:
        try:
            d = json.loads(line)
        except json.JSONDecodeError:
            break  # torn final line from an interrupted run
        done[(d["alpha_a"], d["alpha_b"])] = json.dumps(d, separators=(",", ":"))
    return done


@dataclass
class CensusResult:
    stats: CensusStats
    records: list[FieldRecord]
    header: dict

    def summary(self) -> dict:
        return self.stats.to_json(self.header)


def run_census(
    X: int,
    variant: str = TAME_VARIANT,
    oracle_bound: int = 1,
    workers: int = 1,
    out: Optional[str | os.PathLike] = None,
    cl_data: Optional[dict[EisensteinInt, int]] = None,
) -> CensusResult:
    """Classify every field with disc_norm <= X.

    With ``out`` set, records are appended to ``out + ".log"`` as they are
    produced (a rerun resumes from it), then the sorted record file is
    written to ``out``.  Output is identical for any worker count.
    """
    if X < 361:
        raise ValueError("X must be >= 361")
    specs = enumerate_fields(X, variant)
    header = make_header(X, variant, oracle_bound)
    cl_data = cl_data or {}
    log_path = Path(str(out) + ".log") if out is not None else None
    done = _read_log(log_path, header) if log_path else {}
    todo = [s for s in specs if (s.alpha.a, s.alpha.b) not in done]
    jobs = [(s, oracle_bound, cl_data.get(s.alpha)) for s in todo]

    log = None
    if log_path is not None:
        fresh = not done
        log = open(log_path, "w" if fresh else "a", encoding="utf-8")
        if fresh:
            log.write(json.dumps(header, separators=(",", ":")) + "\n")
            log.flush()
    lines = dict(done)
    try:
        if workers > 1 and len(jobs) > 1:
            pool = ProcessPoolExecutor(max_workers=workers)
            results: Iterable[str] = pool.map(_classify_job, jobs, chunksize=max(1, len(jobs) // (8 * workers)))
        else:
            pool = None
            results = map(_classify_job, jobs)
        try:
            for spec, line in zip(todo, results):
                lines[(spec.alpha.a, spec.alpha.b)] = line
                if log is not None:
                    log.write(line + "\n")
                    log.flush()
        finally:
            if pool is not None:
                pool.shutdown()
    finally:
        if log is not None:
            log.close()

    records = sorted((FieldRecord.from_json(json.loads(l)) for l in lines.values()), key=FieldRecord.sort_key)
    stats = CensusStats()
    for r in records:
        stats.add(r)
    if out is not None:
        write_records(out, header, records)
    return CensusResult(stats, records, header)


def write_records(path: str | os.PathLike, header: dict, records: list[FieldRecord]) -> None:
    tmp = Path(str(path) + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, separators=(",", ":")) + "\n")
        for r in records:
            fh.write(r.to_line() + "\n")
    os.replace(tmp, path)


# -- two-prime experiment ------------------------------------------------------------


def _pow_mod_array(x: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(x)
    base = x % p
    while e:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def symbol_table(primes: list[EisensteinInt]) -> np.ndarray:
    """L[i, j] = log (pi_i / pi_j)_3 for i != j (diagonal set to -1).

    Each pi_j has prime norm p; reducing mod pi_j sends w to r = -c/d mod p
    where pi_j = c + d w, so the symbol is (a + b r)^((p-1)/3) mod p read
    against 1, r, r^2.
    """
    a = np.array([p.a for p in primes], dtype=np.int64)
    b = np.array([p.b for p in primes], dtype=np.int64)
    n = len(primes)
    out = np.full((n, n), -1, dtype=np.int8)
    for j, pj in enumerate(primes):
        p = pj.norm()
        if p >= 3_000_000_000:
            raise ValueError("symbol_table needs norms below 3e9 for int64 products")
        r = (-pj.a * pow(pj.b, -1, p)) % p
        x = _pow_mod_array((a % p + (b % p) * r) % p, (p - 1) // 3, p)
        col = np.full(n, -1, dtype=np.int8)
        for k, z in enumerate((1, r, r * r % p)):
            col[x == z] = k
        col[j] = -1
        if np.any(np.delete(col, j) < 0):
            raise ArithmeticError(f"residue symbol failed modulo {pj!r}")
        out[:, j] = col
    return out


@dataclass(frozen=True)
class TwoPrimeReport:
    prime_bound: int
    oracle_bound: int
    primes: int
    pairs: int
    full_rank: int
    oracle_checked: int  # deficient fields passed to the search
    oracle_found: int
    asymmetric: int  # pairs where the two symbol directions disagree

    @property
    def full_rank_fraction(self) -> Fraction:
        return _ratio(self.full_rank, self.pairs)

    @property
    def oracle_extra_fraction(self) -> Fraction:
        """Lower estimate: found / checked among rank-deficient fields."""
        return _ratio(self.oracle_found, self.oracle_checked)

    def to_json(self) -> dict:
        return {
            "prime_bound": self.prime_bound,
            "oracle_bound": self.oracle_bound,
            "primes": self.primes,
            "pairs": self.pairs,
            "full_rank": self.full_rank,
            "full_rank_fraction": _frac_json(self.full_rank_fraction),
            "full_rank_fraction_float": float(self.full_rank_fraction),
            "reference": _frac_json(Fraction(2, 3)),
            "oracle_checked": self.oracle_checked,
            "oracle_found": self.oracle_found,
            "oracle_extra_fraction": _frac_json(self.oracle_extra_fraction),
            "oracle_extra_note": "inconclusive-below: a search failure does not mean insoluble",
            "asymmetric_pairs": self.asymmetric,
        }


def two_prime_experiment(prime_bound: int, oracle_bound: int = 0, max_oracle_pairs: Optional[int] = None) -> TwoPrimeReport:
    """Rank statistics over all unordered pairs of admissible primes.

    A two-prime field has full Redei rank iff log (pi_1/pi_2)_3 != 0, for
    both exponent patterns.  Rank-deficient pairs (in sorted order, at most
    ``max_oracle_pairs`` of them) get the unit search on alpha = pi_1 pi_2
    and alpha = pi_1 pi_2^2.
    """
    if prime_bound < 37:
        raise ValueError("prime_bound must be >= 37")
    primes = enumerate_admissible_primes(prime_bound)
    n = len(primes)
    table = symbol_table(primes)
    iu = np.triu_indices(n, 1)
    upper, lower = table[iu], table.T[iu]
    asym = int(np.count_nonzero(upper != lower))
    full = int(np.count_nonzero(upper != 0))
    checked = found = 0
    if oracle_bound > 0:
        deficient = np.nonzero(upper == 0)[0]
        if max_oracle_pairs is not None:
            deficient = deficient[:max_oracle_pairs]
        for k in deficient:
            i, j = int(iu[0][k]), int(iu[1][k])
            for e in (1, 2):
                alpha = primes[i] * primes[j] ** e
                checked += 1
                found += isinstance(search_norm_zeta3(alpha, oracle_bound), Found)
    return TwoPrimeReport(prime_bound, oracle_bound, n, n * (n - 1) // 2, full, checked, found, asym)

