from __future__ import annotations

import json
from fractions import Fraction

import pytest

from zeta3pell.census import (
    INSOLUBLE_EXTERNAL,
    LAMBDA_VARIANT,
    SOLVABLE_ORACLE,
    SOLVABLE_REDEI,
    UNKNOWN,
    CensusStats,
    FieldRecord,
    _kind_limits,
    classify,
    enumerate_admissible_primes,
    enumerate_fields,
    load_cl_data,
    run_census,
    symbol_table,
    two_prime_experiment,
)
from zeta3pell.cubic_residue import euler_symbol
from zeta3pell.eisenstein import EisensteinInt, is_one_mod_lambda3
from zeta3pell.pell_oracle import verify_witness
from zeta3pell.redei import FieldSpec, S_DOUBLE_PRIME, S_PRIME, TAME

E = EisensteinInt
PI, PIBAR = E(-5, -3), E(-2, 3)

RECORD_KEYS = ["alpha_a", "alpha_b", "primes", "exponents", "zeta_exp", "lambda_exp", "disc_norm",
               "redei_rank", "corank", "verdict", "witness", "cl_dim"]


def test_admissible_primes():
    assert len(enumerate_admissible_primes(40)) == 4
    assert sorted(p.norm() for p in enumerate_admissible_primes(40)) == [19, 19, 37, 37]
    assert enumerate_admissible_primes(18) == []
    ps = enumerate_admissible_primes(5000)
    assert all(is_one_mod_lambda3(p) for p in ps)
    assert ps == sorted(ps, key=EisensteinInt.sort_key)


def test_enumerate_361():
    specs = enumerate_fields(361)
    assert specs == [FieldSpec((PI,), (1,)), FieldSpec((PIBAR,), (1,))]
    assert all(s.disc_norm == 361 for s in specs)


def test_enumerate_includes_19():
    specs = enumerate_fields(130322)
    assert FieldSpec((PI, PIBAR), (1, 1)) in specs
    assert next(s for s in specs if s.alpha == E(19)).disc_norm == 361**2


@pytest.mark.parametrize("variant", ["tame", LAMBDA_VARIANT])
def test_enumeration_canonical(variant):
    specs = enumerate_fields(10**8, variant)
    keys = [(s.disc_norm, s.alpha.norm(), s.alpha.a, s.alpha.b) for s in specs]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    alphas = {s.alpha for s in specs}
    for s in specs:
        assert s.exponents[0] == 1 and s.disc_norm <= 10**8
        assert s.squared().alpha not in alphas or s.n == 0
    kinds = {s.kind for s in specs}
    assert kinds == ({TAME} if variant == "tame" else {TAME, S_PRIME, S_DOUBLE_PRIME})


def test_classify_examples():
    assert classify(FieldSpec((PI,), (1,))).verdict == SOLVABLE_REDEI
    ps = enumerate_admissible_primes(2000)
    full = next((a, b) for a in ps for b in ps if a != b and euler_symbol(a, b).log != 0)
    spec = FieldSpec(tuple(sorted(full, key=EisensteinInt.sort_key)), (1, 1))
    assert classify(spec).verdict == SOLVABLE_REDEI
    deficient = FieldSpec((PI, PIBAR), (1, 1))
    rec = classify(deficient, oracle_bound=0, cl_dim=0)
    assert rec.verdict == INSOLUBLE_EXTERNAL and rec.corank == 1
    assert classify(deficient, oracle_bound=0).verdict == UNKNOWN
    # S' never gets an insolubility verdict from class-group data
    sp = FieldSpec((PI, PIBAR), (1, 1), 1)
    assert classify(sp, oracle_bound=0, cl_dim=0).verdict in (SOLVABLE_REDEI, UNKNOWN)


def test_classify_oracle_witness():
    # rank-deficient (symbol 1) yet solvable: found by the search at bound 2
    spec = FieldSpec((PI, E(-35, 9)), (1, 1))
    assert euler_symbol(PI, E(-35, 9)).log == 0
    rec = classify(spec, oracle_bound=2)
    assert rec.verdict == SOLVABLE_ORACLE and verify_witness(rec.witness, spec.alpha)


def test_record_roundtrip():
    spec = FieldSpec((PI, E(-35, 9)), (1, 1))
    rec = classify(spec, oracle_bound=2, cl_dim=2)
    assert rec.witness is not None
    d = json.loads(rec.to_line())
    assert list(d) == RECORD_KEYS
    assert FieldRecord.from_json(d) == rec


def test_stats_sum_and_fractions():
    res = run_census(10**8, "tame", oracle_bound=1)
    st = res.stats
    assert sum(st.by_corank.values()) == st.total == len(res.records)
    assert st.solvable_lower + st.insoluble_count + st.unknown_count == st.total
    lo, hi = st.bracket()
    assert lo == Fraction(st.solvable_lower, st.total) and hi == 1
    summ = res.summary()
    assert summ["fractions"]["solvable_lower"] == {"num": str(lo.numerator), "den": str(lo.denominator)}


def test_single_prime_fields_all_solvable():
    res = run_census(10**4, "tame")
    assert all(r.spec.n == 1 for r in res.records)
    assert res.stats.bracket()[0] == 1


def test_census_files_and_resume(tmp_path):
    out = tmp_path / "rec.jsonl"
    run_census(10**7, "tame", 1, 1, out)
    first = out.read_text()
    lines = first.splitlines()
    header = json.loads(lines[0])
    assert header["schema_version"] == 1 and header["X"] == str(10**7) and header["variant"] == "tame"
    # truncate the log mid-run and resume
    log = tmp_path / "rec.jsonl.log"
    log_lines = log.read_text().splitlines()
    log.write_text("\n".join(log_lines[: len(log_lines) // 2]) + "\n" + log_lines[-1][:10])
    run_census(10**7, "tame", 1, 1, out)
    assert out.read_text() == first


def test_cl_data_port(tmp_path):
    p = tmp_path / "cl.jsonl"
    p.write_text(json.dumps({"alpha_a": 19, "alpha_b": 0, "cl_dim": 0}) + "\n")
    cl = load_cl_data(p)
    res = run_census(361**2, "tame", oracle_bound=0, cl_data=cl)
    rec = next(r for r in res.records if r.alpha == E(19))
    assert rec.verdict == INSOLUBLE_EXTERNAL and rec.cl_dim == 0
    assert res.stats.insoluble_count == 1


def test_symbol_table_matches_euler():
    ps = enumerate_admissible_primes(1500)
    t = symbol_table(ps)
    for i in range(0, len(ps), 5):
        for j in range(1, len(ps), 7):
            if i != j:
                assert t[i, j] == euler_symbol(ps[i], ps[j]).log


def test_two_prime_small():
    r = two_prime_experiment(2000, oracle_bound=1, max_oracle_pairs=20)
    assert r.asymmetric == 0
    assert 0 <= r.oracle_found <= r.oracle_checked <= 40
    assert r == two_prime_experiment(2000, oracle_bound=1, max_oracle_pairs=20)
    assert 0 <= r.oracle_extra_fraction <= 1


def test_kind_limits_sum_to_one():
    assert abs(sum(_kind_limits()) - 1) < 1e-12


def test_stats_add():
    st = CensusStats()
    st.add(classify(FieldSpec((PI,), (1,))))
    assert st.total == 1 and st.by_corank == {0: 1}


def test_parallel_matches_serial(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run_census(10**8, LAMBDA_VARIANT, 1, 1, a)
    run_census(10**8, LAMBDA_VARIANT, 1, 3, b)
    assert a.read_bytes() == b.read_bytes()
