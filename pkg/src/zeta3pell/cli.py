"""Command-line interface.

Eisenstein integers are written ``a,b`` for a + b*w (a bare ``n`` means n).
Use ``--v=-1,2`` when a value starts with a minus sign.

Exit codes: 0 ok, 2 parse error, 3 domain error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Callable, Optional, Sequence

from . import census as census_mod
from . import heuristics
from .cubic_residue import SymbolDomainError, fast_symbol
from .eisenstein import EisensteinInt, factor, parse
from .f3_linalg import exact_corank_distribution
from .pell_oracle import Found, search_norm_zeta3
from .redei import SpecError, build_matrix, positive_criterion, redei_corank, spec_from_alpha

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_IO = 0, 2, 3, 4
FORMATS = ("text", "json", "csv")


class DomainError(Exception):
    pass


def _eis(text: str) -> EisensteinInt:
    try:
        return parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(fmt: str, data: dict, text: Callable[[dict], str], rows: Optional[list[dict]] = None) -> None:
    if fmt == "json":
        print(json.dumps(data, indent=2))
    elif fmt == "csv":
        rows = rows if rows is not None else [{k: v for k, v in data.items() if not isinstance(v, (dict, list))}]
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        print(buf.getvalue(), end="")
    else:
        print(text(data))


# -- subcommands ---------------------------------------------------------------------


def cmd_symbol(args) -> int:
    try:
        s = fast_symbol(args.v, args.w)
    except SymbolDomainError as exc:
        raise DomainError(str(exc)) from None
    data = {"v": str(args.v), "w": str(args.w), "symbol": str(s), "log": s.log}
    log = "-" if s.log is None else s.log
    _emit(args.format, data, lambda d: f"{d['symbol']} (log {log})")
    return EXIT_OK


def cmd_factor(args) -> int:
    if not args.x:
        raise DomainError("cannot factor zero")
    f = factor(args.x)
    data = {
        "x": str(args.x),
        "unit_index": f.unit.k,
        "unit": str(f.unit.value()),
        "factors": [{"prime": str(p), "norm": p.norm(), "exponent": e} for p, e in f.factors],
    }

    def text(d):
        parts = [f"({p['prime']})^{p['exponent']}" for p in d["factors"]]
        return f"{d['x']} = ({d['unit']}) * " + " * ".join(parts) if parts else f"{d['x']} = ({d['unit']})"

    _emit(args.format, data, text, data["factors"])
    return EXIT_OK


def cmd_redei(args) -> int:
    try:
        spec = spec_from_alpha(args.alpha)
        rm = build_matrix(spec)
    except SpecError as exc:
        raise DomainError(str(exc)) from None
    data = {
        "alpha": str(args.alpha),
        "kind": spec.kind,
        "primes": [str(p) for p in spec.primes],
        "exponents": list(spec.exponents),
        "zeta_exp": spec.zeta_exp,
        "lambda_exp": spec.lambda_exp,
        "disc_norm": str(spec.disc_norm),
        "matrix": rm.matrix.tolist(),
        "exponent_vector": list(rm.exponent_vector),
        "rank": rm.rank,
        "corank": redei_corank(rm),
        "positive_criterion": positive_criterion(rm),
    }

    def text(d):
        body = "\n".join(" ".join(str(x) for x in row) for row in d["matrix"])
        return (f"alpha = {d['alpha']}  kind {d['kind']}  disc_norm {d['disc_norm']}\n{body}\n"
                f"rank {d['rank']}  corank {d['corank']}  positive {d['positive_criterion']}")

    rows = [{f"c{j}": x for j, x in enumerate(row)} for row in data["matrix"]]
    _emit(args.format, data, text, rows)
    return EXIT_OK


def cmd_census(args) -> int:
    if args.max_disc < 361:
        raise DomainError("--max-disc must be >= 361")
    variant = census_mod.LAMBDA_VARIANT if args.variant == "lambda" else census_mod.TAME_VARIANT
    try:
        cl = census_mod.load_cl_data(args.cl_data) if args.cl_data else None
        res = census_mod.run_census(args.max_disc, variant, args.oracle_bound, args.workers, args.out, cl)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    summary = res.summary()

    def text(d):
        lo, hi = d["bracket"]
        return (f"total {d['total']}\nsolvable {d['solvable_lower']}\ninsoluble {d['insoluble_count']}\n"
                f"unknown {d['unknown_count']}\nbracket [{lo['num']}/{lo['den']}, {hi['num']}/{hi['den']}]")

    rows = [{"corank": r["m"], "num": r["empirical"]["num"], "den": r["empirical"]["den"], "beta_m": r["beta_m"]}
            for r in summary["corank_vs_beta_m"]]
    _emit(args.format, summary, text, rows)
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    if args.n < 1 or args.samples < 1:
        raise DomainError("--n and --samples must be positive")
    rep = heuristics.corank_mc(args.n, args.samples, args.seed, args.workers)
    data = rep.to_json()
    if args.n <= 4:
        data["exact"] = {str(m): {"num": str(f.numerator), "den": str(f.denominator)}
                         for m, f in exact_corank_distribution(args.n).items()}
    rows = [{"corank": int(m), **c} for m, c in data["comparison"].items()]

    def text(d):
        lines = [f"n {d['n']}  samples {d['samples']}  seed {d['seed']}"]
        lines += [f"corank {r['corank']}: {r['frequency']:.6f}  beta_m {r['beta_m']:.6f}" for r in rows]
        return "\n".join(lines)

    _emit(args.format, data, text, rows)
    return EXIT_OK


def cmd_splitting(args) -> int:
    if args.m < 0 or args.samples < 1:
        raise DomainError("--m must be >= 0 and --samples positive")
    data = heuristics.splitting_mc(args.m, args.samples, args.seed).to_json()
    _emit(args.format, data, lambda d: "\n".join(f"{k} {v}" for k, v in d.items()))
    return EXIT_OK


def cmd_constants(args) -> int:
    if args.terms < 2:
        raise DomainError("--terms must be >= 2")
    data = heuristics.series_checks(args.precision, args.terms).to_json()

    def text(d):
        keys = ("beta", "sum_beta_m", "upper_sum", "upper_product", "stevenhagen_sum",
                "two_minus_two_beta", "lambda_lower")
        lines = [f"{k} {d[k]['value'][:22]}" for k in keys]
        lu = d["lambda_upper"]
        lines.append(f"lambda_upper {lu['num']}/{lu['den']}")
        lines += [f"check {k} {v}" for k, v in d["checks"].items()]
        return "\n".join(lines)

    rows = [{"name": k, "value": v["value"], "error_bound": v["error_bound"]}
            for k, v in data.items() if isinstance(v, dict) and "value" in v]
    _emit(args.format, data, text, rows)
    return EXIT_OK


def cmd_pell_search(args) -> int:
    if args.bound < 1:
        raise DomainError("--bound must be >= 1")
    try:
        spec_from_alpha(args.alpha)
    except (SpecError, ValueError) as exc:
        raise DomainError(str(exc)) from None
    out = search_norm_zeta3(args.alpha, args.bound, args.workers)
    if isinstance(out, Found):
        data = {"alpha": str(args.alpha), "found": True, "witness": out.witness.to_json(),
                "raw": out.raw.to_json(), "raw_norm": out.raw_norm, "basis_shift": out.witness.shift}
    else:
        data = {"alpha": str(args.alpha), "found": False, "bound": out.bound}

    def text(d):
        if not d["found"]:
            return f"no witness with coefficients in [-{d['bound']}, {d['bound']}] (inconclusive)"
        w = d["witness"]
        return f"witness u={w['u']} v={w['v']} w={w['w']} (theta shift {d['basis_shift']}, raw norm {d['raw_norm']})"

    _emit(args.format, data, text)
    return EXIT_OK


def cmd_two_prime(args) -> int:
    if args.prime_bound < 37:
        raise DomainError("--prime-bound must be >= 37")
    rep = census_mod.two_prime_experiment(args.prime_bound, args.oracle_bound, args.max_oracle_pairs)
    data = rep.to_json()

    def text(d):
        return (f"pairs {d['pairs']}  full rank {d['full_rank']} ({d['full_rank_fraction_float']:.6f})\n"
                f"oracle found {d['oracle_found']} of {d['oracle_checked']} deficient fields (lower estimate)")

    _emit(args.format, data, text)
    return EXIT_OK


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="zeta3pell", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_, description=help_, formatter_class=fmt)
        p.add_argument("--format", choices=FORMATS, default="text", help="output format")
        p.set_defaults(func=fn)
        return p

    cpus = os.cpu_count() or 1

    p = add("symbol", cmd_symbol, "cubic residue symbol (v/w)_3")
    p.add_argument("--v", type=_eis, required=True, help="numerator a,b")
    p.add_argument("--w", type=_eis, required=True, help="denominator a,b (coprime to 3)")

    p = add("factor", cmd_factor, "factor an Eisenstein integer into canonical primes")
    p.add_argument("--x", type=_eis, required=True, help="element a,b")

    p = add("redei", cmd_redei, "Redei matrix of K(cbrt(alpha))")
    p.add_argument("--alpha", type=_eis, required=True, help="alpha a,b")

    p = add("census", cmd_census, "enumerate and classify fields up to a discriminant bound")
    p.add_argument("--max-disc", type=int, required=True, help="discriminant norm bound X (>= 361)")
    p.add_argument("--variant", choices=("tame", "lambda"), default="tame", help="field family")
    p.add_argument("--oracle-bound", type=int, default=1, help="coefficient bound for the unit search (0 disables)")
    p.add_argument("--workers", type=int, default=cpus, help="worker processes")
    p.add_argument("--out", default=None, help="record file (JSON lines); a .log file is kept beside it")
    p.add_argument("--cl-data", default=None, help="JSON lines of alpha_a, alpha_b, cl_dim")

    p = add("montecarlo", cmd_montecarlo, "corank frequencies of random symmetric F_3 matrices")
    p.add_argument("--n", type=int, default=30, help="matrix size")
    p.add_argument("--samples", type=int, default=200_000, help="number of matrices")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--workers", type=int, default=cpus, help="worker processes")

    p = add("splitting", cmd_splitting, "simulate the corank-then-3^-m survival model")
    p.add_argument("--m", type=int, default=1, help="corank for the conditional frequency")
    p.add_argument("--samples", type=int, default=100_000, help="number of draws")
    p.add_argument("--seed", type=int, default=0, help="random seed")

    p = add("constants", cmd_constants, "beta, beta_m and the series identities")
    p.add_argument("--terms", type=int, default=40, help="truncation length of the products")
    p.add_argument("--precision", type=int, default=128, help="decimal output precision in bits")

    p = add("pell-search", cmd_pell_search, "search for a unit of relative norm zeta_3")
    p.add_argument("--alpha", type=_eis, required=True, help="alpha a,b")
    p.add_argument("--bound", type=int, default=2, help="coefficient bound per coordinate")
    p.add_argument("--workers", type=int, default=1, help="worker processes")

    p = add("two-prime", cmd_two_prime, "full-rank statistics over pairs of admissible primes")
    p.add_argument("--prime-bound", type=int, default=10_000, help="norm bound for the primes")
    p.add_argument("--oracle-bound", type=int, default=0, help="unit-search bound for deficient pairs (0 disables)")
    p.add_argument("--max-oracle-pairs", type=int, default=None, help="cap on deficient pairs searched")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
