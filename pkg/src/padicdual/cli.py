"""Command-line front end.

Exit codes: 0 verdict true / success, 1 verdict false, 2 parse error,
3 invalid input, 4 precision exhausted, 5 disagreement with ``--oracle``.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import classify, functionals, groups, io, oracle
from .errors import (
    DimensionMismatch,
    InvalidForm,
    NotAMember,
    NotContractive,
    NotFound,
    PadicError,
    PrecisionExhausted,
    PrimeMismatch,
    SingularMatrix,
)
from .padic import DEFAULT_PRECISION, check_prime

log = logging.getLogger("padicdual")

EXIT_TRUE, EXIT_FALSE, EXIT_PARSE, EXIT_INVALID, EXIT_PRECISION, EXIT_ORACLE = range(6)
RECOMMENDED_MIN_PRECISION = 8
NEGATIVE_VECTOR = re.compile(r"^-\d[\d/,;\s-]*$")


class OracleMismatch(Exception):
    pass


@dataclass
class CliConfig:
    precision: int | None = None
    prime: int | None = None
    json: bool = False
    oracle: bool = False

    def __post_init__(self):
        if self.precision is not None:
            if self.precision < 1:
                raise ValueError("--precision must be positive")
            if self.precision < RECOMMENDED_MIN_PRECISION:
                log.warning(
                    "precision %d is below %d; most decisions will run out of digits",
                    self.precision,
                    RECOMMENDED_MIN_PRECISION,
                )
        if self.prime is not None:
            check_prime(self.prime)


def resolve_spec(name: str) -> Path:
    """A path on disk, or the name of a bundled fixture."""
    path = Path(name)
    if path.exists():
        return path
    bundled = resources.files("padicdual") / "fixtures" / name
    if bundled.is_file():
        return Path(str(bundled))
    raise FileNotFoundError(f"no such group spec: {name}")


def _load(name, cfg):
    path = resolve_spec(name)
    doc = io.read_json(path)
    return doc, io.load_group_spec(doc, cfg.precision)


def _require_prime(cfg):
    if cfg.prime is None:
        raise ValueError("--p is required for this command")
    return cfg.prime


def _emit(cfg, payload, text):
    print(json.dumps(payload) if cfg.json else text)


def _int_vector(v):
    return all(Fraction(x).denominator == 1 for x in v)


# -- commands --------------------------------------------------------------


def cmd_dual(args, cfg):
    doc = io.read_json(resolve_spec(args.spec))
    if not io.is_limit_spec(doc):
        raise ValueError("dual expects a limit_matrix document")
    g = io.limit_group(doc)
    N = cfg.precision or DEFAULT_PRECISION
    if cfg.prime is not None:
        A = groups.dual_from_inductive_limit(g, cfg.prime, N)
        item = {"p": cfg.prime, "zero_row": True} if A.rows == 0 else {"p": cfg.prime, "rows": io.dump_matrix_rows(A)}
        out = {"rank": g.rank, "precision": N, "exceptional": [item]}
        primes = [cfg.prime]
    else:
        ff = groups.factored_form_of_inductive_limit(g, N)
        out = io.dump_factored_form(ff)
        primes = g.exceptional_primes
    if cfg.oracle:
        ff = groups.factored_form_of_inductive_limit(g, N)
        for p in primes:
            for k in (1, 2):
                if k + groups.SAFETY_MARGIN > N:
                    continue
                mine = list(classify.quotient_structure(ff, p, k).orders)
                theirs = oracle.oracle_quotient(g.matrix, p, k)
                if mine != theirs:
                    raise OracleMismatch(f"G/{p}^{k}G: {mine} vs oracle {theirs}")
    print(json.dumps(out, indent=None if cfg.json else 2))
    return EXIT_TRUE


def cmd_member(args, cfg):
    doc, ff = _load(args.spec, cfg)
    v = io.parse_vector(args.vector)
    result = groups.membership(ff, v)
    primes = groups.relevant_primes(ff, v)
    margin = min((groups.local_image(ff, p, v)[1] for p in primes if result), default=ff.precision)
    if cfg.oracle and io.is_limit_spec(doc):
        if oracle.oracle_member(io.limit_group(doc).matrix, v) != result:
            raise OracleMismatch("membership disagrees with the oracle")
    payload = {"verdict": result, "checked_primes": primes, "min_margin": margin, "precision": ff.precision}
    _emit(cfg, payload, str(result).lower())
    return EXIT_TRUE if result else EXIT_FALSE


def cmd_metric(args, cfg):
    doc, ff = _load(args.spec, cfg)
    p = _require_prime(cfg)
    v = io.parse_vector(args.vector)
    m = groups.p_metric(ff, p, v)
    if cfg.oracle and io.is_limit_spec(doc) and _int_vector(v) and m.exact:
        A = io.limit_group(doc).matrix
        w = [int(x) for x in v]
        if not (oracle.oracle_divisible(A, w, p, m.exponent) and not oracle.oracle_divisible(A, w, p, m.exponent + 1)):
            raise OracleMismatch(f"metric {m} disagrees with the oracle")
    payload = {"p": p, "metric": str(m), "exponent": m.exponent, "exact": m.exact, "margin": m.margin}
    _emit(cfg, payload, str(m))
    return EXIT_TRUE


def cmd_divisible(args, cfg):
    doc, ff = _load(args.spec, cfg)
    p = _require_prime(cfg)
    v = io.parse_vector(args.vector)
    result = groups.divisible(ff, p, args.k, v)
    if cfg.oracle and io.is_limit_spec(doc) and _int_vector(v):
        o = oracle.oracle_divisible(io.limit_group(doc).matrix, [int(x) for x in v], p, args.k)
        if not o.exhausted and o.divisible != result:
            raise OracleMismatch("divisibility disagrees with the oracle")
    _, prec = groups.local_image(ff, p, v)
    payload = {"verdict": result, "checked_primes": [p], "min_margin": prec - args.k, "precision": ff.precision}
    _emit(cfg, payload, str(result).lower())
    return EXIT_TRUE if result else EXIT_FALSE


def _verdict_text(v: classify.Verdict) -> str:
    lines = [str(v.verdict).lower()]
    for p, c in sorted(v.per_prime.items()):
        lines.append(f"  p={p}: {'ok' if c.holds else 'fails'} (margin {c.margin})")
    return "\n".join(lines)


def cmd_hom(args, cfg):
    _, A = _load(args.spec_a, cfg)
    _, B = _load(args.spec_b, cfg)
    V = io.parse_matrix(args.V, B.rank, A.rank)
    v = classify.hom_check(A, B, V)
    _emit(cfg, v.to_json(), _verdict_text(v))
    return EXIT_TRUE if v else EXIT_FALSE


def cmd_iso(args, cfg):
    _, A = _load(args.spec_a, cfg)
    _, B = _load(args.spec_b, cfg)
    V = io.parse_matrix(args.V, B.rank, A.rank)
    v = classify.iso_check(A, B, V)
    if cfg.oracle:
        for p in v.checked_primes:
            g = classify.gram_cross_check(A, B, V, p)
            if g is not None and g != v.per_prime[p].holds:
                raise OracleMismatch(f"Gram cross-check disagrees at p={p}")
    _emit(cfg, v.to_json(), _verdict_text(v))
    return EXIT_TRUE if v else EXIT_FALSE


def cmd_type(args, cfg):
    _, ff = _load(args.spec, cfg)
    t = classify.rank1_type(ff)
    payload = {str(p): ("inf" if k == float("inf") else k) for p, k in t.exponents.items()}
    _emit(cfg, payload, str(t))
    return EXIT_TRUE


def cmd_quotient(args, cfg):
    doc, ff = _load(args.spec, cfg)
    p = _require_prime(cfg)
    q = classify.quotient_structure(ff, p, args.k)
    if cfg.oracle and io.is_limit_spec(doc):
        theirs = oracle.oracle_quotient(io.limit_group(doc).matrix, p, args.k)
        if list(q.orders) != theirs:
            raise OracleMismatch(f"{q} vs oracle {theirs}")
    _emit(cfg, {"p": p, "k": args.k, "orders": list(q.orders)}, str(q))
    return EXIT_TRUE


def cmd_simple(args, cfg):
    _, ff = _load(args.spec, cfg)
    p = _require_prime(cfg)
    s = groups.is_p_simple(ff, p)
    _emit(cfg, {"p": p, "simplicity": s.value}, s.value)
    return EXIT_TRUE


def cmd_validate(args, cfg):
    _, ff = _load(args.spec, cfg)
    rep = groups.validate_factored_form(ff)
    _emit(cfg, {"ok": rep.ok, "violations": list(rep.violations)}, "ok" if rep else "\n".join(rep.violations))
    return EXIT_TRUE if rep else EXIT_FALSE


def cmd_extend(args, cfg):
    _, ff = _load(args.spec, cfg)
    p = _require_prime(cfg)
    gens = io.parse_vector_list(args.gens)
    values = [Fraction(x) for x in args.values.split(",")] if args.values.strip() else []
    try:
        f = functionals.extend_from_subgroup(ff, p, gens, values)
    except NotContractive as e:
        _emit(cfg, {"extends": False, "index": e.index, "reason": str(e)}, f"no extension: {e}")
        return EXIT_FALSE
    payload = {"extends": True, "functional": f.to_json()}
    text = f"coefficients {list(f.coefficients)} mod {p}^{f.precision}"
    if args.at:
        d = functionals.admissible_values(ff, p, gens, values, io.parse_vector(args.at))
        payload["admissible"] = str(d)
        text += f"\nadmissible values at {args.at}: {d}"
    _emit(cfg, payload, text)
    return EXIT_TRUE


def cmd_separate(args, cfg):
    _, ff = _load(args.spec, cfg)
    p = _require_prime(cfg)
    h = io.parse_vector_list(args.h)
    g = io.parse_vector(args.g)
    try:
        f = functionals.separating_functional(ff, p, h, g, args.m)
    except NotFound as e:
        _emit(cfg, {"found": False, "reason": str(e)}, f"not found: {e}")
        return EXIT_FALSE
    value = functionals.evaluate(f, g)
    payload = {"found": True, "functional": f.to_json(), "value_at_g": str(value)}
    _emit(cfg, payload, f"coefficients {list(f.coefficients)} mod {p}^{f.precision}; f(g) = {value}")
    return EXIT_TRUE


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="prime")
    common.add_argument("--precision", type=int, help=f"p-adic digits (default {DEFAULT_PRECISION})")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--oracle", action="store_true", help="cross-check against brute force")

    parser = argparse.ArgumentParser(prog="padicdual", description="p-adic duals of torsion-free abelian groups")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, *positional):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for arg in positional:
            sp.add_argument(arg)
        sp.set_defaults(func=fn)
        return sp

    add("dual", cmd_dual, "factored form of a stationary inductive limit", "spec")
    add("member", cmd_member, "membership of a rational vector", "spec", "vector")
    add("metric", cmd_metric, "p-adic distance to 0", "spec", "vector")
    add("divisible", cmd_divisible, "is v in p^k G", "spec", "vector").add_argument("--k", type=int, required=True)
    add("hom", cmd_hom, "is V a homomorphism G(A) -> G(B)", "spec_a", "spec_b").add_argument("--V", required=True)
    add("iso", cmd_iso, "is V an isomorphism G(A) -> G(B)", "spec_a", "spec_b").add_argument("--V", required=True)
    add("type", cmd_type, "type of a rank-one group", "spec")
    add("quotient", cmd_quotient, "invariant factors of G/p^kG", "spec").add_argument("--k", type=int, required=True)
    add("simple", cmd_simple, "p-simplicity", "spec")
    add("validate", cmd_validate, "check the factored-form conditions", "spec")
    sp = add("extend", cmd_extend, "extend a functional from a subgroup", "spec")
    sp.add_argument("--gens", required=True, help='generators, e.g. "1,0;0,1"')
    sp.add_argument("--values", required=True, help='values, e.g. "1,0"')
    sp.add_argument("--at", help="also report the admissible values at this element")
    sp = add("separate", cmd_separate, "separate g from a subgroup H", "spec")
    sp.add_argument("--h", required=True, help='generators of H, e.g. "3,0;0,3"')
    sp.add_argument("--g", required=True)
    sp.add_argument("--m", type=int, required=True)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    # argparse would read "-1,1" as an option; a leading space keeps it positional
    argv = [" " + a if NEGATIVE_VECTOR.match(a) else a for a in argv]
    args = parser.parse_args(argv)
    try:
        cfg = CliConfig(args.precision, args.p, args.json, args.oracle)
    except ValueError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args, cfg)
    except PrecisionExhausted as e:
        print(f"precision exhausted: {e}; re-run with a larger --precision", file=sys.stderr)
        return EXIT_PRECISION
    except OracleMismatch as e:
        print(f"oracle mismatch: {e}", file=sys.stderr)
        return EXIT_ORACLE
    except (InvalidForm, SingularMatrix, DimensionMismatch, NotAMember, PrimeMismatch, PadicError) as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError, ZeroDivisionError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
