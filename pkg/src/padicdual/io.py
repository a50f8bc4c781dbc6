"""JSON group specs, vectors and matrices as they appear on the command line."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .classify import RationalMatrix
from .errors import InvalidForm
from .groups import (
    ZERO_ROW,
    FactoredForm,
    InductiveLimitGroup,
    factored_form_of_inductive_limit,
    parse_element,
)
from .linalg import PadicMatrix
from .padic import DEFAULT_PRECISION, check_prime, parse_padic_literal


def read_json(source) -> dict:
    """Load JSON from a path, or pass a dict straight through."""
    if isinstance(source, dict):
        return source
    with open(source) as fh:
        return json.load(fh)


def is_limit_spec(doc: dict) -> bool:
    return "limit_matrix" in doc


def limit_group(doc: dict) -> InductiveLimitGroup:
    rows = doc["limit_matrix"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValueError("limit_matrix must be a list of integer rows")
    return InductiveLimitGroup(tuple(tuple(int(x) for x in r) for r in rows))


def load_group_spec(source, precision: int | None = None) -> FactoredForm:
    """Build a :class:`FactoredForm` from a group-spec document.

    ``precision`` overrides the document's own value.  Entries may be bare
    integers or literals such as ``"24+O(3^3)"``; a literal known to fewer
    digits than the working precision is rejected.
    """
    doc = read_json(source)
    if is_limit_spec(doc):
        N = precision or doc.get("precision", DEFAULT_PRECISION)
        return factored_form_of_inductive_limit(limit_group(doc), N)
    try:
        n = int(doc["rank"])
    except KeyError:
        raise ValueError("group spec needs 'rank' or 'limit_matrix'") from None
    N = precision or int(doc.get("precision", DEFAULT_PRECISION))
    exceptional = {}
    for item in doc.get("exceptional", []):
        p = check_prime(int(item["p"]))
        if p in exceptional:
            raise InvalidForm(f"prime {p} listed twice")
        if item.get("zero_row"):
            exceptional[p] = ZERO_ROW
            continue
        rows = []
        for row in item["rows"]:
            out = []
            for x in row:
                a = parse_padic_literal(x, p, N)
                if a.precision < N:
                    raise InvalidForm(f"entry {x!r} is known only mod {p}^{a.precision}, need {p}^{N}")
                out.append(a.residue)
            rows.append(out)
        exceptional[p] = PadicMatrix.from_rows(rows, p, N, n)
    return FactoredForm(n, N, exceptional)


def dump_matrix_rows(A: PadicMatrix) -> list[list[str]]:
    return [[str(x) for x in r] for r in A.entries]


def dump_factored_form(ff: FactoredForm, comment: str | None = None, primes=None) -> dict:
    primes = ff.primes if primes is None else primes
    items = []
    for p in primes:
        if ff.is_zero_row(p):
            items.append({"p": p, "zero_row": True})
        else:
            items.append({"p": p, "rows": dump_matrix_rows(ff.dual_matrix(p))})
    doc = {"rank": ff.rank, "precision": ff.precision, "exceptional": items}
    if comment:
        doc["comment"] = comment
    return doc


def parse_vector(text: str) -> tuple[Fraction, ...]:
    return parse_element(text)


def parse_vector_list(text: str) -> list[tuple[Fraction, ...]]:
    """``"3,0; 0,3"`` -> two vectors.  An empty string is the empty list."""
    text = text.strip()
    if not text:
        return []
    return [parse_element(part) for part in text.split(";")]


def parse_matrix(text: str, rows: int, cols: int) -> RationalMatrix:
    """Parse ``--V``: JSON rows, ``@file``, ``identity``, or one rational (a scalar matrix)."""
    text = text.strip()
    if text.startswith("@"):
        text = Path(text[1:]).read_text().strip()
    if text == "identity":
        if rows != cols:
            raise ValueError("identity needs equal ranks")
        return RationalMatrix.identity(rows)
    if text.startswith("["):
        # let bare fractions like [[1/9]] through as strings
        data = json.loads(re.sub(r"(?<![\"\w])(-?\d+/\d+)", r'"\1"', text))
        if data and not isinstance(data[0], list):
            data = [data]
        return RationalMatrix.from_rows([[Fraction(str(x)) for x in r] for r in data])
    x = Fraction(text)
    if rows != cols:
        raise ValueError("a scalar matrix needs equal ranks")
    return RationalMatrix.scalar(rows, x)
