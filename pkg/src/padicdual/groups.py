"""Finite-rank torsion-free abelian groups in factored form.

A :class:`FactoredForm` describes ``G = {v in Q^n : A_p v in Z_p^{n_p} for all p}``
by listing the finitely many primes where ``A_p`` is not the identity.  The
rows of ``A_p`` are a ``Z_p``-basis of the p-adic dual of ``G``, so the p-adic
size of ``v`` (how divisible it is by powers of ``p`` inside ``G``) is simply
``||A_p v||_p``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from sympy import Matrix, primefactors

from .errors import InvalidForm, NotAMember, PrecisionExhausted, SingularMatrix
from .linalg import PadicMatrix, column_span_dense, smith_normal_form, stable_row_module
from .padic import DEFAULT_PRECISION, check_prime, int_val, rational_val

# Digits of slack required between a decided valuation and the precision limit.
SAFETY_MARGIN = 4


class _ZeroRow:
    """Marker for ``A_p`` = the zero row, i.e. ``G`` is p-divisible."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO_ROW"


ZERO_ROW = _ZeroRow()


def element(coords) -> tuple[Fraction, ...]:
    """Coerce a sequence of ints/strings/Fractions into a group element."""
    return tuple(Fraction(x) for x in coords)


def parse_element(text: str) -> tuple[Fraction, ...]:
    """``"1/5, -1/5"`` -> ``(Fraction(1, 5), Fraction(-1, 5))``."""
    parts = [s.strip() for s in text.split(",")]
    if not parts or any(not s for s in parts):
        raise ValueError(f"bad vector {text!r}")
    return element(parts)


def denominator_primes(v) -> set[int]:
    out = set()
    for x in v:
        out.update(primefactors(Fraction(x).denominator))
    return out


@dataclass(frozen=True)
class FactoredForm:
    rank: int
    precision: int = DEFAULT_PRECISION
    exceptional: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidForm("rank must be positive")
        for p, A in self.exceptional.items():
            check_prime(p)
            if A is ZERO_ROW:
                continue
            if not isinstance(A, PadicMatrix):
                raise InvalidForm(f"p={p}: expected a PadicMatrix or ZERO_ROW")
            if A.p != p:
                raise InvalidForm(f"p={p}: matrix is {A.p}-adic")
            if A.cols != self.rank:
                raise InvalidForm(f"p={p}: matrix has {A.cols} columns, rank is {self.rank}")
            if A.precision != self.precision:
                raise InvalidForm(f"p={p}: matrix precision {A.precision} != {self.precision}")
            if A.rows == 0:
                raise InvalidForm(f"p={p}: use ZERO_ROW for a p-divisible group")

    @property
    def primes(self) -> list[int]:
        return sorted(self.exceptional)

    def dual_matrix(self, p: int) -> PadicMatrix:
        """``A_p``; identity off the exceptional set, ``0 x n`` for ZERO_ROW."""
        A = self.exceptional.get(p)
        if A is None:
            return PadicMatrix.identity(self.rank, p, self.precision)
        if A is ZERO_ROW:
            return PadicMatrix.zeros(0, self.rank, p, self.precision)
        return A

    def dual_rank(self, p: int) -> int:
        """``n_p``: rank of the p-adic dual (0 when p-divisible)."""
        return self.dual_matrix(p).rows

    def is_zero_row(self, p: int) -> bool:
        return self.exceptional.get(p) is ZERO_ROW


@dataclass(frozen=True)
class FormReport:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


def validate_factored_form(ff: FactoredForm) -> FormReport:
    """Check the factored-form conditions prime by prime.

    Construction only enforces shape; this reports rows that exceed the rank,
    rows that are dependent at the working precision, and column spans that
    are not dense.
    """
    problems = []
    for p in ff.primes:
        A = ff.exceptional[p]
        if A is ZERO_ROW:
            continue
        if A.rows > ff.rank:
            problems.append(f"p={p}: n_p={A.rows} exceeds rank {ff.rank}")
        exps = smith_normal_form(A).exponents()
        if len(exps) < A.rows or max(exps) >= ff.precision:
            problems.append(f"p={p}: rows are dependent at precision {ff.precision}")
        if not column_span_dense(A):
            problems.append(f"p={p}: column span is not dense in Z_{p}^{A.rows}")
    return FormReport(not problems, tuple(problems))


def local_image(ff: FactoredForm, p: int, v) -> tuple[list[int], int]:
    """``A_p v`` as residues together with the precision they are known to.

    Denominators of ``v`` divisible by ``p**d`` cost ``d`` digits.  Raises
    :class:`NotAMember` if ``A_p v`` is not p-integral.
    """
    v = element(v)
    if len(v) != ff.rank:
        raise ValueError(f"vector has {len(v)} coordinates, rank is {ff.rank}")
    N = ff.precision
    d = max((-rational_val(x, p) for x in v if x), default=0)
    d = max(d, 0)
    A = ff.dual_matrix(p)
    if p not in ff.exceptional:
        if d > 0:
            raise NotAMember(f"coordinate denominators are divisible by {p}")
        q = p**N
        return [x.numerator * pow(x.denominator, -1, q) % q for x in v], N
    if A.rows == 0:
        return [], N
    if d > N - SAFETY_MARGIN:
        raise PrecisionExhausted(
            f"denominator {p}^{d} leaves fewer than {SAFETY_MARGIN} digits at precision {N}"
        )
    L = lcm(*(x.denominator for x in v))
    cofactor = L // p**d
    w = [int(x * L) for x in v]
    y = A.apply(w)
    pd = p**d
    if any(x % pd for x in y):
        raise NotAMember(f"A_{p} v is not {p}-integral")
    prec = N - d
    q = p**prec
    inv = pow(cofactor, -1, q)
    return [(x // pd) * inv % q for x in y], prec


def relevant_primes(ff: FactoredForm, v) -> list[int]:
    return sorted(set(ff.primes) | denominator_primes(v))


def membership(ff: FactoredForm, v) -> bool:
    v = element(v)
    if len(v) != ff.rank:
        raise ValueError(f"vector has {len(v)} coordinates, rank is {ff.rank}")
    for p in relevant_primes(ff, v):
        try:
            local_image(ff, p, v)
        except NotAMember:
            return False
    return True


@dataclass(frozen=True)
class PMetric:
    """``d_p(v, 0)``: exactly ``p**-exponent``, or at most that when not exact."""

    p: int
    exponent: int
    exact: bool
    margin: int

    def __str__(self):
        if self.exact:
            return f"{self.p}^0" if self.exponent == 0 else f"{self.p}^-{self.exponent}"
        return f"<= {self.p}^-{self.exponent}"


def p_metric(ff: FactoredForm, p: int, v) -> PMetric:
    image, prec = local_image(ff, p, v)
    vals = [int_val(x, p) for x in image if x]
    if not vals:
        return PMetric(p, prec, False, 0)
    k = min(vals)
    return PMetric(p, k, True, prec - k)


def divisible(ff: FactoredForm, p: int, k: int, v) -> bool:
    """Is ``v`` in ``p**k G``?"""
    if k < 0:
        raise ValueError("k must be non-negative")
    image, prec = local_image(ff, p, v)
    if k == 0:
        return True
    if k > prec - SAFETY_MARGIN:
        raise PrecisionExhausted(
            f"deciding divisibility by {p}^{k} needs precision above {k + SAFETY_MARGIN} "
            f"(have {prec} usable digits)"
        )
    return all(x % p**k == 0 for x in image)


def in_Gp_at_precision(ff: FactoredForm, p: int, v, precision: int | None = None) -> bool:
    """Is ``v`` indistinguishable from the p-divisible part ``G_p`` at precision?"""
    image, prec = local_image(ff, p, v)
    if precision is not None:
        prec = min(prec, precision)
    return all(x % p**prec == 0 for x in image)


class Simplicity(str, enum.Enum):
    SIMPLE_NOT_DIVISIBLE = "simple_not_divisible"
    DIVISIBLE = "divisible"
    NOT_SIMPLE = "not_simple"


def is_p_simple(ff: FactoredForm, p: int) -> Simplicity:
    n = ff.dual_rank(p)
    if n == 0:
        return Simplicity.DIVISIBLE
    if n == 1:
        return Simplicity.SIMPLE_NOT_DIVISIBLE
    return Simplicity.NOT_SIMPLE


# -- stationary inductive limits ------------------------------------------


@dataclass(frozen=True)
class InductiveLimitGroup:
    """``G = union_n A^-n Z^r`` for a nonsingular integer matrix ``A``."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in r) for r in self.matrix)
        object.__setattr__(self, "matrix", m)
        if not m or any(len(r) != len(m) for r in m):
            raise ValueError("limit matrix must be square and non-empty")
        if self.det == 0:
            raise SingularMatrix("limit matrix is singular")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @property
    def det(self) -> int:
        return int(Matrix(self.matrix).det())

    @property
    def exceptional_primes(self) -> list[int]:
        return sorted(primefactors(abs(self.det)))


def dual_from_inductive_limit(g: InductiveLimitGroup, p: int, precision: int = DEFAULT_PRECISION) -> PadicMatrix:
    """Canonical basis of ``G^{*p}``: rows ``w`` with ``w A^-n`` integral for all ``n``."""
    check_prime(p)
    if g.det % p:
        return PadicMatrix.identity(g.rank, p, precision)
    return stable_row_module(g.matrix, p, precision)


def factored_form_of_inductive_limit(g: InductiveLimitGroup, precision: int = DEFAULT_PRECISION) -> FactoredForm:
    exceptional = {}
    for p in g.exceptional_primes:
        A = dual_from_inductive_limit(g, p, precision)
        if A.rows == 0:
            exceptional[p] = ZERO_ROW
        elif A.rows == g.rank and A == PadicMatrix.identity(g.rank, p, precision):
            continue
        else:
            exceptional[p] = A
    return FactoredForm(g.rank, precision, exceptional)
