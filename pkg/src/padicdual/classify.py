"""Homomorphisms, isomorphisms and invariants of factored forms.

A rational matrix ``V`` (``rank_B x rank_A``) is a homomorphism
``G(A) -> G(B)`` exactly when, at every prime, each row of ``B_p V`` lies in
the ``Z_p``-row span of ``A_p``.  Only primes where either form is
exceptional, or where ``V`` has a denominator, need checking: elsewhere both
sides are the identity and ``V`` is p-integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from sympy import Matrix, Rational

from .errors import DimensionMismatch, PrecisionExhausted, SingularMatrix
from .groups import SAFETY_MARGIN, ZERO_ROW, FactoredForm, denominator_primes, local_image
from .linalg import PadicMatrix, is_gl_zp, row_span_member, smith_normal_form
from .padic import PadicInt, int_val


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        ents = tuple(tuple(Fraction(x) for x in r) for r in self.entries)
        if len(ents) != self.rows or any(len(r) != self.cols for r in ents):
            raise DimensionMismatch(f"entries do not form a {self.rows}x{self.cols} matrix")
        object.__setattr__(self, "entries", ents)

    @classmethod
    def from_rows(cls, rows) -> RationalMatrix:
        rows = [list(r) for r in rows]
        return cls(len(rows), len(rows[0]) if rows else 0, rows)

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls(n, n, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, n: int, x) -> RationalMatrix:
        return cls(n, n, [[Fraction(x) if i == j else 0 for j in range(n)] for i in range(n)])

    def _sympy(self) -> Matrix:
        return Matrix([[Rational(x.numerator, x.denominator) for x in r] for r in self.entries])

    def det(self) -> Fraction:
        d = self._sympy().det()
        return Fraction(int(d.p), int(d.q))

    def inverse(self) -> RationalMatrix:
        if self.rows != self.cols:
            raise DimensionMismatch("only square matrices are invertible")
        if self.det() == 0:
            raise SingularMatrix("V is singular")
        inv = self._sympy().inv()
        return RationalMatrix(
            self.rows,
            self.cols,
            [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(self.cols)] for i in range(self.rows)],
        )

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimensions differ")
        return RationalMatrix(
            self.rows,
            other.cols,
            [
                [sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols)) for j in range(other.cols)]
                for i in range(self.rows)
            ],
        )

    def denominator_primes(self) -> set[int]:
        out = set()
        for r in self.entries:
            out |= denominator_primes(r)
        return out


def _scaled_product(B: PadicMatrix, V: RationalMatrix) -> tuple[list[list[int]], int]:
    """``p**d * B V`` modulo ``p**N`` as residues, with ``d`` the p-part of V's denominators."""
    p, q = B.p, B.modulus
    L = lcm(*(x.denominator for r in V.entries for x in r), 1)
    d = int_val(L, p) if L % p == 0 else 0
    inv = pow(L // p**d, -1, q)
    W = [[int(x * L) for x in r] for r in V.entries]
    out = []
    for row in B.entries:
        out.append([sum(row[k] * W[k][j] for k in range(V.rows)) * inv % q for j in range(V.cols)])
    return out, d


@dataclass(frozen=True)
class PrimeCheck:
    holds: bool
    margin: int


@dataclass(frozen=True)
class Verdict:
    verdict: bool
    checked_primes: tuple[int, ...]
    min_margin: int
    precision: int
    per_prime: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "checked_primes": list(self.checked_primes),
            "min_margin": self.min_margin,
            "precision": self.precision,
            "per_prime": {str(p): c.holds for p, c in sorted(self.per_prime.items())},
        }


def _hom_at(ffA: FactoredForm, ffB: FactoredForm, V: RationalMatrix, p: int) -> PrimeCheck:
    N = min(ffA.precision, ffB.precision)
    A = ffA.dual_matrix(p).reduce(N)
    B = ffB.dual_matrix(p).reduce(N)
    rows, d = _scaled_product(B, V)
    if d > N - SAFETY_MARGIN:
        raise PrecisionExhausted(f"denominator {p}^{d} in V leaves too few digits at precision {N}")
    q = p**N
    Ad = PadicMatrix.from_rows([[x * p**d % q for x in r] for r in A.entries], p, N, A.cols)
    margin = N - d
    for r in rows:
        res = row_span_member(r, Ad)
        if not res:
            return PrimeCheck(False, margin)
        margin = min(margin, res.margin - d)
    return PrimeCheck(True, margin)


def _check_dims(ffA, ffB, V):
    if V.rows != ffB.rank or V.cols != ffA.rank:
        raise DimensionMismatch(f"V must be {ffB.rank}x{ffA.rank}, got {V.rows}x{V.cols}")


def hom_check(ffA: FactoredForm, ffB: FactoredForm, V: RationalMatrix) -> Verdict:
    """Does ``v |-> V v`` map ``G(A)`` into ``G(B)``?"""
    _check_dims(ffA, ffB, V)
    primes = sorted(set(ffA.primes) | set(ffB.primes) | V.denominator_primes())
    per = {p: _hom_at(ffA, ffB, V, p) for p in primes}
    N = min(ffA.precision, ffB.precision)
    return Verdict(
        all(c.holds for c in per.values()),
        tuple(primes),
        min((c.margin for c in per.values()), default=N),
        N,
        per,
    )


def iso_check(ffA: FactoredForm, ffB: FactoredForm, V: RationalMatrix) -> Verdict:
    """Is ``V`` an isomorphism ``G(A) -> G(B)``?

    Checked as: ``V`` and ``V^-1`` are both homomorphisms, and the dual ranks
    agree at every examined prime.
    """
    _check_dims(ffA, ffB, V)
    Vinv = V.inverse()
    primes = sorted(
        set(ffA.primes) | set(ffB.primes) | V.denominator_primes() | Vinv.denominator_primes()
    )
    per = {}
    for p in primes:
        if ffA.dual_rank(p) != ffB.dual_rank(p):
            per[p] = PrimeCheck(False, min(ffA.precision, ffB.precision))
            continue
        fwd = _hom_at(ffA, ffB, V, p)
        back = _hom_at(ffB, ffA, Vinv, p)
        per[p] = PrimeCheck(fwd.holds and back.holds, min(fwd.margin, back.margin))
    N = min(ffA.precision, ffB.precision)
    return Verdict(
        all(c.holds for c in per.values()),
        tuple(primes),
        min((c.margin for c in per.values()), default=N),
        N,
        per,
    )


def gram_cross_check(ffA: FactoredForm, ffB: FactoredForm, V: RationalMatrix, p: int) -> bool | None:
    """Independent isomorphism test at ``p`` through the Gram matrix of ``B_p``.

    If ``B_p = U A_p V^-1`` then ``W = U^-1`` solves
    ``W (B_p B_p^t) = A_p V^-1 B_p^t``.  Returns ``None`` when ``B_p B_p^t`` is
    singular at precision (isotropic rows), otherwise whether the solution
    ``W`` is in ``GL(n_p, Z_p)`` and satisfies ``W B_p = A_p V^-1``.
    """
    n = ffB.dual_rank(p)
    if n != ffA.dual_rank(p):
        return False
    if n == 0:
        return True
    N = min(ffA.precision, ffB.precision)
    A = ffA.dual_matrix(p).reduce(N)
    B = ffB.dual_matrix(p).reduce(N)
    Bt = B.transpose()
    G = B @ Bt
    exps = smith_normal_form(G).exponents()
    e = max(exps)
    R, d = _scaled_product(A, V.inverse())
    if e + d + SAFETY_MARGIN > N:
        return None
    # p^d W G = R B^t
    RBt = PadicMatrix.from_rows(R, p, N, A.cols) @ Bt
    W = []
    for row in RBt.entries:
        res = row_span_member(row, G)
        if not res:
            return False
        W.append(list(res.coefficients))
    # W' = p^d W is known mod p^(N-e); divide out p^d
    pd = p**d
    if any(x % pd for r in W for x in r) or any(x % pd for r in R for x in r):
        return False
    prec = N - e - d
    qq = p**prec
    W = PadicMatrix.from_rows([[x // pd % qq for x in r] for r in W], p, prec, n)
    if not is_gl_zp(W):
        return False
    target = [[x // pd % qq for x in r] for r in R]
    return [list(r) for r in (W @ B.reduce(prec)).entries] == target


# -- rank one --------------------------------------------------------------


@dataclass(frozen=True)
class Rank1Type:
    """Exponents ``k_p`` (``math.inf`` for p-divisible); absent primes mean 0."""

    exponents: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "exponents", {p: k for p, k in sorted(self.exponents.items()) if k != 0})

    @property
    def infinite(self) -> frozenset:
        return frozenset(p for p, k in self.exponents.items() if k == math.inf)

    def __str__(self):
        parts = [f"{p}: {'inf' if k == math.inf else k}" for p, k in self.exponents.items()]
        return "{" + ", ".join(parts) + "}"


def rank1_type(ff: FactoredForm) -> Rank1Type:
    if ff.rank != 1:
        raise DimensionMismatch(f"type is defined for rank 1, got rank {ff.rank}")
    out = {}
    for p in ff.primes:
        A = ff.exceptional[p]
        if A is ZERO_ROW:
            out[p] = math.inf
            continue
        x = A.entries[0][0]
        if x == 0:
            raise PrecisionExhausted(f"A_{p} is zero at precision {ff.precision}")
        out[p] = int_val(x, p)
    return Rank1Type(out)


def rank1_iso(t1: Rank1Type, t2: Rank1Type) -> bool:
    # finite support makes the finitely-many-differences condition automatic
    return t1.infinite == t2.infinite


def rank1_witness(t1: Rank1Type, t2: Rank1Type) -> Fraction | None:
    """Scalar ``V`` with ``V G1 = G2``, or ``None`` when the types differ."""
    if not rank1_iso(t1, t2):
        return None
    V = Fraction(1)
    for p in set(t1.exponents) | set(t2.exponents):
        k1, k2 = t1.exponents.get(p, 0), t2.exponents.get(p, 0)
        if k1 != math.inf:
            V *= Fraction(p) ** (k1 - k2)
    return V


# -- double dual and completions ------------------------------------------


def phi_p(ff: FactoredForm, p: int, v) -> list[PadicInt]:
    """Coordinates of the double-dual image of ``v``: ``A_p v``."""
    image, prec = local_image(ff, p, v)
    return [PadicInt(p, x, prec) for x in image]


@dataclass(frozen=True)
class QuotientInvariants:
    p: int
    orders: tuple[int, ...]

    def __str__(self):
        return "[" + ", ".join(str(x) for x in self.orders) + "]"


def quotient_structure(ff: FactoredForm, p: int, k: int) -> QuotientInvariants:
    """Invariant factors of ``G / p^k G``: ``n_p`` copies of ``p^k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k + SAFETY_MARGIN > ff.precision:
        raise PrecisionExhausted(f"k={k} needs precision at least {k + SAFETY_MARGIN}")
    return QuotientInvariants(p, (p**k,) * ff.dual_rank(p))
