"""Brute-force reference computations for stationary inductive limits.

Everything here works with plain integers on ``G = union_n A^-n Z^r`` and
deliberately shares no code with the p-adic modules, so the two can check
each other.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from dataclasses import dataclass

from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors

HENSEL_SEARCH_LIMIT = 10**7
ENUMERATION_LIMIT = 200_000


def _mat_vec(A, v, q=None):
    out = [sum(a * x for a, x in zip(row, v)) for row in A]
    return [x % q for x in out] if q else out


def _mat_mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _mat_pow(A, m):
    R = [[int(i == j) for j in range(len(A))] for i in range(len(A))]
    for _ in range(m):
        R = _mat_mul(R, A)
    return R


@dataclass(frozen=True)
class OracleResult:
    divisible: bool
    exhausted: bool
    steps: int

    def __bool__(self):
        return self.divisible


def oracle_divisible(A, g, p: int, k: int, m_max: int | None = None) -> OracleResult:
    """Is ``A^m g == 0 mod p^k`` for some ``m <= m_max``?

    The kernels of ``A^m`` on ``(Z/p^k)^r`` form an increasing chain in a
    module of length ``k r``, so they stop growing by ``m = k r``.  A search
    reaching that far is therefore decisive; ``exhausted`` is set only when a
    smaller ``m_max`` runs out.
    """
    r = len(A)
    if m_max is None:
        m_max = k * r + 4
    q = p**k
    x = [int(a) % q for a in g]
    for m in range(m_max + 1):
        if not any(x):
            return OracleResult(True, False, m)
        x = _mat_vec(A, x, q)
    return OracleResult(False, m_max < k * r, m_max)


def _kernel_power(A, p, k):
    """Smallest ``M`` after which ``ker(A^M mod p^k)`` stops growing."""
    # ker A^M == ker A^(M+1) forces equality for every later power
    M, prev = 0, None
    while True:
        size = _image_size(_mat_pow(A, M), p, k)
        if size == prev:
            return M - 1
        prev, M = size, M + 1


def _p_parts(P, p, k):
    """``p``-parts of the invariant factors of ``P``, capped at ``p^k``."""
    q = p**k
    out = []
    for d in invariant_factors(Matrix(P)):
        d = abs(int(d))
        g = 1
        while g < q and d and d % (g * p) == 0:
            g *= p
        if d == 0:
            g = q
        out.append(g)
    out += [q] * (len(P) - len(out))
    return out


def _image_size(P, p, k):
    q = p**k
    size = 1
    for g in _p_parts(P, p, k):
        size *= q // g
    return size


def oracle_quotient(A, p: int, k: int) -> list[int]:
    """Invariant factors of ``G / p^k G``.

    ``Z^r`` meets ``p^k G`` in ``{z : A^M z == 0 mod p^k}``, so the quotient is
    the image of ``A^M`` in ``(Z/p^k)^r``, whose invariants come from the
    integer Smith form of ``A^M``.
    """
    M = _kernel_power(A, p, k)
    q = p**k
    orders = [q // g for g in _p_parts(_mat_pow(A, M), p, k)]
    return sorted(x for x in orders if x > 1)


def oracle_hensel(coeffs, p: int, N: int) -> list[int]:
    """All ``x`` in ``[0, p^N)`` with ``f(x) == 0 mod p^N``; coefficients constant term first."""
    q = p**N
    if q > HENSEL_SEARCH_LIMIT:
        raise ValueError(f"{p}^{N} exceeds the search limit")
    out = []
    for x in range(q):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % q
        if acc == 0:
            out.append(x)
    return out


def _span_mod(gens, r, q):
    """Subgroup of ``(Z/q)^r`` generated by ``gens``, by closure."""
    seen = {tuple([0] * r)}
    frontier = list(seen)
    gens = [tuple(x % q for x in g) for g in gens]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                t = tuple((a + b) % q for a, b in zip(s, g))
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
        if len(seen) > ENUMERATION_LIMIT:
            raise ValueError("subgroup too large to enumerate")
    return seen


def oracle_in_subgroup_plus_pmG(A, h_gens, g, p: int, m: int) -> bool:
    """Is the integer vector ``g`` in ``H + p^m G``, ``H`` spanned by integer ``h_gens``?

    Everything is decided inside ``(Z/p^m)^r``: ``(H + p^m G) cap Z^r`` is
    ``H + {z : A^M z == 0 mod p^m}``.
    """
    r = len(A)
    q = p**m
    if q**r > ENUMERATION_LIMIT:
        raise ValueError("instance too large to enumerate")
    if m == 0:
        return True
    P = _mat_pow(A, _kernel_power(A, p, m))
    kernel = [z for z in itertools.product(range(q), repeat=r) if not any(_mat_vec(P, z, q))]
    span = _span_mod(list(h_gens) + kernel, r, q)
    return tuple(x % q for x in g) in span


def oracle_member(A, v) -> bool:
    """Is the rational vector ``v`` in ``union_n A^-n Z^r``, i.e. ``A^m v`` integral for some ``m``?

    ``A^m v`` keeps the denominators of ``v``, so its class modulo ``Z^r`` runs
    through a finite set and a repeat ends the search.
    """
    x = [Fraction(a) for a in v]
    seen = set()
    while True:
        if all(a.denominator == 1 for a in x):
            return True
        key = tuple(a - (a.numerator // a.denominator) for a in x)
        if key in seen:
            return False
        seen.add(key)
        x = _mat_vec(A, key)
