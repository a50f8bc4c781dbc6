"""Linear algebra over ``Z_p`` at capped precision.

Matrices store plain integer residues modulo ``p**N`` (row-major tuples);
:meth:`PadicMatrix.entry` hands out :class:`~padicdual.padic.PadicInt` views.
All reductions use only unimodular row/column operations, so every identity
reported here (``U*A*V == D``, ``c*A == w`` ...) holds exactly modulo
``p**N``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import DimensionMismatch, SingularMatrix
from .padic import PadicInt, check_prime, int_val

log = logging.getLogger(__name__)

# Decisions with less than this many p-adic digits of headroom get a warning.
MARGIN_WARNING = 4


@dataclass(frozen=True)
class PadicMatrix:
    p: int
    precision: int
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        check_prime(self.p)
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch("entries do not match the declared shape")
        q = self.p**self.precision
        if any(not 0 <= x < q for r in self.entries for x in r):
            raise ValueError("entries must be reduced residues")

    @classmethod
    def from_rows(cls, rows, p: int, precision: int, cols: int | None = None) -> PadicMatrix:
        q = p**precision
        data = tuple(tuple(int(x) % q for x in r) for r in rows)
        if cols is None:
            if not data:
                raise DimensionMismatch("column count needed for an empty matrix")
            cols = len(data[0])
        return cls(p, precision, len(data), cols, data)

    @classmethod
    def identity(cls, n: int, p: int, precision: int) -> PadicMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], p, precision, n)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int, precision: int) -> PadicMatrix:
        return cls(p, precision, rows, cols, tuple((0,) * cols for _ in range(rows)))

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def entry(self, i: int, j: int) -> PadicInt:
        return PadicInt(self.p, self.entries[i][j], self.precision)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> PadicMatrix:
        return PadicMatrix(
            self.p,
            self.precision,
            self.cols,
            self.rows,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    def __matmul__(self, other: PadicMatrix) -> PadicMatrix:
        if other.p != self.p:
            raise ValueError("prime mismatch")
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        n = min(self.precision, other.precision)
        return PadicMatrix.from_rows(
            _matmul(self.entries, other.entries, other.cols), self.p, n, other.cols
        )

    def apply(self, vec) -> list[int]:
        """Matrix-vector product of residues, reduced modulo ``p**N``."""
        q = self.modulus
        return [sum(a * b for a, b in zip(r, vec)) % q for r in self.entries]

    def reduce(self, precision: int) -> PadicMatrix:
        return PadicMatrix.from_rows(self.entries, self.p, precision, self.cols)

    def __str__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"[{body}] mod {self.p}^{self.precision}"


def _matmul(a, b, bcols):
    return [[sum(x * b[k][j] for k, x in enumerate(r)) for j in range(bcols)] for r in a]


def _val(x: int, p: int, cap: int) -> int:
    return cap if x == 0 else int_val(x, p)


@dataclass(frozen=True)
class NormalForm:
    """``U @ A @ V == D`` modulo ``p**N`` with ``D`` diagonal, ascending."""

    U: PadicMatrix
    D: PadicMatrix
    V: PadicMatrix

    def exponents(self) -> list[int]:
        """Diagonal exponents; zero-at-precision entries report ``N``."""
        n = min(self.D.rows, self.D.cols)
        N, p = self.D.precision, self.D.p
        return [_val(self.D.entries[i][i], p, N) for i in range(n)]


def smith_normal_form(A: PadicMatrix) -> NormalForm:
    """Smith form over ``Z_p`` with a fixed pivot rule.

    Pivot: smallest valuation in the remaining block, then lowest row index,
    then lowest column index.  Pivots are scaled to pure powers of ``p``.
    """
    p, N = A.p, A.precision
    q = p**N
    m, n = A.rows, A.cols
    M = A.to_lists()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = M[i][j]
                if x and (best is None or int_val(x, p) < best[0]):
                    best = (int_val(x, p), i, j)
        if best is None:
            break
        e, i, j = best
        M[t], M[i] = M[i], M[t]
        U[t], U[i] = U[i], U[t]
        for r in M:
            r[t], r[j] = r[j], r[t]
        for r in V:
            r[t], r[j] = r[j], r[t]

        pe = p**e
        inv = pow(M[t][t] // pe, -1, q)
        M[t] = [x * inv % q for x in M[t]]
        U[t] = [x * inv % q for x in U[t]]

        for i in range(m):
            if i != t and M[i][t]:
                f = M[i][t] // pe
                M[i] = [(a - f * b) % q for a, b in zip(M[i], M[t])]
                U[i] = [(a - f * b) % q for a, b in zip(U[i], U[t])]
        for j in range(n):
            if j != t and M[t][j]:
                f = M[t][j] // pe
                for r in M:
                    r[j] = (r[j] - f * r[t]) % q
                for r in V:
                    r[j] = (r[j] - f * r[t]) % q

    return NormalForm(
        PadicMatrix.from_rows(U, p, N, m),
        PadicMatrix.from_rows(M, p, N, n),
        PadicMatrix.from_rows(V, p, N, n),
    )


@dataclass(frozen=True)
class SolutionSet:
    """``{x : A x == b mod p^N}`` as ``particular + Z_p-span(kernel)``.

    ``kernel`` lists directions free in ``Z_p`` (zero pivots and surplus
    columns).  ``torsion`` lists the extra solutions ``p**(N-e) * v`` that only
    exist because of the finite precision; they vanish as ``N`` grows.
    ``margin`` is ``N`` minus the largest pivot exponent consumed.
    """

    p: int
    precision: int
    particular: tuple[int, ...]
    kernel: tuple[tuple[int, ...], ...]
    torsion: tuple[tuple[int, ...], ...] = field(default=())
    margin: int = 0


def _solve(A: PadicMatrix, b) -> tuple[SolutionSet | None, int | None]:
    p, N = A.p, A.precision
    q = p**N
    b = [int(x) % q for x in b]
    if len(b) != A.rows:
        raise DimensionMismatch(f"right-hand side has length {len(b)}, expected {A.rows}")
    nf = smith_normal_form(A)
    c = nf.U.apply(b)
    Vm = nf.V.entries
    m, n = A.rows, A.cols
    y = [0] * n
    kernel, torsion = [], []
    used = [0]
    for i in range(m):
        d = nf.D.entries[i][i] if i < min(m, n) else 0
        if d:
            e = int_val(d, p)
            if c[i] % p**e:
                return None, i
            y[i] = c[i] // p**e
            used.append(e)
            if e:
                torsion.append(i)
        else:
            if c[i]:
                return None, i
            if i < n:
                kernel.append(i)
    kernel.extend(range(m, n))

    def col(j, scale=1):
        return tuple(Vm[r][j] * scale % q for r in range(n))

    x0 = tuple(sum(Vm[r][j] * y[j] for j in range(n)) % q for r in range(n))
    ker = tuple(col(j) for j in kernel)
    tor = tuple(
        v for v in (col(j, p ** (N - int_val(nf.D.entries[j][j], p))) for j in torsion) if any(v)
    )
    return SolutionSet(p, N, x0, ker, tor, N - max(used)), None


def solve_unit_system(A: PadicMatrix, b) -> SolutionSet | None:
    """Solve ``A x == b`` modulo ``p**N``; ``None`` if inconsistent."""
    return _solve(A, b)[0]


@dataclass(frozen=True)
class SpanMembership:
    member: bool
    coefficients: tuple[int, ...] | None
    margin: int

    def __bool__(self):
        return self.member


def row_span_member(w, A: PadicMatrix) -> SpanMembership:
    """Decide whether the row ``w`` lies in the ``Z_p``-row span of ``A`` mod ``p**N``."""
    w = list(w)
    if len(w) != A.cols:
        raise DimensionMismatch(f"row of length {len(w)} against {A.cols} columns")
    if A.rows == 0:
        ok = all(int(x) % A.modulus == 0 for x in w)
        return SpanMembership(ok, () if ok else None, A.precision)
    sol = solve_unit_system(A.transpose(), w)
    if sol is None:
        return SpanMembership(False, None, A.precision)
    if sol.margin < MARGIN_WARNING:
        log.warning(
            "span membership decided with only %d digits of headroom (p=%d, N=%d)",
            sol.margin,
            A.p,
            A.precision,
        )
    return SpanMembership(True, sol.particular, sol.margin)


def rank_mod_p(rows, p: int) -> int:
    """Rank over the residue field ``F_p``."""
    M = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for j in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][j]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][j], -1, p)
        M[rank] = [x * inv % p for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][j]:
                f = M[i][j]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def is_gl_zp(A: PadicMatrix) -> bool:
    """True iff ``A`` is invertible over ``Z_p`` (unit determinant)."""
    if A.rows != A.cols:
        raise DimensionMismatch("is_gl_zp needs a square matrix")
    return rank_mod_p(A.entries, A.p) == A.rows


def row_module_length(A: PadicMatrix) -> int:
    """Length of ``(Z/p^N)^cols / rowspan(A)``; zero pivots count ``N``."""
    nf = smith_normal_form(A)
    exps = nf.exponents()
    return sum(exps) + A.precision * (A.cols - len(exps))


def module_basis(A: PadicMatrix) -> PadicMatrix:
    """Rows forming a basis of the row module of ``A`` (zero-at-precision
    elementary divisors dropped), in canonical echelon form."""
    nf = smith_normal_form(A)
    UA = nf.U @ A
    keep = [UA.entries[i] for i, e in enumerate(nf.exponents()) if e < A.precision]
    return echelon_form(PadicMatrix.from_rows(keep, A.p, A.precision, A.cols))


def echelon_form(A: PadicMatrix) -> PadicMatrix:
    """Canonical echelon form of a full-row-rank matrix.

    Columns are scanned left to right; the pivot is the smallest-valuation
    entry (lowest row on ties), scaled to a pure power of ``p``.  Entries
    above each pivot are reduced into ``[0, p**e)``.  Zero rows are dropped.
    """
    p, N = A.p, A.precision
    q = p**N
    M = A.to_lists()
    pivots = []
    r = 0
    for j in range(A.cols):
        cand = [(int_val(M[i][j], p), i) for i in range(r, len(M)) if M[i][j]]
        if not cand:
            continue
        e, i = min(cand)
        M[r], M[i] = M[i], M[r]
        pe = p**e
        inv = pow(M[r][j] // pe, -1, q)
        M[r] = [x * inv % q for x in M[r]]
        for i in range(r + 1, len(M)):
            if M[i][j]:
                f = M[i][j] // pe
                M[i] = [(a - f * b) % q for a, b in zip(M[i], M[r])]
        pivots.append((r, j, pe))
        r += 1
    for k, j, pe in pivots:
        for i in range(k):
            f = M[i][j] // pe
            if f:
                M[i] = [(a - f * b) % q for a, b in zip(M[i], M[k])]
    return PadicMatrix.from_rows(M[:r], p, N, A.cols)


def stable_row_module(A, p: int, precision: int) -> PadicMatrix:
    """Basis of ``intersection_n rowspan_{Z_p}(A**n)`` modulo ``p**N``.

    The row modules ``M_n = rowspan(A**n)`` decrease and satisfy
    ``M_{n+1} = M_n A``, so once one step leaves the module unchanged mod
    ``p**N`` it never changes again; each strict step raises the length of
    the quotient, which is bounded by ``N * r``.
    """
    A = [list(map(int, r)) for r in A]
    r = len(A)
    if any(len(row) != r for row in A):
        raise DimensionMismatch("stable_row_module needs a square matrix")
    from sympy import Matrix

    if Matrix(A).det() == 0:
        raise SingularMatrix("matrix is singular")
    Am = PadicMatrix.from_rows(A, p, precision, r)
    X = PadicMatrix.identity(r, p, precision)
    length = 0
    for _ in range(precision * r + 1):
        Y = module_basis_rows(X @ Am)
        new = row_module_length(Y)
        if new == length:
            break
        X, length = Y, new
    else:  # pragma: no cover - the length argument makes this unreachable
        raise RuntimeError("row module failed to stabilise")
    return module_basis(X)


def module_basis_rows(A: PadicMatrix) -> PadicMatrix:
    """Square generator matrix for the row module (keeps zero rows)."""
    nf = smith_normal_form(A)
    return nf.U @ A


def column_span_dense(A: PadicMatrix) -> bool:
    """Is the span of the unit-normalised nonzero columns dense in ``Z_p^rows``?

    The closure of the integer span is the ``Z_p``-span, and by Nakayama that
    is everything iff the normalised columns span the residue space.
    """
    if A.rows == 0:
        return True
    p = A.p
    cols = []
    for j in range(A.cols):
        col = [A.entries[i][j] for i in range(A.rows)]
        if not any(col):
            continue
        e = min(int_val(x, p) for x in col if x)
        cols.append([x // p**e for x in col])
    if not cols:
        return False
    # transpose: rank of the rows x (normalised columns) matrix
    return rank_mod_p([list(r) for r in zip(*cols)], p) == A.rows
