"""p-adic functionals on a factored form.

Every homomorphism ``G -> Z_p`` is ``v |-> c . (A_p v)`` for a unique
coefficient vector ``c`` over ``Z_p``, so extension and separation problems
reduce to linear algebra over ``Z_p`` on the images ``A_p h``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotContractive, NotFound, PrecisionExhausted
from .groups import SAFETY_MARGIN, FactoredForm, element, local_image
from .linalg import PadicMatrix, _solve, smith_normal_form
from .padic import Disk, PadicInt, PadicScalarQ, int_val, rational_val


@dataclass(frozen=True)
class Functional:
    p: int
    form: FactoredForm
    coefficients: tuple[int, ...]
    precision: int

    def __post_init__(self):
        n = self.form.dual_rank(self.p)
        if len(self.coefficients) != n:
            raise ValueError(f"expected {n} coefficients, got {len(self.coefficients)}")
        q = self.p**self.precision
        object.__setattr__(self, "coefficients", tuple(int(c) % q for c in self.coefficients))

    def row(self) -> list[int]:
        """The functional as a row vector ``c^t A_p`` over ``Z_p``."""
        A = self.form.dual_matrix(self.p)
        q = self.p**self.precision
        return [sum(c * A.entries[i][j] for i, c in enumerate(self.coefficients)) % q for j in range(A.cols)]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "coefficients": [str(c) for c in self.coefficients],
            "precision": f"{self.p}^{self.precision}",
        }


def _dot(c, y, q):
    return sum(a * b for a, b in zip(c, y)) % q


def evaluate(f: Functional, v) -> PadicScalarQ:
    v = element(v)
    image, prec = local_image(f.form, f.p, v)
    if not image or not any(v):
        return PadicScalarQ.zero(f.p)
    prec = min(prec, f.precision)
    return PadicScalarQ.from_padic_int(PadicInt(f.p, _dot(f.coefficients, image, f.p**prec), prec))


def _images(ff: FactoredForm, p: int, vectors) -> tuple[list[list[int]], int]:
    rows, prec = [], ff.precision
    for v in vectors:
        y, d = local_image(ff, p, v)
        rows.append(y)
        prec = min(prec, d)
    return rows, prec


def _target(value, p: int, precision: int, index: int) -> int:
    """Residue of a prescribed value; a non-integral value can never be met."""
    if isinstance(value, PadicScalarQ):
        if not value.exact_zero and not value.is_zero() and value.valuation < 0:
            raise NotContractive(f"value at generator {index} is not {p}-integral", index)
        return value.to_padic_int(precision).residue
    if isinstance(value, PadicInt):
        if value.precision < precision:
            raise PrecisionExhausted(f"value at generator {index} known only mod {p}^{value.precision}")
        return value.residue % p**precision
    x = Fraction(value)
    if x and rational_val(x, p) < 0:
        raise NotContractive(f"value at generator {index} is not {p}-integral", index)
    return PadicInt.from_fraction(x, p, precision).residue


def _extension_system(ff, p, gens, values):
    gens = [element(g) for g in gens]
    values = list(values)
    if len(gens) != len(values):
        raise ValueError("gens and values differ in length")
    rows, prec = _images(ff, p, gens)
    if prec <= SAFETY_MARGIN and gens:
        raise PrecisionExhausted(f"only {prec} digits left after clearing denominators")
    targets = [_target(b, p, prec, i) for i, b in enumerate(values)]
    n = ff.dual_rank(p)
    return rows, targets, prec, n


def _solve_system(rows, targets, p, prec, n):
    """Solve ``rows . c == targets``; on failure find the first bad generator."""
    if not rows:
        return _solve(PadicMatrix.zeros(0, n, p, prec), [])[0]
    if n == 0:
        for i, t in enumerate(targets):
            if t:
                raise NotContractive(f"G is {p}-divisible but generator {i} has a nonzero value", i)
        return _solve(PadicMatrix.zeros(len(rows), 0, p, prec), targets)[0]
    sol, _ = _solve(PadicMatrix.from_rows(rows, p, prec, n), targets)
    if sol is not None:
        return sol
    for k in range(1, len(rows) + 1):
        if _solve(PadicMatrix.from_rows(rows[:k], p, prec, n), targets[:k])[0] is None:
            raise NotContractive(f"no functional on G meets the value at generator {k - 1}", k - 1)
    raise AssertionError("inconsistent system with consistent prefixes")


def extend_from_subgroup(ff: FactoredForm, p: int, gens, values) -> Functional:
    """A functional on all of ``G`` taking ``values`` on ``gens``.

    Raises :class:`NotContractive` (with the index of the first generator whose
    value cannot be met) when no extension exists modulo ``p**N``.
    """
    rows, targets, prec, n = _extension_system(ff, p, gens, values)
    sol = _solve_system(rows, targets, p, prec, n)
    return Functional(p, ff, sol.particular, prec)


def admissible_values(ff: FactoredForm, p: int, gens, values, g) -> Disk:
    """All values ``f(g)`` over extensions ``f`` of the prescribed data."""
    rows, targets, prec, n = _extension_system(ff, p, gens, values)
    sol = _solve_system(rows, targets, p, prec, n)
    y, dg = local_image(ff, p, g)
    prec = min(prec, dg)
    q = p**prec
    # solutions that only exist modulo p^N blur the last digits of the value
    blur = [int_val(x, p) for x in (_dot(t, y, q) for t in sol.torsion) if x]
    prec = min([prec] + blur)
    q = p**prec
    center = PadicScalarQ.from_padic_int(PadicInt(p, _dot(sol.particular, y, q), prec))
    spread = [int_val(x, p) for x in (_dot(k, y, q) for k in sol.kernel) if x]
    if not spread:
        return Disk(p, center, None)
    return Disk(p, center, min(spread))


def separating_functional(ff: FactoredForm, p: int, h_gens, g, m: int) -> Functional:
    """``f`` with ``|f(h)|_p <= p^-m`` on every generator and ``|f(g)|_p > p^-m``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    h_gens = [element(h) for h in h_gens]
    rows, prec = _images(ff, p, h_gens)
    y, dg = local_image(ff, p, g)
    prec = min(prec, dg)
    if m + SAFETY_MARGIN > prec:
        raise PrecisionExhausted(f"separating at level {p}^{m} needs more than {prec} digits")
    n = ff.dual_rank(p)
    q = p**prec
    if n == 0:
        raise NotFound(f"G is {p}-divisible, every functional vanishes")
    if rows:
        nf = smith_normal_form(PadicMatrix.from_rows(rows, p, prec, n))
        V = nf.V.reduce(prec).entries
        exps = nf.exponents()
        gens = []
        for j in range(n):
            e = exps[j] if j < len(exps) else prec
            scale = p ** max(m - e, 0)
            gens.append([V[r][j] * scale % q for r in range(n)])
    else:
        gens = [[int(i == j) for i in range(n)] for j in range(n)]
    best, best_val = None, m
    for c in gens:
        x = _dot(c, y, q)
        if x and int_val(x, p) < best_val:
            best, best_val = c, int_val(x, p)
    if best is None:
        raise NotFound(f"no functional separates g from H at level {p}^{m}")
    return Functional(p, ff, tuple(best), prec)
