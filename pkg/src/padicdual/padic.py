"""Bounded-precision p-adic numbers.

Every value lives in a capped-precision world: a :class:`PadicInt` is an
element of ``Z_p`` known modulo ``p**N``.  Addition, subtraction and
multiplication are exact modulo ``p**N``; division is only offered for units.
A residue of zero never claims to be exactly zero -- its valuation is reported
as :class:`AtLeast` ``N``.

The module also carries the small amount of polynomial machinery the rest of
the package needs: Hensel lifting of simple roots and Newton polygons.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import isprime

from .errors import NonUnit, NotASimpleRoot, PrimeMismatch

DEFAULT_PRECISION = 32


@lru_cache(maxsize=256)
def check_prime(p: int) -> int:
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def int_val(x: int, p: int) -> int:
    """Exact p-adic valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def rational_val(x: Fraction, p: int) -> int:
    x = Fraction(x)
    return int_val(x.numerator, p) - int_val(x.denominator, p)


@dataclass(frozen=True)
class AtLeast:
    """Valuation bound ``>= bound``: the value is zero at working precision."""

    bound: int

    def __str__(self):
        return f">={self.bound}"


def _valuation_bound(v) -> float:
    # AtLeast participates in comparisons as +inf-like once past its bound
    return v.bound if isinstance(v, AtLeast) else v


@dataclass(frozen=True)
class PadicInt:
    """An element of ``Z_p`` known modulo ``p**precision``."""

    p: int
    residue: int
    precision: int

    def __post_init__(self):
        check_prime(self.p)
        if self.precision < 0:
            raise ValueError("precision must be non-negative")
        if not 0 <= self.residue < self.p**self.precision:
            raise ValueError(
                f"residue {self.residue} out of range for modulus {self.p}^{self.precision}"
            )

    @classmethod
    def from_int(cls, value: int, p: int, precision: int = DEFAULT_PRECISION) -> PadicInt:
        return cls(p, value % p**precision, precision)

    @classmethod
    def from_fraction(cls, value, p: int, precision: int = DEFAULT_PRECISION) -> PadicInt:
        """Reduce a p-integral rational modulo ``p**precision``."""
        value = Fraction(value)
        q = p**precision
        if value.denominator % p == 0:
            raise NonUnit(f"{value} is not {p}-integral")
        return cls(p, value.numerator * pow(value.denominator, -1, q) % q, precision)

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def _coerce(self, other) -> PadicInt:
        if isinstance(other, int):
            return PadicInt.from_int(other, self.p, self.precision)
        if not isinstance(other, PadicInt):
            return NotImplemented
        if other.p != self.p:
            raise PrimeMismatch(f"cannot combine {self.p}-adic and {other.p}-adic values")
        return other

    def _binary(self, other, fn) -> PadicInt:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = min(self.precision, other.precision)
        return PadicInt(self.p, fn(self.residue, other.residue) % self.p**n, n)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __neg__(self):
        return PadicInt(self.p, -self.residue % self.modulus, self.precision)

    def is_zero(self) -> bool:
        return self.residue == 0

    def valuation(self) -> int | AtLeast:
        if self.residue == 0:
            return AtLeast(self.precision)
        return int_val(self.residue, self.p)

    def is_unit(self) -> bool:
        return self.precision > 0 and self.residue % self.p != 0

    def inverse(self) -> PadicInt:
        if not self.is_unit():
            raise NonUnit(f"{self} is not a unit in Z_{self.p}")
        return PadicInt(self.p, pow(self.residue, -1, self.modulus), self.precision)

    def reduce(self, precision: int) -> PadicInt:
        if precision > self.precision:
            raise ValueError("cannot raise precision by reduction")
        return PadicInt(self.p, self.residue % self.p**precision, precision)

    def __int__(self):
        return self.residue

    def __str__(self):
        return f"{self.residue}+O({self.p}^{self.precision})"


def padic_arith(a: PadicInt, b: PadicInt, op: str) -> PadicInt:
    if a.p != b.p:
        raise PrimeMismatch(f"prime mismatch: {a.p} vs {b.p}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def val(a: PadicInt) -> int | AtLeast:
    return a.valuation()


def invert(a: PadicInt) -> PadicInt:
    return a.inverse()


def vec_norm(v) -> int | AtLeast:
    """Exponent ``k`` with ``||v||_p = p**-k``.

    An all-zero vector (at precision) gives ``AtLeast(N)``, i.e. the norm is
    at most ``p**-N``.
    """
    v = list(v)
    if not v:
        raise ValueError("norm of an empty vector")
    p, n = v[0].p, v[0].precision
    if any(x.p != p for x in v):
        raise PrimeMismatch("mixed primes in vector")
    n = min(x.precision for x in v)
    vals = [x.valuation() for x in v if x.residue % p**n]
    if not vals:
        return AtLeast(n)
    return min(vals)


# -- Q_p scalars ----------------------------------------------------------


@dataclass(frozen=True)
class PadicScalarQ:
    """``unit * p**valuation`` in ``Q_p``.

    ``unit`` carries the relative precision.  A unit of precision 0 encodes a
    value known only to lie in ``p**valuation * Z_p`` (zero at precision);
    ``exact_zero`` marks a genuine zero.
    """

    p: int
    unit: PadicInt
    valuation: int
    exact_zero: bool = False

    def __post_init__(self):
        if self.unit.p != self.p:
            raise PrimeMismatch("unit prime differs from scalar prime")
        if not self.exact_zero and self.unit.precision > 0 and self.unit.residue % self.p == 0:
            raise ValueError("unit part must be coprime to p")

    @classmethod
    def zero(cls, p: int) -> PadicScalarQ:
        return cls(p, PadicInt(p, 0, 0), 0, exact_zero=True)

    @classmethod
    def from_fraction(cls, x, p: int, precision: int = DEFAULT_PRECISION) -> PadicScalarQ:
        """``precision`` is the relative precision of the result."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p)
        v = rational_val(x, p)
        u = x / Fraction(p) ** v
        return cls(p, PadicInt.from_fraction(u, p, precision), v)

    @classmethod
    def from_padic_int(cls, a: PadicInt) -> PadicScalarQ:
        if a.residue == 0:
            return cls(a.p, PadicInt(a.p, 0, 0), a.precision)
        v = int_val(a.residue, a.p)
        return cls(a.p, PadicInt(a.p, a.residue // a.p**v, a.precision - v), v)

    @property
    def absolute_precision(self) -> float:
        if self.exact_zero:
            return float("inf")
        return self.valuation + self.unit.precision

    def is_zero(self) -> bool:
        """Zero at precision (or exactly zero)."""
        return self.exact_zero or self.unit.precision == 0

    def val(self) -> int | AtLeast:
        if self.is_zero():
            return AtLeast(self.absolute_precision) if not self.exact_zero else AtLeast(float("inf"))
        return self.valuation

    def _scaled(self, shift: int) -> int:
        """Residue of ``self * p**-shift`` as an integer (requires valuation >= shift)."""
        if self.exact_zero or self.unit.precision == 0:
            return 0
        return self.unit.residue * self.p ** (self.valuation - shift)

    def _combine(self, other: PadicScalarQ, sign: int) -> PadicScalarQ:
        if other.p != self.p:
            raise PrimeMismatch("prime mismatch")
        if self.exact_zero:
            return other if sign > 0 else -other
        if other.exact_zero:
            return self
        base = min(self.valuation, other.valuation)
        absprec = min(self.absolute_precision, other.absolute_precision)
        rel = absprec - base
        total = self._scaled(base) + sign * other._scaled(base)
        return PadicScalarQ.from_padic_int(PadicInt.from_int(total, self.p, rel)).shift(base)

    def shift(self, k: int) -> PadicScalarQ:
        """Multiply by ``p**k``."""
        if self.exact_zero:
            return self
        return PadicScalarQ(self.p, self.unit, self.valuation + k)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        if self.exact_zero:
            return self
        return PadicScalarQ(self.p, -self.unit, self.valuation)

    def __mul__(self, other: PadicScalarQ) -> PadicScalarQ:
        if other.p != self.p:
            raise PrimeMismatch("prime mismatch")
        if self.exact_zero or other.exact_zero:
            return PadicScalarQ.zero(self.p)
        return PadicScalarQ(self.p, self.unit * other.unit, self.valuation + other.valuation)

    def to_padic_int(self, precision: int) -> PadicInt:
        """Reduce to ``Z_p`` modulo ``p**precision`` (valuation must be >= 0)."""
        if self.exact_zero:
            return PadicInt(self.p, 0, precision)
        if self.valuation < 0:
            raise NonUnit(f"{self} is not {self.p}-integral")
        n = min(precision, self.absolute_precision)
        return PadicInt.from_int(self._scaled(0), self.p, int(n))

    def __str__(self):
        if self.exact_zero:
            return "0"
        if self.unit.precision == 0:
            return f"O({self.p}^{self.valuation})"
        return f"{self.unit.residue}*{self.p}^{self.valuation}+O({self.p}^{self.absolute_precision})"


# -- disks ----------------------------------------------------------------


@dataclass(frozen=True)
class Disk:
    """Closed disk ``{a : |a - center|_p <= p**-radius_exponent}``.

    ``radius_exponent=None`` is a single point (radius zero at the center's
    precision); ``empty=True`` is the empty set.
    """

    p: int
    center: PadicScalarQ | None
    radius_exponent: int | None
    empty: bool = False

    @classmethod
    def empty_disk(cls, p: int) -> Disk:
        return cls(p, None, None, empty=True)

    @property
    def is_point(self) -> bool:
        return not self.empty and self.radius_exponent is None

    def _effective_exponent(self) -> float:
        if self.radius_exponent is None:
            return self.center.absolute_precision
        return self.radius_exponent

    def contains(self, value: PadicScalarQ) -> bool:
        if self.empty:
            return False
        diff = value - self.center
        return _valuation_bound(diff.val()) >= self._effective_exponent()

    def __str__(self):
        if self.empty:
            return "empty"
        if self.is_point:
            return f"{{{self.center}}}"
        return f"{self.center} + {self.p}^{self.radius_exponent} Z_{self.p}"


def disk_intersect(d1: Disk, d2: Disk) -> Disk:
    if d1.p != d2.p:
        raise PrimeMismatch("prime mismatch")
    if d1.empty or d2.empty:
        return Disk.empty_disk(d1.p)
    e1, e2 = d1._effective_exponent(), d2._effective_exponent()
    dist = _valuation_bound((d1.center - d2.center).val())
    # ultrametric: either nested or disjoint
    if dist < min(e1, e2):
        return Disk.empty_disk(d1.p)
    return d1 if e1 >= e2 else d2


# -- polynomials ----------------------------------------------------------


@dataclass(frozen=True)
class PadicPoly:
    """Polynomial over ``Q_p``; coefficients listed constant term first."""

    p: int
    coefficients: tuple[PadicScalarQ, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("zero polynomial")
        if self.coefficients[-1].exact_zero:
            raise ValueError("leading coefficient is zero")

    @classmethod
    def from_ints(cls, coeffs, p: int, precision: int = DEFAULT_PRECISION) -> PadicPoly:
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return cls(p, tuple(PadicScalarQ.from_fraction(c, p, precision) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def integer_coefficients(self, precision: int) -> list[int]:
        return [c.to_padic_int(precision).residue for c in self.coefficients]

    def __call__(self, a: PadicInt) -> PadicInt:
        coeffs = self.integer_coefficients(a.precision)
        acc = 0
        q = a.modulus
        for c in reversed(coeffs):
            acc = (acc * a.residue + c) % q
        return PadicInt(self.p, acc, a.precision)


def hensel_lift(f: PadicPoly, a0: int, precision: int) -> PadicInt:
    """Lift a simple root of ``f`` modulo ``p`` to a root modulo ``p**precision``.

    Newton's iteration doubles the number of correct digits per step.
    """
    p = f.p
    coeffs = f.integer_coefficients(precision)
    q = p**precision

    def ev(poly, x, mod):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % mod
        return acc

    dcoeffs = [i * c for i, c in enumerate(coeffs)][1:] or [0]
    if ev(coeffs, a0, p) != 0 or ev(dcoeffs, a0, p) == 0:
        raise NotASimpleRoot(f"{a0} is not a simple root of f modulo {p}")
    a = a0 % p
    k = 1
    while k < precision:
        k = min(2 * k, precision)
        mod = p**k
        a = (a - ev(coeffs, a, mod) * pow(ev(dcoeffs, a, mod), -1, mod)) % mod
    return PadicInt(p, a % q, precision)


def newton_polygon(f: PadicPoly) -> list[tuple[Fraction, int]]:
    """Segments of the lower convex hull of ``(i, val(c_i))``.

    Returns ``(slope, length)`` pairs from left to right; a segment of slope
    ``-s`` and length ``l`` accounts for ``l`` roots of valuation ``s``.
    """
    pts = []
    for i, c in enumerate(f.coefficients):
        if c.is_zero():
            continue
        pts.append((i, c.valuation))
    if pts[0][0] != 0:
        raise ValueError("constant term vanishes; factor out x first")
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # pop hull[-1] unless it lies strictly below the chord hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return [
        (Fraction(y2 - y1, x2 - x1), x2 - x1)
        for (x1, y1), (x2, y2) in zip(hull, hull[1:])
    ]


# -- literal syntax --------------------------------------------------------

_LITERAL = re.compile(r"^\s*(-?\d+)\s*(?:\+\s*O\(\s*(\d+)\s*\^\s*(\d+)\s*\))?\s*$")


def parse_padic_literal(text: str, p: int, precision: int = DEFAULT_PRECISION) -> PadicInt:
    """Parse ``"24+O(3^3)"`` or a bare (possibly negative) integer."""
    m = _LITERAL.match(str(text))
    if not m:
        raise ValueError(f"bad p-adic literal {text!r}")
    value = int(m.group(1))
    if m.group(2) is not None:
        if int(m.group(2)) != p:
            raise PrimeMismatch(f"literal {text!r} is not {p}-adic")
        precision = int(m.group(3))
    return PadicInt.from_int(value, p, precision)
