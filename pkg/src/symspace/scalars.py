"""Exact scalar arithmetic for the workbench.

Three scalar kinds are used throughout:

* exact rationals (``fractions.Fraction``),
* elements of the real quadratic field Q(sqrt 2), represented as a pair
  of rationals (:class:`QSqrt2`),
* high-precision binary floats (``mpmath.mpf``), always manipulated at an
  explicitly chosen precision.

Exact kinds never consult a tolerance; float comparisons always do.
"""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from typing import Union

import mpmath

RationalLike = Union[int, Fraction]


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational from a ``p/q`` or integer string."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def parse_decimal(text: str) -> Fraction:
    """Parse a decimal string (``1e-9``, ``0.25``) to an exact Fraction."""
    try:
        return Fraction(Decimal(text.strip()))
    except ArithmeticError as exc:
        raise ValueError(f"not a decimal number: {text!r}") from exc


class QSqrt2:
    """An element ``a + b*sqrt(2)`` with rational ``a``, ``b``.

    The representation is unique because sqrt(2) is irrational, so equality
    is componentwise and exact.  All field operations stay closed; inversion
    uses the Galois conjugate: ``1/(a+b*sqrt(2)) = (a-b*sqrt(2))/(a^2-2b^2)``.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0) -> None:
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("QSqrt2 is immutable")

    @classmethod
    def coerce(cls, x: "QSqrt2 | RationalLike") -> "QSqrt2":
        if isinstance(x, QSqrt2):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        raise TypeError(f"cannot interpret {type(x).__name__} as QSqrt2")

    def __repr__(self) -> str:
        return f"QSqrt2({self.a!r}, {self.b!r})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}*sqrt2"

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QSqrt2):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __neg__(self) -> "QSqrt2":
        return QSqrt2(-self.a, -self.b)

    def __add__(self, other: "QSqrt2 | RationalLike") -> "QSqrt2":
        o = QSqrt2.coerce(other)
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: "QSqrt2 | RationalLike") -> "QSqrt2":
        return self + (-QSqrt2.coerce(other))

    def __rsub__(self, other: "QSqrt2 | RationalLike") -> "QSqrt2":
        return (-self) + QSqrt2.coerce(other)

    def __mul__(self, other: "QSqrt2 | RationalLike") -> "QSqrt2":
        o = QSqrt2.coerce(other)
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> "QSqrt2":
        """The Galois conjugate ``a - b*sqrt(2)``."""
        return QSqrt2(self.a, -self.b)

    def field_norm(self) -> Fraction:
        """``a^2 - 2 b^2``; zero exactly when the element is zero."""
        return self.a * self.a - 2 * self.b * self.b

    def inverse(self) -> "QSqrt2":
        norm = self.field_norm()
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return QSqrt2(self.a / norm, -self.b / norm)

    def __truediv__(self, other: "QSqrt2 | RationalLike") -> "QSqrt2":
        return self * QSqrt2.coerce(other).inverse()

    def __rtruediv__(self, other: "QSqrt2 | RationalLike") -> "QSqrt2":
        return QSqrt2.coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "QSqrt2":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = QSqrt2(1, 0)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sign(self) -> int:
        """Exact sign of the real value a + b*sqrt(2)."""
        a, b = self.a, self.b
        if a == 0 and b == 0:
            return 0
        if a >= 0 and b >= 0:
            return 1
        if a <= 0 and b <= 0:
            return -1
        # Mixed signs: compare a^2 with 2 b^2; the larger term wins.
        if a > 0:  # b < 0
            return 1 if a * a > 2 * b * b else -1
        return 1 if 2 * b * b > a * a else -1

    def is_positive(self) -> bool:
        return self.sign() > 0

    def __abs__(self) -> "QSqrt2":
        return self if self.sign() >= 0 else -self

    def __lt__(self, other: "QSqrt2 | RationalLike") -> bool:
        return (self - QSqrt2.coerce(other)).sign() < 0

    def __le__(self, other: "QSqrt2 | RationalLike") -> bool:
        return (self - QSqrt2.coerce(other)).sign() <= 0

    def __gt__(self, other: "QSqrt2 | RationalLike") -> bool:
        return (self - QSqrt2.coerce(other)).sign() > 0

    def __ge__(self, other: "QSqrt2 | RationalLike") -> bool:
        return (self - QSqrt2.coerce(other)).sign() >= 0


def fraction_to_mpf(x: RationalLike) -> mpmath.mpf:
    """Convert a rational to an mpf at the current working precision."""
    f = Fraction(x)
    return mpmath.mpf(f.numerator) / mpmath.mpf(f.denominator)


def qsqrt2_to_real(x: QSqrt2 | RationalLike, precision_bits: int = 128) -> mpmath.mpf:
    """Evaluate ``a + b*sqrt(2)`` as an mpf accurate to the target precision.

    The computation runs with guard bits so the final rounding dominates the
    error; the result differs from the exact value by well under
    ``2**(-precision_bits + 2)`` for desk-scale magnitudes.
    """
    q = QSqrt2.coerce(x)
    with mpmath.workprec(precision_bits + 16):
        value = fraction_to_mpf(q.a) + fraction_to_mpf(q.b) * mpmath.sqrt(2)
    with mpmath.workprec(precision_bits):
        return +value
