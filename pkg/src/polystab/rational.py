"""Exact scalars: canonical rationals and quadratic surds a + b*sqrt(c).

Rationals are plain :class:`fractions.Fraction` values, which are already kept
in lowest terms with a positive denominator.  :class:`Surd` extends them to the
field Q(sqrt(c)) for a single fixed radicand ``c``.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

from .errors import FieldMismatch, FormatError

Rat = Fraction

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")

# trial-division bound used when stripping square factors from a radicand
SQUARE_STRIP_BOUND = 1 << 16


def rat(value) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to a Fraction (floats rejected)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def parse_rat(text: str) -> Fraction:
    m = _RAT_RE.match(text)
    if m is None:
        raise FormatError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise FormatError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rat(x: Fraction) -> str:
    """'p/q' in lowest terms, or 'p' when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def split_square(n: int) -> tuple[int, int]:
    """Write ``n = f**2 * c`` with ``c`` free of square factors.

    Square factors of primes below ``SQUARE_STRIP_BOUND`` are removed by trial
    division; a remaining cofactor that is a perfect square is absorbed too.
    For desk-scale certificates this yields a square-free ``c``.
    """
    if n < 0:
        raise ValueError("radicand must be nonnegative")
    if n == 0:
        return 0, 0
    r = math.isqrt(n)
    if r * r == n:
        return r, 1
    f = 1
    c = n
    p = 2
    while p < SQUARE_STRIP_BOUND and p * p <= c:
        pp = p * p
        while c % pp == 0:
            c //= pp
            f *= p
        p += 1 if p == 2 else 2
    r = math.isqrt(c)
    if r * r == c:
        f *= r
        c = 1
    return f, c


class Surd:
    """Element ``a + b*sqrt(c)`` of Q(sqrt(c)).

    ``c`` is a nonnegative integer that is not a perfect square (or 0, in which
    case the value is the rational ``a``).  Values with different radicands can
    only be combined when one of them is rational.
    """

    __slots__ = ("a", "b", "c")

    def __init__(self, a=0, b=0, c: int = 0):
        a = rat(a)
        b = rat(b)
        c = int(c)
        if c < 0:
            raise ValueError("radicand must be nonnegative")
        if c != 0 and b != 0:
            f, c = split_square(c)
            b *= f
            if c == 1:
                a, b, c = a + b, Fraction(0), 0
        if b == 0:
            c = 0
        if c == 0:
            b = Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, c: int) -> "Surd":
        # c already normalized; only collapse to a rational when b vanishes
        obj = object.__new__(cls)
        if b == 0:
            b, c = Fraction(0), 0
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "c", c)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Surd is immutable")

    @classmethod
    def sqrt(cls, x) -> "Surd":
        """Exact square root of a nonnegative rational."""
        x = rat(x)
        if x < 0:
            raise ValueError("square root of a negative rational")
        # sqrt(p/q) = sqrt(p*q)/q
        return cls(0, Fraction(1, x.denominator), x.numerator * x.denominator)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _coerce(self, other) -> "Surd | None":
        if isinstance(other, Surd):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Surd._raw(Fraction(other), Fraction(0), 0)
        return None

    def _common(self, other: "Surd") -> int:
        if self.c == 0:
            return other.c
        if other.c == 0 or other.c == self.c:
            return self.c
        raise FieldMismatch(f"radicands {self.c} and {other.c} differ")

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Surd._raw(self.a + o.a, self.b + o.b, self._common(o))

    __radd__ = __add__

    def __neg__(self):
        return Surd._raw(-self.a, -self.b, self.c)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Surd._raw(self.a - o.a, self.b - o.b, self._common(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = self._common(o)
        return Surd._raw(
            self.a * o.a + self.b * o.b * c,
            self.a * o.b + self.b * o.a,
            c,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "Surd":
        return Surd._raw(self.a, -self.b, self.c)

    def norm(self) -> Fraction:
        """Field norm a^2 - b^2 c (zero only for the zero element)."""
        return self.a * self.a - self.b * self.b * self.c

    def inverse(self) -> "Surd":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero surd")
        return Surd._raw(self.a / nrm, -self.b / nrm, self.c)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        self._common(o)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 against b^2 c
        d = self.a * self.a - self.b * self.b * self.c
        return sa if d > 0 else (sb if d < 0 else 0)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b and (self.c == o.c or self.b == 0)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.c))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.c)

    def __str__(self):
        if self.b == 0:
            return format_rat(self.a)
        sign = "-" if self.b < 0 else "+"
        return f"{format_rat(self.a)} {sign} {format_rat(abs(self.b))}*sqrt({self.c})"

    def __repr__(self):
        return f"Surd({self})"

    def to_json(self) -> dict:
        return {"a": format_rat(self.a), "b": format_rat(self.b), "c": self.c}

    @classmethod
    def from_json(cls, obj) -> "Surd":
        try:
            return cls(parse_rat(str(obj["a"])), parse_rat(str(obj["b"])), int(obj["c"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"malformed surd {obj!r}") from exc
