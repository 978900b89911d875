"""Exact scalars: rationals (``fractions.Fraction``) and Gaussian rationals.

Rational values are plain ``Fraction`` objects.  ``GaussianRational`` only
exists for values with a nonzero imaginary part; arithmetic that cancels the
imaginary part hands back a ``Fraction`` so that equal values always have
equal representations.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

__all__ = [
    "GaussianRational",
    "Scalar",
    "FIELDS",
    "make",
    "parse_scalar",
    "format_scalar",
    "scalar_key",
    "conj",
    "is_real",
]

FIELDS = ("Q", "Qi")


class GaussianRational:
    """a + b*i with rational a, b and b != 0."""

    __slots__ = ("re", "im")

    def __init__(self, re: Fraction, im: Fraction):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _split(other):
        if isinstance(other, GaussianRational):
            return other.re, other.im
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        o = self._split(other)
        if o is None:
            return NotImplemented
        return make(self.re + o[0], self.im + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._split(other)
        if o is None:
            return NotImplemented
        return make(self.re - o[0], self.im - o[1])

    def __rsub__(self, other):
        o = self._split(other)
        if o is None:
            return NotImplemented
        return make(o[0] - self.re, o[1] - self.im)

    def __mul__(self, other):
        o = self._split(other)
        if o is None:
            return NotImplemented
        c, d = o
        return make(self.re * c - self.im * d, self.re * d + self.im * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._split(other)
        if o is None:
            return NotImplemented
        c, d = o
        den = c * c + d * d
        if den == 0:
            raise ZeroDivisionError("division by zero")
        return make((self.re * c + self.im * d) / den, (self.im * c - self.re * d) / den)

    def __rtruediv__(self, other):
        o = self._split(other)
        if o is None:
            return NotImplemented
        return make(*o) * self._inverse()

    def _inverse(self):
        den = self.re * self.re + self.im * self.im
        return make(self.re / den, -self.im / den)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        o = self._split(other)
        if o is None:
            return NotImplemented
        return self.re == o[0] and self.im == o[1]

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return True

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, GaussianRational]


def make(re, im=0) -> Scalar:
    """Canonical scalar for re + im*i."""
    im = Fraction(im)
    if im == 0:
        return Fraction(re)
    return GaussianRational(re, im)


def conj(x: Scalar) -> Scalar:
    return x.conjugate()


def is_real(x: Scalar) -> bool:
    return not isinstance(x, GaussianRational)


_RAT = r"\d+(?:/\d+)?"
_REAL = re.compile(rf"[+-]?{_RAT}")
_IMAG = re.compile(rf"(?P<sign>[+-]?)(?P<im>{_RAT})?i")
_COMPLEX = re.compile(rf"(?P<re>[+-]?{_RAT})(?P<sign>[+-])(?P<im>{_RAT})?i")


def parse_scalar(text, field: str = "Q") -> Scalar:
    """Parse "p", "p/q", "a/b+c/di", "3i", "-i" and ints.

    Raises ``ValueError`` on malformed input or on a non-real value when
    ``field`` is "Q".
    """
    if isinstance(text, bool):
        raise ValueError(f"not a scalar: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"scalars must be strings or integers, got {text!r}")
    s = text.replace(" ", "")
    try:
        if _REAL.fullmatch(s):
            return Fraction(s)
        m = _IMAG.fullmatch(s)
        if m:
            real_value = Fraction(0)
        else:
            m = _COMPLEX.fullmatch(s)
            if not m:
                raise ValueError(f"malformed scalar {text!r}")
            real_value = Fraction(m.group("re"))
        imag_value = Fraction(m.group("im")) if m.group("im") else Fraction(1)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None
    if m.group("sign") == "-":
        imag_value = -imag_value
    value = make(real_value, imag_value)
    if field == "Q" and not is_real(value):
        raise ValueError(f"non-real scalar {text!r} in field Q")
    return value


def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    if isinstance(x, GaussianRational):
        im = x.im
        mag = "" if abs(im) == 1 else _fmt_rat(abs(im))
        if x.re == 0:
            return ("-" if im < 0 else "") + mag + "i"
        return _fmt_rat(x.re) + ("-" if im < 0 else "+") + mag + "i"
    return _fmt_rat(Fraction(x))


def scalar_key(x) -> tuple:
    """Total order key used for deterministic sorting."""
    if isinstance(x, GaussianRational):
        return (x.re, x.im)
    return (Fraction(x), Fraction(0))
