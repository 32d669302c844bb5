"""Exact Gaussian rationals.

Sparse vectors throughout the package hold plain ``int``/``Fraction``
coefficients whenever the imaginary part vanishes; :class:`GaussQ` only
appears when a genuinely complex coefficient is needed.  All arithmetic
between the three kinds is exact and mixes freely.
"""

from __future__ import annotations

from fractions import Fraction
import re
from typing import Union

__all__ = ["GaussQ", "Scalar", "I", "as_scalar", "simplify", "parse_scalar",
           "format_scalar", "is_zero", "conj", "real_part", "imag_part"]


class GaussQ:
    """a + b*i with a, b arbitrary-precision rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _parts(x):
        if isinstance(x, GaussQ):
            return x.re, x.im
        if isinstance(x, (int, Fraction)):
            return x, 0
        return NotImplemented, None

    def __add__(self, other):
        a, b = self._parts(other)
        if a is NotImplemented:
            return NotImplemented
        return simplify(GaussQ(self.re + a, self.im + b))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._parts(other)
        if a is NotImplemented:
            return NotImplemented
        return simplify(GaussQ(self.re - a, self.im - b))

    def __rsub__(self, other):
        a, b = self._parts(other)
        if a is NotImplemented:
            return NotImplemented
        return simplify(GaussQ(a - self.re, b - self.im))

    def __mul__(self, other):
        a, b = self._parts(other)
        if a is NotImplemented:
            return NotImplemented
        return simplify(GaussQ(self.re * a - self.im * b, self.re * b + self.im * a))

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._parts(other)
        if a is NotImplemented:
            return NotImplemented
        n = a * a + b * b
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return simplify(GaussQ((self.re * a + self.im * b) / n, (self.im * a - self.re * b) / n))

    def __rtruediv__(self, other):
        a, b = self._parts(other)
        if a is NotImplemented:
            return NotImplemented
        return GaussQ(a, b) / self

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** -k)
        out, base = GaussQ(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        a, b = self._parts(other)
        if a is NotImplemented:
            return NotImplemented
        return self.re == a and self.im == b

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return GaussQ(self.re, -self.im)

    def __repr__(self):
        return f"GaussQ({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[int, Fraction, GaussQ]

I = GaussQ(0, 1)


def simplify(x):
    """Collapse to the cheapest exact representation (int < Fraction < GaussQ)."""
    if isinstance(x, GaussQ):
        if x.im == 0:
            x = x.re
        else:
            return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def as_scalar(x) -> Scalar:
    if isinstance(x, (int, Fraction, GaussQ)) and not isinstance(x, bool):
        return simplify(x)
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, complex):
        raise TypeError("floating complex numbers are not exact scalars")
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    # sympy numbers and the like
    try:
        import sympy
        s = sympy.nsimplify(x) if not isinstance(x, sympy.Basic) else x
        re_, im_ = s.as_real_imag()
        return simplify(GaussQ(Fraction(str(sympy.Rational(re_))), Fraction(str(sympy.Rational(im_)))))
    except Exception as exc:  # pragma: no cover - defensive
        raise TypeError(f"cannot convert {x!r} to an exact scalar") from exc


def is_zero(x) -> bool:
    return not x


def conj(x):
    return x.conjugate() if isinstance(x, GaussQ) else x


def real_part(x) -> Fraction:
    return x.re if isinstance(x, GaussQ) else Fraction(x)


def imag_part(x) -> Fraction:
    return x.im if isinstance(x, GaussQ) else Fraction(0)


_SCALAR_RE = re.compile(r"^\s*([+-]?[0-9]+(?:/[0-9]+)?)?\s*(?:([+-])\s*([0-9]+(?:/[0-9]+)?)?\s*\*?\s*i)?\s*$")


def parse_scalar(text: str) -> Scalar:
    """Parse "p/q", "p/q+r/s*i", "i", "-i", "3/2i" style strings."""
    t = text.strip().replace(" ", "")
    if t in ("i", "+i"):
        return I
    if t == "-i":
        return -I
    if t.endswith("i"):
        body = t[:-1].rstrip("*")
        # split at the last sign that is not in leading position
        k = max(body.rfind("+", 1), body.rfind("-", 1))
        if k > 0:
            re_s, im_s = body[:k], body[k:]
        else:
            re_s, im_s = "0", body
        if im_s in ("", "+"):
            im_s = "1"
        elif im_s == "-":
            im_s = "-1"
        return simplify(GaussQ(Fraction(re_s), Fraction(im_s)))
    return simplify(Fraction(t))


def format_scalar(x) -> str:
    x = simplify(x)
    if isinstance(x, GaussQ):
        im = x.im
        if x.re == 0:
            return f"{im}*i"
        sign = "+" if im > 0 else "-"
        return f"{x.re}{sign}{abs(im)}*i"
    return str(x)


def div(a, b):
    """Exact quotient a / b (never produces a float)."""
    if isinstance(b, GaussQ) or isinstance(a, GaussQ):
        return simplify(GaussQ(*GaussQ._parts(a)) / b) if not isinstance(a, GaussQ) else simplify(a / b)
    return simplify(Fraction(a) / b)
