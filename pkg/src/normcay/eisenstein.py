"""Exact arithmetic in Q(ω3), ω3 = (-1 + i√3)/2.

A number is stored as the rational pair (a, b) meaning ``a + b*ω3``.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

OMEGA3 = cmath.exp(2j * math.pi / 3)
SQRT3 = math.sqrt(3.0)


class EisensteinRational:
    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def coerce(cls, x) -> "EisensteinRational":
        if isinstance(x, EisensteinRational):
            return x
        if isinstance(x, tuple):
            return cls(*x)
        return cls(x, 0)

    def __repr__(self):
        return f"EisensteinRational({self.a}, {self.b})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}ω3"

    def __eq__(self, other):
        try:
            other = EisensteinRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def __add__(self, other):
        other = EisensteinRational.coerce(other)
        return EisensteinRational(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return EisensteinRational(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-EisensteinRational.coerce(other))

    def __rsub__(self, other):
        return EisensteinRational.coerce(other) - self

    def __mul__(self, other):
        # ω3^2 = -1 - ω3
        other = EisensteinRational.coerce(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        return EisensteinRational(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def conjugate(self) -> "EisensteinRational":
        # conj(ω3) = ω3^2 = -1 - ω3
        return EisensteinRational(self.a - self.b, -self.b)

    @property
    def real(self) -> Fraction:
        return self.a - self.b / 2

    @property
    def imag_over_sqrt3(self) -> Fraction:
        """Imaginary part divided by √3 (the imaginary part is ``b√3/2``)."""
        return self.b / 2

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    @property
    def denominator(self) -> int:
        return math.lcm(self.a.denominator, self.b.denominator)

    def __complex__(self):
        return complex(float(self.a) - float(self.b) / 2, float(self.b) * SQRT3 / 2)


ZERO = EisensteinRational(0, 0)
ONE = EisensteinRational(1, 0)
W3 = EisensteinRational(0, 1)
W3_SQ = EisensteinRational(-1, -1)
# i√3 = 1 + 2ω3
I_SQRT3 = EisensteinRational(1, 2)
