"""Exact Gaussian-rational scalars.

The symbolic layer works over Q(i): every coefficient is re + im*i with
``fractions.Fraction`` components, so equality of polynomials, necklaces and
automorphism images is decidable exactly.  Floating-point data entering from
the numerical layer is converted losslessly via ``Fraction(float)``.
"""

from __future__ import annotations

from fractions import Fraction


class Gauss:
    """A Gaussian rational re + im*i with exact field arithmetic."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is Fraction else Fraction(re))
        object.__setattr__(self, "im", im if type(im) is Fraction else Fraction(im))

    def __setattr__(self, name, value):  # immutable after construction
        raise AttributeError("Gauss scalars are immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_complex(z: complex) -> "Gauss":
        """Exact conversion: binary floats are rationals, nothing is rounded."""
        return Gauss(Fraction(float(z.real)), Fraction(float(z.imag)))

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    def is_real(self) -> bool:
        return not self.im

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    # -- field operations ----------------------------------------------------

    def __add__(self, other) -> "Gauss":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Gauss(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "Gauss":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Gauss(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "Gauss":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self) -> "Gauss":
        return Gauss(-self.re, -self.im)

    def __mul__(self, other) -> "Gauss":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Gauss(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Gauss":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("division by zero Gauss scalar")
        return Gauss(self.re / n, -self.im / n)

    def __truediv__(self, other) -> "Gauss":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Gauss":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def conjugate(self) -> "Gauss":
        return Gauss(self.re, -self.im)

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    # -- printing ------------------------------------------------------------

    def __str__(self) -> str:
        """Coefficient syntax used by the expression grammar.

        Pure reals print as fractions, pure imaginaries as ``3/4i`` and mixed
        values parenthesised, e.g. ``(1/2-2/3i)``.
        """
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im >= 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"

    def __repr__(self) -> str:
        return f"Gauss({self.re!r}, {self.im!r})"


def _coerce(x):
    if type(x) is Gauss:
        return x
    if isinstance(x, (int, Fraction)):
        return Gauss(x)
    if isinstance(x, complex):
        return Gauss.from_complex(x)
    if isinstance(x, float):
        return Gauss(Fraction(x))
    return NotImplemented


ZERO = Gauss(0)
ONE = Gauss(1)
MINUS_ONE = Gauss(-1)
I = Gauss(0, 1)
