"""Exact complex-rational scalars.

Relation checks on the algebra side want residuals that are exactly zero,
so parameter packs and regular-representation matrices carry Gaussian
rationals (Fraction real and imaginary parts) whenever the inputs are
rational.  A float view is derived on demand.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        # floats are accepted verbatim; callers wanting exactness pass
        # ints/Fractions/strings instead
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class QQc:
    """A complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_fraction(re)
        self.im = _as_fraction(im)

    # -- constructors -------------------------------------------------
    @classmethod
    def from_any(cls, x) -> "QQc":
        if isinstance(x, QQc):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = QQc.from_any(other)
        return QQc(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = QQc.from_any(other)
        return QQc(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return QQc.from_any(other) - self

    def __mul__(self, other):
        o = QQc.from_any(other)
        return QQc(self.re * o.re - self.im * o.im,
                   self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QQc.from_any(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return QQc((self.re * o.re + self.im * o.im) / d,
                   (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return QQc.from_any(other) / self

    def __neg__(self):
        return QQc(-self.re, -self.im)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = QQc(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparisons / predicates ------------------------------------
    def __eq__(self, other):
        try:
            o = QQc.from_any(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def is_real(self) -> bool:
        return self.im == 0

    # -- views --------------------------------------------------------
    def __complex__(self):
        return complex(self.re) + 1j * complex(self.im)

    def conjugate(self) -> "QQc":
        return QQc(self.re, -self.im)

    def __repr__(self):
        if self.im == 0:
            return f"QQc({self.re})"
        return f"QQc({self.re}, {self.im})"


QQC_ZERO = QQc(0)
QQC_ONE = QQc(1)


def is_exact(x) -> bool:
    """True when x can participate in exact arithmetic."""
    return isinstance(x, (QQc, int, Fraction)) or isinstance(x, Rational)


def exactify(x) -> QQc:
    """Coerce ints/Fractions/strings/QQc to QQc; reject floats."""
    if isinstance(x, (float, complex)):
        raise TypeError("refusing to exactify a float; pass Fraction/int/str")
    return QQc.from_any(x)
