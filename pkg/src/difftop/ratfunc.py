"""Reduced rational functions over exact rationals.

Invariants maintained by every operation: gcd(num, den) = 1 and the
denominator is monic (so equality is plain coefficient comparison).
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Polynomial
from .scalars import ZERO


class RationalFunction:
    __slots__ = ("num", "den", "var")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, var: str | None = None):
        if den is None:
            den = Polynomial.constant(1, num.var)
        if num.var != den.var:
            raise ValueError("variable mismatch")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.var = var or num.var
        if num.is_zero():
            self.num = Polynomial([], self.var)
            self.den = Polynomial.constant(1, self.var)
            return
        g = num.gcd(den)
        if g.degree > 0:
            num = num // g
            den = den // g
        lead = den.leading()
        if lead != 1:
            inv = 1 / lead
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    @staticmethod
    def constant(c, var: str = "z") -> "RationalFunction":
        return RationalFunction(Polynomial.constant(c, var))

    @staticmethod
    def identity(var: str = "z") -> "RationalFunction":
        return RationalFunction(Polynomial.identity(var))

    @staticmethod
    def from_poly(p: Polynomial) -> "RationalFunction":
        return RationalFunction(p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant: %r" % self)
        return self.num[0]

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.var != self.var:
                raise ValueError("variable mismatch")
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other, self.var)
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        r = RationalFunction.__new__(RationalFunction)
        r.num, r.den, r.var = -self.num, self.den, self.var
        return r

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num ** n, self.den ** n)

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def eval(self, x: Fraction) -> Fraction:
        d = self.den.eval(x)
        if d == 0:
            raise ZeroDivisionError("pole at %s" % (x,))
        return self.num.eval(x) / d

    def value_at_infinity(self) -> Fraction:
        """Finite limit at infinity; raises if the function grows there."""
        if self.num.degree > self.den.degree:
            raise ValueError("pole at infinity")
        if self.num.degree < self.den.degree:
            return ZERO
        return self.num.leading()

    def decays_like(self, k: int) -> bool:
        """True when the function is O(1/var^k) at infinity."""
        return self.is_zero() or self.num.degree <= self.den.degree - k

    def pole_order_at(self, a: Fraction) -> int:
        """Order of the pole at the finite point a (0 when regular there)."""
        if self.is_zero():
            return 0
        lin = Polynomial([-Fraction(a), Fraction(1)], self.var)
        order = 0
        den = self.den
        while True:
            q, r = den.divmod(lin)
            if not r.is_zero():
                break
            order += 1
            den = q
        return order

    def __repr__(self):
        if self.den.degree == 0 and self.den.leading() == 1:
            return "(%r)" % self.num
        return "(%r)/(%r)" % (self.num, self.den)
