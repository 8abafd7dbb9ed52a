"""Truncated formal series in hbar and 2x2 matrices over duck-typed rings.

HbarSeries works for any coefficient type supporting +, -, * and truth
testing (Fraction, RationalFunction, LogElement, LamPoly, Matrix2).  The
truncation order is an explicit field: the coefficient of hbar^k is
reliable exactly for min_power <= k <= order, and products shrink the
reliable window honestly.
"""

from __future__ import annotations

from fractions import Fraction

from .series import InsufficientOrder


class HbarSeries:
    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int):
        self.coeffs = {k: v for k, v in coeffs.items() if v and k <= order}
        self.order = order

    @staticmethod
    def zero(order: int) -> "HbarSeries":
        return HbarSeries({}, order)

    @staticmethod
    def const(value, order: int) -> "HbarSeries":
        return HbarSeries({0: value}, order)

    @staticmethod
    def from_orders(values, order: int) -> "HbarSeries":
        """Build from a list [c0, c1, ...] of hbar coefficients."""
        return HbarSeries(dict(enumerate(values)), order)

    def min_power(self) -> int:
        return min(self.coeffs) if self.coeffs else self.order + 1

    def __getitem__(self, k: int):
        if k > self.order:
            raise InsufficientOrder(
                "hbar^%d requested, series reliable to hbar^%d" % (k, self.order)
            )
        return self.coeffs.get(k, 0)

    def get(self, k: int, default=None):
        if k in self.coeffs:
            return self.coeffs[k]
        return default

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def truncate(self, order: int) -> "HbarSeries":
        if order >= self.order:
            return self
        return HbarSeries(self.coeffs, order)

    def shift(self, j: int) -> "HbarSeries":
        """Multiply by hbar^j."""
        return HbarSeries({k + j: v for k, v in self.coeffs.items()}, self.order + j)

    def __neg__(self):
        return HbarSeries({k: -v for k, v in self.coeffs.items()}, self.order)

    def __add__(self, other):
        if not isinstance(other, HbarSeries):
            return NotImplemented
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return HbarSeries(out, min(self.order, other.order))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, HbarSeries):
            return self.scale(other)
        order = min(self.order + other.min_power(), other.order + self.min_power())
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if k <= order:
                    p = a * b
                    out[k] = out[k] + p if k in out else p
        return HbarSeries(out, order)

    def scale(self, c):
        return HbarSeries({k: v * c for k, v in self.coeffs.items()}, self.order)

    def scalar_div(self, c):
        inv = 1 / Fraction(c) if isinstance(c, (int, Fraction)) else None
        if inv is not None:
            return self.scale(inv)
        return HbarSeries({k: v / c for k, v in self.coeffs.items()}, self.order)

    def map_coeffs(self, fn) -> "HbarSeries":
        return HbarSeries({k: fn(v) for k, v in self.coeffs.items()}, self.order)

    def items(self):
        return sorted(self.coeffs.items())

    def __eq__(self, other):
        if not isinstance(other, HbarSeries):
            return NotImplemented
        order = min(self.order, other.order)
        for k in set(self.coeffs) | set(other.coeffs):
            if k <= order:
                a = self.coeffs.get(k)
                b = other.coeffs.get(k)
                if a is None and b is None:
                    continue
                if a is None or b is None:
                    if (a or b):
                        return False
                    continue
                if not (a == b):
                    return False
        return True

    def __repr__(self):
        return " + ".join(
            "(%r)*h^%d" % (v, k) for k, v in self.items()
        ) or "0"


class Matrix2:
    """2x2 matrix over a duck-typed commutative ring."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    @staticmethod
    def diag(a, d):
        zero = a - a
        return Matrix2(a, zero, zero, d)

    def entries(self):
        return [[self.a, self.b], [self.c, self.d]]

    def entry(self, i: int, j: int):
        return self.entries()[i][j]

    def __bool__(self):
        return bool(self.a) or bool(self.b) or bool(self.c) or bool(self.d)

    def __eq__(self, other):
        if not isinstance(other, Matrix2):
            return NotImplemented
        return (
            self.a == other.a
            and self.b == other.b
            and self.c == other.c
            and self.d == other.d
        )

    def __neg__(self):
        return Matrix2(-self.a, -self.b, -self.c, -self.d)

    def __add__(self, other):
        return Matrix2(
            self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d
        )

    def __sub__(self, other):
        return Matrix2(
            self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d
        )

    def __mul__(self, other):
        if isinstance(other, Matrix2):
            return Matrix2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        return Matrix2(self.a * other, self.b * other, self.c * other, self.d * other)

    def __rmul__(self, other):
        return Matrix2(other * self.a, other * self.b, other * self.c, other * self.d)

    def scale(self, c):
        return Matrix2(self.a * c, self.b * c, self.c * c, self.d * c)

    def trace(self):
        return self.a + self.d

    def det(self):
        return self.a * self.d - self.b * self.c

    def transpose(self):
        return Matrix2(self.a, self.c, self.b, self.d)

    def commutator(self, other):
        return self * other - other * self

    def map(self, fn) -> "Matrix2":
        return Matrix2(fn(self.a), fn(self.b), fn(self.c), fn(self.d))

    def __repr__(self):
        return "[[%r, %r], [%r, %r]]" % (self.a, self.b, self.c, self.d)


def det_bilinear(m1: Matrix2, m2: Matrix2):
    """Mixed determinant form: det(m1 + m2) = det m1 + det m2 + det_bilinear."""
    return m1.a * m2.d + m2.a * m1.d - m1.b * m2.c - m2.b * m1.c


def series_det(m: HbarSeries) -> HbarSeries:
    """Determinant of an hbar-series of 2x2 matrices, order by order."""
    out = {}
    order = m.order + m.min_power()
    for i, mi in m.coeffs.items():
        for j, mj in m.coeffs.items():
            if i > j or i + j > order:
                continue
            val = mi.det() if i == j else det_bilinear(mi, mj)
            out[i + j] = out[i + j] + val if i + j in out else val
    return HbarSeries(out, order)


def series_trace(m: HbarSeries) -> HbarSeries:
    return HbarSeries({k: v.trace() for k, v in m.coeffs.items()}, m.order)
