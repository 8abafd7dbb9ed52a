"""Truncated Laurent series with exact rational coefficients.

A series carries its expansion point (a finite rational or infinity), a
sparse map power -> coefficient, and an explicit truncation order: the
coefficient of t^k is known exactly for every k <= order and unknown
beyond it.  Arithmetic propagates the truncation honestly, so reading a
coefficient past the reliable range raises :class:`InsufficientOrder`
instead of silently returning 0.

At a finite point a the local parameter is t = var - a; at infinity it
is u = 1/var (so a series may legitimately carry negative powers, e.g.
the branch solving x = z + 1/z starts at u^-1).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict

from .poly import Polynomial
from .ratfunc import RationalFunction
from .scalars import ZERO, binomial

INF = "inf"


class InsufficientOrder(Exception):
    """A coefficient beyond the reliable truncation range was requested."""


class LaurentSeries:
    __slots__ = ("point", "coeffs", "order")

    def __init__(self, point, coeffs: Dict[int, Fraction], order: int):
        self.point = point
        self.coeffs = {k: v for k, v in coeffs.items() if v and k <= order}
        self.order = order

    @staticmethod
    def zero(point, order: int) -> "LaurentSeries":
        return LaurentSeries(point, {}, order)

    @staticmethod
    def one(point, order: int) -> "LaurentSeries":
        return LaurentSeries(point, {0: Fraction(1)}, order)

    @staticmethod
    def monomial(point, power: int, order: int, coeff=Fraction(1)) -> "LaurentSeries":
        return LaurentSeries(point, {power: Fraction(coeff)}, order)

    def valuation(self) -> int:
        """Lowest known nonzero power; order+1 for a (truncated) zero."""
        return min(self.coeffs) if self.coeffs else self.order + 1

    @property
    def min_power(self) -> int:
        return self.valuation()

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if k > self.order:
            raise InsufficientOrder(
                "coefficient t^%d requested, series only reliable to t^%d"
                % (k, self.order)
            )
        return self.coeffs.get(k, ZERO)

    def residue(self) -> Fraction:
        return self[-1]

    def truncate(self, order: int) -> "LaurentSeries":
        if order >= self.order:
            return self
        return LaurentSeries(self.point, self.coeffs, order)

    def _check(self, other: "LaurentSeries"):
        if self.point != other.point:
            raise ValueError("expansion point mismatch")

    def __neg__(self):
        return LaurentSeries(self.point, {k: -v for k, v in self.coeffs.items()}, self.order)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries.monomial(self.point, 0, self.order, other)
        self._check(other)
        order = min(self.order, other.order)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return LaurentSeries(self.point, out, order)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, LaurentSeries) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return LaurentSeries(self.point, {k: v * c for k, v in self.coeffs.items()}, self.order)
        self._check(other)
        order = min(self.order + other.valuation(), other.order + self.valuation())
        out: Dict[int, Fraction] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if k <= order:
                    out[k] = out.get(k, ZERO) + a * b
        return LaurentSeries(self.point, out, order)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        if self.is_zero():
            raise ZeroDivisionError("inverse of a zero series")
        v = self.valuation()
        rel = self.order - v  # relative order of the unit part
        a0 = self.coeffs[v]
        inv0 = 1 / a0
        # invert the unit part sum_{j>=0} u_j t^j with u_0 = 1
        u = {j: self.coeffs.get(v + j, ZERO) * inv0 for j in range(rel + 1)}
        w = [Fraction(1)] + [ZERO] * rel
        for k in range(1, rel + 1):
            s = ZERO
            for j in range(1, k + 1):
                uj = u.get(j, ZERO)
                if uj:
                    s += uj * w[k - j]
            w[k] = -s
        out = {-v + j: w[j] * inv0 for j in range(rel + 1) if w[j]}
        return LaurentSeries(self.point, out, rel - v)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __pow__(self, n: int) -> "LaurentSeries":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return LaurentSeries.one(self.point, self.order)
        acc = None
        base = self
        m = n
        while m:
            if m & 1:
                acc = base if acc is None else acc * base
            m >>= 1
            if m:
                base = base * base
        return acc

    def derivative(self) -> "LaurentSeries":
        return LaurentSeries(
            self.point,
            {k - 1: k * v for k, v in self.coeffs.items() if k != 0},
            self.order - 1,
        )

    def map_coeffs(self, fn) -> "LaurentSeries":
        return LaurentSeries(self.point, {k: fn(v) for k, v in self.coeffs.items()}, self.order)

    def items(self):
        return sorted(self.coeffs.items())

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        order = min(self.order, other.order)
        for k in set(self.coeffs) | set(other.coeffs):
            if k <= order and self.coeffs.get(k, ZERO) != other.coeffs.get(k, ZERO):
                return False
        return True

    def __repr__(self):
        if not self.coeffs:
            return "O(t^%d)" % (self.order + 1)
        terms = ["%s*t^%d" % (v, k) for k, v in self.items()]
        return " + ".join(terms) + " + O(t^%d)" % (self.order + 1)


def apply_power_series(outer: list, inner: LaurentSeries) -> LaurentSeries:
    """Compose sum_j outer[j] * inner^j for an inner series of valuation >= 1."""
    if inner and inner.valuation() < 1:
        raise ValueError("composition needs valuation >= 1")
    acc = LaurentSeries.zero(inner.point, inner.order)
    for c in reversed(outer):
        acc = acc * inner + c
    return acc


def log1p_series(point, order: int) -> LaurentSeries:
    """ln(1 + t) = t - t^2/2 + t^3/3 - ..."""
    return LaurentSeries(
        point,
        {k: Fraction((-1) ** (k + 1), k) for k in range(1, order + 1)},
        order,
    )


def expand_poly_at(p: Polynomial, a: Fraction, order: int, point=None) -> LaurentSeries:
    sh = p.taylor_shift(a)
    return LaurentSeries(a if point is None else point, dict(enumerate(sh.coeffs)), order)


def expand_at(f: RationalFunction, a: Fraction, order: int) -> LaurentSeries:
    """Laurent expansion of a rational function around a finite point.

    The valuation equals the exact order of the zero (or minus the order
    of the pole) at a, and all returned coefficients are exact.
    """
    if f.is_zero():
        return LaurentSeries.zero(a, order)
    num = f.num.taylor_shift(a)
    den = f.den.taylor_shift(a)
    vd = den.valuation()
    num_series = LaurentSeries(a, dict(enumerate(num.coeffs)), order + vd)
    den_series = LaurentSeries(a, dict(enumerate(den.coeffs)), order + vd)
    return num_series * den_series.inverse()


def expand_at_infinity(f: RationalFunction, order: int) -> LaurentSeries:
    """Expansion in u = 1/var at infinity; u-valuation = deg den - deg num."""
    if f.is_zero():
        return LaurentSeries.zero(INF, order)
    dp, dq = f.num.degree, f.den.degree
    rp = f.num.reversed_coeffs()
    rq = f.den.reversed_coeffs()
    rel = order - (dq - dp)
    num_series = LaurentSeries(INF, dict(enumerate(rp.coeffs)), max(rel, 0))
    den_series = LaurentSeries(INF, dict(enumerate(rq.coeffs)), max(rel, 0))
    frac = num_series * den_series.inverse()
    out = {k + dq - dp: v for k, v in frac.coeffs.items()}
    return LaurentSeries(INF, out, order)
