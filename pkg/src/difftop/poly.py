"""Dense univariate polynomials over exact rationals.

Coefficients are stored lowest degree first; the leading coefficient is
nonzero unless the polynomial is zero (empty list).  Every polynomial
carries the name of its variable so that mixed-variable arithmetic is
rejected early.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .scalars import ONE, ZERO


class Polynomial:
    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable[Fraction] = (), var: str = "z"):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs
        self.var = var

    @staticmethod
    def constant(c, var: str = "z") -> "Polynomial":
        return Polynomial([Fraction(c)], var)

    @staticmethod
    def identity(var: str = "z") -> "Polynomial":
        return Polynomial([ZERO, ONE], var)

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial mapped to -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    def _check(self, other: "Polynomial"):
        if self.var != other.var:
            raise ValueError("variable mismatch: %r vs %r" % (self.var, other.var))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, tuple(self.coeffs)))

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs], self.var)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(
            [self[k] + other[k] for k in range(n)], self.var
        )

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(
            [self[k] - other[k] for k in range(n)], self.var
        )

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Fraction) or isinstance(other, int):
            c = Fraction(other)
            return Polynomial([a * c for a in self.coeffs], self.var)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Polynomial([], self.var)
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return Polynomial(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(1, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "Polynomial"):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [ZERO] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d, lead = other.degree, other.leading()
        while len(rem) - 1 >= d and rem:
            k = len(rem) - 1 - d
            f = rem[-1] / lead
            q[k] = f
            for j in range(d + 1):
                rem[k + j] -= f * other.coeffs[j]
            while rem and rem[-1] == 0:
                rem.pop()
        return Polynomial(q, self.var), Polynomial(rem, self.var)

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[0]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lead = self.leading()
        if lead == 1:
            return self
        return Polynomial([c / lead for c in self.coeffs], self.var)

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd by the Euclidean algorithm."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: "Polynomial"):
        """Extended gcd: returns (g, s, t) monic g with s*self + t*other = g."""
        a, b = self, other
        one = Polynomial.constant(1, self.var)
        zero = Polynomial([], self.var)
        sa, ta, sb, tb = one, zero, zero, one
        while not b.is_zero():
            q, r = a.divmod(b)
            a, b = b, r
            sa, sb = sb, sa - q * sb
            ta, tb = tb, ta - q * tb
        if a.is_zero():
            return a, sa, ta
        lead = a.leading()
        inv = 1 / lead
        return a.monic(), sa * inv, ta * inv

    def derivative(self) -> "Polynomial":
        return Polynomial(
            [k * c for k, c in enumerate(self.coeffs)][1:], self.var
        )

    def eval(self, x: Fraction) -> Fraction:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def taylor_shift(self, a: Fraction) -> "Polynomial":
        """Coefficients of p(a + t) as a polynomial in t (Horner expansion)."""
        out = Polynomial([], self.var)
        t_shift = Polynomial([Fraction(a), ONE], self.var)
        for c in reversed(self.coeffs):
            out = out * t_shift + Polynomial.constant(c, self.var)
        return out

    def reversed_coeffs(self) -> "Polynomial":
        """x^deg * p(1/x), i.e. the coefficient list reversed."""
        return Polynomial(list(reversed(self.coeffs)), self.var)

    def valuation(self) -> int:
        """Order of vanishing at 0 (degree+1 convention not used: zero poly -> large)."""
        if self.is_zero():
            raise ValueError("valuation of the zero polynomial")
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        raise AssertionError

    def squarefree_decomposition(self):
        """Yun's algorithm: returns [(factor, multiplicity), ...], factors monic.

        The product of factor**multiplicity equals self.monic().
        """
        if self.is_zero():
            raise ValueError("squarefree decomposition of zero")
        p = self.monic()
        if p.degree == 0:
            return []
        out = []
        dp = p.derivative()
        a = p.gcd(dp)
        b = p // a
        c = dp // a
        i = 1
        d = c - b.derivative()
        while True:
            if b.degree == 0:
                break
            g = b.gcd(d)
            if g.degree > 0:
                out.append((g, i))
            b = b // g
            c = d // g
            d = c - b.derivative()
            i += 1
        return out

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append("%s*%s" % (c, self.var))
            else:
                terms.append("%s*%s^%d" % (c, self.var, k))
        return " + ".join(terms)
