"""Exact scalars and their canonical text encoding.

All coefficients in this package are arbitrary-precision rationals,
represented by :class:`fractions.Fraction` (already kept in normalized
form: gcd(|num|, den) = 1, den > 0, zero is 0/1).  The canonical text
form used by every serializer is ``"p/q"``, or just ``"p"`` when the
denominator is 1, with an ASCII minus sign.
"""

from __future__ import annotations

import math
from fractions import Fraction

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def scalar_to_str(x: Fraction) -> str:
    """Canonical "p/q" (or "p" when q = 1) encoding."""
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def scalar_from_str(s: str) -> Fraction:
    """Parse the canonical "p/q" encoding back into a Fraction."""
    s = s.strip()
    if "/" in s:
        p, q = s.split("/")
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def binomial(n: int, k: int) -> Fraction:
    """binom(n, k) with the convention binom(n, k) = 0 for k < 0 or k > n >= 0.

    Negative n follows the polynomial extension binom(n, k) = n(n-1)...(n-k+1)/k!.
    """
    if k < 0:
        return ZERO
    if n >= 0:
        if k > n:
            return ZERO
        return Fraction(math.comb(n, k))
    num = 1
    for i in range(k):
        num *= n - i
    return Fraction(num, math.factorial(k))


def factorial(n: int) -> Fraction:
    return Fraction(math.factorial(n))
