"""Geometry of the genus-0 chart x(z) = z + 1/z, y(z) = ln z.

Fixes once and for all the branch conventions used everywhere else:
sqrt(x^2 - 4) is the rational function z - 1/z (positive for z > 1), the
hyperelliptic involution is z -> 1/z, and the branchpoints sit at
z = +1, -1 (x = +2, -2).  Near z = -1 the symbol lam = ln z is read as
(1/2) ln z^2, which vanishes at both branchpoints and keeps every local
expansion rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .logring import LogElement
from .poly import Polynomial
from .ratfunc import RationalFunction
from .scalars import ONE, ZERO
from .series import INF, LaurentSeries, expand_at, log1p_series

VAR = "z"


def x_of_z() -> RationalFunction:
    return RationalFunction(Polynomial([ONE, ZERO, ONE]), Polynomial([ZERO, ONE]))


def sqrt_delta() -> RationalFunction:
    """The branch of sqrt(x^2 - 4): z - 1/z."""
    return RationalFunction(Polynomial([-ONE, ZERO, ONE]), Polynomial([ZERO, ONE]))


def dx_dz() -> RationalFunction:
    return RationalFunction(Polynomial([-ONE, ZERO, ONE]), Polynomial([ZERO, ZERO, ONE]))


def dz_dx_factor() -> RationalFunction:
    """z^2/(z^2 - 1); d/dx = this factor times d/dz."""
    return RationalFunction(Polynomial([ZERO, ZERO, ONE]), Polynomial([-ONE, ZERO, ONE]))


def ddx(obj):
    """d/dx applied to a RationalFunction or LogElement in z."""
    return obj.derivative() * dz_dx_factor()


def ddx_iter(obj, n: int):
    for _ in range(n):
        obj = ddx(obj)
    return obj


def involute(f: RationalFunction) -> RationalFunction:
    """f(1/z) as a reduced rational function; an involution."""
    if f.is_zero():
        return f
    z = Polynomial.identity(f.var)
    dn, dd = f.num.degree, f.den.degree
    return RationalFunction(
        f.num.reversed_coeffs() * z ** dd, f.den.reversed_coeffs() * z ** dn
    )


@dataclass(frozen=True)
class CurveChart:
    branchpoints: tuple = (1, -1)

    @property
    def x_of_z(self) -> RationalFunction:
        return x_of_z()

    @property
    def sqrt_delta(self) -> RationalFunction:
        return sqrt_delta()

    def check_invariants(self) -> bool:
        lhs = self.sqrt_delta * self.sqrt_delta
        rhs = self.x_of_z * self.x_of_z - 4
        if lhs != rhs:
            return False
        dx = dx_dz()
        return all(dx.eval(Fraction(a)) == 0 for a in self.branchpoints)


def lam_series_at(a: int, order: int) -> LaurentSeries:
    """Local series of lam at the branchpoint a (simple zero there).

    At a = +1 this is ln(1+t); at a = -1 it is (1/2) ln z^2 = ln(1-t).
    """
    if a == 1:
        return log1p_series(Fraction(1), order)
    return LaurentSeries(
        Fraction(-1), {k: Fraction(-1, k) for k in range(1, order + 1)}, order
    )


def ydiff_local(a: int, order: int) -> LaurentSeries:
    """y(z) - y(zbar) = 2 lam near the branchpoint a; starts at 2t or -2t."""
    return lam_series_at(a, order) * 2


def tbar_series(a: int, order: int) -> LaurentSeries:
    """zbar - a = -a t / (a + t) as a series in t = z - a."""
    out = {}
    for k in range(1, order + 1):
        out[k] = Fraction(-((-1) ** (k - 1)), a ** (k - 1))
    return LaurentSeries(Fraction(a), out, order)


def xprime_local(a: int, order: int) -> LaurentSeries:
    return expand_at(dx_dz(), Fraction(a), order)


def y_one_form() -> LogElement:
    """-y dx as a density in dz: -lam * (1 - 1/z^2)."""
    return LogElement({1: -dx_dz()}, VAR)


def gen_binomial(alpha: Fraction, k: int) -> Fraction:
    num = Fraction(1)
    for i in range(k):
        num *= alpha - i
    from math import factorial

    return num / factorial(k)


def sqrt_x2m4_at_infinity(order: int) -> LaurentSeries:
    """sqrt(x^2-4) = x (1 - 4/x^2)^(1/2) as a series in u = 1/x."""
    coeffs = {}
    j = 0
    while 2 * j - 1 <= order:
        c = gen_binomial(Fraction(1, 2), j) * Fraction((-4) ** j)
        if c:
            coeffs[2 * j - 1] = c
        j += 1
    return LaurentSeries(INF, coeffs, order)


def z_of_x_series(order: int) -> LaurentSeries:
    """The branch z = (x + sqrt(x^2-4))/2 = x - sum C_k x^(-2k-1), Catalan C_k."""
    x = LaurentSeries.monomial(INF, -1, order)
    return (x + sqrt_x2m4_at_infinity(order)) * Fraction(1, 2)


def poly_eval_on_series(p: Polynomial, s: LaurentSeries) -> LaurentSeries:
    acc = LaurentSeries.zero(s.point, s.order)
    for c in reversed(p.coeffs):
        acc = acc * s + c
    return acc


def eval_on_branch(f: RationalFunction, order: int) -> LaurentSeries:
    """Expansion of f(z(x)) in 1/x along the z ~ x branch."""
    slack = f.num.degree + f.den.degree + 2
    zs = z_of_x_series(order + slack)
    num = poly_eval_on_series(f.num, zs)
    den = poly_eval_on_series(f.den, zs)
    return (num * den.inverse()).truncate(order)


def d_dx_at_infinity(s: LaurentSeries) -> LaurentSeries:
    """d/dx of a series in u = 1/x: equals -u^2 d/du."""
    return LaurentSeries(
        INF, {k + 1: -k * v for k, v in s.coeffs.items() if k}, s.order + 1
    )


def form_at_infinity(a: int, k: int, order: int) -> LaurentSeries:
    """dz/(z-a)^k re-expanded in x: [1/(z(x)-a)^k] * dz/dx, a series in 1/x.

    Starts at 1/x^k; feeding these into a pole-basis differential converts
    it into a generating series in the x variables.
    """
    if k < 2:
        raise ValueError("pole basis requires k >= 2")
    slack = k + 4
    zs = z_of_x_series(order + slack)
    base = zs + LaurentSeries.monomial(INF, 0, zs.order, Fraction(-a))
    dzdx = d_dx_at_infinity(zs)
    return ((base.inverse() ** k) * dzdx).truncate(order)


def _laurent_dict(p: Polynomial, shift: int):
    return {k + shift: c for k, c in enumerate(p.coeffs) if c}


def symmetric_to_x(f: RationalFunction) -> RationalFunction:
    """Rewrite a z->1/z symmetric rational function as a function of x.

    Uses N(z) = num * rev(den), D(z) = den * rev(den), both symmetric
    Laurent polynomials after centering, then converts z^k + z^-k into the
    Chebyshev-style basis p_k(x) with p_0 = 2, p_1 = x, p_k+1 = x p_k - p_k-1.
    """
    if f.is_zero():
        return RationalFunction(Polynomial([], "x"))
    if involute(f) != f:
        raise ValueError("not symmetric under z -> 1/z")
    num, den = f.num, f.den
    rev = den.reversed_coeffs()
    nl = _laurent_dict(num * rev, 0)
    dl = _laurent_dict(den * rev, 0)
    # center both around 0 with the same shift so the quotient is unchanged
    shift = -(den.degree)
    nl = {k + shift: v for k, v in nl.items()}
    dl = {k + shift: v for k, v in dl.items()}
    return RationalFunction(
        _symmetric_laurent_to_x(nl), _symmetric_laurent_to_x(dl), "x"
    )


def _symmetric_laurent_to_x(coeffs) -> Polynomial:
    work = dict(coeffs)
    kmax = max(abs(k) for k in work) if work else 0
    for k in range(1, kmax + 1):
        if work.get(k, ZERO) != work.get(-k, ZERO):
            raise ValueError("Laurent polynomial is not symmetric")
    # p_k(x) = z^k + z^-k as x-polynomials
    pk = [Polynomial([Fraction(2)], "x"), Polynomial.identity("x")]
    while len(pk) <= kmax:
        pk.append(Polynomial.identity("x") * pk[-1] - pk[-2])
    out = Polynomial([], "x")
    for k in range(kmax, 0, -1):
        c = work.get(k, ZERO)
        if c:
            out = out + pk[k] * c
    out = out + Polynomial([work.get(0, ZERO)], "x")
    return out


def antisymmetric_to_sqrt_form(f: RationalFunction):
    """Write a z->1/z antisymmetric f as n(x) / (d(x) (x^2-4)^(half/2)).

    Returns (n, d, half) with half odd and positive, d monic and coprime
    to x^2 - 4.
    """
    if f.is_zero():
        return Polynomial([], "x"), Polynomial([Fraction(1)], "x"), 1
    if involute(f) != -f:
        raise ValueError("not antisymmetric under z -> 1/z")
    b = symmetric_to_x(f / sqrt_delta())
    disc = Polynomial([Fraction(-4), ZERO, Fraction(1)], "x")
    num, den = b.num, b.den
    p = 0
    while True:
        q, r = den.divmod(disc)
        if r.is_zero():
            den = q
            p += 1
        else:
            break
    while True:
        q, r = num.divmod(disc)
        if r.is_zero() and p > 0:
            # fold shared disc factors back: keep denominator power minimal
            num = q
            p -= 1
        else:
            break
    # value = num/(den * disc^p) * disc^(1/2) = num/(den * disc^((2p-1)/2))
    half = 2 * p - 1
    if half < 0:
        num = num * disc ** ((-half + 1) // 2)
        half = 1
    lead = den.leading()
    if lead != 1:
        num = num * (1 / lead)
        den = den.monic()
    return num, den, half


def entry_to_x_form(e: RationalFunction):
    """Split a chart-function into symmetric + antisymmetric/sqrt parts."""
    ei = involute(e)
    sym = (e + ei) * Fraction(1, 2)
    anti = (e - ei) * Fraction(1, 2)
    a_x = symmetric_to_x(sym) if sym else RationalFunction(Polynomial([], "x"))
    n, d, half = antisymmetric_to_sqrt_form(anti)
    return {"sym": a_x, "anti_num": n, "anti_den": d, "anti_half_power": half}
