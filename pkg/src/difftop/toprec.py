"""Eynard-Orantin recursion engine in the branchpoint pole basis.

Stable differentials are stored as maps from key tuples
((a1,k1),...,(an,kn)), a_i in {+1,-1}, k_i >= 2, to exact rationals,
encoding sum coeff * prod dz_i/(z_i - a_i)^k_i.  The residues at the two
branchpoints are extracted from truncated Laurent expansions in the
local parameter t; the working order starts at 6g + 2n + 4 and escalates
automatically when a residue would fall outside the reliable range.

The recursion kernel is K(z0, z) = (1/2) int_z^zbar B(., z0) divided by
(y(z) - y(zbar)) dx(z); with omega_1^(0) = -y dx this reproduces the
standard first differentials of the curve x = z + 1/z, y = ln z.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple

from .curve import (
    dx_dz,
    lam_series_at,
    tbar_series,
    xprime_local,
    y_one_form,
    ydiff_local,
)
from .logring import LogElement
from .poly import Polynomial
from .ratfunc import RationalFunction
from .scalars import ZERO, scalar_to_str
from .series import InsufficientOrder, LaurentSeries

Key = Tuple[Tuple[int, int], ...]


class PoleBasisForm:
    """An n-variable differential in the branchpoint pole basis."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Dict[Key, Fraction]):
        self.n = n
        self.coeffs = {k: v for k, v in coeffs.items() if v}

    def items(self):
        return sorted(self.coeffs.items())

    def __eq__(self, other):
        if not isinstance(other, PoleBasisForm):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def max_pole_order(self) -> int:
        return max((k for key in self.coeffs for _, k in key), default=0)

    def is_symmetric(self) -> bool:
        """Invariance under every simultaneous slot permutation."""
        import itertools

        for perm in itertools.permutations(range(self.n)):
            for key, c in self.coeffs.items():
                pk = tuple(key[i] for i in perm)
                if self.coeffs.get(pk, ZERO) != c:
                    return False
        return True

    def eval(self, points) -> Fraction:
        if len(points) != self.n:
            raise ValueError("arity mismatch")
        total = ZERO
        for key, c in self.coeffs.items():
            term = c
            for (a, k), z in zip(key, points):
                term = term / (z - a) ** k
            total += term
        return total

    def to_rational(self, var: str = "z") -> RationalFunction:
        """Sum the basis into one rational function (arity 1 only)."""
        if self.n != 1:
            raise ValueError("only arity-1 forms collapse to one variable")
        out = RationalFunction(Polynomial([], var))
        z = RationalFunction.identity(var)
        for ((a, k),), c in self.coeffs.items():
            out = out + RationalFunction.constant(c, var) / (z - a) ** k
        return out

    def slot_rational(self, slot: int, points, var: str = "z") -> RationalFunction:
        """One slot symbolic, the others evaluated at the given rationals."""
        out = RationalFunction(Polynomial([], var))
        z = RationalFunction.identity(var)
        for key, c in self.coeffs.items():
            term = RationalFunction.constant(c, var)
            pi = 0
            for s, (a, k) in enumerate(key):
                if s == slot:
                    term = term / (z - a) ** k
                else:
                    term = term * RationalFunction.constant(
                        1 / (points[pi] - a) ** k, var
                    )
                    pi += 1
            out = out + term
        return out

    def to_json_obj(self):
        return [
            {
                "vars": [{"bp": "+1" if a == 1 else "-1", "k": k} for a, k in key],
                "coeff": scalar_to_str(c),
            }
            for key, c in self.items()
        ]

    def __repr__(self):
        return "PoleBasisForm(n=%d, %d terms)" % (self.n, len(self.coeffs))


def residue_at_branchpoint(series: LaurentSeries) -> Fraction:
    """Coefficient of t^-1; raises InsufficientOrder when unreliable."""
    return series[-1]


class BergmannKernel:
    """The distinguished bidifferential dz1 dz2/(z1-z2)^2."""

    def eval(self, z1: Fraction, z2: Fraction) -> Fraction:
        return 1 / (z1 - z2) ** 2

    def __repr__(self):
        return "dz1*dz2/(z1-z2)^2"


def omega_special(key):
    """The unstable cases: (0,1) is -y dx, (0,2) the Bergmann kernel."""
    if key == (0, 1):
        return y_one_form()
    if key == (0, 2):
        return BergmannKernel()
    raise ValueError("no special form for %r" % (key,))


def _is_stable(g: int, n: int) -> bool:
    return g >= 0 and n >= 1 and 2 * g - 2 + n > 0


class TopRec:
    """Memoizing recursion engine; published forms are immutable."""

    def __init__(self):
        self.memo: Dict[Tuple[int, int], PoleBasisForm] = {}

    def omega(self, g: int, n: int) -> PoleBasisForm:
        if not _is_stable(g, n):
            raise ValueError("omega(%d,%d) is not a stable differential" % (g, n))
        got = self.memo.get((g, n))
        if got is not None:
            return got
        order = 6 * g + 2 * n + 4
        while True:
            try:
                result = self._compute(g, n, order)
                break
            except InsufficientOrder:
                order = order * 3 // 2 + 4
        form = PoleBasisForm(n, result)
        self.memo[(g, n)] = form
        return form

    # -- local expansions -------------------------------------------------

    def _pole_at_z(self, a: int, b: int, k: int, order: int) -> LaurentSeries:
        """1/(z-b)^k expanded at z = a + t."""
        if b == a:
            return LaurentSeries.monomial(Fraction(a), -k, order)
        c = Fraction(a - b)  # = +-2
        from .scalars import binomial

        coeffs = {j: binomial(-k, j) * c ** (-k - j) for j in range(order + 1)}
        return LaurentSeries(Fraction(a), coeffs, order)

    def _pole_at_zbar(self, a: int, b: int, k: int, ctx) -> LaurentSeries:
        """[1/(zbar-b)^k] * dzbar/dz expanded at z = a + t."""
        tb, tbd, order = ctx["tb"], ctx["tbd"], ctx["order"]
        if b == a:
            base = ctx.setdefault("tb_inv_pows", {})
            if k not in base:
                base[k] = tb.inverse() ** k
            return base[k] * tbd
        c = Fraction(a - b)
        from .scalars import binomial

        outer = [binomial(-k, j) * c ** (-k - j) for j in range(order + 1)]
        from .series import apply_power_series

        return apply_power_series(outer, tb) * tbd

    # -- bracket assembly --------------------------------------------------

    def _factor(self, g1: int, n1: int, at_zbar: bool, a: int, ctx):
        """Local data of omega_{n1}^{(g1)} with its first slot at z or zbar.

        Returns a dict {spectator key tuple: Laurent series in t}.
        """
        order = ctx["order"]
        if (g1, n1) == (0, 2):
            out = {}
            if at_zbar:
                tb, tbd = ctx["tb"], ctx["tbd"]
                pows = ctx.setdefault("tb_pows", {0: LaurentSeries.one(tb.point, order)})
                for m in range(order + 1):
                    if m not in pows:
                        pows[m] = pows[m - 1] * tb
                    s = pows[m] * tbd * (m + 1)
                    if s:
                        out[((a, m + 2),)] = s
            else:
                for m in range(order + 1):
                    out[((a, m + 2),)] = LaurentSeries.monomial(
                        Fraction(a), m, order, Fraction(m + 1)
                    )
            return out
        stored = self.omega(g1, n1)
        out = {}
        for key, c in stored.coeffs.items():
            b0, k0 = key[0]
            series = (
                self._pole_at_zbar(a, b0, k0, ctx)
                if at_zbar
                else self._pole_at_z(a, b0, k0, order)
            ) * c
            rest = key[1:]
            if rest in out:
                out[rest] = out[rest] + series
            else:
                out[rest] = series
        return out

    def _bracket(self, g: int, n: int, a: int, ctx):
        """The recursion bracket as {spectator keys: Laurent series}."""
        order = ctx["order"]
        spectators = tuple(range(n - 1))
        bracket: Dict[Key, LaurentSeries] = {}

        def accumulate(key, series):
            if key in bracket:
                bracket[key] = bracket[key] + series
            else:
                bracket[key] = series

        # the (g-1, n+1) term with first two slots at z, zbar
        if g >= 1:
            if (g - 1, n + 1) == (0, 2):
                tb, tbd = ctx["tb"], ctx["tbd"]
                t = LaurentSeries.monomial(Fraction(a), 1, order)
                accumulate((), tbd * ((t - tb).inverse() ** 2))
            else:
                stored = self.omega(g - 1, n + 1)
                for key, c in stored.coeffs.items():
                    (b0, k0), (b1, k1) = key[0], key[1]
                    series = (
                        self._pole_at_z(a, b0, k0, order)
                        * self._pole_at_zbar(a, b1, k1, ctx)
                        * c
                    )
                    accumulate(key[2:], series)

        # the primed product sum: no omega_1^(0) factors
        for m1 in range(g + 1):
            for mask in range(1 << len(spectators)):
                i1 = tuple(i for i in spectators if mask >> i & 1)
                i2 = tuple(i for i in spectators if not mask >> i & 1)
                g2 = g - m1
                n1, n2 = len(i1) + 1, len(i2) + 1
                if (m1, n1) == (0, 1) or (g2, n2) == (0, 1):
                    continue
                f1 = self._factor(m1, n1, False, a, ctx)
                f2 = self._factor(g2, n2, True, a, ctx)
                for k1, s1 in f1.items():
                    for k2, s2 in f2.items():
                        s = s1 * s2
                        if not s:
                            continue
                        merged = [None] * len(spectators)
                        for pos, kk in zip(i1, k1):
                            merged[pos] = kk
                        for pos, kk in zip(i2, k2):
                            merged[pos] = kk
                        accumulate(tuple(merged), s)
        return bracket

    def _compute(self, g: int, n: int, order: int) -> Dict[Key, Fraction]:
        out: Dict[Key, Fraction] = {}
        for a in (1, -1):
            tb = tbar_series(a, order)
            ctx = {"order": order, "tb": tb, "tbd": tb.derivative()}
            pref = (ydiff_local(a, order) * xprime_local(a, order) * 2).inverse()
            tb_pows = {1: tb}

            def tbar_pow(m):
                if m not in tb_pows:
                    tb_pows[m] = tbar_pow(m - 1) * tb
                return tb_pows[m]

            for key, series in self._bracket(g, n, a, ctx).items():
                T = pref * series
                if T.is_zero():
                    continue
                mmax = -T.valuation() - 1
                for m in range(1, mmax + 1):
                    t_m = LaurentSeries.monomial(Fraction(a), m, T.order + m + 1)
                    r = residue_at_branchpoint((tbar_pow(m) - t_m) * T)
                    if r:
                        full = ((a, m + 1),) + key
                        out[full] = out.get(full, ZERO) + r
        return out


class PrimitiveForm:
    """Termwise primitive of a pole-basis form, base point 0 in each slot."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Dict[Key, Fraction]):
        self.n = n
        self.coeffs = dict(coeffs)

    @staticmethod
    def slot_primitive(a: int, k: int, var: str = "z") -> RationalFunction:
        """The primitive of 1/(z-a)^k vanishing at z = 0 (k >= 2)."""
        z = RationalFunction.identity(var)
        c = Fraction(1, k - 1)
        return RationalFunction.constant(c * Fraction((-a)) ** (1 - k), var) - c / (
            z - a
        ) ** (k - 1)

    def eval(self, points) -> Fraction:
        total = ZERO
        for key, c in self.coeffs.items():
            term = c
            for (a, k), z in zip(key, points):
                p = 1 / (Fraction(1 - k) * (z - a) ** (k - 1)) + 1 / (
                    Fraction(k - 1) * Fraction(-a) ** (k - 1)
                )
                term *= p
            total += term
        return total


def f_gn(engine: TopRec, g: int, n: int) -> PrimitiveForm:
    form = engine.omega(g, n)
    return PrimitiveForm(n, form.coeffs)


ENGINE = TopRec()


def omega(g: int, n: int) -> PoleBasisForm:
    return ENGINE.omega(g, n)
