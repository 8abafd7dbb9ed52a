"""The log-extension ring Q(z)[lam] and exact integration inside it.

``lam`` is the formal symbol for ln z: its derivative is 1/z, it
vanishes to first order at z = 1, and (read as (1/2) ln z^2) it also
vanishes to first order at z = -1.  Elements are finite sums
sum_j f_j(z) lam^j with rational-function coefficients.

Integration is exact and raises :class:`NonIntegrableResidue` whenever a
quadrature would need a logarithm at a finite point other than 0; the
callers use that error as a falsifiable check on pole-structure claims.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Polynomial
from .ratfunc import RationalFunction
from .scalars import ZERO
from .series import LaurentSeries, apply_power_series, expand_at


class NonIntegrableResidue(Exception):
    """A nonzero residue at a finite point != 0 blocks integration."""

    def __init__(self, point, value=None, factor=None):
        self.point = point
        self.value = value
        self.factor = factor
        if point is not None:
            msg = "nonzero residue %s at %s" % (value, point)
        else:
            msg = "nonzero residue along factor %r" % (factor,)
        super().__init__(msg)


def _hermite_reduce(p: Polynomial, q: Polynomial, m: int):
    """Reduce integral of p/q^m (q squarefree, m >= 2) to rational + p1/q.

    Returns (rational_part, p1) with
    int p/q^m = rational_part + int p1/q.
    """
    var = q.var
    rational = RationalFunction(Polynomial([], var))
    while m >= 2:
        g, a, b = q.xgcd(q.derivative())
        if g.degree != 0:
            raise AssertionError("factor not squarefree")
        inv = 1 / g.leading() if g.leading() != 1 else Fraction(1)
        p = p % (q ** m)
        pa = p * a
        pb = p * b
        rational = rational + RationalFunction(pb * Fraction(1, 1 - m), q ** (m - 1))
        p = pa + pb.derivative() * Fraction(1, m - 1)
        m -= 1
    return rational, p % q if q.degree > 0 else p


def _partial_fraction_pieces(num: Polynomial, den: Polynomial):
    """Split a proper fraction num/den over the squarefree powers of den.

    Yields (factor, multiplicity, numerator) with the fraction equal to the
    sum of numerator/factor**multiplicity.
    """
    pieces = []
    factors = den.squarefree_decomposition()
    R = num
    D = den.monic()
    for idx, (qf, mult) in enumerate(factors):
        A = qf ** mult
        if idx == len(factors) - 1:
            pieces.append((qf, mult, R % A))
            break
        B = D // A
        g, u, v = A.xgcd(B)
        if g.degree != 0:
            raise AssertionError("squarefree factors not coprime")
        s, pA = (R * v).divmod(A)
        pieces.append((qf, mult, pA))
        R = R * u + s * B
        D = B
    return pieces


def antiderivative(f: RationalFunction) -> "LogElement":
    """Exact antiderivative with integration constant 0.

    A nonzero residue at z = 0 contributes c*lam; a nonzero residue at any
    other finite point raises NonIntegrableResidue (the point is named when
    it is rational, otherwise the offending squarefree factor is reported).
    """
    var = f.var
    z = Polynomial.identity(var)
    poly_part, rem = f.num.divmod(f.den)
    out_rational = RationalFunction(
        Polynomial([ZERO] + [c / (k + 1) for k, c in enumerate(poly_part.coeffs)], var)
    )
    lam_coeff = ZERO
    if not rem.is_zero():
        for qf, mult, p in _partial_fraction_pieces(rem, f.den):
            if mult >= 2:
                rat, p = _hermite_reduce(p, qf, mult)
                out_rational = out_rational + rat
            else:
                p = p % qf
            if p.is_zero():
                continue
            if qf == z:
                lam_coeff += p[0]
                continue
            # a genuine log at a finite point != 0
            for cand in (Fraction(1), Fraction(-1), ZERO):
                if qf.eval(cand) == 0:
                    raise NonIntegrableResidue(
                        cand, p.eval(cand) / qf.derivative().eval(cand)
                    )
            raise NonIntegrableResidue(None, factor=qf)
    parts = {0: out_rational}
    if lam_coeff:
        parts[1] = RationalFunction.constant(lam_coeff, var)
    return LogElement(parts, var)


class LogElement:
    """Finite sum over j of f_j(z) * lam^j with f_j rational."""

    __slots__ = ("parts", "var")

    def __init__(self, parts=None, var: str = "z"):
        self.var = var
        self.parts = {}
        if parts:
            for j, f in parts.items():
                if isinstance(f, (int, Fraction)):
                    f = RationalFunction.constant(f, var)
                if f:
                    self.parts[j] = f

    @staticmethod
    def zero(var: str = "z") -> "LogElement":
        return LogElement({}, var)

    @staticmethod
    def from_rational(f: RationalFunction) -> "LogElement":
        return LogElement({0: f}, f.var)

    @staticmethod
    def lam(var: str = "z", power: int = 1) -> "LogElement":
        return LogElement({power: RationalFunction.constant(1, var)}, var)

    def lam_degree(self) -> int:
        return max(self.parts) if self.parts else 0

    def part(self, j: int) -> RationalFunction:
        return self.parts.get(j, RationalFunction(Polynomial([], self.var)))

    def rational_part(self) -> RationalFunction:
        return self.part(0)

    def is_zero(self) -> bool:
        return not self.parts

    def __bool__(self):
        return bool(self.parts)

    def is_rational(self) -> bool:
        return all(j == 0 for j in self.parts)

    def _coerce(self, other):
        if isinstance(other, LogElement):
            return other
        if isinstance(other, RationalFunction):
            return LogElement({0: other}, self.var)
        if isinstance(other, (int, Fraction)):
            return LogElement({0: RationalFunction.constant(other, self.var)}, self.var)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.parts == other.parts

    def __neg__(self):
        return LogElement({j: -f for j, f in self.parts.items()}, self.var)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.parts)
        for j, f in other.parts.items():
            out[j] = out.get(j, RationalFunction(Polynomial([], self.var))) + f
        return LogElement(out, self.var)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = {}
        for i, f in self.parts.items():
            for j, g in other.parts.items():
                k = i + j
                prod = f * g
                out[k] = out[k] + prod if k in out else prod
        return LogElement(out, self.var)

    __rmul__ = __mul__

    def derivative(self) -> "LogElement":
        """d/dz, using (lam^j)' = j lam^(j-1) / z (any integer j)."""
        z = RationalFunction.identity(self.var)
        out = LogElement.zero(self.var)
        for j, f in self.parts.items():
            out = out + LogElement({j: f.derivative()}, self.var)
            if j != 0:
                out = out + LogElement({j - 1: f * Fraction(j) / z}, self.var)
        return out

    def integrate(self) -> "LogElement":
        """Exact z-antiderivative by repeated integration by parts.

        Raises NonIntegrableResidue if any reduced level has a residue at a
        finite point other than 0.
        """
        z = RationalFunction.identity(self.var)
        work = dict(self.parts)
        result = LogElement.zero(self.var)
        for j in range(self.lam_degree(), 0, -1):
            f = work.get(j)
            if not f:
                continue
            F = antiderivative(f)
            R = F.part(0)
            c = F.part(1)
            result = result + LogElement({j: R}, self.var)
            if c:
                result = result + LogElement(
                    {j + 1: c * Fraction(1, j + 1)}, self.var
                )
            fold = R * Fraction(-j) / z
            work[j - 1] = work.get(j - 1, RationalFunction(Polynomial([], self.var))) + fold
        f0 = work.get(0)
        if f0:
            result = result + antiderivative(f0)
        return result

    def eval_at(self, z0: Fraction) -> "LamPoly":
        return LamPoly({j: f.eval(z0) for j, f in self.parts.items()})

    def local_expand(self, a: Fraction, order: int, lam_series: LaurentSeries) -> LaurentSeries:
        """Laurent expansion at a with lam replaced by its local series."""
        out = LaurentSeries.zero(a, order)
        for j, f in self.parts.items():
            term = expand_at(f, a, order + 2 * max(j, 1))
            out = out + term * (lam_series ** j if j else LaurentSeries.one(a, lam_series.order))
        return out

    def __repr__(self):
        if not self.parts:
            return "0"
        return " + ".join(
            "(%r)%s" % (f, "" if j == 0 else "*lam^%d" % j if j > 1 else "*lam")
            for j, f in sorted(self.parts.items())
        )


class LamPoly:
    """Polynomial in the formal symbol lam with duck-typed coefficients.

    Used for exact point evaluation of LogElements (coefficients are then
    Fractions) and, nested, for expressions mixing two independent log
    symbols.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for j, c in coeffs.items():
                if c:
                    self.coeffs[j] = c

    @staticmethod
    def const(c) -> "LamPoly":
        return LamPoly({0: c})

    def get(self, j: int):
        return self.coeffs.get(j, ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def degree(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def _coerce(self, other):
        if isinstance(other, LamPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LamPoly({0: Fraction(other)}) if other else LamPoly()
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __neg__(self):
        return LamPoly({j: -c for j, c in self.coeffs.items()})

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for j, c in other.coeffs.items():
            s = out.get(j)
            out[j] = c if s is None else s + c
        return LamPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                p = a * b
                out[k] = out[k] + p if k in out else p
        return LamPoly(out)

    __rmul__ = __mul__

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(
            "(%s)%s" % (c, "" if j == 0 else "*L^%d" % j)
            for j, c in sorted(self.coeffs.items())
        )
