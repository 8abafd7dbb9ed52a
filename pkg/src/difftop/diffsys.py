"""The hbar-difference side: L matrices and the idempotent M-matrix tower.

The tower is computed in the z chart, where sqrt(x^2-4) is the rational
function z - 1/z, so every entry stays a reduced rational function.  Two
independent routes are provided: the general 2x2 recursion (a 3x3 linear
system solved by Cramer's rule) and the reduced chart-specific recursion
that exploits the entry symmetries; they must agree entry-wise.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List

from .curve import ddx, entry_to_x_form, involute, sqrt_delta, x_of_z
from .hbar import HbarSeries, Matrix2, det_bilinear
from .poly import Polynomial
from .ratfunc import RationalFunction
from .scalars import HALF, ONE, ZERO, factorial

VAR = "z"


def _rf(c) -> RationalFunction:
    return RationalFunction.constant(c, VAR)


def _zero() -> RationalFunction:
    return RationalFunction(Polynomial([], VAR))


def l_p1(lam: Fraction = HALF) -> HbarSeries:
    """L(x;hbar) = [[x + lam*hbar, -1], [1, 0]] in the z chart; det = 1."""
    x = x_of_z()
    l0 = Matrix2(x, _rf(-1), _rf(1), _zero())
    l1 = Matrix2(_rf(lam), _zero(), _zero(), _zero())
    return HbarSeries({0: l0, 1: l1}, order=10**6)


def l_matrix_det(l: HbarSeries, order: int) -> HbarSeries:
    from .hbar import series_det

    return series_det(l.truncate(order))


def m0_general(l0: Matrix2, sqrt_disc: RationalFunction) -> Matrix2:
    """Leading idempotent: I/2 + (L0 - (tr L0/2) I)/sqrt_disc.

    Requires (L0)_{1,2} != 0 and a caller-supplied branch of
    sqrt((tr L0)^2 - 4 det L0).  Satisfies tr = 1, det = 0, [M0, L0] = 0.
    """
    if not l0.b:
        raise ValueError("(L0)_{1,2} vanishes; the construction needs it nonzero")
    half_tr = l0.trace() * HALF
    n = (l0 - Matrix2.diag(half_tr, half_tr)).map(lambda e: e / sqrt_disc)
    return n + Matrix2.diag(_rf(HALF), _rf(HALF))


def _solve3(A, rhs):
    """Cramer solve of a 3x3 system over the rational function field."""

    def det3(M):
        return (
            M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
        )

    d = det3(A)
    if not d:
        raise ValueError("singular recursion system")
    out = []
    for col in range(3):
        B = [list(row) for row in A]
        for r in range(3):
            B[r][col] = rhs[r]
        out.append(det3(B) / d)
    return out, d


def system_matrix(l0: Matrix2):
    return [
        [_zero(), l0.c, -l0.b],
        [l0.b * 2, l0.d - l0.a, _zero()],
        [l0.d - l0.a, -l0.c, -l0.b],
    ]


class _DerivCache:
    """x-derivatives of tower entries, memoized as (index, j) -> Matrix2."""

    def __init__(self, tower):
        self.tower = tower
        self.cache = {}

    def get(self, m: int, j: int) -> Matrix2:
        if j == 0:
            return self.tower[m]
        key = (m, j)
        got = self.cache.get(key)
        if got is None:
            got = self.get(m, j - 1).map(ddx)
            self.cache[key] = got
        return got


def m_next_general(
    k: int,
    tower: List[Matrix2],
    l_series: HbarSeries,
    sqrt_disc: RationalFunction,
    derivs: _DerivCache | None = None,
) -> Matrix2:
    """One step of the general recursion: solve for M_{k+1} from M_0..M_k.

    The first two rows restate [M_{k+1}, L_0] = (commutator data); the third
    is the idempotency constraint.  (M_{k+1})_{2,2} = -(M_{k+1})_{1,1}.
    """
    l0 = l_series[0]
    derivs = derivs or _DerivCache(tower)
    v = Matrix2(_zero(), _zero(), _zero(), _zero())
    for m in range(k + 1):
        lk = l_series.get(k + 1 - m)
        if lk is not None:
            v = v + lk * tower[m]
    for m in range(k + 1):
        for i in range(k + 2 - m):
            j = k + 1 - m - i
            li = l_series.get(i)
            if li is None:
                continue
            term = derivs.get(m, j) * li
            if j > 1:
                term = term.map(lambda e: e * Fraction(1, int(factorial(j))))
            v = v - term
    quad = _zero()
    for j in range(1, k + 1):
        quad = quad + tower[j].a * tower[k + 1 - j].a + tower[j].b * tower[k + 1 - j].c
    rhs = [v.a, v.b, sqrt_disc * quad]
    (m11, m12, m21), _ = _solve3(system_matrix(l0), rhs)
    return Matrix2(m11, m12, m21, -m11)


class MTower:
    """Orders M_0..M_K of the idempotent matrix, in the z chart."""

    def __init__(self, orders: List[Matrix2], lam: Fraction):
        self.orders = orders
        self.lam = lam

    def __len__(self):
        return len(self.orders)

    def __getitem__(self, k: int) -> Matrix2:
        return self.orders[k]

    def as_series(self, order: int | None = None) -> HbarSeries:
        order = len(self.orders) - 1 if order is None else order
        return HbarSeries(dict(enumerate(self.orders[: order + 1])), order)

    def eval_at(self, z0: Fraction, order: int | None = None) -> HbarSeries:
        """Numeric hbar-series of 2x2 Fraction matrices at a sample point."""
        order = len(self.orders) - 1 if order is None else order
        return HbarSeries(
            {
                k: self.orders[k].map(lambda e: e.eval(z0))
                for k in range(order + 1)
            },
            order,
        )


def m_p1(K: int, lam: Fraction = HALF) -> MTower:
    """The chart tower via the reduced recursion.

    For lam = 1/2 the entry symmetries ((M_{2k+1})_{1,1} = 0 and
    (M_k)_{2,1} = (-1)^{k+1} (M_k)_{1,2}) cut the work per step; for other
    shifts all three entries are solved.
    """
    x = x_of_z()
    sq = sqrt_delta()
    disc = x * x - 4
    m0 = m0_general(l_p1(lam)[0], sq)
    tower = [m0]
    derivs = _DerivCache(tower)
    # inverse of the recursion matrix, times (x^2 - 4)
    inv = [
        [x, _rf(2), -x],
        [_rf(-2), -x, _rf(2)],
        [x * x - 2, x, _rf(-2)],
    ]
    reduced = lam == HALF
    for k in range(K):
        r1 = _zero()
        r2 = _zero()
        for j in range(1, k + 2):
            d = derivs.get(k + 1 - j, j)
            c = Fraction(1, int(factorial(j)))
            r1 = r1 - (x * d.a + d.b) * c
            r2 = r2 + d.a * c
        if lam:
            for j in range(1, k + 1):
                r1 = r1 - derivs.get(k - j, j).a * (lam * Fraction(1, int(factorial(j))))
            r2 = r2 + tower[k].b * lam
        quad = _zero()
        for j in range(1, k + 1):
            quad = quad + tower[j].a * tower[k + 1 - j].a + tower[j].b * tower[k + 1 - j].c
        r3 = sq * quad
        rhs = [r1, r2, r3]

        def apply(row):
            return (inv[row][0] * rhs[0] + inv[row][1] * rhs[1] + inv[row][2] * rhs[2]) / disc

        m12 = apply(1)
        if reduced:
            m11 = _zero() if (k + 1) % 2 else apply(0)
            m21 = m12 * Fraction((-1) ** (k + 2))
        else:
            m11 = apply(0)
            m21 = apply(2)
        tower.append(Matrix2(m11, m12, m21, -m11))
    return MTower(tower, lam)


def m_tower_general(K: int, lam: Fraction = HALF) -> MTower:
    """Same tower through the general 3x3 route (for cross-validation)."""
    ls = l_p1(lam)
    sq = sqrt_delta()
    tower = [m0_general(ls[0], sq)]
    derivs = _DerivCache(tower)
    for k in range(K):
        tower.append(m_next_general(k, tower, ls, sq, derivs))
    return MTower(tower, lam)


def _poles_only_at_branchpoints(f: RationalFunction) -> bool:
    den = f.den
    for root in (Fraction(1), Fraction(-1)):
        lin = Polynomial([-root, ONE], f.var)
        while True:
            q, r = den.divmod(lin)
            if r.is_zero():
                den = q
            else:
                break
    return den.degree == 0


def m_audit(tower: MTower, K: int, l_series: HbarSeries | None = None) -> dict:
    """Structural audit of the tower to order hbar^K.

    Checks idempotency, trace, determinant, the Taylor-shift conjugation
    against L, decay at infinity, pole locations, and (for lam = 1/2) the
    entry sign symmetries.  Returns a report dict with one clause each.
    """
    ls = l_series if l_series is not None else l_p1(tower.lam)
    clauses = []

    def clause(cid, ok, detail=None):
        clauses.append(
            {"id": cid, "pass": bool(ok)} | ({"first_failure": detail} if not ok else {})
        )

    fail = None
    for k in range(K + 1):
        tr = tower[k].trace()
        want = _rf(1) if k == 0 else _zero()
        if tr != want:
            fail = "order %d" % k
            break
    clause("trace", fail is None, fail)

    fail = None
    for k in range(K + 1):
        acc = Matrix2(_zero(), _zero(), _zero(), _zero())
        for i in range(k + 1):
            acc = acc + tower[i] * tower[k - i]
        if acc - tower[k]:
            fail = "order %d" % k
            break
    clause("idempotency", fail is None, fail)

    fail = None
    for k in range(K + 1):
        d = _zero()
        for i in range(k + 1):
            j = k - i
            if i > j:
                continue
            d = d + (tower[i].det() if i == j else det_bilinear(tower[i], tower[j]))
        if d:
            fail = "order %d" % k
            break
    clause("determinant", fail is None, fail)

    derivs = _DerivCache(tower.orders)
    fail = None
    for k in range(K + 1):
        lhs = Matrix2(_zero(), _zero(), _zero(), _zero())
        for i in range(k + 1):
            for j in range(k + 1 - i):
                l = k - i - j
                ll = ls.get(l)
                if ll is None:
                    continue
                term = derivs.get(i, j) * ll
                if j > 1:
                    term = term.map(lambda e: e * Fraction(1, int(factorial(j))))
                lhs = lhs + term
        rhs = Matrix2(_zero(), _zero(), _zero(), _zero())
        for l in range(k + 1):
            ll = ls.get(l)
            if ll is not None:
                rhs = rhs + ll * tower[k - l]
        if lhs - rhs:
            fail = "order %d" % k
            break
    clause("shift-conjugation", fail is None, fail)

    fail = None
    m0d = tower[0] - Matrix2.diag(_rf(1), _zero())
    for k in range(K + 1):
        mk = m0d if k == 0 else tower[k]
        # M0 tends to diag(1,0); the 1/x^2 decay rate holds from order 1 on
        rate = 1 if k == 0 else 2
        for row in mk.entries():
            for e in row:
                if not e.decays_like(rate):
                    fail = "order %d" % k
                    break
    clause("infinity-decay", fail is None, fail)

    fail = None
    for k in range(K + 1):
        for row in tower[k].entries():
            for e in row:
                if not _poles_only_at_branchpoints(e):
                    fail = "order %d" % k
    clause("pole-locations", fail is None, fail)

    if tower.lam == HALF:
        fail = None
        for k in range(1, K + 1):
            if k % 2 and tower[k].a:
                fail = "order %d diagonal" % k
                break
            if tower[k].c != tower[k].b * Fraction((-1) ** (k + 1)):
                fail = "order %d off-diagonal" % k
                break
        clause("sign-symmetries", fail is None, fail)

    return {"suite": "m-structure", "clauses": clauses}


def m_to_x_form(tower: MTower, k: int):
    """Entries of M_k rewritten over x with a half-integer power of x^2-4."""
    return [[entry_to_x_form(e) for e in row] for row in tower[k].entries()]


def involution_conjugate(m: Matrix2) -> Matrix2:
    return m.map(involute)
