"""Fractional right ideals, their distinguished representatives and theta_1.

Every ideal is reduced to a polynomial right ideal P in e_j B (left
multiplication by a unit of the localization is a module isomorphism).  From
P, each side is treated the same way (the y-side over the mirrored context):

    g      right gcd of the generators in e C(x)[y]  (P B[S1^-1] = g B[S1^-1])
    d(x)   common denominator of g^-1 P
    P''    d g^-1 P, polynomial and meeting C[x]
    p(x)   stable leading-coefficient polynomial of P'' (y-major ladder)
    M_x    p^-1 P''  (distinguished: its ladder ends at 1)

so M_x = p^-1 d_x g_x^-1 P, M_y = r^-1 d_y g_y^-1 P and the transition is
kappa = r^-1 d_y g_y^-1 g_x d_x^-1 p, normalized to have constant term 1.
"""
import warnings
from dataclasses import dataclass
from functools import cached_property

from ..crossed_algebra import AlgElem, is_generic
from ..dgmodel import LambdaTable
from ..errors import (GenericityWarning, NotInFamilyError, StabilityError, WindowError,
                      WrongOrderingError)
from ..quiver import QuiverPoint, check_stability, validate_point
from ..scalars import ONE, ZERO, Matrix, Poly, RatFunc, inv
from .groebner import EPoly, groebner, ladder_from_basis, reduce
from .kappa import KappaMu
from .loc import LocX, LocY, mirror_algelem, mirror_ctx


def _residue(p, m):
    res = p.residues(m)
    if len(res) != 1:
        raise NotInFamilyError(f"polynomial {p.to_str()} is not sector-pure (audit flag)")
    return next(iter(res))


def _lcm(a, b):
    return (a * b // a.gcd(b)).monic()


def left_idempotent(a):
    """j with a = e_j a for a homogeneous AlgElem (None if zero or mixed)."""
    m = a.ctx.m
    found = set()
    for (k, l), comps in a.terms.items():
        for i, c in enumerate(comps):
            if c:
                found.add((i + k - l) % m)
    return next(iter(found)) if len(found) == 1 else None


# ---------------------------------------------------------------------------
# Euclid in e C(x)[y]

def _normalize_right(f):
    """f . (lead coefficient)^-1, so the top y-coefficient becomes 1."""
    _, lead = f.top()
    return f.rmul_xrat(lead.inverse())


def right_gcd(elems):
    g = None
    for f in elems:
        if not f:
            continue
        f = _normalize_right(f)
        if g is None:
            g = f
            continue
        a, b = (g, f) if g.top()[0] >= f.top()[0] else (f, g)
        while b:
            _, r = a.right_divmod(b)
            a, b = b, (_normalize_right(r) if r else r)
        g = a
    return g


@dataclass(frozen=True)
class GradedLadder:
    """gr_y(M) = sum_k e_n (chain[k]) y^k; chain[k] = 1 from stab_index on."""

    n: int
    chain: tuple
    stab_index: int

    def p(self, k):
        return self.chain[min(k, len(self.chain) - 1)]

    def codimension(self):
        return sum(c.deg for c in self.chain)

    def staircase(self):
        """(a, k) with x^a y^k outside gr_y(M)."""
        return [(a, k) for k, c in enumerate(self.chain) for a in range(c.deg)]


class _Side:
    """Distinguished representative on one side (x-side of the given context)."""

    def __init__(self, ctx, j, polys):
        self.ctx = ctx
        m = ctx.m
        locs = [p.to_locx() for p in polys if p]
        if not locs:
            raise NotInFamilyError("the zero ideal is not in the family")
        g = right_gcd(locs)
        gi = g.right_idempotent()
        if gi is None:
            raise NotInFamilyError("generators are not Gamma-homogeneous")
        self.g = g
        hs = []
        for f in locs:
            q, r = f.right_divmod(g)
            if r:
                raise NotInFamilyError("right gcd does not divide a generator")
            hs.append(LocX(ctx, gi, q))
        d = Poly([ONE])
        for h in hs:
            for den in h.denominators():
                d = _lcm(d, den)
        self.d = d
        self.j2 = gi + _residue(d, m)
        p2 = [EPoly.from_locx(h.lmul_xpoly(d)) for h in hs]
        self.anchored = p2
        self.basis = groebner(p2)
        chain, real = ladder_from_basis(self.basis)
        if chain[0] is None:
            raise NotInFamilyError("ideal does not meet C[x] after clearing denominators")
        p = chain[-1]
        self.p = p
        self.n = (self.j2 - _residue(p, m)) % m
        q = []
        for c in chain:
            quo, rem = c.divmod(p)
            if rem:
                raise NotInFamilyError("ladder is not a divisibility chain")
            q.append(quo.monic())
        stab = next(k for k, c in enumerate(q) if c.deg == 0)
        self.ladder = GradedLadder(self.n, tuple(q[:stab + 1]), stab)
        self._real = real[:stab + 1]

    def element(self, k):
        """Member of M with gr_y = e_n q_k y^k (q_k = 1 beyond the stable index)."""
        stab = self.ladder.stab_index
        g, shift = self._real[min(k, stab)]
        f = g.rmul(0, shift + max(0, k - stab)).to_locx().lmul_xinv(self.p)
        _, lead = f.top()
        c = lead.num.c[-1] * inv(lead.den.c[-1])
        return f.scale(inv(c))


# ---------------------------------------------------------------------------

class FractionalIdeal:
    """Right B-submodule of a localization, given by generators e_n g."""

    def __init__(self, ctx, n, gens, label=None):
        self.ctx = ctx
        self.n = n % ctx.m
        self.gens = list(gens)
        self.label = label

    def __repr__(self):
        return f"FractionalIdeal(m={self.ctx.m}, n={self.n}, gens={len(self.gens)})"

    @cached_property
    def _poly(self):
        return _polynomial_form(self)

    @cached_property
    def analysis(self):
        j, gens = self._poly
        return IdealAnalysis(self.ctx, j, gens)

    def to_json(self):
        from .io import ideal_to_json
        return ideal_to_json(self)


def _polynomial_form(I):
    ctx, m = I.ctx, I.ctx.m
    kinds = {type(g) for g in I.gens}
    if kinds <= {AlgElem}:
        return I.n, [g.lmul_idem(I.n) for g in I.gens]
    ys = [g for g in I.gens if isinstance(g, LocY) and not g.inner.is_poly()]
    xs = [g for g in I.gens if isinstance(g, LocX) and not g.is_poly()]
    if ys and xs:
        raise NotInFamilyError("mixed x- and y-denominators are not supported")
    if xs or (not ys and any(isinstance(g, LocX) for g in I.gens)):
        c = Poly([ONE])
        for g in I.gens:
            if isinstance(g, LocX):
                for den in g.denominators():
                    c = _lcm(c, den)
        j = I.n + _residue(c, m)
        out = []
        for g in I.gens:
            if isinstance(g, AlgElem):
                g = LocX.from_algelem(g, I.n)
            elif isinstance(g, LocY):
                g = LocX.from_algelem(g.to_algelem(), I.n)
            out.append(g.lmul_xpoly(c).to_algelem())
        return j, out
    c = Poly([ONE])
    for g in I.gens:
        if isinstance(g, LocY):
            for den in g.inner.denominators():
                c = _lcm(c, den)
    j = I.n - _residue(c, m)
    out = []
    for g in I.gens:
        if isinstance(g, AlgElem):
            g = LocY.from_algelem(g, I.n)
        elif isinstance(g, LocX):
            g = LocY.from_algelem(g.to_algelem(), I.n)
        out.append(g.lmul_ypoly(c).to_algelem())
    return j, out


def polynomial_generators(I):
    """Polynomial generators of a right ideal isomorphic to I (each equal to e_j g)."""
    return list(I._poly[1])


class IdealAnalysis:
    """Both distinguished representatives, the transition and theta_1."""

    def __init__(self, ctx, j, gens):
        self.ctx = ctx
        self.j = j % ctx.m
        self.gens = gens
        ex = [EPoly.from_algelem(g, j) for g in gens]
        self.x = _Side(ctx, j, ex)
        mctx = mirror_ctx(ctx)
        ey = [EPoly.from_algelem(mirror_algelem(g), -j) for g in gens]
        self.y = _Side(mctx, -j, ey)
        if self.x.n != (-self.y.n) % ctx.m:
            raise NotInFamilyError("x- and y-representatives have different left idempotents")
        self.n = self.x.n
        self._kappa = {}
        self._mu = {}

    @property
    def ladder(self):
        return self.x.ladder

    @property
    def N(self):
        return self.x.ladder.codimension()

    # transition series --------------------------------------------------
    def _kappa_raw(self, order, slack):
        ctx = self.ctx
        X, Y = self.x, self.y
        fl = -order - slack
        k = LocY.make(ctx, self.n, {0: RatFunc(Poly([ONE]), Y.p)})
        k = k.rmul_ypoly(Y.d)
        k = LocY(ctx, k.inner.rdiv(Y.g, fl))
        k = k.rmul_loc(X.g, fl)
        k = k.rmul_xinv(X.d, fl)
        k = k.rmul_xpoly(X.p)
        return k

    def kappa_series(self, order):
        """Normalized kappa as LocY exact for x-powers >= -order."""
        if order in self._kappa:
            return self._kappa[order]
        slack = 2
        while True:
            k = self._kappa_raw(order, slack)
            if k.floor is None or k.floor <= -order:
                break
            slack += k.floor + order
            if slack > 64 + 4 * order:
                raise WindowError("kappa series did not reach the requested order")
        k = _normalize_unit(k, order)
        self._kappa[order] = k
        return k

    def _mu_raw(self, order, slack):
        ctx = self.ctx
        X, Y = self.x, self.y
        fl = -order - slack
        u = LocX(ctx, self.n, {0: RatFunc(Poly([ONE]), X.p)})
        u = u.rmul_xpoly(X.d)
        u = u.rdiv(X.g, fl)
        u = u.rmul_locy(LocY(ctx, Y.g), fl)
        u = u.rmul_yinv(Y.d, fl)
        u = u.rmul_ypoly(Y.p)
        return u

    def mu_series(self, order):
        if order in self._mu:
            return self._mu[order]
        slack = 2
        while True:
            u = self._mu_raw(order, slack)
            if u.floor is None or u.floor <= -order:
                break
            slack += u.floor + order
            if slack > 64 + 4 * order:
                raise WindowError("mu series did not reach the requested order")
        u = _normalize_unit_x(u, order)
        self._mu[order] = u
        return u

    def transition_lambda(self, bound=None):
        if bound is None:
            bound = 2 * self.N + 4
        kap = self.kappa_series(bound + 1)
        vals = {}
        for k in range(bound + 1):
            f = kap.parts.get(-k - 1)
            if f is None:
                continue
            exp = f.laurent_inf(-bound - 1)
            if any(e >= 0 for e in exp):
                raise NotInFamilyError("transition has a non-proper coefficient")
            for e, c in exp.items():
                l = -e - 1
                if l <= bound and c:
                    vals[(k, l)] = -c
        lam = LambdaTable(self.ctx, self.n, vals, bound, source="ideal")
        if lam.support_violations():
            raise NotInFamilyError("recovered moments violate the support condition")
        return lam

    # V_x = e_n B / rho_x(M_x) -------------------------------------------
    @cached_property
    def _std(self):
        stab = self.x.ladder.stab_index
        return [self.x.element(k) for k in range(stab + 1)]

    def _std_elem(self, k):
        stab = self.x.ladder.stab_index
        if k <= stab:
            return self._std[k]
        return self._std[stab].rmul_y(k - stab)

    def normal_form(self, b):
        """Coordinates of b (polynomial LocX with left idempotent n) modulo rho_x(M_x)."""
        lad = self.x.ladder
        coords = {}
        cur = b
        while cur.parts:
            K, c = cur.top()
            if not c.is_poly():
                raise ValueError("normal_form needs a polynomial element")
            cp = c.num
            qk = lad.p(K)
            t, rem = cp.divmod(qk)
            if t:
                sub = self._std_elem(K).rmul_xpoly(t).poly_part()
                cur = cur - sub
            if rem:
                for a, v in enumerate(rem.c):
                    if v:
                        coords[(a, K)] = v
            cur = LocX(cur.ctx, cur.j, {l: f for l, f in cur.parts.items() if l != K})
        return coords

    @cached_property
    def _staircase(self):
        g = self.n
        m = self.ctx.m
        stair = self.x.ladder.staircase()
        return sorted(stair, key=lambda ak: ((g - ak[0] + ak[1]) % m, ak[1], ak[0]))

    def theta1(self):
        """Quiver point realized on V_x."""
        ctx, n, m = self.ctx, self.n, self.ctx.m
        basis = self._staircase
        N = len(basis)
        dims = [0] * m
        for a, k in basis:
            dims[(n - a + k) % m] += 1
        if N == 0:
            return QuiverPoint(ctx, n, dims, Matrix.zeros(0, 0), Matrix.zeros(0, 0),
                               Matrix.zeros(0, 1), Matrix.zeros(1, 0))
        index = {ak: i for i, ak in enumerate(basis)}

        def col(coords):
            v = [ZERO] * N
            for ak, c in coords.items():
                v[index[ak]] = c
            return v

        xcols, ycols = [], []
        for a, k in basis:
            b = LocX(ctx, n, {k: Poly.monomial(a)})
            ycols.append(col(self.normal_form(b.rmul_y())))
            img = phi_apply(b.to_algelem(), self)
            img = img * ctx.x()
            back = phi_inverse(img, self)
            xcols.append(col(self.normal_form(LocX.from_algelem(back, n))))
        Xbar = Matrix([[xcols[c][r] for c in range(N)] for r in range(N)], N)
        Ybar = Matrix([[ycols[c][r] for c in range(N)] for r in range(N)], N)
        ibar = Matrix.column(col(self.normal_form(LocX.one(ctx, n))))
        T = Matrix([[ctx.t(n - basis[r][0] + basis[r][1]) if r == c else ZERO for c in range(N)]
                    for r in range(N)], N)
        D = Xbar @ Ybar - Ybar @ Xbar + T
        r0 = index.get((0, 0))
        if r0 is None or ibar != Matrix.column([ONE if i == r0 else ZERO for i in range(N)]):
            raise NotInFamilyError("e_n is not a cyclic basis vector of V_x")
        jbar = Matrix.row([D[r0, c] for c in range(N)])
        if D != ibar @ jbar:
            raise NotInFamilyError("moment defect is not of rank one through ibar")
        pt = QuiverPoint(ctx, n, dims, Xbar, Ybar, ibar, jbar)
        if not check_stability(pt):
            raise NotInFamilyError("reconstructed point is not stable")
        return pt


def _const_of(f):
    if f is None or not f.is_poly() or f.num.deg != 0:
        return None
    return f.num.c[0]


def _normalize_unit(k, order):
    """Scale a LocY transition so that its x^0 coefficient is 1; check shape."""
    for e in k.parts:
        if e > 0:
            raise NotInFamilyError("transition has positive x-powers")
    c = _const_of(k.parts.get(0))
    if not c:
        raise NotInFamilyError("transition is not a unit at x^0")
    return k.scale(inv(c)).truncate(-order)


def _normalize_unit_x(u, order):
    for e in u.parts:
        if e > 0:
            raise NotInFamilyError("inverse transition has positive y-powers")
    c = _const_of(u.parts.get(0))
    if not c:
        raise NotInFamilyError("inverse transition is not a unit at y^0")
    return u.scale(inv(c)).truncate(-order)


# ---------------------------------------------------------------------------
# rho projections and phi

_LOCX_OPS = {"rho_x": "poly", "rho_x_grave": "poly", "rho_y_acute": "nonneg"}
_LOCY_OPS = {"rho_y": "poly", "rho_y_grave": "poly", "rho_x_acute": "nonneg"}


def rho_projections(e, which):
    """which in {rho_x, rho_y, rho_x_grave, rho_x_acute, rho_y_grave, rho_y_acute}.

    grave: polynomial part of the left-hand (outer) rational coefficients;
    acute: drop the negative powers of the right-hand variable.
    """
    table = _LOCX_OPS if isinstance(e, LocX) else _LOCY_OPS if isinstance(e, LocY) else None
    if table is None or which not in table:
        raise WrongOrderingError(f"{which} does not apply to {type(e).__name__}")
    return e.poly_part() if table[which] == "poly" else e.keep_inner_nonneg()


def _degrees(b):
    dx = max((k for k, _ in b.terms), default=0)
    dy = max((l for _, l in b.terms), default=0)
    return dx, dy


def phi_apply(b, km):
    """phi(e_n b) = rho_y_grave rho_x_acute(e_n kappa b)."""
    dx, _ = _degrees(b)
    kap = km.kappa_series(dx + 1)
    prod = kap.rmul_algelem(b)
    return prod.keep_inner_nonneg().poly_part().to_algelem()


def phi_inverse(a, km):
    """phi^-1(a) = rho_x_grave rho_y_acute(e_n mu a)."""
    _, dy = _degrees(a)
    u = km.mu_series(dy + 1)
    prod = u.rmul_algelem(a)
    return prod.keep_inner_nonneg().poly_part().to_algelem()


# ---------------------------------------------------------------------------
# constructors

def _check_point(p):
    if validate_point(p) or not check_stability(p):
        raise StabilityError("the point must be valid and stable")
    if not is_generic(p.ctx):
        warnings.warn("tau is not generic; the correspondence may fail", GenericityWarning)


def build_ideal_My(p):
    """M_y = e_n s(y) B + e_n kappa p(x) B (generators stored in LocY form)."""
    _check_point(p)
    km = KappaMu(p, check=False)
    g1 = LocY.make(p.ctx, p.n, {0: km.s})
    ideal = FractionalIdeal(p.ctx, p.n, [g1, km.kappa_times_p()], label="M_y")
    ideal.kappa_mu = km
    return ideal


def build_ideal_Mx(p):
    """M_x = e_n p(x) B + e_n mu s(y) B (generators stored in LocX form)."""
    _check_point(p)
    km = KappaMu(p, check=False)
    g1 = LocX(p.ctx, p.n, {0: km.p})
    ideal = FractionalIdeal(p.ctx, p.n, [g1, km.mu_times_s()], label="M_x")
    ideal.kappa_mu = km
    return ideal


def unit_ideal(ctx, n):
    e = LocX.one(ctx, n).to_algelem()
    return FractionalIdeal(ctx, n, [e, e], label="unit")


def gr_y_ladder(I):
    return I.analysis.ladder


def standard_basis(I, window=None):
    """Members m_k of the distinguished M_x with gr_y(m_k) = e_n q_k y^k, k <= window."""
    an = I.analysis
    if window is None:
        window = an.ladder.stab_index
    return [an._std_elem(k) for k in range(window + 1)]


def transition_lambda(I, window=None):
    return I.analysis.transition_lambda(window)


def theta1(I):
    return I.analysis.theta1()


def isomorphic_ideals(I1, I2, window=None):
    a1, a2 = I1.analysis, I2.analysis
    if a1.ctx != a2.ctx or a1.n != a2.n or a1.ladder != a2.ladder:
        return False
    w = window if window is not None else 2 * a1.N + 4
    return a1.transition_lambda(w) == a2.transition_lambda(w)


def membership_residue(I, elem):
    """Normal form of c * elem modulo a standard basis of I's polynomial form.

    c clears I's denominators; the result is linear in elem and vanishes
    exactly on members.  None when c * elem is not polynomial (never a member).
    """
    j, gens = I._poly
    I.analysis  # runs the family checks
    basis = I.__dict__.get("_membership_basis")
    if basis is None:
        basis = groebner([EPoly.from_algelem(g, j) for g in gens])
        I.__dict__["_membership_basis"] = basis
    c, kind = _left_factor(I)
    if isinstance(elem, AlgElem):
        elem = LocY.from_algelem(elem, I.n) if kind == "y" else LocX.from_algelem(elem, I.n)
    if kind == "y":
        if isinstance(elem, LocX):
            elem = LocY.from_algelem(elem.to_algelem(), I.n)
        cand = elem.lmul_ypoly(c)
        if not cand.inner.is_poly():
            return None
    else:
        if isinstance(elem, LocY):
            if not elem.inner.is_poly():
                return None
            elem = LocX.from_algelem(elem.to_algelem(), I.n)
        cand = elem.lmul_xpoly(c)
        if not cand.is_poly():
            return None
    return reduce(EPoly.from_algelem(cand.to_algelem(), j), basis)


def member(I, elem):
    """Is e_n elem in I?  elem: LocX, LocY or AlgElem (with I's left idempotent)."""
    r = membership_residue(I, elem)
    return r is not None and not r


def _left_factor(I):
    """(c, kind) with polynomial_generators = c * gens."""
    if any(isinstance(g, LocY) and not g.inner.is_poly() for g in I.gens):
        c = Poly([ONE])
        for g in I.gens:
            if isinstance(g, LocY):
                for den in g.inner.denominators():
                    c = _lcm(c, den)
        return c, "y"
    c = Poly([ONE])
    for g in I.gens:
        if isinstance(g, LocX):
            for den in g.denominators():
                c = _lcm(c, den)
    return c, "x"
