"""Elements of the Ore localizations e_j B[S1^-1] and e_j B[S2^-1].

``LocX`` stores e_j sum_l f_l(x) y^l with f_l rational in x.  Negative l is
allowed; such elements are truncated series and carry a ``floor``: the
coefficients with l >= floor are exact, nothing below is stored.

The commutation rule used for right multiplication by x is

    e_j x^a y^l . x = e_j x^{a+1} y^l - S(j - a, l) e_j x^a y^{l-1},

with S(c, l) = tau_c + ... + tau_{c+l-1} (l > 0), -(tau_{c-1} + ... + tau_{c+l})
(l < 0).  Since S depends on a only through a mod m, rational coefficients
are split into x-sectors first.

``LocY`` is the mirror image: the swap x <-> y, e_i <-> e_{-i},
tau_i -> -tau_{-i} is an algebra isomorphism, so a LocY element is a LocX
element over the mirrored context.
"""
from functools import lru_cache

from ..crossed_algebra import AlgebraContext, AlgElem
from ..errors import WindowError
from ..scalars import ONE, ZERO, Poly, RatFunc, inv, sector_project

_NEG_INF = float("-inf")


@lru_cache(maxsize=None)
def mirror_ctx(ctx):
    m = ctx.m
    return AlgebraContext(m, tuple(-ctx.tau[(-i) % m] for i in range(m)), ctx.genericity_bound)


@lru_cache(maxsize=None)
def _uniform(ctx):
    return all(t == ctx.tau[0] for t in ctx.tau)


def _zero_rf():
    return RatFunc(Poly(), None, "x")


def _rf(p):
    if isinstance(p, RatFunc):
        return p
    return RatFunc.poly(p, "x")


class LocX:
    __slots__ = ("ctx", "j", "parts", "floor")

    def __init__(self, ctx, j, parts=None, floor=None):
        self.ctx = ctx
        self.j = j % ctx.m
        fl = _NEG_INF if floor is None else floor
        self.parts = {l: _rf(f) for l, f in (parts or {}).items() if f and l >= fl}
        self.floor = floor

    # construction -------------------------------------------------------
    @classmethod
    def one(cls, ctx, j):
        return cls(ctx, j, {0: RatFunc.poly(Poly([ONE]))})

    @classmethod
    def from_algelem(cls, a, j):
        """e_j * a, a an AlgElem (x-left PBW form)."""
        parts = {}
        m = a.ctx.m
        for (k, l), c in a.terms.items():
            coeff = c[(j - k + l) % m]
            if coeff:
                parts.setdefault(l, {})[k] = coeff
        return cls(a.ctx, j, {l: Poly([d.get(k, ZERO) for k in range(max(d) + 1)]) for l, d in parts.items()})

    def to_algelem(self):
        if any(not f.is_poly() for f in self.parts.values()) or any(l < 0 for l in self.parts):
            raise ValueError("element is not polynomial")
        m = self.ctx.m
        terms = {}
        for l, f in self.parts.items():
            for k, c in enumerate(f.num.c):
                if c:
                    i = (self.j - k + l) % m
                    terms[(k, l)] = tuple(c if t == i else ZERO for t in range(m))
        return AlgElem(self.ctx, terms)

    def _new(self, parts, floor="keep", j=None):
        return LocX(self.ctx, self.j if j is None else j, parts, self.floor if floor == "keep" else floor)

    # basic structure ----------------------------------------------------
    def __bool__(self):
        return bool(self.parts)

    def is_zero(self):
        return not self.parts

    def top(self):
        if not self.parts:
            return None, None
        l = max(self.parts)
        return l, self.parts[l]

    def bottom(self):
        return min(self.parts) if self.parts else None

    def coeff(self, l):
        return self.parts.get(l, _zero_rf())

    def is_poly(self):
        return all(f.is_poly() for f in self.parts.values()) and all(l >= 0 for l in self.parts)

    def __eq__(self, other):
        if not isinstance(other, LocX):
            return NotImplemented
        return self.ctx == other.ctx and self.j == other.j and self.parts == other.parts

    def __hash__(self):
        return hash((self.j, frozenset(self.parts.items())))

    def _merge_floor(self, other):
        a = _NEG_INF if self.floor is None else self.floor
        b = _NEG_INF if other.floor is None else other.floor
        f = max(a, b)
        return None if f == _NEG_INF else f

    def __add__(self, other):
        if other.ctx != self.ctx or other.j != self.j:
            raise ValueError("adding localized elements with different left idempotents")
        out = dict(self.parts)
        for l, f in other.parts.items():
            out[l] = out[l] + f if l in out else f
        return LocX(self.ctx, self.j, out, self._merge_floor(other))

    def __neg__(self):
        return self._new({l: -f for l, f in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not c:
            return self._new({})
        return self._new({l: f * c for l, f in self.parts.items()})

    def truncate(self, floor):
        fl = floor if self.floor is None else max(floor, self.floor)
        return LocX(self.ctx, self.j, {l: f for l, f in self.parts.items() if l >= fl}, fl)

    def right_idempotent(self):
        """i with self = self e_i, or None if not homogeneous."""
        m = self.ctx.m
        found = set()
        for l, f in self.parts.items():
            res = f.num.residues(m)
            s = f.den.residues(m)
            if len(s) != 1:
                return None
            s = next(iter(s))
            for r in res:
                found.add((self.j - (r - s) + l) % m)
        if len(found) > 1:
            return None
        return next(iter(found)) if found else None

    # right multiplications ----------------------------------------------
    def _correction(self, f, l):
        """sum_r S(j - r, l) * sector_r(f)."""
        ctx = self.ctx
        if _uniform(ctx) or ctx.m == 1:
            s = ctx.tau_sum(0, l)
            return f * s if s else None
        acc = None
        m = ctx.m
        for r in range(m):
            s = ctx.tau_sum(self.j - r, l)
            if s:
                part = sector_project(f, r, m)
                if part:
                    acc = part * s if acc is None else acc + part * s
        return acc

    def rmul_x(self):
        xp = RatFunc.poly(Poly([ZERO, ONE]))
        out = {}
        for l, f in self.parts.items():
            g = f * xp
            out[l] = out[l] + g if l in out else g
            if l:
                c = self._correction(f, l)
                if c is not None:
                    out[l - 1] = out[l - 1] - c if (l - 1) in out else -c
        return self._new(out)

    def rmul_xpoly(self, p):
        if not isinstance(p, Poly):
            p = Poly([p])
        if not p:
            return self._new({})
        acc = self.scale(p.c[-1])
        for c in reversed(p.c[:-1]):
            acc = acc.rmul_x()
            if c:
                acc = acc + self.scale(c)
        return acc

    def _lower_limit(self, floor):
        if self.floor is not None:
            return self.floor if floor is None else max(floor, self.floor)
        if floor is not None:
            return floor
        b = self.bottom()
        if b is None or b >= 0:
            return 0
        raise WindowError("series division needs an explicit floor")

    def rmul_xinv(self, h, floor=None):
        """g with g . h(x) = self (h a nonzero polynomial)."""
        if not isinstance(h, Poly):
            h = Poly([h])
        if h.deg == 0:
            return self.scale(inv(h.c[0]))
        lower = self._lower_limit(floor)
        hr = RatFunc.poly(h)
        result = {}
        rem = self.truncate(lower) if self.floor is not None or floor is not None else self
        while rem.parts:
            l, f = rem.top()
            if l < lower:
                break
            g = f / hr
            result[l] = g
            single = LocX(self.ctx, self.j, {l: g}, lower if rem.floor is not None or lower < 0 else None)
            rem = (rem - single.rmul_xpoly(h))
            rem.parts.pop(l, None)
            if rem.floor is None and lower < 0:
                rem = rem.truncate(lower)
        fl = None if (self.floor is None and floor is None and lower >= 0) else lower
        return LocX(self.ctx, self.j, result, fl)

    def rmul_xrat(self, f, floor=None):
        f = _rf(f)
        out = self.rmul_xpoly(f.num)
        if f.den.deg > 0:
            out = out.rmul_xinv(f.den, floor)
        return out

    def rmul_y(self, k=1):
        fl = None if self.floor is None else self.floor + k
        return LocX(self.ctx, self.j, {l + k: f for l, f in self.parts.items()}, fl)

    def rmul_ypoly(self, q):
        if not isinstance(q, Poly):
            q = Poly([q])
        acc = self._new({}, floor=None)
        for i, c in enumerate(q.c):
            if c:
                acc = acc + self.rmul_y(i).scale(c)
        if self.floor is not None:
            acc = acc.truncate(self.floor + q.deg)
        return acc

    def rmul_yinv(self, q, floor):
        """g with g . q(y) = self, as a series down to `floor`."""
        if not isinstance(q, Poly):
            q = Poly([q])
        d = q.deg
        lead_inv = inv(q.c[-1])
        lower = floor if self.floor is None else max(floor, self.floor - d)
        if not self.parts:
            return LocX(self.ctx, self.j, {}, lower)
        top = max(self.parts) - d
        g = {}
        for l in range(top, lower - 1, -1):
            acc = self.coeff(l + d)
            for i in range(d):
                gi = g.get(l + d - i)
                if gi is not None and q.c[i]:
                    acc = acc - gi * q.c[i]
            if acc:
                g[l] = acc * lead_inv
        return LocX(self.ctx, self.j, g, lower)

    def rmul_yrat(self, f, floor):
        """Right multiplication by a rational function of y (var tag ignored)."""
        out = self.rmul_ypoly(f.num)
        if f.den.deg > 0:
            out = out.rmul_yinv(f.den, floor)
        return out

    def rmul_group(self, comps):
        m = self.ctx.m
        if all(c == comps[0] for c in comps):
            return self.scale(comps[0])
        out = {}
        for l, f in self.parts.items():
            acc = None
            for r in range(m):
                c = comps[(self.j - r + l) % m]
                if c:
                    part = sector_project(f, r, m)
                    if part:
                        acc = part * c if acc is None else acc + part * c
            if acc is not None and acc:
                out[l] = acc
        return self._new(out)

    def rmul_e(self, i):
        m = self.ctx.m
        return self.rmul_group(tuple(ONE if t == i % m else ZERO for t in range(m)))

    def rmul_algelem(self, a):
        out = self._new({}, floor=self.floor)
        cur = self
        by_k = {}
        for (k, l), c in a.terms.items():
            by_k.setdefault(k, []).append((l, c))
        for k in range(max(by_k, default=-1) + 1):
            if k:
                cur = cur.rmul_x()
            for l, c in by_k.get(k, ()):
                out = out + cur.rmul_y(l).rmul_group(c)
        return out

    def rmul_monomial(self, k, l):
        cur = self
        for _ in range(k):
            cur = cur.rmul_x()
        return cur.rmul_y(l)

    def rmul_loc(self, g, floor=None):
        """self * g, g a LocX element (its own left idempotent is ignored)."""
        out = None
        for l, f in sorted(g.parts.items()):
            term = self.rmul_xrat(f, floor).rmul_y(l)
            out = term if out is None else out + term
        if out is None:
            return self._new({})
        if floor is not None:
            out = out.truncate(floor)
        return out

    def rmul_locy(self, g, floor):
        """self * g, g a LocY element e sum_k g_k(y) x^k."""
        out = None
        for k, f in sorted(g.inner.parts.items()):
            term = self.rmul_yrat(f, floor)
            term = term.rmul_xpoly(Poly.monomial(k)) if k >= 0 else term.rmul_xinv(Poly.monomial(-k), floor)
            out = term if out is None else out + term
        if out is None:
            return self._new({})
        return out.truncate(floor)

    def rdiv(self, g, floor=None):
        """h with h . g = self, where g is polynomial in y (finite LocX)."""
        L, lead = g.top()
        if L is None:
            raise ZeroDivisionError("division by zero element")
        lower = self._lower_limit(floor)
        qlow = lower - L
        result = LocX(self.ctx, self.j, {}, None if (self.floor is None and floor is None and lower >= 0) else qlow)
        rem = self
        while rem.parts:
            l, f = rem.top()
            if l < lower:
                break
            t = l - L
            coef = f / lead
            piece = LocX(self.ctx, self.j, {t: coef}, None)
            result = result + piece if result.floor is None else (result + piece.truncate(qlow))
            prod = piece.rmul_loc(g, None if t >= 0 else lower)
            rem = rem - prod
            rem.parts.pop(l, None)
            if lower < 0 or rem.floor is not None:
                rem = rem.truncate(lower)
        return result

    def right_divmod(self, g):
        """(q, r) with self = g*q + r in e C(x)[y], deg_y r < deg_y g (finite, l >= 0)."""
        L, lead = g.top()
        q_terms = {}
        rem = self
        while rem.parts:
            l, f = rem.top()
            if l < L:
                break
            t = l - L
            coef = f / lead
            q_terms[t] = coef
            piece = g.rmul_xrat(coef).rmul_y(t)
            rem = rem - piece
            rem.parts.pop(l, None)
        return q_terms, rem

    def left_quotient(self, g):
        """h with g . h = self exactly (raises if g does not divide on the left)."""
        q, r = self.right_divmod(g)
        if r.parts:
            raise ValueError("left division is not exact")
        return LocX(self.ctx, g.right_idempotent() or 0, q)

    # left multiplication by sector-pure polynomials in x ---------------
    def lmul_xpoly(self, p):
        s = _pure_residue(p, self.ctx.m)
        pr = RatFunc.poly(p)
        return LocX(self.ctx, self.j + s, {l: pr * f for l, f in self.parts.items()}, self.floor)

    def lmul_xinv(self, p):
        s = _pure_residue(p, self.ctx.m)
        pr = RatFunc(Poly([ONE]), p)
        return LocX(self.ctx, self.j - s, {l: pr * f for l, f in self.parts.items()}, self.floor)

    # projections --------------------------------------------------------
    def poly_part(self):
        """rho_x: polynomial part of each x-coefficient."""
        out = {}
        for l, f in self.parts.items():
            q, _ = f.poly_part()
            if q:
                out[l] = RatFunc.poly(q)
        return self._new(out)

    def keep_inner_nonneg(self):
        """Drop the y^l terms with l < 0."""
        return LocX(self.ctx, self.j, {l: f for l, f in self.parts.items() if l >= 0},
                    None if self.floor is None or self.floor <= 0 else self.floor)

    def denominators(self):
        return [f.den for f in self.parts.values() if f.den.deg > 0]

    def __repr__(self):
        body = " + ".join(f"({f.to_str()})*y^{l}" for l, f in sorted(self.parts.items(), reverse=True))
        fl = "" if self.floor is None else f" + O(y^{self.floor - 1})"
        return f"LocX(e{self.j}[{body or '0'}]{fl})"


def _pure_residue(p, m):
    res = p.residues(m)
    if len(res) != 1:
        raise ValueError("polynomial is not sector-pure")
    return next(iter(res))


class LocY:
    """e_j sum_k g_k(y) x^k, realized as a LocX over the mirrored context."""

    __slots__ = ("ctx", "inner")

    def __init__(self, ctx, inner):
        self.ctx = ctx
        self.inner = inner

    @classmethod
    def make(cls, ctx, j, parts=None, floor=None):
        return cls(ctx, LocX(mirror_ctx(ctx), -j, parts, floor))

    @classmethod
    def one(cls, ctx, j):
        return cls.make(ctx, j, {0: RatFunc.poly(Poly([ONE]))})

    @property
    def j(self):
        return (-self.inner.j) % self.ctx.m

    @property
    def parts(self):
        return self.inner.parts

    @property
    def floor(self):
        return self.inner.floor

    def _w(self, inner):
        return LocY(self.ctx, inner)

    def __add__(self, other):
        return self._w(self.inner + other.inner)

    def __sub__(self, other):
        return self._w(self.inner - other.inner)

    def __neg__(self):
        return self._w(-self.inner)

    def __eq__(self, other):
        return isinstance(other, LocY) and self.inner == other.inner

    def __hash__(self):
        return hash(self.inner)

    def __bool__(self):
        return bool(self.inner)

    def scale(self, c):
        return self._w(self.inner.scale(c))

    def truncate(self, floor):
        return self._w(self.inner.truncate(floor))

    def rmul_y(self):
        return self._w(self.inner.rmul_x())

    def rmul_ypoly(self, p):
        return self._w(self.inner.rmul_xpoly(p))

    def rmul_yinv(self, p, floor=None):
        return self._w(self.inner.rmul_xinv(p, floor))

    def rmul_yrat(self, f, floor=None):
        return self._w(self.inner.rmul_xrat(f, floor))

    def rmul_x(self, k=1):
        return self._w(self.inner.rmul_y(k))

    def rmul_xpoly(self, q):
        return self._w(self.inner.rmul_ypoly(q))

    def rmul_xinv(self, q, floor):
        return self._w(self.inner.rmul_yinv(q, floor))

    def rmul_xrat(self, f, floor):
        return self._w(self.inner.rmul_yrat(f, floor))

    def rmul_group(self, comps):
        m = self.ctx.m
        return self._w(self.inner.rmul_group(tuple(comps[(-i) % m] for i in range(m))))

    def rmul_e(self, i):
        return self._w(self.inner.rmul_e(-i))

    def rmul_algelem(self, a):
        return self._w(self.inner.rmul_algelem(mirror_algelem(a)))

    def rmul_loc(self, g, floor):
        """self * g, g a LocX element (x-left form)."""
        return self._w(self.inner.rmul_locy(LocY(self.inner.ctx, g), floor))

    def rmul_locy(self, g, floor=None):
        """self * g, g a LocY element."""
        return self._w(self.inner.rmul_loc(g.inner, floor))

    def poly_part(self):
        return self._w(self.inner.poly_part())

    def keep_inner_nonneg(self):
        return self._w(self.inner.keep_inner_nonneg())

    def lmul_ypoly(self, p):
        return self._w(self.inner.lmul_xpoly(p))

    def lmul_yinv(self, p):
        return self._w(self.inner.lmul_xinv(p))

    def to_algelem(self):
        return mirror_algelem(self.inner.to_algelem())

    @classmethod
    def from_algelem(cls, a, j):
        return cls(a.ctx, LocX.from_algelem(mirror_algelem(a), -j))

    def right_idempotent(self):
        r = self.inner.right_idempotent()
        return None if r is None else (-r) % self.ctx.m

    def __repr__(self):
        body = " + ".join(f"({f.to_str().replace('x', 'y')})*x^{k}" for k, f in sorted(self.inner.parts.items(), reverse=True))
        fl = "" if self.floor is None else f" + O(x^{self.floor - 1})"
        return f"LocY(e{self.j}[{body or '0'}]{fl})"


def mirror_algelem(a):
    """Image of a under x <-> y, e_i <-> e_{-i}, in PBW form over the mirror context."""
    ctx2 = mirror_ctx(a.ctx)
    m = a.ctx.m
    out = ctx2.zero()
    for (k, l), c in a.terms.items():
        # x^k y^l c  ->  y'^k x'^l c'
        t = _mirror_monomial(ctx2, k, l)
        out = out + t.rmul_group(tuple(c[(-i) % m] for i in range(m)))
    return out


@lru_cache(maxsize=4096)
def _mirror_monomial(ctx2, k, l):
    return ctx2.y() ** k * ctx2.x() ** l
