"""Standard bases for right ideals of B inside e_j B.

Elements are e_j sum c_kl x^k y^l (``EPoly``).  The order is y-major lex on
(l, k); right multiplication by x^a y^b shifts leading monomials by (a, b)
and keeps the leading coefficient, so Buchberger's algorithm for right
ideals applies verbatim.  Generators are split into Gamma-homogeneous parts
first; homogeneous elements absorb the right e_i action.
"""
from ..scalars import ONE, ZERO, Poly, inv


class EPoly:
    __slots__ = ("ctx", "j", "terms")

    def __init__(self, ctx, j, terms):
        self.ctx = ctx
        self.j = j % ctx.m
        self.terms = {kl: c for kl, c in terms.items() if c}

    @classmethod
    def from_locx(cls, e):
        terms = {}
        for l, f in e.parts.items():
            if not f.is_poly() or l < 0:
                raise ValueError("not a polynomial element")
            for k, c in enumerate(f.num.c):
                if c:
                    terms[(k, l)] = c
        return cls(e.ctx, e.j, terms)

    @classmethod
    def from_algelem(cls, a, j):
        m = a.ctx.m
        terms = {}
        for (k, l), comps in a.terms.items():
            c = comps[(j - k + l) % m]
            if c:
                terms[(k, l)] = c
        return cls(a.ctx, j, terms)

    def to_locx(self):
        from .loc import LocX
        parts = {}
        for (k, l), c in self.terms.items():
            parts.setdefault(l, {})[k] = c
        return LocX(self.ctx, self.j, {l: Poly([d.get(k, ZERO) for k in range(max(d) + 1)])
                                       for l, d in parts.items()})

    def to_algelem(self):
        from ..crossed_algebra import AlgElem
        m = self.ctx.m
        out = {}
        for (k, l), c in self.terms.items():
            i = (self.j - k + l) % m
            out[(k, l)] = tuple(c if t == i else ZERO for t in range(m))
        return AlgElem(self.ctx, out)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, EPoly) and self.j == other.j and self.terms == other.terms

    def __hash__(self):
        return hash((self.j, frozenset(self.terms.items())))

    def lm(self):
        return max(self.terms, key=lambda kl: (kl[1], kl[0]))

    def lc(self):
        return self.terms[self.lm()]

    def scale(self, c):
        return EPoly(self.ctx, self.j, {kl: v * c for kl, v in self.terms.items()})

    def __sub__(self, other):
        out = dict(self.terms)
        for kl, c in other.terms.items():
            out[kl] = out.get(kl, ZERO) - c
        return EPoly(self.ctx, self.j, out)

    def __add__(self, other):
        out = dict(self.terms)
        for kl, c in other.terms.items():
            out[kl] = out.get(kl, ZERO) + c
        return EPoly(self.ctx, self.j, out)

    def rmul_x(self):
        ctx = self.ctx
        out = {}
        for (k, l), c in self.terms.items():
            out[(k + 1, l)] = out.get((k + 1, l), ZERO) + c
            if l:
                s = ctx.tau_sum(self.j - k, l)
                if s:
                    out[(k, l - 1)] = out.get((k, l - 1), ZERO) - s * c
        return EPoly(ctx, self.j, out)

    def rmul(self, a, b):
        cur = self
        for _ in range(a):
            cur = cur.rmul_x()
        if b:
            cur = EPoly(cur.ctx, cur.j, {(k, l + b): c for (k, l), c in cur.terms.items()})
        return cur

    def homogeneous_parts(self):
        m = self.ctx.m
        parts = {}
        for (k, l), c in self.terms.items():
            parts.setdefault((self.j - k + l) % m, {})[(k, l)] = c
        return [EPoly(self.ctx, self.j, t) for _, t in sorted(parts.items())]

    def top_slice(self):
        """(l, coefficient polynomial of y^l) for the top y-degree l."""
        k0, l0 = self.lm()
        return l0, Poly([self.terms.get((k, l0), ZERO) for k in range(k0 + 1)])

    def __repr__(self):
        body = " + ".join(f"{c}*x^{k}y^{l}" for (k, l), c in sorted(self.terms.items(), key=lambda t: (-t[0][1], -t[0][0])))
        return f"EPoly(e{self.j}[{body or '0'}])"


def _divides(a, b):
    return a[0] <= b[0] and a[1] <= b[1]


def reduce(f, basis, full=True):
    """Normal form of f modulo a standard basis (list of monic EPolys)."""
    rem = {}
    cur = f
    while cur.terms:
        lm = cur.lm()
        for g in basis:
            glm = g.lm()
            if _divides(glm, lm):
                cur = cur - g.rmul(lm[0] - glm[0], lm[1] - glm[1]).scale(cur.terms[lm])
                break
        else:
            if not full:
                break
            rem[lm] = cur.terms[lm]
            cur = EPoly(cur.ctx, cur.j, {kl: c for kl, c in cur.terms.items() if kl != lm})
    out = dict(cur.terms)
    out.update(rem)
    return EPoly(f.ctx, f.j, out)


def _monic(f):
    return f.scale(inv(f.lc()))


def groebner(gens):
    """Reduced standard basis of the right ideal generated by gens (EPolys)."""
    basis = []
    for g in gens:
        for h in g.homogeneous_parts():
            h = reduce(h, basis)
            if h:
                basis.append(_monic(h))
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    while pairs:
        i, j = pairs.pop(0)
        f, g = basis[i], basis[j]
        a, b = f.lm(), g.lm()
        lcm = (max(a[0], b[0]), max(a[1], b[1]))
        s = f.rmul(lcm[0] - a[0], lcm[1] - a[1]) - g.rmul(lcm[0] - b[0], lcm[1] - b[1])
        s = reduce(s, basis)
        if s:
            basis.append(_monic(s))
            n = len(basis) - 1
            pairs.extend((t, n) for t in range(n))
    # minimize and interreduce
    basis.sort(key=lambda g: (g.lm()[1], g.lm()[0]))
    minimal = []
    for g in basis:
        if not any(_divides(h.lm(), g.lm()) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        lm = g.lm()
        tail = EPoly(g.ctx, g.j, {kl: c for kl, c in g.terms.items() if kl != lm})
        tail = reduce(tail, others)
        terms = dict(tail.terms)
        terms[lm] = ONE
        out.append(EPoly(g.ctx, g.j, terms))
    return out


def ladder_from_basis(basis):
    """Monic leading-coefficient ideals p_k of gr_y, k = 0..stab, and the
    basis element realizing each (as (element, y-shift))."""
    if not basis:
        raise ValueError("empty basis")
    top = max(g.lm()[1] for g in basis)
    chain, realizers = [], []
    for k in range(top + 1):
        cands = [g for g in basis if g.lm()[1] <= k]
        if not cands:
            chain.append(None)
            realizers.append(None)
            continue
        g = min(cands, key=lambda h: (h.lm()[0], -h.lm()[1]))
        l, c = g.top_slice()
        chain.append(c.monic())
        realizers.append((g, k - l))
    return chain, realizers
