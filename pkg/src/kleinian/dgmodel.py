"""The two-term DG-model L0 -> L1 attached to a quiver point.

L0 has basis i_n.x^k y^l, written (k, l).  Right multiplication by x is
reduced with the rule

    (k, l).x = ((k, l-1).x).y - tau_c (k, l-1) + lambda_{k,l-1} (0, 0),

c = n + l - 1 - k, which encodes i_n.a(yx) = i_n.a(xy - tau) + lambda(a) i_n.
The normative nu-action is v.nu = i(jbar(v)).
"""
import json
import warnings

from .crossed_algebra import AlgebraContext, is_generic, tau_from_json
from .errors import BoundError, GenericityWarning, ParseError, StabilityError
from .quiver import QuiverPoint, check_stability, krylov_span, validate_point, make_point
from .scalars import Matrix, ONE, ZERO, scalar_from_json, scalar_to_json


class LambdaTable:
    """Moments lambda_kl = jbar Ybar^l Xbar^k ibar for 0 <= k, l <= bound."""

    def __init__(self, ctx, n, values, bound, source="solved"):
        self.ctx, self.n, self.bound, self.source = ctx, n % ctx.m, bound, source
        self.values = {kl: v for kl, v in values.items() if v}
        self._xcache = {}

    def __call__(self, k, l):
        if k > self.bound or l > self.bound or k < 0 or l < 0:
            raise BoundError(f"lambda_({k},{l}) outside bound {self.bound}")
        return self.values.get((k, l), ZERO)

    def __eq__(self, other):
        if not isinstance(other, LambdaTable):
            return NotImplemented
        return self.ctx == other.ctx and self.n == other.n and self.values == other.values

    def __hash__(self):
        return hash((self.n, frozenset(self.values.items())))

    def agrees(self, other, window=None):
        """Entrywise equality on the common window."""
        w = min(self.bound, other.bound) if window is None else window
        return all(self(k, l) == other(k, l) for k in range(w + 1) for l in range(w + 1))

    def support_violations(self):
        m = self.ctx.m
        return [kl for kl, v in self.values.items() if v and (kl[0] - kl[1]) % m]

    def restrict(self, bound):
        return LambdaTable(self.ctx, self.n, {kl: v for kl, v in self.values.items()
                                              if kl[0] <= bound and kl[1] <= bound}, bound, self.source)

    def to_json(self):
        vals = [[k, l, scalar_to_json(v)] for (k, l), v in sorted(self.values.items())]
        return {"m": self.ctx.m, "n": self.n, "bound": self.bound,
                "tau": [scalar_to_json(t) for t in self.ctx.tau], "values": vals}

    @classmethod
    def from_json(cls, obj):
        try:
            if isinstance(obj, str):
                obj = json.loads(obj)
            m = int(obj["m"])
            tau = tau_from_json(obj["tau"], m) if "tau" in obj else (ONE,) * m
            ctx = AlgebraContext(m, tau)
            vals = {(int(k), int(l)): scalar_from_json(v, m) for k, l, v in obj["values"]}
            return cls(ctx, int(obj["n"]), vals, int(obj["bound"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed lambda table: {exc}") from exc

    def __repr__(self):
        return f"LambdaTable(n={self.n}, bound={self.bound}, nonzero={len(self.values)})"


def default_bound(p):
    return 2 * p.N + 4


def build_lambda(p, bound=None, check=True):
    if check and (validate_point(p) or not check_stability(p)):
        raise StabilityError("build_lambda needs a valid stable point")
    if bound is None:
        bound = default_bound(p)
    cols = [p.ibar]
    for _ in range(bound):
        cols.append(p.Xbar @ cols[-1])
    rows = [p.jbar]
    for _ in range(bound):
        rows.append(rows[-1] @ p.Ybar)
    m = p.m
    vals = {}
    for k in range(bound + 1):
        for l in range(bound + 1):
            if (k - l) % m == 0:
                v = (rows[l] @ cols[k])[0, 0] if p.N else ZERO
                if v:
                    vals[(k, l)] = v
    return LambdaTable(p.ctx, p.n, vals, bound, source="point")


# ---------------------------------------------------------------------------
# L0

class L0Element:
    """Finite combination of basis vectors (k, l) = i_n.x^k y^l."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {kl: c for kl, c in (coeffs or {}).items() if c}

    @classmethod
    def basis(cls, k, l, c=ONE):
        return cls({(k, l): c})

    def __add__(self, other):
        out = dict(self.coeffs)
        for kl, c in other.coeffs.items():
            out[kl] = out.get(kl, ZERO) + c
        return L0Element(out)

    def __neg__(self):
        return L0Element({kl: -c for kl, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return L0Element({kl: c * s for kl, c in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, L0Element) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def degree(self):
        return max((k + l for k, l in self.coeffs), default=-1)

    def __repr__(self):
        return "L0(" + " + ".join(f"{c}*({k},{l})" for (k, l), c in sorted(self.coeffs.items())) + ")"


def _basis_x(k, l, lam):
    cache = lam._xcache
    key = (k, l)
    if key in cache:
        return cache[key]
    if l == 0:
        out = L0Element.basis(k + 1, 0)
    else:
        prev = _basis_x(k, l - 1, lam)
        shifted = {(a, b + 1): c for (a, b), c in prev.coeffs.items()}
        c = lam.ctx.t(lam.n + l - 1 - k)
        shifted[(k, l - 1)] = shifted.get((k, l - 1), ZERO) - c
        corr = lam(k, l - 1)
        if corr:
            shifted[(0, 0)] = shifted.get((0, 0), ZERO) + corr
        out = L0Element(shifted)
    cache[key] = out
    return out


def l0_act(v, gen, lam):
    """Right action of x, y or ('e', i) on L0."""
    if gen == "y":
        return L0Element({(k, l + 1): c for (k, l), c in v.coeffs.items()})
    if gen == "x":
        out = {}
        for (k, l), c in v.coeffs.items():
            for kl, d in _basis_x(k, l, lam).coeffs.items():
                out[kl] = out.get(kl, ZERO) + c * d
        return L0Element(out)
    if isinstance(gen, tuple) and gen[0] == "e":
        m = lam.ctx.m
        i = gen[1] % m
        return L0Element({(k, l): c for (k, l), c in v.coeffs.items() if (lam.n + l - k) % m == i})
    raise ValueError(f"unknown generator {gen!r}")


def l0_act_monomial(v, k, l, lam):
    """v . x^k y^l."""
    for _ in range(k):
        v = l0_act(v, "x", lam)
    for _ in range(l):
        v = l0_act(v, "y", lam)
    return v


def lambda_functional(v, lam):
    """Lambda(v) = sum c_kl lambda_kl, i.e. jbar(d_L v)."""
    acc = ZERO
    for (k, l), c in v.coeffs.items():
        acc = acc + c * lam(k, l)
    return acc


def grade(k, l, n, m):
    return (n - k + l) % m


# ---------------------------------------------------------------------------
# the model

class DGModel:
    def __init__(self, point, lam=None, check=True):
        self.point = point
        self.lam = lam if lam is not None else build_lambda(point, check=check)
        self._powers = {}

    @property
    def ctx(self):
        return self.point.ctx

    def image(self, k, l):
        key = (k, l)
        if key not in self._powers:
            p = self.point
            if (k, l) == (0, 0):
                v = p.ibar
            elif l == 0:
                v = p.Xbar @ self.image(k - 1, 0)
            else:
                v = p.Ybar @ self.image(k, l - 1)
            self._powers[key] = v
        return self._powers[key]

    def dL(self, v):
        return dL_apply(v, self.point, self)


def dL_apply(v, p, model=None):
    """d_L(k, l) = Ybar^l Xbar^k ibar, as a column Matrix."""
    out = Matrix.zeros(p.N, 1)
    for (k, l), c in v.coeffs.items():
        if model is not None:
            img = model.image(k, l)
        else:
            img = p.ibar
            for _ in range(k):
                img = p.Xbar @ img
            for _ in range(l):
                img = p.Ybar @ img
        out = out + img.scale(c)
    return out


def nu_apply(u, model):
    """u.nu = i(jbar(u)) = jbar(u) (0, 0)."""
    if model.point.N == 0:
        return L0Element()
    val = (model.point.jbar @ u)[0, 0]
    return L0Element.basis(0, 0, val)


def check_axioms(model, window=6):
    """List of violated axioms and identities on the basis window k, l <= window."""
    p, lam = model.point, model.lam
    report = []
    if not is_generic(p.ctx):
        warnings.warn("tau is not generic; projectivity of H0 is not guaranteed", GenericityWarning)
    if p.N and krylov_span(p).nrows != p.N:
        report.append("cyclicity: ibar does not generate L1 under Xbar, Ybar")
    w = min(window, max(0, (lam.bound - 1) // 2))
    for k in range(w + 1):
        for l in range(w + 1):
            v = L0Element.basis(k, l)
            dv = model.dL(v)
            vx, vy = l0_act(v, "x", lam), l0_act(v, "y", lam)
            if model.dL(vx) != p.Xbar @ dv:
                report.append(f"intertwining dL(v.x) = Xbar dL(v) fails at ({k},{l})")
            if model.dL(vy) != p.Ybar @ dv:
                report.append(f"intertwining dL(v.y) = Ybar dL(v) fails at ({k},{l})")
            for i in range(p.m):
                if model.dL(l0_act(v, ("e", i), lam)) != p.projector(i) @ dv:
                    report.append(f"grading dL(v.e_{i}) fails at ({k},{l})")
            lhs = l0_act(vx, "y", lam) - l0_act(vy, "x", lam)
            c = p.ctx.t(grade(k, l, p.n, p.m))
            jv = (p.jbar @ dv)[0, 0] if p.N else ZERO
            rhs = v.scale(c) - L0Element.basis(0, 0, jv)
            if lhs != rhs:
                report.append(f"moment identity XY - YX + T = ij fails at ({k},{l})")
            if lambda_functional(v, lam) != jv:
                report.append(f"nu-action consistency: lambda({k},{l}) != jbar(dL v)")
    # L.nu lies in the image of i
    for s in range(p.N):
        u = Matrix.column([ONE if r == s else ZERO for r in range(p.N)])
        img = nu_apply(u, model)
        if any(kl != (0, 0) for kl in img.coeffs):
            report.append("nu image: L.nu not contained in Im(i)")
    return report


def h0_membership(v, model):
    for (k, l) in v.coeffs:
        if k > model.lam.bound or l > model.lam.bound:
            raise BoundError("element outside the lambda window")
    return model.dL(v).is_zero()


def charpoly_member(p, which="x"):
    """i_n . det(tI - Xbar)(x) (or the Ybar analogue) as an L0 element."""
    cp = (p.Xbar if which == "x" else p.Ybar).charpoly()
    if which == "x":
        return L0Element({(k, 0): c for k, c in enumerate(cp.c)})
    return L0Element({(0, l): c for l, c in enumerate(cp.c)})


# ---------------------------------------------------------------------------
# theta_2: Nakajima data from lambda (Hankel realization)

def theta2(lam, max_rank=None):
    """Reconstruct a point from its moment table.

    U is realized as L0 modulo the kernel of the pairing
    H[(k,l),(k',l')] = Lambda((k,l).x^k' y^l'); Xbar and Ybar are right
    multiplication, ibar the class of (0,0) and jbar = Lambda.
    """
    ctx, n, m = lam.ctx, lam.n, lam.ctx.m
    w = (lam.bound - 1) // 2 if max_rank is None else max_rank
    rows_idx = [(k, l) for d in range(w + 1) for k in range(d + 1) for l in [d - k]]
    cols_idx = [(k, l) for d in range(w + 1) for k in range(d + 1) for l in [d - k]]

    def functional_row(v):
        return [lambda_functional(l0_act_monomial(v, k2, l2, lam), lam) for (k2, l2) in cols_idx]

    chosen = {i: [] for i in range(m)}
    chosen_rows = {i: Matrix.zeros(0, len(cols_idx)) for i in range(m)}
    for (k, l) in rows_idx:
        g = grade(k, l, n, m)
        r = Matrix.row(functional_row(L0Element.basis(k, l)))
        cand = chosen_rows[g].vstack(r)
        if cand.rank() > chosen_rows[g].nrows:
            chosen[g].append((k, l))
            chosen_rows[g] = cand
    dims = tuple(len(chosen[i]) for i in range(m))
    basis = [(g, kl) for g in range(m) for kl in chosen[g]]
    nn = len(basis)

    def coords(v, g):
        """Coordinates of the functional row of v in the grade-g chosen rows."""
        r = functional_row(v)
        if not any(r):
            return [ZERO] * len(chosen[g])
        sol = chosen_rows[g].T.solve(Matrix.column(r))
        if sol is None:
            raise StabilityError("lambda table does not close under the window; enlarge bound")
        return sol.col(0)

    offs, acc = {}, 0
    for g in range(m):
        offs[g] = acc
        acc += dims[g]
    X = [[ZERO] * nn for _ in range(nn)]
    Y = [[ZERO] * nn for _ in range(nn)]
    for col, (g, (k, l)) in enumerate(basis):
        v = L0Element.basis(k, l)
        for gen, M, tg in (("x", X, (g - 1) % m), ("y", Y, (g + 1) % m)):
            if not dims[tg]:
                continue
            c = coords(l0_act(v, gen, lam), tg)
            for a, val in enumerate(c):
                M[offs[tg] + a][col] = val
    ib = [[ZERO] for _ in range(nn)]
    if dims[n]:
        for a, val in enumerate(coords(L0Element.basis(0, 0), n)):
            ib[offs[n] + a][0] = val
    jb = [[lam(k, l) for (g, (k, l)) in basis]]
    return QuiverPoint(ctx, n, dims, Matrix(X, nn), Matrix(Y, nn), Matrix(ib, 1), Matrix(jb, nn))
