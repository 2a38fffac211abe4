"""Points of Z_m Nakajima quiver varieties and their cyclic block form.

Conventions (normative): U = U_0 + ... + U_{m-1} with dim U_i = k_i, the blocks
X_i : U_{i+1} -> U_i and Y_i : U_i -> U_{i+1}, framing i : W_n -> U_n and
j : U_n -> W_n.  The moment map at vertex i reads

    X_i Y_i - Y_{i-1} X_{i-1} + tau_i = delta_{i n} i j.
"""
import json
import random
from dataclasses import dataclass

from .crossed_algebra import AlgebraContext, tau_from_json
from .errors import GaugeError, GenerationError, ParseError, ShapeError, StabilityError, ValidationError
from .scalars import Matrix, ONE, ZERO, Q, qq, scalar_from_json, scalar_to_json


def _offsets(dims):
    off, acc = [], 0
    for k in dims:
        off.append(acc)
        acc += k
    return off


class QuiverPoint:
    """Matrix quadruple (Xbar, Ybar, ibar, jbar) on a graded space U."""

    __slots__ = ("ctx", "n", "dims", "Xbar", "Ybar", "ibar", "jbar")

    def __init__(self, ctx, n, dims, Xbar, Ybar, ibar, jbar):
        dims = tuple(int(k) for k in dims)
        if len(dims) != ctx.m:
            raise ShapeError(f"dims must have {ctx.m} entries")
        if any(k < 0 for k in dims):
            raise ShapeError("dims must be nonnegative")
        nn = sum(dims)
        for name, mat, shape in (("Xbar", Xbar, (nn, nn)), ("Ybar", Ybar, (nn, nn)),
                                 ("ibar", ibar, (nn, 1)), ("jbar", jbar, (1, nn))):
            if mat.shape != shape:
                raise ShapeError(f"{name} has shape {mat.shape}, expected {shape}")
        self.ctx, self.n, self.dims = ctx, n % ctx.m, dims
        self.Xbar, self.Ybar, self.ibar, self.jbar = Xbar, Ybar, ibar, jbar

    @property
    def N(self):
        return sum(self.dims)

    @property
    def m(self):
        return self.ctx.m

    def offsets(self):
        return _offsets(self.dims)

    def block_range(self, i):
        off = self.offsets()[i % self.m]
        return range(off, off + self.dims[i % self.m])

    def grade_of(self):
        """Grade of each basis index."""
        out = []
        for i, k in enumerate(self.dims):
            out += [i] * k
        return out

    def projector(self, i):
        g = self.grade_of()
        i %= self.m
        return Matrix([[ONE if (r == c and g[r] == i) else ZERO for c in range(self.N)] for r in range(self.N)], self.N)

    def Tbar(self):
        g = self.grade_of()
        return Matrix([[self.ctx.t(g[r]) if r == c else ZERO for c in range(self.N)] for r in range(self.N)], self.N)

    def moment_defect(self):
        """Xbar Ybar - Ybar Xbar + Tbar - ibar jbar (zero on the variety)."""
        return self.Xbar @ self.Ybar - self.Ybar @ self.Xbar + self.Tbar() - self.ibar @ self.jbar

    def blocks(self):
        return unpack_cyclic(self, check=False)

    def replace(self, **kw):
        data = dict(ctx=self.ctx, n=self.n, dims=self.dims, Xbar=self.Xbar, Ybar=self.Ybar,
                    ibar=self.ibar, jbar=self.jbar)
        data.update(kw)
        return QuiverPoint(**data)

    def __eq__(self, other):
        return (isinstance(other, QuiverPoint) and self.ctx == other.ctx and self.n == other.n
                and self.dims == other.dims and self.Xbar == other.Xbar and self.Ybar == other.Ybar
                and self.ibar == other.ibar and self.jbar == other.jbar)

    def __hash__(self):
        return hash((self.ctx, self.n, self.dims, self.Xbar, self.Ybar))

    def __repr__(self):
        return f"QuiverPoint(m={self.m}, n={self.n}, dims={self.dims})"

    def to_json(self):
        c = self.blocks()
        return {
            "m": self.m, "n": self.n,
            "tau": [scalar_to_json(t) for t in self.ctx.tau],
            "dims": list(self.dims),
            "X_blocks": [[scalar_to_json(a) for a in b.flat()] for b in c.X],
            "Y_blocks": [[scalar_to_json(a) for a in b.flat()] for b in c.Y],
            "i": [scalar_to_json(a) for a in c.i.flat()],
            "j": [scalar_to_json(a) for a in c.j.flat()],
        }

    @classmethod
    def from_json(cls, obj):
        try:
            if isinstance(obj, str):
                obj = json.loads(obj)
            m, n, dims = int(obj["m"]), int(obj["n"]), [int(k) for k in obj["dims"]]
            ctx = AlgebraContext(m, tau_from_json(obj["tau"], m))
            if len(dims) != m:
                raise ParseError("dims length must equal m")

            def mat(flat, r, c):
                vals = [scalar_from_json(s, m) for s in flat]
                if len(vals) != r * c:
                    raise ParseError(f"block needs {r * c} entries, got {len(vals)}")
                return Matrix([vals[a * c:(a + 1) * c] for a in range(r)], c)

            X = [mat(obj["X_blocks"][i], dims[i], dims[(i + 1) % m]) for i in range(m)]
            Y = [mat(obj["Y_blocks"][i], dims[(i + 1) % m], dims[i]) for i in range(m)]
            ib = mat(obj["i"], dims[n % m], 1)
            jb = mat(obj["j"], 1, dims[n % m])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ParseError(f"malformed point: {exc}") from exc
        return pack_cyclic(CyclicQuiverPoint(ctx, n % m, tuple(dims), X, Y, ib, jb), check=False)


@dataclass
class CyclicQuiverPoint:
    """Per-arrow blocks: X[i] : V_{i+1} -> V_i, Y[i] : V_i -> V_{i+1}."""
    ctx: AlgebraContext
    n: int
    dims: tuple
    X: list
    Y: list
    i: Matrix
    j: Matrix

    def relations(self):
        """Left-hand side X_i Y_i - Y_{i-1} X_{i-1} + tau_i - delta_{in} i j per vertex."""
        m, out = self.ctx.m, []
        for v in range(m):
            k = self.dims[v]
            r = self.X[v] @ self.Y[v] - self.Y[(v - 1) % m] @ self.X[(v - 1) % m]
            r = r + Matrix.identity(k).scale(self.ctx.t(v))
            if v == self.n:
                r = r - self.i @ self.j
            out.append(r)
        return out


def pack_cyclic(c, check=True):
    m, dims = c.ctx.m, tuple(c.dims)
    if check:
        bad = [v for v, r in enumerate(c.relations()) if not r.is_zero()]
        if bad:
            raise ValidationError(f"relations fail at vertices {bad}")
    off = _offsets(dims)
    nn = sum(dims)
    X = [[ZERO] * nn for _ in range(nn)]
    Y = [[ZERO] * nn for _ in range(nn)]
    for v in range(m):
        w = (v + 1) % m
        xb, yb = c.X[v], c.Y[v]
        if xb.shape != (dims[v], dims[w]) or yb.shape != (dims[w], dims[v]):
            raise ShapeError(f"arrow blocks at vertex {v} have wrong shape")
        for a in range(dims[v]):
            for b in range(dims[w]):
                X[off[v] + a][off[w] + b] = xb[a, b]
                Y[off[w] + b][off[v] + a] = yb[b, a]
    ib = [[ZERO] for _ in range(nn)]
    jb = [[ZERO] * nn]
    if c.i.shape != (dims[c.n], 1) or c.j.shape != (1, dims[c.n]):
        raise ShapeError("framing blocks have wrong shape")
    for a in range(dims[c.n]):
        ib[off[c.n] + a][0] = c.i[a, 0]
        jb[0][off[c.n] + a] = c.j[0, a]
    return QuiverPoint(c.ctx, c.n, dims, Matrix(X, nn), Matrix(Y, nn), Matrix(ib, 1), Matrix(jb, nn))


def unpack_cyclic(p, check=True):
    if check:
        report = validate_point(p)
        if report:
            raise ValidationError("; ".join(report))
    m, dims, off = p.m, p.dims, p.offsets()
    rng = [range(off[v], off[v] + dims[v]) for v in range(m)]
    X = [p.Xbar.submatrix(rng[v], rng[(v + 1) % m]) for v in range(m)]
    Y = [p.Ybar.submatrix(rng[(v + 1) % m], rng[v]) for v in range(m)]
    return CyclicQuiverPoint(p.ctx, p.n, dims, X, Y, p.ibar.submatrix(rng[p.n], [0]),
                             p.jbar.submatrix([0], rng[p.n]))


def make_point(ctx, n, dims, X, Y, i, j, check=True):
    """Assemble a point from per-arrow blocks given as nested lists."""
    m = ctx.m
    dims = tuple(dims)
    n %= m

    def mat(rows, r, c):
        if not rows and (r == 0 or c == 0):
            return Matrix.zeros(r, c)
        return Matrix([[qq(a) for a in row] for row in rows], c)

    c = CyclicQuiverPoint(
        ctx, n, dims,
        [mat(X[v], dims[v], dims[(v + 1) % m]) for v in range(m)],
        [mat(Y[v], dims[(v + 1) % m], dims[v]) for v in range(m)],
        mat([[a] for a in i], dims[n], 1), mat([list(j)], 1, dims[n]))
    return pack_cyclic(c, check=check)


def validate_point(p):
    """List of violated invariants (empty iff the point lies on the variety)."""
    report = []
    g = p.grade_of()
    m = p.m
    for r in range(p.N):
        for c in range(p.N):
            if p.Xbar[r, c] and g[r] != (g[c] - 1) % m:
                report.append(f"Xbar entry ({r},{c}) maps U_{g[c]} to U_{g[r]}")
            if p.Ybar[r, c] and g[r] != (g[c] + 1) % m:
                report.append(f"Ybar entry ({r},{c}) maps U_{g[c]} to U_{g[r]}")
    for r in range(p.N):
        if p.ibar[r, 0] and g[r] != p.n:
            report.append(f"ibar has support in U_{g[r]} != U_{p.n}")
        if p.jbar[0, r] and g[r] != p.n:
            report.append(f"jbar has support in U_{g[r]} != U_{p.n}")
    if report:
        return report
    d = p.moment_defect()
    for r in range(p.N):
        for c in range(p.N):
            if d[r, c]:
                report.append(f"moment map fails in block (U_{g[r]}, U_{g[c]}) entry ({r},{c}): {d[r, c]}")
    return report


def krylov_span(p):
    """Basis (rref rows) of the smallest X,Y-invariant subspace containing im(ibar)."""
    vecs = [p.ibar.col(0)]
    basis = Matrix.zeros(0, p.N)
    frontier = [v for v in vecs if any(v)]
    while frontier:
        new = []
        for v in frontier:
            cand = basis.vstack(Matrix.row(v))
            if cand.rank() > basis.nrows:
                basis = Matrix(cand.rref()[0].rows[:cand.rank()], p.N)
                col = Matrix.column(v)
                new += [(p.Xbar @ col).col(0), (p.Ybar @ col).col(0)]
        frontier = new
    return basis


def check_stability(p):
    if p.N == 0:
        return True
    return krylov_span(p).nrows == p.N


def _check_graded(p, g):
    if g.shape != (p.N, p.N):
        raise GaugeError("gauge matrix has wrong shape")
    gr = p.grade_of()
    for r in range(p.N):
        for c in range(p.N):
            if g[r, c] and gr[r] != gr[c]:
                raise GaugeError("gauge matrix is not block diagonal")
    if g.det() == 0:
        raise GaugeError("gauge matrix is not invertible")


def gauge_apply(p, g):
    _check_graded(p, g)
    gi = g.inverse()
    return p.replace(Xbar=g @ p.Xbar @ gi, Ybar=g @ p.Ybar @ gi, ibar=g @ p.ibar, jbar=p.jbar @ gi)


def _intertwiner_system(p, q, homogeneous=False):
    """Linear system in the graded entries of g for g.p = q."""
    nn = p.N
    gr = p.grade_of()
    unknowns = [(r, c) for r in range(nn) for c in range(nn) if gr[r] == gr[c]]
    index = {rc: u for u, rc in enumerate(unknowns)}
    rows, rhs = [], []

    def add_eq(coeffs, value):
        row = [ZERO] * len(unknowns)
        for rc, a in coeffs:
            row[index[rc]] += a
        rows.append(row)
        rhs.append(value)

    for A, B in ((p.Xbar, q.Xbar), (p.Ybar, q.Ybar)):
        # (g A - B g)[r, c] = 0
        for r in range(nn):
            for c in range(nn):
                coeffs = []
                for s in range(nn):
                    if gr[r] == gr[s] and A[s, c]:
                        coeffs.append(((r, s), A[s, c]))
                    if gr[s] == gr[c] and B[r, s]:
                        coeffs.append(((s, c), -B[r, s]))
                if coeffs:
                    add_eq(coeffs, ZERO)
    for r in range(nn):
        coeffs = [((r, s), p.ibar[s, 0]) for s in range(nn) if gr[r] == gr[s] and p.ibar[s, 0]]
        add_eq(coeffs, ZERO if homogeneous else q.ibar[r, 0])
    for c in range(nn):
        coeffs = [((s, c), q.jbar[0, s]) for s in range(nn) if gr[s] == gr[c] and q.jbar[0, s]]
        add_eq(coeffs, ZERO if homogeneous else p.jbar[0, c])
    return unknowns, Matrix(rows, len(unknowns)), Matrix.column(rhs)


def gauge_equivalent(p, q):
    """Graded g with gauge_apply(p, g) = q, or None."""
    if p.ctx != q.ctx or p.n != q.n or p.dims != q.dims:
        return None
    for pt in (p, q):
        if validate_point(pt) or not check_stability(pt):
            raise StabilityError("gauge_equivalent needs valid stable points")
    nn = p.N
    if nn == 0:
        return Matrix.zeros(0, 0)
    unknowns, A, b = _intertwiner_system(p, q)
    sol = A.solve(b)
    if sol is None:
        return None
    g = [[ZERO] * nn for _ in range(nn)]
    for u, (r, c) in enumerate(unknowns):
        g[r][c] = sol[u, 0]
    g = Matrix(g, nn)
    if g.det() == 0:
        return None
    if gauge_apply(p, g) != q:
        return None
    return g


def is_free_at(p):
    """The stabilizer system at p has only the identity solution."""
    if p.N == 0:
        return True
    _, A, _ = _intertwiner_system(p, p, homogeneous=True)
    return A.rank() == A.ncols


def expected_dimension(m, n, dims):
    """Closed-form dimension of the stratum, as printed for m = 2 and m > 2."""
    k = list(dims)
    kn = k[n % m]
    if m == 1:
        return 2 * k[0]
    if m == 2:
        return 2 * (kn - (k[0] - k[1]) ** 2)
    sq = sum(a * a for a in k)
    pairs = sum(k[a] * k[b] for a in range(m) for b in range(a + 1, m))
    return 2 * (kn - (sq - pairs))


def cartan_dimension(m, n, dims):
    """2 k_n - (k, C k) with C the affine A_{m-1} Cartan matrix."""
    k = list(dims)
    kn = k[n % m]
    sq = sum(a * a for a in k)
    cyc = sum(k[a] * k[(a + 1) % m] for a in range(m))
    return 2 * kn - 2 * sq + 2 * cyc


def _moment_jacobian(p):
    c = unpack_cyclic(p, check=False)
    m, dims = p.m, p.dims
    params = []
    for v in range(m):
        w = (v + 1) % m
        params += [("X", v, a, b) for a in range(dims[v]) for b in range(dims[w])]
        params += [("Y", v, a, b) for a in range(dims[w]) for b in range(dims[v])]
    params += [("i", a) for a in range(dims[p.n])] + [("j", a) for a in range(dims[p.n])]
    cols = []
    for prm in params:
        dX = [Matrix.zeros(*b.shape) for b in c.X]
        dY = [Matrix.zeros(*b.shape) for b in c.Y]
        di, dj = Matrix.zeros(*c.i.shape), Matrix.zeros(*c.j.shape)
        if prm[0] == "X":
            dX[prm[1]] = _unit_matrix(c.X[prm[1]].shape, prm[2], prm[3])
        elif prm[0] == "Y":
            dY[prm[1]] = _unit_matrix(c.Y[prm[1]].shape, prm[2], prm[3])
        elif prm[0] == "i":
            di = _unit_matrix(c.i.shape, prm[1], 0)
        else:
            dj = _unit_matrix(c.j.shape, 0, prm[1])
        col = []
        for v in range(m):
            u = (v - 1) % m
            d = dX[v] @ c.Y[v] + c.X[v] @ dY[v] - dY[u] @ c.X[u] - c.Y[u] @ dX[u]
            if v == p.n:
                d = d - di @ c.j - c.i @ dj
            col += d.flat()
        cols.append(col)
    rows = len(cols[0]) if cols else sum(k * k for k in dims)
    return Matrix([[cols[j][r] for j in range(len(cols))] for r in range(rows)], len(cols)), len(params)


def _unit_matrix(shape, a, b):
    r, c = shape
    return Matrix([[ONE if (x == a and y == b) else ZERO for y in range(c)] for x in range(r)], c)


def tangent_dimension(p):
    """Ambient parameters - rank(d mu) - dim gauge group, at a stable point."""
    if validate_point(p) or not check_stability(p):
        raise StabilityError("tangent_dimension needs a valid stable point")
    if not is_free_at(p):
        raise StabilityError("gauge action is not free at this point")
    jac, nparams = _moment_jacobian(p)
    rank = jac.rank() if jac.ncols else 0
    return nparams - rank - sum(k * k for k in p.dims)


def random_point(ctx, n, dims, seed, retries=40, spread=3, check_formula=True):
    """Valid stable point, deterministic per seed.

    Xbar and ibar are drawn at random; the moment equation is then linear in
    (Ybar, jbar), which is solved exactly with a random kernel component.
    With check_formula=False the search runs even on strata whose dimension
    count is negative, which is how emptiness is probed independently.
    """
    m = ctx.m
    n %= m
    dims = tuple(dims)
    if check_formula and (expected_dimension(m, n, dims) < 0 or cartan_dimension(m, n, dims) < 0):
        raise GenerationError(f"empty stratum for n={n}, dims={dims}")
    rng = random.Random(f"{seed}:{m}:{n}:{dims}:{ctx.tau}")
    for _ in range(retries):
        pt = _attempt(ctx, n, dims, rng, spread)
        if pt is not None and not validate_point(pt) and check_stability(pt):
            return pt
    raise GenerationError(f"no stable point found for n={n}, dims={dims} after {retries} tries")


def _rand_block(rng, r, c, spread):
    return Matrix([[Q(rng.randint(-spread, spread)) for _ in range(c)] for _ in range(r)], c)


def _attempt(ctx, n, dims, rng, spread):
    m = ctx.m
    X = [_rand_block(rng, dims[v], dims[(v + 1) % m], spread) for v in range(m)]
    ib = _rand_block(rng, dims[n], 1, spread)
    # unknowns: Y blocks then j
    slots = []
    for v in range(m):
        w = (v + 1) % m
        slots += [("Y", v, a, b) for a in range(dims[w]) for b in range(dims[v])]
    slots += [("j", a) for a in range(dims[n])]
    index = {s: u for u, s in enumerate(slots)}
    rows, rhs = [], []
    for v in range(m):
        u = (v - 1) % m
        for r in range(dims[v]):
            for c in range(dims[v]):
                row = [ZERO] * len(slots)
                # (X_v Y_v)[r,c] = sum_s X_v[r,s] Y_v[s,c]
                for s in range(dims[(v + 1) % m]):
                    if X[v][r, s]:
                        row[index[("Y", v, s, c)]] += X[v][r, s]
                # -(Y_u X_u)[r,c] = -sum_s Y_u[r,s] X_u[s,c]
                for s in range(dims[u]):
                    if X[u][s, c]:
                        row[index[("Y", u, r, s)]] -= X[u][s, c]
                if v == n:
                    row[index[("j", c)]] -= ib[r, 0]
                rows.append(row)
                rhs.append(-ctx.t(v) if r == c else ZERO)
    if not slots:
        return None if any(rhs) else pack_cyclic(CyclicQuiverPoint(
            ctx, n, dims, X, [Matrix.zeros(dims[(v + 1) % m], dims[v]) for v in range(m)],
            ib, Matrix.zeros(1, dims[n])), check=False)
    A = Matrix(rows, len(slots))
    sol = A.solve(Matrix.column(rhs))
    if sol is None:
        return None
    vals = sol.col(0)
    for vec in A.nullspace():
        t = Q(rng.randint(-spread, spread))
        vals = [a + t * b for a, b in zip(vals, vec)]
    Y = []
    for v in range(m):
        w = (v + 1) % m
        Y.append(Matrix([[vals[index[("Y", v, a, b)]] for b in range(dims[v])] for a in range(dims[w])], dims[v]))
    jb = Matrix([[vals[index[("j", a)]] for a in range(dims[n])]], dims[n])
    return pack_cyclic(CyclicQuiverPoint(ctx, n, dims, X, Y, ib, jb), check=False)


def zero_point(ctx=None):
    """The m = 1, N = 1 point (0, 0, 1, tau)."""
    ctx = ctx or AlgebraContext(1, (1,))
    return make_point(ctx, 0, (1,), [[[0]]], [[[0]]], [1], [ctx.tau[0]])
