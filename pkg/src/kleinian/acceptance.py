"""The ten acceptance criteria as plain functions.

Each returns a ``Result``; ``tests/test_acceptance.py`` and ``kleinian
selfcheck`` both call them.  Sampling is seeded, so runs are reproducible.
"""
import itertools
import random
import time
from dataclasses import dataclass, field

from .crossed_algebra import AlgebraContext, AlgElem, is_generic
from .dgmodel import DGModel, L0Element, build_lambda, check_axioms, dL_apply, h0_membership
from .errors import GenerationError
from .gaction import ShearX, ShearY, equivariance_check
from .ideals import (build_ideal_My, check_cocycle, check_functional, concatenates_to_pbw, f1_y, kappa,
                     membership_residue, theta1, transition_lambda)
from .ktheory import class_of_ideal, decompose
from .quiver import (cartan_dimension, expected_dimension, gauge_equivalent, random_point, tangent_dimension,
                     zero_point)
from .scalars import ZERO, Matrix, Poly, Q, qq


@dataclass
class Result:
    number: int
    name: str
    passed: bool
    cases: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        extra = f"; first failure: {self.failures[0]}" if self.failures else ""
        return f"[{status}] criterion {self.number}: {self.name} ({self.cases} cases, {self.seconds:.1f}s{extra})"

    def to_json(self):
        return {"criterion": self.number, "name": self.name, "passed": self.passed, "cases": self.cases,
                "failures": self.failures[:10]}


# ---------------------------------------------------------------------------
# sampling

def generic_tau(m, rng):
    while True:
        tau = tuple(Q(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(m))
        ctx = AlgebraContext(m, tau)
        if is_generic(ctx):
            return ctx


def feasible_strata(m, N):
    """(n, dims) with sum(dims) = N and both dimension counts nonnegative."""
    out = []
    for dims in itertools.product(range(N + 1), repeat=m):
        if sum(dims) != N:
            continue
        for n in range(m):
            if expected_dimension(m, n, dims) >= 0 and cartan_dimension(m, n, dims) >= 0:
                out.append((n, dims))
    return out


def sample_points(m, Ns, count, seed, ctx=None):
    """count stable points with N in Ns, cycling through feasible strata."""
    rng = random.Random(f"sample:{m}:{tuple(Ns)}:{seed}")
    strata = [s for N in Ns for s in feasible_strata(m, N)]
    pts, attempt = [], 0
    while len(pts) < count and attempt < 20 * count:
        n, dims = strata[attempt % len(strata)]
        c = ctx or generic_tau(m, rng)
        try:
            pts.append(random_point(c, n, dims, seed=rng.randrange(10 ** 9)))
        except GenerationError:
            pass
        attempt += 1
    return pts


def random_elem(ctx, rng, deg):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        k = rng.randint(0, deg)
        l = rng.randint(0, deg - k)
        terms[(k, l)] = tuple(Q(rng.randint(-3, 3)) for _ in range(ctx.m))
    return AlgElem(ctx, terms)


def _timed(fn):
    def run(*a, **kw):
        t = time.perf_counter()
        r = fn(*a, **kw)
        r.seconds = time.perf_counter() - t
        return r
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# ---------------------------------------------------------------------------
# criteria

@_timed
def criterion_1(seed=0, triples=200):
    """Associativity and xy - yx = tau on random triples, m in 1..4, degree <= 4."""
    rng = random.Random(f"c1:{seed}")
    fails, cases = [], 0
    for t in range(triples):
        m = 1 + t % 4
        ctx = generic_tau(m, rng)
        a, b, c = (random_elem(ctx, rng, 4) for _ in range(3))
        if (a * b) * c != a * (b * c):
            fails.append(f"associativity, m={m}, triple {t}")
        x, y = ctx.x(), ctx.y()
        if x * y - y * x != ctx.tau_elem():
            fails.append(f"defining relation, m={m}")
        cases += 1
    return Result(1, "PBW soundness", not fails, cases, fails)


@_timed
def criterion_2(seed=0, count=100):
    """lambda_kl = 0 off the diagonal classes k = l (mod m), k, l <= 2N + 2."""
    fails, cases = [], 0
    per_m = count // 4
    for m in (1, 2, 3, 4):
        for p in sample_points(m, range(1, 5), per_m + (count % 4 if m == 4 else 0), seed):
            lam = build_lambda(p, bound=2 * p.N + 2)
            bad = [(k, l) for k in range(lam.bound + 1) for l in range(lam.bound + 1)
                   if (k - l) % m and lam.values.get((k, l), ZERO)]
            if bad:
                fails.append(f"m={m} dims={p.dims}: nonzero at {bad[:3]}")
            cases += 1
    return Result(2, "lambda support", not fails and cases == count, cases, fails)


@_timed
def criterion_3(seed=0, count=50):
    """kappa mu = mu kappa = e_n and kappa (1 - e_n) = 0, exact and as series of order 2N + 4."""
    fails, cases = [], 0
    ms = (1, 2, 3, 4)
    for i, m in enumerate(ms):
        share = count // len(ms) + (1 if i < count % len(ms) else 0)
        for p in sample_points(m, range(1, 4), share, seed + 3):
            km = kappa(p)
            f = km.check_resolvent() + km.check_series(2 * p.N + 4)
            if f:
                fails.append(f"m={m} dims={p.dims} n={p.n}: {f}")
            cases += 1
    return Result(3, "kappa/mu identities", not fails and cases == count, cases, fails)


@_timed
def criterion_4(seed=0, count=25, window=6):
    """Moment identity on L0 and d_L intertwining on the basis window k, l <= 6."""
    fails, cases = [], 0
    ms = (1, 2, 3)
    for i, m in enumerate(ms):
        share = count // len(ms) + (1 if i < count % len(ms) else 0)
        for p in sample_points(m, range(1, 4), share, seed + 4):
            model = DGModel(p, build_lambda(p, bound=2 * window + 2))
            rep = check_axioms(model, window=window)
            if rep:
                fails.append(f"m={m} dims={p.dims}: {rep[0]}")
            cases += 1
    return Result(4, "moment identities on L0", not fails and cases == count, cases, fails)


@_timed
def criterion_5(seed=0, per_m=6):
    """class_of_ideal(Omega(p)) decomposes to (n, normalized dims)."""
    fails, cases = [], 0
    for m in (1, 2, 3, 4):
        for p in sample_points(m, range(0, 5), per_m, seed + 5):
            got = decompose(class_of_ideal(build_ideal_My(p)))
            low = min(p.dims)
            want = (p.n, tuple(k - low for k in p.dims)) if m > 1 else (0, ())
            if got != want:
                fails.append(f"m={m} n={p.n} dims={p.dims}: got {got}")
            cases += 1
    return Result(5, "K-class of Omega(p)", not fails, cases, fails)


@_timed
def criterion_6(seed=0, per_case=20, max_seconds=30.0):
    """theta_1(Omega(p)) ~ p with a witness, and transition lambda = build_lambda."""
    fails, cases = [], 0
    for m in (1, 2, 3):
        for N in range(0, 4):
            t0 = time.perf_counter()
            for p in sample_points(m, [N], per_case, seed + 6):
                I = build_ideal_My(p)
                q = theta1(I)
                g = gauge_equivalent(q, p)
                if g is None:
                    fails.append(f"m={m} N={N} n={p.n} dims={p.dims}: no gauge witness")
                lam = build_lambda(p)
                if not transition_lambda(I, lam.bound).agrees(lam):
                    fails.append(f"m={m} N={N} dims={p.dims}: lambda mismatch")
                cases += 1
            dt = time.perf_counter() - t0
            if dt > max_seconds:
                fails.append(f"m={m} N={N}: {dt:.1f}s exceeds {max_seconds}s")
    return Result(6, "round trip", not fails, cases, fails)


@_timed
def criterion_7(seed=0, max_total=4):
    """tangent_dimension = closed formula (tau = 1); negative formula -> GenerationError."""
    fails, cases = [], 0
    for m in (2, 3):
        ctx = AlgebraContext.uniform(m)
        for dims in itertools.product(range(max_total + 1), repeat=m):
            if sum(dims) > max_total:
                continue
            for n in range(m):
                want = expected_dimension(m, n, dims)
                cases += 1
                try:
                    p = random_point(ctx, n, dims, seed=seed, check_formula=False)
                except GenerationError:
                    if want >= 0:
                        fails.append(f"m={m} n={n} dims={dims}: no point, formula {want}")
                    continue
                if want < 0:
                    fails.append(f"m={m} n={n} dims={dims}: point exists, formula {want}")
                    continue
                got = tangent_dimension(p)
                if got != want:
                    fails.append(f"m={m} n={n} dims={dims}: tangent {got} != formula {want}")
    return Result(7, "dimension formulas", not fails, cases, fails)


@_timed
def criterion_8(seed=0, per_m=10):
    """Omega(sigma . p) ~ sigma_* Omega(p) for the basic shears."""
    fails, cases = [], 0
    for m in (1, 2, 3):
        pts = sample_points(m, [1, 2], per_m, seed + 8)
        for p in pts:
            for c in (1, -2):
                mono = Poly.monomial(m - 1, qq(c))
                for name, sigma in (("ShearX", ShearX(mono)), ("ShearY", ShearY(mono))):
                    if not equivariance_check(sigma, p):
                        fails.append(f"m={m} dims={p.dims} n={p.n}: {name}({c})")
                    cases += 1
    return Result(8, "G-equivariance", not fails and cases == 3 * per_m * 4, cases, fails)


def _kernel_dim(cols):
    """Dimension of the kernel of the linear map whose columns are given."""
    if not cols:
        return 0
    rows = max(len(c) for c in cols)
    if rows == 0:
        return len(cols)
    M = Matrix([[c[r] if r < len(c) else ZERO for c in cols] for r in range(rows)], len(cols))
    return len(cols) - M.rank()


@_timed
def criterion_9(window=4):
    """m = 1 zero point: {v : f_1(v) in M_y} = Ker d_L on the window k, l <= 4."""
    p = zero_point()
    km = kappa(p)
    I = build_ideal_My(p)
    model = DGModel(p, build_lambda(p, bound=2 * window + 2))
    basis = [(k, l) for k in range(window + 1) for l in range(window + 1)]
    fails = []
    res_cols, dl_cols = [], []
    keys = set()
    residues = []
    for kl in basis:
        r = membership_residue(I, f1_y({kl: Q(1)}, km))
        if r is None:
            fails.append(f"f_1{kl} is not polynomial after clearing denominators")
            continue
        residues.append(r)
        keys |= set(r.terms)
        in_kernel = h0_membership(L0Element.basis(*kl), model)
        if in_kernel != (not r):
            fails.append(f"basis vector {kl}: Ker d_L {in_kernel}, member {not r}")
    keys = sorted(keys)
    res_cols = [[r.terms.get(k, ZERO) for k in keys] for r in residues]
    dl_cols = [dL_apply(L0Element.basis(*kl), p, model).col(0) for kl in basis]
    dm, dk = _kernel_dim(res_cols), _kernel_dim(dl_cols)
    if dm != dk:
        fails.append(f"member subspace has dimension {dm}, Ker d_L {dk}")
    gens_ok = all(membership_residue(I, f1_y({kl: Q(1)}, km)) is not None for kl in [(0, 1), (1, 0)])
    if not gens_ok:
        fails.append("generator images y, x - 1/y are not recognised")
    return Result(9, "m=1 zero-point sanity", not fails, len(basis), fails)


def _monomials(ctx, deg):
    out = []
    for k in range(deg + 1):
        for l in range(deg + 1 - k):
            for i in range(ctx.m):
                out.append(ctx.monomial(k, l, i))
    return out


@_timed
def criterion_10(seed=0, count=25, deg=3):
    """Functional equations for f_2 and the cocycle identity on PBW-concatenating pairs."""
    rng = random.Random(f"c10:{seed}")
    fails, cases = [], 0
    ms = (1, 2, 3)
    for i, m in enumerate(ms):
        share = count // len(ms) + (1 if i < count % len(ms) else 0)
        for p in sample_points(m, range(1, 4), share, seed + 10):
            km = kappa(p)
            v = Matrix.column([Q(rng.randint(-4, 4)) for _ in range(p.N)])
            for side in ("x", "y"):
                if not check_functional(v, km, side):
                    fails.append(f"m={m} dims={p.dims}: functional equation ({side})")
            monos = _monomials(p.ctx, deg)
            pairs = [(a, b) for a in monos for b in monos
                     if a.degree() + b.degree() <= deg and concatenates_to_pbw(a, b)]
            for a, b in rng.sample(pairs, min(12, len(pairs))):
                for side in ("x", "y"):
                    if not check_cocycle(v, a, b, km, side):
                        fails.append(f"m={m} dims={p.dims}: cocycle ({side}) at {a} * {b}")
            cases += 1
    return Result(10, "A-infinity identities", not fails and cases == count, cases, fails)


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


def run(numbers=None, seed=0):
    return [CRITERIA[i](seed=seed) if i != 9 else CRITERIA[9]() for i in (numbers or sorted(CRITERIA))]
