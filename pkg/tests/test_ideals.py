import pytest

from kleinian.crossed_algebra import AlgebraContext
from kleinian.dgmodel import build_lambda
from kleinian.errors import WrongOrderingError
from kleinian.ideals import (FractionalIdeal, KappaMu, LocX, LocY, build_ideal_Mx, build_ideal_My, check_cocycle,
                             check_functional, delta_x, delta_y, gr_y_ladder, ideal_from_json, ideal_to_json,
                             isomorphic_ideals, loc_right_mul, member, phi_apply, phi_inverse, polynomial_generators,
                             rho_projections, standard_basis, theta1, transition_lambda, unit_ideal)
from kleinian.quiver import gauge_apply, gauge_equivalent, make_point, random_point, zero_point
from kleinian.scalars import ONE, ZERO, Matrix, Poly, Q, RatFunc


def ctx_of(m, *tau):
    return AlgebraContext(m, tuple(Q(t) for t in tau) if tau else (ONE,) * m)


def P(*c):
    return Poly([Q(a) for a in c])


def R(num, den=(1,)):
    return RatFunc(P(*num), P(*den))


# -- localized arithmetic ---------------------------------------------------

def test_right_mul_by_y_appends():
    ctx = ctx_of(2)
    e = LocX(ctx, 0, {0: R((1,), (0, 1))})
    assert loc_right_mul(e, "y") == LocX(ctx, 0, {1: R((1,), (0, 1))})


def test_right_mul_by_x_uses_relation():
    ctx = ctx_of(1)
    e = LocX(ctx, 0, {1: R((1,))})
    assert loc_right_mul(e, "x") == LocX(ctx, 0, {1: R((0, 1)), 0: R((-1,))})


def test_sector_slices_sum_to_original():
    ctx = ctx_of(3, 1, 2, 3)
    e = LocX(ctx, 1, {0: R((1, 2, 0, 1), (1, 0, 0, -1)), 2: R((0, 0, 5))})
    parts = [loc_right_mul(e, ("e", i)) for i in range(3)]
    assert sum(parts[1:], parts[0]) == e
    with pytest.raises(ValueError):
        loc_right_mul(e, "q")


def test_right_mul_matches_algebra():
    ctx = ctx_of(2, 1, 3)
    a = ctx.monomial(2, 1) + ctx.monomial(0, 2)
    e = LocX.from_algelem(a, 0)
    assert e.rmul_x().to_algelem() == (a * ctx.x()).lmul_idem(0)
    assert e.rmul_y().to_algelem() == (a * ctx.y()).lmul_idem(0)


# -- kappa, mu, Delta -------------------------------------------------------

def test_kappa_trivial_for_empty_point():
    ctx = ctx_of(3)
    p = make_point(ctx, 2, (0, 0, 0), [[], [], []], [[], [], []], [], [], check=False)
    km = KappaMu(p, check=False)
    assert km.p == P(1) and km.s == P(1)
    assert km.kappa_series(5) == LocY.one(ctx, 2).truncate(-5)


def test_kappa_of_zero_point():
    km = KappaMu(zero_point())
    ks = km.kappa_series(4)
    assert ks.parts == {0: R((1,)), -1: R((-1,), (0, 1))}
    ms = km.mu_series(4)
    assert ms.parts == {0: R((1,)), -1: R((1,), (0, 1))}


@pytest.mark.parametrize("m,dims", [(1, (2,)), (2, (1, 2))])
def test_kappa_series_coefficients_are_minus_lambda(m, dims):
    p = random_point(ctx_of(m), 0, dims, seed=3)
    lam = build_lambda(p, 8)
    ks = KappaMu(p).kappa_series(5)
    for k in range(5):
        g = ks.parts.get(-k - 1, RatFunc(P(0)))
        exp = g.laurent_inf(-6) if g else {}
        for l in range(5):
            assert exp.get(-l - 1, ZERO) == -lam(k, l)


def test_delta_examples():
    p = zero_point()
    km = KappaMu(p)
    assert not delta_x(p.ibar, 3, 0, km)
    assert delta_x(p.ibar, 0, 1, km) == LocX(p.ctx, 0, {0: R((1,), (0, 1))})
    assert not delta_y(p.ibar, 0, 2, km)
    empty = make_point(ctx_of(1), 0, (0,), [[]], [[]], [], [], check=False)
    kme = KappaMu(empty, check=False)
    assert not delta_x(Matrix.zeros(0, 1), 2, 2, kme)


def test_cocycle_and_functional_equation():
    p = random_point(ctx_of(2, 1, 3), 0, (1, 2), seed=4)
    km = KappaMu(p)
    ctx = p.ctx
    for side in ("x", "y"):
        assert check_functional(p.ibar, km, side)
        assert check_functional(p.Xbar @ p.ibar, km, side)
    assert check_cocycle(p.ibar, ctx.monomial(2, 0), ctx.monomial(1, 1), km, "x")
    assert check_cocycle(p.ibar, ctx.monomial(1, 2), ctx.monomial(0, 1), km, "y")
    with pytest.raises(ValueError):
        check_cocycle(p.ibar, ctx.y(), ctx.x(), km)


# -- Omega and the polynomial form ----------------------------------------------

def test_empty_point_gives_unit_ideal():
    ctx = ctx_of(3)
    I = unit_ideal(ctx, 2)
    e2 = ctx.e(2)
    assert polynomial_generators(I) == [e2, e2]
    assert transition_lambda(I, 4).values == {}
    q = theta1(I)
    assert q.N == 0 and q.n == 2
    ladder = gr_y_ladder(I)
    assert ladder.stab_index == 0 and all(c == P(1) for c in ladder.chain)
    assert standard_basis(I) == [LocX.one(ctx, 2)]


def test_zero_point_ideal_members():
    p = zero_point()
    I = build_ideal_My(p)
    ctx = p.ctx
    assert I.gens[0] == LocY.make(ctx, 0, {0: R((0, 1))})
    assert I.gens[1] == LocY.make(ctx, 0, {1: R((1,)), 0: R((-1,), (0, 1))})
    assert member(I, ctx.y())
    assert not member(I, ctx.one())
    assert not member(I, ctx.x())
    for g in I.gens:
        for a, b in [(0, 0), (1, 0), (0, 2), (2, 1)]:
            assert member(I, g.rmul_algelem(ctx.monomial(a, b)))
    # clearing the y-denominator gives the isomorphic polynomial ideal (y^2, xy - 2)
    y, x = ctx.y(), ctx.x()
    assert polynomial_generators(I) == [y * y, x * y - ctx.one().scale(Q(2))]


def test_first_generator_is_polynomial():
    p = random_point(ctx_of(2, 1, 3), 1, (2, 1), seed=5)
    I = build_ideal_My(p)
    assert I.gens[0].inner.is_poly()
    assert I.gens[0] == LocY.make(p.ctx, 1, {0: RatFunc.poly(KappaMu(p).s)})


def test_rho_projections():
    ctx = ctx_of(1)
    e = LocX(ctx, 0, {1: R((1, 0, 1), (0, 1))})
    assert rho_projections(e, "rho_x") == LocX(ctx, 0, {1: R((0, 1))})
    f = LocY.make(ctx, 0, {3: R((1,), (0, 1))})
    assert not rho_projections(f, "rho_y_grave")
    with pytest.raises(WrongOrderingError):
        rho_projections(e, "rho_y")


def test_rho_acute_stabilizes():
    p = random_point(ctx_of(1), 0, (2,), seed=6)
    km = KappaMu(p)
    a = 3
    vals = [km.kappa_series(a + p.N + 2 + extra).rmul_x(a).keep_inner_nonneg().poly_part().to_algelem()
            for extra in (0, 3)]
    assert vals[0] == vals[1]


def test_phi_fixes_pure_powers_and_inverts():
    p = random_point(ctx_of(2, 1, 3), 0, (1, 1), seed=7)
    km = KappaMu(p)
    ctx = p.ctx
    x5, y3 = ctx.monomial(5, 0).lmul_idem(0), ctx.monomial(0, 3).lmul_idem(0)
    assert phi_apply(x5, km) == x5
    assert phi_apply(y3, km) == y3
    z = KappaMu(zero_point())
    xy = zero_point().ctx.monomial(1, 1)
    assert phi_inverse(phi_apply(xy, z), z) == xy


# -- ladders, transition, theta_1 ---------------------------------------------

def test_zero_point_ladder_and_roundtrip():
    p = zero_point()
    I = build_ideal_My(p)
    ladder = gr_y_ladder(I)
    assert ladder.codimension() == 1
    assert ladder.chain[-1] == P(1)
    assert transition_lambda(I, 6).values == {(0, 0): ONE}
    assert gauge_equivalent(theta1(I), p) is not None


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_transition_matches_build_lambda_m2(seed):
    p = random_point(ctx_of(2, 1, 3), seed % 2, (1, 2) if seed != 2 else (2, 1), seed=seed)
    I = build_ideal_My(p)
    b = 2 * p.N + 4
    assert transition_lambda(I, b).agrees(build_lambda(p, b))


def test_theta1_m3():
    p = random_point(ctx_of(3), 1, (1, 1, 0), seed=8)
    assert gauge_equivalent(theta1(build_ideal_My(p)), p) is not None


def test_gauge_invariance_of_ladder_and_class():
    p = random_point(ctx_of(2), 0, (2, 1), seed=9)
    g = Matrix([[Q(2), Q(1), ZERO], [Q(1), Q(1), ZERO], [ZERO, ZERO, Q(-3)]], 3)
    if p.offsets()[0] != 0:
        g = Matrix([[Q(-3), ZERO, ZERO], [ZERO, Q(2), Q(1)], [ZERO, Q(1), Q(1)]], 3)
    q = gauge_apply(p, g)
    I, J = build_ideal_My(p), build_ideal_My(q)
    assert gr_y_ladder(I) == gr_y_ladder(J)
    assert isomorphic_ideals(I, J)


def test_both_presentations_agree():
    p = random_point(ctx_of(2, 1, 3), 1, (1, 1), seed=10)
    assert isomorphic_ideals(build_ideal_My(p), build_ideal_Mx(p))


def test_left_unit_twist_is_isomorphic():
    p = random_point(ctx_of(1), 0, (2,), seed=11)
    I = build_ideal_Mx(p)
    J = FractionalIdeal(p.ctx, 0, [g.lmul_xpoly(P(2, 1)) for g in I.gens])
    assert isomorphic_ideals(I, J)


def test_different_eigenvalues_are_not_isomorphic():
    ctx = ctx_of(1)
    a = make_point(ctx, 0, (1,), [[[0]]], [[[0]]], [1], [1])
    b = make_point(ctx, 0, (1,), [[[1]]], [[[0]]], [1], [1])
    assert not isomorphic_ideals(build_ideal_My(a), build_ideal_My(b))


def test_ideal_json_round_trip():
    p = random_point(ctx_of(2, 1, 3), 0, (1, 2), seed=12)
    I = build_ideal_My(p)
    J = ideal_from_json(ideal_to_json(I))
    assert J.gens == I.gens
    assert isomorphic_ideals(I, J)
