import pytest

from kleinian.crossed_algebra import AlgebraContext
from kleinian.dgmodel import (DGModel, L0Element, LambdaTable, build_lambda, charpoly_member, check_axioms, dL_apply,
                              h0_membership, l0_act, nu_apply, theta2)
from kleinian.errors import BoundError, GenericityWarning
from kleinian.quiver import gauge_equivalent, make_point, random_point, zero_point
from kleinian.scalars import ONE, ZERO, Matrix, Q


def ctx_of(m, *tau):
    return AlgebraContext(m, tuple(Q(t) for t in tau) if tau else (ONE,) * m)


B = L0Element.basis


def test_lambda_of_zero_point():
    lam = build_lambda(zero_point(), 6)
    assert lam.values == {(0, 0): ONE}


def test_lambda_framing_only():
    p = make_point(ctx_of(2, 5, 1), 0, (1, 0), [[], []], [[], []], [1], [5])
    lam = build_lambda(p, 5)
    assert lam.values == {(0, 0): Q(5)}


def test_lambda_support_and_direct_formula():
    p = random_point(ctx_of(3, 1, 2, 4), 1, (1, 2, 1), seed=3)
    lam = build_lambda(p, 6)
    assert lam(1, 2) == ZERO
    assert lam.support_violations() == []
    for k in range(4):
        for l in range(4):
            v = p.ibar
            for _ in range(k):
                v = p.Xbar @ v
            for _ in range(l):
                v = p.Ybar @ v
            assert lam(k, l) == (p.jbar @ v)[0, 0]


def test_lambda_bound_and_json():
    lam = build_lambda(random_point(ctx_of(2), 0, (1, 1), seed=2), 4)
    with pytest.raises(BoundError):
        lam(5, 0)
    assert LambdaTable.from_json(lam.to_json()) == lam
    assert lam.agrees(lam.restrict(2))


def test_l0_action_examples():
    lam = build_lambda(zero_point(), 6)
    assert l0_act(B(0, 1), "x", lam) == B(1, 1)
    assert l0_act(B(3, 0), "y", lam) == B(3, 1)
    assert l0_act(B(0, 0), ("e", 0), lam) == B(0, 0)
    ctx = ctx_of(2)
    lam2 = build_lambda(random_point(ctx, 0, (1, 1), seed=1), 6)
    assert l0_act(B(0, 0), ("e", 0), lam2) == B(0, 0)
    assert not l0_act(B(0, 0), ("e", 1), lam2)
    with pytest.raises(ValueError):
        l0_act(B(0, 0), "z", lam2)


def test_dL_examples():
    p = zero_point()
    assert dL_apply(B(0, 0), p) == p.ibar
    assert dL_apply(B(1, 1), p).is_zero()


def test_dL_intertwines_x():
    p = random_point(ctx_of(2, 1, 3), 1, (2, 1), seed=5)
    model = DGModel(p, build_lambda(p, 14))
    for k in range(6):
        for l in range(6):
            v = B(k, l)
            assert model.dL(l0_act(v, "x", model.lam)) == p.Xbar @ model.dL(v)


def test_nu_examples():
    model = DGModel(zero_point())
    assert nu_apply(model.point.ibar, model) == B(0, 0)
    assert not nu_apply(Matrix.zeros(1, 1), model)


def test_nu_vanishes_when_tau_is_zero():
    p = make_point(AlgebraContext(1, (Q(0),)), 0, (1,), [[[2]]], [[[3]]], [1], [0])
    model = DGModel(p)
    assert not nu_apply(p.ibar, model)
    with pytest.warns(GenericityWarning):
        assert check_axioms(model) == []


@pytest.mark.parametrize("m,dims,seed", [(1, (2,), 1), (2, (1, 1), 2), (3, (1, 1, 1), 3)])
def test_axioms_hold_for_valid_points(m, dims, seed):
    p = random_point(ctx_of(m), 0, dims, seed=seed)
    assert check_axioms(DGModel(p)) == []


def test_axioms_detect_zero_framing():
    p = random_point(ctx_of(1), 0, (2,), seed=4)
    lam = build_lambda(p)
    bad = DGModel(p.replace(ibar=Matrix.zeros(2, 1)), lam, check=False)
    assert any(r.startswith("cyclicity") for r in check_axioms(bad))


def test_axioms_detect_forged_lambda():
    p = zero_point()
    lam = build_lambda(p, 6)
    forged = LambdaTable(lam.ctx, lam.n, {(0, 0): Q(2)}, lam.bound)
    report = check_axioms(DGModel(p, forged))
    assert any("(0,0)" in r for r in report)


def test_h0_membership():
    p = random_point(ctx_of(1), 0, (2,), seed=6)
    model = DGModel(p, build_lambda(p, 8))
    assert h0_membership(charpoly_member(p, "x"), model)
    assert h0_membership(charpoly_member(p, "y"), model)
    assert not h0_membership(B(0, 0), model)
    z = DGModel(zero_point())
    assert h0_membership(B(1, 0), z)
    with pytest.raises(BoundError):
        h0_membership(B(100, 0), z)


@pytest.mark.parametrize("m,n,dims", [(1, 0, (2,)), (2, 1, (1, 2)), (3, 0, (2, 1, 1))])
def test_theta2_recovers_point(m, n, dims):
    p = random_point(ctx_of(m), n, dims, seed=7)
    q = theta2(build_lambda(p, 2 * p.N + 4))
    assert q.dims == p.dims
    assert gauge_equivalent(p, q) is not None
