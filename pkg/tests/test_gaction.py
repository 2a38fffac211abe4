import pytest

from kleinian.crossed_algebra import AlgebraContext, word_x, word_y
from kleinian.errors import ParseError, ValidationError
from kleinian.gaction import (Automorphism, Move, Scale, ShearX, ShearY, act_on_ideal, act_on_point, equivariance_check,
                              identity, invert, validate_automorphism)
from kleinian.ideals import build_ideal_My, isomorphic_ideals, unit_ideal
from kleinian.ktheory import class_of_ideal
from kleinian.quiver import random_point, zero_point
from kleinian.scalars import ONE, Poly, Q


def ctx_of(m, *tau):
    return AlgebraContext(m, tuple(Q(t) for t in tau) if tau else (ONE,) * m)


def mono(k, c=1):
    return Poly.monomial(k, Q(c))


@pytest.mark.parametrize("m,k,valid", [(1, 2, True), (3, 2, True), (3, 1, False), (2, 1, True), (2, 2, False)])
def test_validate_exponents(m, k, valid):
    assert validate_automorphism(ShearX(mono(k)), m)["valid"] is valid
    assert validate_automorphism(ShearY(mono(k)), m)["valid"] is valid


def test_zero_scale_is_invalid():
    assert not validate_automorphism(Scale(0), 1)["valid"]
    assert validate_automorphism(Scale(3) @ ShearX(mono(1)), 2)["valid"]


def test_inverses():
    q = mono(2, 5)
    assert invert(ShearX(q)) == ShearX(-q)
    assert invert(Scale(4)) == Scale(Q(1, 4))
    sigma = ShearX(mono(1, 2)) @ ShearY(mono(1, -3)) @ Scale(2)
    img = (invert(sigma) @ sigma).images()
    assert img == {"X": word_x(), "Y": word_y()}
    img = (sigma @ invert(sigma)).images()
    assert img == {"X": word_x(), "Y": word_y()}


def test_apply_preserves_commutator():
    ctx = ctx_of(2, 1, 3)
    sigma = ShearX(mono(1, 2)) @ Scale(-3) @ ShearY(mono(3))
    x, y = sigma.apply(ctx.x()), sigma.apply(ctx.y())
    assert x * y - y * x == ctx.tau_elem()
    assert invert(sigma).apply(x) == ctx.x()


def test_composition_order():
    ctx = ctx_of(1)
    # (ShearX(y) o ShearY(x))(x) = ShearX(y)(x) = x + y
    sigma = ShearX(mono(1)) @ ShearY(mono(1))
    assert sigma.apply(ctx.x()) == ctx.x() + ctx.y()
    assert sigma.apply(ctx.y()) == ctx.y() + ctx.x() + ctx.y()


def test_json_round_trip():
    ctx = ctx_of(2)
    sigma = Automorphism.from_json([{"shearX": "-2*y"}, {"scale": "3"}, {"shearY": "x^3 + 1/2 x"}], ctx)
    assert sigma == ShearX(mono(1, -2)) @ Scale(3) @ ShearY(Poly([Q(0), Q(1, 2), Q(0), Q(1)]))
    assert Automorphism.from_json(sigma.to_json(), ctx) == sigma
    with pytest.raises(ParseError):
        Automorphism.from_json([{"twist": "y"}], ctx)
    with pytest.raises(ParseError):
        Automorphism.from_json([{"shearX": "x"}], ctx)


def test_act_on_point_identity_and_zero_point():
    p = random_point(ctx_of(2), 0, (1, 1), seed=1)
    assert act_on_point(identity(), p) == p
    z = zero_point()
    assert act_on_point(ShearY(mono(1)), z) == z


def test_act_on_point_shear_formula():
    p = random_point(ctx_of(1), 0, (2,), seed=2)
    q = act_on_point(ShearY(mono(1, 2)), p)
    assert q.Xbar == p.Xbar
    assert q.Ybar == p.Ybar - p.Xbar.scale(Q(2))


class _Stretch(Move):
    """x -> 2x with y fixed; does not preserve xy - yx."""

    def images(self):
        return {"X": word_x() * Q(2), "Y": word_y()}

    def inverse(self):
        return self


def test_validate_and_act_reject_broken_sigma():
    sigma = Automorphism((_Stretch("scale", c=Q(1)),))
    report = validate_automorphism(sigma, 1)
    assert not report["valid"] and "xy - yx" in report["errors"][0]
    with pytest.raises(ValidationError):
        act_on_point(sigma, random_point(ctx_of(1), 0, (2,), seed=3))


def test_act_on_ideal_identity_and_unit():
    p = random_point(ctx_of(2, 1, 3), 1, (1, 2), seed=4)
    I = build_ideal_My(p)
    assert isomorphic_ideals(act_on_ideal(identity(), I), I)
    U = unit_ideal(ctx_of(2), 1)
    assert isomorphic_ideals(act_on_ideal(ShearX(mono(1, 3)), U), U)


def test_act_on_ideal_keeps_class():
    p = random_point(ctx_of(3), 0, (1, 1, 1), seed=5)
    I = build_ideal_My(p)
    for sigma in (ShearX(mono(2)), ShearY(mono(2, -1)), Scale(2)):
        assert class_of_ideal(act_on_ideal(sigma, I)) == class_of_ideal(I)


def test_equivariance():
    assert equivariance_check(identity(), random_point(ctx_of(2), 0, (1, 1), seed=6))
    assert equivariance_check(ShearX(mono(1)), zero_point())
    p = random_point(ctx_of(2, 1, 3), 0, (1, 1), seed=7)
    for c in (1, -2, Q(1, 3)):
        assert equivariance_check(ShearX(mono(1, c)), p)
    assert equivariance_check(Scale(-2) @ ShearY(mono(1, 2)), p)
