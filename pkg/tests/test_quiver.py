import pytest

from kleinian.crossed_algebra import AlgebraContext
from kleinian.errors import GaugeError, GenerationError, ShapeError, StabilityError, ValidationError
from kleinian.quiver import (QuiverPoint, cartan_dimension, check_stability, expected_dimension, gauge_apply,
                             gauge_equivalent, make_point, pack_cyclic, random_point, tangent_dimension,
                             unpack_cyclic, validate_point, zero_point)
from kleinian.scalars import ONE, ZERO, Matrix, Q


def ctx_of(m, *tau):
    return AlgebraContext(m, tuple(Q(t) for t in tau) if tau else (ONE,) * m)


def test_zero_point_is_valid_and_stable():
    p = zero_point()
    assert validate_point(p) == []
    assert check_stability(p)


def test_framing_only_point():
    p = make_point(ctx_of(2, 5, 1), 0, (1, 0), [[], []], [[], []], [1], [5])
    assert validate_point(p) == []


def test_broken_moment_map_is_reported():
    p = make_point(ctx_of(1), 0, (1,), [[[0]]], [[[0]]], [0], [0], check=False)
    assert validate_point(p)
    assert not check_stability(p)
    with pytest.raises(ValidationError):
        make_point(ctx_of(1), 0, (1,), [[[0]]], [[[0]]], [0], [0])


def test_block_structure_violation_is_reported():
    p = random_point(ctx_of(2), 0, (1, 1), seed=3)
    X = [list(r) for r in p.Xbar.rows]
    X[0][0] = ONE
    q = p.replace(Xbar=Matrix(X, 2))
    assert validate_point(q)


def test_shape_errors():
    ctx = ctx_of(1)
    with pytest.raises(ShapeError):
        QuiverPoint(ctx, 0, (1, 1), Matrix.zeros(2, 2), Matrix.zeros(2, 2), Matrix.zeros(2, 1), Matrix.zeros(1, 2))
    with pytest.raises(ShapeError):
        QuiverPoint(ctx, 0, (2,), Matrix.zeros(2, 2), Matrix.zeros(2, 2), Matrix.zeros(1, 1), Matrix.zeros(1, 2))


def test_gauge_identity_and_recovery():
    p = random_point(ctx_of(2, 1, 3), 1, (2, 1), seed=4)
    assert gauge_apply(p, Matrix.identity(3)) == p
    g0 = Matrix([[Q(1), Q(2), ZERO], [Q(1), Q(3), ZERO], [ZERO, ZERO, Q(-2)]], 3)
    if p.offsets()[1] == 0:
        g0 = Matrix([[Q(-2), ZERO, ZERO], [ZERO, Q(1), Q(2)], [ZERO, Q(1), Q(3)]], 3)
    q = gauge_apply(p, g0)
    g = gauge_equivalent(p, q)
    assert g is not None
    assert gauge_apply(p, g) == q


def test_non_graded_gauge_is_rejected():
    p = random_point(ctx_of(2), 0, (1, 1), seed=5)
    with pytest.raises(GaugeError):
        gauge_apply(p, Matrix([[ONE, ONE], [ZERO, ONE]], 2))
    with pytest.raises(GaugeError):
        gauge_apply(p, Matrix([[ONE, ZERO], [ZERO, ZERO]], 2))


def test_inequivalent_points():
    ctx = ctx_of(1)
    p = make_point(ctx, 0, (1,), [[[0]]], [[[0]]], [1], [1])
    q = make_point(ctx, 0, (1,), [[[1]]], [[[0]]], [1], [1])
    assert gauge_equivalent(p, q) is None


def test_gauge_equivalent_needs_stability():
    ctx = ctx_of(1)
    p = make_point(ctx, 0, (1,), [[[0]]], [[[0]]], [0], [0], check=False)
    with pytest.raises(StabilityError):
        gauge_equivalent(p, p)


def test_pack_layout_m2():
    ctx = ctx_of(2)
    p = random_point(ctx, 0, (1, 1), seed=6)
    c = unpack_cyclic(p)
    assert p.Xbar == Matrix([[ZERO, c.X[0][0, 0]], [c.X[1][0, 0], ZERO]], 2)


def test_pack_m1_is_reshaping():
    p = random_point(ctx_of(1), 0, (2,), seed=7)
    c = unpack_cyclic(p)
    assert c.X[0] == p.Xbar and c.Y[0] == p.Ybar


def test_pack_round_trip_m3():
    p = random_point(ctx_of(3), 2, (1, 1, 1), seed=8)
    assert pack_cyclic(unpack_cyclic(p)) == p


@pytest.mark.parametrize("m,n,dims,expected", [
    (2, 0, (1, 0), 0),
    (3, 0, (1, 1, 1), 2),
    (2, 0, (0, 1), -2),
    (1, 0, (3,), 6),
])
def test_expected_dimension(m, n, dims, expected):
    assert expected_dimension(m, n, dims) == expected


def test_cartan_dimension_agrees_for_small_m():
    for dims in [(1, 0), (1, 1), (2, 1)]:
        assert cartan_dimension(2, 0, dims) == expected_dimension(2, 0, dims)


def test_tangent_dimensions():
    assert tangent_dimension(make_point(ctx_of(2), 0, (1, 0), [[], []], [[], []], [1], [1])) == 0
    assert tangent_dimension(zero_point()) == 2
    for dims in [(1, 1), (2, 1)]:
        p = random_point(ctx_of(2), 0, dims, seed=9)
        assert tangent_dimension(p) == expected_dimension(2, 0, dims)


def test_random_point_m1():
    p = random_point(ctx_of(1), 0, (1,), seed=123)
    assert p.ibar[0, 0] * p.jbar[0, 0] == ONE
    assert validate_point(p) == []


def test_random_point_empty_stratum():
    with pytest.raises(GenerationError):
        random_point(ctx_of(2), 0, (0, 1), seed=1)


def test_random_point_deterministic():
    a = random_point(ctx_of(3, 1, 2, 3), 1, (1, 2, 1), seed=42)
    b = random_point(ctx_of(3, 1, 2, 3), 1, (1, 2, 1), seed=42)
    assert a == b


def test_point_json_round_trip():
    p = random_point(ctx_of(2, 1, 3), 1, (1, 2), seed=10)
    assert QuiverPoint.from_json(p.to_json()) == p
