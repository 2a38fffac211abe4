import itertools

import pytest

from kleinian.crossed_algebra import AlgebraContext
from kleinian.errors import NotDimOneFamilyError
from kleinian.ideals import build_ideal_My, unit_ideal
from kleinian.ktheory import KClass, class_equation, class_of_ideal, compose, decompose
from kleinian.quiver import gauge_apply, random_point
from kleinian.scalars import ONE, ZERO, Matrix, Q


def ctx_of(m):
    return AlgebraContext(m, (ONE,) * m)


def test_class_equation_examples():
    assert class_equation((7,)) == KClass((0,))
    assert class_equation((1, 0)) == KClass((2, -2))
    assert class_equation((1, 1, 1)) == KClass((0, 0, 0))


def test_class_equation_is_multiplication():
    for m in (2, 3, 4):
        v = KClass(tuple(range(1, m + 1)))
        assert class_equation(v) == v * 2 * KClass.delta(m, 0) - v * KClass.L(m)


def test_decompose_examples():
    assert decompose(KClass.delta(3, 2)) == (2, (0, 0, 0))
    assert decompose((-1, 2)) == (0, (1, 0))
    assert decompose((1,)) == (0, ())


def _brute(p, limit=5):
    m = p.m
    for n in range(m):
        for v in itertools.product(range(limit + 1), repeat=m):
            if min(v) == 0 and compose(m, n, v) == p:
                return n, v
    return None


@pytest.mark.parametrize("m", [2, 3, 4])
def test_decompose_matches_brute_force(m):
    for n in range(m):
        for v in itertools.product(range(3), repeat=m):
            if min(v):
                continue
            p = compose(m, n, v)
            assert decompose(p) == _brute(p) == (n, v)


def test_decompose_rejects_bad_classes():
    with pytest.raises(NotDimOneFamilyError):
        decompose((1, 1))
    with pytest.raises(NotDimOneFamilyError):
        decompose((1, -1, 0, 0))


def test_unit_ideal_class():
    for m in (1, 2, 3):
        for n in range(m):
            assert class_of_ideal(unit_ideal(ctx_of(m), n)) == KClass.delta(m, n)


@pytest.mark.parametrize("m,n,dims", [(2, 0, (1, 1)), (2, 1, (2, 1)), (3, 0, (1, 1, 1)), (3, 2, (1, 2, 1))])
def test_class_of_omega_recovers_dims(m, n, dims):
    p = random_point(ctx_of(m), n, dims, seed=2)
    got_n, v = decompose(class_of_ideal(build_ideal_My(p)))
    low = min(dims)
    assert (got_n, v) == (n, tuple(d - low for d in dims))


def test_gauge_equivalent_points_share_class():
    p = random_point(ctx_of(2), 0, (2, 1), seed=3)
    g = Matrix([[Q(2), Q(1), ZERO], [Q(1), Q(1), ZERO], [ZERO, ZERO, Q(5)]], 3)
    if p.offsets()[0] != 0:
        g = Matrix([[Q(5), ZERO, ZERO], [ZERO, Q(2), Q(1)], [ZERO, Q(1), Q(1)]], 3)
    q = gauge_apply(p, g)
    assert class_of_ideal(build_ideal_My(p)) == class_of_ideal(build_ideal_My(q))
