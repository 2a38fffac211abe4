import random
from fractions import Fraction

import pytest

from kleinian import scalars
from kleinian.errors import DivisionByZero
from kleinian.scalars import (ONE, ZERO, CycScalar, Matrix, Poly, Q, RatFunc, poly_part, qq, scalar_from_json,
                              scalar_to_json, sector_project, sector_project_oracle, zeta)


def P(*c):
    return Poly([Q(x) for x in c])


def test_backend_is_rational_and_interoperates_with_fraction():
    assert scalars.BACKEND in ("gmpy2", "fractions")
    assert Q(1, 3) == Fraction(1, 3)
    assert hash(Q(2, 4)) == hash(Fraction(1, 2))


def test_zeta_relations():
    assert zeta(4) * zeta(4) == Q(-1)
    assert zeta(2) == Q(-1)
    z = zeta(3)
    assert (1 + z) * (1 + z * z) == ONE
    assert zeta(5) ** 5 == ONE


def test_cyclotomic_inverse_round_trip():
    rng = random.Random(3)
    for m in (3, 4, 5, 6):
        for _ in range(5):
            a = CycScalar(m, [Q(rng.randint(-4, 4)) for _ in range(m)])._collapse()
            if not a:
                continue
            assert a * scalars.inv(a) == ONE


def test_zero_inverse_raises():
    with pytest.raises(DivisionByZero):
        scalars.inv(ZERO)
    with pytest.raises(DivisionByZero):
        RatFunc(P(1), P(0))


@pytest.mark.parametrize("text", ["3/4", "-7", "0"])
def test_scalar_json_round_trip(text):
    a = qq(text)
    assert scalar_from_json(scalar_to_json(a)) == a


def test_sector_project_parity():
    f = RatFunc(P(0, 0, 1, 1))
    assert sector_project(f, 0, 2) == RatFunc(P(0, 0, 1))


def test_sector_project_geometric_series():
    f = RatFunc(P(1), P(1, -1))
    got = sector_project(f, 1, 2)
    assert got == RatFunc(P(0, 1), P(1, 0, -1))
    # first ten Taylor coefficients are those of the odd part of 1/(1-x)
    num, den = got.num, got.den
    series = [ZERO] * 10
    rem = list(num.c) + [ZERO] * 10
    for k in range(10):
        c = rem[k] / den.c[0]
        series[k] = c
        for j, d in enumerate(den.c):
            if k + j < len(rem):
                rem[k + j] -= c * d
    assert series == [Q(k % 2) for k in range(10)]


def test_sector_project_m1_is_identity():
    f = RatFunc(P(2, 1), P(-3, 1))
    assert sector_project(f, 0, 1) == f


def test_sector_project_matches_root_of_unity_filter():
    f = RatFunc(P(1, 2, 0, 1), P(1, 1, 1))
    for m in (2, 3, 4):
        for r in range(m):
            assert sector_project(f, r, m) == sector_project_oracle(f, r, m)


def test_poly_part_examples():
    assert poly_part(RatFunc(P(1, 0, 1), P(0, 1))) == (P(0, 1), RatFunc(P(1), P(0, 1)))
    assert poly_part(RatFunc(P(1), P(-3, 1))) == (Poly(), RatFunc(P(1), P(-3, 1)))
    assert poly_part(RatFunc(P(0, 0, 0, 1), P(-1, 1))) == (P(1, 1, 1), RatFunc(P(1), P(-1, 1)))


def test_gcd_is_monic_and_exact():
    a = P(-1, 0, 1)        # x^2 - 1
    b = P(1, 2, 1)         # (x + 1)^2
    assert a.gcd(b) == P(1, 1)
    assert a.gcd(Poly()) == P(-1, 0, 1)
    big = P(3, 1) ** 4 * P(Q(1, 7), 5)
    assert big.gcd(P(3, 1) ** 2 * P(2, 1)) == P(9, 6, 1)


def test_ratfunc_arithmetic_reduces():
    f = RatFunc(P(1), P(0, 1))
    g = RatFunc(P(1), P(1, 1))
    s = f + g
    assert s == RatFunc(P(1, 2), P(0, 1, 1))
    assert f * RatFunc(P(0, 1)) == RatFunc(P(1))
    assert (s - g) == f


def test_laurent_expansion_at_infinity():
    f = RatFunc(P(1), P(-2, 1))          # 1/(x-2) = sum 2^k x^{-k-1}
    exp = f.laurent_inf(-5)
    assert [exp.get(-k - 1, ZERO) for k in range(5)] == [Q(2) ** k for k in range(5)]


def test_identity_matrix_facts():
    I2 = Matrix.identity(2)
    assert I2.det() == ONE
    assert I2.adjugate() == I2


def test_nilpotent_charpoly_and_rank():
    A = Matrix([[ZERO, ONE], [ZERO, ZERO]], 2)
    assert A.charpoly() == P(0, 0, 1)
    assert A.rank() == 1


def test_adjugate_identity_on_random_matrices():
    rng = random.Random(11)
    for _ in range(5):
        A = Matrix([[Q(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)], 3)
        assert A @ A.adjugate() == Matrix.identity(3).scale(A.det())


def test_solve_and_nullspace():
    A = Matrix([[Q(1), Q(2), Q(3)], [Q(2), Q(4), Q(6)]], 3)
    ns = A.nullspace()
    assert len(ns) == 2
    for v in ns:
        assert (A @ Matrix.column(v)).is_zero()
    b = Matrix.column([Q(1), Q(2)])
    x = A.solve(b)
    assert A @ x == b
    assert A.solve(Matrix.column([Q(1), Q(3)])) is None
