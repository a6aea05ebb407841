import random
from fractions import Fraction as Fr

import pytest

from widthcert.exactnum import QSqrt2, qs2_sign
from widthcert.mvpoly import (
    MvPoly,
    UniPoly,
    cauchy_companion,
    companion_root_enclosure,
    graded_lex_key,
    positive_root_lower_bound,
)


def x(i, n=3):
    return MvPoly.variable(i, n)


def const(c, n=3):
    return MvPoly.constant(c, n)


# -- ring operations -------------------------------------------------------------


def test_conjugate_factorization():
    p = (x(0) + const(QSqrt2(0, 1))) * (x(0) - const(QSqrt2(0, 1)))
    assert p == x(0) * x(0) - const(2)


def test_additive_identity():
    p = x(0) * x(1) + const(5)
    assert p + MvPoly.zero(3) == p


def test_binomial_cube():
    p = (x(0) + x(1)) ** 3
    assert len(p.terms) == 4
    assert p.coefficient((3, 0, 0)) == QSqrt2(1)
    assert p.coefficient((2, 1, 0)) == QSqrt2(3)
    assert p.coefficient((1, 2, 0)) == QSqrt2(3)
    assert p.coefficient((0, 3, 0)) == QSqrt2(1)


def test_variable_count_mismatch_raises():
    with pytest.raises(ValueError):
        x(0, 3) + x(0, 4)


def _random_poly(rng, nvars=4, max_degree=3, terms=6):
    out = {}
    for _ in range(terms):
        m = [0] * nvars
        for _ in range(rng.randint(0, max_degree)):
            m[rng.randrange(nvars)] += 1
        out[tuple(m)] = QSqrt2(Fr(rng.randint(-9, 9), rng.randint(1, 4)),
                               Fr(rng.randint(-9, 9), rng.randint(1, 4)))
    return MvPoly(nvars, out)


def _random_point(rng, nvars=4):
    return [QSqrt2(Fr(rng.randint(-3, 3), rng.randint(1, 3)),
                   Fr(rng.randint(-2, 2), rng.randint(1, 3)))
            for _ in range(nvars)]


def test_graded_parts_sum_to_poly():
    rng = random.Random(7)
    for _ in range(20):
        p = _random_poly(rng)
        total = MvPoly.zero(p.nvars)
        for d in range(p.degree() + 1):
            total = total + p.graded_part(d)
        assert total == p


def test_graded_part_of_missing_degree_is_zero():
    p = x(0) * x(0) + x(0) + const(1)
    assert p.graded_part(3) == MvPoly.zero(3)


# -- calculus ------------------------------------------------------------------------


def test_gradient_of_product_at_zero():
    p = x(0) * x(1)
    assert p.gradient_at_zero() == [QSqrt2(0)] * 3


def test_hessian_of_quadratic_is_constant():
    p = x(0) * x(0) + x(0) * x(1)
    h = p.hessian()
    assert h[0][0] == const(2)
    assert h[0][1] == const(1)
    assert h[1][0] == const(1)
    assert h[1][1] == MvPoly.zero(3)


def _fd_gradient(p, point, i, h):
    # five-point central difference: exact for polynomials of degree <= 4
    def shift(k):
        q = list(point)
        q[i] = q[i] + QSqrt2.coerce(h) * k
        return q

    num = (-p.evaluate(shift(2)) + p.evaluate(shift(1)) * 8
           - p.evaluate(shift(-1)) * 8 + p.evaluate(shift(-2)))
    return num / (QSqrt2.coerce(h) * 12)


def test_gradient_matches_finite_differences_exactly():
    rng = random.Random(11)
    for _ in range(10):
        p = _random_poly(rng, max_degree=3)
        point = _random_point(rng)
        grad = p.gradient()
        i = rng.randrange(p.nvars)
        fd = _fd_gradient(p, point, i, Fr(1, 7))
        assert fd == grad[i].evaluate(point)


def test_hessian_matches_finite_differences_exactly():
    rng = random.Random(13)
    for _ in range(6):
        p = _random_poly(rng, max_degree=3)
        point = _random_point(rng)
        hess = p.hessian()
        i = rng.randrange(p.nvars)
        j = rng.randrange(p.nvars)
        fd = _fd_gradient(p.partial(j), point, i, Fr(1, 5))
        assert fd == hess[j][i].evaluate(point)
        assert hess[i][j] == hess[j][i]


# -- substitution -----------------------------------------------------------------------


def test_substitute_identity():
    p = x(0)
    eye = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    assert p.substitute_linear(eye) == p


def test_substitute_scaling():
    p = x(0) * x(0)
    two = [[2 if i == j else 0 for j in range(3)] for i in range(3)]
    assert p.substitute_linear(two) == p.scale(4)


def test_substitute_round_trip():
    from widthcert.exactlinalg import QMatrix, inverse_field

    rng = random.Random(17)
    entries = [[QSqrt2(rng.randint(-2, 2), rng.randint(-1, 1)) for _ in range(4)]
               for _ in range(4)]
    entries[0][0] = entries[0][0] + QSqrt2(3)  # push away from singular
    entries[1][1] = entries[1][1] + QSqrt2(3)
    entries[2][2] = entries[2][2] + QSqrt2(3)
    entries[3][3] = entries[3][3] + QSqrt2(3)
    A = QMatrix(entries)
    Ainv = inverse_field(A)
    for _ in range(10):
        p = _random_poly(rng)
        assert p.substitute_linear(A.rows).substitute_linear(Ainv.rows) == p


def test_substitute_degree_does_not_increase():
    rng = random.Random(19)
    p = _random_poly(rng)
    A = [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]]
    assert p.substitute_linear(A).degree() <= p.degree()


# -- serialization ------------------------------------------------------------------------


def test_serialize_round_trip():
    rng = random.Random(23)
    for _ in range(10):
        p = _random_poly(rng)
        assert MvPoly.deserialize(p.serialize()) == p


def test_graded_lex_order_on_serialization():
    p = x(0) + x(1) * x(1) + const(3)
    lines = p.serialize().strip().splitlines()[1:]
    monomials = [tuple(int(t) for t in ln.split(":")[0].split()) for ln in lines]
    assert monomials == sorted(monomials, key=graded_lex_key)


# -- companion root bound ---------------------------------------------------------------------


def test_companion_linear_example():
    f = x(0) + x(1) - const(1)
    f0 = cauchy_companion(f)
    assert f0 == UniPoly([QSqrt2(-1), QSqrt2(2)])


def test_companion_with_sqrt2_coefficients():
    f = (x(0) * x(1)).scale(3) - x(0).scale(QSqrt2(0, 1)) - const(1)
    f0 = cauchy_companion(f)
    assert f0 == UniPoly([QSqrt2(-1), QSqrt2(0, 1), QSqrt2(3)])


def test_companion_rejects_zero_constant():
    with pytest.raises(ValueError):
        cauchy_companion(x(0))


def test_root_bound_linear():
    f0 = UniPoly([QSqrt2(-1), QSqrt2(2)])
    r = positive_root_lower_bound(f0, Fr(1, 10**7))
    assert Fr("0.4999999") <= r < Fr(1, 2)


def test_root_bound_quadratic_against_closed_form():
    # x^2 + 3x - 2 has positive root (-3 + sqrt(17))/2
    f0 = UniPoly([QSqrt2(-2), QSqrt2(3), QSqrt2(1)])
    lo, hi = companion_root_enclosure(f0, Fr(1, 10**9))
    # closed-form check: the root r satisfies r^2 + 3r - 2 = 0
    assert (lo * lo + 3 * lo - 2) < 0 <= (hi * hi + 3 * hi - 2)
    assert Fr("0.5615527") < lo < Fr("0.5615529")


def test_root_bound_rejects_wrong_shape():
    with pytest.raises(ValueError):
        positive_root_lower_bound(UniPoly([QSqrt2(1), QSqrt2(1)]))  # positive constant
    with pytest.raises(ValueError):
        positive_root_lower_bound(UniPoly([QSqrt2(-1), QSqrt2(-1), QSqrt2(1)]))


def test_root_bound_bracket_grows_when_needed():
    # root is 100: the seeded upper bracket is too small and must be grown
    f0 = UniPoly([QSqrt2(-100), QSqrt2(1)])
    r = positive_root_lower_bound(f0, Fr(1, 10**4))
    assert Fr(100) - Fr(1, 10**4) <= r < Fr(100)


def test_sign_constancy_inside_certified_ball():
    rng = random.Random(29)
    checked = 0
    for _ in range(40):
        f = _random_poly(rng, nvars=3, max_degree=3, terms=5)
        if not f.constant_term():
            continue
        r = positive_root_lower_bound(cauchy_companion(f), Fr(1, 10**6))
        base_sign = qs2_sign(f.constant_term())
        for _ in range(40):
            z = [QSqrt2(Fr(rng.randint(-999, 999), 1000) * r * Fr(99, 100)) for _ in range(3)]
            assert qs2_sign(f.evaluate(z)) == base_sign
            checked += 1
    assert checked > 500
