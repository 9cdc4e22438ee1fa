from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coxsigns.scalars import PHI, Golden, as_scalar, dot, reflect_vector, sign

SQRT5 = 5**0.5
fracs = st.fractions(min_value=-50, max_value=50, max_denominator=30)
goldens = st.builds(Golden, fracs, fracs)


def approx(x: Golden) -> float:
    return float(x.a) + float(x.b) * (1 + SQRT5) / 2


def test_phi_satisfies_its_minimal_polynomial():
    assert PHI * PHI == PHI + 1
    assert PHI * (PHI - 1) == 1
    assert 1 / PHI == PHI - 1


def test_norm_and_conjugate():
    assert PHI.norm() == -1
    assert PHI.conjugate() == 1 - PHI
    assert Golden(2, 3).norm() == (Golden(2, 3) * Golden(2, 3).conjugate()).a


def test_rational_values_collapse_to_fractions():
    assert as_scalar(Golden(3, 0)) == 3
    assert isinstance(as_scalar(Golden(Fraction(1, 2), 0)), Fraction)
    assert isinstance(as_scalar(PHI * 2), Golden)
    assert hash(Golden(5)) == hash(Fraction(5))


def test_str():
    assert str(1 + PHI) == "1+φ"


@given(goldens, goldens, goldens)
def test_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == 0


@given(goldens, goldens)
def test_division_inverts_multiplication(x, y):
    if y == 0:
        with pytest.raises(ZeroDivisionError):
            x / y
    else:
        assert (x / y) * y == x


@given(goldens)
def test_sign_matches_floating_point_away_from_zero(x):
    f = approx(x)
    if abs(f) > 1e-9:
        assert sign(x) == (1 if f > 0 else -1)
    if x == 0:
        assert sign(x) == 0


@given(goldens, goldens)
def test_order_is_consistent_with_sign(x, y):
    assert (x < y) == (sign(y - x) > 0)


def test_sign_near_cancellation():
    # 1 + phi - phi^2 is exactly 0, and the golden ratio conjugate is negative
    assert sign(1 + PHI - PHI * PHI) == 0
    assert sign(1 - PHI) == -1
    # consecutive Fibonacci numbers: F(k+1) - phi F(k) = psi^k is tiny
    getcontext().prec = 60
    phi = (1 + Decimal(5).sqrt()) / 2
    a, b = 1, 1
    for _ in range(40):
        a, b = b, a + b
        for x in (Golden(-b, a), Golden(b, -a)):
            want = -b + a * phi if x.b > 0 else b - a * phi
            assert sign(x) == (1 if want > 0 else -1)


def test_reflection_is_an_involution_and_negates_the_root():
    gram = [[2, -PHI], [-PHI, 2]]
    a = (1, 0)
    v = (Fraction(3), PHI)
    assert reflect_vector(reflect_vector(v, a, gram), a, gram) == tuple(as_scalar(x) for x in v)
    assert reflect_vector(a, a, gram) == (-1, 0)
    assert dot(a, a, gram) == 2
    with pytest.raises(ZeroDivisionError):
        reflect_vector(v, (0, 0), gram)
