import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from u3slopes.padic import (
    CycRing,
    NotAUnitError,
    NotDivisibleError,
    PrecisionError,
    Valuation,
    div_uniformizer,
    div_uniformizer_power,
    invert_unit,
    make_ring,
    residue,
    v3_int,
    valuation,
)

R1 = make_ring(1, 40)
R2 = make_ring(2, 40)


def elements(ring, unit=None):
    coeff = st.integers(min_value=-(3**12), max_value=3**12)
    s = st.lists(coeff, min_size=ring.degree, max_size=ring.degree).map(ring.element)
    if unit is True:
        s = s.filter(lambda z: residue(z) != 0)
    return s


def test_ring_shapes():
    assert R1.degree == 2 and R1.cyclotomic_polynomial() == [1, 1, 1]
    assert R2.degree == 6 and R2.cyclotomic_polynomial() == [1, 0, 0, 1, 0, 0, 1]
    with pytest.raises(ValueError):
        CycRing(0, 10)
    with pytest.raises(ValueError):
        CycRing(1, 1)


def test_pi_squared_over_three_is_a_unit():
    pi = R1.pi
    assert valuation(pi * pi) == 1
    assert residue(R1.divide(pi * pi, R1(3))) != 0
    for m in (1, 2, 3):
        R = make_ring(m, 20)
        u = R.divide(R.pi ** R.degree, R(3))
        assert residue(u) != 0


def test_basic_valuations():
    assert valuation(R1(3)) == 1
    assert valuation(R1.omega - 1) == Fraction(1, 2)
    assert valuation(R1.one) == 0
    assert valuation(R1(54)) == 3
    assert valuation(R2.pi) == Fraction(1, 6)


def test_valuation_of_zeta9_squared_minus_one_matches_norm():
    # v(z) = v_3(N(z)) / [Q(zeta_9):Q] with N(z) the resultant against Phi_9
    x = sympy.symbols("x")
    norm = sympy.resultant(x**2 - 1, x**6 + x**3 + 1, x)
    expected = Fraction(v3_int(int(norm)), 6)
    assert expected == Fraction(1, 6)
    assert valuation(R2.zeta_pow(2) - 1) == expected


def test_zero_reports_lower_bound():
    v = valuation(R1.zero)
    assert not v.exact and v.value == R1.N - 1
    assert v != R1.N - 1
    assert Valuation.at_least(3) < Valuation(4)


def test_div_uniformizer_examples():
    assert div_uniformizer(R1.pi) == R1.one
    w = div_uniformizer(R1(3))
    assert w * R1.pi == R1(3)
    assert w.prec == R1.N - 1
    with pytest.raises(NotDivisibleError):
        div_uniformizer(R1.one)


def test_bulk_division_matches_repeated_division():
    z = R2(3**3) * R2.pi**2
    a = div_uniformizer_power(z, 20)
    b = z
    for _ in range(20):
        b = div_uniformizer(b)
    assert a == b
    assert a.prec > b.prec


def test_precision_exhaustion():
    R = make_ring(1, 3)
    z = R.element([0], prec=0)
    with pytest.raises(PrecisionError):
        div_uniformizer(z)
    with pytest.raises(PrecisionError):
        residue(z)


def test_residue_examples():
    assert residue(R1.omega) == 1
    assert residue(R1(6)) == 0
    assert residue(1 - R1.omega) == 0


def test_invert_unit_examples():
    assert invert_unit(R1.one) == R1.one
    with pytest.raises(NotAUnitError):
        invert_unit(R1(3))


def test_minus_one_minus_two_omega_is_not_a_unit():
    # -1 - 2w squares to -3, so it has valuation 1/2; division by it is still exact
    z = -1 - 2 * R1.omega
    assert z * z == R1(-3)
    assert valuation(z) == Fraction(1, 2)
    with pytest.raises(NotAUnitError):
        invert_unit(z)
    q = R1.divide(R1(3) * R1.omega, z)
    assert q * z == R1(3) * R1.omega


def test_string_form():
    assert str(1 - R1.omega) == "1 - w"
    assert str(4 + 2 * R1.omega) == "4 + 2*w"
    assert str(R2.zeta_pow(4)) == "z^4"


def test_v3_factorial_bound():
    for n in range(1, 201):
        assert 2 * v3_int(math.factorial(n)) <= n - 1


@settings(max_examples=100, deadline=None)
@given(elements(R1), elements(R1))
def test_valuation_additive(z, w):
    vz, vw = valuation(z), valuation(w)
    if vz.exact and vw.exact:
        assert valuation(z * w).value == vz.value + vw.value


@settings(max_examples=50, deadline=None)
@given(elements(R2), elements(R2))
def test_residue_is_a_homomorphism(z, w):
    assert residue(z + w) == (residue(z) + residue(w)) % 3
    assert residue(z * w) == residue(z) * residue(w) % 3


@settings(max_examples=50, deadline=None)
@given(elements(R2))
def test_div_uniformizer_undoes_multiplication(z):
    assert div_uniformizer(R2.pi * z) == z


@settings(max_examples=50, deadline=None)
@given(elements(R2, unit=True))
def test_inverse_multiplies_back(z):
    assert z * invert_unit(z) == R2.one


def test_random_divisions_multiply_back():
    rng = random.Random(5)
    for _ in range(50):
        d = R2.random_element(rng) * R2.pi ** rng.randrange(0, 9)
        if not valuation(d).exact:
            continue
        z = R2.random_element(rng) * d
        q = R2.divide(z, d)
        assert q * d == z
