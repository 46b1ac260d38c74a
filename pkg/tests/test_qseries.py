"""Tests for truncated q-series, characters and twisted characters."""

from fractions import Fraction

import pytest

from voalab import (
    AutGroup,
    IntSeries,
    Sublattice,
    burnside_orbifold_dims,
    inner,
    sigma,
    theta,
    twisted_character,
    voa_character,
)
from voalab.qseries import euler_power, plus_power, traces


def test_a1_character(a1):
    """Test the character 1 + 3q + 4q^2 + 7q^3 of V_A1."""
    assert voa_character(a1, None, 3).integer_coefficients() == [1, 3, 4, 7]


def test_character_matches_basis(a1x3, v_a1):
    """Test that the character of A1^3 counts the Fock basis."""
    assert voa_character(a1x3, None, 2).integer_coefficients() == [1, 9, 39]
    assert voa_character(v_a1.lattice, None, 4).integer_coefficients() == v_a1.basis.dims()


def test_half_integral_coset_character(zg1g2):
    """Test the character of V_{gamma2/2 + Z gamma2}."""
    z2 = Sublattice("Zgamma2", zg1g2, ((0, 1),))
    series = voa_character(z2, (0, Fraction(1, 2)), 2)
    assert series.format() == "q^(2/4): 2\nq^(6/4): 2"
    assert series.coefficient(Fraction(1, 2)) == 2


def test_euler_and_plus_powers():
    """Test partition counts and the trace of -1 on a free boson."""
    assert euler_power(2, 2).integer_coefficients() == [1, 2, 5]
    assert plus_power(1, 3).integer_coefficients() == [1, -1, 0, -1]


def test_series_inverse():
    """Test 1/(1 - q) = 1 + q + q^2 + q^3."""
    series = IntSeries.from_integer_coefficients([1, -1], 3)
    assert series.inverse().integer_coefficients() == [1, 1, 1, 1]
    assert series * series.inverse() == IntSeries.one(3)


def test_inverse_needs_constant_term():
    """Test that q has no inverse."""
    with pytest.raises(ZeroDivisionError):
        IntSeries.monomial(1, 1, 2).inverse()


def test_truncation_and_exponent_grid():
    """Test truncation to the smaller weight and rejection of off-grid exponents."""
    total = IntSeries.from_integer_coefficients([1, 1, 1], 2) + IntSeries.from_integer_coefficients([1, 1], 1)
    assert total.max_weight == 1
    assert total.integer_coefficients() == [2, 2]
    with pytest.raises(ValueError):
        IntSeries.monomial(Fraction(1, 3), 1, 2)
    with pytest.raises(ValueError):
        IntSeries({-4: 1}, 2)


def test_twisted_character_of_theta(v_a1):
    """Test the closed form 1 - q - q^3 against matrix traces."""
    series = twisted_character(theta(v_a1), 3, verify=True)
    assert series.integer_coefficients() == [1, -1, 0, -1]
    assert series == traces(theta(v_a1), 3)


def test_twisted_character_of_inner(v_a1):
    """Test that inner(a/4) has the same twisted character as theta."""
    series = twisted_character(inner(v_a1, (Fraction(1, 4),)), 3, verify=True)
    assert series == twisted_character(theta(v_a1), 3)


def test_twisted_character_falls_back_to_traces(v_a1):
    """Test the propagated sigma, which has no closed form."""
    s = sigma(v_a1, [0])
    assert s.normal_form() is None
    assert twisted_character(s, 3).integer_coefficients() == [1, -1, 0, -1]


def test_burnside_dims_of_theta(v_a1):
    """Test the theta-orbifold dimensions 1, 1, 2, 3."""
    group = AutGroup([theta(v_a1)], 3)
    assert burnside_orbifold_dims(group, 3, verify=True).integer_coefficients() == [1, 1, 2, 3]


def test_burnside_dims_of_dihedral_group(v_a1):
    """Test the orbifold by <theta, inner(a/8)>: the theta-even Heisenberg states."""
    group = AutGroup([theta(v_a1), inner(v_a1, (Fraction(1, 8),))], 2)
    assert burnside_orbifold_dims(group, 3, verify=True).integer_coefficients() == [1, 0, 1, 1]
