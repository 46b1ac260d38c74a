"""Tests for lattices, sublattices, cosets and isometries."""

from fractions import Fraction

import pytest

from voalab import (
    Lattice,
    Sublattice,
    coset_decomposition,
    isometry_from_images,
    lattice_automorphism,
    restricts_to,
    vectors_in_coset,
)
from voalab.exceptions import (
    LatticeError,
    LatticeMismatchError,
    NotAnIsometryError,
    NotFullRankError,
)
from voalab.lattice import as_point, format_coords, inner, parent_of, vectors_up_to_norm


def test_basis_names_default_and_custom(a1x3):
    """Test default and declared basis names."""
    assert Lattice("L", ((2, 0), (0, 2))).basis_names == ("b1", "b2")
    assert a1x3.basis_names == ("a1", "a2", "a3")
    assert a1x3.named_vector("a2").coords == (0, 1, 0)


def test_asymmetric_gram_is_rejected():
    """Test that a non-symmetric Gram matrix raises LatticeError."""
    with pytest.raises(LatticeError):
        Lattice("bad", ((2, 2), (0, 2)))


def test_repeated_basis_names_are_rejected():
    """Test that basis names must be distinct."""
    with pytest.raises(LatticeError):
        Lattice("bad", ((2, 0), (0, 2)), ("a", "a"))


def test_inner_products_and_norms(a1x3):
    """Test exact inner products of rational vectors."""
    gamma1 = a1x3.vector((1, -2, 1))
    gamma2 = a1x3.vector((1, 0, -1))
    gamma = a1x3.vector((1, 1, 1))
    assert gamma1.norm() == 12
    assert gamma2.norm() == 4
    assert gamma.norm() == 6
    assert inner(gamma1, gamma2) == 0
    assert inner(gamma1, gamma) == 0
    assert inner(gamma2, gamma) == 0
    h = a1x3.vector((0, Fraction(1, 4), Fraction(1, 4)))
    assert inner(h, gamma1) == Fraction(-1, 2)


def test_qvec_arithmetic(a1x3):
    """Test vector arithmetic and integrality."""
    x = a1x3.vector((1, -2, 1))
    y = a1x3.vector((1, 0, -1))
    half = Fraction(1, 2) * (x + y)
    assert half.coords == (1, -1, 0)
    assert half.is_integral
    assert half.point() == (1, -1, 0)
    assert not (Fraction(1, 2) * y).is_integral
    assert (-x).coords == (-1, 2, -1)
    assert str(Fraction(1, 4) * y) == "[1/4 0 -1/4]"


def test_vectors_of_different_lattices_do_not_mix(a1, a1x3):
    """Test that mixing lattices raises LatticeMismatchError."""
    with pytest.raises(LatticeMismatchError):
        inner(a1.basis_vector(0), a1x3.basis_vector(0))


def test_as_point_rejects_fractions():
    """Test that non-integral coordinates are not lattice points."""
    assert as_point([Fraction(2), 3]) == (2, 3)
    with pytest.raises(LatticeError):
        as_point([Fraction(1, 2), 0])


def test_format_coords():
    """Test the bracketed coordinate format."""
    assert format_coords((1, Fraction(-1, 3), 0)) == "[1 -1/3 0]"


def test_determinants(a1x3, a1x4):
    """Test Gram determinants."""
    assert a1x3.determinant == 8
    assert a1x4.determinant == 16


def test_short_vectors_of_a1x3(a1x3):
    """Test enumeration by norm: 6 roots of norm 2 and 12 vectors of norm 4."""
    vectors = vectors_up_to_norm(a1x3, 4)
    norms = [v.norm() for v in vectors]
    assert norms.count(0) == 1
    assert norms.count(2) == 6
    assert norms.count(4) == 12


def test_vectors_in_coset_of_rank_one_sublattice(zg1g2):
    """Test the coset 1/2*gamma2 + Z*gamma2 has two vectors of norm 1."""
    z2 = Sublattice("Zgamma2", zg1g2, ((0, 1),))
    points = vectors_in_coset(z2, (0, Fraction(1, 2)), 1)
    assert [p.coords for p in points] == [(0, Fraction(-1, 2)), (0, Fraction(1, 2))]


def test_sublattice_membership_and_equality(a1x3):
    """Test that P and its alternative generators span the same sublattice."""
    p = Sublattice("P", a1x3, ((1, -2, 1), (1, 0, -1), (1, 1, 1)))
    p_alt = Sublattice("P_alt", a1x3, ((1, 0, -1), (0, 1, 2), (0, 0, 6)))
    assert p.same_as(p_alt)
    assert p.contains((0, 0, 6))
    assert not p.contains((0, 0, 3))
    assert p.index_in_parent() == 6
    assert p.determinant == 288


def test_index_requires_full_rank(a1x3):
    """Test that the index of a rank-deficient sublattice is refused."""
    k = Sublattice("K", a1x3, ((1, -2, 1), (1, 0, -1)))
    assert k.rank == 2
    assert not k.is_full_rank
    with pytest.raises(NotFullRankError):
        k.index_in_parent()


def test_as_lattice(a1x4):
    """Test that a sublattice becomes an abstract lattice of the same determinant."""
    sqrt2a3 = Sublattice("sqrt2A3", a1x4, ((1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1)))
    assert sqrt2a3.as_lattice().determinant == sqrt2a3.determinant == 32
    assert parent_of(sqrt2a3) is a1x4


def test_cosets_of_a1x4_over_zh_plus_sqrt2a3(a1x4):
    """Test four cosets represented by multiples of a1."""
    sub = Sublattice("ZH+sqrt2A3", a1x4, ((1, 1, 1, 1), (1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1)))
    reps = coset_decomposition(a1x4, sub, (1, 0, 0, 0))
    assert [r.point() for r in reps] == [(0, 0, 0, 0), (1, 0, 0, 0), (2, 0, 0, 0), (3, 0, 0, 0)]


def test_cosets_of_a1x3_over_p(a1x3):
    """Test six cosets; without a preferred generator the first basis vector is used."""
    p = Sublattice("P", a1x3, ((1, -2, 1), (1, 0, -1), (1, 1, 1)))
    reps = coset_decomposition(a1x3, p)
    assert len(reps) == 6
    assert reps[1].point() == (1, 0, 0)
    along_a3 = coset_decomposition(a1x3, p, (0, 0, 1))
    assert along_a3[5].point() == (0, 0, 5)


def test_isometry_tau_is_a_4_cycle(a1x4):
    """Test the cyclic permutation of A1^4 and its order."""
    tau = lattice_automorphism("tau", a1x4, ((0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)))
    assert tau.apply((1, 0, 0, 0)) == (0, 1, 0, 0)
    assert tau.order() == 4
    assert tau.is_automorphism
    assert tau.inverse().apply((0, 1, 0, 0)) == (1, 0, 0, 0)


def test_norm_breaking_map_is_rejected(a1x4):
    """Test that a map changing a norm raises NotAnIsometryError."""
    identity = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    images = [(1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    with pytest.raises(NotAnIsometryError) as exc_info:
        isometry_from_images("bad", a1x4, a1x4, identity, images)
    assert exc_info.value.source_value == 2
    assert exc_info.value.image_value == 4


def test_non_generating_images_are_rejected(a1):
    """Test that images must generate the target."""
    with pytest.raises(LatticeError):
        isometry_from_images("double", Lattice("B", ((8,),)), a1, [(1,)], [(2,)])


def test_beta_restriction_commutes(a1x3, a1x4):
    """Test that tau~ restricted to N corresponds to tau on sqrt2A3."""
    sqrt2a3 = Sublattice("sqrt2A3", a1x4, ((1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1)))
    n = Sublattice("N", a1x3, ((1, 1, 0), (0, -1, 1), (-1, 1, 0)))
    beta = isometry_from_images(
        "beta", sqrt2a3, n, [(1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1)], [(1, 1, 0), (0, -1, 1), (-1, 1, 0)]
    )
    tau = lattice_automorphism("tau", a1x4, ((0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)))
    tau_tilde = isometry_from_images(
        "tau~", a1x3, a1x3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 0, 1), (0, -1, 0), (-1, 0, 0)]
    )
    assert tau_tilde.order() == 4
    assert restricts_to(tau_tilde, tau, beta)
    t13 = isometry_from_images("t13", a1x3, a1x3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 0, 1), (0, 1, 0), (1, 0, 0)])
    assert not restricts_to(t13, tau, beta)


def test_sublattice_isometry_rejects_outside_vectors(a1x4, a1x3):
    """Test that applying a sublattice isometry outside its span fails."""
    zh = Sublattice("ZH", a1x4, ((1, 1, 1, 1),))
    zg = Sublattice("Zgamma", a1x3, ((1, 1, 1),))
    with pytest.raises(NotAnIsometryError):
        isometry_from_images("h", zh, zg, [(1, 1, 1, 1)], [(1, 1, 1)])
    with pytest.raises(LatticeError):
        zh_to_zh = isometry_from_images("id", zh, zh, [(1, 1, 1, 1)], [(1, 1, 1, 1)])
        zh_to_zh.apply((1, 0, 0, 0))
