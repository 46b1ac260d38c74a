"""Tests for commutants, coset spaces, orbifolds and the two verification identities."""

import pytest

from voalab import (
    AutGroup,
    Lattice,
    StateVector,
    Sublattice,
    annihilator,
    commutant,
    coset_space,
    fixed_subspace,
    image_subspace,
    isometry_from_images,
    lattice_virasoro,
    orbifold,
    perm,
    sublattice_space,
    theta,
    verify_nested,
    verify_orbifold_coset,
    whole_space,
)
from voalab.commutant import compare_dims, nested_rows, orbifold_coset_rows, sector_functionals, transport_space
from voalab.exceptions import CheckFailure, HeadroomError, NotPreservedError


@pytest.fixture(scope="module")
def blocks(a1x2):
    """The sublattices Z a1 and Z a2 of A1 + A1."""
    return Sublattice("Za1", a1x2, ((1, 0),)), Sublattice("Za2", a1x2, ((0, 1),))


@pytest.fixture(scope="module")
def block_virasoros(v_a1x2, blocks):
    return tuple(lattice_virasoro(v_a1x2, b) for b in blocks)


def test_commutant_of_full_virasoro_is_the_vacuum(v_a1):
    """Test that ker L_(-1) on V_A1 is spanned by the vacuum."""
    space = commutant(v_a1, lattice_virasoro(v_a1), 2, label="omega")
    assert space.dims() == [1, 0, 0]
    assert space.contains_vacuum()
    assert space.provenance == "commutant(omega)"


def test_commutant_needs_headroom(v_a1):
    """Test that kernels of e_(0) need one grade above max_weight."""
    with pytest.raises(HeadroomError) as exc_info:
        commutant(v_a1, lattice_virasoro(v_a1), 4)
    assert exc_info.value.needed == 5
    assert exc_info.value.cutoff == 4


def test_commutant_of_a_block_is_the_other_block(v_a1x2, blocks, block_virasoros):
    """Test Com(omega of Z a1) = V_{Z a2} inside V_{A1 + A1}."""
    space = commutant(v_a1x2, block_virasoros[0], 2)
    assert space.dims() == [1, 3, 4]
    assert space.equals(sublattice_space(v_a1x2, blocks[1], 2))


def test_commutant_of_anti_diagonal_is_the_diagonal(v_a1x2, a1x2):
    """Test Com(omega of Z(a1 - a2)) = V_{Z(a1 + a2)}."""
    anti = Sublattice("anti", a1x2, ((1, -1),))
    diagonal = Sublattice("diag", a1x2, ((1, 1),))
    space = commutant(v_a1x2, lattice_virasoro(v_a1x2, anti), 2)
    expected = sublattice_space(v_a1x2, diagonal, 2)
    assert expected.dims() == [1, 1, 4]
    assert space.equals(expected)


def test_sector_functionals():
    """Test that functionals vanish on the points of e."""
    lattice = Lattice("L", ((2, 0), (0, 2)))
    e = StateVector.exponential(lattice, (1, 1))
    functionals = sector_functionals(e)
    assert len(functionals) == 1
    assert sum(f * p for f, p in zip(functionals[0], (1, 1))) == 0
    assert len(sector_functionals(StateVector.vacuum(lattice))) == 2


def test_annihilator_cross_check(v_a1x2, blocks):
    """Test that the annihilator of a1(-1) is V_{Z a2}."""
    h1 = StateVector.heisenberg(v_a1x2.lattice, (1, 0))
    space = annihilator(v_a1x2, [h1], 2, label="a1")
    assert space.equals(sublattice_space(v_a1x2, blocks[1], 2))


def test_full_rank_coset_spaces(v_a1x2, a1x2):
    """Test the even and odd cosets of Z(a1 + a2) + Z(a1 - a2)."""
    even = Sublattice("D", a1x2, ((1, 1), (1, -1)))
    assert sublattice_space(v_a1x2, even, 2).dims() == [1, 2, 9]
    odd = coset_space(v_a1x2, even, (1, 0), 2)
    assert odd.dims() == [0, 4, 8]
    assert odd.provenance == "coset(D, [1, 0])"
    total = sublattice_space(v_a1x2, even, 2).sum(odd)
    assert total.equals(whole_space(v_a1x2, 2))


def test_intersection_and_sum_of_blocks(v_a1x2, blocks):
    """Test gradewise intersection and sum of V_{Z a1} and V_{Z a2}."""
    first = sublattice_space(v_a1x2, blocks[0], 2)
    second = sublattice_space(v_a1x2, blocks[1], 2)
    assert first.intersect(second).dims() == [1, 0, 0]
    assert first.sum(second).dims() == [1, 6, 8]


def test_image_subspace(v_a1x2, blocks):
    """Test that the swap maps V_{Z a1} onto V_{Z a2}."""
    swapped = image_subspace(perm(v_a1x2, [0, 1]), sublattice_space(v_a1x2, blocks[0], 2))
    assert swapped.equals(sublattice_space(v_a1x2, blocks[1], 2))


def test_transport_space(a1, v_a1, v_a1x2, blocks):
    """Test that transporting V_A1 along A1 -> Z a1 gives V_{Z a1}."""
    iota = isometry_from_images("iota", a1, blocks[0], [(1,)], [(1, 0)])
    moved = transport_space(iota, whole_space(v_a1, 2), v_a1x2)
    assert moved.equals(sublattice_space(v_a1x2, blocks[0], 2))


def test_fixed_subspace_matches_orbifold_of_whole_space(v_a1):
    """Test V^theta computed two ways."""
    group = AutGroup([theta(v_a1)], 3)
    fixed = fixed_subspace(group, 3)
    assert fixed.dims() == [1, 1, 2, 3]
    assert orbifold(whole_space(v_a1, 3), group).equals(fixed)


def test_orbifold_requires_preserved_subspace(v_a1x2, blocks):
    """Test that the swap does not preserve V_{Z a1}."""
    group = AutGroup([perm(v_a1x2, [0, 1])], 2)
    with pytest.raises(NotPreservedError) as exc_info:
        orbifold(sublattice_space(v_a1x2, blocks[0], 2), group)
    assert exc_info.value.generator == "perm(1 2)"


def test_nested_commutant_identity(v_a1x2, block_virasoros):
    """Test Com(e1 + e2) = Com_{Com(e1)}(e2) for the block Virasoro vectors."""
    rows = verify_nested(v_a1x2, *block_virasoros, 2)
    assert [row.ok for row in rows] == [True, True, True, True]
    assert rows[0].lhs == "commuting"
    assert [row.lhs for row in rows[1:]] == ["1", "0", "0"]


def test_nested_identity_needs_commuting_vectors(v_a1x2, block_virasoros):
    """Test that a non-commuting pair yields a single failing row."""
    first = block_virasoros[0]
    rows = verify_nested(v_a1x2, first, first, 2)
    assert len(rows) == 1
    assert rows[0].rhs == "not-commuting"
    with pytest.raises(CheckFailure) as exc_info:
        verify_nested(v_a1x2, first, first, 2, raise_on_failure=True)
    assert exc_info.value.check == "nested"


def test_orbifold_coset_identity(v_a1x2, block_virasoros):
    """Test (Com(e))^G = Com_{V^G}(e) for theta on A1 + A1."""
    group = AutGroup([theta(v_a1x2)], 2)
    rows = verify_orbifold_coset(v_a1x2, block_virasoros[0], group, 2)
    assert all(row.ok for row in rows)
    assert len(rows) == 4


def test_orbifold_coset_rejects_moving_generators(v_a1x2, block_virasoros):
    """Test that a generator not fixing e gives a failing row."""
    group = AutGroup([perm(v_a1x2, [0, 1])], 2)
    rows = verify_orbifold_coset(v_a1x2, block_virasoros[0], group, 2)
    assert len(rows) == 1
    assert not rows[0].ok


def test_compare_dims_pads_missing_grades():
    """Test rows for sequences of unequal length."""
    rows = compare_dims("dims", [1, 2, 3], [1, 2])
    assert [row.status for row in rows] == ["OK", "OK", "FAIL"]
    assert rows[2].rhs == "-"


def test_identity_rows_build_spaces_only_when_preconditions_hold(v_a1x2, block_virasoros):
    """Test that the shared row builders skip the space builders after a failed precondition."""

    def unreachable():
        raise AssertionError("space built despite a failed precondition")

    rows = nested_rows("nested:pair", False, unreachable, unreachable)
    assert [(row.lhs, row.rhs, row.status) for row in rows] == [("commuting", "not-commuting", "FAIL")]
    group = AutGroup([perm(v_a1x2, [0, 1])], 2)
    rows = orbifold_coset_rows("orbifold-coset:swap", block_virasoros[0], group, unreachable, unreachable)
    assert [row.status for row in rows] == ["FAIL"]


def test_identity_rows_compare_given_spaces(v_a1x2):
    """Test that equal spaces give one passing row per grade after the precondition."""
    space = whole_space(v_a1x2, 2)
    rows = nested_rows("nested", True, lambda: space, lambda: space)
    assert [row.status for row in rows] == ["OK"] * 4
    assert [row.lhs for row in rows[1:]] == ["1", "6", "17"]
