"""Error condition tests for voalab exceptions."""

from fractions import Fraction

import pytest

from voalab import Lattice, SourceLocation
from voalab.exceptions import (
    CheckFailure,
    DSLSyntaxError,
    GaussDivisionByZeroError,
    HeadroomError,
    LatticeError,
    NotAnIsometryError,
    NotConformalError,
    NotPositiveDefiniteError,
    OddLatticeError,
    ScalarParseError,
    ScenarioError,
    UnknownNameError,
    UnrepresentablePhaseError,
    VoalabError,
)


def test_every_error_is_a_voalab_error():
    """Test the exception hierarchy roots."""
    for cls in (
        CheckFailure,
        DSLSyntaxError,
        GaussDivisionByZeroError,
        HeadroomError,
        LatticeError,
        NotConformalError,
        ScalarParseError,
        ScenarioError,
        UnknownNameError,
        UnrepresentablePhaseError,
    ):
        assert issubclass(cls, VoalabError)
    assert issubclass(GaussDivisionByZeroError, ZeroDivisionError)
    assert issubclass(ScalarParseError, ValueError)
    assert issubclass(NotAnIsometryError, LatticeError)
    assert issubclass(UnknownNameError, ScenarioError)
    assert issubclass(DSLSyntaxError, ScenarioError)


def test_scenario_error_prefixes_location():
    """Test that diagnostics read 'file:line: message'."""
    err = ScenarioError("bad things", SourceLocation(filename="orbifold.scn", line=42))
    assert str(err) == "orbifold.scn:42: bad things"
    assert err.message == "bad things"
    assert err.location.line == 42


def test_scenario_error_without_location():
    """Test that an unavailable location is not printed."""
    assert str(ScenarioError("plain")) == "plain"
    assert str(ScenarioError("plain", SourceLocation())) == "plain"


def test_unknown_name_error_lists_alternatives():
    """Test that unknown names report what is available."""
    err = UnknownNameError("lattice", "A5", ["A1", "A1x3"], SourceLocation(filename="x.scn", line=3))
    assert err.kind == "lattice"
    assert err.name == "A5"
    assert str(err) == "x.scn:3: Unknown lattice 'A5'. Available: 'A1', 'A1x3'"
    assert "none" in str(UnknownNameError("group", "G", []))


def test_dsl_syntax_error_points_at_column():
    """Test the caret diagnostic of syntax errors."""
    err = DSLSyntaxError("inner(a", 7, "')'")
    assert err.position == 7
    assert "column 8" in str(err)
    assert str(err).splitlines()[-1] == "         ^"


def test_not_conformal_error_names_identity_and_grade():
    """Test NotConformalError attributes and message."""
    err = NotConformalError("e_(1)e = 2e", 2)
    assert err.identity == "e_(1)e = 2e"
    assert err.grade == 2
    assert "on grade 2" in str(err)
    assert "grade" not in str(NotConformalError("e homogeneous of weight 2"))


def test_check_failure_attributes():
    """Test CheckFailure carries both sides."""
    err = CheckFailure("nested", 3, 5, 6)
    assert (err.check, err.grade, err.lhs, err.rhs) == ("nested", 3, 5, 6)
    assert "lhs=5 rhs=6" in str(err)


def test_odd_lattice_is_rejected():
    """Test that odd Gram entries raise OddLatticeError."""
    with pytest.raises(OddLatticeError) as exc_info:
        Lattice("Z", ((1,),))
    assert exc_info.value.name == "Z"
    assert exc_info.value.value == 1


def test_indefinite_lattice_is_rejected():
    """Test that non-positive-definite Gram matrices are rejected."""
    with pytest.raises(NotPositiveDefiniteError):
        Lattice("H", ((0, 2), (2, 0)))


def test_unrepresentable_phase_message():
    """Test the phase error message."""
    err = UnrepresentablePhaseError(Fraction(1, 3))
    assert "1/3" in str(err)
    assert "divide 4" in str(err)
