"""Test source location tracking in scenario files."""

from pathlib import Path

import pytest

from voalab import Scenario, SourceLocation
from voalab.exceptions import ScenarioError, UnknownNameError


def test_source_location_dataclass_defaults():
    """Test that SourceLocation can be created with all None values."""
    loc = SourceLocation()
    assert loc.filename is None
    assert loc.filepath is None
    assert loc.line is None
    assert not loc.is_available


def test_source_location_format_location():
    """Test the format_location() method."""
    assert SourceLocation().format_location() == "<unavailable>"
    assert SourceLocation(filename="orbifold.scn").format_location() == "orbifold.scn"
    assert SourceLocation(filename="orbifold.scn", line=42).format_location() == "orbifold.scn:42"


def test_in_file_without_path():
    """Test that text without a file is reported as <string>."""
    loc = SourceLocation.in_file(None, 3)
    assert loc.filename == "<string>"
    assert loc.filepath is None
    assert loc.format_location() == "<string>:3"


def test_in_file_with_path(tmp_path):
    """Test that file locations keep the short name and the absolute path."""
    path = tmp_path / "demo.scn"
    loc = SourceLocation.in_file(str(path), 7)
    assert loc.filename == "demo.scn"
    assert Path(loc.filepath).is_absolute()
    assert loc.line == 7


def test_to_json():
    """Test the JSON form."""
    loc = SourceLocation(filename="a.scn", filepath="/tmp/a.scn", line=2)
    assert loc.toJSON() == {"filename": "a.scn", "filepath": "/tmp/a.scn", "line": 2}


def test_locations_are_immutable():
    """Test that SourceLocation is frozen."""
    loc = SourceLocation(filename="a.scn")
    with pytest.raises(AttributeError):
        loc.line = 3


def test_scenario_errors_point_at_the_declaration(tmp_path):
    """Test that scenario diagnostics carry the file name and line number."""
    path = tmp_path / "broken.scn"
    path.write_text("lattice A1 rank 1 basis a\n  2\n\nstate s in A5 = vac\n", encoding="utf-8")
    with pytest.raises(UnknownNameError) as exc_info:
        Scenario.from_file(path)
    assert exc_info.value.location.line == 4
    assert str(exc_info.value).startswith("broken.scn:4: ")


def test_rows_carry_their_own_lines():
    """Test that a bad Gram row is reported at the row's line."""
    text = "lattice L rank 2\n  2 0\n  0 2 0\n"
    with pytest.raises(ScenarioError) as exc_info:
        Scenario.parse(text)
    assert exc_info.value.location.format_location() == "<string>:3"
