"""Tests for the expression parser and the lattice description format."""

from fractions import Fraction

import pytest

from voalab import GaussScalar, load_lattice_file, parse_expression
from voalab.exceptions import DSLSyntaxError, ScenarioError, UnknownNameError
from voalab.parsing import (
    BinOp,
    Call,
    Name,
    Neg,
    Num,
    Row,
    constant,
    integer,
    integer_row,
    integers,
    rational,
    read_blocks,
    scalar,
    strip_comment,
    tokenize,
    vector,
)

LATTICE_FILE = """\
# A1^3 and the sublattice P
lattice A1x3 rank 3 basis a1 a2 a3
  2 0 0
  0 2 0
  0 0 2

vector gamma1 in A1x3 = a1 - 2*a2 + a3
vector gamma2 in A1x3 = a1 - a3

sublattice P of A1x3
  gamma1
  gamma2
  a1 + a2 + a3   # gamma

isometry t13 from A1x3 to A1x3
  a1 -> a3
  a2 -> a2
  a3 -> a1
"""


def test_tokenize_positions():
    """Test token kinds and columns."""
    tokens = tokenize("inner(1/4*a2)")
    assert [t.kind for t in tokens] == ["name", "op", "number", "op", "number", "op", "name", "op"]
    assert tokens[6].text == "a2"
    assert tokens[6].position == 10


def test_tokenize_rejects_unknown_characters():
    """Test that the offending column is reported."""
    with pytest.raises(DSLSyntaxError) as exc_info:
        tokenize("a $ b")
    assert exc_info.value.position == 2


def test_parse_products_and_calls():
    """Test precedence, left associativity and call arguments."""
    tree = parse_expression("inner(1/4*a2 + 1/4*a3)*sigma(1, 2, 3)")
    quarter = BinOp("/", Num(1), Num(4))
    shift = BinOp("+", BinOp("*", quarter, Name("a2")), BinOp("*", quarter, Name("a3")))
    assert tree == BinOp("*", Call("inner", (shift,)), Call("sigma", (Num(1), Num(2), Num(3))))


def test_parse_juxtaposed_arguments():
    """Test that space-separated arguments form a row, as in perm(1 3)."""
    tree = parse_expression("perm(1 3)")
    assert tree == Call("perm", (Row((Num(1), Num(3))),))
    assert integers(tree.args[0], "perm(1 3)") == [1, 3]
    assert parse_expression("id()") == Call("id", ())


def test_parse_bracketed_row():
    """Test that a bracketed row splits into signed fractions."""
    tree = parse_expression("[1/4 -1 0]")
    assert tree == Row((BinOp("/", Num(1), Num(4)), Neg(Num(1)), Num(0)))


@pytest.mark.parametrize(
    "text, position, expected",
    [
        ("1 +", 3, "a number, a name, '(' or '['"),
        ("(1", 2, "')'"),
        ("1 2", 2, "an operator or the end of the expression"),
        ("", 0, "an expression"),
        ("[1 x]", 3, "a rational coordinate"),
    ],
)
def test_parse_errors(text, position, expected):
    """Test that syntax errors name the expectation and column."""
    with pytest.raises(DSLSyntaxError) as exc_info:
        parse_expression(text)
    assert exc_info.value.position == position
    assert exc_info.value.expected == expected


def test_syntax_error_message_points_at_column():
    """Test the caret line of the message."""
    with pytest.raises(DSLSyntaxError) as exc_info:
        parse_expression("1 2")
    assert str(exc_info.value).endswith("  1 2\n    ^")


def test_constants():
    """Test rational and Gaussian constants."""
    assert constant(parse_expression("-3/4 + 1")) == Fraction(1, 4)
    assert constant(parse_expression("i")) is None
    assert scalar(parse_expression("1/2 - 1/2*i"), "") == GaussScalar(Fraction(1, 2), Fraction(-1, 2))
    assert constant(parse_expression("1/0")) is None


def test_rational_and_integer_errors():
    """Test the expectations named for non-constant and non-integral values."""
    with pytest.raises(DSLSyntaxError) as exc_info:
        rational(parse_expression("x"), "x")
    assert exc_info.value.expected == "a rational number"
    assert integer(parse_expression("6/2"), "6/2") == 3
    with pytest.raises(DSLSyntaxError) as exc_info:
        integer(parse_expression("3/2"), "3/2")
    assert exc_info.value.expected == "an integer"


def test_vector_expressions(a1x3):
    """Test basis names, named vectors, rows and scalar factors."""
    named = {"gamma1": (1, -2, 1)}

    def evaluate(text):
        return vector(parse_expression(text), a1x3, named, text)

    assert evaluate("1/4*a2 + 1/4*a3") == (0, Fraction(1, 4), Fraction(1, 4))
    assert evaluate("gamma1/2") == (Fraction(1, 2), -1, Fraction(1, 2))
    assert evaluate("-a1 + [0 0 1/3]") == (-1, 0, Fraction(1, 3))
    assert evaluate("a3*2") == (0, 0, 2)
    assert evaluate("0") == (0, 0, 0)


def test_vector_errors(a1x3):
    """Test unknown names, products of vectors and short rows."""
    with pytest.raises(UnknownNameError) as exc_info:
        vector(parse_expression("b1"), a1x3, {}, "b1")
    assert exc_info.value.available == ["a1", "a2", "a3"]
    assert isinstance(exc_info.value, KeyError)
    with pytest.raises(DSLSyntaxError):
        vector(parse_expression("a1*a2"), a1x3, {}, "a1*a2")
    with pytest.raises(DSLSyntaxError) as exc_info:
        vector(parse_expression("[1 0]"), a1x3, {}, "[1 0]")
    assert exc_info.value.expected == "a row of 3 coordinates"


def test_strip_comment_respects_quotes():
    """Test that '#' inside double quotes is kept."""
    assert strip_comment('check dims "a#b" # note') == 'check dims "a#b" '
    assert strip_comment("no comment") == "no comment"


def test_read_blocks_groups_rows():
    """Test declarations, continuation rows and line numbers."""
    blocks = read_blocks(LATTICE_FILE)
    assert [b.keyword for b in blocks] == ["lattice", "vector", "vector", "sublattice", "isometry"]
    assert blocks[0].rows == ("2 0 0", "0 2 0", "0 0 2")
    assert blocks[3].rows[2] == "a1 + a2 + a3"
    assert blocks[3].location.line == 10
    assert blocks[3].row_locations[2].line == 13
    assert blocks[0].location.format_location() == "<string>:2"


def test_read_blocks_rejects_leading_indent():
    """Test that a row needs a declaration."""
    with pytest.raises(ScenarioError) as exc_info:
        read_blocks("  1 2\nlattice L rank 1\n")
    assert exc_info.value.location.line == 1


def test_integer_row():
    """Test exact-length integer rows."""
    assert integer_row("1 -2 +3", 3) == (1, -2, 3)
    with pytest.raises(ScenarioError):
        integer_row("1 x 3", 3)
    with pytest.raises(ScenarioError):
        integer_row("1 2", 3)


def test_load_lattice_file():
    """Test lattices, named vectors, sublattices and isometries from one file."""
    loaded = load_lattice_file(LATTICE_FILE)
    assert loaded.lattices["A1x3"].determinant == 8
    assert loaded.vectors["A1x3"]["gamma1"] == (1, -2, 1)
    assert loaded.sublattices["P"].index_in_parent() == 6
    assert loaded.isometries["t13"].order() == 2
    assert set(loaded.spaces()) == {"A1x3", "P"}


def test_odd_lattice_is_a_scenario_error():
    """Test that lattice validation errors carry the declaration line."""
    with pytest.raises(ScenarioError) as exc_info:
        load_lattice_file("lattice L rank 1\n  1\n")
    assert exc_info.value.location.line == 1
    assert str(exc_info.value).startswith("<string>:1: ")


@pytest.mark.parametrize(
    "text",
    [
        "lattice L rank 2\n  2 0\n",
        "lattice L rank two\n  2\n",
        "lattice L rank 1 names a\n  2\n",
        "lattice L rank 1\n  2\nlattice L rank 1\n  2\n",
        "lattice L rank 1\n  2\nsublattice S of L\n",
        "lattice L rank 1\n  2\nsublattice S of L\n  1/2*b1\n",
        "lattice L rank 1\n  2\nisometry f from L to L\n  b1 b1\n",
        "lattice L rank 1\n  2\nvector v in L\n",
        "group G = <theta>\n",
    ],
)
def test_malformed_lattice_files(text):
    """Test that malformed declarations raise ScenarioError."""
    with pytest.raises(ScenarioError):
        load_lattice_file(text)


def test_unknown_parent_lattice():
    """Test that sublattices must name a defined lattice."""
    with pytest.raises(UnknownNameError) as exc_info:
        load_lattice_file("sublattice S of L\n  1\n")
    assert exc_info.value.kind == "lattice"
