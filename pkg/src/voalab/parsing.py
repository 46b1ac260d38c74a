"""Tokenizer, expression trees and the line-oriented lattice description format."""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .exceptions import DSLSyntaxError, LatticeError, ScenarioError, UnknownNameError
from .lattice import Coords, Isometry, Lattice, LatticeLike, Sublattice, as_point, isometry_from_images, parent_of
from .scalar import I, GaussScalar
from .source_location import SourceLocation

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>->|[()\[\],*+\-/]))")


@dataclass(frozen=True, slots=True)
class Token:
    """A lexical token with its column in the source text."""

    kind: str
    text: str
    position: int


def tokenize(text: str, location: Optional[SourceLocation] = None) -> list[Token]:
    """
    Split an expression into number, name and operator tokens.

    Raises
    ------
    DSLSyntaxError
        On a character that starts no token.
    """
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN.match(text, position)
        if match is None:
            column = position + len(text[position:]) - len(text[position:].lstrip())
            raise DSLSyntaxError(text, column, "a number, a name or an operator", location)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    return tokens


# Expression trees


@dataclass(frozen=True)
class Num:
    value: int
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Name:
    name: str
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Row:
    """Juxtaposed items: a bracketed coordinate row or a space-separated argument such as a cycle."""

    items: tuple["Node", ...]
    position: int = field(default=0, compare=False)


Node = Union[Num, Name, Call, BinOp, Neg, Row]


class _Parser:
    """
    Recursive-descent parser.

        expr  := term (('+' | '-') term)*
        term  := unary (('*' | '/') unary)*
        unary := '-' unary | '+' unary | atom
        atom  := NUMBER | NAME ['(' [group (',' group)*] ')'] | '(' expr ')' | '[' unary* ']'
        group := expr expr*
    """

    def __init__(self, text: str, location: Optional[SourceLocation]):
        self.text = text
        self.location = location
        self.tokens = tokenize(text, location)
        self.index = 0

    def _peek(self) -> Optional[Token]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _error(self, expected: str) -> DSLSyntaxError:
        token = self._peek()
        position = token.position if token is not None else len(self.text)
        return DSLSyntaxError(self.text, position, expected, self.location)

    def _take(self, text: str) -> Token:
        token = self._peek()
        if token is None or token.text != text:
            raise self._error(f"'{text}'")
        self.index += 1
        return token

    def _at(self, *texts: str) -> bool:
        token = self._peek()
        return token is not None and token.kind == "op" and token.text in texts

    def parse(self) -> Node:
        if not self.tokens:
            raise self._error("an expression")
        node = self.expr()
        if self._peek() is not None:
            raise self._error("an operator or the end of the expression")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._at("+", "-"):
            token = self.tokens[self.index]
            self.index += 1
            node = BinOp(token.text, node, self.term(), token.position)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self._at("*", "/"):
            token = self.tokens[self.index]
            self.index += 1
            node = BinOp(token.text, node, self.unary(), token.position)
        return node

    def unary(self) -> Node:
        if self._at("-"):
            token = self.tokens[self.index]
            self.index += 1
            return Neg(self.unary(), token.position)
        if self._at("+"):
            self.index += 1
            return self.unary()
        return self.atom()

    def atom(self) -> Node:
        token = self._peek()
        if token is None:
            raise self._error("a number, a name, '(' or '['")
        if token.kind == "number":
            self.index += 1
            return Num(int(token.text), token.position)
        if token.kind == "name":
            self.index += 1
            if self._at("("):
                return Call(token.text, self._arguments(), token.position)
            return Name(token.text, token.position)
        if token.text == "(":
            self.index += 1
            node = self.expr()
            self._take(")")
            return node
        if token.text == "[":
            self.index += 1
            items = []
            while not self._at("]"):
                if self._peek() is None:
                    raise self._error("']'")
                items.append(self._fraction_item())
            self._take("]")
            return Row(tuple(items), token.position)
        raise self._error("a number, a name, '(' or '['")

    def _fraction_item(self) -> Node:
        # a signed number with an optional /denominator, so '[1/4 -1 0]' splits into three items
        start = self._peek()
        negative = self._at("-")
        if negative:
            self.index += 1
        token = self._peek()
        if token is None or token.kind != "number":
            raise self._error("a rational coordinate")
        self.index += 1
        node: Node = Num(int(token.text), token.position)
        if self._at("/"):
            slash = self.tokens[self.index]
            self.index += 1
            denominator = self._peek()
            if denominator is None or denominator.kind != "number":
                raise self._error("a denominator")
            self.index += 1
            node = BinOp("/", node, Num(int(denominator.text), denominator.position), slash.position)
        return Neg(node, start.position) if negative else node

    def _arguments(self) -> tuple[Node, ...]:
        self._take("(")
        args: list[Node] = []
        if self._at(")"):
            self.index += 1
            return ()
        while True:
            group = [self.expr()]
            while self._peek() is not None and not self._at(",", ")"):
                group.append(self.expr())
            args.append(group[0] if len(group) == 1 else Row(tuple(group), _position(group[0])))
            if self._at(","):
                self.index += 1
                continue
            self._take(")")
            return tuple(args)


def _position(node: Node) -> int:
    return node.position


def parse_expression(text: str, location: Optional[SourceLocation] = None) -> Node:
    """
    Parse an expression of the scenario language.

    Parameters
    ----------
    text : str
        Source text, e.g. "inner(1/4*a2 + 1/4*a3)*sigma(1, 2, 3)".
    location : SourceLocation, optional
        Where the text came from, for diagnostics.

    Returns
    -------
    Node
        The expression tree.

    Raises
    ------
    DSLSyntaxError
        If the text does not parse; the message points at the offending column.
    """
    return _Parser(text, location).parse()


# Evaluation of constants and vectors


def constant(node: Node, allow_imaginary: bool = False) -> Optional[Union[Fraction, GaussScalar]]:
    """
    Value of a constant expression, or None if it involves other names or calls.

    With allow_imaginary the name 'i' denotes the imaginary unit.
    """
    if isinstance(node, Num):
        return Fraction(node.value)
    if isinstance(node, Name):
        return I if allow_imaginary and node.name == "i" else None
    if isinstance(node, Neg):
        value = constant(node.operand, allow_imaginary)
        return None if value is None else -value
    if isinstance(node, BinOp):
        left = constant(node.left, allow_imaginary)
        right = constant(node.right, allow_imaginary)
        if left is None or right is None:
            return None
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if right == 0:
            return None
        return left / right
    return None


def rational(node: Node, text: str, location: Optional[SourceLocation] = None) -> Fraction:
    """
    Evaluate a rational constant.

    Raises
    ------
    DSLSyntaxError
        If the expression is not a rational constant.
    """
    value = constant(node)
    if value is None:
        raise DSLSyntaxError(text, node.position, "a rational number", location)
    return value


def integer(node: Node, text: str, location: Optional[SourceLocation] = None) -> int:
    """
    Evaluate an integer constant.

    Raises
    ------
    DSLSyntaxError
        If the expression is not an integer.
    """
    value = rational(node, text, location)
    if value.denominator != 1:
        raise DSLSyntaxError(text, node.position, "an integer", location)
    return value.numerator


def integers(node: Node, text: str, location: Optional[SourceLocation] = None) -> list[int]:
    """Evaluate a single integer or a juxtaposed group of integers, e.g. the cycle in perm(1 3)."""
    items = node.items if isinstance(node, Row) else (node,)
    return [integer(item, text, location) for item in items]


def scalar(node: Node, text: str, location: Optional[SourceLocation] = None) -> Union[Fraction, GaussScalar]:
    """
    Evaluate a Gaussian rational constant such as (1/2-1/2*i).

    Raises
    ------
    DSLSyntaxError
        If the expression is not a constant.
    """
    value = constant(node, allow_imaginary=True)
    if value is None:
        raise DSLSyntaxError(text, node.position, "a Gaussian rational constant", location)
    return value


def vector(
    node: Node,
    lattice: Lattice,
    named: Mapping[str, Coords],
    text: str,
    location: Optional[SourceLocation] = None,
) -> Coords:
    """
    Evaluate a vector expression to rational coordinates in the lattice basis.

    Atoms are basis names, named vectors and bracketed rows such as [1/4 0 0];
    they combine linearly with rational constants.

    Parameters
    ----------
    node : Node
        Parsed expression.
    lattice : Lattice
        Lattice whose basis gives the coordinates.
    named : mapping
        Named vectors of this lattice.
    text : str
        Source text for diagnostics.
    location : SourceLocation, optional
        Source location for diagnostics.

    Raises
    ------
    UnknownNameError
        If a name is neither a basis vector nor a named vector.
    DSLSyntaxError
        If the expression is not linear in vectors.
    """
    d = lattice.rank

    def scaled(c: Fraction, v: Coords) -> Coords:
        return tuple(c * x for x in v)

    def walk(n: Node) -> Coords:
        if isinstance(n, Name):
            if n.name in named:
                return tuple(Fraction(c) for c in named[n.name])
            if n.name in lattice.basis_names:
                return lattice.basis_vector(lattice.basis_names.index(n.name)).coords
            raise UnknownNameError("vector", n.name, sorted(set(lattice.basis_names) | set(named)), location)
        if isinstance(n, Row):
            if len(n.items) != d:
                raise DSLSyntaxError(text, n.position, f"a row of {d} coordinates", location)
            return tuple(rational(item, text, location) for item in n.items)
        if isinstance(n, Neg):
            return scaled(Fraction(-1), walk(n.operand))
        if isinstance(n, BinOp):
            if n.op in "+-":
                left, right = walk(n.left), walk(n.right)
                sign = 1 if n.op == "+" else -1
                return tuple(a + sign * b for a, b in zip(left, right))
            left_constant = constant(n.left)
            right_constant = constant(n.right)
            if n.op == "*" and left_constant is not None:
                return scaled(left_constant, walk(n.right))
            if right_constant is not None and right_constant != 0:
                factor = right_constant if n.op == "*" else 1 / right_constant
                return scaled(factor, walk(n.left))
        if isinstance(n, Num) and n.value == 0:
            return tuple(Fraction(0) for _ in range(d))
        raise DSLSyntaxError(text, n.position, f"a vector of {lattice.name}", location)

    return walk(node)


# Line-oriented blocks


@dataclass(frozen=True)
class Block:
    """
    A declaration line with its indented continuation rows.

    Attributes
    ----------
    words : tuple[str, ...]
        The declaration line split on whitespace (the first word is the keyword).
    line : str
        The declaration line without comment.
    rows : tuple[str, ...]
        Stripped continuation rows.
    location : SourceLocation
        Location of the declaration line.
    row_locations : tuple[SourceLocation, ...]
        Location of each row.
    """

    words: tuple[str, ...]
    line: str = field(compare=False)
    rows: tuple[str, ...] = ()
    location: SourceLocation = field(default_factory=SourceLocation, compare=False)
    row_locations: tuple[SourceLocation, ...] = field(default=(), compare=False)

    @property
    def keyword(self) -> str:
        return self.words[0]


def strip_comment(line: str) -> str:
    """Remove a '#' comment that is not inside double quotes."""
    quoted = False
    for k, ch in enumerate(line):
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:k]
    return line


def read_blocks(text: str, filename: Optional[str] = None) -> list[Block]:
    """
    Split UTF-8 text into declaration blocks.

    Non-indented lines start a declaration; indented lines are its rows. Blank
    lines and '#' comments are ignored.

    Raises
    ------
    ScenarioError
        If an indented row precedes every declaration.
    """
    blocks: list[Block] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = strip_comment(raw).rstrip()
        if not line.strip():
            continue
        location = SourceLocation.in_file(filename, number)
        if line[0].isspace():
            if not blocks:
                raise ScenarioError("Indented row outside any declaration", location)
            last = blocks[-1]
            blocks[-1] = Block(last.words, last.line, last.rows + (line.strip(),), last.location,
                               last.row_locations + (location,))
        else:
            blocks.append(Block(tuple(line.split()), line, (), location, ()))
    return blocks


def _expect_words(block: Block, pattern: Sequence[Optional[str]], usage: str) -> None:
    words = block.words
    if len(words) < len(pattern) or any(p is not None and w != p for w, p in zip(words, pattern)):
        raise ScenarioError(f"Malformed declaration; expected '{usage}'", block.location)


def integer_row(row: str, length: int, location: Optional[SourceLocation] = None) -> tuple[int, ...]:
    """
    Parse a row of exactly length integers.

    Raises
    ------
    ScenarioError
        If a token is not an integer or the length differs.
    """
    words = row.split()
    if len(words) != length or not all(re.fullmatch(r"[+-]?\d+", w) for w in words):
        raise ScenarioError(f"Expected {length} integers, got '{row}'", location)
    return tuple(int(w) for w in words)


def parse_lattice(block: Block) -> Lattice:
    """
    Build a lattice from 'lattice <name> rank <d> [basis <n1> ... <nd>]' and d Gram rows.

    Raises
    ------
    ScenarioError
        If the header or rows are malformed.
    LatticeError
        If the Gram matrix is not symmetric, positive definite and even.
    """
    _expect_words(block, ("lattice", None, "rank", None), "lattice <name> rank <d> [basis <names>]")
    name = block.words[1]
    if not block.words[3].isdigit():
        raise ScenarioError(f"Rank of lattice '{name}' must be a positive integer", block.location)
    d = int(block.words[3])
    names: tuple[str, ...] = ()
    if len(block.words) > 4:
        if block.words[4] != "basis" or len(block.words) != 5 + d:
            raise ScenarioError(f"Lattice '{name}' expects 'basis' followed by {d} names", block.location)
        names = tuple(block.words[5:])
    if len(block.rows) != d:
        raise ScenarioError(f"Lattice '{name}' needs {d} Gram rows, got {len(block.rows)}", block.location)
    gram = tuple(integer_row(row, d, loc) for row, loc in zip(block.rows, _row_locations(block)))
    try:
        return Lattice(name, gram, names)
    except LatticeError as error:
        raise ScenarioError(str(error), block.location) from error


def _row_locations(block: Block) -> tuple[SourceLocation, ...]:
    return block.row_locations or tuple(block.location for _ in block.rows)


def coordinates(
    row: str, lattice: Lattice, named: Mapping[str, Coords], location: Optional[SourceLocation] = None
) -> Coords:
    """Parse an integer coordinate row or a vector expression."""
    if all(re.fullmatch(r"[+-]?\d+", w) for w in row.split()):
        return tuple(Fraction(c) for c in integer_row(row, lattice.rank, location))
    return vector(parse_expression(row, location), lattice, named, row, location)


def parse_sublattice(
    block: Block, lattices: Mapping[str, Lattice], named: Mapping[str, Mapping[str, Coords]]
) -> Sublattice:
    """
    Build 'sublattice <name> of <parent>' from generator rows.

    Each row is an integer coordinate row or a vector expression over the parent.

    Raises
    ------
    UnknownNameError
        If the parent lattice is undefined.
    ScenarioError
        If there are no generators or a generator is not integral.
    """
    _expect_words(block, ("sublattice", None, "of", None), "sublattice <name> of <parent>")
    name, parent_name = block.words[1], block.words[3]
    if parent_name not in lattices:
        raise UnknownNameError("lattice", parent_name, sorted(lattices), block.location)
    parent = lattices[parent_name]
    if not block.rows:
        raise ScenarioError(f"Sublattice '{name}' has no generator rows", block.location)
    generators = []
    for row, loc in zip(block.rows, _row_locations(block)):
        coords = coordinates(row, parent, named.get(parent_name, {}), loc)
        try:
            generators.append(as_point(coords))
        except LatticeError as error:
            raise ScenarioError(str(error), loc) from error
    try:
        return Sublattice(name, parent, tuple(generators))
    except LatticeError as error:
        raise ScenarioError(str(error), block.location) from error


def parse_isometry(
    block: Block, spaces: Mapping[str, LatticeLike], named: Mapping[str, Mapping[str, Coords]]
) -> Isometry:
    """
    Build 'isometry <name> from <source> to <target>' from rows '<vector> -> <vector>'.

    Vectors are written in the coordinates of the parents of source and target.

    Raises
    ------
    UnknownNameError
        If source or target is undefined.
    ScenarioError
        If a row lacks '->' or the map is not an isometry.
    """
    _expect_words(block, ("isometry", None, "from", None, "to", None), "isometry <name> from <source> to <target>")
    name, source_name, target_name = block.words[1], block.words[3], block.words[5]
    for space_name in (source_name, target_name):
        if space_name not in spaces:
            raise UnknownNameError("lattice or sublattice", space_name, sorted(spaces), block.location)
    source, target = spaces[source_name], spaces[target_name]
    src, tgt = parent_of(source), parent_of(target)
    domain, images = [], []
    for row, loc in zip(block.rows, _row_locations(block)):
        if row.count("->") != 1:
            raise ScenarioError(f"Isometry row must read '<vector> -> <vector>', got '{row}'", loc)
        left, right = (part.strip() for part in row.split("->"))
        domain.append(coordinates(left, src, named.get(src.name, {}), loc))
        images.append(coordinates(right, tgt, named.get(tgt.name, {}), loc))
    try:
        return isometry_from_images(name, source, target, domain, images)
    except LatticeError as error:
        raise ScenarioError(str(error), block.location) from error


@dataclass
class LatticeFile:
    """Lattices, sublattices, named vectors and isometries read from a description file."""

    lattices: dict[str, Lattice] = field(default_factory=dict)
    sublattices: dict[str, Sublattice] = field(default_factory=dict)
    vectors: dict[str, dict[str, Coords]] = field(default_factory=dict)
    isometries: dict[str, Isometry] = field(default_factory=dict)

    def spaces(self) -> dict[str, LatticeLike]:
        """Lattices and sublattices by name."""
        return {**self.lattices, **self.sublattices}

    def add(self, block: Block) -> bool:
        """
        Evaluate a lattice-level declaration; return False for other keywords.

        Raises
        ------
        ScenarioError
            If the name is already taken or the declaration is malformed.
        """
        keyword = block.keyword
        if keyword not in ("lattice", "sublattice", "isometry", "vector"):
            return False
        name = block.words[1] if len(block.words) > 1 else ""
        if keyword in ("lattice", "sublattice") and name in self.spaces():
            raise ScenarioError(f"'{name}' is already defined", block.location)
        if keyword == "lattice":
            self.lattices[name] = parse_lattice(block)
        elif keyword == "sublattice":
            self.sublattices[name] = parse_sublattice(block, self.lattices, self.vectors)
        elif keyword == "isometry":
            if name in self.isometries:
                raise ScenarioError(f"Isometry '{name}' is already defined", block.location)
            self.isometries[name] = parse_isometry(block, self.spaces(), self.vectors)
        else:
            self._add_vector(block)
        return True

    def _add_vector(self, block: Block) -> None:
        # vector <name> in <lattice> = <expr>
        head, _, body = block.line.partition("=")
        words = head.split()
        if len(words) != 4 or words[2] != "in" or not body.strip():
            raise ScenarioError("Malformed declaration; expected 'vector <name> in <lattice> = <expr>'", block.location)
        name, lattice_name = words[1], words[3]
        if lattice_name not in self.lattices:
            raise UnknownNameError("lattice", lattice_name, sorted(self.lattices), block.location)
        lattice = self.lattices[lattice_name]
        table = self.vectors.setdefault(lattice_name, {})
        if name in table or name in lattice.basis_names:
            raise ScenarioError(f"Vector '{name}' is already defined on {lattice_name}", block.location)
        text = body.strip()
        table[name] = vector(parse_expression(text, block.location), lattice, table, text, block.location)


def load_lattice_file(text: str, filename: Optional[str] = None) -> LatticeFile:
    """
    Read a lattice description file.

    Raises
    ------
    ScenarioError
        On malformed or unknown declarations.
    """
    result = LatticeFile()
    for block in read_blocks(text, filename):
        if not result.add(block):
            raise ScenarioError(f"Unknown declaration '{block.keyword}' in a lattice file", block.location)
    return result
