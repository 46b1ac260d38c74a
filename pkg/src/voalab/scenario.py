"""Scenario files: declarations, a lazily evaluating session and the registry of checks."""

import hashlib
import logging
import re
import shlex
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Iterator, Mapping, Optional, Sequence

from .autos import (
    AutGroup,
    Automorphism,
    check_homomorphism,
    compose,
    identity,
    inner,
    lifted,
    order_of,
    perm,
    sigma,
    square_is_scalar_on,
    theta,
    trace_on_grade,
    transport,
)
from .commutant import (
    ComputedSubspace,
    annihilator,
    commutant,
    compare_dims,
    compare_spaces,
    coset_space,
    fixed_subspace,
    image_subspace,
    nested_rows,
    orbifold,
    orbifold_coset_rows,
    sublattice_space,
    transport_space,
    whole_space,
)
from .config import EngineConfig, get_default_config
from .exceptions import (
    DSLSyntaxError,
    LatticeError,
    NotAnAffineTripleError,
    NotAnIsometryError,
    ScenarioError,
    UnknownNameError,
    UnrepresentablePhaseError,
    VoalabError,
)
from .fock import StateVector
from .lattice import (
    Coords,
    Isometry,
    Lattice,
    LatticeLike,
    Point,
    Sublattice,
    as_point,
    coset_decomposition,
    format_coords,
    isometry_from_images,
    parent_of,
    restricts_to,
)
from .parsing import (
    BinOp,
    Block,
    Call,
    LatticeFile,
    Name,
    Neg,
    Node,
    Row,
    constant,
    coordinates,
    integer,
    integers,
    parse_expression,
    rational,
    read_blocks,
    scalar,
    vector,
)
from .qseries import IntSeries, burnside_orbifold_dims, traces, twisted_character, voa_character
from .report import CheckRow, Report
from .scalar import GaussScalar, I, format_scalar, parse_scalar, phase
from .source_location import SourceLocation
from .vertex import (
    ConformalCertificate,
    LatticeVOA,
    check_affine_triple,
    check_axioms,
    commuting_pair,
    is_conformal,
    lattice_virasoro,
    sugawara_sl2,
)

logger = logging.getLogger(__name__)

BUILTIN_NAMES = frozenset({"id", "theta", "vac", "all", "i"})

FUNCTIONS = frozenset(
    {
        # automorphisms
        "lift", "inner", "inv", "theta", "sigma", "perm",
        # states
        "e", "h", "virasoro", "sugawara", "apply", "transport", "mode",
        # spaces
        "sublattice", "coset", "commutant", "fixed", "orbifold", "image", "intersect", "sum", "nested",
        "annihilator",
        # dimension series
        "dims", "character", "burnside", "twisted",
    }
)  # fmt: skip

# keyword -> word before the lattice name
_DEFINITIONS = {"auto": "on", "state": "in", "space": "in", "group": "on"}

# parameter kinds that name a scenario object
_NAME_KINDS = ("lattice", "space_like", "sublattice", "isometry", "auto", "state", "space", "group")
_EXPRESSION_KINDS = ("auto_expr", "state_expr", "space_expr", "dims_expr", "charge_expr", "vector", "scalar")


@dataclass(frozen=True)
class Definition:
    """
    A named automorphism, state, space or group.

    Attributes
    ----------
    kind : str
        "auto", "state", "space" or "group".
    name : str
        The defined name.
    lattice : str
        The lattice the object lives on.
    text : str
        Source text of the body.
    members : tuple[tuple[str, Node], ...]
        Parsed body; one entry per comma-separated generator for groups, a single entry otherwise.
    location : SourceLocation
        Where the definition starts.
    """

    kind: str
    name: str
    lattice: str
    text: str
    members: tuple[tuple[str, Node], ...]
    location: SourceLocation = field(default_factory=SourceLocation, compare=False)

    @property
    def node(self) -> Node:
        """Body of a single-expression definition."""
        return self.members[0][1]


@dataclass(frozen=True)
class CheckSpec:
    """
    One 'check <kind> key=value ... [optional]' line.

    Attributes
    ----------
    kind : str
        Registry name of the check.
    params : dict[str, str]
        Raw parameter values.
    optional : bool
        A gated check that is not enabled reports OK instead of FAIL.
    location : SourceLocation
        Where the check is declared.
    """

    kind: str
    params: dict[str, str]
    optional: bool = False
    location: SourceLocation = field(default_factory=SourceLocation, compare=False)

    def __getitem__(self, key: str) -> str:
        return self.params[key]

    def __contains__(self, key: str) -> bool:
        return key in self.params

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        """Raw value of a parameter, or default."""
        return self.params.get(key, default)

    @property
    def display_name(self) -> str:
        """Name used in report rows: kind, or kind:label."""
        label = self.params.get("label")
        return f"{self.kind}:{label}" if label else self.kind


CheckFunction = Callable[["Session", CheckSpec], list[CheckRow]]


@dataclass(frozen=True)
class CheckDefinition:
    """
    A registered check.

    Attributes
    ----------
    name : str
        Registry name used after 'check'.
    function : callable
        function(session, spec) -> list[CheckRow].
    required : dict[str, str]
        Required parameters and their kinds.
    accepted : dict[str, str]
        Every accepted parameter (required, optional and 'label') and its kind.
    summary : str
        First line of the function's docstring.
    gate : str | None
        EngineConfig flag that must be set for the check to run.
    """

    name: str
    function: CheckFunction
    required: dict[str, str]
    accepted: dict[str, str]
    summary: str
    gate: Optional[str] = None


CHECKS: dict[str, CheckDefinition] = {}


def register_check(
    name: str,
    required: Optional[Mapping[str, str]] = None,
    optional: Optional[Mapping[str, str]] = None,
    gate: Optional[str] = None,
) -> Callable[[CheckFunction], CheckFunction]:
    """
    Register a check function under a scenario name.

    Parameters
    ----------
    name : str
        The name used in 'check <name> ...' lines.
    required : mapping, optional
        Required parameter names and their kinds.
    optional : mapping, optional
        Optional parameter names and their kinds.
    gate : str, optional
        EngineConfig attribute enabling the check.

    Returns
    -------
    callable
        Decorator returning the function unchanged.
    """

    def decorator(function: CheckFunction) -> CheckFunction:
        needed = dict(required or {})
        doc = (function.__doc__ or "").strip()
        CHECKS[name] = CheckDefinition(
            name, function, needed, {**needed, **(optional or {}), "label": "text"}, doc.splitlines()[0] if doc else "",
            gate,
        )
        return function

    return decorator


def split_top_level(text: str, separator: str = ",") -> list[str]:
    """Split on separators outside parentheses and brackets."""
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == separator and depth == 0:
            parts.append(text[start:k].strip())
            start = k + 1
    parts.append(text[start:].strip())
    return parts


def _walk(node: Node) -> Iterator[Node]:
    yield node
    if isinstance(node, Call):
        for arg in node.args:
            yield from _walk(arg)
    elif isinstance(node, BinOp):
        yield from _walk(node.left)
        yield from _walk(node.right)
    elif isinstance(node, Neg):
        yield from _walk(node.operand)
    elif isinstance(node, Row):
        for item in node.items:
            yield from _walk(item)


@dataclass
class Scenario:
    """
    A parsed scenario: lattice data, named objects and the ordered check list.

    Two scenarios are equal when their declarations are; source locations and
    derived tables do not take part in comparisons.

    Attributes
    ----------
    blocks : tuple[Block, ...]
        Declarations in file order.
    lattice_file : LatticeFile
        Lattices, sublattices, named vectors and isometries.
    definitions : dict[str, dict[str, Definition]]
        Named automorphisms, states, spaces and groups by kind and name.
    checks : tuple[CheckSpec, ...]
        Checks in execution order.
    cutoffs : dict[str, int]
        Minimum basis cutoff per lattice from 'cutoff' directives.
    """

    blocks: tuple[Block, ...]
    lattice_file: LatticeFile = field(compare=False, repr=False)
    definitions: dict[str, dict[str, Definition]] = field(compare=False, repr=False)
    checks: tuple[CheckSpec, ...] = field(compare=False, repr=False)
    cutoffs: dict[str, int] = field(compare=False, repr=False)

    @classmethod
    def parse(cls, text: str, filename: Optional[str] = None) -> "Scenario":
        """
        Parse and validate scenario text.

        Parameters
        ----------
        text : str
            UTF-8 scenario text.
        filename : str, optional
            Used in diagnostics ('<string>' when omitted).

        Returns
        -------
        Scenario
            The validated scenario.

        Raises
        ------
        ScenarioError
            On malformed declarations, unknown names or bad check parameters.
        """
        blocks = tuple(read_blocks(text, filename))
        lattice_file = LatticeFile()
        definitions: dict[str, dict[str, Definition]] = {kind: {} for kind in _DEFINITIONS}
        checks: list[CheckSpec] = []
        cutoffs: dict[str, int] = {}
        for block in blocks:
            if lattice_file.add(block):
                continue
            keyword = block.keyword
            if keyword in _DEFINITIONS:
                definition = _parse_definition(block, lattice_file)
                table = definitions[keyword]
                if definition.name in table or definition.name in BUILTIN_NAMES:
                    raise ScenarioError(f"{keyword} '{definition.name}' is already defined", block.location)
                table[definition.name] = definition
            elif keyword == "check":
                checks.append(_parse_check(block))
            elif keyword == "cutoff":
                if len(block.words) != 3 or not block.words[2].isdigit():
                    raise ScenarioError("Malformed declaration; expected 'cutoff <lattice> <n>'", block.location)
                if block.words[1] not in lattice_file.lattices:
                    raise UnknownNameError("lattice", block.words[1], sorted(lattice_file.lattices), block.location)
                cutoffs[block.words[1]] = int(block.words[2])
            else:
                raise ScenarioError(f"Unknown declaration '{keyword}'", block.location)
        scenario = cls(blocks, lattice_file, definitions, tuple(checks), cutoffs)
        scenario._validate()
        logger.debug("parsed scenario %s: %d declarations, %d checks", filename or "<string>", len(blocks), len(checks))
        return scenario

    @classmethod
    def from_file(cls, path: "str | Path") -> "Scenario":
        """
        Read and parse a scenario file.

        Raises
        ------
        OSError
            If the file cannot be read.
        ScenarioError
            If the contents are invalid.
        """
        path = Path(path)
        return cls.parse(path.read_text(encoding="utf-8"), str(path))

    def to_text(self) -> str:
        """Canonical text: one declaration per line, rows indented by two spaces."""
        lines = []
        for block in self.blocks:
            lines.append(" ".join(block.words))
            lines.extend(f"  {row}" for row in block.rows)
        return "\n".join(lines) + "\n"

    @property
    def digest(self) -> str:
        """SHA-256 of the canonical text."""
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()

    # Lookups

    def lattice(self, name: str, location: Optional[SourceLocation] = None) -> Lattice:
        """The lattice of that name."""
        lattices = self.lattice_file.lattices
        if name not in lattices:
            raise UnknownNameError("lattice", name, sorted(lattices), location)
        return lattices[name]

    def sublattice(self, name: str, location: Optional[SourceLocation] = None) -> Sublattice:
        """The sublattice of that name."""
        sublattices = self.lattice_file.sublattices
        if name not in sublattices:
            raise UnknownNameError("sublattice", name, sorted(sublattices), location)
        return sublattices[name]

    def space_like(self, name: str, location: Optional[SourceLocation] = None) -> LatticeLike:
        """A lattice or sublattice."""
        spaces = self.lattice_file.spaces()
        if name not in spaces:
            raise UnknownNameError("lattice or sublattice", name, sorted(spaces), location)
        return spaces[name]

    def isometry(self, name: str, location: Optional[SourceLocation] = None) -> Isometry:
        """The isometry of that name."""
        isometries = self.lattice_file.isometries
        if name not in isometries:
            raise UnknownNameError("isometry", name, sorted(isometries), location)
        return isometries[name]

    def definition(self, kind: str, name: str, location: Optional[SourceLocation] = None) -> Definition:
        """The named automorphism, state, space or group."""
        table = self.definitions[kind]
        if name not in table:
            raise UnknownNameError(kind, name, sorted(table), location)
        return table[name]

    def named_vectors(self, lattice: Lattice) -> dict[str, Coords]:
        """Named vectors declared on a lattice."""
        return self.lattice_file.vectors.get(lattice.name, {})

    # Validation

    def _known_names(self) -> set[str]:
        names = set(BUILTIN_NAMES)
        names.update(self.lattice_file.spaces())
        names.update(self.lattice_file.isometries)
        for lattice in self.lattice_file.lattices.values():
            names.update(lattice.basis_names)
        for table in self.lattice_file.vectors.values():
            names.update(table)
        for table in self.definitions.values():
            names.update(table)
        return names

    def _check_names(self, node: Node, text: str, location: Optional[SourceLocation], known: set[str]) -> None:
        for sub in _walk(node):
            if isinstance(sub, Call) and sub.name not in FUNCTIONS:
                raise UnknownNameError("function", sub.name, sorted(FUNCTIONS), location)
            if isinstance(sub, Name) and sub.name not in known:
                raise UnknownNameError("name", sub.name, sorted(known - BUILTIN_NAMES), location)

    def _validate(self) -> None:
        known = self._known_names()
        for table in self.definitions.values():
            for definition in table.values():
                for text, node in definition.members:
                    self._check_names(node, text, definition.location, known)
        for spec in self.checks:
            self._validate_check(spec, known)

    def _validate_check(self, spec: CheckSpec, known: set[str]) -> None:
        location = spec.location
        if spec.kind not in CHECKS:
            raise UnknownNameError("check", spec.kind, sorted(CHECKS), location)
        definition = CHECKS[spec.kind]
        for key in definition.required:
            if key not in spec.params:
                raise ScenarioError(f"Check '{spec.kind}' needs parameter '{key}'", location)
        for key, value in spec.params.items():
            if key not in definition.accepted:
                raise UnknownNameError(f"parameter of '{spec.kind}'", key, sorted(definition.accepted), location)
            kind = definition.accepted[key]
            if kind in ("lattice", "space_like", "sublattice", "isometry"):
                lookup = {"lattice": self.lattice, "space_like": self.space_like, "sublattice": self.sublattice,
                          "isometry": self.isometry}[kind]
                lookup(value, location)
            elif kind in self.definitions:
                self.definition(kind, value, location)
            elif kind == "states":
                for name in split_top_level(value):
                    self.definition("state", name, location)
            elif kind == "int":
                if not re.fullmatch(r"[+-]?\d+", value):
                    raise ScenarioError(f"Parameter '{key}' of '{spec.kind}' must be an integer, got '{value}'", location)
            elif kind == "ints":
                if not all(re.fullmatch(r"[+-]?\d+", v) for v in split_top_level(value)):
                    raise ScenarioError(f"Parameter '{key}' of '{spec.kind}' must list integers, got '{value}'", location)
            elif kind in _EXPRESSION_KINDS:
                self._check_names(parse_expression(value, location), value, location, known)


def _parse_definition(block: Block, lattice_file: LatticeFile) -> Definition:
    # <keyword> <name> on|in <lattice> = <expr> [continuation rows]
    keyword = block.keyword
    head, equals, body = block.line.partition("=")
    words = head.split()
    usage = f"{keyword} <name> {_DEFINITIONS[keyword]} <lattice> = <expression>"
    if len(words) != 4 or words[2] != _DEFINITIONS[keyword] or not equals:
        raise ScenarioError(f"Malformed declaration; expected '{usage}'", block.location)
    name, lattice_name = words[1], words[3]
    if lattice_name not in lattice_file.lattices:
        raise UnknownNameError("lattice", lattice_name, sorted(lattice_file.lattices), block.location)
    text = " ".join([body.strip(), *block.rows]).strip()
    if not text:
        raise ScenarioError(f"Empty body in '{keyword} {name}'", block.location)
    pieces = split_top_level(text) if keyword == "group" else [text]
    members = tuple((piece, parse_expression(piece, block.location)) for piece in pieces)
    return Definition(keyword, name, lattice_name, text, members, block.location)


def _parse_check(block: Block) -> CheckSpec:
    try:
        words = shlex.split(" ".join([block.line, *block.rows]))
    except ValueError as error:
        raise ScenarioError(f"Malformed check line: {error}", block.location) from error
    if len(words) < 2:
        raise ScenarioError("Malformed declaration; expected 'check <kind> key=value ...'", block.location)
    params: dict[str, str] = {}
    optional = False
    for word in words[2:]:
        if word == "optional":
            optional = True
            continue
        key, equals, value = word.partition("=")
        if not equals or not key:
            raise ScenarioError(f"Check parameter must read key=value, got '{word}'", block.location)
        if key in params:
            raise ScenarioError(f"Check parameter '{key}' given twice", block.location)
        params[key] = value
    return CheckSpec(words[1], params, optional, block.location)


def builtin_scenario() -> Scenario:
    """
    The shipped scenario: M^tau in V_{A1^4} against the Z2 x Z2 orbifold of V_{Z gamma1 + Z gamma2}.

    Returns
    -------
    Scenario
        Parsed from the packaged data file orbifold.scn.
    """
    text = resources.files("voalab").joinpath("data", "orbifold.scn").read_text(encoding="utf-8")
    return Scenario.parse(text, "orbifold.scn")


@dataclass(frozen=True)
class _Context:
    lattice: Lattice
    text: str
    location: Optional[SourceLocation]


class Session:
    """
    Evaluates scenario objects on demand and runs checks.

    VOAs, named objects and inline expressions are built once and cached, so
    checks sharing a commutant or an automorphism reuse its matrices.

    Parameters
    ----------
    scenario : Scenario
        The scenario.
    config : EngineConfig, optional
        Engine configuration (defaults to the package default).
    """

    def __init__(self, scenario: Scenario, config: Optional[EngineConfig] = None):
        self.scenario = scenario
        self.config = config or get_default_config()
        self._voas: dict[str, LatticeVOA] = {}
        self._named: dict[tuple[str, str], Any] = {}
        self._inline: dict[tuple[str, str, Node], Any] = {}
        self._active: list[tuple[str, str]] = []
        self._certificates: dict[str, ConformalCertificate] = {}

    @property
    def max_weight(self) -> int:
        """The weight cutoff W."""
        return self.config.max_weight

    def voa(self, lattice_name: str) -> LatticeVOA:
        """The lattice VOA of a scenario lattice, built with the larger of W+1 and its declared cutoff."""
        if lattice_name not in self._voas:
            lattice = self.scenario.lattice(lattice_name)
            cutoff = max(self.config.basis_cutoff, self.scenario.cutoffs.get(lattice_name, 0))
            logger.debug("building V_%s with cutoff %d", lattice_name, cutoff)
            self._voas[lattice_name] = LatticeVOA(lattice, cutoff, self.config)
        return self._voas[lattice_name]

    # Named objects

    def lookup(self, kind: str, name: str, location: Optional[SourceLocation] = None) -> Any:
        """
        Evaluate a named automorphism, state, space or group.

        Raises
        ------
        UnknownNameError
            If no such object is defined.
        ScenarioError
            If the definition refers to itself.
        """
        key = (kind, name)
        if key in self._named:
            return self._named[key]
        definition = self.scenario.definition(kind, name, location)
        if key in self._active:
            cycle = " -> ".join(n for _, n in self._active[self._active.index(key):] + [key])
            raise ScenarioError(f"Circular definition: {cycle}", definition.location)
        self._active.append(key)
        try:
            context = _Context(self.scenario.lattice(definition.lattice), definition.text, definition.location)
            if kind == "group":
                generators = [self._auto(node, _Context(context.lattice, text, context.location))
                              for text, node in definition.members]
                value = AutGroup(generators, self.max_weight, self.config.group_bound, name)
            else:
                value = self._evaluate_node(kind, definition.node, context)
        finally:
            self._active.pop()
        self._named[key] = value
        return value

    def auto(self, name: str) -> Automorphism:
        """A named automorphism."""
        return self.lookup("auto", name)

    def state(self, name: str) -> StateVector:
        """A named state."""
        return self.lookup("state", name)

    def space(self, name: str) -> ComputedSubspace:
        """A named space."""
        return self.lookup("space", name)

    def group(self, name: str) -> AutGroup:
        """A named group."""
        return self.lookup("group", name)

    def lattice_of(self, kind: str, name: str) -> str:
        """Name of the lattice a named object lives on."""
        return self.scenario.definition(kind, name).lattice

    def evaluate(self, kind: str, lattice_name: str, text: str, location: Optional[SourceLocation] = None) -> Any:
        """
        Evaluate an inline expression ("auto", "state" or "space") on a lattice.

        Raises
        ------
        DSLSyntaxError
            If the text does not parse or has the wrong shape.
        UnknownNameError
            If it names something undefined.
        """
        context = _Context(self.scenario.lattice(lattice_name, location), text, location)
        return self._evaluate_node(kind, parse_expression(text, location), context)

    def certificate(self, state_name: str) -> ConformalCertificate:
        """Conformal certificate of a named state, cached."""
        if state_name not in self._certificates:
            voa = self.voa(self.lattice_of("state", state_name))
            self._certificates[state_name] = is_conformal(voa, self.state(state_name), self.config)
        return self._certificates[state_name]

    def _evaluate_node(self, kind: str, node: Node, context: _Context) -> Any:
        key = (kind, context.lattice.name, node)
        if key not in self._inline:
            evaluator = {"auto": self._auto, "state": self._state, "space": self._space}[kind]
            self._inline[key] = evaluator(node, context)
        return self._inline[key]

    # Shared helpers

    def _syntax(self, node: Node, expected: str, context: _Context) -> DSLSyntaxError:
        return DSLSyntaxError(context.text, node.position, expected, context.location)

    def _arity(self, call: Call, counts: Sequence[int], context: _Context) -> None:
        if len(call.args) not in counts:
            shown = " or ".join(str(c) for c in counts)
            raise self._syntax(call, f"{call.name} with {shown} argument(s)", context)

    def _name(self, node: Node, what: str, context: _Context) -> str:
        if not isinstance(node, Name):
            raise self._syntax(node, f"the name of {what}", context)
        return node.name

    def _named_on(self, kind: str, name: str, context: _Context) -> Any:
        definition = self.scenario.definition(kind, name, context.location)
        if definition.lattice != context.lattice.name:
            raise ScenarioError(
                f"{kind} '{name}' lives on {definition.lattice}, not on {context.lattice.name}", context.location
            )
        return self.lookup(kind, name, context.location)

    def _vector(self, node: Node, context: _Context) -> Coords:
        named = self.scenario.named_vectors(context.lattice)
        return vector(node, context.lattice, named, context.text, context.location)

    def _point(self, node: Node, context: _Context) -> Point:
        try:
            return as_point(self._vector(node, context))
        except LatticeError as error:
            raise ScenarioError(str(error), context.location) from error

    def _sublattice_of(self, node: Node, context: _Context) -> LatticeLike:
        space = self.scenario.space_like(self._name(node, "a sublattice", context), context.location)
        if parent_of(space) != context.lattice:
            raise ScenarioError(f"'{space.name}' is not a sublattice of {context.lattice.name}", context.location)
        return space

    def _isometry_into(self, node: Node, context: _Context) -> tuple[Isometry, _Context]:
        iso = self.scenario.isometry(self._name(node, "an isometry", context), context.location)
        if parent_of(iso.target) != context.lattice:
            raise ScenarioError(f"Isometry '{iso.name}' does not map into {context.lattice.name}", context.location)
        return iso, _Context(parent_of(iso.source), context.text, context.location)

    def _blocks(self, call: Call, context: _Context) -> list[int]:
        blocks = [b - 1 for arg in call.args for b in integers(arg, context.text, context.location)]
        if not blocks:
            raise self._syntax(call, f"{call.name} with block indices", context)
        return blocks

    # Automorphisms

    def _auto(self, node: Node, context: _Context) -> Automorphism:
        voa = self.voa(context.lattice.name)
        if isinstance(node, Name):
            if node.name == "id":
                return identity(voa)
            if node.name == "theta":
                return theta(voa)
            return self._named_on("auto", node.name, context)
        if isinstance(node, BinOp) and node.op == "*":
            return compose(self._auto(node.left, context), self._auto(node.right, context))
        if not isinstance(node, Call):
            raise self._syntax(node, "an automorphism", context)
        if node.name == "lift":
            self._arity(node, (1,), context)
            iso = self.scenario.isometry(self._name(node.args[0], "an isometry", context), context.location)
            if not iso.is_automorphism or iso.source != context.lattice:
                raise ScenarioError(f"'{iso.name}' is not an automorphism of {context.lattice.name}", context.location)
            return lifted(voa, iso)
        if node.name == "inner":
            self._arity(node, (1,), context)
            return inner(voa, self._vector(node.args[0], context))
        if node.name == "inv":
            self._arity(node, (1,), context)
            return self._auto(node.args[0], context).inverse()
        if node.name == "theta":
            return theta(voa, self._blocks(node, context))
        if node.name == "sigma":
            return sigma(voa, self._blocks(node, context), self.config)
        if node.name == "perm":
            return perm(voa, self._blocks(node, context))
        raise self._syntax(node, "an automorphism", context)

    # States

    def _state(self, node: Node, context: _Context) -> StateVector:
        voa = self.voa(context.lattice.name)
        lattice = context.lattice
        if isinstance(node, Name):
            if node.name == "vac":
                return voa.vacuum
            return self._named_on("state", node.name, context)
        if isinstance(node, Neg):
            return -self._state(node.operand, context)
        if isinstance(node, BinOp):
            if node.op in "+-":
                left, right = self._state(node.left, context), self._state(node.right, context)
                return left + right if node.op == "+" else left - right
            if node.op == "*":
                factor = constant(node.left, allow_imaginary=True)
                if factor is not None:
                    return self._state(node.right, context) * factor
                factor = constant(node.right, allow_imaginary=True)
                if factor is not None:
                    return self._state(node.left, context) * factor
            if node.op == "/":
                divisor = constant(node.right, allow_imaginary=True)
                if divisor:
                    return self._state(node.left, context) * (Fraction(1) / divisor)
            raise self._syntax(node, "a scalar multiple of a state", context)
        if not isinstance(node, Call):
            raise self._syntax(node, "a state", context)
        args = node.args
        if node.name == "e":
            self._arity(node, (1,), context)
            return StateVector.exponential(lattice, self._point(args[0], context))
        if node.name == "h":
            self._arity(node, (1,), context)
            return StateVector.heisenberg(lattice, self._vector(args[0], context))
        if node.name == "virasoro":
            self._arity(node, (0, 1), context)
            if not args:
                return lattice_virasoro(voa)
            space = self._sublattice_of(args[0], context)
            return lattice_virasoro(voa, space if isinstance(space, Sublattice) else None)
        if node.name == "sugawara":
            self._arity(node, (4,), context)
            e, h, f = (self._state(arg, context) for arg in args[:3])
            return sugawara_sl2(voa, e, h, f, integer(args[3], context.text, context.location))
        if node.name == "apply":
            self._arity(node, (2,), context)
            return self._auto(args[0], context).apply(self._state(args[1], context))
        if node.name == "transport":
            self._arity(node, (2,), context)
            iso, source = self._isometry_into(args[0], context)
            return transport(iso, self._evaluate_node("state", args[1], source), voa)
        if node.name == "mode":
            self._arity(node, (3,), context)
            u, v = self._state(args[0], context), self._state(args[2], context)
            return voa.mode(u, integer(args[1], context.text, context.location), v)
        raise self._syntax(node, "a state", context)

    # Spaces

    def _space(self, node: Node, context: _Context) -> ComputedSubspace:
        voa = self.voa(context.lattice.name)
        w = self.max_weight
        if isinstance(node, Name):
            if node.name == "all":
                return whole_space(voa, w)
            return self._named_on("space", node.name, context)
        if not isinstance(node, Call):
            raise self._syntax(node, "a space", context)
        args = node.args
        name = node.name
        if name == "sublattice":
            self._arity(node, (1,), context)
            space = self._sublattice_of(args[0], context)
            return sublattice_space(voa, space, w) if isinstance(space, Sublattice) else whole_space(voa, w)
        if name == "coset":
            self._arity(node, (2,), context)
            space = self._sublattice_of(args[0], context)
            if not isinstance(space, Sublattice):
                raise self._syntax(args[0], "a sublattice", context)
            return coset_space(voa, space, self._point(args[1], context), w)
        if name == "commutant":
            self._arity(node, (1, 2), context)
            within = self._evaluate_node("space", args[1], context) if len(args) == 2 else None
            return commutant(voa, self._evaluate_node("state", args[0], context), w, within, _label(args[0]))
        if name == "nested":
            self._arity(node, (2,), context)
            outer = self._evaluate_node("space", Call("commutant", (args[0],)), context)
            return commutant(voa, self._evaluate_node("state", args[1], context), w, outer, _label(args[1]))
        if name == "fixed":
            self._arity(node, (1,), context)
            return fixed_subspace(self._named_on("group", self._name(args[0], "a group", context), context), w)
        if name == "orbifold":
            self._arity(node, (2,), context)
            group = self._named_on("group", self._name(args[1], "a group", context), context)
            return orbifold(self._evaluate_node("space", args[0], context), group)
        if name == "image":
            self._arity(node, (2,), context)
            return image_subspace(self._evaluate_node("auto", args[0], context),
                                  self._evaluate_node("space", args[1], context))
        if name in ("intersect", "sum"):
            self._arity(node, (2,), context)
            left, right = (self._evaluate_node("space", arg, context) for arg in args)
            return left.intersect(right) if name == "intersect" else left.sum(right)
        if name == "transport":
            self._arity(node, (2,), context)
            iso, source = self._isometry_into(args[0], context)
            return transport_space(iso, self._evaluate_node("space", args[1], source), voa)
        if name == "annihilator":
            if not args:
                raise self._syntax(node, "annihilator with generator states", context)
            generators = [self._evaluate_node("state", arg, context) for arg in args]
            return annihilator(voa, generators, w, ",".join(_label(arg) for arg in args))
        raise self._syntax(node, "a space", context)

    # Dimension series

    def dims(self, text: str, location: Optional[SourceLocation] = None) -> IntSeries:
        """
        Evaluate a dimension expression to a q-series truncated at W.

        Atoms: dims(<space>), character(<lattice or sublattice>[, <shift>]),
        burnside(<group>), twisted(<auto>) and integer constants.
        """
        return self._dims(parse_expression(text, location), text, location)

    def _dims(self, node: Node, text: str, location: Optional[SourceLocation]) -> IntSeries:
        w = self.max_weight
        value = constant(node)
        if value is not None:
            return IntSeries({0: value}, w)
        if isinstance(node, Neg):
            return -self._dims(node.operand, text, location)
        if isinstance(node, BinOp) and node.op in "+-*":
            left, right = self._dims(node.left, text, location), self._dims(node.right, text, location)
            return left + right if node.op == "+" else left - right if node.op == "-" else left * right
        if not isinstance(node, Call) or node.name not in ("dims", "character", "burnside", "twisted"):
            raise DSLSyntaxError(text, node.position, "a dimension series", location)
        args = node.args
        if not args or not isinstance(args[0], Name) or (node.name != "character" and len(args) != 1):
            raise DSLSyntaxError(text, node.position, f"{node.name}(<name>)", location)
        name = args[0].name
        if node.name == "dims":
            return IntSeries.from_integer_coefficients(self.space(name).dims(), w)
        if node.name == "burnside":
            return burnside_orbifold_dims(self.group(name), w)
        if node.name == "twisted":
            return twisted_character(self.auto(name), w)
        space = self.scenario.space_like(name, location)
        shift = None
        if len(args) == 2:
            parent = parent_of(space)
            shift = vector(args[1], parent, self.scenario.named_vectors(parent), text, location)
        elif len(args) > 2:
            raise DSLSyntaxError(text, node.position, "character(<lattice>[, <shift>])", location)
        return voa_character(space, shift, w)

    # Running

    def run(self, only: Optional[Sequence[str]] = None) -> Report:
        """
        Run the scenario's checks in order.

        Parameters
        ----------
        only : sequence of str, optional
            Run only checks whose kind or display name is listed.

        Returns
        -------
        Report
            Rows of every executed check.

        Raises
        ------
        UnknownNameError
            If the filter matches no check.
        ScenarioError
            If a check refers to something that cannot be evaluated.
        """
        from . import __version__

        checks = list(enumerate(self.scenario.checks))
        if only:
            wanted = set(only)
            checks = [(k, spec) for k, spec in checks if spec.kind in wanted or spec.display_name in wanted]
            if not checks:
                available = sorted({spec.display_name for spec in self.scenario.checks})
                raise UnknownNameError("check", ", ".join(only), available)
        report = Report(__version__, self.scenario.digest, self.max_weight)
        for index, spec in checks:
            start = time.perf_counter()
            rows = self.run_check(spec)
            elapsed = time.perf_counter() - start
            report.extend(rows)
            report.timings[f"{index:02d}:{spec.display_name}"] = elapsed
            logger.info("check %s: %d rows in %.2fs", spec.display_name, len(rows), elapsed)
        logger.debug("session caches: %s", {name: voa.cache_size for name, voa in self._voas.items()})
        return report

    def run_check(self, spec: CheckSpec) -> list[CheckRow]:
        """
        Run one check; engine errors become a FAIL row.

        Raises
        ------
        ScenarioError
            Scenario problems are not converted into rows.
        """
        definition = CHECKS[spec.kind]
        name = spec.display_name
        if definition.gate is not None and not getattr(self.config, definition.gate):
            flag = "--" + definition.gate.replace("_", "-")
            if spec.optional:
                logger.info("check %s skipped: %s not given", name, flag)
                return [CheckRow(name, None, "skipped", "skipped", "OK")]
            return [CheckRow(name, None, "skipped", flag, "FAIL")]
        try:
            return definition.function(self, spec)
        except ScenarioError:
            raise
        except VoalabError as error:
            logger.warning("check %s: %s", name, error)
            grade = getattr(error, "grade", None)
            return [CheckRow.compare(name, grade if isinstance(grade, int) else None, type(error).__name__,
                                     "no-error", ok=False)]


def _label(node: Node) -> str:
    return node.name if isinstance(node, Name) else "e"


def _ints(value: str) -> list[int]:
    return [int(v) for v in split_top_level(value)]


def _state_pair(session: Session, spec: CheckSpec, *keys: str) -> tuple[LatticeVOA, list[StateVector]]:
    lattices = {session.lattice_of("state", spec[key]) for key in keys}
    if len(lattices) != 1:
        raise ScenarioError(f"States {', '.join(spec[k] for k in keys)} live on different lattices", spec.location)
    return session.voa(lattices.pop()), [session.state(spec[key]) for key in keys]


def _on_lattice(session: Session, spec: CheckSpec, kind: str, key: str) -> Any:
    return session.evaluate(kind, spec["lattice"], spec[key], spec.location)


# Foundations


@register_check("scalar-field")
def _check_scalar_field(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Field axioms of Q(i), exact inverses, the text form and the phase homomorphism."""
    name = spec.display_name
    values = [GaussScalar(Fraction(p), Fraction(q, 3)) for p in (-2, 0, 1) for q in (-1, 0, 2)]
    values += [I, GaussScalar(Fraction(1, 2), Fraction(-3, 4))]
    failures = 0
    for a in values:
        for b in values:
            for c in values[:4]:
                if not ((a + b) + c == a + (b + c) and (a * b) * c == a * (b * c) and a * (b + c) == a * b + a * c
                        and a + b == b + a and a * b == b * a):
                    failures += 1
    inverses = sum(1 for a in values if a and a * a.inverse() != GaussScalar(1))
    text_form = sum(1 for a in values if parse_scalar(format_scalar(a)) != a)
    quarters = [Fraction(k, 4) for k in range(-4, 5)]
    homomorphism = sum(1 for r in quarters for s in quarters if phase(r + s) != phase(r) * phase(s))
    try:
        phase(Fraction(1, 3))
        rejection = "accepted"
    except UnrepresentablePhaseError:
        rejection = "rejected"
    return [
        CheckRow.compare(name, None, f"field-axioms:{failures}", "field-axioms:0"),
        CheckRow.compare(name, None, f"inverses:{inverses}", "inverses:0"),
        CheckRow.compare(name, None, f"text-form:{text_form}", "text-form:0"),
        CheckRow.compare(name, None, f"phase-homomorphism:{homomorphism}", "phase-homomorphism:0"),
        CheckRow.compare(name, None, f"phase(1/3):{rejection}", "phase(1/3):rejected"),
    ]


@register_check("isometry", required={"name": "isometry"}, optional={"order": "int"})
def _check_isometry(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Gram matrix of the generators against the Gram matrix of their images, and the order."""
    iso = session.scenario.isometry(spec["name"])
    src, tgt = parent_of(iso.source), parent_of(iso.target)
    lhs = [src.inner_coords(x, y) for x in iso.domain for y in iso.domain]
    rhs = [tgt.inner_coords(x, y) for x in iso.images for y in iso.images]
    rows = [CheckRow.compare(spec.display_name, None, lhs, rhs)]
    if "order" in spec:
        rows.append(CheckRow.compare(spec.display_name, None, iso.order(session.config.group_bound), int(spec["order"])))
    return rows


@register_check("isometry-rejects", required={"source": "space_like", "target": "space_like", "map": "text"})
def _check_isometry_rejects(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """A map that breaks an inner product must be rejected."""
    scenario = session.scenario
    source = scenario.space_like(spec["source"])
    target = scenario.space_like(spec["target"])
    src, tgt = parent_of(source), parent_of(target)
    domain, images = [], []
    for part in (p for p in spec["map"].split(";") if p.strip()):
        if part.count("->") != 1:
            raise ScenarioError(f"Map entries must read '<vector> -> <vector>', got '{part.strip()}'", spec.location)
        left, right = (side.strip() for side in part.split("->"))
        domain.append(coordinates(left, src, scenario.named_vectors(src), spec.location))
        images.append(coordinates(right, tgt, scenario.named_vectors(tgt), spec.location))
    try:
        isometry_from_images(spec.kind, source, target, domain, images)
        outcome = "accepted"
    except NotAnIsometryError:
        outcome = "rejected"
    return [CheckRow.compare(spec.display_name, None, outcome, "rejected")]


@register_check(
    "isometry-restriction", required={"outer": "isometry", "inner": "isometry", "along": "isometry"}
)
def _check_isometry_restriction(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """The outer isometry restricted along an identification of sublattices equals the inner one."""
    scenario = session.scenario
    ok = restricts_to(scenario.isometry(spec["outer"]), scenario.isometry(spec["inner"]), scenario.isometry(spec["along"]))
    return [CheckRow.compare(spec.display_name, None, "commutes" if ok else "differs", "commutes")]


@register_check(
    "cosets", required={"lattice": "lattice", "sub": "sublattice", "count": "int"}, optional={"along": "vector"}
)
def _check_cosets(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Number of cosets of a full-rank sublattice, the index against the determinants, and cyclic representatives."""
    name = spec.display_name
    lattice = session.scenario.lattice(spec["lattice"])
    sub = session.scenario.sublattice(spec["sub"])
    along = None
    if "along" in spec:
        along = as_point(coordinates(spec["along"], lattice, session.scenario.named_vectors(lattice), spec.location))
    representatives = coset_decomposition(lattice, sub, along)
    rows = [
        CheckRow.compare(name, None, len(representatives), int(spec["count"])),
        CheckRow.compare(name, None, sub.index_in_parent() ** 2, Fraction(sub.determinant, lattice.determinant)),
    ]
    if along is not None:
        points = [r.point() for r in representatives]
        expected = [tuple(k * c for c in along) for k in range(len(points))]
        rows.append(CheckRow.compare(
            name, None, ";".join(format_coords(p) for p in points), ";".join(format_coords(p) for p in expected),
            ok=points == expected,
        ))
    return rows


@register_check("sublattice-equal", required={"a": "sublattice", "b": "sublattice"})
def _check_sublattice_equal(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Two generator sets span the same sublattice."""
    a, b = session.scenario.sublattice(spec["a"]), session.scenario.sublattice(spec["b"])
    return [CheckRow.compare(spec.display_name, None, a.name, b.name, ok=a.same_as(b))]


@register_check("basis-dims", required={"lattice": "lattice"}, optional={"dims": "ints"})
def _check_basis_dims(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Enumerated basis sizes against the theta-over-eta coefficients (and optional expected values)."""
    name = spec.display_name
    voa = session.voa(spec["lattice"])
    w = session.max_weight
    series = voa_character(voa.lattice, None, w).integer_coefficients()
    rows = [CheckRow.compare(name, n, voa.basis.dim(n), series[n]) for n in range(w + 1)]
    if "dims" in spec:
        expected = _ints(spec["dims"])
        rows.extend(CheckRow.compare(name, n, voa.basis.dim(n), expected[n]) for n in range(min(w + 1, len(expected))))
    return rows


# Vertex algebra structure


@register_check("vertex-axioms", required={"lattice": "lattice"})
def _check_vertex_axioms(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Creation, skew-symmetry and commutator spot checks."""
    report = check_axioms(session.voa(spec["lattice"]), session.config)
    rows = []
    for part, count in (("creation", report.creation), ("skew-symmetry", report.skew_symmetry),
                        ("commutator", report.commutator)):
        failed = sum(1 for failure in report.failures if failure.startswith(part + ":"))
        rows.append(CheckRow.compare(spec.display_name, None, f"{part}:{count - failed}/{count}",
                                     f"{part}:{count}/{count}", ok=failed == 0))
    return rows


@register_check("affine-triple", required={"e": "state", "h": "state", "f": "state", "k": "int"})
def _check_affine_triple(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """The sl2 relations of a weight-one triple at level k."""
    voa, (e, h, f) = _state_pair(session, spec, "e", "h", "f")
    try:
        checked = check_affine_triple(voa, e, h, f, int(spec["k"]))
    except NotAnAffineTripleError as error:
        return [CheckRow.compare(spec.display_name, None, f"{error.relation}={error.actual}",
                                 f"{error.relation}={error.expected}", ok=False)]
    return [CheckRow.compare(spec.display_name, None, relation, relation) for relation in checked]


@register_check("conformal", required={"state": "state", "c": "scalar"})
def _check_conformal(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """A conformal certificate with the expected central charge."""
    certificate = session.certificate(spec["state"])
    expected = rational(parse_expression(spec["c"], spec.location), spec["c"], spec.location)
    return [CheckRow.compare(spec.display_name, None, certificate.central_charge, expected)]


@register_check("commuting", required={"a": "state", "b": "state"})
def _check_commuting(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """a_(n) b = 0 for every n >= 0."""
    voa, (a, b) = _state_pair(session, spec, "a", "b")
    ok = commuting_pair(voa, a, b)
    return [CheckRow.compare(spec.display_name, None, "commuting" if ok else "not-commuting", "commuting")]


def _charge(session: Session, node: Node, spec: CheckSpec, text: str) -> Fraction:
    if isinstance(node, Name):
        return session.certificate(node.name).central_charge
    value = constant(node)
    if value is not None:
        return value
    if isinstance(node, Neg):
        return -_charge(session, node.operand, spec, text)
    if isinstance(node, BinOp):
        left, right = _charge(session, node.left, spec, text), _charge(session, node.right, spec, text)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if right:
            return left / right
    raise DSLSyntaxError(text, node.position, "state names combined with + - * /", spec.location)


@register_check("central-charge", required={"lhs": "charge_expr", "rhs": "charge_expr"})
def _check_central_charge(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Arithmetic between central charges of named conformal vectors."""
    lhs = _charge(session, parse_expression(spec["lhs"], spec.location), spec, spec["lhs"])
    rhs = _charge(session, parse_expression(spec["rhs"], spec.location), spec, spec["rhs"])
    return [CheckRow.compare(spec.display_name, None, lhs, rhs)]


# Commutants and orbifolds


@register_check("commutant-dims", required={"state": "state", "expect": "dims_expr"})
def _check_commutant_dims(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Graded dimensions of a commutant against a dimension expression."""
    lattice = session.lattice_of("state", spec["state"])
    space = session.evaluate("space", lattice, f"commutant({spec['state']})", spec.location)
    expected = session.dims(spec["expect"], spec.location).integer_coefficients()
    return compare_dims(spec.display_name, space.dims(), expected)


@register_check("nested", required={"e1": "state", "e2": "state"})
def _check_nested(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Com_V(e1 + e2) equals the commutant of e2 inside Com_V(e1), grade by grade."""
    voa, (e1, e2) = _state_pair(session, spec, "e1", "e2")
    lattice = voa.lattice.name
    return nested_rows(
        spec.display_name,
        commuting_pair(voa, e1, e2),
        lambda: session.evaluate("space", lattice, f"commutant({spec['e1']} + {spec['e2']})", spec.location),
        lambda: session.evaluate("space", lattice, f"nested({spec['e1']}, {spec['e2']})", spec.location),
    )


@register_check("orbifold-coset", required={"state": "state", "group": "group"})
def _check_orbifold_coset(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """(Com_V(e))^G equals Com_{V^G}(e), grade by grade."""
    lattice = session.lattice_of("state", spec["state"])
    if session.lattice_of("group", spec["group"]) != lattice:
        raise ScenarioError(f"Group '{spec['group']}' does not act on {lattice}", spec.location)
    state, group = spec["state"], spec["group"]
    return orbifold_coset_rows(
        spec.display_name,
        session.state(state),
        session.group(group),
        lambda: session.evaluate("space", lattice, f"orbifold(commutant({state}), {group})", spec.location),
        lambda: session.evaluate("space", lattice, f"commutant({state}, fixed({group}))", spec.location),
    )


@register_check("space-equal", required={"lattice": "lattice", "lhs": "space_expr", "rhs": "space_expr"})
def _check_space_equal(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Two subspace expressions agree on every grade."""
    return compare_spaces(spec.display_name, _on_lattice(session, spec, "space", "lhs"),
                          _on_lattice(session, spec, "space", "rhs"))


@register_check("dims-equal", required={"lhs": "dims_expr", "rhs": "dims_expr"}, optional={"values": "ints"})
def _check_dims_equal(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Two dimension expressions agree on integer grades 0..W (and match optional expected values)."""
    lhs = session.dims(spec["lhs"], spec.location).integer_coefficients()
    rhs = session.dims(spec["rhs"], spec.location).integer_coefficients()
    rows = compare_dims(spec.display_name, lhs, rhs)
    if "values" in spec:
        expected = _ints(spec["values"])
        count = min(len(lhs), len(expected))
        rows.extend(compare_dims(spec.display_name, lhs[:count], expected[:count]))
    return rows


# Automorphisms


@register_check("auto-equal", required={"lattice": "lattice", "lhs": "auto_expr", "rhs": "auto_expr"})
def _check_auto_equal(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Two automorphism expressions have the same matrix on every grade; rows show the traces."""
    a = _on_lattice(session, spec, "auto", "lhs")
    b = _on_lattice(session, spec, "auto", "rhs")
    return [
        CheckRow.compare(spec.display_name, n, format_scalar(trace_on_grade(a, n)), format_scalar(trace_on_grade(b, n)),
                         ok=a.matrix(n) == b.matrix(n))
        for n in range(session.max_weight + 1)
    ]


@register_check("auto-order", required={"lattice": "lattice", "auto": "auto_expr", "order": "int"})
def _check_auto_order(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Order of an automorphism on grades 0..W."""
    a = _on_lattice(session, spec, "auto", "auto")
    order = order_of(a, session.max_weight, session.config.group_bound)
    return [CheckRow.compare(spec.display_name, None, order, int(spec["order"]))]


@register_check(
    "maps-to", required={"lattice": "lattice", "auto": "auto_expr", "state": "state_expr", "image": "state_expr"}
)
def _check_maps_to(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """An automorphism sends a state to the expected image."""
    a = _on_lattice(session, spec, "auto", "auto")
    state = _on_lattice(session, spec, "state", "state")
    image = _on_lattice(session, spec, "state", "image")
    return [CheckRow.compare(spec.display_name, None, str(a.apply(state)), str(image), ok=a.apply(state) == image)]


@register_check("state-equal", required={"lattice": "lattice", "lhs": "state_expr", "rhs": "state_expr"})
def _check_state_equal(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Two state expressions are the same vector."""
    lhs = _on_lattice(session, spec, "state", "lhs")
    rhs = _on_lattice(session, spec, "state", "rhs")
    return [CheckRow.compare(spec.display_name, None, str(lhs), str(rhs), ok=lhs == rhs)]


@register_check(
    "square-on", required={"lattice": "lattice", "auto": "auto_expr", "space": "space_expr", "value": "scalar"}
)
def _check_square_on(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """a^2 acts as a scalar on every grade of a subspace."""
    a = _on_lattice(session, spec, "auto", "auto")
    space = _on_lattice(session, spec, "space", "space")
    value = scalar(parse_expression(spec["value"], spec.location), spec["value"], spec.location)
    return [
        CheckRow.compare(spec.display_name, n, grade.dim, grade.dim, ok=square_is_scalar_on(a, grade, value))
        for n, grade in enumerate(space.grades)
    ]


@register_check("homomorphism", required={"lattice": "lattice", "auto": "auto_expr"}, optional={"samples": "int"})
def _check_homomorphism(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Sampled a(u_(n) v) = a(u)_(n) a(v) on basis pairs."""
    a = _on_lattice(session, spec, "auto", "auto")
    samples = int(spec["samples"]) if "samples" in spec else session.config.homomorphism_samples
    failures = check_homomorphism(a, samples, session.config.sample_seed)
    return [CheckRow.compare(spec.display_name, None, f"failures:{len(failures)}", "failures:0")]


# Groups and characters


@register_check("group-order", required={"group": "group", "order": "int"})
def _check_group_order(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Size of the closure of the generators."""
    return [CheckRow.compare(spec.display_name, None, session.group(spec["group"]).order, int(spec["order"]))]


@register_check("group-equal", required={"a": "group", "b": "group"})
def _check_group_equal(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Two generator sets close to the same group."""
    a, b = session.group(spec["a"]), session.group(spec["b"])
    return [CheckRow.compare(spec.display_name, None, a.order, b.order, ok=a.same_elements(b))]


@register_check("twisted-characters", required={"group": "group"})
def _check_twisted_characters(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Closed-form twisted characters of every group element against matrix traces."""
    w = session.max_weight
    rows = []
    for element in session.group(spec["group"]):
        closed = twisted_character(element, w).integer_coefficients()
        direct = traces(element, w).integer_coefficients()
        rows.append(CheckRow.compare(spec.display_name, None, [format_scalar(c) for c in closed],
                                     [format_scalar(c) for c in direct], ok=closed == direct))
    return rows


@register_check("burnside", required={"group": "group"})
def _check_burnside(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """Burnside averages of twisted characters against fixed-space dimensions."""
    group_name = spec["group"]
    lattice = session.lattice_of("group", group_name)
    average = burnside_orbifold_dims(session.group(group_name), session.max_weight).integer_coefficients()
    fixed = session.evaluate("space", lattice, f"fixed({group_name})", spec.location)
    return compare_dims(spec.display_name, average, fixed.dims())


@register_check("annihilation", required={"state": "state", "generators": "states"}, gate="strict_annihilation")
def _check_annihilation(session: Session, spec: CheckSpec) -> list[CheckRow]:
    """The e_(0) kernel equals the joint kernel of all nonnegative generator modes on low grades."""
    lattice = session.lattice_of("state", spec["state"])
    names = split_top_level(spec["generators"])
    if any(session.lattice_of("state", n) != lattice for n in names):
        raise ScenarioError(f"Generators {spec['generators']} do not all live on {lattice}", spec.location)
    voa = session.voa(lattice)
    w = min(session.config.strict_annihilation_grade, session.max_weight)
    lhs = commutant(voa, session.state(spec["state"]), w, label=spec["state"])
    rhs = annihilator(voa, [session.state(n) for n in names], w, spec["generators"])
    return compare_spaces(spec.display_name, lhs, rhs)
