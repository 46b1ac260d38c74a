"""Custom exceptions for voalab."""

from typing import Any, Optional

from .source_location import SourceLocation


class VoalabError(Exception):
    """Base exception for all voalab errors."""


# Scalars


class UnrepresentablePhaseError(VoalabError):
    """Raised when exp(2*pi*i*r) is not a fourth root of unity."""

    def __init__(self, value: Any):
        self.value = value
        super().__init__(
            f"Phase exp(2*pi*i*{value}) is not representable in Q(i): "
            "the reduced denominator must divide 4"
        )


class GaussDivisionByZeroError(VoalabError, ZeroDivisionError):
    """Raised when inverting the zero Gaussian rational."""

    def __init__(self):
        super().__init__("Division by zero in Q(i)")


class ScalarParseError(VoalabError, ValueError):
    """Raised when a Gaussian rational literal cannot be parsed."""

    def __init__(self, text: str):
        self.text = text
        super().__init__(f"Cannot parse Gaussian rational from {text!r}; expected a form like '3/2-5*i'")


# Lattices


class LatticeError(VoalabError):
    """Raised for malformed lattice data or invalid lattice operations."""

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class NotPositiveDefiniteError(LatticeError):
    """Raised when a Gram matrix has a non-positive leading principal minor."""

    def __init__(self, name: str, minor_index: int, minor: Any):
        self.name = name
        self.minor_index = minor_index
        self.minor = minor
        super().__init__(
            f"Lattice '{name}' is not positive definite: leading principal minor {minor_index} equals {minor}"
        )


class OddLatticeError(LatticeError):
    """Raised when a Gram matrix has an odd entry (the trivial cocycle needs all entries even)."""

    def __init__(self, name: str, row: int, column: int, value: int):
        self.name = name
        self.row = row
        self.column = column
        self.value = value
        super().__init__(
            f"Lattice '{name}' has odd inner product {value} at ({row + 1}, {column + 1}); "
            "only pairwise-even lattices are supported"
        )


class LatticeMismatchError(LatticeError):
    """Raised when two objects that must live over the same lattice do not."""

    def __init__(self, left: str, right: str):
        self.left = left
        self.right = right
        super().__init__(f"Objects live over different lattices: '{left}' and '{right}'")


class NotFullRankError(LatticeError):
    """Raised when a sublattice must have full rank in its parent but does not."""

    def __init__(self, sublattice: str, rank: int, expected: int):
        self.sublattice = sublattice
        self.rank = rank
        self.expected = expected
        super().__init__(f"Sublattice '{sublattice}' has rank {rank}, expected full rank {expected}")


class NotAnIsometryError(LatticeError):
    """Raised when proposed images do not preserve the inner products of their preimages."""

    def __init__(self, name: str, row: int, column: int, source_value: Any, image_value: Any):
        self.name = name
        self.row = row
        self.column = column
        self.source_value = source_value
        self.image_value = image_value
        super().__init__(
            f"'{name}' is not an isometry: <x{row + 1},x{column + 1}> = {source_value} "
            f"but the images have inner product {image_value}"
        )


# Graded pieces


class CutoffExceededError(VoalabError):
    """Raised when a computation needs a weight above the session cutoff."""

    def __init__(self, weight: Any, cutoff: int):
        self.weight = weight
        self.cutoff = cutoff
        super().__init__(f"Weight {weight} exceeds the cutoff {cutoff}; rerun with a larger cutoff")


class GradeMismatchError(VoalabError):
    """Raised when subspaces of different grades (or ambient spaces) are combined."""

    def __init__(self, left: Any, right: Any):
        self.left = left
        self.right = right
        super().__init__(f"Subspaces live in different graded pieces: {left} and {right}")


class HeadroomError(VoalabError):
    """Raised when the basis cutoff leaves no room for the modes a computation needs."""

    def __init__(self, needed: int, cutoff: int, what: str):
        self.needed = needed
        self.cutoff = cutoff
        self.what = what
        super().__init__(f"{what} needs basis cutoff >= {needed}, but the cutoff is {cutoff}")


# Vertex algebra structure


class NotAnAffineTripleError(VoalabError):
    """Raised when (E, H, F) fails one of the sl2 level-k relations."""

    def __init__(self, relation: str, expected: str, actual: str):
        self.relation = relation
        self.expected = expected
        self.actual = actual
        super().__init__(f"Not an affine sl2 triple: {relation} should be {expected}, got {actual}")


class NotConformalError(VoalabError):
    """Raised when a candidate conformal vector fails an identity."""

    def __init__(self, identity: str, grade: Optional[int] = None):
        self.identity = identity
        self.grade = grade
        where = f" on grade {grade}" if grade is not None else ""
        super().__init__(f"Vector is not conformal: {identity} fails{where}")


# Automorphisms


class UnsupportedLiftError(VoalabError):
    """Raised when an automorphism construction is outside the supported class."""

    def __init__(self, lattice: str, reason: str):
        self.lattice = lattice
        self.reason = reason
        super().__init__(f"Cannot build automorphism of V_{lattice}: {reason}")


class NotGeneratedError(VoalabError):
    """Raised when weight-one modes fail to span a graded piece."""

    def __init__(self, grade: int, rank: int, dim: int):
        self.grade = grade
        self.rank = rank
        self.dim = dim
        super().__init__(f"Weight-one modes span only {rank} of {dim} dimensions at grade {grade}")


class NotAnAutomorphismError(VoalabError):
    """Raised when a map fails an automorphism property."""

    def __init__(self, reason: str, grade: Optional[int] = None):
        self.reason = reason
        self.grade = grade
        where = f" (grade {grade})" if grade is not None else ""
        super().__init__(f"Not an automorphism: {reason}{where}")


class OrderExceededError(VoalabError):
    """Raised when an automorphism has no order up to the bound."""

    def __init__(self, bound: int):
        self.bound = bound
        super().__init__(f"Automorphism order exceeds the bound {bound}")


class GroupTooLargeError(VoalabError):
    """Raised when group closure does not terminate below the bound."""

    def __init__(self, bound: int):
        self.bound = bound
        super().__init__(f"Group closure exceeded {bound} elements")


class NotPreservedError(VoalabError):
    """Raised when a group generator does not preserve a subspace or vector."""

    def __init__(self, generator: str, grade: Optional[int], what: str):
        self.generator = generator
        self.grade = grade
        self.what = what
        where = f" at grade {grade}" if grade is not None else ""
        super().__init__(f"Generator {generator} does not preserve {what}{where}")


class InternalConsistencyError(VoalabError):
    """Raised when two independent computations of the same quantity disagree."""

    def __init__(self, check: str, detail: str):
        self.check = check
        self.detail = detail
        super().__init__(f"Internal consistency check '{check}' failed: {detail}")


class CheckFailure(VoalabError):
    """Raised by verification helpers when both sides of an identity differ."""

    def __init__(self, check: str, grade: Any, lhs: Any, rhs: Any):
        self.check = check
        self.grade = grade
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"Check '{check}' failed at grade {grade}: lhs={lhs} rhs={rhs}")


# Scenarios


class ScenarioError(VoalabError):
    """Raised for scenario parse and validation errors."""

    def __init__(self, message: str, location: Optional[SourceLocation] = None):
        self.message = message
        self.location = location
        if location is not None and location.is_available:
            super().__init__(f"{location.format_location()}: {message}")
        else:
            super().__init__(message)


class UnknownNameError(ScenarioError, KeyError):
    """Raised when a scenario refers to an undefined name."""

    def __init__(self, kind: str, name: str, available: list[str], location: Optional[SourceLocation] = None):
        self.kind = kind
        self.name = name
        self.available = available
        shown = ", ".join(repr(n) for n in available) or "none"
        super().__init__(f"Unknown {kind} '{name}'. Available: {shown}", location)

    def __str__(self) -> str:
        return ScenarioError.__str__(self)


class DSLSyntaxError(ScenarioError):
    """Raised when an expression does not parse."""

    def __init__(self, text: str, position: int, expected: str, location: Optional[SourceLocation] = None):
        self.text = text
        self.position = position
        self.expected = expected
        pointer = " " * position + "^"
        super().__init__(f"Syntax error: expected {expected} at column {position + 1}\n  {text}\n  {pointer}", location)
