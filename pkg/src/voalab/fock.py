"""Graded Fock spaces of lattice VOAs: monomials, state vectors and exact sparse linear algebra."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence

from sympy.utilities.iterables import partitions

from .exceptions import GradeMismatchError, InternalConsistencyError, LatticeMismatchError
from .lattice import Lattice, Point, vectors_up_to_norm
from .scalar import format_scalar

logger = logging.getLogger(__name__)

Mode = tuple[int, int]
Modes = tuple[Mode, ...]
SparseVector = dict[int, Any]


def _mode_key(mode: Mode) -> tuple[int, int]:
    return mode[0], -mode[1]


class Monomial(NamedTuple):
    """
    A Fock basis monomial b_{i1}(-n1) ... b_{ik}(-nk) e^mu.

    Attributes
    ----------
    modes : tuple[tuple[int, int], ...]
        Pairs (direction, n) with 0-based direction index and n >= 1, sorted
        direction-major with n descending.
    point : tuple[int, ...]
        Lattice point mu in the lattice basis.
    """

    modes: Modes
    point: Point

    @property
    def mode_weight(self) -> int:
        """Sum of the mode numbers."""
        return sum(n for _, n in self.modes)

    def weight(self, lattice: Lattice) -> Fraction:
        """Return sum(n) + <mu, mu>/2."""
        return self.mode_weight + lattice.inner_coords(self.point, self.point) / 2

    @property
    def max_mode(self) -> int:
        """Largest mode number (0 for a pure exponential)."""
        return max((n for _, n in self.modes), default=0)

    def with_mode(self, direction: int, n: int) -> "Monomial":
        """Return the monomial with one more factor b_direction(-n)."""
        return Monomial(insert_mode(self.modes, direction, n), self.point)

    def format(self, lattice: Lattice) -> str:
        """Format the monomial with the lattice's basis names."""
        names = lattice.basis_names
        parts = [f"{names[i]}(-{n})" for i, n in self.modes]
        if any(self.point) or not parts:
            parts.append("e^[" + " ".join(str(c) for c in self.point) + "]")
        return "".join(parts)


def insert_mode(modes: Modes, direction: int, n: int) -> Modes:
    """Insert a creation factor keeping the canonical ordering."""
    return tuple(sorted(modes + ((direction, n),), key=_mode_key))


def _axpy(target: SparseVector, factor, source: Mapping) -> None:
    """target += factor * source, dropping zeros."""
    for key, value in source.items():
        updated = target.get(key, 0) + factor * value
        if updated:
            target[key] = updated
        else:
            target.pop(key, None)


def add_into(target: dict, source: Mapping, factor=1) -> None:
    """Accumulate factor * source into target in place, dropping zero coefficients."""
    _axpy(target, factor, source)


def substitute_modes(modes: Modes, images: Sequence[Mapping[int, Any]]) -> dict[Modes, Any]:
    """
    Expand a product of creation modes under a linear change of directions.

    Each factor b_i(-n) is replaced by sum_j images[i][j] b_j(-n).

    Parameters
    ----------
    modes : tuple[tuple[int, int], ...]
        Canonically ordered modes.
    images : sequence of mappings
        images[i] maps new direction indices to coefficients.

    Returns
    -------
    dict
        Canonically ordered new modes mapped to coefficients.
    """
    partial: dict[Modes, Any] = {(): 1}
    for direction, n in modes:
        expanded: dict[Modes, Any] = {}
        for prefix, coefficient in partial.items():
            for target, weight in images[direction].items():
                if weight:
                    key = insert_mode(prefix, target, n)
                    add_into(expanded, {key: coefficient * weight})
        partial = expanded
    return partial


class StateVector:
    """
    A finite linear combination of Fock monomials over Q(i).

    Coefficients are Fractions or GaussScalars; zero coefficients are never stored.

    Parameters
    ----------
    lattice : Lattice
        The lattice whose VOA contains the vector.
    terms : mapping of Monomial to scalar, optional
        The coefficients.
    """

    __slots__ = ("lattice", "_terms")

    def __init__(self, lattice: Lattice, terms: Optional[Mapping[Monomial, Any]] = None):
        self.lattice = lattice
        self._terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def vacuum(cls, lattice: Lattice) -> "StateVector":
        """Return the vacuum 1 = e^0."""
        return cls(lattice, {Monomial((), (0,) * lattice.rank): Fraction(1)})

    @classmethod
    def exponential(cls, lattice: Lattice, point: Point) -> "StateVector":
        """Return e^point."""
        return cls(lattice, {Monomial((), tuple(point)): Fraction(1)})

    @classmethod
    def heisenberg(cls, lattice: Lattice, direction: Sequence, n: int = 1, point: Optional[Point] = None) -> "StateVector":
        """Return h(-n) e^point for a rational direction h given in lattice coordinates."""
        base = tuple(point) if point is not None else (0,) * lattice.rank
        return cls(lattice, {Monomial(((i, n),), base): Fraction(c) for i, c in enumerate(direction) if c})

    @classmethod
    def zero(cls, lattice: Lattice) -> "StateVector":
        """Return the zero vector."""
        return cls(lattice)

    @property
    def terms(self) -> dict[Monomial, Any]:
        """A copy of the coefficient mapping."""
        return dict(self._terms)

    def items(self) -> Iterable[tuple[Monomial, Any]]:
        """Iterate over (monomial, coefficient) pairs."""
        return self._terms.items()

    def coefficient(self, monomial: Monomial):
        """Return the coefficient of a monomial (0 if absent)."""
        return self._terms.get(monomial, 0)

    def is_zero(self) -> bool:
        """True if there are no terms."""
        return not self._terms

    def weights(self) -> set[Fraction]:
        """The set of weights of the monomials present."""
        return {m.weight(self.lattice) for m in self._terms}

    @property
    def weight(self) -> Optional[Fraction]:
        """
        The weight of a homogeneous vector.

        Returns
        -------
        Fraction | None
            The common weight, or None for zero or inhomogeneous vectors.
        """
        weights = self.weights()
        return next(iter(weights)) if len(weights) == 1 else None

    def _check(self, other: "StateVector") -> None:
        if other.lattice != self.lattice:
            raise LatticeMismatchError(self.lattice.name, other.lattice.name)

    def __add__(self, other: "StateVector") -> "StateVector":
        self._check(other)
        terms = dict(self._terms)
        add_into(terms, other._terms)
        return StateVector(self.lattice, terms)

    def __sub__(self, other: "StateVector") -> "StateVector":
        self._check(other)
        terms = dict(self._terms)
        add_into(terms, other._terms, -1)
        return StateVector(self.lattice, terms)

    def __neg__(self) -> "StateVector":
        return StateVector(self.lattice, {m: -c for m, c in self._terms.items()})

    def __mul__(self, scalar) -> "StateVector":
        if isinstance(scalar, StateVector):
            return NotImplemented
        return StateVector(self.lattice, {m: c * scalar for m, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.lattice == other.lattice and self._terms == other._terms

    __hash__ = None

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self._terms)

    def __repr__(self) -> str:
        return f"StateVector({self.lattice.name}: {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for monomial in sorted(self._terms, key=lambda m: (m.point, m.modes)):
            coefficient = format_scalar(self._terms[monomial])
            pieces.append(f"({coefficient})*{monomial.format(self.lattice)}")
        return " + ".join(pieces)


@lru_cache(maxsize=None)
def _partitions_of(n: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    result = []
    for p in partitions(n):
        parts: list[int] = []
        for part in sorted(p, reverse=True):
            parts.extend([part] * p[part])
        result.append(tuple(parts))
    return tuple(sorted(result, reverse=True))


@lru_cache(maxsize=None)
def colored_partitions(total: int, colors: int, first: int = 0) -> tuple[Modes, ...]:
    """
    All canonically ordered mode tuples of total weight `total` over `colors` directions.

    Parameters
    ----------
    total : int
        Sum of the mode numbers.
    colors : int
        Number of directions available (indices first .. first+colors-1).
    first : int
        Index of the first direction.

    Returns
    -------
    tuple of mode tuples
    """
    if colors == 0:
        return ((),) if total == 0 else ()
    result = []
    for here in range(total + 1):
        for parts in _partitions_of(here):
            head = tuple((first, n) for n in parts)
            for tail in colored_partitions(total - here, colors - 1, first + 1):
                result.append(head + tail)
    return tuple(result)


def enumerate_monomials(
    directions: int, points: Iterable[tuple[Point, Fraction]], cutoff: int
) -> dict[Fraction, list[Monomial]]:
    """
    Enumerate Heisenberg monomials over the given points, grouped by weight.

    Parameters
    ----------
    directions : int
        Number of Heisenberg directions.
    points : iterable of (point, point_weight)
        Lattice points with their weights <mu, mu>/2.
    cutoff : int
        Largest weight kept.

    Returns
    -------
    dict
        Weight mapped to the list of monomials of that weight.
    """
    grades: dict[Fraction, list[Monomial]] = {}
    for point, base in points:
        r = 0
        while base + r <= cutoff:
            for modes in colored_partitions(r, directions):
                grades.setdefault(base + r, []).append(Monomial(modes, tuple(point)))
            r += 1
    return grades


@dataclass(frozen=True)
class GradedBasis:
    """
    The monomial basis of V_L up to a weight cutoff.

    Attributes
    ----------
    lattice : Lattice
        The lattice.
    cutoff : int
        Largest weight W.
    grades : tuple of tuples of Monomial
        grades[n] is the ordered basis of (V_L)_n.
    """

    lattice: Lattice
    cutoff: int
    grades: tuple[tuple[Monomial, ...], ...] = field(repr=False)

    @cached_property
    def _index(self) -> tuple[dict[Monomial, int], ...]:
        return tuple({m: j for j, m in enumerate(grade)} for grade in self.grades)

    def dim(self, n: int) -> int:
        """Dimension of grade n."""
        return len(self.grades[n])

    def dims(self) -> list[int]:
        """Dimensions of grades 0..cutoff."""
        return [len(g) for g in self.grades]

    def basis(self, n: int) -> tuple[Monomial, ...]:
        """Ordered basis of grade n."""
        return self.grades[n]

    def position(self, monomial: Monomial) -> tuple[int, int]:
        """Return (grade, index) of a basis monomial."""
        n = int(monomial.weight(self.lattice))
        return n, self._index[n][monomial]

    def index(self, n: int, monomial: Monomial) -> int:
        """Index of a monomial inside grade n."""
        return self._index[n][monomial]

    def coordinates(self, state: StateVector, n: int) -> SparseVector:
        """
        Sparse coordinates of a grade-n vector.

        Raises
        ------
        GradeMismatchError
            If some term is not a grade-n monomial.
        """
        index = self._index[n]
        coords: SparseVector = {}
        for monomial, coefficient in state.items():
            if monomial not in index:
                raise GradeMismatchError(f"grade {n} of V_{self.lattice.name}", monomial.format(self.lattice))
            coords[index[monomial]] = coefficient
        return coords

    def state(self, n: int, coords: Mapping[int, Any]) -> StateVector:
        """Build the StateVector with the given sparse coordinates at grade n."""
        grade = self.grades[n]
        return StateVector(self.lattice, {grade[j]: c for j, c in coords.items()})


def build_basis(lattice: Lattice, cutoff: int) -> GradedBasis:
    """
    Build the monomial basis of V_L for weights 0..cutoff.

    The weight-n piece consists of all monomials b(-n1)...b(-nk) e^mu with
    sum(n_i) + <mu,mu>/2 = n; within a grade, monomials are ordered by point
    (lexicographically), then by modes.

    Parameters
    ----------
    lattice : Lattice
        The lattice.
    cutoff : int
        Largest weight (W >= 0).

    Returns
    -------
    GradedBasis
        The graded basis.
    """
    if cutoff < 0:
        raise ValueError(f"cutoff must be non-negative, got {cutoff}")
    points = [(v.point(), v.norm() / 2) for v in vectors_up_to_norm(lattice, 2 * cutoff)]
    found = enumerate_monomials(lattice.rank, points, cutoff)
    grades = []
    for n in range(cutoff + 1):
        grades.append(tuple(sorted(found.get(Fraction(n), []), key=lambda m: (m.point, m.modes))))
    basis = GradedBasis(lattice, cutoff, tuple(grades))
    logger.debug("basis of V_%s up to weight %d: %s", lattice.name, cutoff, basis.dims())
    return basis


# Sparse echelon forms


class Echelon:
    """
    Incremental sparse row reduction over Q(i).

    Rows are kept in semi-echelon form: each row's pivot is its smallest index and
    has coefficient 1. With tracking enabled every row remembers the combination
    of inserted vectors it came from, which yields kernels and inverses.

    Parameters
    ----------
    track : bool
        Whether to record combinations of inserted vectors.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self._rows: dict[int, SparseVector] = {}
        self._combos: dict[int, SparseVector] = {}
        self._reduced: Optional[dict[int, tuple[SparseVector, SparseVector]]] = None

    @property
    def rank(self) -> int:
        """Number of independent vectors inserted so far."""
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        """Sorted pivot positions."""
        return sorted(self._rows)

    def _reduce(self, vector: Mapping, combo: Optional[SparseVector]) -> tuple[SparseVector, Optional[SparseVector]]:
        v = dict(vector)
        c = dict(combo) if combo is not None else None
        while v:
            p = min(v)
            row = self._rows.get(p)
            if row is None:
                break
            factor = v[p]
            _axpy(v, -factor, row)
            if c is not None:
                _axpy(c, -factor, self._combos[p])
        return v, c

    def insert(self, vector: Mapping, tag: Any = None) -> Optional[SparseVector]:
        """
        Insert a vector.

        Parameters
        ----------
        vector : mapping of int to scalar
            Sparse vector.
        tag : hashable, optional
            Label of the vector in tracked combinations.

        Returns
        -------
        dict | None
            None if the vector was independent; otherwise the tracked relation
            (a combination of tags summing to zero), or {} without tracking.
        """
        combo = {tag: Fraction(1)} if self.track else None
        v, c = self._reduce(vector, combo)
        if not v:
            return c if c is not None else {}
        p = min(v)
        inverse = Fraction(1) / v[p]
        self._rows[p] = {k: x * inverse for k, x in v.items()}
        if c is not None:
            self._combos[p] = {k: x * inverse for k, x in c.items()}
        self._reduced = None
        return None

    def reduce(self, vector: Mapping) -> SparseVector:
        """Return the residue of a vector after elimination (empty iff in the span)."""
        return self._reduce(vector, None)[0]

    def contains(self, vector: Mapping) -> bool:
        """True if the vector lies in the span of the inserted vectors."""
        return not self.reduce(vector)

    def reduced(self) -> dict[int, tuple[SparseVector, SparseVector]]:
        """
        Fully reduced rows keyed by pivot, with their tracked combinations.

        Returns
        -------
        dict
            pivot -> (row, combination); rows vanish at every other pivot.
        """
        if self._reduced is not None:
            return self._reduced
        result: dict[int, tuple[SparseVector, SparseVector]] = {}
        for p in sorted(self._rows, reverse=True):
            row = dict(self._rows[p])
            combo = dict(self._combos.get(p, {}))
            for q in sorted(k for k in row if k != p and k in result):
                factor = row.get(q, 0)
                if factor:
                    other_row, other_combo = result[q]
                    _axpy(row, -factor, other_row)
                    if self.track:
                        _axpy(combo, -factor, other_combo)
            result[p] = (row, combo)
        self._reduced = result
        return result

    def solve(self, vector: Mapping) -> Optional[SparseVector]:
        """
        Express a vector through the tracked inserted vectors.

        Returns
        -------
        dict | None
            Tag coefficients reproducing the vector, or None if it is outside the span.
        """
        if not self.contains(vector):
            return None
        result: SparseVector = {}
        rows = self.reduced()
        for p, value in vector.items():
            if p in rows:
                _axpy(result, value, rows[p][1])
        return result

    def canonical_rows(self) -> tuple[tuple[tuple[int, Any], ...], ...]:
        """Reduced row echelon form as sorted item tuples ordered by pivot."""
        rows = self.reduced()
        return tuple(tuple(sorted(rows[p][0].items())) for p in sorted(rows))


@dataclass(frozen=True)
class Subspace:
    """
    A subspace of one graded piece, stored in canonical reduced row echelon form.

    Since the echelon form is canonical, equal subspaces are structurally equal.

    Attributes
    ----------
    grade : int
        The weight n.
    ambient_dim : int
        Dimension of the ambient graded piece.
    rows : tuple
        Reduced echelon rows as sorted (index, coefficient) tuples.
    space : str
        Name of the ambient space (the lattice VOA).
    """

    grade: int
    ambient_dim: int
    rows: tuple[tuple[tuple[int, Any], ...], ...]
    space: str = ""

    @classmethod
    def span(cls, grade: int, ambient_dim: int, vectors: Iterable[Mapping], space: str = "") -> "Subspace":
        """Return the span of sparse vectors."""
        echelon = Echelon()
        for v in vectors:
            echelon.insert(v)
        return cls(grade, ambient_dim, echelon.canonical_rows(), space)

    @classmethod
    def whole(cls, grade: int, ambient_dim: int, space: str = "") -> "Subspace":
        """Return the whole graded piece."""
        return cls(grade, ambient_dim, tuple(((j, Fraction(1)),) for j in range(ambient_dim)), space)

    @classmethod
    def zero(cls, grade: int, ambient_dim: int, space: str = "") -> "Subspace":
        """Return the zero subspace."""
        return cls(grade, ambient_dim, (), space)

    @property
    def dim(self) -> int:
        """Dimension of the subspace."""
        return len(self.rows)

    def vectors(self) -> list[SparseVector]:
        """The basis rows as sparse vectors."""
        return [dict(row) for row in self.rows]

    def _compatible(self, other: "Subspace") -> None:
        if (self.grade, self.ambient_dim, self.space) != (other.grade, other.ambient_dim, other.space):
            raise GradeMismatchError(
                f"grade {self.grade} of {self.space or '?'}", f"grade {other.grade} of {other.space or '?'}"
            )

    def _echelon(self) -> Echelon:
        echelon = Echelon()
        for row in self.rows:
            echelon.insert(dict(row))
        return echelon

    def contains(self, vector: Mapping) -> bool:
        """True if the sparse vector lies in the subspace."""
        return self._echelon().contains(vector)

    def contains_subspace(self, other: "Subspace") -> bool:
        """True if other is contained in self."""
        self._compatible(other)
        echelon = self._echelon()
        return all(echelon.contains(dict(row)) for row in other.rows)

    def sum(self, other: "Subspace") -> "Subspace":
        """Return self + other."""
        self._compatible(other)
        return Subspace.span(self.grade, self.ambient_dim, self.vectors() + other.vectors(), self.space)

    def intersection(self, other: "Subspace") -> "Subspace":
        """
        Return self intersected with other.

        Raises
        ------
        InternalConsistencyError
            If dim(A+B) + dim(A&B) differs from dim A + dim B.
        """
        self._compatible(other)
        echelon = Echelon(track=True)
        for k, row in enumerate(self.rows):
            echelon.insert(dict(row), ("a", k))
        common = []
        for k, row in enumerate(other.rows):
            relation = echelon.insert(dict(row), ("b", k))
            if relation is not None:
                vector: SparseVector = {}
                for (side, index), coefficient in relation.items():
                    if side == "b":
                        _axpy(vector, coefficient, dict(other.rows[index]))
                common.append(vector)
        result = Subspace.span(self.grade, self.ambient_dim, common, self.space)
        if echelon.rank + result.dim != self.dim + other.dim:
            raise InternalConsistencyError(
                "rank-nullity",
                f"dim(A+B)={echelon.rank}, dim(A&B)={result.dim}, dim A={self.dim}, dim B={other.dim}",
            )
        return result

    def __str__(self) -> str:
        return f"Subspace(grade={self.grade}, dim={self.dim}/{self.ambient_dim}, space={self.space})"


def kernel_on_grade(images: Sequence[Mapping], grade: int, space: str = "") -> Subspace:
    """
    Return the kernel of the linear map whose basis images are given.

    Parameters
    ----------
    images : sequence of sparse vectors
        images[j] is the image of the j-th basis vector of grade n (in any target coordinates).
    grade : int
        The source grade n.
    space : str
        Name of the ambient space.

    Returns
    -------
    Subspace
        The kernel, in canonical echelon form.
    """
    echelon = Echelon(track=True)
    relations = []
    for j, image in enumerate(images):
        relation = echelon.insert(image, j)
        if relation is not None:
            relations.append(relation)
    return Subspace.span(grade, len(images), relations, space)


def kernel_in_span(
    vectors: Sequence[Mapping], images: Sequence[Mapping], grade: int, ambient_dim: int, space: str = ""
) -> Subspace:
    """
    Return the kernel of a map restricted to the span of the given vectors.

    Parameters
    ----------
    vectors : sequence of sparse vectors
        Independent vectors spanning the domain.
    images : sequence of sparse vectors
        images[k] is the image of vectors[k].
    grade, ambient_dim : int
        Grade and ambient dimension of the vectors.
    space : str
        Name of the ambient space.

    Returns
    -------
    Subspace
        The kernel as a subspace of the ambient graded piece.
    """
    echelon = Echelon(track=True)
    kernel = []
    for k, image in enumerate(images):
        relation = echelon.insert(image, k)
        if relation is not None:
            vector: SparseVector = {}
            for index, coefficient in relation.items():
                _axpy(vector, coefficient, vectors[index])
            kernel.append(vector)
    return Subspace.span(grade, ambient_dim, kernel, space)


def invert_columns(columns: Sequence[Mapping]) -> Optional[list[SparseVector]]:
    """
    Invert a square matrix given by sparse columns.

    Returns
    -------
    list | None
        The columns of the inverse, or None if the matrix is singular.
    """
    echelon = Echelon(track=True)
    for j, column in enumerate(columns):
        if echelon.insert(column, j) is not None:
            return None
    rows = echelon.reduced()
    return [dict(rows[p][1]) for p in range(len(columns))]


def multiply_columns(left: Sequence[Mapping], right: Sequence[Mapping]) -> list[SparseVector]:
    """Return the sparse columns of left * right."""
    product = []
    for column in right:
        result: SparseVector = {}
        for k, value in column.items():
            _axpy(result, value, left[k])
        product.append(result)
    return product
