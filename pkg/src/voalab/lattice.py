"""Positive-definite even lattices, sublattices, isometries and coset decompositions."""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import sympy
from sympy.matrices.normalforms import hermite_normal_form

from .exceptions import (
    LatticeError,
    LatticeMismatchError,
    NotAnIsometryError,
    NotFullRankError,
    NotPositiveDefiniteError,
    OddLatticeError,
)

logger = logging.getLogger(__name__)

Coords = tuple[Fraction, ...]
Point = tuple[int, ...]


def _fractions(values: Iterable) -> Coords:
    return tuple(Fraction(v) for v in values)


def to_fraction(value) -> Fraction:
    """Convert an int, Fraction or sympy rational to a Fraction."""
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    return Fraction(value)


def _matrix(rows: Sequence[Sequence]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) if isinstance(v, Fraction) else v for v in row]
                         for row in rows])


def _rows(matrix: sympy.Matrix) -> tuple[Coords, ...]:
    return tuple(tuple(to_fraction(matrix[i, j]) for j in range(matrix.cols)) for i in range(matrix.rows))


def as_point(coords: Sequence) -> Point:
    """
    Convert integral coordinates to an integer tuple.

    Raises
    ------
    LatticeError
        If a coordinate is not an integer.
    """
    point = []
    for c in coords:
        c = Fraction(c)
        if c.denominator != 1:
            raise LatticeError(f"Coordinates {tuple(str(x) for x in coords)} are not integral")
        point.append(c.numerator)
    return tuple(point)


@dataclass(frozen=True)
class Lattice:
    """
    A positive-definite lattice with an even integer Gram matrix.

    Every Gram entry must be even, not only the diagonal: this makes the trivial
    2-cocycle valid, so lattice VOAs never carry sign bookkeeping.

    Attributes
    ----------
    name : str
        Identifier used in reports and scenarios.
    gram : tuple[tuple[int, ...], ...]
        Symmetric integer Gram matrix of the basis.
    basis_names : tuple[str, ...]
        Names of the basis vectors (defaults to b1..bd).

    Raises
    ------
    LatticeError
        If the Gram matrix is not square and symmetric.
    NotPositiveDefiniteError
        If a leading principal minor is not positive.
    OddLatticeError
        If some Gram entry is odd.
    """

    name: str
    gram: tuple[tuple[int, ...], ...]
    basis_names: tuple[str, ...] = ()

    def __post_init__(self):
        gram = tuple(tuple(int(v) for v in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        d = len(gram)
        if d == 0 or any(len(row) != d for row in gram):
            raise LatticeError(f"Gram matrix of '{self.name}' must be a non-empty square matrix")
        for i in range(d):
            for j in range(d):
                if gram[i][j] != gram[j][i]:
                    raise LatticeError(f"Gram matrix of '{self.name}' is not symmetric at ({i + 1}, {j + 1})")
                if gram[i][j] % 2 != 0:
                    raise OddLatticeError(self.name, i, j, gram[i][j])
        matrix = sympy.Matrix(gram)
        for k in range(1, d + 1):
            minor = matrix[:k, :k].det()
            if minor <= 0:
                raise NotPositiveDefiniteError(self.name, k, minor)
        names = tuple(self.basis_names) or tuple(f"b{i + 1}" for i in range(d))
        if len(names) != d:
            raise LatticeError(f"Lattice '{self.name}' has rank {d} but {len(names)} basis names")
        if len(set(names)) != d:
            raise LatticeError(f"Lattice '{self.name}' has repeated basis names")
        object.__setattr__(self, "basis_names", names)

    @property
    def rank(self) -> int:
        """Rank d of the lattice."""
        return len(self.gram)

    @cached_property
    def determinant(self) -> int:
        """Determinant of the Gram matrix."""
        return int(sympy.Matrix(self.gram).det())

    @cached_property
    def gram_inverse(self) -> tuple[Coords, ...]:
        """Exact inverse of the Gram matrix."""
        return _rows(sympy.Matrix(self.gram).inv())

    def inner_coords(self, x: Sequence, y: Sequence) -> Fraction:
        """Inner product of two coordinate tuples in the lattice basis."""
        gram = self.gram
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                row = gram[i]
                total += xi * sum((row[j] * yj for j, yj in enumerate(y) if yj), Fraction(0))
        return total

    def gram_times(self, x: Sequence) -> Coords:
        """Return G x, the coordinates of the functional <x, .> on the basis."""
        return tuple(sum((Fraction(self.gram[i][j]) * x[j] for j in range(self.rank)), Fraction(0))
                     for i in range(self.rank))

    def vector(self, coords: Sequence) -> "QVec":
        """Build a QVec from coordinates in the lattice basis."""
        return QVec(self, _fractions(coords))

    def basis_vector(self, index: int) -> "QVec":
        """Return the basis vector with the given 0-based index."""
        return self.vector([1 if j == index else 0 for j in range(self.rank)])

    def zero(self) -> "QVec":
        """Return the zero vector."""
        return self.vector([0] * self.rank)

    def named_vector(self, name: str) -> "QVec":
        """
        Return the basis vector with the given name.

        Raises
        ------
        KeyError
            If no basis vector has that name.
        """
        return self.basis_vector(self.basis_names.index(name))

    def is_orthogonal_block(self, index: int) -> bool:
        """True if the basis vector is orthogonal to every other basis vector."""
        return all(self.gram[index][j] == 0 for j in range(self.rank) if j != index)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class QVec:
    """
    A vector with rational coordinates in the basis of a lattice.

    Integral QVecs are lattice points and may label e^mu; fractional ones serve as
    Heisenberg directions and inner-automorphism shifts.
    """

    lattice: Lattice
    coords: Coords

    def _check(self, other: "QVec") -> None:
        if other.lattice != self.lattice:
            raise LatticeMismatchError(self.lattice.name, other.lattice.name)

    def __add__(self, other: "QVec") -> "QVec":
        self._check(other)
        return QVec(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "QVec") -> "QVec":
        self._check(other)
        return QVec(self.lattice, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "QVec":
        return QVec(self.lattice, tuple(-a for a in self.coords))

    def __rmul__(self, scalar) -> "QVec":
        return QVec(self.lattice, tuple(Fraction(scalar) * a for a in self.coords))

    def __mul__(self, scalar) -> "QVec":
        return self.__rmul__(scalar)

    @property
    def is_integral(self) -> bool:
        """True if all coordinates are integers."""
        return all(c.denominator == 1 for c in self.coords)

    def point(self) -> Point:
        """Return the coordinates as an integer tuple (the vector must be a lattice point)."""
        return as_point(self.coords)

    def norm(self) -> Fraction:
        """Return <x, x>."""
        return self.lattice.inner_coords(self.coords, self.coords)

    def __str__(self) -> str:
        return format_coords(self.coords)


def format_coords(coords: Sequence) -> str:
    """Format coordinates as a bracketed row, e.g. '[1/4 0 -1]'."""
    return "[" + " ".join(str(Fraction(c)) for c in coords) + "]"


def inner(x: QVec, y: QVec) -> Fraction:
    """
    Return the exact inner product of two vectors of the same lattice.

    Parameters
    ----------
    x, y : QVec
        Vectors over the same lattice.

    Returns
    -------
    Fraction
        x^T G y.

    Raises
    ------
    LatticeMismatchError
        If the vectors live over different lattices.
    """
    if x.lattice != y.lattice:
        raise LatticeMismatchError(x.lattice.name, y.lattice.name)
    return x.lattice.inner_coords(x.coords, y.coords)


@dataclass(frozen=True)
class Sublattice:
    """
    The Z-span of integral generators inside a parent lattice.

    A canonical basis (Hermite normal form of the generator columns) is computed
    once; it makes membership tests exact and sublattice equality structural.

    Attributes
    ----------
    name : str
        Identifier.
    parent : Lattice
        The ambient lattice.
    generators : tuple[tuple[int, ...], ...]
        Generator coordinates in the parent basis.
    """

    name: str
    parent: Lattice
    generators: tuple[tuple[int, ...], ...]
    basis: tuple[Point, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        gens = tuple(as_point(g) for g in self.generators)
        if not gens or any(len(g) != self.parent.rank for g in gens):
            raise LatticeError(f"Sublattice '{self.name}' needs generators of length {self.parent.rank}")
        object.__setattr__(self, "generators", gens)
        columns = sympy.Matrix(gens).T
        if columns.rank() == 0:
            raise LatticeError(f"Sublattice '{self.name}' is zero")
        hnf = hermite_normal_form(columns)
        basis = []
        for j in range(hnf.cols):
            column = tuple(int(hnf[i, j]) for i in range(hnf.rows))
            if any(column):
                basis.append(column)
        if len(basis) != columns.rank():
            raise LatticeError(f"Normal form of '{self.name}' has {len(basis)} columns, expected {columns.rank()}")
        object.__setattr__(self, "basis", tuple(basis))

    @property
    def rank(self) -> int:
        """Rank of the sublattice."""
        return len(self.basis)

    @property
    def is_full_rank(self) -> bool:
        """True if the rank equals the parent's rank."""
        return self.rank == self.parent.rank

    @cached_property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        """Gram matrix of the canonical basis."""
        return tuple(tuple(int(self.parent.inner_coords(b, c)) for c in self.basis) for b in self.basis)

    @cached_property
    def determinant(self) -> int:
        """Determinant of the Gram matrix of the canonical basis."""
        return int(sympy.Matrix(self.gram).det())

    def as_lattice(self) -> Lattice:
        """Return the sublattice as an abstract lattice in its canonical basis."""
        return Lattice(self.name, self.gram, tuple(f"{self.name}_{k + 1}" for k in range(self.rank)))

    def basis_coordinates(self, x: Sequence) -> Optional[Coords]:
        """
        Express a parent-coordinate vector in the canonical basis.

        Returns
        -------
        tuple[Fraction, ...] | None
            Rational coefficients, or None if x is outside the rational span.
        """
        b = _matrix(self.basis).T
        vector = _matrix([[Fraction(c)] for c in x])
        solution = (b.T * b).inv() * (b.T * vector)
        if b * solution != vector:
            return None
        return tuple(to_fraction(solution[k, 0]) for k in range(self.rank))

    def contains(self, x: Sequence) -> bool:
        """True if the parent-coordinate vector x lies in the sublattice."""
        coefficients = self.basis_coordinates(x)
        return coefficients is not None and all(c.denominator == 1 for c in coefficients)

    def same_as(self, other: "Sublattice") -> bool:
        """True if both sublattices have the same parent and the same Z-span."""
        return self.parent == other.parent and self.basis == other.basis

    def index_in_parent(self) -> int:
        """
        Return [parent : self] = sqrt(det(self) / det(parent)).

        Raises
        ------
        NotFullRankError
            If the sublattice is not of full rank.
        """
        if not self.is_full_rank:
            raise NotFullRankError(self.name, self.rank, self.parent.rank)
        ratio = Fraction(self.determinant, self.parent.determinant)
        root = math.isqrt(ratio.numerator)
        if ratio.denominator != 1 or root * root != ratio.numerator:
            raise LatticeError(f"det({self.name})/det({self.parent.name}) = {ratio} is not a perfect square")
        return root

    def __str__(self) -> str:
        return self.name


LatticeLike = Union[Lattice, Sublattice]


def parent_of(space: LatticeLike) -> Lattice:
    """Return the ambient lattice of a lattice or sublattice."""
    return space.parent if isinstance(space, Sublattice) else space


def _basis_of(space: LatticeLike) -> tuple[Lattice, tuple[Point, ...], tuple[tuple[int, ...], ...]]:
    if isinstance(space, Sublattice):
        return space.parent, space.basis, space.gram
    identity = tuple(tuple(1 if i == j else 0 for j in range(space.rank)) for i in range(space.rank))
    return space, identity, space.gram


def _enumerate(gram: Sequence[Sequence[int]], center: Coords, radius: Fraction) -> Iterable[Point]:
    """Yield integer y with (y - center)^T gram (y - center) <= radius, via a bounding box."""
    if radius < 0:
        return
    inverse = _rows(sympy.Matrix(gram).inv())
    ranges = []
    for i in range(len(gram)):
        reach = radius * inverse[i][i]
        # floor(sqrt(reach)) for a non-negative rational
        width = math.isqrt(reach.numerator // reach.denominator)
        while Fraction((width + 1) ** 2) <= reach:
            width += 1
        low = math.ceil(center[i] - width - 1)
        high = math.floor(center[i] + width + 1)
        ranges.append(range(low, high + 1))
    for y in itertools.product(*ranges):
        shifted = [Fraction(a) - c for a, c in zip(y, center)]
        value = sum((shifted[i] * gram[i][j] * shifted[j] for i in range(len(gram)) for j in range(len(gram))),
                    Fraction(0))
        if value <= radius:
            yield tuple(y)


def vectors_up_to_norm(space: LatticeLike, bound) -> list[QVec]:
    """
    Enumerate the points of a lattice or sublattice of norm at most bound.

    Parameters
    ----------
    space : Lattice | Sublattice
        The lattice to enumerate; sublattice points are returned in parent coordinates.
    bound : int | Fraction
        Norm bound (inclusive).

    Returns
    -------
    list[QVec]
        Each point once, sorted lexicographically by parent coordinates.
    """
    return vectors_in_coset(space, None, bound)


def vectors_in_coset(space: LatticeLike, shift: Optional[Sequence], bound) -> list[QVec]:
    """
    Enumerate the points of shift + space of norm at most bound.

    Parameters
    ----------
    space : Lattice | Sublattice
        The lattice being shifted.
    shift : sequence of rationals | None
        Shift in parent coordinates; None means the zero shift.
    bound : int | Fraction
        Norm bound (inclusive).

    Returns
    -------
    list[QVec]
        Points of the coset in parent coordinates, sorted lexicographically.
    """
    parent, basis, gram = _basis_of(space)
    bound = Fraction(bound)
    shift_coords = _fractions(shift) if shift is not None else tuple(Fraction(0) for _ in range(parent.rank))
    if isinstance(space, Sublattice):
        along = space.basis_coordinates(shift_coords)
        if along is None:
            # split the shift into its span component and an orthogonal remainder
            b = _matrix(basis).T
            g = sympy.Matrix(parent.gram)
            s = _matrix([[c] for c in shift_coords])
            solution = (b.T * g * b).inv() * (b.T * g * s)
            along = tuple(to_fraction(solution[k, 0]) for k in range(len(basis)))
        in_span = [sum((along[k] * basis[k][i] for k in range(len(basis))), Fraction(0)) for i in range(parent.rank)]
        perp = tuple(a - b for a, b in zip(shift_coords, in_span))
    else:
        along = shift_coords
        perp = tuple(Fraction(0) for _ in range(parent.rank))
    remaining = bound - parent.inner_coords(perp, perp)
    center = tuple(-a for a in along)
    points = []
    for y in _enumerate(gram, center, remaining):
        coords = tuple(
            shift_coords[i] + sum((Fraction(y[k]) * basis[k][i] for k in range(len(basis))), Fraction(0))
            for i in range(parent.rank)
        )
        points.append(coords)
    points.sort()
    return [QVec(parent, p) for p in points]


def coset_decomposition(lattice: Lattice, sublattice: Sublattice, along: Optional[Sequence] = None) -> list[QVec]:
    """
    Return representatives r_0 = 0, ..., r_{k-1} of lattice / sublattice.

    When some element has order equal to the index, the representatives are its
    multiples: the optional along vector is tried first, then the basis vectors in
    order. Otherwise representatives are chosen greedily by norm.

    Parameters
    ----------
    lattice : Lattice
        The ambient lattice.
    sublattice : Sublattice
        A full-rank sublattice of lattice.
    along : sequence of int | None
        Preferred cyclic generator in lattice coordinates.

    Returns
    -------
    list[QVec]
        Exactly [lattice : sublattice] representatives.

    Raises
    ------
    LatticeMismatchError
        If the sublattice lives in another lattice.
    NotFullRankError
        If the sublattice does not have full rank.
    """
    if sublattice.parent != lattice:
        raise LatticeMismatchError(lattice.name, sublattice.parent.name)
    index = sublattice.index_in_parent()
    candidates = []
    if along is not None:
        candidates.append(as_point(along))
    candidates.extend(lattice.basis_vector(i).point() for i in range(lattice.rank))
    for c in candidates:
        multiples = [tuple(m * x for x in c) for m in range(index)]
        if all(not sublattice.contains(m) for m in multiples[1:]):
            logger.debug("cosets of %s in %s generated by %s", sublattice.name, lattice.name, c)
            return [lattice.vector(m) for m in multiples]
    representatives = [lattice.zero().point()]
    bound = 2
    while len(representatives) < index:
        for v in sorted(vectors_up_to_norm(lattice, bound), key=lambda q: (q.norm(), q.coords)):
            p = v.point()
            if all(not sublattice.contains(tuple(a - b for a, b in zip(p, r))) for r in representatives):
                representatives.append(p)
                if len(representatives) == index:
                    break
        bound += 2
    return [lattice.vector(r) for r in representatives]


def _independent_columns(columns: Sequence[Coords]) -> list[int]:
    _, pivots = _matrix(columns).T.rref()
    return list(pivots)


@dataclass(frozen=True)
class Isometry:
    """
    An isometry between lattices or sublattices, given by generator images.

    The domain vectors (in the source's parent coordinates) must generate the
    source, the images (in the target's parent coordinates) must generate the
    target, and all pairwise inner products must agree exactly.

    Attributes
    ----------
    name : str
        Identifier.
    source, target : Lattice | Sublattice
        Domain and codomain.
    domain : tuple of coordinate tuples
        Generators of the source.
    images : tuple of coordinate tuples
        Their images.

    Raises
    ------
    NotAnIsometryError
        If some pair of inner products differs.
    LatticeError
        If the vectors do not generate source and target.
    """

    name: str
    source: LatticeLike
    target: LatticeLike
    domain: tuple[Point, ...]
    images: tuple[Point, ...]

    def __post_init__(self):
        domain = tuple(as_point(v) for v in self.domain)
        images = tuple(as_point(v) for v in self.images)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "images", images)
        if len(domain) != len(images) or not domain:
            raise LatticeError(f"Isometry '{self.name}' needs one image per domain vector")
        src, tgt = parent_of(self.source), parent_of(self.target)
        if any(len(v) != src.rank for v in domain) or any(len(v) != tgt.rank for v in images):
            raise LatticeError(f"Isometry '{self.name}' has vectors of the wrong length")
        for i in range(len(domain)):
            for j in range(i, len(domain)):
                lhs = src.inner_coords(domain[i], domain[j])
                rhs = tgt.inner_coords(images[i], images[j])
                if lhs != rhs:
                    raise NotAnIsometryError(self.name, i, j, lhs, rhs)
        if not _generates(self.source, domain):
            raise LatticeError(f"Domain vectors of '{self.name}' do not generate {self.source.name}")
        if not _generates(self.target, images):
            raise LatticeError(f"Images of '{self.name}' do not generate {self.target.name}")

    @property
    def is_automorphism(self) -> bool:
        """True if source and target are the same full lattice."""
        return isinstance(self.source, Lattice) and self.source == self.target

    @cached_property
    def _maps(self) -> tuple[tuple[Coords, ...], tuple[Coords, ...]]:
        src = parent_of(self.source)
        tgt = parent_of(self.target)
        chosen = _independent_columns(self.domain)
        d = _matrix([self.domain[k] for k in chosen]).T
        t = _matrix([self.images[k] for k in chosen]).T
        if d.cols < src.rank:
            complement = (d.T * sympy.Matrix(src.gram)).nullspace()
            c = sympy.Matrix.hstack(*complement)
            full = sympy.Matrix.hstack(d, c)
        else:
            c = sympy.zeros(src.rank, 0)
            full = d
        inverse = full.inv()
        linear = sympy.Matrix.hstack(t, sympy.zeros(tgt.rank, c.cols)) * inverse
        killed = sympy.Matrix.hstack(sympy.zeros(c.cols, d.cols), sympy.eye(c.cols)) * inverse
        return _rows(linear), _rows(killed)

    @property
    def linear_map(self) -> tuple[Coords, ...]:
        """Rational matrix from source parent coordinates to target parent coordinates (complement sent to 0)."""
        return self._maps[0]

    @property
    def complement_map(self) -> tuple[Coords, ...]:
        """Rational matrix extracting the components orthogonal to the source span."""
        return self._maps[1]

    def apply(self, x: Sequence) -> Coords:
        """
        Apply the isometry to a vector of the source span.

        Raises
        ------
        LatticeError
            If x has a component orthogonal to the source.
        """
        x = _fractions(x)
        for row in self.complement_map:
            if sum((a * b for a, b in zip(row, x)), Fraction(0)) != 0:
                raise LatticeError(f"{format_coords(x)} is outside the span of {self.source.name}")
        return tuple(sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in self.linear_map)

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        """
        Integer matrix of a lattice automorphism; column j is the image of basis vector j.

        Raises
        ------
        LatticeError
            If the isometry is not an automorphism of a full lattice.
        """
        if not self.is_automorphism:
            raise LatticeError(f"'{self.name}' is not an automorphism of a lattice")
        columns = [as_point(self.apply(self.source.basis_vector(j).coords)) for j in range(self.source.rank)]
        return tuple(tuple(columns[j][i] for j in range(len(columns))) for i in range(len(columns)))

    def inverse(self) -> "Isometry":
        """Return the inverse isometry."""
        return Isometry(f"inv({self.name})", self.target, self.source, self.images, self.domain)

    def order(self, bound: int = 64) -> int:
        """
        Return the order of a lattice automorphism.

        Raises
        ------
        LatticeError
            If the order exceeds bound.
        """
        m = sympy.Matrix(self.matrix)
        power = m
        for k in range(1, bound + 1):
            if power == sympy.eye(m.rows):
                return k
            power = power * m
        raise LatticeError(f"Order of '{self.name}' exceeds {bound}")

    def __str__(self) -> str:
        return self.name


def _generates(space: LatticeLike, vectors: Sequence[Point]) -> bool:
    parent = parent_of(space)
    span = Sublattice("span", parent, tuple(vectors))
    if isinstance(space, Sublattice):
        return span.same_as(space)
    return span.is_full_rank and span.index_in_parent() == 1


def isometry_from_images(
    name: str, source: LatticeLike, target: LatticeLike, domain: Sequence[Sequence], images: Sequence[Sequence]
) -> Isometry:
    """
    Build the linear extension of generator images, validating it exactly.

    Parameters
    ----------
    name : str
        Identifier.
    source, target : Lattice | Sublattice
        Domain and codomain.
    domain : sequence of integer coordinate rows
        Generators of the source in its parent's coordinates.
    images : sequence of integer coordinate rows
        Images in the target's parent coordinates.

    Returns
    -------
    Isometry
        The validated isometry.

    Raises
    ------
    NotAnIsometryError
        If the Gram matrices of generators and images differ.
    """
    return Isometry(name, source, target, tuple(as_point(v) for v in domain), tuple(as_point(v) for v in images))


def lattice_automorphism(name: str, lattice: Lattice, matrix: Sequence[Sequence[int]]) -> Isometry:
    """
    Build an automorphism of a lattice from its integer matrix (columns are images of basis vectors).

    Raises
    ------
    NotAnIsometryError
        If the matrix does not preserve the Gram matrix.
    """
    d = lattice.rank
    images = [tuple(matrix[i][j] for i in range(d)) for j in range(d)]
    domain = [lattice.basis_vector(j).point() for j in range(d)]
    return Isometry(name, lattice, lattice, tuple(domain), tuple(images))


def restricts_to(outer: Isometry, inner_map: Isometry, along: Isometry) -> bool:
    """
    Check that outer restricted to the image of along corresponds to inner_map.

    For every generator x of along's source, along(inner_map(x)) must equal
    outer(along(x)).

    Parameters
    ----------
    outer : Isometry
        Isometry of the lattice containing along's target.
    inner_map : Isometry
        Isometry of the lattice containing along's source.
    along : Isometry
        The identification of the two sublattices.

    Returns
    -------
    bool
        True if the square commutes on generators.
    """
    for x in along.domain:
        if along.apply(inner_map.apply(x)) != outer.apply(along.apply(x)):
            return False
    return True
