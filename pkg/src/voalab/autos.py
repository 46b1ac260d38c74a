"""Automorphisms of lattice VOAs as expression trees with cached per-grade matrices."""

import logging
import random
import threading
from collections import deque
from fractions import Fraction
from typing import Any, Optional, Sequence

from .config import EngineConfig
from .exceptions import (
    GroupTooLargeError,
    InternalConsistencyError,
    LatticeError,
    LatticeMismatchError,
    NotAnAutomorphismError,
    NotGeneratedError,
    OrderExceededError,
    UnsupportedLiftError,
)
from .fock import Echelon, Monomial, SparseVector, StateVector, Subspace, add_into, invert_columns, kernel_on_grade
from .fock import multiply_columns, substitute_modes
from .lattice import Isometry, Sublattice, as_point, lattice_automorphism, parent_of
from .scalar import phase
from .vertex import LatticeVOA, lattice_virasoro

logger = logging.getLogger(__name__)

Columns = list[SparseVector]
Signature = tuple[tuple[tuple[tuple[int, Any], ...], ...], ...]
NormalForm = tuple[tuple[Fraction, ...], tuple[tuple[int, ...], ...]]


class Automorphism:
    """
    Base class of automorphism expressions.

    Subclasses compute the sparse matrix of one grade; this class caches them,
    applies them to states and builds compositions and inverses. Matrices are
    lists of columns: column j is the image of the j-th basis monomial of the grade.

    Parameters
    ----------
    voa : LatticeVOA
        The VOA acted on.
    name : str
        Display expression.
    """

    def __init__(self, voa: LatticeVOA, name: str):
        self.voa = voa
        self.name = name
        self._matrices: dict[int, Columns] = {}
        self._lock = threading.RLock()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name} on {self.voa.name})"

    def __str__(self) -> str:
        return self.name

    def _compute(self, n: int) -> Columns:
        raise NotImplementedError

    def matrix(self, n: int) -> Columns:
        """
        Sparse columns of the action on grade n.

        Raises
        ------
        ValueError
            If n is outside 0..cutoff.
        """
        if not 0 <= n <= self.voa.cutoff:
            raise ValueError(f"Grade {n} outside 0..{self.voa.cutoff} of {self.voa.name}")
        cached = self._matrices.get(n)
        if cached is not None:
            return cached
        with self._lock:
            if n not in self._matrices:
                self._matrices[n] = self._compute(n)
            return self._matrices[n]

    def apply(self, state: StateVector) -> StateVector:
        """
        Apply the automorphism to a state of any weights up to the cutoff.

        Returns
        -------
        StateVector
            The image.
        """
        if state.lattice != self.voa.lattice:
            raise LatticeMismatchError(self.voa.lattice.name, state.lattice.name)
        basis = self.voa.basis
        result: dict[Monomial, Any] = {}
        for monomial, coefficient in state.items():
            n, j = basis.position(monomial)
            grade = basis.basis(n)
            add_into(result, {grade[i]: c for i, c in self.matrix(n)[j].items()}, coefficient)
        return StateVector(self.voa.lattice, result)

    def __mul__(self, other: "Automorphism") -> "Automorphism":
        """a * b applies b first."""
        return compose(self, other)

    def inverse(self) -> "Automorphism":
        """Return the inverse automorphism."""
        return _InverseOf(self)

    def normal_form(self) -> Optional[NormalForm]:
        """
        Return (h, S) with self = inner(h) * lifted(S), or None for other shapes.

        h is in lattice coordinates and S is the integer isometry matrix.
        """
        return None

    def _check_fixes_vacuum_and_virasoro(self) -> None:
        if self.apply(self.voa.vacuum) != self.voa.vacuum:
            raise NotAnAutomorphismError(f"{self.name} does not fix the vacuum", 0)
        if self.voa.cutoff >= 2:
            omega = lattice_virasoro(self.voa)
            if self.apply(omega) != omega:
                raise NotAnAutomorphismError(f"{self.name} does not fix the Virasoro vector", 2)


def _identity_matrix(d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def _matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple[tuple, ...]:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))) for i in range(len(a)))


class Lifted(Automorphism):
    """
    The lift of a lattice automorphism g: h(-n) -> (gh)(-n), e^mu -> e^(g mu).

    With a pairwise-even Gram matrix the trivial cocycle makes this sign-free.

    Raises
    ------
    UnsupportedLiftError
        If the isometry is not an automorphism of the VOA's lattice.
    """

    def __init__(self, voa: LatticeVOA, isometry: Isometry, name: Optional[str] = None):
        if not isometry.is_automorphism or isometry.source != voa.lattice:
            raise UnsupportedLiftError(voa.lattice.name, f"'{isometry.name}' is not an automorphism of this lattice")
        super().__init__(voa, name or f"lift({isometry.name})")
        self.isometry = isometry
        self.integer_matrix = isometry.matrix
        d = voa.lattice.rank
        m = self.integer_matrix
        self._directions = [{j: Fraction(m[j][i]) for j in range(d) if m[j][i]} for i in range(d)]
        self._check_fixes_vacuum_and_virasoro()

    def _compute(self, n: int) -> Columns:
        basis = self.voa.basis
        m = self.integer_matrix
        d = self.voa.lattice.rank
        columns = []
        for monomial in basis.basis(n):
            point = tuple(sum(m[i][j] * monomial.point[j] for j in range(d)) for i in range(d))
            column: SparseVector = {}
            for modes, c in substitute_modes(monomial.modes, self._directions).items():
                column[basis.index(n, Monomial(modes, point))] = c
            columns.append(column)
        return columns

    def inverse(self) -> "Automorphism":
        return Lifted(self.voa, self.isometry.inverse(), f"inv({self.name})")

    def normal_form(self) -> NormalForm:
        return tuple(Fraction(0) for _ in range(self.voa.lattice.rank)), self.integer_matrix


class Inner(Automorphism):
    """
    The inner automorphism exp(2 pi i h_(0)): Heisenberg modes fixed, e^mu -> phase(<h, mu>) e^mu.

    Raises
    ------
    UnrepresentablePhaseError
        If some <h, b_i> has a denominator not dividing 4.
    """

    def __init__(self, voa: LatticeVOA, shift: Sequence, name: Optional[str] = None):
        self.shift = tuple(Fraction(c) for c in shift)
        if len(self.shift) != voa.lattice.rank:
            raise LatticeError(f"Shift {self.shift} has the wrong length for {voa.lattice.name}")
        self._functional = voa.lattice.gram_times(self.shift)
        for value in self._functional:
            phase(value)
        super().__init__(voa, name or f"inner({_format_shift(voa, self.shift)})")
        self._check_fixes_vacuum_and_virasoro()

    def _compute(self, n: int) -> Columns:
        columns = []
        for j, monomial in enumerate(self.voa.basis.basis(n)):
            turns = sum((a * b for a, b in zip(self._functional, monomial.point)), Fraction(0))
            columns.append({j: phase(turns)})
        return columns

    def inverse(self) -> "Automorphism":
        return Inner(self.voa, tuple(-c for c in self.shift), f"inv({self.name})")

    def normal_form(self) -> NormalForm:
        return self.shift, _identity_matrix(self.voa.lattice.rank)


def _format_shift(voa: LatticeVOA, shift: Sequence[Fraction]) -> str:
    terms = [f"{c}*{name}" for c, name in zip(shift, voa.lattice.basis_names) if c]
    return " + ".join(terms) if terms else "0"


class Propagated(Automorphism):
    """
    The unique linear map extending images of the weight-one space multiplicatively.

    Grade n is spanned by words a_(-k) w with a of weight one and w of weight n-k.
    A basis is solved from these words and mapped by a_(-k) w -> g(a)_(-k) g(w);
    every word relation is then checked to be preserved, so the map is well defined.

    Parameters
    ----------
    voa : LatticeVOA
        The VOA, which must be generated by its weight-one space.
    images : sequence of StateVector
        Images of the grade-1 basis monomials, in basis order.
    name : str
        Display expression.
    config : EngineConfig, optional
        Supplies propagation_check_weight.

    Raises
    ------
    NotGeneratedError
        If the words fail to span some grade.
    NotAnAutomorphismError
        If an image has the wrong weight, or a word relation is violated.
    """

    def __init__(
        self, voa: LatticeVOA, images: Sequence[StateVector], name: str, config: Optional[EngineConfig] = None
    ):
        super().__init__(voa, name)
        self.config = config or voa.config
        basis = voa.basis
        if voa.cutoff < 1:
            self.images: list[StateVector] = []
        else:
            if len(images) != basis.dim(1):
                raise NotAnAutomorphismError(f"{name} needs {basis.dim(1)} weight-one images, got {len(images)}", 1)
            for image in images:
                if not image.is_zero() and voa.state_weight(image) != 1:
                    raise NotAnAutomorphismError(f"{name} maps a weight-one vector to {image}", 1)
            self.images = list(images)
        self._generators = [StateVector(voa.lattice, {m: Fraction(1)}) for m in (basis.basis(1) if voa.cutoff else ())]
        self._check_fixes_vacuum_and_virasoro()

    def _compute(self, n: int) -> Columns:
        voa = self.voa
        basis = voa.basis
        if n == 0:
            return [{0: Fraction(1)}]
        if n == 1:
            return [basis.coordinates(image, 1) for image in self.images]
        dim = basis.dim(n)
        echelon = Echelon(track=True)
        words: list[tuple[int, int, int]] = []
        vectors: list[SparseVector] = []
        for k in range(1, n + 1):
            for a, generator in enumerate(self._generators):
                for w, monomial in enumerate(basis.basis(n - k)):
                    word = voa.mode(generator, -k, StateVector(voa.lattice, {monomial: Fraction(1)}))
                    coords = basis.coordinates(word, n)
                    words.append((a, k, w))
                    vectors.append(coords)
                    echelon.insert(coords, len(words) - 1)
        if echelon.rank != dim:
            raise NotGeneratedError(n, echelon.rank, dim)
        word_images: dict[int, SparseVector] = {}

        def image_of(tag: int) -> SparseVector:
            if tag not in word_images:
                a, k, w = words[tag]
                source = basis.state(n - k, self.matrix(n - k)[w])
                word_images[tag] = basis.coordinates(voa.mode(self.images[a], -k, source), n)
            return word_images[tag]

        columns = []
        for p in range(dim):
            combination = echelon.solve({p: Fraction(1)})
            column: SparseVector = {}
            for tag, c in combination.items():
                add_into(column, image_of(tag), c)
            columns.append(column)
        limit = self.config.propagation_check_weight
        if limit is None or n <= limit:
            for tag, vector in enumerate(vectors):
                mapped: SparseVector = {}
                for j, c in vector.items():
                    add_into(mapped, columns[j], c)
                if mapped != image_of(tag):
                    a, k, w = words[tag]
                    raise NotAnAutomorphismError(
                        f"{self.name} breaks the relation of the word "
                        f"{basis.basis(1)[a].format(voa.lattice)}_(-{k}) {basis.basis(n - k)[w].format(voa.lattice)}",
                        n,
                    )
        logger.info("propagated %s to grade %d (%d words, dim %d)", self.name, n, len(words), dim)
        return columns


class Composite(Automorphism):
    """The composition of factors; the last factor is applied first."""

    def __init__(self, voa: LatticeVOA, factors: Sequence[Automorphism], name: Optional[str] = None):
        if not factors:
            raise ValueError("Composite needs at least one factor")
        for factor in factors:
            if factor.voa is not voa:
                raise LatticeMismatchError(voa.lattice.name, factor.voa.lattice.name)
        self.factors = tuple(factors)
        super().__init__(voa, name or "*".join(f.name for f in factors))

    def _compute(self, n: int) -> Columns:
        result = self.factors[-1].matrix(n)
        for factor in reversed(self.factors[:-1]):
            result = multiply_columns(factor.matrix(n), result)
        return result

    def inverse(self) -> "Automorphism":
        return Composite(self.voa, [f.inverse() for f in reversed(self.factors)], f"inv({self.name})")

    def normal_form(self) -> Optional[NormalForm]:
        forms = [f.normal_form() for f in self.factors]
        if any(form is None for form in forms):
            return None
        h, s = forms[0]
        for h2, s2 in forms[1:]:
            moved = tuple(sum((s[i][j] * h2[j] for j in range(len(h2))), Fraction(0)) for i in range(len(h2)))
            h = tuple(a + b for a, b in zip(h, moved))
            s = _matmul(s, s2)
        return h, s


class _InverseOf(Automorphism):
    """Inverse computed gradewise by sparse matrix inversion."""

    def __init__(self, base: Automorphism):
        super().__init__(base.voa, f"inv({base.name})")
        self.base = base

    def _compute(self, n: int) -> Columns:
        inverse = invert_columns(self.base.matrix(n))
        if inverse is None:
            raise NotAnAutomorphismError(f"{self.base.name} is singular", n)
        return inverse

    def inverse(self) -> "Automorphism":
        return self.base


def compose(*factors: Automorphism) -> Automorphism:
    """
    Compose automorphisms; compose(a, b) applies b first.

    Returns
    -------
    Automorphism
        The single factor itself, or a Composite.
    """
    if len(factors) == 1:
        return factors[0]
    return Composite(factors[0].voa, factors)


def identity(voa: LatticeVOA) -> Automorphism:
    """Return the identity automorphism (the lift of the identity matrix)."""
    return Lifted(voa, lattice_automorphism("id", voa.lattice, _identity_matrix(voa.lattice.rank)), "id")


def lifted(voa: LatticeVOA, isometry: Isometry) -> Automorphism:
    """Return the lift of a lattice automorphism."""
    return Lifted(voa, isometry)


def inner(voa: LatticeVOA, shift: Sequence) -> Automorphism:
    """Return inn_h for a rational vector h in lattice coordinates."""
    return Inner(voa, shift)


def _require_blocks(voa: LatticeVOA, blocks: Sequence[int], norm: Optional[int] = None) -> None:
    lattice = voa.lattice
    for b in blocks:
        if not 0 <= b < lattice.rank:
            raise UnsupportedLiftError(lattice.name, f"block {b + 1} does not exist")
        if not lattice.is_orthogonal_block(b):
            raise UnsupportedLiftError(lattice.name, f"basis vector {lattice.basis_names[b]} is not an orthogonal block")
        if norm is not None and lattice.gram[b][b] != norm:
            raise UnsupportedLiftError(lattice.name, f"block {lattice.basis_names[b]} does not have norm {norm}")


def theta(voa: LatticeVOA, blocks: Optional[Sequence[int]] = None) -> Automorphism:
    """
    Lift of -1 on the given 0-based orthogonal blocks (all of L when blocks is None).

    Raises
    ------
    UnsupportedLiftError
        If a named block is not orthogonal to the other basis vectors.
    """
    d = voa.lattice.rank
    if blocks is None:
        matrix = tuple(tuple(-1 if i == j else 0 for j in range(d)) for i in range(d))
        return Lifted(voa, lattice_automorphism("-1", voa.lattice, matrix), "theta")
    _require_blocks(voa, blocks)
    matrix = tuple(tuple((-1 if i in blocks else 1) if i == j else 0 for j in range(d)) for i in range(d))
    label = ",".join(str(b + 1) for b in blocks)
    return Lifted(voa, lattice_automorphism(f"-1 on {label}", voa.lattice, matrix), f"theta({label})")


def perm(voa: LatticeVOA, cycle: Sequence[int]) -> Automorphism:
    """
    Lift of the basis permutation given by a 0-based cycle (i1 -> i2 -> ... -> i1).

    Raises
    ------
    NotAnIsometryError
        If the permutation does not preserve the Gram matrix.
    """
    d = voa.lattice.rank
    target = list(range(d))
    for position, index in enumerate(cycle):
        target[index] = cycle[(position + 1) % len(cycle)]
    matrix = tuple(tuple(1 if target[j] == i else 0 for j in range(d)) for i in range(d))
    label = " ".join(str(c + 1) for c in cycle)
    return Lifted(voa, lattice_automorphism(f"perm({label})", voa.lattice, matrix), f"perm({label})")


def sigma_images(voa: LatticeVOA, blocks: Sequence[int]) -> list[StateVector]:
    """
    Weight-one images of the involution swapping b and e^b + e^-b on rank-one norm-2 blocks.

    On block b: b(-1) -> e^b + e^-b, e^b -> b(-1)/2 - e^b/2 + e^-b/2 and
    e^-b -> b(-1)/2 + e^b/2 - e^-b/2; every other weight-one vector is fixed.

    Raises
    ------
    UnsupportedLiftError
        If a block is not an orthogonal norm-2 basis vector.
    """
    _require_blocks(voa, blocks, norm=2)
    lattice = voa.lattice
    d = lattice.rank
    zero = (0,) * d
    half = Fraction(1, 2)
    images = []
    for monomial in voa.basis.basis(1):
        image = StateVector(lattice, {monomial: Fraction(1)})
        for b in blocks:
            plus = tuple(1 if i == b else 0 for i in range(d))
            minus = tuple(-1 if i == b else 0 for i in range(d))
            heis = Monomial(((b, 1),), zero)
            e_plus, e_minus = Monomial((), plus), Monomial((), minus)
            if monomial == heis:
                image = StateVector(lattice, {e_plus: Fraction(1), e_minus: Fraction(1)})
            elif monomial == e_plus:
                image = StateVector(lattice, {heis: half, e_plus: -half, e_minus: half})
            elif monomial == e_minus:
                image = StateVector(lattice, {heis: half, e_plus: half, e_minus: -half})
        images.append(image)
    return images


def sigma(voa: LatticeVOA, blocks: Sequence[int], config: Optional[EngineConfig] = None) -> Automorphism:
    """Return the product of the sigma involutions on the given 0-based blocks, built by propagation."""
    label = ",".join(str(b + 1) for b in blocks)
    return Propagated(voa, sigma_images(voa, blocks), f"sigma({label})", config)


def propagate(
    voa: LatticeVOA, images: Sequence[StateVector], name: str = "propagated", config: Optional[EngineConfig] = None
) -> Automorphism:
    """Return the automorphism determined by images of the weight-one basis."""
    return Propagated(voa, images, name, config)


def apply(a: Automorphism, state: StateVector) -> StateVector:
    """Apply an automorphism to a state."""
    return a.apply(state)


def equal_on_grades(a: Automorphism, b: Automorphism, max_weight: int) -> bool:
    """True if a and b have identical matrices on every grade 0..max_weight."""
    if a.voa is not b.voa:
        raise LatticeMismatchError(a.voa.lattice.name, b.voa.lattice.name)
    return all(a.matrix(n) == b.matrix(n) for n in range(max_weight + 1))


def first_difference(a: Automorphism, b: Automorphism, max_weight: int) -> Optional[int]:
    """Return the first grade on which a and b differ, or None."""
    for n in range(max_weight + 1):
        if a.matrix(n) != b.matrix(n):
            return n
    return None


def trace_on_grade(a: Automorphism, n: int):
    """Return the exact trace of a on grade n."""
    total = Fraction(0)
    for j, column in enumerate(a.matrix(n)):
        total = total + column.get(j, 0)
    return total


def signature(a: Automorphism, max_weight: int) -> Signature:
    """Hashable canonical form of the matrices on grades 0..max_weight."""
    return tuple(tuple(tuple(sorted(column.items())) for column in a.matrix(n)) for n in range(max_weight + 1))


def _is_identity(columns: Columns) -> bool:
    return all(column == {j: 1} for j, column in enumerate(columns))


def order_of(a: Automorphism, max_weight: int, bound: int = 64) -> int:
    """
    Return the least k <= bound with a^k = id on every grade 0..max_weight.

    Raises
    ------
    OrderExceededError
        If no such k exists.
    """
    powers = {n: a.matrix(n) for n in range(max_weight + 1)}
    for k in range(1, bound + 1):
        if all(_is_identity(powers[n]) for n in powers):
            return k
        powers = {n: multiply_columns(a.matrix(n), powers[n]) for n in powers}
    raise OrderExceededError(bound)


def square_is_scalar_on(a: Automorphism, subspace: Subspace, value) -> bool:
    """True if a^2 v = value * v for every v in the subspace (one grade)."""
    basis = a.voa.basis
    n = subspace.grade
    for vector in subspace.vectors():
        state = basis.state(n, vector)
        if a.apply(a.apply(state)) != value * state:
            return False
    return True


class AutGroup:
    """
    The finite group generated by automorphisms, closed under composition.

    Elements are identified by their matrices on grades 0..max_weight, so the
    closure is certified only up to that weight.

    Parameters
    ----------
    generators : sequence of Automorphism
        Generators over one VOA.
    max_weight : int
        Grades used for equality.
    bound : int
        Largest accepted order.
    name : str
        Display name.

    Raises
    ------
    GroupTooLargeError
        If the closure exceeds bound elements.
    """

    def __init__(self, generators: Sequence[Automorphism], max_weight: int, bound: int = 64, name: str = "G"):
        if not generators:
            raise ValueError("AutGroup needs at least one generator")
        self.voa = generators[0].voa
        for g in generators:
            if g.voa is not self.voa:
                raise LatticeMismatchError(self.voa.lattice.name, g.voa.lattice.name)
        self.generators = tuple(generators)
        self.max_weight = max_weight
        self.bound = bound
        self.name = name
        self.elements = self._close()
        logger.warning(
            "group %s: closure of order %d certified only on grades <= %d", name, len(self.elements), max_weight
        )

    def _close(self) -> list[Automorphism]:
        unit = identity(self.voa)
        seen = {signature(unit, self.max_weight)}
        elements = [unit]
        queue = deque([unit])
        while queue:
            element = queue.popleft()
            for g in self.generators:
                product = compose(g, element) if element is not unit else g
                key = signature(product, self.max_weight)
                if key in seen:
                    continue
                seen.add(key)
                elements.append(product)
                queue.append(product)
                if len(elements) > self.bound:
                    raise GroupTooLargeError(self.bound)
        return elements

    @property
    def order(self) -> int:
        """Number of elements."""
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __str__(self) -> str:
        return f"<{', '.join(g.name for g in self.generators)}>"

    def same_elements(self, other: "AutGroup") -> bool:
        """True if both groups have the same elements on the common grades."""
        w = min(self.max_weight, other.max_weight)
        return {signature(a, w) for a in self} == {signature(b, w) for b in other}


def fixed_space(group: AutGroup, n: int) -> Subspace:
    """
    Return the joint fixed space of the group's generators on grade n.

    The dimension is checked against the Burnside average of the traces.

    Raises
    ------
    InternalConsistencyError
        If the dimension differs from the Burnside average.
    """
    voa = group.voa
    dim = voa.basis.dim(n)
    images: list[dict] = []
    for j in range(dim):
        stacked: dict = {}
        for k, g in enumerate(group.generators):
            column = dict(g.matrix(n)[j])
            add_into(column, {j: Fraction(1)}, -1)
            for i, c in column.items():
                stacked[(k, i)] = c
        images.append(stacked)
    result = kernel_on_grade(images, n, voa.name)
    average = sum((trace_on_grade(g, n) for g in group), Fraction(0)) / group.order
    if average != result.dim:
        raise InternalConsistencyError(
            "burnside", f"grade {n} of {voa.name}: fixed dimension {result.dim}, average trace {average}"
        )
    return result


def check_homomorphism(a: Automorphism, samples: int = 20, seed: int = 0) -> list[str]:
    """
    Sample a(u_(n) v) = a(u)_(n) a(v) on random basis pairs of weight <= 2.

    Returns
    -------
    list[str]
        Descriptions of failing samples (empty if all pass).
    """
    voa = a.voa
    rng = random.Random(seed)
    pool = [m for n in range(min(2, voa.cutoff) + 1) for m in voa.basis.basis(n)]
    failures = []
    for _ in range(samples):
        left, right = rng.choice(pool), rng.choice(pool)
        wl, wr = voa.weight(left), voa.weight(right)
        choices = [n for n in range(-2, wl + wr) if 0 <= wl + wr - n - 1 <= voa.cutoff]
        if not choices:
            continue
        n = rng.choice(choices)
        u = StateVector(voa.lattice, {left: Fraction(1)})
        v = StateVector(voa.lattice, {right: Fraction(1)})
        if a.apply(voa.mode(u, n, v)) != voa.mode(a.apply(u), n, a.apply(v)):
            failures.append(f"{a.name}: {left.format(voa.lattice)}_({n}){right.format(voa.lattice)}")
    return failures


def transport(isometry: Isometry, state: StateVector, target: LatticeVOA) -> StateVector:
    """
    Carry a state of V_S (S the isometry's source) to V_T inside the target VOA.

    Heisenberg directions are split into their S-span and orthogonal parts; the
    orthogonal parts must cancel for a state of V_S, and the span parts are mapped
    linearly. Points must lie in S and are mapped by the isometry.

    Raises
    ------
    LatticeError
        If the state is not in V_S.
    """
    source_lattice = parent_of(isometry.source)
    if state.lattice != source_lattice:
        raise LatticeMismatchError(source_lattice.name, state.lattice.name)
    if parent_of(isometry.target) != target.lattice:
        raise LatticeMismatchError(parent_of(isometry.target).name, target.lattice.name)
    linear = isometry.linear_map
    complement = isometry.complement_map
    d_source = source_lattice.rank
    d_target = target.lattice.rank
    directions = []
    for i in range(d_source):
        image = {j: linear[j][i] for j in range(d_target) if linear[j][i]}
        image.update({d_target + r: complement[r][i] for r in range(len(complement)) if complement[r][i]})
        directions.append(image)
    terms: dict[Monomial, Any] = {}
    for monomial, coefficient in state.items():
        if isinstance(isometry.source, Sublattice) and not isometry.source.contains(monomial.point):
            raise LatticeError(f"{monomial.format(source_lattice)} has a point outside {isometry.source.name}")
        point = as_point(isometry.apply(monomial.point))
        for modes, c in substitute_modes(monomial.modes, directions).items():
            add_into(terms, {Monomial(modes, point): c}, coefficient)
    for monomial in terms:
        if any(i >= d_target for i, _ in monomial.modes):
            raise LatticeError(f"State is not in V_{isometry.source.name}: orthogonal Heisenberg modes remain")
    return StateVector(target.lattice, terms)

