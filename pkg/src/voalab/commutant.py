"""Commutants, orbifold subspaces and the nested and coset identities, computed grade by grade."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import zip_longest
from typing import Callable, Optional, Sequence

import sympy

from .autos import Automorphism, AutGroup, fixed_space, transport
from .exceptions import GradeMismatchError, HeadroomError, LatticeMismatchError, NotPreservedError
from .fock import Monomial, SparseVector, StateVector, Subspace, add_into, enumerate_monomials, kernel_in_span
from .fock import kernel_on_grade, substitute_modes
from .lattice import Isometry, Sublattice, to_fraction, vectors_in_coset
from .report import CheckRow, raise_first_failure
from .vertex import LatticeVOA, commuting_pair

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComputedSubspace:
    """
    A graded subspace of V_L on grades 0..max_weight.

    Attributes
    ----------
    voa : LatticeVOA
        The ambient VOA.
    grades : tuple[Subspace, ...]
        grades[n] is the weight-n piece in canonical echelon form.
    provenance : str
        How the subspace was obtained, e.g. "commutant(omega_U)".
    """

    voa: LatticeVOA
    grades: tuple[Subspace, ...]
    provenance: str

    @property
    def max_weight(self) -> int:
        """Largest grade covered."""
        return len(self.grades) - 1

    def grade(self, n: int) -> Subspace:
        """The weight-n piece."""
        return self.grades[n]

    def dims(self) -> list[int]:
        """Dimensions of grades 0..max_weight."""
        return [g.dim for g in self.grades]

    def contains_vacuum(self) -> bool:
        """True if the vacuum lies in grade 0."""
        return self.grades[0].contains({0: Fraction(1)})

    def _check(self, other: "ComputedSubspace") -> None:
        if self.voa is not other.voa:
            raise LatticeMismatchError(self.voa.lattice.name, other.voa.lattice.name)
        if self.max_weight != other.max_weight:
            raise GradeMismatchError(f"grades 0..{self.max_weight}", f"grades 0..{other.max_weight}")

    def equals(self, other: "ComputedSubspace") -> bool:
        """Gradewise equality."""
        self._check(other)
        return self.grades == other.grades

    def intersect(self, other: "ComputedSubspace") -> "ComputedSubspace":
        """Gradewise intersection."""
        self._check(other)
        grades = tuple(a.intersection(b) for a, b in zip(self.grades, other.grades))
        return ComputedSubspace(self.voa, grades, f"intersect({self.provenance}, {other.provenance})")

    def sum(self, other: "ComputedSubspace") -> "ComputedSubspace":
        """Gradewise sum."""
        self._check(other)
        grades = tuple(a.sum(b) for a, b in zip(self.grades, other.grades))
        return ComputedSubspace(self.voa, grades, f"sum({self.provenance}, {other.provenance})")

    def states(self, n: int) -> list[StateVector]:
        """Basis of grade n as StateVectors."""
        return [self.voa.basis.state(n, v) for v in self.grades[n].vectors()]

    def __str__(self) -> str:
        return f"{self.provenance} in {self.voa.name}: dims {self.dims()}"


def _by_grade(voa: LatticeVOA, max_weight: int, compute: Callable[[int], Subspace]) -> tuple[Subspace, ...]:
    jobs = max(1, voa.config.jobs)
    if jobs == 1:
        return tuple(compute(n) for n in range(max_weight + 1))
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return tuple(pool.map(compute, range(max_weight + 1)))


def _check_range(voa: LatticeVOA, max_weight: int) -> None:
    if max_weight > voa.cutoff:
        raise HeadroomError(max_weight, voa.cutoff, "subspace grades")


def whole_space(voa: LatticeVOA, max_weight: int) -> ComputedSubspace:
    """The whole of V_L on grades 0..max_weight."""
    _check_range(voa, max_weight)
    grades = tuple(Subspace.whole(n, voa.basis.dim(n), voa.name) for n in range(max_weight + 1))
    return ComputedSubspace(voa, grades, "all")


def sector_functionals(e: StateVector) -> list[tuple[Fraction, ...]]:
    """
    Integer functionals vanishing on every lattice point occurring in e.

    e_(0) preserves the value of these functionals, so kernels can be computed
    one sector at a time.
    """
    points = sorted({m.point for m in e})
    if not points:
        return []
    matrix = sympy.Matrix([list(p) for p in points])
    return [tuple(to_fraction(c) for c in vector) for vector in matrix.nullspace()]


def _sectors(monomials: Sequence[Monomial], functionals: list[tuple[Fraction, ...]]) -> dict[tuple, list[int]]:
    sectors: dict[tuple, list[int]] = {}
    for j, m in enumerate(monomials):
        key = tuple(sum((f[i] * m.point[i] for i in range(len(f))), Fraction(0)) for f in functionals)
        sectors.setdefault(key, []).append(j)
    return sectors


def commutant(
    voa: LatticeVOA, e: StateVector, max_weight: int, within: Optional[ComputedSubspace] = None, label: str = ""
) -> ComputedSubspace:
    """
    Compute Com_V(e) = ker e_(0) on grades 0..max_weight.

    Parameters
    ----------
    voa : LatticeVOA
        The ambient VOA; its cutoff must be at least max_weight + 1.
    e : StateVector
        A conformal vector.
    max_weight : int
        Largest grade computed.
    within : ComputedSubspace, optional
        Restrict to this subspace (nested commutants and Com_{V^G}(e)).
    label : str
        Name of e used in the provenance.

    Returns
    -------
    ComputedSubspace
        The kernel of e_(0) from each grade n to grade n+1.

    Raises
    ------
    HeadroomError
        If the VOA cutoff is below max_weight + 1.
    """
    if voa.cutoff < max_weight + 1:
        raise HeadroomError(max_weight + 1, voa.cutoff, "commutant kernels")
    basis = voa.basis
    functionals = sector_functionals(e)

    def image(monomial: Monomial, n: int) -> SparseVector:
        return basis.coordinates(voa.mode(e, 0, StateVector(voa.lattice, {monomial: Fraction(1)})), n + 1)

    def compute(n: int) -> Subspace:
        monomials = basis.basis(n)
        if within is not None:
            vectors = within.grade(n).vectors()
            images = []
            for vector in vectors:
                total: SparseVector = {}
                for j, c in vector.items():
                    add_into(total, image(monomials[j], n), c)
                images.append(total)
            result = kernel_in_span(vectors, images, n, len(monomials), voa.name)
        else:
            kernel: list[SparseVector] = []
            for indices in _sectors(monomials, functionals).values():
                block = kernel_on_grade([image(monomials[j], n) for j in indices], n)
                kernel.extend({indices[k]: c for k, c in v.items()} for v in block.vectors())
            result = Subspace.span(n, len(monomials), kernel, voa.name)
        logger.info("commutant of %s in %s: grade %d has dim %d", label or "e", voa.name, n, result.dim)
        return result

    provenance = f"commutant({label or 'e'})" if within is None else f"commutant({label or 'e'}, {within.provenance})"
    return ComputedSubspace(voa, _by_grade(voa, max_weight, compute), provenance)


def fixed_subspace(group: AutGroup, max_weight: int) -> ComputedSubspace:
    """V^G on grades 0..max_weight, each grade checked against its Burnside average."""
    voa = group.voa
    _check_range(voa, max_weight)
    grades = _by_grade(voa, max_weight, lambda n: fixed_space(group, n))
    return ComputedSubspace(voa, grades, f"fixed({group.name})")


def _mapped(a: Automorphism, n: int, vector: SparseVector) -> SparseVector:
    columns = a.matrix(n)
    result: SparseVector = {}
    for j, c in vector.items():
        add_into(result, columns[j], c)
    return result


def orbifold(sub: ComputedSubspace, group: AutGroup) -> ComputedSubspace:
    """
    The G-fixed part of a subspace: gradewise intersection with every generator's fixed space.

    Raises
    ------
    NotPreservedError
        If a generator maps some grade of sub outside itself.
    """
    voa = sub.voa
    if group.voa is not voa:
        raise LatticeMismatchError(voa.lattice.name, group.voa.lattice.name)

    def compute(n: int) -> Subspace:
        space = sub.grade(n)
        vectors = space.vectors()
        stacked: list[dict] = [{} for _ in vectors]
        for k, g in enumerate(group.generators):
            images = [_mapped(g, n, vector) for vector in vectors]
            if not space.contains_subspace(Subspace.span(n, space.ambient_dim, images, space.space)):
                raise NotPreservedError(g.name, n, sub.provenance)
            for index, (vector, moved) in enumerate(zip(vectors, images)):
                add_into(moved, vector, -1)
                for i, c in moved.items():
                    stacked[index][(k, i)] = c
        return kernel_in_span(vectors, stacked, n, space.ambient_dim, voa.name)

    return ComputedSubspace(voa, _by_grade(voa, sub.max_weight, compute), f"orbifold({sub.provenance}, {group.name})")


def image_subspace(a: Automorphism, sub: ComputedSubspace) -> ComputedSubspace:
    """Gradewise image of a subspace under an automorphism."""
    if a.voa is not sub.voa:
        raise LatticeMismatchError(sub.voa.lattice.name, a.voa.lattice.name)
    grades = tuple(
        Subspace.span(n, g.ambient_dim, [_mapped(a, n, v) for v in g.vectors()], g.space)
        for n, g in enumerate(sub.grades)
    )
    return ComputedSubspace(sub.voa, grades, f"image({a.name}, {sub.provenance})")


def coset_space(voa: LatticeVOA, sublattice: Sublattice, shift: Optional[Sequence], max_weight: int) -> ComputedSubspace:
    """
    The subspace V_{shift+S} of V_L on grades 0..max_weight.

    Monomials use Heisenberg directions from the basis of S and points of the coset;
    they are embedded into V_L by writing each S basis vector in lattice coordinates.
    For full-rank S this is the span of the V_L basis monomials whose point lies in the coset.

    Parameters
    ----------
    voa : LatticeVOA
        The ambient VOA.
    sublattice : Sublattice
        S, a sublattice of voa.lattice.
    shift : sequence of int | None
        A lattice vector v; None gives V_S itself.
    max_weight : int
        Largest grade.

    Returns
    -------
    ComputedSubspace
        The embedded coset space.
    """
    if sublattice.parent != voa.lattice:
        raise LatticeMismatchError(voa.lattice.name, sublattice.parent.name)
    _check_range(voa, max_weight)
    basis = voa.basis
    shift_point = tuple(int(c) for c in shift) if shift is not None else None
    label = sublattice.name if shift is None else f"coset({sublattice.name}, {list(shift_point)})"
    if sublattice.is_full_rank:
        def inside(point) -> bool:
            moved = point if shift_point is None else tuple(a - b for a, b in zip(point, shift_point))
            return sublattice.contains(moved)

        grades = tuple(
            Subspace.span(n, basis.dim(n), [{j: Fraction(1)} for j, m in enumerate(basis.basis(n)) if inside(m.point)],
                          voa.name)
            for n in range(max_weight + 1)
        )
        return ComputedSubspace(voa, grades, label)
    points = [(v.point(), v.norm() / 2) for v in vectors_in_coset(sublattice, shift_point, 2 * max_weight)]
    found = enumerate_monomials(sublattice.rank, points, max_weight)
    directions = [{i: Fraction(c) for i, c in enumerate(b) if c} for b in sublattice.basis]
    grades = []
    for n in range(max_weight + 1):
        vectors = []
        for monomial in found.get(Fraction(n), []):
            terms = {Monomial(modes, monomial.point): c for modes, c in substitute_modes(monomial.modes, directions).items()}
            vectors.append(basis.coordinates(StateVector(voa.lattice, terms), n))
        grades.append(Subspace.span(n, basis.dim(n), vectors, voa.name))
    return ComputedSubspace(voa, tuple(grades), label)


def sublattice_space(voa: LatticeVOA, sublattice: Sublattice, max_weight: int) -> ComputedSubspace:
    """The subalgebra V_S of V_L on grades 0..max_weight."""
    return coset_space(voa, sublattice, None, max_weight)


def transport_space(isometry: Isometry, sub: ComputedSubspace, target: LatticeVOA) -> ComputedSubspace:
    """Carry a subspace of V_S into V_T along a sublattice isometry, grade by grade."""
    _check_range(target, sub.max_weight)
    grades = []
    for n in range(sub.max_weight + 1):
        vectors = [target.basis.coordinates(transport(isometry, s, target), n) for s in sub.states(n)]
        grades.append(Subspace.span(n, target.basis.dim(n), vectors, target.name))
    return ComputedSubspace(target, tuple(grades), f"transport({isometry.name}, {sub.provenance})")


def annihilator(
    voa: LatticeVOA, generators: Sequence[StateVector], max_weight: int, label: str = ""
) -> ComputedSubspace:
    """
    Vectors killed by every u_(m), m >= 0, for u among the generators, on grades 0..max_weight.

    For a subalgebra generated by the given vectors this is its full commutant,
    an independent cross-check of the e_(0) kernel.
    """
    basis = voa.basis
    weights = [voa.state_weight(u) for u in generators]
    needed = max_weight + max(weights) - 1
    if needed > voa.cutoff:
        raise HeadroomError(needed, voa.cutoff, "annihilation cross-check")

    def compute(n: int) -> Subspace:
        images = []
        for monomial in basis.basis(n):
            v = StateVector(voa.lattice, {monomial: Fraction(1)})
            stacked: dict = {}
            for k, (u, w) in enumerate(zip(generators, weights)):
                for m in range(0, w + n):
                    product = voa.mode(u, m, v)
                    target = w + n - m - 1
                    for i, c in basis.coordinates(product, target).items():
                        stacked[(k, m, i)] = c
            images.append(stacked)
        return kernel_on_grade(images, n, voa.name)

    return ComputedSubspace(voa, _by_grade(voa, max_weight, compute), f"annihilator({label or 'generators'})")


def compare_spaces(check: str, lhs: ComputedSubspace, rhs: ComputedSubspace) -> list[CheckRow]:
    """Rows per grade with both dimensions; a row passes when the subspaces are equal."""
    lhs._check(rhs)
    return [
        CheckRow.compare(check, n, a.dim, b.dim, ok=a == b) for n, (a, b) in enumerate(zip(lhs.grades, rhs.grades))
    ]


def compare_dims(check: str, lhs: Sequence[int], rhs: Sequence[int]) -> list[CheckRow]:
    """Rows per grade comparing two dimension sequences."""
    return [CheckRow.compare(check, n, a, b) for n, (a, b) in enumerate(zip_longest(lhs, rhs, fillvalue="-"))]


def nested_rows(
    check: str, commuting: bool, lhs: Callable[[], ComputedSubspace], rhs: Callable[[], ComputedSubspace]
) -> list[CheckRow]:
    """
    Rows of the nested-commutant identity.

    Parameters
    ----------
    check : str
        Row name.
    commuting : bool
        Whether e1 and e2 commute; otherwise only the failing precondition row is returned.
    lhs, rhs : callable
        Build Com_V(e1 + e2) and Com_{Com_V(e1)}(e2); called only when the pair commutes.
    """
    rows = [CheckRow.compare(check, None, "commuting", "commuting" if commuting else "not-commuting")]
    if commuting:
        rows.extend(compare_spaces(check, lhs(), rhs()))
    return rows


def orbifold_coset_rows(
    check: str,
    e: StateVector,
    group: AutGroup,
    lhs: Callable[[], ComputedSubspace],
    rhs: Callable[[], ComputedSubspace],
) -> list[CheckRow]:
    """
    Rows of the orbifold-coset identity: one row per generator fixing e, then one per grade.

    lhs and rhs build (Com_V(e))^G and Com_{V^G}(e); they are called only when every generator fixes e.
    """
    rows = [CheckRow.compare(check, None, f"{g.name}(e)", "e", ok=g.apply(e) == e) for g in group.generators]
    if all(row.ok for row in rows):
        rows.extend(compare_spaces(check, lhs(), rhs()))
    return rows


def verify_nested(
    voa: LatticeVOA,
    e1: StateVector,
    e2: StateVector,
    max_weight: int,
    check: str = "nested",
    raise_on_failure: bool = False,
) -> list[CheckRow]:
    """
    Compare Com_V(e1 + e2) with Com_{Com_V(e1)}(e2) grade by grade.

    Returns
    -------
    list[CheckRow]
        One row for the commuting precondition, then one row per grade with both dimensions.

    Raises
    ------
    CheckFailure
        If raise_on_failure is set and some row fails.
    """
    rows = nested_rows(
        check,
        commuting_pair(voa, e1, e2),
        lambda: commutant(voa, e1 + e2, max_weight, label="e1+e2"),
        lambda: commutant(voa, e2, max_weight, within=commutant(voa, e1, max_weight, label="e1"), label="e2"),
    )
    if raise_on_failure:
        raise_first_failure(rows)
    return rows


def verify_orbifold_coset(
    voa: LatticeVOA,
    e: StateVector,
    group: AutGroup,
    max_weight: int,
    check: str = "orbifold-coset",
    raise_on_failure: bool = False,
) -> list[CheckRow]:
    """
    Compare (Com_V(e))^G with Com_{V^G}(e) grade by grade.

    Every generator must fix e; a failing generator yields a FAIL row.

    Raises
    ------
    CheckFailure
        If raise_on_failure is set and some row fails.
    """
    rows = orbifold_coset_rows(
        check,
        e,
        group,
        lambda: orbifold(commutant(voa, e, max_weight), group),
        lambda: commutant(voa, e, max_weight, within=fixed_subspace(group, max_weight)),
    )
    if raise_on_failure:
        raise_first_failure(rows)
    return rows
