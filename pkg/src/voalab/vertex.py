"""Vertex operators of lattice VOAs: n-th products, Virasoro and Sugawara vectors, conformal certificates."""

import logging
import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Any, Mapping, Optional, Sequence

from .config import EngineConfig, get_default_config
from .exceptions import (
    CutoffExceededError,
    InternalConsistencyError,
    LatticeMismatchError,
    NotAnAffineTripleError,
    NotConformalError,
)
from .fock import GradedBasis, Monomial, StateVector, add_into, build_basis
from .lattice import Lattice, Sublattice
from .scalar import GaussScalar

logger = logging.getLogger(__name__)

MonomialDict = dict[Monomial, Any]


def generalized_binomial(m: int, j: int) -> Fraction:
    """Return C(m, j) = m(m-1)...(m-j+1)/j! for any integer m and j >= 0."""
    numerator = 1
    for t in range(j):
        numerator *= m - t
    return Fraction(numerator, factorial(j))


class LatticeVOA:
    """
    The lattice VOA V_L truncated at a weight cutoff.

    All n-th products are computed exactly from two primitives: the Heisenberg
    action and the closed-form action of exponential vertex operators (trivial
    cocycle). Composite states reduce to these by the iterate formula. Products
    are memoized per monomial triple; the cache is safe for concurrent insertion.

    Parameters
    ----------
    lattice : Lattice
        A pairwise-even positive-definite lattice.
    cutoff : int
        Largest weight any computation may reach.
    config : EngineConfig, optional
        Engine configuration (defaults to the package default).
    """

    def __init__(self, lattice: Lattice, cutoff: int, config: Optional[EngineConfig] = None):
        self.lattice = lattice
        self.cutoff = cutoff
        self.config = config or get_default_config()
        self.basis: GradedBasis = build_basis(lattice, cutoff)
        self._gram = lattice.gram
        self._zero = (0,) * lattice.rank
        self._cache: dict[tuple[Monomial, int, Monomial], MonomialDict] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"LatticeVOA({self.lattice.name}, cutoff={self.cutoff})"

    @property
    def name(self) -> str:
        """Display name V_<lattice>."""
        return f"V_{self.lattice.name}"

    @property
    def vacuum(self) -> StateVector:
        """The vacuum vector."""
        return StateVector.vacuum(self.lattice)

    @property
    def cache_size(self) -> int:
        """Number of memoized monomial products."""
        return len(self._cache)

    def weight(self, monomial: Monomial) -> int:
        """Weight of a monomial (an integer because the lattice is even)."""
        w = monomial.weight(self.lattice)
        return w.numerator if w.denominator == 1 else w

    def state_weight(self, state: StateVector) -> Optional[int]:
        """Weight of a homogeneous state (None for zero or inhomogeneous states)."""
        w = state.weight
        if w is None:
            return None
        return w.numerator if w.denominator == 1 else w

    def _require(self, state: StateVector) -> None:
        if state.lattice != self.lattice:
            raise LatticeMismatchError(self.lattice.name, state.lattice.name)

    # Heisenberg modes

    def _pairing(self, direction: int, point: Sequence[int]) -> int:
        row = self._gram[direction]
        return sum(row[j] * point[j] for j in range(len(point)) if point[j])

    def _basis_heis(self, direction: int, m: int, monomial: Monomial) -> MonomialDict:
        """Apply b_direction(m) to a monomial."""
        if m < 0:
            return {monomial.with_mode(direction, -m): Fraction(1)}
        if m == 0:
            value = self._pairing(direction, monomial.point)
            return {monomial: Fraction(value)} if value else {}
        counts: dict[tuple[int, int], int] = {}
        for mode in monomial.modes:
            counts[mode] = counts.get(mode, 0) + 1
        result: MonomialDict = {}
        for (j, n), count in counts.items():
            if n == m and self._gram[direction][j]:
                modes = list(monomial.modes)
                modes.remove((j, n))
                result[Monomial(tuple(modes), monomial.point)] = Fraction(count * m * self._gram[direction][j])
        return result

    def _heis_dict(self, direction: int, m: int, vector: Mapping[Monomial, Any]) -> MonomialDict:
        result: MonomialDict = {}
        for monomial, coefficient in vector.items():
            add_into(result, self._basis_heis(direction, m, monomial), coefficient)
        return result

    def _vector_heis_dict(self, beta: Sequence, m: int, vector: Mapping[Monomial, Any]) -> MonomialDict:
        result: MonomialDict = {}
        for direction, c in enumerate(beta):
            if c:
                add_into(result, self._heis_dict(direction, m, vector), c)
        return result

    def heis_apply(self, beta: Sequence, m: int, v: StateVector) -> StateVector:
        """
        Apply the Heisenberg mode beta(m) to a state.

        Parameters
        ----------
        beta : sequence of rationals
            Direction in lattice coordinates.
        m : int
            Mode number; negative modes create, positive modes contract, 0 reads the point.
        v : StateVector
            The state.

        Returns
        -------
        StateVector
            beta(m) v.

        Raises
        ------
        CutoffExceededError
            If a creation mode leaves the cutoff.
        """
        self._require(v)
        if m < 0:
            for monomial in v:
                if self.weight(monomial) - m > self.cutoff:
                    raise CutoffExceededError(self.weight(monomial) - m, self.cutoff)
        return StateVector(self.lattice, self._vector_heis_dict(beta, m, dict(v.items())))

    # Exponential vertex operators

    def _exp_mono(self, alpha: Sequence[int], n: int, monomial: Monomial) -> MonomialDict:
        """Coefficient of z^(-n-1) in E^-(-alpha,z) E^+(-alpha,z) e_alpha z^alpha(0) applied to a monomial."""
        pairing = sum(self._pairing(i, alpha) * monomial.point[i] for i in range(len(alpha)))
        shifted = Monomial(monomial.modes, tuple(a + b for a, b in zip(monomial.point, alpha)))
        # E^+ = exp(T), T = sum_k (-1/k) alpha(k) z^(-k); layers[j] holds the z^(-j) part
        layers: dict[int, MonomialDict] = {0: {shifted: Fraction(1)}}
        current = {0: {shifted: Fraction(1)}}
        r = 1
        while current:
            following: dict[int, MonomialDict] = {}
            for j, vector in current.items():
                top = max(m.max_mode for m in vector)
                for k in range(1, top + 1):
                    lowered = self._vector_heis_dict(alpha, k, vector)
                    if lowered:
                        add_into(following.setdefault(j + k, {}), lowered, Fraction(-1, k * r))
            following = {j: v for j, v in following.items() if v}
            for j, vector in following.items():
                add_into(layers.setdefault(j, {}), vector)
            current = following
            r += 1
        result: MonomialDict = {}
        for j, vector in layers.items():
            p = -n - 1 - pairing + j
            if p < 0 or not vector:
                continue
            # Schur recursion for the E^- coefficient of z^p
            w = [vector]
            for q in range(1, p + 1):
                term: MonomialDict = {}
                for k in range(1, q + 1):
                    add_into(term, self._vector_heis_dict(alpha, -k, w[q - k]))
                w.append({m: c / q for m, c in term.items()})
            add_into(result, w[p])
        return result

    def exp_apply(self, alpha: Sequence[int], n: int, v: StateVector) -> StateVector:
        """
        Apply the mode e^alpha_(n) to a state.

        Parameters
        ----------
        alpha : sequence of int
            A lattice point.
        n : int
            Mode index.
        v : StateVector
            The state.

        Returns
        -------
        StateVector
            e^alpha_(n) v.

        Raises
        ------
        CutoffExceededError
            If the result weight exceeds the cutoff.
        """
        return self.mode(StateVector.exponential(self.lattice, tuple(alpha)), n, v)

    # General n-th products

    def _mode_mono(self, u: Monomial, n: int, v: Monomial) -> MonomialDict:
        key = (u, n, v)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        wu = self.weight(u)
        wv = self.weight(v)
        target = wu + wv - n - 1
        if target < 0:
            return {}
        if target > self.cutoff:
            raise CutoffExceededError(target, self.cutoff)
        if not u.modes:
            if u.point == self._zero:
                result: MonomialDict = {v: Fraction(1)} if n == -1 else {}
            else:
                result = self._exp_mono(u.point, n, v)
        else:
            result = self._iterate(u, n, v, wu, wv)
        for monomial in result:
            if self.weight(monomial) != target:
                raise InternalConsistencyError(
                    "weight homogeneity", f"{monomial.format(self.lattice)} has weight {self.weight(monomial)}, "
                    f"expected {target}"
                )
        with self._lock:
            self._cache[key] = result
        return result

    def _iterate(self, u: Monomial, n: int, v: Monomial, wu: int, wv: int) -> MonomialDict:
        """(b(-k) u')_(n) v = sum_j C(k+j-1, j) [b(-k-j) u'_(n+j) v - (-1)^k u'_(n-k-j) b(j) v]."""
        direction, k = u.modes[0]
        rest = Monomial(u.modes[1:], u.point)
        w_rest = wu - k
        result: MonomialDict = {}
        j = 0
        while w_rest + wv - n - j - 1 >= 0:
            inner = self._mode_mono(rest, n + j, v)
            if inner:
                add_into(result, self._heis_dict(direction, -k - j, inner), comb(k + j - 1, j))
            j += 1
        sign = -1 if k % 2 == 0 else 1
        for j in range(v.max_mode + 1):
            lowered = self._basis_heis(direction, j, v)
            if not lowered:
                continue
            factor = sign * comb(k + j - 1, j)
            for monomial, c in lowered.items():
                add_into(result, self._mode_mono(rest, n - k - j, monomial), factor * c)
        return result

    def mode(self, u: StateVector, n: int, v: StateVector) -> StateVector:
        """
        Return the n-th product u_(n) v.

        Parameters
        ----------
        u, v : StateVector
            States of this VOA.
        n : int
            Mode index.

        Returns
        -------
        StateVector
            The product; every term has weight wt(u) + wt(v) - n - 1.

        Raises
        ------
        CutoffExceededError
            If the result weight exceeds the cutoff.
        """
        self._require(u)
        self._require(v)
        result: MonomialDict = {}
        for mu, cu in u.items():
            for mv, cv in v.items():
                part = self._mode_mono(mu, n, mv)
                if part:
                    add_into(result, part, cu * cv)
        return StateVector(self.lattice, result)

    def translate(self, v: StateVector) -> StateVector:
        """Apply the translation operator D = L_(-1): v -> v_(-2) 1."""
        return self.mode(v, -2, self.vacuum)


def lattice_virasoro(voa: LatticeVOA, sublattice: Optional[Sublattice] = None) -> StateVector:
    """
    Return the Virasoro vector of V_L, or of V_S for a sublattice S.

    The vector is 1/2 sum_{a,c} Q_ac b_a(-1) b_c(-1) e^0 with Q = B G_S^{-1} B^T,
    where B holds the basis of S (the identity for L itself). This equals the
    orthonormal-basis expression without irrational coordinates.

    Parameters
    ----------
    voa : LatticeVOA
        The ambient VOA.
    sublattice : Sublattice, optional
        Sublattice of voa.lattice; defaults to the whole lattice.

    Returns
    -------
    StateVector
        The weight-2 Virasoro vector.
    """
    lattice = voa.lattice
    d = lattice.rank
    if sublattice is None:
        quadratic = lattice.gram_inverse
    else:
        if sublattice.parent != lattice:
            raise LatticeMismatchError(lattice.name, sublattice.parent.name)
        inverse = sublattice.as_lattice().gram_inverse
        basis = sublattice.basis
        r = len(basis)
        quadratic = tuple(
            tuple(sum((basis[s][a] * inverse[s][t] * basis[t][c] for s in range(r) for t in range(r)), Fraction(0))
                  for c in range(d))
            for a in range(d)
        )
    zero = (0,) * d
    terms: MonomialDict = {}
    for a in range(d):
        for c in range(a, d):
            q = quadratic[a][c]
            if q:
                terms[Monomial(((a, 1), (c, 1)), zero)] = q / 2 if a == c else q
    return StateVector(lattice, terms)


def _affine_relations(voa: LatticeVOA, e: StateVector, h: StateVector, f: StateVector, k: int):
    one = voa.vacuum
    zero = StateVector.zero(voa.lattice)
    return [
        ("H_(0)E", voa.mode(h, 0, e), 2 * e),
        ("H_(0)F", voa.mode(h, 0, f), -2 * f),
        ("E_(0)F", voa.mode(e, 0, f), h),
        ("H_(1)H", voa.mode(h, 1, h), (2 * k) * one),
        ("E_(1)F", voa.mode(e, 1, f), k * one),
        ("H_(0)H", voa.mode(h, 0, h), zero),
        ("E_(0)E", voa.mode(e, 0, e), zero),
        ("F_(0)F", voa.mode(f, 0, f), zero),
        ("H_(1)E", voa.mode(h, 1, e), zero),
        ("H_(1)F", voa.mode(h, 1, f), zero),
        ("E_(1)E", voa.mode(e, 1, e), zero),
        ("F_(1)F", voa.mode(f, 1, f), zero),
    ]


def check_affine_triple(voa: LatticeVOA, e: StateVector, h: StateVector, f: StateVector, k: int) -> list[str]:
    """
    Verify the sl2 level-k relations of a weight-one triple.

    Returns
    -------
    list[str]
        The names of the relations checked.

    Raises
    ------
    NotAnAffineTripleError
        Naming the first relation that fails.
    """
    for name, vector in (("E", e), ("H", h), ("F", f)):
        if voa.state_weight(vector) != 1:
            raise NotAnAffineTripleError(f"wt({name})", "1", str(voa.state_weight(vector)))
    checked = []
    for relation, actual, expected in _affine_relations(voa, e, h, f, k):
        if actual != expected:
            raise NotAnAffineTripleError(relation, str(expected), str(actual))
        checked.append(relation)
    return checked


def sugawara_sl2(voa: LatticeVOA, e: StateVector, h: StateVector, f: StateVector, k: int) -> StateVector:
    """
    Return the Sugawara vector of an affine sl2 triple of level k.

    omega = 1/(2(k+2)) (1/2 H_(-1)H + E_(-1)F + F_(-1)E), after verifying
    H_(0)E = 2E, H_(0)F = -2F, E_(0)F = H, H_(1)H = 2k, E_(1)F = k and the
    vanishing of the other weight-one pairings.

    Raises
    ------
    NotAnAffineTripleError
        If a relation fails.
    """
    check_affine_triple(voa, e, h, f, k)
    quadratic = Fraction(1, 2) * voa.mode(h, -1, h) + voa.mode(e, -1, f) + voa.mode(f, -1, e)
    return Fraction(1, 2 * (k + 2)) * quadratic


@dataclass(frozen=True)
class ConformalCertificate:
    """
    Evidence that a weight-2 vector is conformal.

    Attributes
    ----------
    vector : StateVector
        The conformal vector e.
    central_charge : Fraction
        c, read from e_(3) e = (c/2) 1.
    cutoff : int
        Cutoff of the VOA used.
    certified_grades : tuple[int, ...]
        Grades on which the Virasoro commutators were checked as operator identities.
    commutator_checks : int
        Number of (m, n, basis vector) commutator identities verified.
    """

    vector: StateVector
    central_charge: Fraction
    cutoff: int
    certified_grades: tuple[int, ...]
    commutator_checks: int


def is_conformal(voa: LatticeVOA, e: StateVector, config: Optional[EngineConfig] = None) -> ConformalCertificate:
    """
    Certify a conformal vector.

    Checks e_(1)e = 2e, e_(2)e = 0 and e_(3)e = (c/2) 1, then the Virasoro relations
    [L_m, L_n] = (m-n) L_{m+n} + (m^3-m)/12 c delta_{m+n,0} for |m|, |n| <= 2 on every
    basis vector of the certified grades. Pairs whose intermediate weights leave the
    cutoff are skipped.

    Raises
    ------
    NotConformalError
        Naming the first failing identity (and grade).
    """
    config = config or voa.config
    if voa.state_weight(e) != 2:
        raise NotConformalError("e homogeneous of weight 2")
    if voa.mode(e, 1, e) != 2 * e:
        raise NotConformalError("e_(1)e = 2e", 2)
    if not voa.mode(e, 2, e).is_zero():
        raise NotConformalError("e_(2)e = 0", 1)
    third = voa.mode(e, 3, e)
    c = 2 * (third.coefficient(Monomial((), (0,) * voa.lattice.rank)) or Fraction(0))
    if third != (c / 2) * voa.vacuum:
        raise NotConformalError("e_(3)e is a multiple of the vacuum", 0)
    if isinstance(c, GaussScalar):
        if not c.is_real:
            raise NotConformalError("e_(3)e = (c/2)1 with c real", 0)
        c = c.re
    top = min(config.certify_depth, voa.cutoff - 2)
    grades = tuple(range(top + 1)) if top >= 0 else ()
    checks = 0
    for g in grades:
        for monomial in voa.basis.basis(g):
            v = StateVector(voa.lattice, {monomial: Fraction(1)})
            for m in range(-2, 3):
                for n in range(m + 1, 3):
                    if max(g - m, g - n, g - m - n) > voa.cutoff:
                        continue
                    lhs = voa.mode(e, m + 1, voa.mode(e, n + 1, v)) - voa.mode(e, n + 1, voa.mode(e, m + 1, v))
                    rhs = (m - n) * voa.mode(e, m + n + 1, v)
                    if m + n == 0:
                        rhs = rhs + (Fraction(m**3 - m, 12) * c) * v
                    if lhs != rhs:
                        raise NotConformalError(f"[L_{m}, L_{n}] = {m - n} L_{m + n} + central term", g)
                    checks += 1
    logger.info("conformal vector on %s: c=%s, commutators checked on grades %s", voa.name, c, list(grades))
    return ConformalCertificate(e, Fraction(c), voa.cutoff, grades, checks)


def commuting_pair(voa: LatticeVOA, e1: StateVector, e2: StateVector) -> bool:
    """
    True iff e1_(n) e2 = 0 for all n >= 0.

    Only 0 <= n <= wt(e1) + wt(e2) - 1 can contribute; higher products vanish by grading.
    """
    w1 = max(voa.weight(m) for m in e1) if not e1.is_zero() else 0
    w2 = max(voa.weight(m) for m in e2) if not e2.is_zero() else 0
    return all(voa.mode(e1, n, e2).is_zero() for n in range(0, w1 + w2))


@dataclass(frozen=True)
class AxiomReport:
    """
    Outcome of the vertex-algebra spot checks.

    Attributes
    ----------
    creation : int
        Basis monomials checked for u_(-1) 1 = u.
    skew_symmetry : int
        Sampled products checked against skew-symmetry.
    commutator : int
        Sampled operator identities checked against the commutator formula.
    failures : tuple[str, ...]
        Descriptions of failed identities.
    """

    creation: int
    skew_symmetry: int
    commutator: int
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        """True if nothing failed."""
        return not self.failures


def check_axioms(voa: LatticeVOA, config: Optional[EngineConfig] = None) -> AxiomReport:
    """
    Run the creation, skew-symmetry and commutator spot checks.

    Sampling uses a seeded generator, so the checks are deterministic.

    Parameters
    ----------
    voa : LatticeVOA
        The VOA to check.
    config : EngineConfig, optional
        Supplies the sample count, seed and operator-check depth.

    Returns
    -------
    AxiomReport
        Counts and failures.
    """
    config = config or voa.config
    rng = random.Random(config.sample_seed)
    failures: list[str] = []
    lattice = voa.lattice

    creation = 0
    for n in range(voa.cutoff + 1):
        for monomial in voa.basis.basis(n):
            u = StateVector(lattice, {monomial: Fraction(1)})
            if voa.mode(u, -1, voa.vacuum) != u:
                failures.append(f"creation: {monomial.format(lattice)}")
            creation += 1

    pool = [m for n in range(min(2, voa.cutoff) + 1) for m in voa.basis.basis(n)]
    skew = 0
    for _ in range(config.homomorphism_samples):
        a, b = rng.choice(pool), rng.choice(pool)
        wa, wb = voa.weight(a), voa.weight(b)
        choices = [n for n in range(-1, wa + wb) if wa + wb - n - 1 <= voa.cutoff]
        if not choices:
            continue
        n = rng.choice(choices)
        u = StateVector(lattice, {a: Fraction(1)})
        v = StateVector(lattice, {b: Fraction(1)})
        lhs = voa.mode(u, n, v)
        rhs = StateVector.zero(lattice)
        for j in range(0, wa + wb - n):
            term = voa.mode(v, n + j, u)
            for _ in range(j):
                term = voa.translate(term)
            rhs = rhs + (Fraction((-1) ** j, factorial(j)) * term)
        rhs = (-1) ** (n + 1) * rhs
        if lhs != rhs:
            failures.append(f"skew-symmetry: {a.format(lattice)}_({n}){b.format(lattice)}")
        skew += 1

    commutator = 0
    depth = min(config.certify_depth, voa.cutoff - 2)
    targets = [m for g in range(depth + 1) for m in voa.basis.basis(g)] if depth >= 0 else []
    for _ in range(config.homomorphism_samples):
        a, b = rng.choice(pool), rng.choice(pool)
        m, n = rng.randint(-2, 2), rng.randint(-2, 2)
        wa, wb = voa.weight(a), voa.weight(b)
        u = StateVector(lattice, {a: Fraction(1)})
        v = StateVector(lattice, {b: Fraction(1)})
        products = [(j, voa.mode(u, j, v)) for j in range(0, wa + wb)]
        for target in targets:
            g = voa.weight(target)
            if max(wb + g - n - 1, wa + g - m - 1, wa + wb + g - m - n - 2) > voa.cutoff:
                continue
            w = StateVector(lattice, {target: Fraction(1)})
            lhs = voa.mode(u, m, voa.mode(v, n, w)) - voa.mode(v, n, voa.mode(u, m, w))
            rhs = StateVector.zero(lattice)
            for j, product in products:
                if not product.is_zero():
                    rhs = rhs + generalized_binomial(m, j) * voa.mode(product, m + n - j, w)
            if lhs != rhs:
                failures.append(
                    f"commutator: [{a.format(lattice)}_({m}), {b.format(lattice)}_({n})] on {target.format(lattice)}"
                )
            commutator += 1
    return AxiomReport(creation, skew, commutator, tuple(failures))
