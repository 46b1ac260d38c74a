"""Truncated q-series: theta series, Euler products, characters and twisted traces."""

import logging
from fractions import Fraction
from typing import Any, Mapping, Optional, Sequence

from .autos import Automorphism, AutGroup, trace_on_grade
from .exceptions import InternalConsistencyError, LatticeError
from .lattice import LatticeLike, vectors_in_coset
from .scalar import GaussScalar, format_scalar, phase

logger = logging.getLogger(__name__)


class IntSeries:
    """
    A q-series with exponents in (1/4)Z, truncated above q^max_weight.

    Coefficients are keyed by four times the exponent, so arithmetic stays in
    integers and exact scalars.

    Parameters
    ----------
    coefficients : mapping of int to scalar
        Quarter exponent p (the term c q^(p/4)) mapped to its coefficient.
    max_weight : int
        Truncation weight W; terms with p > 4W are dropped.
    """

    __slots__ = ("max_weight", "_terms")

    def __init__(self, coefficients: Optional[Mapping[int, Any]] = None, max_weight: int = 0):
        self.max_weight = max_weight
        limit = 4 * max_weight
        terms = {}
        for p, c in (coefficients or {}).items():
            if p < 0:
                raise ValueError(f"Negative exponent {Fraction(p, 4)} in a q-series")
            if p <= limit and c:
                terms[p] = c
        self._terms = terms

    @classmethod
    def one(cls, max_weight: int) -> "IntSeries":
        """The constant series 1."""
        return cls({0: Fraction(1)}, max_weight)

    @classmethod
    def monomial(cls, exponent, coefficient, max_weight: int) -> "IntSeries":
        """The single term coefficient * q^exponent."""
        return cls({_quarters(exponent): coefficient}, max_weight)

    @classmethod
    def from_integer_coefficients(cls, values: Sequence, max_weight: int) -> "IntSeries":
        """Build sum values[n] q^n."""
        return cls({4 * n: Fraction(v) if isinstance(v, int) else v for n, v in enumerate(values)}, max_weight)

    def coefficient(self, exponent) -> Any:
        """Coefficient of q^exponent (0 if absent)."""
        return self._terms.get(_quarters(exponent), Fraction(0))

    def items(self) -> list[tuple[Fraction, Any]]:
        """(exponent, coefficient) pairs in ascending exponent order."""
        return [(Fraction(p, 4), self._terms[p]) for p in sorted(self._terms)]

    def integer_coefficients(self) -> list:
        """Coefficients of q^0, q^1, ..., q^max_weight."""
        return [self._terms.get(4 * n, Fraction(0)) for n in range(self.max_weight + 1)]

    def _truncation(self, other: "IntSeries") -> int:
        return min(self.max_weight, other.max_weight)

    def __add__(self, other):
        if not isinstance(other, IntSeries):
            return NotImplemented
        terms = dict(self._terms)
        for p, c in other._terms.items():
            terms[p] = terms.get(p, 0) + c
        return IntSeries(terms, self._truncation(other))

    def __neg__(self):
        return IntSeries({p: -c for p, c in self._terms.items()}, self.max_weight)

    def __sub__(self, other):
        if not isinstance(other, IntSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, IntSeries):
            w = self._truncation(other)
            limit = 4 * w
            terms: dict[int, Any] = {}
            for p, a in self._terms.items():
                for r, b in other._terms.items():
                    if p + r <= limit:
                        terms[p + r] = terms.get(p + r, 0) + a * b
            return IntSeries(terms, w)
        if isinstance(other, (int, Fraction, GaussScalar)):
            return IntSeries({p: c * other for p, c in self._terms.items()}, self.max_weight)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, (int, Fraction, GaussScalar)):
            divisor = Fraction(scalar) if isinstance(scalar, int) else scalar
            return IntSeries({p: c / divisor for p, c in self._terms.items()}, self.max_weight)
        return NotImplemented

    def inverse(self) -> "IntSeries":
        """
        Multiplicative inverse up to the truncation.

        Raises
        ------
        ZeroDivisionError
            If the constant term vanishes.
        """
        a0 = self._terms.get(0)
        if not a0:
            raise ZeroDivisionError("q-series without constant term has no inverse")
        limit = 4 * self.max_weight
        inverse_a0 = Fraction(1) / a0
        result: dict[int, Any] = {0: inverse_a0}
        for k in range(1, limit + 1):
            total = 0
            for p, a in self._terms.items():
                if 0 < p <= k and (k - p) in result:
                    total = total + a * result[k - p]
            if total:
                result[k] = -inverse_a0 * total
        return IntSeries(result, self.max_weight)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntSeries):
            return NotImplemented
        return self.max_weight == other.max_weight and self._terms == other._terms

    __hash__ = None

    def format(self) -> str:
        """One line per term, 'q^(p/4): c', ascending."""
        return "\n".join(f"q^({p}/4): {format_scalar(self._terms[p])}" for p in sorted(self._terms))

    def __repr__(self) -> str:
        body = ", ".join(f"q^{e}: {format_scalar(c)}" for e, c in self.items())
        return f"IntSeries({body}; W={self.max_weight})"


def _quarters(exponent) -> int:
    value = Fraction(exponent) * 4
    if value.denominator != 1:
        raise ValueError(f"Exponent {exponent} is not in (1/4)Z")
    return value.numerator


def theta(space: LatticeLike, shift: Optional[Sequence], max_weight: int, weight=None) -> IntSeries:
    """
    Theta series sum over lambda in shift + S of q^(<lambda, lambda>/2).

    Parameters
    ----------
    space : Lattice | Sublattice
        The lattice S.
    shift : sequence of rationals | None
        Shift in parent coordinates.
    max_weight : int
        Truncation weight.
    weight : callable, optional
        Coefficient of each point (parent coordinates); default 1.

    Raises
    ------
    LatticeError
        If some norm is not in (1/2)Z, so the exponent leaves the quarter grid.
    """
    terms: dict[int, Any] = {}
    for v in vectors_in_coset(space, shift, 2 * max_weight):
        quarter = v.norm() * 2
        if quarter.denominator != 1:
            raise LatticeError(f"Norm of {v} leaves the (1/4)Z exponent grid")
        c = weight(v.coords) if weight is not None else Fraction(1)
        p = quarter.numerator
        terms[p] = terms.get(p, 0) + c
    return IntSeries(terms, max_weight)


def euler_power(rank: int, max_weight: int) -> IntSeries:
    """prod_{n >= 1} (1 - q^n)^(-rank), the graded dimension of rank Heisenberg modes."""
    product = IntSeries.one(max_weight)
    for n in range(1, max_weight + 1):
        factor = IntSeries({0: Fraction(1), 4 * n: Fraction(-1)}, max_weight)
        for _ in range(rank):
            product = product * factor
    return product.inverse()


def plus_power(rank: int, max_weight: int) -> IntSeries:
    """prod_{n >= 1} (1 + q^n)^(-rank), the trace of -1 on rank Heisenberg modes."""
    product = IntSeries.one(max_weight)
    for n in range(1, max_weight + 1):
        factor = IntSeries({0: Fraction(1), 4 * n: Fraction(1)}, max_weight)
        for _ in range(rank):
            product = product * factor
    return product.inverse()


def voa_character(space: LatticeLike, shift: Optional[Sequence], max_weight: int) -> IntSeries:
    """
    Character of V_{shift+S}: theta series over the Euler product of the rank.

    Examples
    --------
    >>> from voalab.lattice import Lattice
    >>> a1 = Lattice("A1", ((2,),))
    >>> voa_character(a1, None, 2).integer_coefficients()
    [Fraction(1, 1), Fraction(3, 1), Fraction(4, 1)]
    """
    return theta(space, shift, max_weight) * euler_power(space.rank, max_weight)


def _is_diagonal(matrix: Sequence[Sequence]) -> bool:
    return all(matrix[i][j] == 0 for i in range(len(matrix)) for j in range(len(matrix)) if i != j)


def _closed_form(a: Automorphism, max_weight: int) -> Optional[IntSeries]:
    form = a.normal_form()
    if form is None:
        return None
    h, s = form
    lattice = a.voa.lattice
    d = lattice.rank
    functional = lattice.gram_times(h)
    if all(s[i][j] == (1 if i == j else 0) for i in range(d) for j in range(d)):
        def weight(coords):
            return phase(sum((f * c for f, c in zip(functional, coords)), Fraction(0)))

        return theta(lattice, None, max_weight, weight) * euler_power(d, max_weight)
    if not (_is_diagonal(lattice.gram) and _is_diagonal(s) and all(s[i][i] in (1, -1) for i in range(d))):
        return None
    series = IntSeries.one(max_weight)
    for i in range(d):
        if s[i][i] == -1:
            series = series * plus_power(1, max_weight)
            continue
        norm = lattice.gram[i][i]
        terms: dict[int, Any] = {}
        m = 0
        while m * m * norm <= 4 * max_weight:
            for k in {m, -m}:
                p = 2 * k * k * norm
                terms[p] = terms.get(p, 0) + phase(k * functional[i])
            m += 1
        series = series * IntSeries(terms, max_weight) * euler_power(1, max_weight)
    return series


def traces(a: Automorphism, max_weight: int) -> IntSeries:
    """Series of matrix traces on grades 0..max_weight."""
    return IntSeries.from_integer_coefficients([trace_on_grade(a, n) for n in range(max_weight + 1)], max_weight)


def twisted_character(a: Automorphism, max_weight: int, verify: bool = False) -> IntSeries:
    """
    Sum over n of trace(a | V_n) q^n.

    Automorphisms of the form inner(h) * lifted(S) with S the identity, or with a
    diagonal Gram matrix and S = diag(+-1), use a closed form; any other shape falls
    back to matrix traces.

    Parameters
    ----------
    a : Automorphism
        The automorphism.
    max_weight : int
        Truncation weight.
    verify : bool
        Check the closed form against matrix traces on every grade.

    Raises
    ------
    InternalConsistencyError
        If verify is set and a coefficient differs from the matrix trace.
    """
    series = _closed_form(a, max_weight)
    if series is None:
        logger.info("twisted character of %s: no closed form, using matrix traces", a.name)
        return traces(a, max_weight)
    if verify:
        for n, value in enumerate(series.integer_coefficients()):
            trace = trace_on_grade(a, n)
            if value != trace:
                raise InternalConsistencyError(
                    "twisted character", f"{a.name} on grade {n}: closed form {value}, trace {trace}"
                )
    return series


def burnside_orbifold_dims(group: AutGroup, max_weight: int, verify: bool = False) -> IntSeries:
    """
    Average of the twisted characters of all group elements.

    Raises
    ------
    InternalConsistencyError
        If a coefficient is not a non-negative integer.
    """
    total = IntSeries({}, max_weight)
    for element in group:
        total = total + twisted_character(element, max_weight, verify)
    average = total / group.order
    for exponent, c in average.items():
        value = GaussScalar.coerce(c)
        if not value.is_real or value.re.denominator != 1 or value.re < 0:
            raise InternalConsistencyError(
                "burnside", f"coefficient {format_scalar(c)} of q^{exponent} for {group.name} is not a dimension"
            )
    return average

