"""Exact arithmetic in the Gaussian rationals Q(i)."""

import re
from fractions import Fraction
from numbers import Rational
from typing import Union

from .exceptions import GaussDivisionByZeroError, ScalarParseError, UnrepresentablePhaseError

RationalLike = Union[int, Fraction]
ScalarLike = Union[int, Fraction, "GaussScalar"]


class GaussScalar:
    """
    An element re + im*i of Q(i) with exact rational parts.

    Both parts are stored as Fractions in lowest terms, so equality is structural.
    A GaussScalar with zero imaginary part compares and hashes equal to the
    corresponding Fraction, which lets sparse vectors mix the two freely.

    Parameters
    ----------
    re : int | Fraction | str
        Real part.
    im : int | Fraction | str
        Imaginary part.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussScalar is immutable")

    @classmethod
    def coerce(cls, value: ScalarLike) -> "GaussScalar":
        """
        Convert an int, Fraction or GaussScalar to a GaussScalar.

        Parameters
        ----------
        value : int | Fraction | GaussScalar
            The value to convert.

        Returns
        -------
        GaussScalar
            The value as a Gaussian rational.
        """
        if isinstance(value, GaussScalar):
            return value
        if isinstance(value, (int, Rational)):
            return cls(Fraction(value), 0)
        raise TypeError(f"Cannot convert {type(value).__name__} to GaussScalar")

    @property
    def is_real(self) -> bool:
        """True if the imaginary part is zero."""
        return self.im == 0

    def conjugate(self) -> "GaussScalar":
        """Return the complex conjugate."""
        return GaussScalar(self.re, -self.im)

    def norm(self) -> Fraction:
        """Return re^2 + im^2, the product with the conjugate."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussScalar":
        """
        Return the multiplicative inverse.

        Raises
        ------
        GaussDivisionByZeroError
            If the scalar is zero.
        """
        n = self.norm()
        if n == 0:
            raise GaussDivisionByZeroError()
        return GaussScalar(self.re / n, -self.im / n)

    def to_rational(self) -> Fraction:
        """
        Return the value as a Fraction.

        Raises
        ------
        ValueError
            If the imaginary part is nonzero.
        """
        if self.im != 0:
            raise ValueError(f"{self} is not rational")
        return self.re

    # Arithmetic

    def __add__(self, other):
        if isinstance(other, GaussScalar):
            return GaussScalar(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Rational)):
            return GaussScalar(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussScalar):
            return GaussScalar(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Rational)):
            return GaussScalar(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Rational)):
            return GaussScalar(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussScalar):
            return GaussScalar(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)
        if isinstance(other, (int, Rational)):
            return GaussScalar(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussScalar):
            return self * other.inverse()
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise GaussDivisionByZeroError()
            return GaussScalar(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.inverse() * other
        return NotImplemented

    def __neg__(self):
        return GaussScalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = GaussScalar(1)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussScalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussScalar({self})"

    def __str__(self) -> str:
        return format_scalar(self)


I = GaussScalar(0, 1)

_QUARTER_PHASES = (GaussScalar(1), GaussScalar(0, 1), GaussScalar(-1), GaussScalar(0, -1))


def phase(r: RationalLike) -> GaussScalar:
    """
    Return exp(2*pi*i*r) as an exact element of Q(i).

    Parameters
    ----------
    r : int | Fraction
        The rational turn count.

    Returns
    -------
    GaussScalar
        One of 1, i, -1, -i.

    Raises
    ------
    UnrepresentablePhaseError
        If the reduced denominator of r does not divide 4.

    Examples
    --------
    >>> phase(Fraction(1, 4))
    GaussScalar(1*i)
    """
    quarters = Fraction(r) * 4
    if quarters.denominator != 1:
        raise UnrepresentablePhaseError(Fraction(r))
    return _QUARTER_PHASES[quarters.numerator % 4]


def _format_rational(value: Fraction) -> str:
    return str(value)


def format_scalar(value: ScalarLike) -> str:
    """
    Format a scalar in the canonical text form "a/b+c/d*i".

    Real scalars print as plain fractions and purely imaginary ones as "c/d*i".

    Parameters
    ----------
    value : int | Fraction | GaussScalar
        The scalar to format.

    Returns
    -------
    str
        The canonical text form.
    """
    g = GaussScalar.coerce(value)
    if g.im == 0:
        return _format_rational(g.re)
    imaginary = f"{_format_rational(abs(g.im))}*i"
    if g.re == 0:
        return imaginary if g.im > 0 else f"-{imaginary}"
    sign = "+" if g.im > 0 else "-"
    return f"{_format_rational(g.re)}{sign}{imaginary}"


_RATIONAL = r"[+-]?\d+(?:/\d+)?"
_SCALAR_PATTERN = re.compile(
    rf"^(?:(?P<re>{_RATIONAL})(?P<im>[+-]\d+(?:/\d+)?\*i|[+-]i)?|(?P<imonly>{_RATIONAL}\*i|[+-]?i))$"
)


def _imaginary_part(text: str) -> Fraction:
    body = text[:-1].rstrip("*")
    if body in ("", "+"):
        return Fraction(1)
    if body == "-":
        return Fraction(-1)
    return Fraction(body)


def parse_scalar(text: str) -> GaussScalar:
    """
    Parse the canonical text form produced by format_scalar.

    Parameters
    ----------
    text : str
        A literal such as "3/2", "-5*i", "i" or "1/2-3/4*i". Whitespace is ignored.

    Returns
    -------
    GaussScalar
        The parsed value.

    Raises
    ------
    ScalarParseError
        If the text is not a Gaussian rational literal.
    """
    compact = "".join(text.split())
    match = _SCALAR_PATTERN.match(compact)
    if match is None:
        raise ScalarParseError(text)
    try:
        if match.group("imonly") is not None:
            return GaussScalar(0, _imaginary_part(match.group("imonly")))
        real = Fraction(match.group("re"))
        imaginary = _imaginary_part(match.group("im")) if match.group("im") else Fraction(0)
    except ZeroDivisionError as error:
        raise ScalarParseError(text) from error
    return GaussScalar(real, imaginary)
