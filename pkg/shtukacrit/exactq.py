"""Exact rationals, classes in ℚ/ℤ and the bracket section ℚ/ℤ → [0, 1)."""

import math
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from shtukacrit.errors import EmptyDenominatorSetError

Rational = Fraction


def to_rational(value: object) -> Fraction:
    """
    Convert an int, Fraction or "p/q" string into a Fraction.

    Args:
        value: The value to convert

    Returns:
        The reduced Fraction

    Raises:
        ValueError: If the value is not an exact rational (floats and bools are
            rejected) or has a zero denominator

    Examples:
        >>> to_rational("2/4")
        Fraction(1, 2)
        >>> to_rational(-3)
        Fraction(-3, 1)
    """
    if isinstance(value, bool):
        raise ValueError(f"expected a rational, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        numerator, _, denominator = text.partition("/")
        try:
            num = int(numerator)
            den = int(denominator) if denominator else 1
        except ValueError:
            raise ValueError(f"malformed rational {value!r}") from None
        if den == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return Fraction(num, den)
    raise ValueError(f"expected a rational, got {type(value).__name__}")


def format_rational(x: Fraction | int) -> str:
    """Render ``x`` as "p/q", or "n" when it is an integer."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def bracket_q(x: Fraction | int) -> Fraction:
    """
    Return the representative of ``x`` mod ℤ lying in [0, 1).

    Examples:
        >>> bracket_q(Fraction(-1, 3))
        Fraction(2, 3)
        >>> bracket_q(2)
        Fraction(0, 1)
    """
    x = Fraction(x)
    return x - math.floor(x)


def lcm_denominators(xs: Iterable[Fraction | int]) -> int:
    """
    Smallest n ≥ 1 with n·x integral for every x.

    Raises:
        EmptyDenominatorSetError: If ``xs`` is empty
    """
    denominators = [Fraction(x).denominator for x in xs]
    if not denominators:
        raise EmptyDenominatorSetError()
    return math.lcm(*denominators)


@dataclass(frozen=True, order=True)
class QModZClass:
    """A class in ℚ/ℤ, stored by its representative in [0, 1)."""

    representative: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "representative", bracket_q(self.representative))

    @classmethod
    def of(cls, value: object) -> "QModZClass":
        """Build a class from anything ``to_rational`` accepts, or a class."""
        if isinstance(value, QModZClass):
            return value
        return cls(to_rational(value))

    @classmethod
    def zero(cls) -> "QModZClass":
        return cls(Fraction(0))

    def __add__(self, other: "QModZClass") -> "QModZClass":
        return QModZClass(self.representative + other.representative)

    def __sub__(self, other: "QModZClass") -> "QModZClass":
        return QModZClass(self.representative - other.representative)

    def __neg__(self) -> "QModZClass":
        return QModZClass(-self.representative)

    def scale(self, n: int) -> "QModZClass":
        return QModZClass(n * self.representative)

    def is_zero(self) -> bool:
        return self.representative == 0

    @property
    def order(self) -> int:
        """Torsion order: the reduced denominator of the representative."""
        return self.representative.denominator

    def __str__(self) -> str:
        return format_rational(self.representative)
