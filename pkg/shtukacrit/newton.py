"""Newton points, the Mazur set B(GL_d, λ) and the Shapiro product."""

import functools
import logging
import operator
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from shtukacrit.coweight import Coweight, degree, dominance_leq
from shtukacrit.exactq import format_rational, to_rational

logger = logging.getLogger(__name__)


def validate_newton(slopes: Sequence[Fraction | int]) -> bool:
    """
    True iff ``slopes`` is weakly decreasing, every breakpoint sits at an
    integral partial sum and the total is integral.

    Examples:
        >>> validate_newton((Fraction(1, 2), Fraction(1, 2), 0))
        True
        >>> validate_newton((Fraction(2, 3), Fraction(1, 3), 0))
        False
    """
    slopes = [Fraction(s) for s in slopes]
    partial = Fraction(0)
    for j, slope in enumerate(slopes):
        partial += slope
        if j + 1 < len(slopes):
            if slope < slopes[j + 1]:
                return False
            if slope > slopes[j + 1] and partial.denominator != 1:
                return False
    return partial.denominator == 1


@dataclass(frozen=True)
class NewtonPoint:
    """A weakly decreasing rational tuple with integral breakpoints."""

    slopes: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        slopes = tuple(to_rational(s) for s in self.slopes)
        if not validate_newton(slopes):
            raise ValueError(f"not a Newton point: {[format_rational(s) for s in slopes]}")
        object.__setattr__(self, "slopes", slopes)

    @property
    def d(self) -> int:
        return len(self.slopes)

    def is_basic(self) -> bool:
        return self.slopes[0] == self.slopes[-1]

    def pairing_2rho(self) -> Fraction:
        """⟨ν, 2ρ⟩ = Σ_{i<j} (ν_i − ν_j)."""
        d = len(self.slopes)
        return sum(
            ((d - 1 - 2 * j) * s for j, s in enumerate(self.slopes)), Fraction(0)
        )

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.slopes)

    def __len__(self) -> int:
        return len(self.slopes)

    def __getitem__(self, j: int) -> Fraction:
        return self.slopes[j]

    def sort_key(self) -> tuple[Fraction, ...]:
        return tuple(-s for s in self.slopes)

    def to_list(self) -> list[str]:
        return [format_rational(s) for s in self.slopes]


def newton_point_of(translation: Sequence[int], permutation: Sequence[int]) -> NewtonPoint:
    """
    Newton point of t_v·w: average v over each cycle of w, sorted decreasingly.

    Args:
        translation: v
        permutation: w in zero-indexed one-line notation
    """
    d = len(permutation)
    seen = [False] * d
    slopes: list[Fraction] = []
    for start in range(d):
        if seen[start]:
            continue
        cycle = []
        k = start
        while not seen[k]:
            seen[k] = True
            cycle.append(k)
            k = permutation[k]
        average = Fraction(sum(translation[k] for k in cycle), len(cycle))
        slopes.extend([average] * len(cycle))
    return NewtonPoint(tuple(sorted(slopes, reverse=True)))


def _slope_blocks(
    remaining: int, bound: Fraction | None, low: int, high: int
) -> Iterator[list[tuple[int, int]]]:
    """Yield block lists [(size, total), ...] of strictly decreasing slope."""
    if remaining == 0:
        yield []
        return
    for size in range(1, remaining + 1):
        for total in range(low * size, high * size + 1):
            slope = Fraction(total, size)
            if bound is not None and slope >= bound:
                continue
            for rest in _slope_blocks(remaining - size, slope, low, high):
                yield [(size, total), *rest]


def b_set(lam: Coweight) -> frozenset[NewtonPoint]:
    """
    All Newton points ν with ν ⪯ λ.

    Slopes are enumerated block by block: a block of n equal slopes has an
    integral total between n·λ_d and n·λ_1, and blocks have strictly decreasing
    slopes, which makes the breakpoints integral by construction.

    Examples:
        >>> sorted(nu.to_list() for nu in b_set(Coweight((1, 0))))
        [['1', '0'], ['1/2', '1/2']]
    """
    points = set()
    for blocks in _slope_blocks(lam.d, None, lam[-1], lam[0]):
        slopes: list[Fraction] = []
        for size, total in blocks:
            slopes.extend([Fraction(total, size)] * size)
        if dominance_leq(slopes, lam):
            points.add(NewtonPoint(tuple(slopes)))
    logger.debug(f"b_set({lam.entries}) has {len(points)} members")
    return frozenset(points)


def basic_point(lam: Coweight | Iterable[int]) -> NewtonPoint:
    """The isoclinic point (deg λ / d, …, deg λ / d)."""
    entries = tuple(lam)
    return NewtonPoint((Fraction(degree(entries), len(entries)),) * len(entries))


def shapiro_product(elements: Sequence) -> NewtonPoint:
    """
    Newton point of the cyclic product w_1·w_2⋯w_f of affine Weyl elements.

    Raises:
        ValueError: If ``elements`` is empty
    """
    if not elements:
        raise ValueError("shapiro_product needs a non-empty tuple")
    product = functools.reduce(operator.mul, elements)
    return newton_point_of(product.translation, product.permutation)
