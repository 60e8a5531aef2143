"""Simple (D,φ)-spaces given by a pair (L, Π): invariants, slopes and degrees."""

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from shtukacrit.brauer import (
    AlgebraSpec,
    ExtensionShape,
    Place,
    invariant_after_base_change,
    ramification_locus,
    torsion_order,
)
from shtukacrit.errors import NotPrincipalError, NotRealizableError
from shtukacrit.exactq import QModZClass, bracket_q, format_rational, lcm_denominators
from shtukacrit.fields import RationalMapField
from shtukacrit.newton import NewtonPoint

logger = logging.getLogger(__name__)


def _place_id(x: Place | str) -> str:
    return x.id if isinstance(x, Place) else x


class IsoSpaceSpec:
    """
    The data (D, L, Π) presenting a simple (D,φ)-space.

    Attributes:
        algebra (AlgebraSpec): D
        extension (ExtensionShape): The place fibration of L/F
        pi_degrees (dict[str, Fraction]): deg_y(Π) by L-place id; zero elsewhere
    """

    pi_degrees = RationalMapField()

    def __init__(
        self,
        algebra: AlgebraSpec,
        extension: ExtensionShape,
        pi_degrees: Mapping[str, Any],
    ):
        self.__dict__["algebra"] = algebra
        self.__dict__["extension"] = extension
        self.pi_degrees = pi_degrees
        known = {y.id for y in extension.all_places()}
        missing = sorted(set(self.pi_degrees) - known)
        if missing:
            raise ValueError(f"Π has degrees at undeclared L-places: {', '.join(missing)}")
        uncovered = sorted(
            x.id for x in ramification_locus(algebra) if not extension.places_over(x)
        )
        if uncovered:
            raise ValueError(
                f"no L-places listed above ramified places: {', '.join(uncovered)}"
            )

    def pi_degree(self, y_id: str) -> Fraction:
        return self.pi_degrees.get(y_id, Fraction(0))

    def to_dict(self) -> dict[str, Any]:
        return {
            "algebra": self.algebra.to_dict(),
            "L": self.extension.to_dict(),
            "pi": {k: format_rational(v) for k, v in sorted(self.pi_degrees.items())},
        }


@dataclass(frozen=True)
class SimpleSpaceReport:
    """Invariants of the simple (D,φ)-space attached to an IsoSpaceSpec."""

    d_pi: int
    delta_invariants: dict[str, QModZClass]
    d_delta: int
    dim_over_Fbar: int
    m: int
    multiplicity: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "d_pi": self.d_pi,
            "delta_invariants": {k: str(v) for k, v in sorted(self.delta_invariants.items())},
            "d_delta": self.d_delta,
            "dim_over_Fbar": self.dim_over_Fbar,
            "m": self.m,
            "multiplicity": self.multiplicity,
        }


def classify_simple(spec: IsoSpaceSpec) -> SimpleSpaceReport:
    """
    Compute d(Π), the invariants of the endomorphism algebra Δ, its index
    d(Δ), the dimension over F̆, m and the multiplicity.

    Returns:
        The SimpleSpaceReport

    Raises:
        NotPrincipalError: If the degrees of Π do not sum to zero
        NotRealizableError: If d·d(Δ) is not divisible by d(Π)

    Examples:
        >>> algebra = AlgebraSpec(2, {"x1": "1/2", "x2": "1/2"})
        >>> shape = ExtensionShape.trivial(["x1", "x2"], {})
        >>> classify_simple(IsoSpaceSpec(algebra, shape, {"x1": "1/2", "x2": "-1/2"})).m
        1
    """
    total = sum(spec.pi_degrees.values(), Fraction(0))
    if total != 0:
        raise NotPrincipalError(format_rational(total))

    d = spec.algebra.d
    places = spec.extension.all_places()
    d_pi = lcm_denominators([spec.pi_degree(y.id) for y in places] or [0])
    delta = {
        y.id: invariant_after_base_change(spec.algebra, y.over, y.local_degree)
        - QModZClass(spec.pi_degree(y.id))
        for y in places
    }
    d_delta = math.lcm(*(torsion_order(inv) for inv in delta.values())) if delta else 1
    if (d * d_delta) % d_pi:
        raise NotRealizableError(d, d_delta, d_pi)

    dim = d * spec.extension.total_degree * d_delta
    report = SimpleSpaceReport(
        d_pi=d_pi,
        delta_invariants=delta,
        d_delta=d_delta,
        dim_over_Fbar=dim,
        m=dim // d,
        multiplicity=d * d_delta // d_pi,
    )
    logger.debug(f"Classified simple space: {report.to_dict()}")
    return report


def localize(spec: IsoSpaceSpec, x: Place | str) -> list[tuple[Fraction, int]]:
    """
    Slope and dimension of V_y for each place y of L over x.

    A place with no L-place listed above it carries neither ramification nor
    Π; it is reported as a single slope-zero piece of full dimension.
    """
    report = classify_simple(spec)
    above = spec.extension.places_over(x)
    if not above:
        return [(Fraction(0), report.dim_over_Fbar)]
    d = spec.algebra.d
    return [
        (
            spec.pi_degree(y.id) / y.local_degree,
            d * y.local_degree * report.d_delta,
        )
        for y in above
    ]


def localized_newton_point(spec: IsoSpaceSpec, x: Place | str) -> NewtonPoint:
    """The slopes of ``localize`` expanded by their dimensions."""
    slopes: list[Fraction] = []
    for slope, dim in localize(spec, x):
        slopes.extend([slope] * dim)
    return NewtonPoint(tuple(sorted(slopes, reverse=True)))


def degree_at(spec: IsoSpaceSpec, x: Place | str) -> Fraction:
    """deg(V_x, φ_x) = Σ_{y|x} d·d(Δ)·deg_y(Π)."""
    report = classify_simple(spec)
    d = spec.algebra.d
    return sum(
        (d * report.d_delta * spec.pi_degree(y.id) for y in spec.extension.places_over(x)),
        Fraction(0),
    )


def check_degree_congruence(spec: IsoSpaceSpec, x: Place | str) -> bool:
    """deg(V_x, φ_x)/d ≡ [m·inv_x(D)] mod ℤ."""
    report = classify_simple(spec)
    lhs = degree_at(spec, x) / spec.algebra.d
    rhs = bracket_q(report.m * spec.algebra.invariant(_place_id(x)).representative)
    return (lhs - rhs).denominator == 1


def pi_valuations(spec: IsoSpaceSpec) -> dict[str, Fraction]:
    """Normalized valuations v_y(Π) = deg_y(Π) / deg(y) at every listed L-place."""
    return {
        y.id: spec.pi_degree(y.id) / y.absolute_degree
        for y in spec.extension.all_places()
    }
