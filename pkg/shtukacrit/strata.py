"""Kottwitz–Rapoport and Newton strata data at one place."""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any

from shtukacrit.affweyl import AffineElement, admissible_set, basic_element, is_straight
from shtukacrit.brauer import Place
from shtukacrit.coweight import Coweight, aggregate_lambda_y
from shtukacrit.criteria import Scenario
from shtukacrit.errors import UnsupportedQueryError
from shtukacrit.newton import NewtonPoint, basic_point, shapiro_product

logger = logging.getLogger(__name__)


def local_bound_tuple(s: Scenario, y: Place) -> tuple[Coweight, ...]:
    """
    λ̃_y: for each of the deg(y) geometric points over y, the dominant sum of
    the bounds of the legs sitting there (zero where no leg lands).
    """
    d = s.d
    points = []
    for a in range(y.degree):
        total = [0] * d
        for i in s.legs.legs_at(y):
            if s.legs.position(i).frobenius_index == a:
                total = [u + v for u, v in zip(total, s.bounds[i])]
        points.append(Coweight(sorted(total, reverse=True)))
    return tuple(points)


@dataclass(frozen=True)
class KRStrata:
    """The Kottwitz–Rapoport strata ∏_a Adm(λ̃_{y,a}) at a place."""

    place: Place
    lambdas: tuple[Coweight, ...]
    sizes: tuple[int, ...]
    basic: tuple[AffineElement, ...]

    @property
    def count(self) -> int:
        return math.prod(self.sizes)

    def to_dict(self) -> dict[str, Any]:
        return {
            "place": self.place.id,
            "lambdas": [lam.to_list() for lam in self.lambdas],
            "sizes": list(self.sizes),
            "count": self.count,
            "basic": [e.to_dict() for e in self.basic],
        }


def kr_strata(s: Scenario, y: Place) -> KRStrata:
    lambdas = local_bound_tuple(s, y)
    sizes = tuple(len(admissible_set(lam)) for lam in lambdas)
    basic = tuple(basic_element(lam) for lam in lambdas)
    return KRStrata(y, lambdas, sizes, basic)


@dataclass(frozen=True)
class NewtonStrata:
    """Newton points of the strata at a place, inside B(G_y, λ_y)."""

    place: Place
    lam: Coweight
    ramified: bool
    points: frozenset[NewtonPoint]
    basic: NewtonPoint
    sht_nonempty: bool

    def to_dict(self) -> dict[str, Any]:
        ordered = sorted(self.points, key=NewtonPoint.sort_key)
        return {
            "place": self.place.id,
            "lambda": self.lam.to_list(),
            "ramified": self.ramified,
            "points": [nu.to_list() for nu in ordered],
            "basic": self.basic.to_list(),
            "sht_nonempty": self.sht_nonempty,
        }


def newton_strata(s: Scenario, y: Place, basic_only: bool = False) -> NewtonStrata:
    """
    Newton points realized by straight tuples in ∏_a Adm(λ̃_{y,a}).

    At a ramified place only the basic point is available.

    Raises:
        UnsupportedQueryError: If y is ramified and ``basic_only`` is False
    """
    lam_y = aggregate_lambda_y(s.bounds, s.legs, y)
    ramified = not s.algebra.invariant(y).is_zero()
    basic = basic_point(lam_y)
    nonempty = s.bounds.total_degree() == 0
    if ramified and not basic_only:
        raise UnsupportedQueryError(
            f"non-basic Newton strata at the ramified place '{y.id}' are not described"
        )
    if basic_only:
        return NewtonStrata(y, lam_y, ramified, frozenset({basic}), basic, nonempty)

    factors = [admissible_set(lam).sorted_elements() for lam in local_bound_tuple(s, y)]
    points = set()
    for combo in itertools.product(*factors):
        if is_straight(combo):
            points.add(shapiro_product(combo))
    logger.debug(f"Newton strata at {y.id}: {len(points)} points")
    return NewtonStrata(y, lam_y, ramified, frozenset(points), basic, nonempty)
