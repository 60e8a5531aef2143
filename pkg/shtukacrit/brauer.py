"""Places, central division algebras by local invariants, extension shapes, legs."""

import logging
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Any

from shtukacrit.exactq import QModZClass, format_rational
from shtukacrit.fields import PlaceIdField, PositiveIntField, QModZMapField

logger = logging.getLogger(__name__)


def _place_id(x: "Place | str") -> str:
    return x.id if isinstance(x, Place) else x


class Place:
    """
    A closed point of the base curve, known only by its id and residue degree.

    Attributes:
        id (str): Unique identifier within a scenario
        degree (int): Residue degree over the constant field, at least 1
    """

    id = PlaceIdField()
    degree = PositiveIntField()

    def __init__(self, id: str, degree: int = 1):
        self.id = id
        self.degree = degree

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Place):
            return NotImplemented
        return (self.id, self.degree) == (other.id, other.degree)

    def __hash__(self) -> int:
        return hash((self.id, self.degree))

    def __lt__(self, other: "Place") -> bool:
        return self.id < other.id

    def __repr__(self) -> str:
        return f"Place(id='{self.id}', degree={self.degree})"

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "deg": self.degree}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Place":
        """
        Create a Place from its JSON form ``{"id": ..., "deg": ...}``.

        Raises:
            ValueError: If keys are missing or unknown, or values are invalid
        """
        unknown = set(data) - {"id", "deg"}
        if unknown:
            raise ValueError(f"unknown place keys: {', '.join(sorted(unknown))}")
        try:
            return cls(id=data["id"], degree=data.get("deg", 1))
        except KeyError as e:
            raise ValueError(f"Missing required field: {e}") from e


class AlgebraSpec:
    """
    A central division algebra D over the base field, up to isomorphism.

    Only the finite support of the invariant map is stored. Looking up the
    invariant at any other place returns 0. A place named in ``invariants`` but
    absent from ``places`` is declared with residue degree 1.

    The reciprocity and index constraints are not enforced at construction;
    use ``validate_algebra`` to check them.

    Attributes:
        d (int): Index of D
        places (Mapping[str, Place]): Declared places, by id
        invariants (Mapping[str, QModZClass]): Local invariants, by place id
    """

    d = PositiveIntField()
    invariants = QModZMapField()

    def __init__(
        self,
        d: int,
        invariants: Mapping[str, Any] | None = None,
        places: Iterable[Place] = (),
    ):
        self.d = d
        declared: dict[str, Place] = {}
        for place in places:
            if place.id in declared:
                raise ValueError(f"duplicate place id '{place.id}'")
            declared[place.id] = place
        self.invariants = invariants or {}
        for place_id in self.invariants:
            declared.setdefault(place_id, Place(place_id, 1))
        self.__dict__["places"] = MappingProxyType(dict(sorted(declared.items())))

    def invariant(self, x: "Place | str") -> QModZClass:
        """Local invariant at ``x`` (zero where unlisted)."""
        return self.invariants.get(_place_id(x), QModZClass.zero())

    def place(self, place_id: str) -> Place:
        """
        Look up a declared place.

        Raises:
            KeyError: If the place is not declared
        """
        return self.places[place_id]

    def __repr__(self) -> str:
        invs = ", ".join(f"{k}: {v}" for k, v in self.invariants.items())
        return f"AlgebraSpec(d={self.d}, invariants={{{invs}}})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraSpec):
            return NotImplemented
        return (self.d, dict(self.places), dict(self.invariants)) == (
            other.d,
            dict(other.places),
            dict(other.invariants),
        )

    def __hash__(self) -> int:
        return hash((self.d, tuple(self.invariants.items())))

    def to_dict(self) -> dict[str, Any]:
        return {
            "d": self.d,
            "places": [p.to_dict() for p in self.places.values()],
            "invariants": {k: str(v) for k, v in self.invariants.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "AlgebraSpec":
        """
        Create an AlgebraSpec from its JSON form.

        Raises:
            ValueError: If keys are missing or unknown, or values are invalid
        """
        unknown = set(data) - {"d", "places", "invariants"}
        if unknown:
            raise ValueError(f"unknown algebra keys: {', '.join(sorted(unknown))}")
        try:
            places = [Place.from_dict(p) for p in data.get("places", [])]
            return cls(d=data["d"], invariants=data.get("invariants", {}), places=places)
        except KeyError as e:
            raise ValueError(f"Missing required field: {e}") from e


@dataclass(frozen=True)
class AlgebraReport:
    """Outcome of ``validate_algebra``."""

    ok: bool
    violations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "violations": list(self.violations)}


def torsion_order(inv: QModZClass) -> int:
    """Smallest e ≥ 1 with e·inv ≡ 0."""
    return inv.order


def validate_algebra(spec: AlgebraSpec) -> AlgebraReport:
    """
    Check global reciprocity and the division-algebra condition.

    Examples:
        >>> validate_algebra(AlgebraSpec(2, {"x1": "1/2", "x2": "1/2"})).ok
        True
        >>> validate_algebra(AlgebraSpec(2, {"x1": "1/2"})).violations
        ['invariant sum 1/2 ≢ 0']
    """
    violations = []
    total = sum((inv.representative for inv in spec.invariants.values()), Fraction(0))
    if total.denominator != 1:
        violations.append(f"invariant sum {format_rational(total)} ≢ 0")
    orders = [torsion_order(inv) for inv in spec.invariants.values()]
    order_lcm = math.lcm(*orders) if orders else 1
    if order_lcm != spec.d:
        violations.append(f"lcm of orders {order_lcm} ≠ {spec.d}")
    if violations:
        logger.debug(f"Algebra {spec!r} rejected: {violations}")
    return AlgebraReport(ok=not violations, violations=violations)


def ramification_locus(spec: AlgebraSpec) -> frozenset[Place]:
    """Places where D does not split."""
    return frozenset(
        spec.places[pid] for pid, inv in spec.invariants.items() if not inv.is_zero()
    )


def invariant_after_base_change(
    spec: AlgebraSpec, x: "Place | str", local_degree: int
) -> QModZClass:
    """Invariant of D ⊗ L at a place of L of local degree ``local_degree`` over x."""
    return spec.invariant(x).scale(local_degree)


@dataclass(frozen=True)
class ExtensionPlace:
    """A place y of L lying over the place ``over`` of F."""

    id: str
    over: str
    local_degree: int = 1
    absolute_degree: int = 1

    def __post_init__(self) -> None:
        if self.local_degree < 1:
            raise ValueError(f"local_degree of '{self.id}' must be at least 1")
        if self.absolute_degree < 1:
            raise ValueError(f"absolute_degree of '{self.id}' must be at least 1")

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "over": self.over,
            "local_degree": self.local_degree,
            "absolute_degree": self.absolute_degree,
        }


class ExtensionShape:
    """
    The place fibration of a finite extension L/F.

    Attributes:
        total_degree (int): [L : F]
        places_above (Mapping[str, tuple[ExtensionPlace, ...]]): Places of L
            grouped by the F-place below them
    """

    total_degree = PositiveIntField()

    def __init__(self, total_degree: int, places: Iterable[ExtensionPlace]):
        self.total_degree = total_degree
        grouped: dict[str, list[ExtensionPlace]] = {}
        seen: set[str] = set()
        for y in places:
            if y.id in seen:
                raise ValueError(f"duplicate L-place id '{y.id}'")
            seen.add(y.id)
            grouped.setdefault(y.over, []).append(y)
        for x_id, above in grouped.items():
            local_sum = sum(y.local_degree for y in above)
            if local_sum != total_degree:
                raise ValueError(
                    f"local degrees above '{x_id}' sum to {local_sum}, "
                    f"expected [L:F] = {total_degree}"
                )
        self.__dict__["places_above"] = MappingProxyType(
            {x: tuple(sorted(ys, key=lambda y: y.id)) for x, ys in sorted(grouped.items())}
        )

    @classmethod
    def trivial(cls, place_ids: Iterable[str], degrees: Mapping[str, int]) -> "ExtensionShape":
        """L = F: every listed place is its own unique place above itself."""
        return cls(
            1,
            [
                ExtensionPlace(pid, pid, 1, degrees.get(pid, 1))
                for pid in sorted(set(place_ids))
            ],
        )

    def places_over(self, x: "Place | str") -> tuple[ExtensionPlace, ...]:
        return self.places_above.get(_place_id(x), ())

    def all_places(self) -> list[ExtensionPlace]:
        return [y for ys in self.places_above.values() for y in ys]

    def lookup(self, y_id: str) -> ExtensionPlace:
        for y in self.all_places():
            if y.id == y_id:
                return y
        raise KeyError(y_id)

    def to_dict(self) -> dict[str, Any]:
        return {
            "degree": self.total_degree,
            "places": [y.to_dict() for y in self.all_places()],
        }


@dataclass(frozen=True)
class LegPosition:
    """A geometric point over ``place``: the place plus a Frobenius index."""

    place: Place
    frobenius_index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.frobenius_index < self.place.degree:
            raise ValueError(
                f"frobenius index {self.frobenius_index} outside "
                f"[0, {self.place.degree}) for place '{self.place.id}'"
            )

    def to_dict(self) -> dict[str, Any]:
        return {"place": self.place.id, "frob": self.frobenius_index}


class LegAssignment:
    """
    Positions of the legs; a leg mapped to None lies away from Ram(D).

    Attributes:
        entries (Mapping[int, LegPosition | None]): Position per leg index
    """

    def __init__(self, entries: Mapping[int, LegPosition | None] | None = None):
        self.__dict__["entries"] = MappingProxyType(dict(sorted((entries or {}).items())))

    def position(self, i: int) -> LegPosition | None:
        return self.entries.get(i)

    def legs_at(self, x: "Place | str") -> list[int]:
        """Indices of legs lying over ``x``, in increasing order."""
        x_id = _place_id(x)
        return [i for i, pos in self.entries.items() if pos and pos.place.id == x_id]

    def assigned_place_ids(self) -> set[str]:
        return {pos.place.id for pos in self.entries.values() if pos is not None}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LegAssignment):
            return NotImplemented
        return dict(self.entries) == dict(other.entries)

    def __hash__(self) -> int:
        return hash(tuple(self.entries.items()))

    def __repr__(self) -> str:
        return f"LegAssignment({dict(self.entries)!r})"

    def to_dict(self) -> dict[str, Any]:
        return {
            str(i): (pos.to_dict() if pos else None) for i, pos in self.entries.items()
        }
