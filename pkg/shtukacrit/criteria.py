"""
Global criteria for moduli of shtukas with D-structure.

Every inequality is decided in exact arithmetic and is strict exactly where
the criterion says so.
"""

import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from shtukacrit.brauer import (
    AlgebraReport,
    AlgebraSpec,
    LegAssignment,
    LegPosition,
    Place,
    ramification_locus,
    torsion_order,
    validate_algebra,
)
from shtukacrit.config import parallel_map
from shtukacrit.coweight import BoundTuple, special_point
from shtukacrit.errors import (
    LegsMeetYError,
    MissingIdeleDegreeError,
    UnbalancedWeightsError,
)
from shtukacrit.exactq import bracket_q, format_rational
from shtukacrit.fields import PositiveIntField

logger = logging.getLogger(__name__)

VARIANTS = ("intro", "theorem")


def _plain(value: Any) -> Any:
    """Convert witness data into JSON-ready values."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, Place):
        return value.id
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_plain(v) for v in value)
    return value


class Scenario:
    """
    A division algebra, a bound per leg, leg positions and optionally deg(a).

    Attributes:
        algebra (AlgebraSpec): D
        bounds (BoundTuple): 𝛌
        legs (LegAssignment): Positions of the legs; unlisted legs are generic
        idele_degree (int | None): deg(a) of the idèle used to quotient
    """

    idele_degree = PositiveIntField(required=False)

    def __init__(
        self,
        algebra: AlgebraSpec,
        bounds: BoundTuple,
        legs: LegAssignment | None = None,
        idele_degree: int | None = None,
    ):
        legs = legs or LegAssignment()
        if bounds.d != algebra.d:
            raise ValueError(f"bounds have length {bounds.d}, algebra has index {algebra.d}")
        stray = sorted(set(legs.entries) - set(bounds.indices))
        if stray:
            raise ValueError(f"positions given for unknown legs: {stray}")
        for i, position in legs.entries.items():
            if position is not None and position.place.id not in algebra.places:
                raise ValueError(f"leg {i} lies over undeclared place '{position.place.id}'")
        self.__dict__["algebra"] = algebra
        self.__dict__["bounds"] = bounds
        self.__dict__["legs"] = legs
        self.idele_degree = idele_degree

    @property
    def d(self) -> int:
        return self.algebra.d

    def with_legs(self, legs: LegAssignment) -> "Scenario":
        return Scenario(self.algebra, self.bounds, legs, self.idele_degree)

    def ramified(self) -> list[Place]:
        """Ram(D), sorted by place id."""
        return sorted(ramification_locus(self.algebra))

    def to_dict(self) -> dict[str, Any]:
        legs = []
        for i, lam in self.bounds.legs.items():
            entry: dict[str, Any] = {"i": i, "lambda": lam.to_list()}
            position = self.legs.position(i)
            if position is not None:
                entry.update(position.to_dict())
            legs.append(entry)
        data: dict[str, Any] = {"algebra": self.algebra.to_dict(), "legs": legs}
        if self.idele_degree is not None:
            data["idele_degree"] = self.idele_degree
        return data


@dataclass(frozen=True)
class Verdict:
    """
    Outcome of one criterion.

    For universally quantified criteria ``witnesses`` is non-empty exactly
    when ``holds`` is false, unless the criterion is not ``applicable``.
    """

    criterion: str
    holds: bool
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    applicable: bool = True
    explanation: str = ""
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "criterion": self.criterion,
            "holds": self.holds,
            "applicable": self.applicable,
            "explanation": self.explanation,
            "witnesses": _plain(self.witnesses),
            "details": _plain(self.details),
        }


def _inapplicable(criterion: str, explanation: str) -> Verdict:
    return Verdict(criterion, holds=False, applicable=False, explanation=explanation)


def leg_weight(bounds: BoundTuple, m: int) -> int:
    """Σ_i Σ_{j=1}^{d−m} λ_{i,j}."""
    return sum(sum(lam[: bounds.d - m]) for lam in bounds.legs.values())


def _bracket(s: Scenario, m: int, x: Place) -> Fraction:
    return bracket_q(m * s.algebra.invariant(x).representative)


def check_nonempty(s: Scenario) -> Verdict:
    """Sht is non-empty iff Σ_i deg λ_i = 0."""
    total = s.bounds.total_degree()
    witnesses = [] if total == 0 else [{"degree_sum": total}]
    return Verdict("nonempty", total == 0, witnesses, details={"degree_sum": total})


def component_count(s: Scenario) -> int:
    """
    Number of degree components of Sht / a^ℤ, namely d·deg(a).

    Raises:
        MissingIdeleDegreeError: If the scenario has no idele_degree
    """
    if s.idele_degree is None:
        raise MissingIdeleDegreeError()
    return s.d * s.idele_degree


def check_lau(s: Scenario) -> Verdict:
    """
    Σ_{y∈Ram(D)} [m·inv_y]_ℚ > Σ_i Σ_{j=1}^{d−m} λ_{i,j} for every 0 < m < d.

    Examples:
        A quaternion algebra ramified at two places with 𝛌 = ((1,0),(0,−1))
        fails at m = 1 with 1 against 1.
    """
    ramified = s.ramified()
    witnesses = []
    for m in range(1, s.d):
        lhs = sum((_bracket(s, m, x) for x in ramified), Fraction(0))
        rhs = Fraction(leg_weight(s.bounds, m))
        if not lhs > rhs:
            witnesses.append({"m": m, "lhs": lhs, "rhs": rhs})
    return Verdict("lau", not witnesses, witnesses)


def _worst_subset(s: Scenario, m: int, size: int) -> tuple[list[Place], Fraction]:
    ranked = sorted(s.ramified(), key=lambda x: (_bracket(s, m, x), x.id))
    chosen = sorted(ranked[:size])
    return chosen, sum((_bracket(s, m, x) for x in chosen), Fraction(0))


def _worst_subset_exhaustive(s: Scenario, m: int, size: int) -> tuple[list[Place], Fraction]:
    best: tuple[Fraction, list[str]] | None = None
    for subset in itertools.combinations(s.ramified(), size):
        total = sum((_bracket(s, m, x) for x in subset), Fraction(0))
        key = (total, [x.id for x in subset])
        if best is None or key < best:
            best = key
    total, ids = best
    return [s.algebra.place(pid) for pid in ids], total


def check_main(s: Scenario, variant: str = "theorem", exhaustive: bool = False) -> Verdict:
    """
    The properness criterion: for every 0 < m < d and every Y ⊂ Ram(D) of
    size |Ram(D)| − c, Σ_{y∈Y} [m·inv_y]_ℚ > Σ_i Σ_{j=1}^{d−m} λ_{i,j}.

    Args:
        s: The scenario
        variant: ``"intro"`` takes c = |I|, ``"theorem"`` takes c = |Iⁿᶜ|
        exhaustive: Enumerate every Y instead of only the minimizing one

    Returns:
        The Verdict; witnesses carry m, the minimizing Y and both sides

    Raises:
        ValueError: If the variant is unknown
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    name = f"main_{variant}"
    count = len(s.bounds) if variant == "intro" else len(s.bounds.non_central())
    ramified = s.ramified()
    if len(ramified) <= count:
        return _inapplicable(
            name, f"|Ram(D)| = {len(ramified)} does not exceed {count}"
        )
    size = len(ramified) - count
    pick = _worst_subset_exhaustive if exhaustive else _worst_subset

    def evaluate(m: int) -> dict[str, Any] | None:
        subset, lhs = pick(s, m, size)
        rhs = Fraction(leg_weight(s.bounds, m))
        if lhs > rhs:
            return None
        return {"m": m, "Y": subset, "lhs": lhs, "rhs": rhs}

    witnesses = [w for w in parallel_map(evaluate, range(1, s.d)) if w is not None]
    return Verdict(name, not witnesses, witnesses, details={"subset_size": size})


def quasicompact_is_automatic(algebra: AlgebraSpec) -> bool:
    """
    True when every subset condition holds for free: d is prime, or every
    ramified local invariant has order d.
    """
    d = algebra.d
    prime = d > 1 and all(d % k for k in range(2, math.isqrt(d) + 1))
    ramified = ramification_locus(algebra)
    return prime or all(torsion_order(algebra.invariant(x)) == d for x in ramified)


def _lookup(s: Scenario, ids: Iterable[str]) -> list[Place]:
    unknown = sorted(pid for pid in ids if pid not in s.algebra.places)
    if unknown:
        raise ValueError(f"undeclared places: {', '.join(unknown)}")
    return [s.algebra.place(pid) for pid in ids]


def _order_lcm(s: Scenario, places: Iterable[Place]) -> int:
    return math.lcm(1, *(torsion_order(s.algebra.invariant(x)) for x in places))


def check_quasicompact(s: Scenario, subset: Iterable[Place | str] | None = None) -> Verdict:
    """
    Quasi-compactness through the lowest common denominator condition.

    Without ``subset``, every Y ⊂ Ram(D) of size |Ram(D)| − |I| must have
    invariants of lowest common denominator exactly d. With ``subset`` only
    that Y is tested.
    """
    automatic = quasicompact_is_automatic(s.algebra)
    note = "automatic: d is prime or every local algebra is a division algebra"
    if subset is not None:
        ids = sorted(x.id if isinstance(x, Place) else x for x in subset)
        places = _lookup(s, ids)
        order = _order_lcm(s, places)
        witnesses = [] if order == s.d else [{"Y": places, "lcm": order}]
        return Verdict("quasicompact", not witnesses, witnesses, details={"lcm": order})

    ramified = s.ramified()
    size = len(ramified) - len(s.bounds)
    if size <= 0:
        return _inapplicable(
            "quasicompact",
            f"|Ram(D)| = {len(ramified)} does not exceed |I| = {len(s.bounds)}",
        )
    witnesses = []
    for subset_places in itertools.combinations(ramified, size):
        order = _order_lcm(s, subset_places)
        if order != s.d:
            witnesses.append({"Y": list(subset_places), "lcm": order})
            break
    return Verdict(
        "quasicompact",
        not witnesses,
        witnesses,
        explanation=note if automatic else "",
        details={"subset_size": size, "automatic": automatic},
    )


def check_irreducibility(s: Scenario, subset: Iterable[Place | str]) -> Verdict:
    """
    The rank divisibility forced by Y: lcm_{y∈Y} d·e_y must equal d².

    Raises:
        ValueError: If Y is not contained in Ram(D)
        LegsMeetYError: If a leg lies over a place of Y
    """
    ids = sorted({x.id if isinstance(x, Place) else x for x in subset})
    ramified_ids = {x.id for x in s.ramified()}
    outside = [pid for pid in ids if pid not in ramified_ids]
    if outside:
        raise ValueError(f"Y contains unramified places: {', '.join(outside)}")
    meeting = s.legs.assigned_place_ids() & set(ids)
    if meeting:
        raise LegsMeetYError(meeting)
    places = [s.algebra.place(pid) for pid in ids]
    divisor = s.d * _order_lcm(s, places)
    holds = divisor == s.d * s.d
    witnesses = [] if holds else [{"Y": places, "divisor": divisor}]
    return Verdict("irreducibility", holds, witnesses, details={"divisor": divisor})


def coker_bound(s: Scenario, m: int) -> int:
    """
    Upper bound d·Σ_i Σ_{j=1}^{d−m} λ_{i,j} for the cokernel dimension.

    Raises:
        ValueError: If m is outside [1, d]
    """
    if not 1 <= m <= s.d:
        raise ValueError(f"m must lie in [1, {s.d}], got {m}")
    return s.d * leg_weight(s.bounds, m)


def degeneration_lower_bound(s: Scenario, m: int, x: Place | str) -> Fraction:
    """
    Lower bound for the contribution of x to the cokernel, per unit of d.

    [m·inv_x]_ℚ when every leg over x is central; otherwise that bracket minus
    Σ_{i∈I_x} Σ_{j=1}^m (λ_{i,j} − λ_{i,d+1−j}), floored at 0.

    Raises:
        ValueError: If m is outside (0, d)
    """
    if not 0 < m < s.d:
        raise ValueError(f"m must lie strictly between 0 and {s.d}, got {m}")
    base = bracket_q(m * s.algebra.invariant(x).representative)
    here = s.legs.legs_at(x)
    if not set(here) & set(s.bounds.non_central()):
        return base
    d = s.d
    relax = sum(
        s.bounds[i][j] - s.bounds[i][d - 1 - j] for i in here for j in range(m)
    )
    return max(Fraction(0), base - relax)


def find_blocking(s: Scenario) -> Verdict:
    """
    Search for an m at which the chain of cokernel bounds does not exclude a
    degeneration for the scenario's leg placement.

    Returns:
        A holding Verdict (the properness certificate for this placement) when
        Σ_{x∈Y′} [m·inv_x]_ℚ > coker_bound/d for every m, Y′ being the ramified
        places without non-central legs; otherwise the smallest blocking m
    """
    nonc = set(s.bounds.non_central())
    y_prime = [x for x in s.ramified() if not set(s.legs.legs_at(x)) & nonc]
    witnesses = []
    for m in range(1, s.d):
        lhs = sum(
            (degeneration_lower_bound(s, m, x) for x in s.ramified()), Fraction(0)
        )
        rhs = Fraction(coker_bound(s, m), s.d)
        if lhs <= rhs:
            witnesses.append({"m": m, "Y_prime": y_prime, "lhs": lhs, "rhs": rhs})
            break
    return Verdict(
        "degeneration",
        not witnesses,
        witnesses,
        explanation="no degeneration consistent" if not witnesses else "",
        details={"placement": s.legs.to_dict(), "Y_prime": y_prime},
    )


def all_placements(s: Scenario) -> list[LegAssignment]:
    """Every way to put each leg over a ramified place or away from Ram(D)."""
    options: list[LegPosition | None] = [None]
    options.extend(LegPosition(x, 0) for x in s.ramified())
    indices = s.bounds.indices
    return [
        LegAssignment(dict(zip(indices, combo)))
        for combo in itertools.product(options, repeat=len(indices))
    ]


def find_blocking_all_placements(s: Scenario) -> Verdict:
    """Run find_blocking on every placement and report the first blocking one."""
    placements = all_placements(s)
    verdicts = parallel_map(lambda legs: find_blocking(s.with_legs(legs)), placements)
    blocking = [v for v in verdicts if not v.holds]
    logger.debug(f"{len(blocking)} of {len(placements)} placements block")
    witnesses = []
    if blocking:
        first = blocking[0]
        witnesses = [dict(first.witnesses[0], placement=first.details["placement"])]
    return Verdict(
        "degeneration_all_placements",
        not blocking,
        witnesses,
        details={"placements": len(placements), "blocking_placements": len(blocking)},
    )


def check_basic_stratum(s: Scenario) -> Verdict:
    """
    The basic stratum is non-empty iff Σ_i deg λ_i = 0; when it is, the
    rearranged minimal minuscule coweights summing to zero are reported.
    """
    total = s.bounds.total_degree()
    details: dict[str, Any] = {"degree_sum": total}
    try:
        details["special_point"] = {
            i: list(v) for i, v in special_point(s.bounds).items()
        }
    except UnbalancedWeightsError as e:
        details["special_point"] = None
        logger.debug(f"No special point: {e.message}")
    witnesses = [] if total == 0 else [{"degree_sum": total}]
    return Verdict("basic_stratum", total == 0, witnesses, details=details)


@dataclass(frozen=True)
class ScenarioReport:
    """Everything ``full_report`` evaluates for one scenario."""

    validation: AlgebraReport
    verdicts: dict[str, Verdict] = field(default_factory=dict)
    blocking: list[Verdict] = field(default_factory=list)
    component_count: int | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "validation": self.validation.to_dict(),
            "verdicts": {k: v.to_dict() for k, v in self.verdicts.items()},
            "blocking": [v.to_dict() for v in self.blocking],
        }
        if self.component_count is not None:
            data["component_count"] = self.component_count
        return data


def full_report(s: Scenario, placements: Sequence[LegAssignment] = ()) -> ScenarioReport:
    """
    Evaluate every global criterion on a scenario.

    Nothing beyond validation runs when the algebra is invalid. The blocking
    search covers the scenario's own leg placement followed by ``placements``.
    """
    validation = validate_algebra(s.algebra)
    if not validation.ok:
        return ScenarioReport(validation)
    verdicts = {
        "nonempty": check_nonempty(s),
        "basic_stratum": check_basic_stratum(s),
        "lau": check_lau(s),
        "main_intro": check_main(s, "intro"),
        "main_theorem": check_main(s, "theorem"),
        "quasicompact": check_quasicompact(s),
    }
    blocking = [find_blocking(s)] + [find_blocking(s.with_legs(p)) for p in placements]
    count = component_count(s) if s.idele_degree is not None else None
    return ScenarioReport(validation, verdicts, blocking, count)
