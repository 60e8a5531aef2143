"""Dominant coweights of GL_d, dominance, minuscule reduction and balancing."""

import itertools
import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from fractions import Fraction
from types import MappingProxyType
from typing import Any

from shtukacrit.brauer import LegAssignment, Place
from shtukacrit.errors import BalanceError, UnbalancedWeightsError
from shtukacrit.fields import CoweightField

logger = logging.getLogger(__name__)

BALANCE_ITERATION_CAP = 10_000
EXHAUSTIVE_BALANCE_MAX_D = 4


class Coweight:
    """
    A dominant coweight of GL_d: a weakly decreasing integer tuple.

    Behaves like a read-only sequence of its entries.

    Attributes:
        entries (tuple[int, ...]): (λ_1, …, λ_d), λ_1 ≥ … ≥ λ_d
    """

    entries = CoweightField()

    def __init__(self, entries: Iterable[int]):
        self.entries = tuple(entries)

    @classmethod
    def zero(cls, d: int) -> "Coweight":
        return cls((0,) * d)

    @classmethod
    def parse(cls, text: str) -> "Coweight":
        """
        Parse a comma separated list such as ``"1,0,-1"``.

        Raises:
            ValueError: If an entry is not an integer or the order is wrong
        """
        try:
            return cls(int(part) for part in text.split(","))
        except ValueError as e:
            raise ValueError(f"invalid coweight {text!r}: {e}") from e

    @property
    def d(self) -> int:
        return len(self.entries)

    def is_central(self) -> bool:
        return self.entries[0] == self.entries[-1]

    def gap(self) -> int:
        return self.entries[0] - self.entries[-1]

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, j: int) -> int:
        return self.entries[j]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Coweight):
            return self.entries == other.entries
        if isinstance(other, tuple):
            return self.entries == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"Coweight({self.entries})"

    def to_list(self) -> list[int]:
        return list(self.entries)


class BoundTuple:
    """
    The bound 𝛌 = (λ_i)_{i∈I}: one coweight per leg, all of the same length.

    Attributes:
        legs (Mapping[int, Coweight]): λ_i by leg index
    """

    def __init__(self, legs: Mapping[int, Coweight | Sequence[int]]):
        if not legs:
            raise ValueError("a bound tuple needs at least one leg")
        normalized = {
            i: lam if isinstance(lam, Coweight) else Coweight(lam)
            for i, lam in sorted(legs.items())
        }
        lengths = {len(lam) for lam in normalized.values()}
        if len(lengths) != 1:
            raise ValueError(f"legs have different lengths: {sorted(lengths)}")
        self.__dict__["legs"] = MappingProxyType(normalized)

    @property
    def d(self) -> int:
        return len(next(iter(self.legs.values())))

    @property
    def indices(self) -> list[int]:
        return list(self.legs)

    def non_central(self) -> list[int]:
        """Iⁿᶜ: legs whose coweight is not a constant sequence."""
        return [i for i, lam in self.legs.items() if not lam.is_central()]

    def total_degree(self) -> int:
        return sum(degree(lam) for lam in self.legs.values())

    def __getitem__(self, i: int) -> Coweight:
        return self.legs[i]

    def __len__(self) -> int:
        return len(self.legs)

    def __repr__(self) -> str:
        return f"BoundTuple({ {i: lam.entries for i, lam in self.legs.items()} })"

    def to_dict(self) -> dict[str, Any]:
        return {str(i): lam.to_list() for i, lam in self.legs.items()}


def degree(lam: Iterable[int]) -> int:
    """deg(λ) = Σ_j λ_j."""
    return sum(lam)


def dominance_leq(mu: Sequence[Fraction | int], lam: Sequence[Fraction | int]) -> bool:
    """
    Dominance order: partial sums of ``mu`` bounded by those of ``lam``,
    with equal totals.

    Raises:
        ValueError: If the lengths differ

    Examples:
        >>> dominance_leq((1, 1), (2, 0))
        True
        >>> dominance_leq((2, 0), (1, 1))
        False
    """
    if len(mu) != len(lam):
        raise ValueError(f"length mismatch: {len(mu)} vs {len(lam)}")
    partial_mu = Fraction(0)
    partial_lam = Fraction(0)
    for a, b in zip(mu, lam):
        partial_mu += a
        partial_lam += b
        if partial_mu > partial_lam:
            return False
    return partial_mu == partial_lam


def to_gl(lam: Coweight, d: int) -> Coweight:
    """Repeat every entry ``d`` times: the coweight of GL_{d²} attached to λ."""
    return Coweight(entry for entry in lam for _ in range(d))


def minimal_minuscule(lam: Coweight) -> Coweight:
    """
    The unique central or minuscule coweight below λ in the dominance order.

    With deg(λ) = q·d + r, 0 ≤ r < d, this is (q+1)^r q^(d−r).

    Examples:
        >>> minimal_minuscule(Coweight((3, 1, -1)))
        Coweight((1, 1, 1))
    """
    q, r = divmod(degree(lam), lam.d)
    return Coweight((q + 1,) * r + (q,) * (lam.d - r))


def twist(lam: Coweight, a: int) -> Coweight:
    """The Frobenius twist of λ by τ^a; trivial since the reflex field is F."""
    return lam


def aggregate_lambda_y(bounds: BoundTuple, legs: LegAssignment, y: Place | str) -> Coweight:
    """
    λ_y: the dominant sum of the twisted bounds of all legs lying over y.

    Returns the zero coweight when no leg lies over y.
    """
    total = [0] * bounds.d
    for i in legs.legs_at(y):
        position = legs.position(i)
        lam = twist(bounds[i], position.frobenius_index)
        total = [a + b for a, b in zip(total, lam)]
    return Coweight(sorted(total, reverse=True))


def _ones_count(delta: Sequence[int], d: int) -> int:
    e = sum(delta)
    if len(delta) != d or tuple(delta) != (1,) * e + (0,) * (d - e):
        raise ValueError(f"{tuple(delta)} is not of the form (1^e, 0^(d-e)) of length {d}")
    if e >= d:
        raise ValueError(f"{tuple(delta)} must have fewer than {d} ones")
    return e


def check_balanced(
    deltas: Sequence[Sequence[int]], epsilons: Sequence[Sequence[int]]
) -> bool:
    """
    Post-condition of ``balance``: each ε_i is a 0/1 rearrangement of δ_i and
    the column sums of (ε_i) are all equal.
    """
    if len(deltas) != len(epsilons):
        return False
    if not deltas:
        return True
    d = len(deltas[0])
    for delta, eps in zip(deltas, epsilons):
        if len(eps) != d or any(v not in (0, 1) for v in eps):
            return False
        if tuple(sorted(eps, reverse=True)) != tuple(delta):
            return False
    columns = {sum(eps[k] for eps in epsilons) for k in range(d)}
    return len(columns) == 1


def _exhaustive_balance(counts: Sequence[int], d: int, s: int) -> list[frozenset[int]] | None:
    choices = [list(itertools.combinations(range(d), e)) for e in counts]
    for combo in itertools.product(*choices):
        cover = [0] * d
        for chosen in combo:
            for k in chosen:
                cover[k] += 1
        if all(c == s for c in cover):
            return [frozenset(chosen) for chosen in combo]
    return None


def _reduce(counts: Sequence[int], d: int) -> list[tuple] | None:
    """
    Run the pairing / merging / complementing reduction on the ones counts.

    Returns the list of reduction steps, or None when the cap is hit.
    """
    active = {i: e for i, e in enumerate(counts)}
    next_id = len(counts)
    steps: list[tuple] = []
    for _ in range(BALANCE_ITERATION_CAP):
        for i in [i for i, e in active.items() if e == 0]:
            steps.append(("zero", i))
            del active[i]
        if not active:
            return steps
        keys = sorted(active)
        pairs = list(itertools.combinations(keys, 2))
        full = next((p for p in pairs if active[p[0]] + active[p[1]] == d), None)
        if full is not None:
            i, j = full
            steps.append(("pair", i, j, active[i]))
            del active[i], active[j]
            continue
        small = next((p for p in pairs if active[p[0]] + active[p[1]] < d), None)
        if small is not None:
            i, j = small
            steps.append(("merge", i, j, next_id, active[i]))
            active[next_id] = active.pop(i) + active.pop(j)
            next_id += 1
            continue
        if len(keys) < 2:
            break
        steps.append(("complement", tuple(keys)))
        active = {k: d - e for k, e in active.items()}
    logger.debug(f"Balancing reduction stopped with active counts {active}")
    return None


def _replay(steps: Sequence[tuple], d: int) -> dict[int, frozenset[int]]:
    everything = frozenset(range(d))
    sets: dict[int, frozenset[int]] = {}
    for step in reversed(steps):
        kind = step[0]
        if kind == "zero":
            sets[step[1]] = frozenset()
        elif kind == "pair":
            _, i, j, e_i = step
            sets[i] = frozenset(range(e_i))
            sets[j] = everything - sets[i]
        elif kind == "merge":
            _, i, j, k, e_i = step
            merged = sorted(sets.pop(k))
            sets[i] = frozenset(merged[:e_i])
            sets[j] = frozenset(merged[e_i:])
        else:
            for k in step[1]:
                sets[k] = everything - sets[k]
    return sets


def balance(deltas: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """
    Rearrange each δ_i = (1^{e_i}, 0^{d−e_i}) into ε_i so that Σ_i ε_i is
    central.

    Pairs whose counts sum to d are split into complementary halves; pairs
    whose counts sum to less than d are merged and solved as one weight; when
    every pair overshoots d all weights are complemented. Each pass lowers
    the number of live weights or enables a merge, so the loop is bounded by
    ``BALANCE_ITERATION_CAP``; if the cap is ever reached small cases fall
    back to exhaustive search.

    Args:
        deltas: The 0/1 weights, all of a common length d

    Returns:
        The ε_i, in input order

    Raises:
        ValueError: If a weight is not of the form (1^e, 0^(d-e)) with e < d
        UnbalancedWeightsError: If Σ e_i is not divisible by d
        BalanceError: If the reduction stalls and d is too large to search

    Examples:
        >>> balance([(1, 0), (1, 0)])
        [(1, 0), (0, 1)]
    """
    if not deltas:
        return []
    d = len(deltas[0])
    counts = [_ones_count(delta, d) for delta in deltas]
    total = sum(counts)
    if total % d:
        raise UnbalancedWeightsError(total, d)
    steps = _reduce(counts, d)
    if steps is not None:
        sets = _replay(steps, d)
        chosen = [sets[i] for i in range(len(counts))]
    elif d <= EXHAUSTIVE_BALANCE_MAX_D:
        logger.warning(f"Balancing cap hit for counts {counts}; searching exhaustively")
        chosen = _exhaustive_balance(counts, d, total // d)
        if chosen is None:
            raise BalanceError("exhaustive balancing found no solution", {"counts": counts})
    else:
        raise BalanceError(
            f"balancing did not terminate within {BALANCE_ITERATION_CAP} steps",
            {"counts": counts, "d": d},
        )
    result = [tuple(1 if k in s else 0 for k in range(d)) for s in chosen]
    logger.debug(f"Balanced {counts} into {result}")
    return result


def special_point(bounds: BoundTuple) -> dict[int, tuple[int, ...]]:
    """
    Rearrange the minimal minuscule coweights of all legs so their sum is
    central.

    Each λ^min_i is written as λ^min_{i,d}·(1,…,1) + δ_i and the δ_i are
    balanced. When Σ_i deg λ_i = 0 the returned tuples sum to zero.

    Raises:
        UnbalancedWeightsError: If d does not divide Σ_i deg λ_i
    """
    d = bounds.d
    mins = {i: minimal_minuscule(lam) for i, lam in bounds.legs.items()}
    deltas = [tuple(v - mins[i][-1] for v in mins[i]) for i in mins]
    epsilons = balance(deltas)
    return {
        i: tuple(mins[i][-1] + eps[k] for k in range(d))
        for i, eps in zip(mins, epsilons)
    }
