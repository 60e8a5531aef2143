"""
The extended affine Weyl group ℤ^d ⋊ S_d of GL_d.

An element t_v·w is stored as its translation v and its permutation w in
zero-indexed one-line notation (``permutation[i] = w(i)``); w acts on vectors
by moving coordinates, w(v)_{w(i)} = v_i. The simple affine reflections are
s_1, …, s_{d−1} (adjacent transpositions) and s_0 = t_{e_1−e_d}·(1 d); the
length-zero subgroup Ω is generated by ω = t_{e_1}·(1 2 ⋯ d).
"""

import functools
import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from shtukacrit.config import parallel_map
from shtukacrit.coweight import Coweight, degree
from shtukacrit.newton import NewtonPoint, newton_point_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class AffineElement:
    """An element t_v·w of the extended affine Weyl group."""

    translation: tuple[int, ...]
    permutation: tuple[int, ...]

    def __post_init__(self) -> None:
        translation = tuple(self.translation)
        permutation = tuple(self.permutation)
        if len(translation) != len(permutation):
            raise ValueError(
                f"translation and permutation lengths differ: "
                f"{len(translation)} vs {len(permutation)}"
            )
        if sorted(permutation) != list(range(len(permutation))):
            raise ValueError(f"{permutation} is not a permutation of 0..{len(permutation) - 1}")
        object.__setattr__(self, "translation", translation)
        object.__setattr__(self, "permutation", permutation)

    @property
    def d(self) -> int:
        return len(self.permutation)

    def act(self, v: Sequence[int]) -> tuple[int, ...]:
        """Apply the finite part w to a vector."""
        moved = [0] * self.d
        for i, target in enumerate(self.permutation):
            moved[target] = v[i]
        return tuple(moved)

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        if not isinstance(other, AffineElement):
            return NotImplemented
        if other.d != self.d:
            raise ValueError(f"cannot multiply elements of rank {self.d} and {other.d}")
        moved = self.act(other.translation)
        return AffineElement(
            tuple(a + b for a, b in zip(self.translation, moved)),
            tuple(self.permutation[k] for k in other.permutation),
        )

    def inverse(self) -> "AffineElement":
        inverse_perm = [0] * self.d
        for i, target in enumerate(self.permutation):
            inverse_perm[target] = i
        inv = AffineElement(tuple(0 for _ in range(self.d)), tuple(inverse_perm))
        return AffineElement(tuple(-x for x in inv.act(self.translation)), inv.permutation)

    def omega_component(self) -> int:
        """k such that this element lies in W_aff·ω^k."""
        return sum(self.translation)

    def to_dict(self) -> dict[str, Any]:
        return {"v": list(self.translation), "w": [k + 1 for k in self.permutation]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "AffineElement":
        """
        Create an element from ``{"v": [...], "w": [...]}`` with w one-indexed.

        Raises:
            ValueError: If keys are missing or unknown, or values are invalid
        """
        unknown = set(data) - {"v", "w"}
        if unknown:
            raise ValueError(f"unknown element keys: {', '.join(sorted(unknown))}")
        try:
            v = [int(x) for x in data["v"]]
            w = [int(k) - 1 for k in data["w"]]
        except KeyError as e:
            raise ValueError(f"Missing required field: {e}") from e
        except (TypeError, ValueError) as e:
            raise ValueError(f"malformed element {data!r}") from e
        return cls(tuple(v), tuple(w))

    def __str__(self) -> str:
        v = ",".join(str(x) for x in self.translation)
        w = "".join(str(k + 1) for k in self.permutation)
        return f"t({v})·[{w}]"


def identity(d: int) -> AffineElement:
    return AffineElement((0,) * d, tuple(range(d)))


def translation(v: Iterable[int]) -> AffineElement:
    v = tuple(v)
    return AffineElement(v, tuple(range(len(v))))


def simple_reflection(i: int, d: int) -> AffineElement:
    """
    s_i for 0 ≤ i < d; s_0 is the affine reflection.

    Raises:
        ValueError: If i is out of range or d < 2
    """
    if d < 2 or not 0 <= i < d:
        raise ValueError(f"no simple reflection s_{i} in rank {d}")
    perm = list(range(d))
    if i == 0:
        perm[0], perm[d - 1] = d - 1, 0
        v = [0] * d
        v[0], v[d - 1] = 1, -1
        return AffineElement(tuple(v), tuple(perm))
    perm[i - 1], perm[i] = i, i - 1
    return AffineElement((0,) * d, tuple(perm))


def omega(d: int) -> AffineElement:
    """The generator ω = t_{e_1}·(1 2 ⋯ d) of Ω."""
    v = (1,) + (0,) * (d - 1)
    return AffineElement(v, tuple((k + 1) % d for k in range(d)))


def omega_power(k: int, d: int) -> AffineElement:
    base = omega(d) if k >= 0 else omega(d).inverse()
    result = identity(d)
    for _ in range(abs(k)):
        result = result * base
    return result


@functools.lru_cache(maxsize=None)
def length(e: AffineElement) -> int:
    """
    Iwahori–Matsumoto length of t_v·w.

    ℓ = Σ_{i<j} |v_i − v_j| when w⁻¹(i) < w⁻¹(j), and |v_i − v_j − 1|
    otherwise.
    """
    v = e.translation
    position = [0] * e.d
    for i, target in enumerate(e.permutation):
        position[target] = i
    total = 0
    for i, j in itertools.combinations(range(e.d), 2):
        if position[i] < position[j]:
            total += abs(v[i] - v[j])
        else:
            total += abs(v[i] - v[j] - 1)
    return total


def left_descents(e: AffineElement) -> list[int]:
    """Indices i with ℓ(s_i·e) < ℓ(e)."""
    if e.d < 2:
        return []
    here = length(e)
    return [i for i in range(e.d) if length(simple_reflection(i, e.d) * e) < here]


@functools.lru_cache(maxsize=None)
def reduced_word(e: AffineElement) -> tuple[tuple[int, ...], AffineElement]:
    """
    A reduced expression e = s_{i_1} ⋯ s_{i_k}·τ with ℓ(τ) = 0.

    Returns:
        The index word (i_1, …, i_k) and τ
    """
    word = []
    rest = e
    while length(rest) > 0:
        i = left_descents(rest)[0]
        word.append(i)
        rest = simple_reflection(i, e.d) * rest
    return tuple(word), rest


def _from_word(word: Sequence[int], tau: AffineElement) -> AffineElement:
    result = identity(tau.d)
    for i in word:
        result = result * simple_reflection(i, tau.d)
    return result * tau


@functools.lru_cache(maxsize=None)
def bruhat_leq(a: AffineElement, b: AffineElement) -> bool:
    """
    Bruhat order, with a ≤ b only inside one Ω-coset.

    Uses the lifting property: for a left descent s of b, a ≤ b iff
    s·a ≤ s·b when s is also a descent of a, and a ≤ s·b otherwise.

    Raises:
        ValueError: If the ranks differ
    """
    if a.d != b.d:
        raise ValueError(f"cannot compare elements of rank {a.d} and {b.d}")
    if a.omega_component() != b.omega_component():
        return False
    length_a, length_b = length(a), length(b)
    if length_a > length_b:
        return False
    if length_b == 0:
        return a == b
    s = simple_reflection(left_descents(b)[0], b.d)
    sa = s * a
    if length(sa) < length_a:
        return bruhat_leq(sa, s * b)
    return bruhat_leq(a, s * b)


def demazure(a: AffineElement, b: AffineElement) -> AffineElement:
    """
    Demazure product a ⋆ b = max{a·b′ : b′ ≤ b}.

    Examples:
        >>> s0 = simple_reflection(0, 2)
        >>> demazure(s0, s0) == s0
        True
    """
    word, tau = reduced_word(b)
    result = a
    for i in word:
        candidate = result * simple_reflection(i, a.d)
        if length(candidate) > length(result):
            result = candidate
    return result * tau


def lower_covers(e: AffineElement) -> frozenset[AffineElement]:
    """Elements of length ℓ(e) − 1 below e: one letter dropped from a reduced word."""
    word, tau = reduced_word(e)
    target = len(word) - 1
    covers = set()
    for k in range(len(word)):
        candidate = _from_word(word[:k] + word[k + 1 :], tau)
        if length(candidate) == target:
            covers.add(candidate)
    return frozenset(covers)


def lower_interval(tops: Iterable[AffineElement]) -> frozenset[AffineElement]:
    """Every element below some element of ``tops``."""
    seen = set(tops)
    frontier = sorted(seen)
    while frontier:
        found = parallel_map(lower_covers, frontier)
        frontier = sorted(set().union(*found) - seen)
        seen.update(frontier)
    return frozenset(seen)


@dataclass(frozen=True)
class AdmissibleSet:
    """Adm(λ): everything Bruhat-below some translation t_{xλ}."""

    d: int
    lam: Coweight
    elements: frozenset[AffineElement] = field(repr=False)

    def __contains__(self, e: object) -> bool:
        return e in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> list[AffineElement]:
        """Ordered by length, then translation, then permutation."""
        return sorted(self.elements, key=lambda e: (length(e), e.translation, e.permutation))

    def maximal(self) -> list[AffineElement]:
        return sorted({translation(p) for p in itertools.permutations(self.lam)})

    def basic(self) -> AffineElement:
        return basic_element(self.lam)


def admissible_set(lam: Coweight) -> AdmissibleSet:
    """
    Enumerate Adm(λ) by walking down lower covers from the translations t_{xλ}.

    Examples:
        >>> len(admissible_set(Coweight((1, 0))))
        3
    """
    tops = {translation(p) for p in itertools.permutations(lam.entries)}
    elements = lower_interval(tops)
    logger.debug(f"Adm({lam.entries}) has {len(elements)} elements")
    return AdmissibleSet(lam.d, lam, elements)


def basic_element(lam: Coweight | Sequence[int]) -> AffineElement:
    """The length-zero element ω^{deg λ} of Adm(λ)."""
    return omega_power(degree(lam), len(lam))


def newton_point(e: AffineElement) -> NewtonPoint:
    return newton_point_of(e.translation, e.permutation)


def is_straight(elements: Sequence[AffineElement], delta: int = 1) -> bool:
    """
    δ-straightness of a tuple, δ the cyclic shift by ``delta`` positions.

    The tuple is straight iff Σ ℓ(w_a) equals ⟨ν, 2ρ⟩ for the Newton point ν
    of the cyclic product taken along the δ-orbit.

    Raises:
        ValueError: If the tuple is empty or δ does not generate the cyclic
            group of positions
    """
    f = len(elements)
    if f == 0:
        raise ValueError("is_straight needs a non-empty tuple")
    if math.gcd(delta, f) != 1:
        raise ValueError(f"shift {delta} does not act transitively on {f} positions")
    product = identity(elements[0].d)
    for k in range(f):
        product = product * elements[(k * delta) % f]
    total_length = sum(length(e) for e in elements)
    return total_length == newton_point(product).pairing_2rho()


@dataclass(frozen=True)
class AdditivityResult:
    """Comparison of Adm(λ₁) ⋆ Adm(λ₂) with Adm(λ₁ + λ₂)."""

    holds: bool
    left_size: int
    right_size: int
    only_left: tuple[AffineElement, ...] = ()
    only_right: tuple[AffineElement, ...] = ()


def check_adm_additivity(lam1: Coweight, lam2: Coweight) -> AdditivityResult:
    """
    Compare the downward closure of all Demazure products w₁ ⋆ w₂,
    w_k ∈ Adm(λ_k), with Adm(λ₁ + λ₂).

    Raises:
        ValueError: If the ranks differ
    """
    if lam1.d != lam2.d:
        raise ValueError(f"rank mismatch: {lam1.d} vs {lam2.d}")
    adm1 = admissible_set(lam1)
    adm2 = admissible_set(lam2)
    products = {demazure(w1, w2) for w1 in adm1.elements for w2 in adm2.elements}
    left = lower_interval(products)
    right = admissible_set(Coweight(a + b for a, b in zip(lam1, lam2))).elements
    return AdditivityResult(
        holds=left == right,
        left_size=len(left),
        right_size=len(right),
        only_left=tuple(sorted(left - right)),
        only_right=tuple(sorted(right - left)),
    )
