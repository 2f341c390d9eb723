"""
Finite powerset Boolean lattice heap

le is inclusion, mu is intersection and gamma is complement, so tau is union
and the right quotient of b by a is the implication (not a) or b.

Sets are bit masks over an ordered universe: atom i is bit i.
"""
from dataclasses import dataclass
from typing import Iterable

from services.heap_service import HeapCarrier
from utils.errors import UniverseMismatchError, ValidationError


@dataclass(frozen=True)
class FiniteSet:
    universe: tuple
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < (1 << len(self.universe)):
            raise ValidationError(f"mask {self.mask} does not fit a universe of {len(self.universe)} atoms")

    @property
    def full(self) -> int:
        return (1 << len(self.universe)) - 1

    @property
    def members(self) -> tuple:
        return tuple(atom for i, atom in enumerate(self.universe) if self.mask >> i & 1)

    def _same_universe(self, other: "FiniteSet") -> None:
        if self.universe != other.universe:
            raise UniverseMismatchError(f"universes differ: {list(self.universe)} vs {list(other.universe)}")

    def meet(self, other: "FiniteSet") -> "FiniteSet":
        self._same_universe(other)
        return FiniteSet(self.universe, self.mask & other.mask)

    def join(self, other: "FiniteSet") -> "FiniteSet":
        self._same_universe(other)
        return FiniteSet(self.universe, self.mask | other.mask)

    def complement(self) -> "FiniteSet":
        return FiniteSet(self.universe, self.full & ~self.mask)

    def issubset(self, other: "FiniteSet") -> bool:
        self._same_universe(other)
        return self.mask & ~other.mask == 0

    def __contains__(self, atom) -> bool:
        return atom in self.members

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def to_dict(self) -> dict:
        return {"universe": list(self.universe), "members": list(self.members)}

    @classmethod
    def from_members(cls, universe: Iterable, members: Iterable) -> "FiniteSet":
        universe = check_universe(universe)
        position = {atom: i for i, atom in enumerate(universe)}
        mask = 0
        for atom in members:
            if atom not in position:
                raise ValidationError(f"atom {atom!r} is not in the universe {list(universe)}")
            mask |= 1 << position[atom]
        return cls(universe, mask)

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteSet":
        try:
            return cls.from_members(data["universe"], data["members"])
        except (KeyError, TypeError) as e:
            raise ValidationError(f"malformed set document: {e}") from e

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"


def check_universe(universe: Iterable) -> tuple:
    try:
        universe = tuple(universe)
        distinct = len(set(universe))
    except TypeError as e:
        raise ValidationError(f"universe atoms must be hashable scalars: {e}") from e
    if not universe:
        raise ValidationError("a universe needs at least one atom")
    if distinct != len(universe):
        raise ValidationError(f"duplicate atoms in universe {list(universe)}")
    return universe


def all_subsets(universe: Iterable) -> tuple:
    universe = check_universe(universe)
    return tuple(FiniteSet(universe, mask) for mask in range(1 << len(universe)))


def lattice_heap(universe: Iterable) -> HeapCarrier:
    """Powerset of the universe with its full 2^n enumeration"""
    universe = check_universe(universe)
    return HeapCarrier(
        name=f"bool{list(universe)}",
        le=FiniteSet.issubset,
        mu=FiniteSet.meet,
        gamma=FiniteSet.complement,
        elements=lambda: all_subsets(universe),
        sampler=lambda rng: FiniteSet(universe, rng.randrange(1 << len(universe))),
        render=lambda s: list(s.members),
    )


def join_heap(universe: Iterable) -> HeapCarrier:
    """Union as source multiplication with complement; fails the regularity axioms"""
    universe = check_universe(universe)
    h = lattice_heap(universe)
    return HeapCarrier(
        name=f"bool-join{list(universe)}",
        le=h.le,
        mu=FiniteSet.join,
        gamma=h.gamma,
        elements=h.elements,
        render=h.render,
    )


def commutative_regularity_holds(h: HeapCarrier) -> bool:
    """(mu_a . gamma)^2 <= id for every a and x of the enumeration"""
    carrier = h.enumerate()
    for a in carrier:
        for x in carrier:
            once = h.mu(a, h.gamma(x))
            if not h.le(h.mu(a, h.gamma(once)), x):
                return False
    return True
