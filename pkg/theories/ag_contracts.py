"""
Assume-guarantee contracts over a finite behavior universe

A contract is a pair (A, G) of behavior sets with A | G covering the
universe. Refinement weakens assumptions and strengthens guarantees:
(A, G) <= (A', G') iff G <= G' and A >= A'.

Heap structure: mu is composition, gamma is the reciprocal (G, A), tau is
merging, the right quotient is the contract quotient and the smallest tau
solution is separation.
"""
import itertools
from dataclasses import dataclass
from typing import Iterable

from services.heap_service import HeapCarrier
from theories.boolean_lattice import FiniteSet, check_universe
from utils.errors import InvalidContractError, UniverseMismatchError, ValidationError


@dataclass(frozen=True)
class Contract:
    assumptions: FiniteSet
    guarantees: FiniteSet

    def __post_init__(self):
        if self.assumptions.universe != self.guarantees.universe:
            raise UniverseMismatchError("assumptions and guarantees live in different universes")
        if self.assumptions.join(self.guarantees).mask != self.assumptions.full:
            raise InvalidContractError(
                f"A | G must cover the universe: A={self.assumptions!r}, G={self.guarantees!r}"
            )

    @property
    def universe(self) -> tuple:
        return self.assumptions.universe

    def to_dict(self) -> dict:
        return {
            "universe": list(self.universe),
            "assumptions": list(self.assumptions.members),
            "guarantees": list(self.guarantees.members),
        }

    @classmethod
    def from_sets(cls, universe: Iterable, assumptions: Iterable, guarantees: Iterable) -> "Contract":
        universe = check_universe(universe)
        return cls(FiniteSet.from_members(universe, assumptions), FiniteSet.from_members(universe, guarantees))

    @classmethod
    def from_dict(cls, data: dict) -> "Contract":
        try:
            return cls.from_sets(data["universe"], data["assumptions"], data["guarantees"])
        except (KeyError, TypeError) as e:
            raise ValidationError(f"malformed contract document: {e}") from e

    def __repr__(self) -> str:
        return f"({self.assumptions!r}, {self.guarantees!r})"


def _same_universe(c: Contract, d: Contract) -> None:
    if c.universe != d.universe:
        raise UniverseMismatchError(f"universes differ: {list(c.universe)} vs {list(d.universe)}")


def top(universe: Iterable) -> Contract:
    """(B, B): the identity of composition and its own reciprocal"""
    full = FiniteSet.from_members(universe, universe)
    return Contract(full, full)


def saturate(universe: Iterable, assumptions: Iterable, guarantees: Iterable) -> Contract:
    """Build (A, G | not A) from a pair that may not cover the universe"""
    universe = check_universe(universe)
    a = FiniteSet.from_members(universe, assumptions)
    g = FiniteSet.from_members(universe, guarantees)
    return Contract(a, g.join(a.complement()))


def refines(c: Contract, d: Contract) -> bool:
    """Refinement: weaker assumptions and stronger guarantees"""
    _same_universe(c, d)
    return c.guarantees.issubset(d.guarantees) and d.assumptions.issubset(c.assumptions)


def reciprocal(c: Contract) -> Contract:
    """Swap assumptions and guarantees"""
    return Contract(c.guarantees, c.assumptions)


def compose(c: Contract, d: Contract) -> Contract:
    """Parallel composition (A&A' | not(G&G'), G&G')"""
    _same_universe(c, d)
    g = c.guarantees.meet(d.guarantees)
    a = c.assumptions.meet(d.assumptions).join(g.complement())
    return Contract(a, g)


def merge(c: Contract, d: Contract) -> Contract:
    """Conjunction of requirements (A&A', G&G' | not(A&A'))"""
    _same_universe(c, d)
    a = c.assumptions.meet(d.assumptions)
    g = c.guarantees.meet(d.guarantees).join(a.complement())
    return Contract(a, g)


def contract_quotient(c: Contract, d: Contract) -> Contract:
    """Largest X with compose(d, X) <= c"""
    _same_universe(c, d)
    a = c.assumptions.meet(d.guarantees)
    g = c.guarantees.meet(d.assumptions).join(a.complement())
    return Contract(a, g)


def separation(c: Contract, d: Contract) -> Contract:
    """Smallest X with c <= merge(d, X)"""
    _same_universe(c, d)
    g = c.guarantees.meet(d.assumptions)
    a = c.assumptions.meet(d.guarantees).join(g.complement())
    return Contract(a, g)


def enumerate_contracts(universe: Iterable) -> tuple:
    """All 3^n contracts: each behavior is assumed only, guaranteed only, or both"""
    universe = check_universe(universe)
    contracts = []
    for roles in itertools.product((0, 1, 2), repeat=len(universe)):
        a = FiniteSet(universe, sum(1 << i for i, r in enumerate(roles) if r != 1))
        g = FiniteSet(universe, sum(1 << i for i, r in enumerate(roles) if r != 0))
        contracts.append(Contract(a, g))
    return tuple(contracts)


def _sample(universe: tuple):
    def draw(rng):
        roles = [rng.randrange(3) for _ in universe]
        a = FiniteSet(universe, sum(1 << i for i, r in enumerate(roles) if r != 1))
        g = FiniteSet(universe, sum(1 << i for i, r in enumerate(roles) if r != 0))
        return Contract(a, g)

    return draw


def contract_heap(universe: Iterable) -> HeapCarrier:
    """Contracts over the universe with their full 3^n enumeration"""
    universe = check_universe(universe)
    return HeapCarrier(
        name=f"agc{list(universe)}",
        le=refines,
        mu=compose,
        gamma=reciprocal,
        elements=lambda: enumerate_contracts(universe),
        sampler=_sample(universe),
        render=Contract.to_dict,
    )
