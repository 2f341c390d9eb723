"""
Brute-force oracles for quotient maximality and adjunction

These are the ground truth the closed forms are compared against. On
enumerable carriers every candidate is tried; on language sieves a word-wise
check up to a length bound replaces candidate enumeration, which is valid
because a language heap is a powerset lattice where the inequality holds
word by word.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Optional

from config.settings import ORACLE_CONFIG
from services.automata_service import all_words, contains
from services.heap_service import HeapCarrier, equivalent, quotient_left, quotient_right
from services.sieve_service import SievedElement, SievedHeap
from utils.errors import ValidationError

logger = logging.getLogger(__name__)

SIDES = ("right", "left")


@dataclass(frozen=True)
class SolutionSet:
    """Every carrier element solving mu(a, x) <= b (right) or mu(x, a) <= b (left)"""

    a: Any
    b: Any
    side: str
    solutions: tuple
    maxima: tuple


def _check_side(side: str) -> None:
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")


def exhaustive_carrier(h: HeapCarrier) -> tuple:
    """The enumeration of h, refused above the configured carrier size"""
    carrier = h.enumerate()
    limit = ORACLE_CONFIG["max_carrier"]
    if len(carrier) > limit:
        raise ValidationError(f"heap '{h.name}' has {len(carrier)} elements; exhaustive oracles stop at {limit}")
    return carrier


def _solves(h: HeapCarrier, a, b, x, side: str) -> bool:
    product = h.mu(a, x) if side == "right" else h.mu(x, a)
    return h.le(product, b)


def closed_form(h: HeapCarrier, a, b, side: str):
    _check_side(side)
    return quotient_right(h, a, b) if side == "right" else quotient_left(h, a, b)


def enumerate_solutions(h: HeapCarrier, a, b, side: str) -> SolutionSet:
    """All solutions in the carrier and the ones dominating every solution"""
    _check_side(side)
    solutions = tuple(x for x in exhaustive_carrier(h) if _solves(h, a, b, x, side))
    maxima = tuple(m for m in solutions if all(h.le(s, m) for s in solutions))
    return SolutionSet(a=a, b=b, side=side, solutions=solutions, maxima=maxima)


def verify_quotient(h: HeapCarrier, a, b, side: str) -> bool:
    """Closed form solves the inequality, dominates every solution and matches a maximum"""
    q = closed_form(h, a, b, side)
    found = enumerate_solutions(h, a, b, side)
    if not _solves(h, a, b, q, side):
        return False
    if not all(h.le(s, q) for s in found.solutions):
        return False
    return any(equivalent(h, q, m) for m in found.maxima)


@dataclass
class QuotientAudit:
    """Result of verifying the closed form over every (a, b, side)"""

    carrier: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self, render=repr) -> dict:
        return {
            "carrier": self.carrier,
            "checked": self.checked,
            "ok": self.ok,
            "failures": [
                {"a": render(a), "b": render(b), "side": side} for a, b, side in self.failures
            ],
        }


def verify_all_quotients(h: HeapCarrier, sides=SIDES, witness_cap: Optional[int] = None) -> QuotientAudit:
    """verify_quotient on every pair of the carrier, for every requested side"""
    carrier = exhaustive_carrier(h)
    audit = QuotientAudit(carrier=h.name)
    for side in sides:
        for a, b in itertools.product(carrier, repeat=2):
            audit.checked += 1
            if not verify_quotient(h, a, b, side):
                if witness_cap is None or len(audit.failures) < witness_cap:
                    audit.failures.append((a, b, side))
    if not audit.ok:
        logger.warning("%s: %d quotients contradicted by the oracle", h.name, len(audit.failures))
    return audit


def verify_adjunction(h: HeapCarrier, witness_cap: Optional[int] = None) -> list:
    """Triples (a, x, b) where mu(a, x) <= b and x <= a-quotient-b disagree (either side)"""
    carrier = exhaustive_carrier(h)
    failures = []
    for a, b in itertools.product(carrier, repeat=2):
        right = quotient_right(h, a, b)
        left = quotient_left(h, a, b)
        for x in carrier:
            if h.le(h.mu(a, x), b) != h.le(x, right):
                failures.append(("right", a, x, b))
            if h.le(h.mu(x, a), b) != h.le(x, left):
                failures.append(("left", a, x, b))
            if witness_cap is not None and len(failures) >= witness_cap:
                return failures[:witness_cap]
    return failures


@dataclass
class PointwiseReport:
    """Word-level evidence for a language inequality mu(A, Z) <= B"""

    bound: int
    words_checked: int = 0
    unsolved: list = field(default_factory=list)
    addable: list = field(default_factory=list)

    @property
    def solves(self) -> bool:
        return not self.unsolved

    @property
    def maximal(self) -> bool:
        return self.solves and not self.addable

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "words_checked": self.words_checked,
            "solves": self.solves,
            "maximal": self.maximal,
            "unsolved_words": [list(w) for w in self.unsolved],
            "addable_words": [list(w) for w in self.addable],
        }


def pointwise_report(
    sieve: SievedHeap,
    a: SievedElement,
    b: SievedElement,
    z: SievedElement,
    bound: int,
    witness_cap: int = 10,
) -> PointwiseReport:
    """
    Check mu(A, Z) <= B on every word of length <= bound over Z's alphabet,
    and that no word outside Z could be added without breaking it.
    Z must live at the join of the indices of A and B.
    """
    top = sieve.join(sieve.join(a.index, b.index), z.index)
    if top != z.index:
        raise ValueError("Z must live at the join of the indices of A and B")
    a_up = sieve.concretize(a, top).value
    b_up = sieve.concretize(b, top).value
    report = PointwiseReport(bound=bound)
    for word in all_words(z.value.alphabet, bound):
        report.words_checked += 1
        # mu is intersection after concretization, so a word breaks the
        # inequality exactly when it is in A and outside B
        breaks = contains(a_up, word) and not contains(b_up, word)
        if contains(z.value, word):
            if breaks and len(report.unsolved) < witness_cap:
                report.unsolved.append(word)
        elif not breaks and len(report.addable) < witness_cap:
            report.addable.append(word)
    return report


def pointwise_maximality(sieve: SievedHeap, a, b, z, bound: int) -> bool:
    """True iff Z solves mu(A, Z) <= B up to the bound and no bounded word can be added"""
    return pointwise_report(sieve, a, b, z, bound).maximal
