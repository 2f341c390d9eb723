"""
Sieved heaps: a family of heaps indexed by a finite set-union semilattice,
with concretization maps from every index into every larger one

Elements of the composite heap carry their index. Binary operations move
both operands to the join of their indices and operate there; the preorder
is decided at the join as well (the triangle law makes the join a sufficient
witness for the existential in the definition).
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional

from config.settings import AXIOM_CHECK_CONFIG
from services.heap_service import AxiomReport, HeapCarrier, guarded, check_axioms, equivalent
from utils.errors import UnregisteredAlphabetError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SievedElement:
    index: frozenset
    value: Any


@dataclass(frozen=True)
class SievedHeap:
    """
    ids: registered identifiers in registration order (the semilattice generators)
    heap_at: index -> heap carrier of that index
    concretize_value: (value, source index, target index) -> value at target
    """

    name: str
    ids: tuple
    heap_at: Callable[[frozenset], HeapCarrier]
    concretize_value: Callable[[Any, frozenset, frozenset], Any]

    def index(self, *ids) -> frozenset:
        x = frozenset(ids)
        self.check_index(x)
        return x

    def check_index(self, x: frozenset) -> None:
        if not x:
            raise UnregisteredAlphabetError("a sieve index must name at least one id")
        unknown = set(x) - set(self.ids)
        if unknown:
            raise UnregisteredAlphabetError(f"unregistered ids {sorted(unknown)} in sieve '{self.name}'")

    def join(self, x: frozenset, y: frozenset) -> frozenset:
        self.check_index(x)
        self.check_index(y)
        return x | y

    def ordered(self, x: frozenset) -> list:
        """Index ids in registration order"""
        return [i for i in self.ids if i in x]

    def indices(self) -> list:
        """Every nonempty index, smallest first, in registration order"""
        out = []
        for size in range(1, len(self.ids) + 1):
            out.extend(frozenset(c) for c in itertools.combinations(self.ids, size))
        return out

    def element(self, value, *ids) -> SievedElement:
        return SievedElement(self.index(*ids), value)

    def concretize(self, element: SievedElement, target: frozenset) -> SievedElement:
        self.check_index(element.index)
        self.check_index(target)
        if not element.index <= target:
            raise ValueError(f"cannot concretize from {self.ordered(element.index)} to {self.ordered(target)}")
        return SievedElement(target, self.concretize_value(element.value, element.index, target))

    def render(self, element: SievedElement):
        return {"index": self.ordered(element.index), "value": self.heap_at(element.index).render(element.value)}


def single_index_sieve(h: HeapCarrier, index_id: str = "only") -> SievedHeap:
    """Any heap as a degenerate sieve with one index and identity concretization"""
    return SievedHeap(
        name=f"{h.name}@{index_id}",
        ids=(index_id,),
        heap_at=lambda index: h,
        concretize_value=lambda value, source, target: value,
    )


def sieved_le(s: SievedHeap, a: SievedElement, b: SievedElement) -> bool:
    top = s.join(a.index, b.index)
    return s.heap_at(top).le(s.concretize(a, top).value, s.concretize(b, top).value)


def sieved_mu(s: SievedHeap, a: SievedElement, b: SievedElement) -> SievedElement:
    top = s.join(a.index, b.index)
    return SievedElement(top, s.heap_at(top).mu(s.concretize(a, top).value, s.concretize(b, top).value))


def sieved_gamma(s: SievedHeap, a: SievedElement) -> SievedElement:
    s.check_index(a.index)
    return SievedElement(a.index, s.heap_at(a.index).gamma(a.value))


def sieved_tau(s: SievedHeap, a: SievedElement, b: SievedElement) -> SievedElement:
    top = s.join(a.index, b.index)
    h = s.heap_at(top)
    left, right = s.concretize(a, top).value, s.concretize(b, top).value
    return SievedElement(top, h.gamma(h.mu(h.gamma(left), h.gamma(right))))


def as_heap(s: SievedHeap, indices: Optional[Iterable[frozenset]] = None) -> HeapCarrier:
    """The composite heap; its enumeration is the union of the per-index enumerations"""
    chosen = list(indices) if indices is not None else s.indices()

    def elements():
        for x in chosen:
            for value in s.heap_at(x).enumerate():
                yield SievedElement(x, value)

    return HeapCarrier(
        name=s.name,
        le=lambda a, b: sieved_le(s, a, b),
        mu=lambda a, b: sieved_mu(s, a, b),
        gamma=lambda a: sieved_gamma(s, a),
        elements=elements,
        render=s.render,
    )


def check_concretizations(
    s: SievedHeap, indices: Optional[Iterable[frozenset]] = None, witness_cap: Optional[int] = None
) -> AxiomReport:
    """Identity, triangle and homomorphism laws of the concretization maps"""
    cap = witness_cap if witness_cap is not None else AXIOM_CHECK_CONFIG["witness_cap"]
    chosen = list(indices) if indices is not None else s.indices()
    report = AxiomReport(carrier=s.name, witness_cap=cap)
    carriers = {x: s.heap_at(x).enumerate() for x in chosen}

    def lift(value, source, target):
        return s.concretize_value(value, source, target)

    for x in chosen:
        hx = s.heap_at(x)
        for a in carriers[x]:
            guarded(report, "identity", lambda: equivalent(hx, lift(a, x, x), a), a)

    for x, y, z in itertools.product(chosen, repeat=3):
        xy, xyz = x | y, x | y | z
        if xy == x or xyz == xy:
            continue
        hz = s.heap_at(xyz)
        for a in carriers[x]:
            guarded(
                report,
                "triangle",
                lambda: equivalent(hz, lift(lift(a, x, xy), xy, xyz), lift(a, x, xyz)),
                a,
            )

    for x, t in itertools.product(chosen, repeat=2):
        if not x < t:
            continue
        hx, ht = s.heap_at(x), s.heap_at(t)
        for a, b in itertools.product(carriers[x], repeat=2):
            if hx.le(a, b):
                guarded(report, "hom-order", lambda: ht.le(lift(a, x, t), lift(b, x, t)), a, b)
            guarded(
                report,
                "hom-mu",
                lambda: equivalent(ht, lift(hx.mu(a, b), x, t), ht.mu(lift(a, x, t), lift(b, x, t))),
                a,
                b,
            )
        for a in carriers[x]:
            guarded(report, "hom-gamma", lambda: equivalent(ht, lift(hx.gamma(a), x, t), ht.gamma(lift(a, x, t))), a)
    return report


def check_sieve(
    s: SievedHeap, indices: Optional[Iterable[frozenset]] = None, witness_cap: Optional[int] = None
) -> AxiomReport:
    """Concretization laws plus the heap axioms of the composite"""
    chosen = list(indices) if indices is not None else s.indices()
    report = check_concretizations(s, chosen, witness_cap)
    report.merge(check_axioms(as_heap(s, chosen), witness_cap=witness_cap))
    logger.debug("sieve %s checked: %d violations", s.name, report.violation_count)
    return report
