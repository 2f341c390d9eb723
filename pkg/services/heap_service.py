"""
Preorder heap core: carrier interface, target multiplication, closed-form
quotients and executable axiom checkers

A heap carrier bundles a preorder `le`, a source multiplication `mu` and an
involution `gamma` over one element type. Every "equals" below means mutual
refinement (a <= b and b <= a), since the preorder need not be antisymmetric.

Closed forms (for a fixed `a`):
- largest x with mu(a, x) <= b  is  tau(b, gamma a)      (quotient_right)
- largest x with mu(x, a) <= b  is  tau(gamma a, b)      (quotient_left)
- smallest x with b <= tau(a, x)  is  mu(b, gamma a)     (smallest_tau_solution)
"""
import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional

from config.settings import AXIOM_CHECK_CONFIG
from utils.errors import MissingEnumerationError, UndefinedResultError

logger = logging.getLogger(__name__)

AXIOMS = (
    "reflexive",
    "transitive",
    "A1",
    "antitone",
    "monotone-left",
    "monotone-right",
    "A2a",
    "A2b",
)


@dataclass(frozen=True)
class HeapCarrier:
    """A theory instance: preorder, source multiplication and involution"""

    name: str
    le: Callable[[Any, Any], bool]
    mu: Callable[[Any, Any], Any]
    gamma: Callable[[Any], Any]
    elements: Optional[Callable[[], Iterable[Any]]] = None
    sampler: Optional[Callable[[random.Random], Any]] = None
    render: Callable[[Any], Any] = repr

    @property
    def enumerable(self) -> bool:
        return self.elements is not None

    def enumerate(self) -> tuple:
        if self.elements is None:
            raise MissingEnumerationError(f"heap '{self.name}' has no finite enumeration")
        return tuple(self.elements())


def equivalent(h: HeapCarrier, a, b) -> bool:
    """a and b refine each other"""
    return h.le(a, b) and h.le(b, a)


def tau(h: HeapCarrier, a, b):
    """Target multiplication: gamma(mu(gamma a, gamma b))"""
    return h.gamma(h.mu(h.gamma(a), h.gamma(b)))


def quotient_right(h: HeapCarrier, a, b):
    """Largest x such that mu(a, x) <= b"""
    return tau(h, b, h.gamma(a))


def quotient_left(h: HeapCarrier, a, b):
    """Largest x such that mu(x, a) <= b"""
    return tau(h, h.gamma(a), b)


def smallest_tau_solution(h: HeapCarrier, a, b):
    """Smallest x such that b <= tau(a, x); the left adjoint of tau(a, -) applied to b"""
    return h.mu(b, h.gamma(a))


def isolate_unknown_check(h: HeapCarrier, a, x, y) -> bool:
    """Whether y <= a/x holds exactly when x <= y\\a for this triple"""
    return h.le(y, quotient_right(h, x, a)) == h.le(x, quotient_left(h, y, a))


def de_morgan_holds(h: HeapCarrier, a, b) -> bool:
    """Both duality identities between mu and tau for the pair (a, b)"""
    forward = equivalent(h, tau(h, a, b), h.gamma(h.mu(h.gamma(a), h.gamma(b))))
    backward = equivalent(h, h.mu(a, b), h.gamma(tau(h, h.gamma(a), h.gamma(b))))
    return forward and backward


def flip_heap(h: HeapCarrier) -> HeapCarrier:
    """The same carrier with mu(a, b) replaced by mu(b, a)"""
    return HeapCarrier(
        name=f"{h.name}^op",
        le=h.le,
        mu=lambda a, b: h.mu(b, a),
        gamma=h.gamma,
        elements=h.elements,
        sampler=h.sampler,
        render=h.render,
    )


@dataclass(frozen=True)
class Violation:
    axiom: str
    witnesses: tuple

    def to_dict(self, render=repr) -> dict:
        return {"axiom": self.axiom, "witnesses": [render(w) for w in self.witnesses]}


@dataclass
class AxiomReport:
    """Violations found by a checker; empty means every checked instance holds"""

    carrier: str
    violations: list = field(default_factory=list)
    undefined: list = field(default_factory=list)
    checked: dict = field(default_factory=dict)
    violation_count: int = 0
    witness_cap: int = 10

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def add(self, axiom: str, *witnesses) -> None:
        self.violation_count += 1
        if len(self.violations) < self.witness_cap:
            self.violations.append(Violation(axiom, tuple(witnesses)))

    def add_undefined(self, axiom: str, error: Exception, *witnesses) -> None:
        if len(self.undefined) < self.witness_cap:
            self.undefined.append((axiom, type(error).__name__, tuple(witnesses)))

    def count(self, axiom: str, n: int = 1) -> None:
        self.checked[axiom] = self.checked.get(axiom, 0) + n

    def axioms_violated(self) -> set:
        return {v.axiom for v in self.violations}

    def merge(self, other: "AxiomReport") -> None:
        for violation in other.violations:
            self.add(violation.axiom, *violation.witnesses)
        self.violation_count += other.violation_count - len(other.violations)
        for axiom, n in other.checked.items():
            self.count(axiom, n)
        self.undefined.extend(other.undefined[: max(0, self.witness_cap - len(self.undefined))])

    def to_dict(self, render=repr) -> dict:
        return {
            "carrier": self.carrier,
            "ok": self.ok,
            "violation_count": self.violation_count,
            "violations": [v.to_dict(render) for v in self.violations],
            "undefined": [
                {"axiom": axiom, "error": error, "witnesses": [render(w) for w in witnesses]}
                for axiom, error, witnesses in self.undefined
            ],
            "checked": dict(sorted(self.checked.items())),
        }


class _Memo:
    """Caches le/mu/gamma of a carrier; elements must be hashable"""

    def __init__(self, h: HeapCarrier):
        self.h = h
        self._le = {}
        self._mu = {}
        self._gamma = {}

    def le(self, a, b) -> bool:
        key = (a, b)
        if key not in self._le:
            self._le[key] = bool(self.h.le(a, b))
        return self._le[key]

    def mu(self, a, b):
        key = (a, b)
        if key not in self._mu:
            self._mu[key] = self.h.mu(a, b)
        return self._mu[key]

    def gamma(self, a):
        if a not in self._gamma:
            self._gamma[a] = self.h.gamma(a)
        return self._gamma[a]


def carrier_elements(h: HeapCarrier, seed: Optional[int] = None, samples: Optional[int] = None) -> tuple:
    """The finite enumeration, or a seeded sample when the carrier has none"""
    if h.enumerable:
        return h.enumerate()
    if h.sampler is None:
        raise MissingEnumerationError(f"heap '{h.name}' has neither an enumeration nor a sampler")
    rng = random.Random(seed if seed is not None else AXIOM_CHECK_CONFIG["seed"])
    count = samples if samples is not None else AXIOM_CHECK_CONFIG["sample_size"]
    drawn = []
    for _ in range(count):
        element = h.sampler(rng)
        if element not in drawn:
            drawn.append(element)
    return tuple(drawn)


def guarded(report: AxiomReport, axiom: str, check: Callable[[], bool], *witnesses) -> None:
    report.count(axiom)
    try:
        holds = check()
    except UndefinedResultError as e:
        report.add_undefined(axiom, e, *witnesses)
        return
    if not holds:
        report.add(axiom, *witnesses)


def check_axioms(
    h: HeapCarrier,
    *,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
    witness_cap: Optional[int] = None,
    elements: Optional[Iterable] = None,
) -> AxiomReport:
    """Check the preorder, monotonicity, A1, A2a and A2b on every enumerated instance"""
    cap = witness_cap if witness_cap is not None else AXIOM_CHECK_CONFIG["witness_cap"]
    carrier = tuple(elements) if elements is not None else carrier_elements(h, seed, samples)
    memo = _Memo(h)
    report = AxiomReport(carrier=h.name, witness_cap=cap)
    logger.debug("checking axioms of %s over %d elements", h.name, len(carrier))

    for a in carrier:
        guarded(report, "reflexive", lambda: memo.le(a, a), a)
        guarded(report, "A1", lambda: equivalent(memo, memo.gamma(memo.gamma(a)), a), a)

    for a, b in itertools.product(carrier, repeat=2):
        if memo.le(a, b):
            guarded(report, "antitone", lambda: memo.le(memo.gamma(b), memo.gamma(a)), a, b)
            for c in carrier:
                if memo.le(b, c):
                    guarded(report, "transitive", lambda: memo.le(a, c), a, b, c)
                guarded(report, "monotone-left", lambda: memo.le(memo.mu(a, c), memo.mu(b, c)), a, b, c)
                guarded(report, "monotone-right", lambda: memo.le(memo.mu(c, a), memo.mu(c, b)), a, b, c)
        guarded(
            report,
            "A2a",
            lambda: memo.le(memo.mu(a, memo.gamma(memo.mu(memo.gamma(b), a))), b),
            a,
            b,
        )
        guarded(
            report,
            "A2b",
            lambda: memo.le(memo.mu(memo.gamma(memo.mu(a, memo.gamma(b))), a), b),
            a,
            b,
        )

    if not report.ok:
        logger.warning("%s: %d axiom violations", h.name, report.violation_count)
    return report


@dataclass
class IdentityProbe:
    """Outcome of searching a one-sided identity and confirming the corollary"""

    operation: str
    identity: Any
    dual_identity: Any
    report: AxiomReport

    def to_dict(self, render=repr) -> dict:
        return {
            "operation": self.operation,
            "identity": render(self.identity),
            "dual_identity": render(self.dual_identity),
            "report": self.report.to_dict(render),
        }


def identity_probe(
    h: HeapCarrier, operation: str = "mu", witness_cap: Optional[int] = None
) -> Optional[IdentityProbe]:
    """
    Find a left identity for mu (or tau) and confirm it is two-sided, and that
    its involution is a two-sided identity for the other multiplication.
    Returns None when no left identity exists.
    """
    cap = witness_cap if witness_cap is not None else AXIOM_CHECK_CONFIG["witness_cap"]
    carrier = h.enumerate()
    memo = _Memo(h)

    def times(a, b):
        return memo.mu(a, b) if operation == "mu" else tau(memo, a, b)

    def dual_times(a, b):
        return tau(memo, a, b) if operation == "mu" else memo.mu(a, b)

    for e in carrier:
        if all(equivalent(memo, times(e, x), x) for x in carrier):
            dual = memo.gamma(e)
            report = AxiomReport(carrier=h.name, witness_cap=cap)
            for x in carrier:
                guarded(report, f"{operation}-right-identity", lambda: equivalent(memo, times(x, e), x), e, x)
                guarded(report, "dual-left-identity", lambda: equivalent(memo, dual_times(dual, x), x), dual, x)
                guarded(report, "dual-right-identity", lambda: equivalent(memo, dual_times(x, dual), x), dual, x)
            return IdentityProbe(operation=operation, identity=e, dual_identity=dual, report=report)
    return None
