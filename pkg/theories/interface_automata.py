"""
Interface automata: product, compatibility, composition, mirror,
alternating-simulation refinement, and the heap operations built on them

Heap structure: mu is parallel composition, gamma is the mirror (inputs and
outputs swapped), the preorder is refinement. Hence
- quotient(P, Q)    = mirror(compose(mirror P, Q))       largest R with Q || R <= P
- merge(P, Q)       = mirror(compose(mirror P, mirror Q))
- separation(P, Q)  = compose(P, mirror Q)

Product states are ordered pairs (v, u). Compatibility is the backward
fixpoint over steps the environment cannot block (outputs and hidden steps).
"""
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Optional

from services.heap_service import HeapCarrier
from utils.errors import (
    IncompatibleError,
    InvalidAutomatonError,
    NotComposableError,
    QuotientUndefinedError,
    UndefinedResultError,
    ValidationError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InterfaceAutomaton:
    states: frozenset
    initial: frozenset
    inputs: frozenset
    outputs: frozenset
    hidden: frozenset
    steps: frozenset  # {(source, action, target)}

    def __post_init__(self):
        if self.inputs & self.outputs or self.inputs & self.hidden or self.outputs & self.hidden:
            raise InvalidAutomatonError("input, output and hidden actions must be disjoint")
        if len(self.initial) > 1:
            raise InvalidAutomatonError("an interface automaton has at most one initial state")
        if not self.initial <= self.states:
            raise InvalidAutomatonError("initial state is not a state")
        actions = self.actions
        for source, action, target in sorted(self.steps, key=repr):
            if source not in self.states or target not in self.states:
                raise InvalidAutomatonError(f"step {(source, action, target)} leaves the state set")
            if action not in actions:
                raise InvalidAutomatonError(f"step {(source, action, target)} uses an undeclared action")

    @property
    def actions(self) -> frozenset:
        return self.inputs | self.outputs | self.hidden

    @property
    def empty(self) -> bool:
        return not self.initial

    @cached_property
    def successors(self) -> dict:
        """state -> action -> frozenset of targets"""
        table = {v: {} for v in self.states}
        for source, action, target in self.steps:
            table[source].setdefault(action, set()).add(target)
        return {v: {a: frozenset(ts) for a, ts in row.items()} for v, row in table.items()}

    def enabled(self, v) -> frozenset:
        return frozenset(self.successors[v])

    def enabled_inputs(self, v) -> frozenset:
        return self.enabled(v) & self.inputs

    def enabled_outputs(self, v) -> frozenset:
        return self.enabled(v) & self.outputs


def make_automaton(
    states: Iterable,
    initial: Iterable = (),
    inputs: Iterable = (),
    outputs: Iterable = (),
    hidden: Iterable = (),
    steps: Iterable = (),
) -> InterfaceAutomaton:
    """Build an automaton from plain iterables"""
    return InterfaceAutomaton(
        states=frozenset(states),
        initial=frozenset(initial),
        inputs=frozenset(inputs),
        outputs=frozenset(outputs),
        hidden=frozenset(hidden),
        steps=frozenset(tuple(step) for step in steps),
    )


def trivial_automaton(state: Hashable = 0) -> InterfaceAutomaton:
    """One state, no actions: the identity of composition"""
    return make_automaton(states=[state], initial=[state])


def rename_states(p: InterfaceAutomaton, rename: Callable) -> InterfaceAutomaton:
    """Apply rename to every state, keeping actions"""
    return make_automaton(
        states=map(rename, p.states),
        initial=map(rename, p.initial),
        inputs=p.inputs,
        outputs=p.outputs,
        hidden=p.hidden,
        steps=((rename(s), a, rename(t)) for s, a, t in p.steps),
    )


def swap_pair(state: tuple) -> tuple:
    """(v, u) -> (u, v)"""
    return (state[1], state[0])


def composable(p: InterfaceAutomaton, q: InterfaceAutomaton) -> bool:
    """No hidden action of one is an action of the other and no output is shared"""
    return not (p.hidden & q.actions or q.hidden & p.actions or p.outputs & q.outputs)


def shared_actions(p: InterfaceAutomaton, q: InterfaceAutomaton) -> frozenset:
    """Actions that are an input of one and an output of the other"""
    return (p.inputs & q.outputs) | (p.outputs & q.inputs)


def _require_composable(p: InterfaceAutomaton, q: InterfaceAutomaton) -> None:
    if not composable(p, q):
        raise NotComposableError(
            "automata are not composable: "
            f"hidden/actions {sorted(map(str, (p.hidden & q.actions) | (q.hidden & p.actions)))}, "
            f"common outputs {sorted(map(str, p.outputs & q.outputs))}"
        )


def product(p: InterfaceAutomaton, q: InterfaceAutomaton) -> InterfaceAutomaton:
    """Synchronised product; shared actions become hidden"""
    _require_composable(p, q)
    shared = shared_actions(p, q)
    inputs = (p.inputs | q.inputs) - shared
    outputs = (p.outputs | q.outputs) - shared
    hidden = (p.hidden | q.hidden | shared) - (inputs | outputs)

    steps = set()
    for v, a, v2 in p.steps:
        if a not in q.actions:
            steps.update(((v, u), a, (v2, u)) for u in q.states)
    for u, a, u2 in q.steps:
        if a not in p.actions:
            steps.update(((v, u), a, (v, u2)) for v in p.states)
    common = p.actions & q.actions
    for v, a, v2 in p.steps:
        if a in common:
            for u in q.states:
                steps.update(((v, u), a, (v2, u2)) for u2 in q.successors[u].get(a, ()))

    return InterfaceAutomaton(
        states=frozenset((v, u) for v in p.states for u in q.states),
        initial=frozenset((v, u) for v in p.initial for u in q.initial),
        inputs=inputs,
        outputs=outputs,
        hidden=hidden,
        steps=frozenset(steps),
    )


def illegal_states(p: InterfaceAutomaton, q: InterfaceAutomaton) -> frozenset:
    """Pairs where one side offers a shared output the other cannot accept"""
    _require_composable(p, q)
    shared = shared_actions(p, q)
    illegal = set()
    for v in p.states:
        p_out, p_in = p.enabled_outputs(v) & shared, p.enabled_inputs(v)
        for u in q.states:
            q_out, q_in = q.enabled_outputs(u) & shared, q.enabled_inputs(u)
            if p_out - q_in or q_out - p_in:
                illegal.add((v, u))
    return frozenset(illegal)


def incompatible_states(p: InterfaceAutomaton, q: InterfaceAutomaton) -> frozenset:
    """Least superset of the illegal pairs closed backwards under output and hidden steps"""
    pq = product(p, q)
    controlled = pq.outputs | pq.hidden
    predecessors = {}
    for source, action, target in pq.steps:
        if action in controlled:
            predecessors.setdefault(target, set()).add(source)

    illegal = illegal_states(p, q)
    bad = set(illegal)
    frontier = deque(bad)
    while frontier:
        state = frontier.popleft()
        for source in predecessors.get(state, ()):
            if source not in bad:
                bad.add(source)
                frontier.append(source)
    logger.debug("%d illegal, %d incompatible of %d product states", len(illegal), len(bad), len(pq.states))
    return frozenset(bad)


def compatible(p: InterfaceAutomaton, q: InterfaceAutomaton) -> bool:
    """The initial pair is compatible; vacuous without initial states"""
    bad = incompatible_states(p, q)
    return all((v, u) not in bad for v in p.initial for u in q.initial)


def compose(p: InterfaceAutomaton, q: InterfaceAutomaton) -> InterfaceAutomaton:
    """Product restricted to compatible states; undefined when the initial state is incompatible"""
    pq = product(p, q)
    bad = incompatible_states(p, q)
    if pq.initial & bad:
        raise IncompatibleError(f"initial product state {next(iter(pq.initial))!r} is incompatible")
    good = pq.states - bad
    return InterfaceAutomaton(
        states=good,
        initial=pq.initial & good,
        inputs=pq.inputs,
        outputs=pq.outputs,
        hidden=pq.hidden,
        steps=frozenset(step for step in pq.steps if step[0] in good and step[2] in good),
    )


def mirror(p: InterfaceAutomaton) -> InterfaceAutomaton:
    """Swap inputs and outputs"""
    return InterfaceAutomaton(
        states=p.states,
        initial=p.initial,
        inputs=p.outputs,
        outputs=p.inputs,
        hidden=p.hidden,
        steps=p.steps,
    )


def _require_state(p: InterfaceAutomaton, v) -> None:
    if v not in p.states:
        raise ValidationError(f"unknown state {v!r}")


def eps_closure(p: InterfaceAutomaton, v) -> frozenset:
    """States reachable from v through hidden steps, v included"""
    _require_state(p, v)
    closure = {v}
    frontier = [v]
    while frontier:
        u = frontier.pop()
        for action, targets in p.successors[u].items():
            if action in p.hidden:
                for target in targets - closure:
                    closure.add(target)
                    frontier.append(target)
    return frozenset(closure)


def ext_enabled(p: InterfaceAutomaton, v) -> tuple:
    """(externally enabled inputs, externally enabled outputs) at v"""
    closure = eps_closure(p, v)
    enabled = frozenset().union(*(p.enabled(u) for u in closure))
    return enabled & p.inputs, enabled & p.outputs


def ext_dest(p: InterfaceAutomaton, v, action) -> frozenset:
    """Targets of an externally enabled action from any state in the closure of v"""
    ext_in, ext_out = ext_enabled(p, v)
    if action not in ext_in | ext_out:
        raise ValidationError(f"action {action!r} is not externally enabled at {v!r}")
    return frozenset().union(*(p.successors[u].get(action, frozenset()) for u in eps_closure(p, v)))


class _External:
    """Closure, externally enabled sets and destinations of every state, computed once"""

    def __init__(self, p: InterfaceAutomaton):
        self.inputs = {}
        self.outputs = {}
        self.dest = {}
        for v in p.states:
            closure = eps_closure(p, v)
            ext_in, ext_out = ext_enabled(p, v)
            self.inputs[v] = ext_in
            self.outputs[v] = ext_out
            for a in ext_in | ext_out:
                self.dest[v, a] = frozenset().union(*(p.successors[u].get(a, frozenset()) for u in closure))


def _pair_holds(qx: _External, px: _External, relation: set, u, v) -> bool:
    if not (px.inputs[v] <= qx.inputs[u] and qx.outputs[u] <= px.outputs[v]):
        return False
    for a in qx.outputs[u]:
        for u2 in qx.dest[u, a]:
            if not any((u2, v2) in relation for v2 in px.dest[v, a]):
                return False
    for a in px.inputs[v]:
        for v2 in px.dest[v, a]:
            if not any((u2, v2) in relation for u2 in qx.dest[u, a]):
                return False
    return True


def alternating_simulation(q: InterfaceAutomaton, p: InterfaceAutomaton) -> frozenset:
    """Greatest alternating simulation from q to p, as a set of (u, v) pairs"""
    qx, px = _External(q), _External(p)
    relation = {
        (u, v)
        for u in q.states
        for v in p.states
        if px.inputs[v] <= qx.inputs[u] and qx.outputs[u] <= px.outputs[v]
    }
    rounds = 0
    while True:
        rounds += 1
        dropped = {(u, v) for u, v in relation if not _pair_holds(qx, px, relation, u, v)}
        if not dropped:
            break
        relation -= dropped
    logger.debug("alternating simulation stable after %d rounds with %d pairs", rounds, len(relation))
    return frozenset(relation)


def is_alternating_simulation(q: InterfaceAutomaton, p: InterfaceAutomaton, relation: Iterable) -> bool:
    """Check one relation against the alternating simulation conditions"""
    relation = set(relation)
    qx, px = _External(q), _External(p)
    return all(_pair_holds(qx, px, relation, u, v) for u, v in relation)


def pair_extends_simulation(q: InterfaceAutomaton, p: InterfaceAutomaton, relation: Iterable, u, v) -> bool:
    """Whether (u, v) satisfies both simulation conditions with respect to relation | {(u, v)}"""
    relation = set(relation) | {(u, v)}
    return _pair_holds(_External(q), _External(p), relation, u, v)


def refines(q: InterfaceAutomaton, p: InterfaceAutomaton) -> bool:
    """q <= p: p's inputs kept, no new outputs, initial states related"""
    if not (p.inputs <= q.inputs and q.outputs <= p.outputs):
        return False
    if not q.initial or not p.initial:
        return False
    relation = alternating_simulation(q, p)
    return any((u, v) in relation for u in q.initial for v in p.initial)


def equivalent(p: InterfaceAutomaton, q: InterfaceAutomaton) -> bool:
    """Refinement in both directions"""
    return refines(p, q) and refines(q, p)


def ia_quotient(p: InterfaceAutomaton, q: InterfaceAutomaton) -> InterfaceAutomaton:
    """Largest R with compose(q, R) <= p"""
    try:
        return mirror(compose(mirror(p), q))
    except UndefinedResultError as e:
        raise QuotientUndefinedError(f"quotient undefined for this pair: {e}") from e


def ia_merge(p: InterfaceAutomaton, q: InterfaceAutomaton) -> InterfaceAutomaton:
    """mirror(compose(mirror P, mirror Q))"""
    return mirror(compose(mirror(p), mirror(q)))


def ia_separation(p: InterfaceAutomaton, q: InterfaceAutomaton) -> InterfaceAutomaton:
    """compose(P, mirror Q)"""
    return compose(p, mirror(q))


def _from_json(value):
    if isinstance(value, list):
        return tuple(_from_json(v) for v in value)
    return value


def _to_json(value):
    if isinstance(value, tuple):
        return [_to_json(v) for v in value]
    return value


def _ordered(values: Iterable) -> list:
    return sorted((_to_json(v) for v in values), key=repr)


def to_dict(p: InterfaceAutomaton) -> dict:
    """JSON document; tuple states become lists"""
    return {
        "states": _ordered(p.states),
        "initial": _ordered(p.initial),
        "inputs": _ordered(p.inputs),
        "outputs": _ordered(p.outputs),
        "hidden": _ordered(p.hidden),
        "steps": sorted(([_to_json(s), a, _to_json(t)] for s, a, t in p.steps), key=repr),
    }


def from_dict(data: dict) -> InterfaceAutomaton:
    """Inverse of to_dict"""
    try:
        return make_automaton(
            states=(_from_json(v) for v in data["states"]),
            initial=(_from_json(v) for v in data.get("initial", [])),
            inputs=data.get("inputs", []),
            outputs=data.get("outputs", []),
            hidden=data.get("hidden", []),
            steps=((_from_json(s), a, _from_json(t)) for s, a, t in data.get("steps", [])),
        )
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidAutomatonError(f"malformed interface automaton document: {e}") from e


def ia_heap(sampler: Optional[Callable] = None) -> HeapCarrier:
    """Refinement, composition and mirror; no finite enumeration, sampled checking only"""
    return HeapCarrier(
        name="ia",
        le=refines,
        mu=compose,
        gamma=mirror,
        sampler=sampler,
        render=to_dict,
    )
