"""
Seeded interface-automata corpora and the audits run over them

Generators draw small random automata (bounded states and actions per kind);
mutations derive automata that refine their source (fewer output steps, more
input steps), so refinement chains exist in every corpus. Each audit returns
an AxiomReport whose violations carry the witnessing automata; nothing here
raises on a failed law.
"""
import logging
import random
from typing import Iterable, Optional

from config.settings import AXIOM_CHECK_CONFIG, IA_SAMPLE_CONFIG
from services.heap_service import AxiomReport, guarded
from theories.interface_automata import (
    InterfaceAutomaton,
    compose,
    ia_merge,
    ia_quotient,
    ia_separation,
    make_automaton,
    mirror,
    refines,
    to_dict,
    trivial_automaton,
)
from utils.errors import UndefinedResultError

logger = logging.getLogger(__name__)

ACTION_POOL = ("a", "b", "c", "d", "e", "f")
ENVIRONMENT_POOL = ("u", "v", "w")
KINDS = ("inputs", "outputs", "hidden")


def _cap(witness_cap: Optional[int]) -> int:
    return witness_cap if witness_cap is not None else AXIOM_CHECK_CONFIG["witness_cap"]


def random_automaton(
    rng: random.Random,
    *,
    prefix: str = "s",
    actions: Iterable = ACTION_POOL,
    roles: Optional[dict] = None,
    hidden: bool = True,
    deterministic: bool = False,
    max_states: Optional[int] = None,
    max_actions: Optional[int] = None,
    step_density: float = 0.45,
) -> InterfaceAutomaton:
    """
    Draw an automaton with one initial state. Action roles are drawn from the
    pool unless `roles` fixes them as {"inputs": [...], "outputs": [...], "hidden": [...]}.
    """
    max_states = max_states or IA_SAMPLE_CONFIG["max_states"]
    max_actions = max_actions or IA_SAMPLE_CONFIG["max_actions_per_kind"]
    states = [f"{prefix}{i}" for i in range(rng.randint(1, max_states))]

    if roles is None:
        kinds = KINDS if hidden else KINDS[:2]
        weights = (2, 2, 1) if hidden else (1, 1)
        roles = {kind: [] for kind in KINDS}
        pool = list(actions)
        rng.shuffle(pool)
        for action in pool:
            if rng.random() < 0.3:
                continue
            kind = rng.choices(kinds, weights)[0]
            if len(roles[kind]) < max_actions:
                roles[kind].append(action)

    alphabet = sorted(a for kind in KINDS for a in roles.get(kind, ()))
    steps = []
    for state in states:
        for action in alphabet:
            if rng.random() < step_density:
                targets = {rng.choice(states)}
                if not deterministic and rng.random() < 0.15:
                    targets.add(rng.choice(states))
                steps.extend((state, action, target) for target in sorted(targets))

    return make_automaton(
        states=states,
        initial=states[:1],
        inputs=roles.get("inputs", ()),
        outputs=roles.get("outputs", ()),
        hidden=roles.get("hidden", ()),
        steps=steps,
    )


def environment_automaton(rng: random.Random, prefix: str = "q") -> InterfaceAutomaton:
    """Deterministic, hidden-free, over the environment pool only"""
    return random_automaton(rng, prefix=prefix, actions=ENVIRONMENT_POOL, hidden=False, deterministic=True)


def random_pairs(seed: int, size: Optional[int] = None) -> list:
    rng = random.Random(seed)
    size = size or IA_SAMPLE_CONFIG["corpus_size"]
    return [(random_automaton(rng, prefix="p"), random_automaton(rng, prefix="q")) for _ in range(size)]


def quotient_pairs(seed: int, size: Optional[int] = None) -> list:
    """(P, Q) with Q deterministic, hidden-free and sharing no action with P"""
    rng = random.Random(seed)
    size = size or IA_SAMPLE_CONFIG["corpus_size"]
    return [(random_automaton(rng, prefix="p"), environment_automaton(rng)) for _ in range(size)]


def drop_outputs(rng: random.Random, p: InterfaceAutomaton) -> InterfaceAutomaton:
    """Remove a random subset of output steps; the result refines p"""
    kept = [step for step in sorted(p.steps, key=repr) if step[1] not in p.outputs or rng.random() < 0.5]
    return make_automaton(p.states, p.initial, p.inputs, p.outputs, p.hidden, kept)


def add_inputs(rng: random.Random, p: InterfaceAutomaton, fresh: str = "x") -> InterfaceAutomaton:
    """Add input steps, sometimes on a fresh input action; the result refines p"""
    inputs = set(p.inputs)
    if not inputs or rng.random() < 0.3:
        name = fresh
        while name in p.actions:
            name += "'"
        inputs.add(name)
    states = sorted(p.states, key=repr)
    added = {(v, rng.choice(sorted(inputs)), rng.choice(states)) for v in states if rng.random() < 0.5}
    return make_automaton(p.states, p.initial, inputs, p.outputs, p.hidden, set(p.steps) | added)


def refinement_chains(seed: int, size: Optional[int] = None) -> list:
    """Groups [P, P1, P2] with P2 <= P1 <= P by construction"""
    rng = random.Random(seed)
    size = size or IA_SAMPLE_CONFIG["corpus_size"]
    chains = []
    for _ in range(size):
        base = random_automaton(rng, prefix="p")
        first = rng.choice((drop_outputs, add_inputs))(rng, base)
        second = rng.choice((drop_outputs, add_inputs))(rng, first)
        chains.append([base, first, second])
    return chains


def ia_sampler():
    return lambda rng: random_automaton(rng, prefix="s")


def audit_preorder(automata: list, witness_cap: Optional[int] = None) -> AxiomReport:
    """Reflexivity and transitivity of refines over every triple of the corpus"""
    report = AxiomReport(carrier="ia-corpus", witness_cap=_cap(witness_cap))
    n = len(automata)
    le = [[refines(automata[i], automata[j]) for j in range(n)] for i in range(n)]
    for i, p in enumerate(automata):
        if p.initial:
            guarded(report, "reflexive", lambda: le[i][i], to_dict(p))
    for i in range(n):
        for j in range(n):
            if not le[i][j]:
                continue
            for k in range(n):
                if le[j][k]:
                    report.count("transitive")
                    if not le[i][k]:
                        report.add("transitive", *(to_dict(automata[x]) for x in (i, j, k)))
    logger.debug("preorder audit over %d automata: %d violations", n, report.violation_count)
    return report


def audit_mirror(automata: list, witness_cap: Optional[int] = None) -> AxiomReport:
    """mirror is an involution and reverses refinement"""
    report = AxiomReport(carrier="ia-corpus", witness_cap=_cap(witness_cap))
    for p in automata:
        guarded(report, "involutive", lambda: mirror(mirror(p)) == p, to_dict(p))
    for q in automata:
        for p in automata:
            if refines(q, p):
                guarded(report, "antitone", lambda: refines(mirror(p), mirror(q)), to_dict(q), to_dict(p))
    return report


def audit_regularity(pairs: Iterable, witness_cap: Optional[int] = None) -> AxiomReport:
    """compose(Q, quotient(P, Q)) <= P whenever the quotient is defined"""
    report = AxiomReport(carrier="ia-corpus", witness_cap=_cap(witness_cap))
    for p, q in pairs:
        try:
            r = ia_quotient(p, q)
        except UndefinedResultError as e:
            report.add_undefined("quotient", e, to_dict(p), to_dict(q))
            continue
        guarded(report, "regularity", lambda: refines(compose(q, r), p), to_dict(p), to_dict(q), to_dict(r))
    if not report.ok:
        logger.warning("regularity audit: %d counterexamples", report.violation_count)
    return report


def _candidates(rng: random.Random, r: InterfaceAutomaton):
    roles = {"inputs": sorted(r.inputs), "outputs": sorted(r.outputs), "hidden": []}
    while True:
        pick = rng.random()
        if pick < 0.25:
            yield drop_outputs(rng, r)
        elif pick < 0.5:
            yield add_inputs(rng, r)
        else:
            yield random_automaton(rng, prefix="r", roles=roles)


def audit_maximality(
    p: InterfaceAutomaton,
    q: InterfaceAutomaton,
    seed: int,
    candidate_count: Optional[int] = None,
    max_draws: Optional[int] = None,
    witness_cap: Optional[int] = None,
    extra_candidates: Iterable = (),
) -> AxiomReport:
    """
    Every sampled R' with compose(Q, R') <= P must refine quotient(P, Q).
    Candidates are mutations of the quotient and random automata over its
    action sets; `checked["maximality"]` counts the solving candidates found.
    """
    report = AxiomReport(carrier="ia-corpus", witness_cap=_cap(witness_cap))
    wanted = candidate_count or IA_SAMPLE_CONFIG["candidate_count"]
    budget = max_draws or IA_SAMPLE_CONFIG["max_candidate_draws"]
    r = ia_quotient(p, q)
    rng = random.Random(seed)

    def consider(candidate) -> None:
        try:
            solves = refines(compose(q, candidate), p)
        except UndefinedResultError:
            return
        if solves:
            guarded(report, "maximality", lambda: refines(candidate, r), to_dict(candidate), to_dict(r))

    for candidate in extra_candidates:
        consider(candidate)
    draws = _candidates(rng, r)
    for _ in range(budget):
        if report.checked.get("maximality", 0) >= wanted:
            break
        consider(next(draws))
    logger.debug("maximality audit: %d solving candidates", report.checked.get("maximality", 0))
    return report


def audit_adjunction(triples: Iterable, witness_cap: Optional[int] = None) -> AxiomReport:
    """P <= merge(Q, X) exactly when separation(P, Q) <= X"""
    report = AxiomReport(carrier="ia-corpus", witness_cap=_cap(witness_cap))
    for p, q, x in triples:
        guarded(
            report,
            "merge-separation",
            lambda: refines(p, ia_merge(q, x)) == refines(ia_separation(p, q), x),
            to_dict(p),
            to_dict(q),
            to_dict(x),
        )
    return report


def audit_random_pairs(
    pairs: list,
    seed: int,
    candidate_count: Optional[int] = None,
    witness_cap: Optional[int] = None,
) -> dict:
    """
    Every audit over an unrestricted corpus: preorder and mirror over all the
    automata of the pairs, regularity over the pairs, and sampled maximality
    for each pair with a defined quotient (pair i draws from seed + i).
    """
    maximality = AxiomReport(carrier="ia-corpus", witness_cap=_cap(witness_cap))
    for i, (p, q) in enumerate(pairs):
        try:
            report = audit_maximality(p, q, seed + i, candidate_count=candidate_count, witness_cap=witness_cap)
        except UndefinedResultError as e:
            maximality.add_undefined("quotient", e, to_dict(p), to_dict(q))
            continue
        maximality.merge(report)
    if not maximality.ok:
        logger.warning("maximality audit: %d counterexamples over %d pairs", maximality.violation_count, len(pairs))

    automata = [automaton for pair in pairs for automaton in pair]
    return {
        "preorder": audit_preorder(automata, witness_cap),
        "mirror": audit_mirror(automata, witness_cap),
        "regularity": audit_regularity(pairs, witness_cap),
        "maximality": maximality,
    }


def merge_identity_holds(p: InterfaceAutomaton) -> bool:
    """merge(P, trivial) is equivalent to P"""
    merged = ia_merge(p, trivial_automaton())
    return refines(merged, p) and refines(p, merged)


def regularity_counterexample() -> tuple:
    """
    (P, Q) whose closed-form quotient R has compose(Q, R) not refining P:
    hiding the synchronised a leaves b as an externally enabled output at
    the initial state, which P does not offer there.
    """
    p = make_automaton(
        states=["p0", "p1", "p2"],
        initial=["p0"],
        outputs=["a", "b"],
        steps=[("p0", "a", "p1"), ("p1", "b", "p2")],
    )
    q = make_automaton(states=["q0", "q1"], initial=["q0"], inputs=["a"], steps=[("q0", "a", "q1")])
    return p, q


def maximality_counterexample() -> tuple:
    """(P, Q, R') where compose(Q, R') <= P holds but R' does not refine quotient(P, Q)"""
    p = make_automaton(
        states=["p0", "p1", "p2"],
        initial=["p0"],
        inputs=["i"],
        outputs=["o"],
        steps=[("p0", "i", "p1"), ("p1", "o", "p2")],
    )
    q = make_automaton(states=["q0", "q1"], initial=["q0"], outputs=["u"], steps=[("q0", "u", "q1")])
    candidate = make_automaton(
        states=["r0", "r1", "rA", "rA1", "rA2", "rB", "rB2", "rB3"],
        initial=["r0"],
        inputs=["i", "u"],
        outputs=["o"],
        steps=[
            ("r0", "u", "r1"),
            ("r0", "i", "rA"),
            ("rA", "u", "rA1"),
            ("rA1", "o", "rA2"),
            ("r1", "i", "rB"),
            ("rB", "o", "rB2"),
            ("rB2", "o", "rB3"),
        ],
    )
    return p, q, candidate
