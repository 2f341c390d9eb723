import json
import random

import pytest

from services.ia_corpus_service import (
    ENVIRONMENT_POOL,
    add_inputs,
    audit_adjunction,
    audit_maximality,
    audit_mirror,
    audit_preorder,
    audit_random_pairs,
    audit_regularity,
    drop_outputs,
    environment_automaton,
    maximality_counterexample,
    merge_identity_holds,
    quotient_pairs,
    random_automaton,
    random_pairs,
    refinement_chains,
    regularity_counterexample,
)
from theories.interface_automata import compose, ia_quotient, refines, trivial_automaton


@pytest.fixture(scope="module")
def chains():
    return refinement_chains(seed=3, size=6)


# ---------- generators ----------


def test_corpora_are_deterministic():
    assert random_pairs(5, 4) == random_pairs(5, 4)
    assert quotient_pairs(5, 4) == quotient_pairs(5, 4)


def test_random_automata_have_one_initial_state():
    rng = random.Random(1)
    for _ in range(20):
        p = random_automaton(rng)
        assert len(p.initial) == 1
        assert len(p.states) <= 4


def test_environment_automata_are_deterministic_and_visible():
    rng = random.Random(2)
    for _ in range(20):
        q = environment_automaton(rng)
        assert not q.hidden
        assert q.actions <= set(ENVIRONMENT_POOL)
        assert all(len(targets) == 1 for row in q.successors.values() for targets in row.values())


def test_mutations_refine_their_source():
    rng = random.Random(4)
    for _ in range(20):
        p = random_automaton(rng)
        assert refines(drop_outputs(rng, p), p)
        assert refines(add_inputs(rng, p), p)


def test_chains_descend(chains):
    for base, first, second in chains:
        assert refines(first, base)
        assert refines(second, first)


# ---------- audits over proven families ----------


def test_preorder_audit_passes(chains):
    report = audit_preorder([p for chain in chains for p in chain])
    assert report.ok
    assert report.checked["reflexive"] == 18


def test_mirror_audit_passes(chains):
    report = audit_mirror([p for chain in chains for p in chain])
    assert report.ok
    assert report.checked["antitone"] >= 18


def test_regularity_holds_for_environment_components():
    report = audit_regularity(quotient_pairs(seed=11, size=15))
    assert report.ok, report.to_dict()
    assert report.checked["regularity"] + len(report.undefined) == 15


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_quotient_by_the_trivial_automaton_is_maximal(seed):
    p = random_automaton(random.Random(seed), prefix="p")
    report = audit_maximality(p, trivial_automaton(), seed=seed, candidate_count=5, max_draws=60)
    assert report.ok


def test_merge_separation_adjunction_for_the_trivial_automaton(chains):
    automata = [p for chain in chains for p in chain][:9]
    triples = [(p, trivial_automaton(), x) for p in automata for x in automata]
    report = audit_adjunction(triples)
    assert report.ok
    assert report.checked["merge-separation"] == 81


def test_merge_with_trivial_is_an_identity(chains):
    assert all(merge_identity_holds(p) for chain in chains for p in chain)


# ---------- unrestricted corpus of 100 random pairs ----------


@pytest.fixture(scope="module")
def random_corpus():
    return audit_random_pairs(random_pairs(2024, 100), seed=2024, candidate_count=20)


def witnesses(report) -> str:
    return json.dumps(report.to_dict(lambda w: w)["violations"], indent=1, default=str)


def test_random_corpus_refinement_is_a_preorder(random_corpus):
    report = random_corpus["preorder"]
    assert report.ok, witnesses(report)
    assert report.checked["reflexive"] == 200


def test_random_corpus_mirror_is_an_antitone_involution(random_corpus):
    report = random_corpus["mirror"]
    assert report.ok, witnesses(report)
    assert report.checked["involutive"] == 200


def test_random_corpus_quotients_are_solutions(random_corpus):
    report = random_corpus["regularity"]
    assert report.ok, witnesses(report)
    assert report.checked.get("regularity", 0) + len(report.undefined) <= 100


@pytest.mark.xfail(
    strict=True,
    reason="the closed-form quotient is not maximal outside the trivial-Q family; "
    "the failure message lists sampled candidates that solve but do not refine it",
)
def test_random_corpus_quotients_are_maximal(random_corpus):
    report = random_corpus["maximality"]
    assert report.ok, witnesses(report)


# ---------- known counterexamples ----------


def test_regularity_counterexample_is_reported():
    p, q = regularity_counterexample()
    assert not refines(compose(q, ia_quotient(p, q)), p)
    report = audit_regularity([(p, q)])
    assert report.axioms_violated() == {"regularity"}


def test_maximality_counterexample_is_reported():
    p, q, candidate = maximality_counterexample()
    assert refines(compose(q, candidate), p)
    assert not refines(candidate, ia_quotient(p, q))
    report = audit_maximality(p, q, seed=0, candidate_count=1, max_draws=1, extra_candidates=[candidate])
    assert "maximality" in report.axioms_violated()
