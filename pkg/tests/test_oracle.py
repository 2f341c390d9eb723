import pytest

from services import automata_service as dfa
from services.oracle_service import (
    closed_form,
    enumerate_solutions,
    pointwise_maximality,
    pointwise_report,
    verify_adjunction,
    verify_all_quotients,
    verify_quotient,
)
from theories import languages
from theories.ag_contracts import contract_heap
from theories.boolean_lattice import FiniteSet, join_heap, lattice_heap
from utils.errors import ValidationError

PQ = ("p", "q")


def s(*members):
    return FiniteSet.from_members(PQ, members)


# ---------- enumerable carriers ----------


def test_solutions_of_boolean_example(pq_heap):
    found = enumerate_solutions(pq_heap, s("p"), s("q"), "right")
    assert set(found.solutions) == {s(), s("q")}
    assert found.maxima == (s("q"),)


def test_every_set_solves_against_the_top(pq_heap):
    found = enumerate_solutions(pq_heap, s("p"), s("p", "q"), "left")
    assert len(found.solutions) == 4
    assert found.maxima == (s("p", "q"),)


def test_unknown_side_is_rejected(pq_heap):
    with pytest.raises(ValueError):
        closed_form(pq_heap, s(), s(), "middle")


@pytest.mark.parametrize("universe", [("p",), ("p", "q"), ("p", "q", "r"), ("p", "q", "r", "s")])
def test_boolean_quotients_match_the_oracle(universe):
    audit = verify_all_quotients(lattice_heap(universe))
    assert audit.ok
    assert audit.checked == 2 * 4 ** len(universe)


def test_oversized_carriers_are_refused():
    h = lattice_heap(tuple("abcdefg"))
    x = FiniteSet.from_members(tuple("abcdefg"), "a")
    with pytest.raises(ValidationError, match="128 elements"):
        verify_all_quotients(h)
    with pytest.raises(ValidationError):
        enumerate_solutions(h, x, x, "right")
    with pytest.raises(ValidationError):
        verify_adjunction(h)


def test_contract_quotients_match_the_oracle(agc2_heap):
    audit = verify_all_quotients(agc2_heap)
    assert audit.ok
    assert audit.checked == 2 * 81


def test_three_behavior_contract_quotients_match_the_oracle():
    audit = verify_all_quotients(contract_heap((1, 2, 3)))
    assert audit.ok, audit.to_dict()
    assert audit.checked == 2 * 27**2


def test_join_heap_quotients_are_contradicted():
    h = join_heap(PQ)
    assert not verify_quotient(h, s("p"), s("p"), "right")
    audit = verify_all_quotients(h, witness_cap=2)
    assert not audit.ok
    assert len(audit.failures) == 2
    assert audit.to_dict(h.render)["failures"][0]["side"] == "right"


@pytest.mark.parametrize(
    "heap",
    [lattice_heap(("p", "q", "r")), lattice_heap(("p", "q", "r", "s")), contract_heap((1, 2)), contract_heap((1, 2, 3))],
    ids=["bool3", "bool4", "agc2", "agc3"],
)
def test_adjunction_holds(heap):
    assert verify_adjunction(heap) == []


def test_adjunction_fails_without_a2a():
    failures = verify_adjunction(join_heap(PQ), witness_cap=5)
    assert 0 < len(failures) <= 5


# ---------- word-wise oracle ----------


@pytest.fixture
def async_problem(async_registry):
    reg = async_registry
    a = languages.words(reg, {"x"}, ["a"], ["a", "a"])
    b = languages.words(reg, {"x", "y"}, ["a", "c"], ["c", "a"], ["c", "a", "a"], ["a", "c", "a"], ["a", "a", "c"])
    return reg, a, b


def test_closed_form_is_pointwise_maximal(async_problem):
    reg, a, b = async_problem
    sieve = languages.language_sieve(reg)
    z = languages.async_quotient(reg, a, b)
    report = pointwise_report(sieve, languages.element(reg, a), languages.element(reg, b), languages.element(reg, z), 4)
    assert report.solves
    assert report.maximal
    assert report.words_checked == sum(4 ** n for n in range(5))


def test_smaller_candidate_is_not_maximal(async_problem):
    reg, a, b = async_problem
    sieve = languages.language_sieve(reg)
    z = languages.async_quotient(reg, a, b)
    smaller = dfa.difference(z, languages.words(reg, {"x", "y"}, ["c"]))
    report = pointwise_report(
        sieve, languages.element(reg, a), languages.element(reg, b), languages.element(reg, smaller), 3
    )
    assert report.solves
    assert not report.maximal
    assert report.addable == [("c",)]


def test_oversized_candidate_does_not_solve(async_problem):
    reg, a, b = async_problem
    sieve = languages.language_sieve(reg)
    full = dfa.universal(reg.alphabet({"x", "y"}))
    assert not pointwise_maximality(
        sieve, languages.element(reg, a), languages.element(reg, b), languages.element(reg, full), 2
    )
    report = pointwise_report(
        sieve, languages.element(reg, a), languages.element(reg, b), languages.element(reg, full), 2
    )
    assert ("a",) in report.unsolved


def test_candidate_must_live_at_the_join(async_problem):
    reg, a, b = async_problem
    sieve = languages.language_sieve(reg)
    wrong = languages.element(reg, languages.words(reg, {"y"}, ["c"]))
    with pytest.raises(ValueError):
        pointwise_report(sieve, languages.element(reg, a), languages.element(reg, b), wrong, 2)
