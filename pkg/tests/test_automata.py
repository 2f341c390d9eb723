import pytest
from hypothesis import given, settings

from services import automata_service as dfa
from strategies import finite_languages
from utils.errors import AlphabetMismatchError, InvalidAutomatonError, InvalidPermutationError, ValidationError

X = dfa.make_alphabet("tuple", ("x", "ab"))
XY = dfa.make_alphabet("tuple", ("x", "ab"), ("y", "cd"))
YX = dfa.make_alphabet("tuple", ("y", "cd"), ("x", "ab"))
UX = dfa.make_alphabet("union", ("x", "ab"))
UXY = dfa.make_alphabet("union", ("x", "ab"), ("y", "cd"))


def lang(alphabet, *words):
    return dfa.from_words(alphabet, words)


# ---------- alphabets ----------


def test_tuple_symbols_are_the_product():
    assert XY.symbols == (("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"))
    assert X.symbols == (("a",), ("b",))


def test_union_components_must_be_disjoint():
    with pytest.raises(AlphabetMismatchError):
        dfa.make_alphabet("union", ("x", "ab"), ("y", "bc"))


@pytest.mark.parametrize("components", [(), (("x", ""),), (("x", "ab"), ("x", "cd")), (("x", "aa"),)])
def test_malformed_alphabets_are_rejected(components):
    with pytest.raises(ValidationError):
        dfa.StructuredAlphabet("tuple", tuple((cid, tuple(s)) for cid, s in components))


def test_bare_symbols_only_for_single_component_tuples():
    assert X.parse_symbol("a") == ("a",)
    assert X.render_symbol(("a",)) == "a"
    with pytest.raises(ValidationError):
        XY.parse_symbol("a")


def test_unknown_symbol_is_a_mismatch():
    with pytest.raises(AlphabetMismatchError):
        lang(X, ("c",))


# ---------- boolean operations ----------


def test_minimal_automata_compare_by_language():
    assert lang(X, (("a",),), (("a",), ("a",))) == lang(X, (("a",), ("a",)), (("a",),))
    assert dfa.equivalent(dfa.complement(dfa.empty(X)), dfa.universal(X))


@settings(max_examples=40)
@given(finite_languages(X))
def test_complement_is_an_involution(language):
    assert dfa.complement(dfa.complement(language)) == language


@settings(max_examples=40)
@given(finite_languages(X), finite_languages(X))
def test_de_morgan(l1, l2):
    assert dfa.complement(dfa.intersect(l1, l2)) == dfa.union(dfa.complement(l1), dfa.complement(l2))


@settings(max_examples=40)
@given(finite_languages(X), finite_languages(X))
def test_intersection_is_a_subset(l1, l2):
    assert dfa.is_subset(dfa.intersect(l1, l2), l1)
    assert dfa.is_empty(dfa.difference(l1, dfa.union(l1, l2)))


def test_operations_need_one_alphabet():
    with pytest.raises(AlphabetMismatchError):
        dfa.intersect(dfa.empty(X), dfa.empty(XY))


def test_bounded_words_are_shortlex():
    language = lang(X, (("b",),), (("a",), ("a",)), ())
    assert dfa.bounded_words(language, 2) == [(), (("b",),), (("a",), ("a",))]
    assert dfa.bounded_words(language, 1) == [(), (("b",),)]
    assert dfa.render_words(language, 2) == [[], ["b"], ["a", "a"]]


def test_all_words_count():
    assert len(list(dfa.all_words(XY, 2))) == 1 + 4 + 16


# ---------- alphabet transformations ----------


def test_lift_pairs_every_letter_with_the_new_component():
    lifted = dfa.lift(lang(X, (("a",),)), [("y", ("c", "d"))])
    assert lifted == lang(XY, (("a", "c"),), (("a", "d"),))


def test_lift_needs_a_component():
    with pytest.raises(ValidationError):
        dfa.lift(lang(X, ()), [])


def test_expand_inserts_new_symbols_anywhere():
    expanded = dfa.expand(lang(UX, ()), [("y", ("c", "d"))])
    assert expanded.alphabet == UXY
    assert len(dfa.bounded_words(expanded, 2)) == 1 + 2 + 4
    assert dfa.contains(expanded, ("c", "d", "c"))
    assert not dfa.contains(expanded, ("c", "a"))


def test_expand_skips_present_components():
    language = lang(UX, ("a",))
    assert dfa.expand(language, [("x", ("a", "b"))]) == language


def test_reorder_swaps_tuple_coordinates():
    language = lang(XY, (("a", "c"), ("b", "d")))
    assert dfa.reorder(language, [1, 0]) == lang(YX, (("c", "a"), ("d", "b")))
    assert dfa.reorder(dfa.reorder(language, [1, 0]), [1, 0]) == language


def test_reorder_rejects_non_permutations():
    with pytest.raises(InvalidPermutationError):
        dfa.reorder(lang(XY, ()), [0, 0])


def test_reorder_of_union_alphabet_keeps_the_language():
    language = lang(UXY, ("a", "c"))
    swapped = dfa.reorder(language, [1, 0])
    assert swapped.alphabet.ids == ("y", "x")
    assert dfa.contains(swapped, ("a", "c"))
    assert not dfa.contains(swapped, ("c", "a"))


# ---------- documents ----------


def test_partial_transition_table_is_rejected():
    document = {
        "alphabet": X.to_dict(),
        "states": 1,
        "initial": 0,
        "accepting": [0],
        "delta": [[0, "a", 0]],
    }
    with pytest.raises(InvalidAutomatonError):
        dfa.from_dict(document)


TOTAL_ONE_STATE = {
    "alphabet": X.to_dict(),
    "states": 1,
    "initial": 0,
    "accepting": [0],
    "delta": [[0, "a", 0], [0, "b", 0]],
}


@pytest.mark.parametrize(
    "patch",
    [
        {"initial": "zero"},
        {"initial": -1},
        {"accepting": ["0"]},
        {"states": 0},
        {"states": "1"},
        {"delta": [[0, "a", 0], [-1, "b", 0]]},
        {"delta": [[0, "a", 0], [0, "b", -1]]},
        {"delta": [[0, "a", 0], [0, "b", 1]]},
        {"delta": [[0, "a", 0], [3, "b", 0]]},
        {"delta": [[0, "a"]]},
    ],
)
def test_malformed_documents_are_validation_errors(patch):
    with pytest.raises(InvalidAutomatonError):
        dfa.from_dict({**TOTAL_ONE_STATE, **patch})


def test_unhashable_symbols_are_validation_errors():
    with pytest.raises(ValidationError):
        dfa.from_dict({"alphabet": X.to_dict(), "words": [[["a"], {"b": 1}]]})
    with pytest.raises(ValidationError):
        dfa.from_dict({**TOTAL_ONE_STATE, "delta": [[0, {"a": 1}, 0]]})


def test_direct_construction_checks_totality():
    with pytest.raises(InvalidAutomatonError):
        dfa.Dfa(X, 1, 0, frozenset(), ((0,),))


def test_document_round_trip():
    language = lang(XY, (("a", "c"),), (("a", "c"), ("b", "d")))
    assert dfa.from_dict(dfa.to_dict(language)) == language


def test_word_documents():
    document = {"alphabet": X.to_dict(), "words": [["a"], ["a", "b"]]}
    assert dfa.from_dict(document) == lang(X, (("a",),), (("a",), ("b",)))


def test_document_without_alphabet_is_rejected():
    with pytest.raises(ValidationError):
        dfa.from_dict({"words": []})
