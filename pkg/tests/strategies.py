"""Hypothesis strategies for heap elements"""
from hypothesis import strategies as st

from services import automata_service as dfa
from theories.ag_contracts import Contract
from theories.boolean_lattice import FiniteSet


def finite_sets(universe=("p", "q")):
    universe = tuple(universe)
    return st.integers(0, (1 << len(universe)) - 1).map(lambda mask: FiniteSet(universe, mask))


@st.composite
def contracts(draw, universe=(1, 2, 3)):
    universe = tuple(universe)
    roles = draw(st.lists(st.integers(0, 2), min_size=len(universe), max_size=len(universe)))
    a = sum(1 << i for i, r in enumerate(roles) if r != 1)
    g = sum(1 << i for i, r in enumerate(roles) if r != 0)
    return Contract(FiniteSet(universe, a), FiniteSet(universe, g))


@st.composite
def finite_languages(draw, alphabet, max_length=3):
    pool = list(dfa.all_words(alphabet, max_length))
    chosen = draw(st.lists(st.sampled_from(pool), max_size=4, unique=True))
    return dfa.from_words(alphabet, chosen)
