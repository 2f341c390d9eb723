"""Shared fixtures"""
import pytest

from services import automata_service as dfa
from theories import languages
from theories.ag_contracts import contract_heap
from theories.boolean_lattice import lattice_heap


@pytest.fixture
def pq_heap():
    return lattice_heap(("p", "q"))


@pytest.fixture
def agc2_heap():
    return contract_heap((1, 2))


@pytest.fixture
def sync_registry():
    return languages.default_registry("sync")


@pytest.fixture
def async_registry():
    return languages.default_registry("async")


@pytest.fixture
def x_alphabet():
    return dfa.make_alphabet("tuple", ("x", "ab"))
