"""
Theory Factory - builds the heap carrier and operand codec for a theory tag

Every theory is reached through the same interface: a HeapCarrier for the
generic heap operations, a parser from operand documents to elements, and a
renderer back to documents. Language theories also carry their sieve.
"""
import logging
from dataclasses import dataclass
from typing import Any, Callable, Optional

from config.settings import LANGUAGE_CONFIG, THEORIES
from services import automata_service as dfa
from services.heap_service import HeapCarrier
from services.ia_corpus_service import ia_sampler
from services.sieve_service import SievedElement, SievedHeap, as_heap
from theories import ag_contracts, interface_automata, languages
from theories.boolean_lattice import FiniteSet, check_universe, lattice_heap
from utils.errors import ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Theory:
    tag: str
    carrier: HeapCarrier
    parse: Callable[[dict], Any]
    render: Callable[[Any], Any]
    size: int  # universe size, states or word bound, compared with the verification limits
    sieve: Optional[SievedHeap] = None
    registry: Optional[languages.AlphabetRegistry] = None


def _universe(documents: list) -> tuple:
    for document in documents:
        if document is not None:
            if "universe" not in document:
                raise ValidationError("operand document needs a 'universe'")
            return check_universe(document["universe"])
    raise ValidationError("at least one operand is needed to fix the universe")


def create_boolean_theory(documents: list) -> Theory:
    universe = _universe(documents)
    return Theory(
        tag="bool",
        carrier=lattice_heap(universe),
        parse=FiniteSet.from_dict,
        render=lambda s: s.to_dict(),
        size=len(universe),
    )


def create_contract_theory(documents: list) -> Theory:
    universe = _universe(documents)
    return Theory(
        tag="agc",
        carrier=ag_contracts.contract_heap(universe),
        parse=ag_contracts.Contract.from_dict,
        render=ag_contracts.Contract.to_dict,
        size=len(universe),
    )


def create_interface_theory(documents: list) -> Theory:
    parsed = [interface_automata.from_dict(d) for d in documents if d is not None]
    states = 1
    for p in parsed:
        states *= max(1, len(p.states))
    return Theory(
        tag="ia",
        carrier=interface_automata.ia_heap(ia_sampler()),
        parse=interface_automata.from_dict,
        render=interface_automata.to_dict,
        size=states,
    )


def create_language_theory(tag: str, sieve_document: Optional[dict], bound: Optional[int], seed: Optional[int]) -> Theory:
    mode = tag.split("-", 1)[1]
    if sieve_document is None:
        registry = languages.default_registry(mode)
    else:
        registry = languages.AlphabetRegistry.from_dict({"kind": languages.MODES[mode], **sieve_document})
        if registry.kind != languages.MODES[mode]:
            raise ValidationError(f"{tag} needs a {languages.MODES[mode]} sieve, got {registry.kind}")
    bound = bound if bound is not None else LANGUAGE_CONFIG["sieve_bound"]
    sieve = languages.language_sieve(registry, bound=bound, seed=seed)

    def parse(document: dict) -> SievedElement:
        if "index" in document:
            alphabet = registry.alphabet(document["index"])
            language = dfa.from_dict(document, alphabet)
        else:
            language = dfa.from_dict(document)
        return languages.element(registry, language)

    def render(element: SievedElement) -> dict:
        return {
            "index": sieve.ordered(element.index),
            "language": languages.render_language(element.value, bound),
        }

    return Theory(
        tag=tag,
        carrier=as_heap(sieve),
        parse=parse,
        render=render,
        size=bound,
        sieve=sieve,
        registry=registry,
    )


def create_theory(
    tag: str,
    documents: list = (),
    sieve_document: Optional[dict] = None,
    bound: Optional[int] = None,
    seed: Optional[int] = None,
) -> Theory:
    """Theory for a tag; operand documents fix universes and verification sizes"""
    documents = list(documents)
    if tag == "bool":
        theory = create_boolean_theory(documents)
    elif tag == "agc":
        theory = create_contract_theory(documents)
    elif tag == "ia":
        theory = create_interface_theory(documents)
    elif tag in ("lang-sync", "lang-async"):
        theory = create_language_theory(tag, sieve_document, bound, seed)
    else:
        raise ValidationError(f"unknown theory {tag!r}; expected one of {THEORIES}")
    logger.debug("created theory %s (size %d)", tag, theory.size)
    return theory
