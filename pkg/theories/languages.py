"""
Regular-language heaps over several alphabets, assembled into sieves

Each registered alphabet id names a finite symbol set. A sieve index is a
nonempty set of ids; the heap at an index is the powerset of words over
- the product of its alphabets (synchronous sieve, tuple symbols), or
- the union of its alphabets (asynchronous sieve, alphabets disjoint).

Concretization to a larger index lifts (synchronous) or expands
(asynchronous) a language, then reorders components to registration order.
Composition is intersection after concretization to the join; the largest
Z with compose(A, Z) <= B is the complement of (not B) & A at the join.
"""
import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from config.settings import LANGUAGE_CONFIG
from services import automata_service as dfa
from services.automata_service import Dfa, StructuredAlphabet
from services.heap_service import HeapCarrier
from services.sieve_service import SievedElement, SievedHeap, sieved_gamma, sieved_mu
from utils.errors import UnregisteredAlphabetError, ValidationError

logger = logging.getLogger(__name__)

MODES = {"sync": "tuple", "async": "union"}


@dataclass(frozen=True)
class AlphabetRegistry:
    """Alphabet ids with their symbols; registration order is the canonical component order"""

    kind: str
    alphabets: tuple  # ((id, (symbol, ...)), ...)

    def __post_init__(self):
        # builds and validates the full alphabet
        StructuredAlphabet(self.kind, self.alphabets)

    @property
    def ids(self) -> tuple:
        return tuple(cid for cid, _ in self.alphabets)

    def symbols(self, cid) -> tuple:
        for known, symbols in self.alphabets:
            if known == cid:
                return symbols
        raise UnregisteredAlphabetError(f"alphabet '{cid}' is not registered")

    def alphabet(self, index: Iterable) -> StructuredAlphabet:
        index = set(index)
        unknown = index - set(self.ids)
        if unknown:
            raise UnregisteredAlphabetError(f"alphabets {sorted(unknown)} are not registered")
        if not index:
            raise UnregisteredAlphabetError("an index needs at least one alphabet")
        return StructuredAlphabet(self.kind, tuple((cid, s) for cid, s in self.alphabets if cid in index))

    def index_of(self, alphabet: StructuredAlphabet) -> frozenset:
        if alphabet.kind != self.kind:
            raise ValidationError(f"a {self.kind} sieve cannot hold a {alphabet.kind} alphabet")
        index = frozenset(alphabet.ids)
        if self.alphabet(index) != alphabet:
            raise UnregisteredAlphabetError(f"alphabet {alphabet.ids} does not match the registry")
        return index

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "alphabets": [{"id": cid, "symbols": list(symbols)} for cid, symbols in self.alphabets],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AlphabetRegistry":
        try:
            return cls(data["kind"], tuple((a["id"], tuple(a["symbols"])) for a in data["alphabets"]))
        except (KeyError, TypeError) as e:
            raise ValidationError(f"malformed sieve description: {e}") from e


def registry(mode: str, *alphabets) -> AlphabetRegistry:
    """registry("sync", ("x", "ab"), ("y", "cd"))"""
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {tuple(MODES)}, got {mode!r}")
    return AlphabetRegistry(MODES[mode], tuple((cid, tuple(symbols)) for cid, symbols in alphabets))


def default_registry(mode: str) -> AlphabetRegistry:
    """Two 2-symbol alphabets: x = {a, b}, y = {c, d}"""
    return registry(mode, ("x", ("a", "b")), ("y", ("c", "d")))


def concretize(reg: AlphabetRegistry, language: Dfa, target: frozenset) -> Dfa:
    """Move a language to the index target, components in registration order"""
    source = reg.index_of(language.alphabet)
    if not source <= target:
        raise ValidationError(f"cannot concretize from {sorted(source)} to {sorted(target)}")
    missing = [(cid, s) for cid, s in reg.alphabet(target).components if cid not in source]
    if not missing:
        return language
    grown = dfa.lift(language, missing) if reg.kind == "tuple" else dfa.expand(language, missing)
    order = [cid for cid in reg.ids if cid in target]
    current = grown.alphabet.ids
    permutation = [current.index(cid) for cid in order]
    return dfa.reorder(grown, permutation)


def sample_languages(alphabet: StructuredAlphabet, bound: int, count: int, seed: int) -> tuple:
    """Empty, full, and `count` random finite languages with words up to bound"""
    rng = random.Random(f"{seed}:{alphabet.kind}:{','.join(alphabet.ids)}")
    words = list(dfa.all_words(alphabet, bound))
    drawn = [dfa.empty(alphabet), dfa.universal(alphabet)]
    attempts = 0
    while len(drawn) < count + 2 and attempts < 20 * (count + 2):
        attempts += 1
        size = rng.randint(1, min(4, len(words)))
        language = dfa.from_words(alphabet, rng.sample(words, size))
        if language not in drawn:
            drawn.append(language)
    return tuple(drawn)


def render_language(language: Dfa, bound: Optional[int] = None) -> dict:
    return {
        **dfa.to_dict(language),
        "words": dfa.render_words(language, bound if bound is not None else LANGUAGE_CONFIG["sieve_bound"]),
    }


def language_heap(
    alphabet: StructuredAlphabet,
    bound: Optional[int] = None,
    count: Optional[int] = None,
    seed: Optional[int] = None,
) -> HeapCarrier:
    """Inclusion, intersection, complement; enumeration is a seeded bounded-word sample"""
    bound = bound if bound is not None else LANGUAGE_CONFIG["sieve_bound"]
    count = count if count is not None else LANGUAGE_CONFIG["sampled_languages"]
    seed = seed if seed is not None else LANGUAGE_CONFIG["fixture_seed"]
    words = tuple(dfa.all_words(alphabet, bound))
    return HeapCarrier(
        name=f"lang[{alphabet.kind}:{','.join(alphabet.ids)}]",
        le=dfa.is_subset,
        mu=dfa.intersect,
        gamma=dfa.complement,
        elements=lambda: sample_languages(alphabet, bound, count, seed),
        sampler=lambda rng: dfa.from_words(alphabet, rng.sample(words, rng.randint(0, min(4, len(words))))),
        render=lambda language: render_language(language, bound),
    )


def language_sieve(
    reg: AlphabetRegistry,
    bound: Optional[int] = None,
    count: Optional[int] = None,
    seed: Optional[int] = None,
) -> SievedHeap:
    mode = "sync" if reg.kind == "tuple" else "async"

    @lru_cache(maxsize=None)
    def heap_at(index: frozenset) -> HeapCarrier:
        return language_heap(reg.alphabet(index), bound, count, seed)

    def concretize_value(language: Dfa, source: frozenset, target: frozenset) -> Dfa:
        return concretize(reg, language, target)

    return SievedHeap(name=f"lang-{mode}", ids=reg.ids, heap_at=heap_at, concretize_value=concretize_value)


def element(reg: AlphabetRegistry, language: Dfa) -> SievedElement:
    return SievedElement(reg.index_of(language.alphabet), language)


def _compose(reg: AlphabetRegistry, l1: Dfa, l2: Dfa) -> Dfa:
    return sieved_mu(language_sieve(reg), element(reg, l1), element(reg, l2)).value


def _quotient(reg: AlphabetRegistry, a: Dfa, b: Dfa) -> Dfa:
    sieve = language_sieve(reg)
    return sieved_gamma(sieve, sieved_mu(sieve, sieved_gamma(sieve, element(reg, b)), element(reg, a))).value


def _require_kind(reg: AlphabetRegistry, kind: str) -> None:
    if reg.kind != kind:
        raise ValidationError(f"operation needs a {kind} registry, got {reg.kind}")


def sync_compose(reg: AlphabetRegistry, l1: Dfa, l2: Dfa) -> Dfa:
    """Both languages lifted to the product alphabet, then intersected"""
    _require_kind(reg, "tuple")
    return _compose(reg, l1, l2)


def async_compose(reg: AlphabetRegistry, l1: Dfa, l2: Dfa) -> Dfa:
    """Both languages expanded to the union alphabet, then intersected"""
    _require_kind(reg, "union")
    return _compose(reg, l1, l2)


def sync_quotient(reg: AlphabetRegistry, a: Dfa, b: Dfa) -> Dfa:
    """Largest Z with sync_compose(A, Z) <= B"""
    _require_kind(reg, "tuple")
    return _quotient(reg, a, b)


def async_quotient(reg: AlphabetRegistry, a: Dfa, b: Dfa) -> Dfa:
    """Largest Z with async_compose(A, Z) <= B"""
    _require_kind(reg, "union")
    return _quotient(reg, a, b)


def words(reg: AlphabetRegistry, index: Iterable, *word_list) -> Dfa:
    """Finite language from plain words; in a sync registry each letter is one tuple symbol"""
    alphabet = reg.alphabet(index)
    return dfa.from_words(alphabet, (tuple(alphabet.parse_symbol(s) for s in w) for w in word_list))


@dataclass(frozen=True)
class LanguageFixture:
    """A quotient problem: find the largest Z with compose(a, Z) <= b; c solves it when present"""

    a: Dfa
    b: Dfa
    c: Optional[Dfa] = None


def fixture_corpus(mode: str, size: Optional[int] = None, seed: Optional[int] = None) -> list:
    """
    Deterministic quotient problems over the default two-alphabet registry.
    Even entries take b = compose(a, c) for a random c over y, odd entries a
    random b over y or over both alphabets.
    """
    reg = default_registry(mode)
    size = size if size is not None else LANGUAGE_CONFIG["fixture_pairs"]
    rng = random.Random(seed if seed is not None else LANGUAGE_CONFIG["fixture_seed"])
    compose = sync_compose if mode == "sync" else async_compose
    x, y, xy = reg.alphabet({"x"}), reg.alphabet({"y"}), reg.alphabet({"x", "y"})

    def draw(alphabet: StructuredAlphabet, bound: int) -> Dfa:
        pool = list(dfa.all_words(alphabet, bound))
        return dfa.from_words(alphabet, rng.sample(pool, rng.randint(1, 3)))

    corpus = []
    for i in range(size):
        a = draw(x, 2)
        if i % 2 == 0:
            c = draw(y, 2)
            corpus.append(LanguageFixture(a, compose(reg, a, c), c))
        else:
            corpus.append(LanguageFixture(a, draw(y if i % 4 == 1 else xy, 2)))
    logger.debug("built %d %s language fixtures", len(corpus), mode)
    return corpus
