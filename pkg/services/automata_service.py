"""
Total deterministic finite automata over structured alphabets

Every automaton produced here is total, minimal and canonically numbered
(breadth-first from the initial state, symbols in alphabet order), so two
automata over the same alphabet are equal as values exactly when they accept
the same language.

Alphabets come in two kinds:
- tuple: symbols are tuples, one coordinate per component alphabet
  (the synchronous product X x V)
- union: symbols are the plain symbols of every component, components
  pairwise disjoint (the asynchronous union X u V)
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Annotated, Any, Iterable, Iterator, Optional

from pydantic import BaseModel, Field
from pydantic import ValidationError as SchemaError

from utils.errors import (
    AlphabetMismatchError,
    InvalidAutomatonError,
    InvalidPermutationError,
    ValidationError,
)

logger = logging.getLogger(__name__)

ALPHABET_KINDS = ("tuple", "union")


@dataclass(frozen=True)
class StructuredAlphabet:
    kind: str
    components: tuple  # ((id, (symbol, ...)), ...)

    def __post_init__(self):
        if self.kind not in ALPHABET_KINDS:
            raise ValidationError(f"alphabet kind must be one of {ALPHABET_KINDS}, got {self.kind!r}")
        if not self.components:
            raise ValidationError("an alphabet needs at least one component")
        ids = [cid for cid, _ in self.components]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"duplicate component ids in {ids}")
        for cid, symbols in self.components:
            if not symbols:
                raise ValidationError(f"component '{cid}' has no symbols")
            if len(set(symbols)) != len(symbols):
                raise ValidationError(f"component '{cid}' repeats a symbol")
        if self.kind == "union":
            seen = set()
            for cid, symbols in self.components:
                clash = seen & set(symbols)
                if clash:
                    raise AlphabetMismatchError(f"union components overlap on {sorted(clash)}")
                seen |= set(symbols)

    @property
    def ids(self) -> tuple:
        return tuple(cid for cid, _ in self.components)

    @cached_property
    def symbols(self) -> tuple:
        if self.kind == "tuple":
            return tuple(itertools.product(*(symbols for _, symbols in self.components)))
        return tuple(s for _, symbols in self.components for s in symbols)

    @cached_property
    def _positions(self) -> dict:
        return {s: i for i, s in enumerate(self.symbols)}

    def position(self, symbol) -> int:
        try:
            return self._positions[symbol]
        except (KeyError, TypeError):
            raise AlphabetMismatchError(f"symbol {symbol!r} is not in alphabet {self.ids}") from None

    def parse_symbol(self, raw):
        """JSON symbol to alphabet symbol; single-component tuple symbols may be given bare"""
        if self.kind == "tuple":
            if isinstance(raw, (list, tuple)):
                return tuple(raw)
            if len(self.components) == 1:
                return (raw,)
            raise ValidationError(f"symbol {raw!r} must list one coordinate per component {self.ids}")
        return raw

    def render_symbol(self, symbol):
        if self.kind == "tuple":
            return symbol[0] if len(symbol) == 1 else list(symbol)
        return symbol

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "components": [{"id": cid, "symbols": list(symbols)} for cid, symbols in self.components],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StructuredAlphabet":
        try:
            components = tuple((c["id"], tuple(c["symbols"])) for c in data["components"])
            return cls(data.get("kind", "tuple"), components)
        except (KeyError, TypeError) as e:
            raise ValidationError(f"malformed alphabet document: {e}") from e


def make_alphabet(kind: str, *components) -> StructuredAlphabet:
    """make_alphabet("tuple", ("x", "ab"), ("y", "cd"))"""
    return StructuredAlphabet(kind, tuple((cid, tuple(symbols)) for cid, symbols in components))


@dataclass(frozen=True)
class Dfa:
    alphabet: StructuredAlphabet
    n_states: int
    initial: int
    accepting: frozenset
    transitions: tuple  # transitions[state][symbol position] -> state

    def __post_init__(self):
        width = len(self.alphabet.symbols)
        if self.n_states < 1:
            raise InvalidAutomatonError("a total DFA has at least one state")
        if not 0 <= self.initial < self.n_states:
            raise InvalidAutomatonError(f"initial state {self.initial} out of range")
        if any(not 0 <= q < self.n_states for q in self.accepting):
            raise InvalidAutomatonError("accepting state out of range")
        if len(self.transitions) != self.n_states:
            raise InvalidAutomatonError("transition table must have one row per state")
        for row in self.transitions:
            if len(row) != width or any(not 0 <= q < self.n_states for q in row):
                raise InvalidAutomatonError("transition function is not total over the alphabet")

    def step(self, state: int, symbol) -> int:
        return self.transitions[state][self.alphabet.position(symbol)]


def _require_same_alphabet(d1: Dfa, d2: Dfa) -> None:
    if d1.alphabet != d2.alphabet:
        raise AlphabetMismatchError(f"alphabets differ: {d1.alphabet.ids} vs {d2.alphabet.ids}")


def minimize(d: Dfa) -> Dfa:
    """Reachable part, Moore partition refinement, canonical breadth-first numbering"""
    width = len(d.alphabet.symbols)
    reachable = [d.initial]
    seen = {d.initial}
    for q in reachable:
        for target in d.transitions[q]:
            if target not in seen:
                seen.add(target)
                reachable.append(target)

    block = {q: int(q in d.accepting) for q in reachable}
    while True:
        signatures = {}
        refined = {}
        for q in reachable:
            signature = (block[q],) + tuple(block[d.transitions[q][s]] for s in range(width))
            refined[q] = signatures.setdefault(signature, len(signatures))
        if len(signatures) == len(set(block.values())):
            break
        block = refined

    representative = {}
    for q in reachable:
        representative.setdefault(block[q], q)

    numbering = {block[d.initial]: 0}
    order = [block[d.initial]]
    for b in order:
        for target in d.transitions[representative[b]]:
            tb = block[target]
            if tb not in numbering:
                numbering[tb] = len(order)
                order.append(tb)

    transitions = tuple(
        tuple(numbering[block[t]] for t in d.transitions[representative[b]]) for b in order
    )
    accepting = frozenset(numbering[b] for b in order if representative[b] in d.accepting)
    return Dfa(d.alphabet, len(order), 0, accepting, transitions)


def empty(alphabet: StructuredAlphabet) -> Dfa:
    return Dfa(alphabet, 1, 0, frozenset(), ((0,) * len(alphabet.symbols),))


def universal(alphabet: StructuredAlphabet) -> Dfa:
    return Dfa(alphabet, 1, 0, frozenset({0}), ((0,) * len(alphabet.symbols),))


def from_words(alphabet: StructuredAlphabet, words: Iterable) -> Dfa:
    """Finite language as a trie with a dead state"""
    rows = [{}]
    accepting = set()
    for word in words:
        q = 0
        for symbol in word:
            position = alphabet.position(symbol)
            if position not in rows[q]:
                rows.append({})
                rows[q][position] = len(rows) - 1
            q = rows[q][position]
        accepting.add(q)
    dead = len(rows)
    width = len(alphabet.symbols)
    transitions = tuple(tuple(row.get(s, dead) for s in range(width)) for row in rows)
    transitions += ((dead,) * width,)
    return minimize(Dfa(alphabet, dead + 1, 0, frozenset(accepting), transitions))


def complement(d: Dfa) -> Dfa:
    flipped = frozenset(range(d.n_states)) - d.accepting
    return minimize(Dfa(d.alphabet, d.n_states, d.initial, flipped, d.transitions))


def _product(d1: Dfa, d2: Dfa, accept) -> Dfa:
    _require_same_alphabet(d1, d2)
    width = len(d1.alphabet.symbols)
    start = (d1.initial, d2.initial)
    index = {start: 0}
    pairs = [start]
    rows = []
    for p, q in pairs:
        row = []
        for s in range(width):
            target = (d1.transitions[p][s], d2.transitions[q][s])
            if target not in index:
                index[target] = len(pairs)
                pairs.append(target)
            row.append(index[target])
        rows.append(tuple(row))
    accepting = frozenset(i for i, (p, q) in enumerate(pairs) if accept(p in d1.accepting, q in d2.accepting))
    return minimize(Dfa(d1.alphabet, len(pairs), 0, accepting, tuple(rows)))


def intersect(d1: Dfa, d2: Dfa) -> Dfa:
    return _product(d1, d2, lambda x, y: x and y)


def union(d1: Dfa, d2: Dfa) -> Dfa:
    return _product(d1, d2, lambda x, y: x or y)


def difference(d1: Dfa, d2: Dfa) -> Dfa:
    return _product(d1, d2, lambda x, y: x and not y)


def is_empty(d: Dfa) -> bool:
    seen = {d.initial}
    frontier = [d.initial]
    while frontier:
        q = frontier.pop()
        if q in d.accepting:
            return False
        for target in d.transitions[q]:
            if target not in seen:
                seen.add(target)
                frontier.append(target)
    return True


def is_subset(d1: Dfa, d2: Dfa) -> bool:
    return is_empty(difference(d1, d2))


def equivalent(d1: Dfa, d2: Dfa) -> bool:
    _require_same_alphabet(d1, d2)
    return minimize(d1) == minimize(d2)


def contains(d: Dfa, word) -> bool:
    q = d.initial
    for symbol in word:
        q = d.step(q, symbol)
    return q in d.accepting


def all_words(alphabet: StructuredAlphabet, k: int) -> Iterator[tuple]:
    """Every word of length <= k, shortlex order"""
    for n in range(k + 1):
        yield from itertools.product(alphabet.symbols, repeat=n)


def bounded_words(d: Dfa, k: int) -> list:
    """Accepted words of length <= k, shortlex order"""
    words = []
    layer = [((), d.initial)]
    for n in range(k + 1):
        words.extend(word for word, q in layer if q in d.accepting)
        if n == k:
            break
        layer = [
            (word + (symbol,), d.transitions[q][s])
            for word, q in layer
            for s, symbol in enumerate(d.alphabet.symbols)
        ]
    return words


def lift(d: Dfa, extra: Iterable) -> Dfa:
    """
    Append product components: each transition on x becomes a transition on
    (x, v) for every v of the new components
    """
    if d.alphabet.kind != "tuple":
        raise AlphabetMismatchError("lifting needs a tuple alphabet")
    extra = tuple((cid, tuple(symbols)) for cid, symbols in extra)
    if not extra:
        raise ValidationError("cannot lift by an empty set of components")
    for cid, symbols in extra:
        if not symbols:
            raise ValidationError(f"cannot lift by empty component '{cid}'")
    target = StructuredAlphabet("tuple", d.alphabet.components + extra)
    arity = len(d.alphabet.components)
    source_positions = [d.alphabet.position(symbol[:arity]) for symbol in target.symbols]
    transitions = tuple(tuple(row[s] for s in source_positions) for row in d.transitions)
    return minimize(Dfa(target, d.n_states, d.initial, d.accepting, transitions))


def expand(d: Dfa, extra: Iterable) -> Dfa:
    """
    Add union components: every new symbol self-loops on every state, so words
    of the new symbols can be inserted anywhere. Components already present
    are skipped.
    """
    if d.alphabet.kind != "union":
        raise AlphabetMismatchError("expansion needs a union alphabet")
    present = set(d.alphabet.ids)
    added = tuple((cid, tuple(symbols)) for cid, symbols in extra if cid not in present)
    if not added:
        return d
    target = StructuredAlphabet("union", d.alphabet.components + added)
    old_width = len(d.alphabet.symbols)
    new_width = len(target.symbols) - old_width
    transitions = tuple(row + (q,) * new_width for q, row in enumerate(d.transitions))
    return minimize(Dfa(target, d.n_states, d.initial, d.accepting, transitions))


def reorder(d: Dfa, permutation) -> Dfa:
    """
    Component i of the result is component permutation[i] of d. Tuple symbols
    are relabelled coordinatewise; union alphabets only change symbol order.
    """
    permutation = tuple(permutation)
    n = len(d.alphabet.components)
    if sorted(permutation) != list(range(n)):
        raise InvalidPermutationError(f"{list(permutation)} is not a permutation of {n} components")
    target = StructuredAlphabet(d.alphabet.kind, tuple(d.alphabet.components[i] for i in permutation))
    if d.alphabet.kind == "tuple":
        inverse = [permutation.index(i) for i in range(n)]
        source_positions = [
            d.alphabet.position(tuple(symbol[inverse[i]] for i in range(n))) for symbol in target.symbols
        ]
    else:
        source_positions = [d.alphabet.position(symbol) for symbol in target.symbols]
    transitions = tuple(tuple(row[s] for s in source_positions) for row in d.transitions)
    return minimize(Dfa(target, d.n_states, d.initial, d.accepting, transitions))


StateIndex = Annotated[int, Field(ge=0, strict=True)]


class DfaDocument(BaseModel):
    """Explicit DFA document; symbols are checked against the alphabet after parsing"""

    states: Annotated[int, Field(ge=1, strict=True)]
    initial: StateIndex = 0
    accepting: list[StateIndex] = Field(default_factory=list)
    delta: list[tuple[StateIndex, Any, StateIndex]]


def to_dict(d: Dfa) -> dict:
    symbols = d.alphabet.symbols
    return {
        "alphabet": d.alphabet.to_dict(),
        "states": d.n_states,
        "initial": d.initial,
        "accepting": sorted(d.accepting),
        "delta": [
            [q, d.alphabet.render_symbol(symbols[s]), target]
            for q, row in enumerate(d.transitions)
            for s, target in enumerate(row)
        ],
    }


def from_dict(data: dict, alphabet: Optional[StructuredAlphabet] = None) -> Dfa:
    """A DFA document, or {"alphabet": ..., "words": [...]} for a finite language"""
    if alphabet is None:
        if "alphabet" not in data:
            raise ValidationError("a language document needs an alphabet")
        alphabet = StructuredAlphabet.from_dict(data["alphabet"])
    if "words" in data:
        try:
            return from_words(alphabet, [tuple(alphabet.parse_symbol(s) for s in word) for word in data["words"]])
        except TypeError as e:
            raise ValidationError(f"malformed word list: {e}") from e
    try:
        document = DfaDocument.model_validate(data)
    except SchemaError as e:
        raise InvalidAutomatonError(f"malformed DFA document: {e}") from e
    rows = [[None] * len(alphabet.symbols) for _ in range(document.states)]
    try:
        for q, raw, target in document.delta:
            rows[q][alphabet.position(alphabet.parse_symbol(raw))] = target
    except IndexError:
        raise InvalidAutomatonError(f"delta names a state outside 0..{document.states - 1}") from None
    if any(target is None for row in rows for target in row):
        raise InvalidAutomatonError("transition function is not total over the alphabet")
    dfa = Dfa(alphabet, document.states, document.initial, frozenset(document.accepting), tuple(map(tuple, rows)))
    return minimize(dfa)


def render_words(d: Dfa, k: int) -> list:
    """Accepted words up to length k with symbols in JSON form"""
    return [[d.alphabet.render_symbol(s) for s in word] for word in bounded_words(d, k)]
