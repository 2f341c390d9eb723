"""
Problem instances: schema validation, dispatch to a theory, result documents

A result document always carries a machine-readable status:
- "ok"                   computed (and verified, where verification applies)
- "invalid"              operands or instance failed validation
- "undefined"            the theory has no result for these operands
- "verification_failed"  a closed form was contradicted by an oracle
"""
import logging
import random
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as SchemaError

from config.settings import AXIOM_CHECK_CONFIG, CLI_CONFIG, IA_SAMPLE_CONFIG, LANGUAGE_CONFIG, ORACLE_CONFIG
from services import ia_corpus_service as corpus
from services.heap_service import (
    check_axioms,
    identity_probe,
    quotient_left,
    quotient_right,
    tau,
)
from services.oracle_service import pointwise_report, verify_adjunction, verify_all_quotients, verify_quotient
from services.sieve_service import SievedElement, check_sieve, sieved_le
from theories import interface_automata, languages
from theories.theory_factory import Theory, create_theory
from utils.errors import (
    HeapError,
    InstanceSchemaError,
    MissingEnumerationError,
    UndefinedResultError,
    ValidationError,
    VerificationError,
)

logger = logging.getLogger(__name__)

Operation = Literal["solve-right", "solve-left", "compose", "merge", "separate", "refine", "axioms", "oracle-verify"]
TheoryTag = Literal["bool", "agc", "ia", "lang-sync", "lang-async"]

BINARY_OPERATIONS = ("solve-right", "solve-left", "compose", "merge", "separate", "refine")


class RunOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    bound: Optional[int] = Field(default=None, ge=0)
    seed: Optional[int] = None
    witness_cap: Optional[int] = Field(default=None, ge=1)


class ProblemInstance(BaseModel):
    model_config = ConfigDict(extra="forbid")

    theory: TheoryTag
    op: Operation
    a: Optional[dict] = None
    b: Optional[dict] = None
    sieve: Optional[dict] = None
    options: RunOptions = Field(default_factory=RunOptions)

    @model_validator(mode="after")
    def operands_present(self):
        if self.op in BINARY_OPERATIONS and (self.a is None or self.b is None):
            raise ValueError(f"operation {self.op} needs both operands a and b")
        if self.theory in ("bool", "agc") and self.a is None and self.b is None:
            raise ValueError(f"theory {self.theory} needs an operand to fix the universe")
        if self.op == "oracle-verify" and self.theory not in ("bool", "agc") and (self.a is None) != (self.b is None):
            raise ValueError("oracle-verify takes both operands or neither")
        if self.sieve is not None and not self.theory.startswith("lang"):
            raise ValueError("a sieve description only applies to language theories")
        return self


def parse_instance(data: dict) -> ProblemInstance:
    try:
        return ProblemInstance.model_validate(data)
    except SchemaError as e:
        raise InstanceSchemaError(str(e)) from e


def _cap(options: RunOptions) -> int:
    return options.witness_cap or AXIOM_CHECK_CONFIG["witness_cap"]


def _seed(options: RunOptions, default: int) -> int:
    return options.seed if options.seed is not None else default


def _witness_renderer(theory: Theory):
    if theory.sieve is not None:
        def render(w):
            if isinstance(w, SievedElement):
                return theory.render(w)
            return languages.render_language(w, theory.size)

        return render
    if theory.tag == "ia":
        return lambda w: interface_automata.to_dict(w) if isinstance(w, interface_automata.InterfaceAutomaton) else w
    return theory.carrier.render


def _pointwise(theory: Theory, a, b, z, options: RunOptions) -> dict:
    bound = options.bound if options.bound is not None else LANGUAGE_CONFIG["sieve_bound"]
    report = pointwise_report(theory.sieve, a, b, z, bound, _cap(options))
    symbol = z.value.alphabet.render_symbol
    block = report.to_dict()
    block["unsolved_words"] = [[symbol(s) for s in w] for w in report.unsolved]
    block["addable_words"] = [[symbol(s) for s in w] for w in report.addable]
    return block


def verify_solution(theory: Theory, side: str, a, b, result, options: RunOptions) -> dict:
    """Solution check plus a maximality check when an oracle applies at this size"""
    h = theory.carrier
    try:
        product = h.mu(a, result) if side == "right" else h.mu(result, a)
        block = {"solves": h.le(product, b)}
    except UndefinedResultError as e:
        logger.info("closed form does not compose with its operand: %s", e)
        block = {"solves": False, "solves_error": type(e).__name__}
    limits = CLI_CONFIG["verify_limits"]

    if theory.tag in ("bool", "agc"):
        if theory.size <= limits[theory.tag]:
            block["method"] = "exhaustive"
            block["maximal"] = verify_quotient(h, a, b, side)
    elif theory.sieve is not None:
        bound = options.bound if options.bound is not None else LANGUAGE_CONFIG["sieve_bound"]
        if bound <= limits["lang"]:
            block["method"] = "pointwise"
            block["pointwise"] = _pointwise(theory, a, b, result, options)
            block["maximal"] = block["pointwise"]["maximal"]
    elif theory.size <= limits["ia_states"]:
        audit = corpus.audit_maximality(b, a, seed=_seed(options, IA_SAMPLE_CONFIG["seed"]), witness_cap=_cap(options))
        block["method"] = "sampled"
        block["maximal"] = audit.ok
        block["candidates_checked"] = audit.checked.get("maximality", 0)
        block["counterexamples"] = [v.to_dict(lambda w: w) for v in audit.violations]

    if "maximal" not in block:
        block["maximality"] = "unverified"
    block["ok"] = block["solves"] and block.get("maximal", True)
    return block


def _solve(theory: Theory, side: str, a, b, options: RunOptions) -> tuple:
    h = theory.carrier
    result = quotient_right(h, a, b) if side == "right" else quotient_left(h, a, b)
    return theory.render(result), verify_solution(theory, side, a, b, result, options)


def _axioms(theory: Theory, options: RunOptions) -> tuple:
    render = _witness_renderer(theory)
    cap = _cap(options)
    if theory.sieve is not None:
        report = check_sieve(theory.sieve, witness_cap=cap)
        return report.to_dict(render), {"ok": report.ok}

    if theory.tag == "ia":
        seed = _seed(options, IA_SAMPLE_CONFIG["seed"])
        sampled = check_axioms(theory.carrier, seed=seed, witness_cap=cap)
        size = max(4, IA_SAMPLE_CONFIG["corpus_size"] // 10)
        chained = [p for chain in corpus.refinement_chains(seed, size) for p in chain]
        audits = {
            "sampled_axioms": sampled,
            "preorder": corpus.audit_preorder(chained, cap),
            "mirror": corpus.audit_mirror(chained, cap),
            "regularity": corpus.audit_regularity(corpus.quotient_pairs(seed, size), cap),
        }
        ok = all(report.ok for report in audits.values())
        return {name: report.to_dict(render) for name, report in audits.items()}, {"ok": ok}

    report = check_axioms(theory.carrier, witness_cap=cap)
    result = report.to_dict(render)
    probe = identity_probe(theory.carrier, "mu", cap)
    result["identity"] = probe.to_dict(render) if probe is not None else None
    ok = report.ok and (probe is None or probe.report.ok)
    return result, {"ok": ok}


def _oracle_verify(theory: Theory, a, b, options: RunOptions) -> tuple:
    cap = _cap(options)
    render = _witness_renderer(theory)

    if theory.tag in ("bool", "agc"):
        if theory.size > ORACLE_CONFIG["max_universe"]:
            raise ValidationError(
                f"universe of {theory.size} atoms exceeds the exhaustive oracle limit {ORACLE_CONFIG['max_universe']}"
            )
        audit = verify_all_quotients(theory.carrier, witness_cap=cap)
        adjunction = verify_adjunction(theory.carrier, witness_cap=cap)
        result = {
            "quotients": audit.to_dict(render),
            "adjunction_failures": [[side, render(x), render(y), render(z)] for side, x, y, z in adjunction],
        }
        return result, {"ok": audit.ok and not adjunction}

    if theory.sieve is not None:
        if a is not None:
            z = quotient_right(theory.carrier, a, b)
            block = _pointwise(theory, a, b, z, options)
            return {"quotient": theory.render(z), "pointwise": block}, {"ok": block["maximal"]}
        mode = theory.tag.split("-", 1)[1]
        reg = languages.default_registry(mode)
        sieve = languages.language_sieve(reg)
        bound = options.bound if options.bound is not None else ORACLE_CONFIG["max_word_length"]
        quotient = languages.sync_quotient if mode == "sync" else languages.async_quotient
        entries = []
        for fixture in languages.fixture_corpus(mode):
            z = languages.element(reg, quotient(reg, fixture.a, fixture.b))
            a_at, b_at = languages.element(reg, fixture.a), languages.element(reg, fixture.b)
            report = pointwise_report(sieve, a_at, b_at, z, bound, cap)
            entry = {"maximal": report.maximal, "words_checked": report.words_checked}
            if fixture.c is not None:
                entry["contains_known_solution"] = sieved_le(sieve, languages.element(reg, fixture.c), z)
            entries.append(entry)
        ok = all(e["maximal"] and e.get("contains_known_solution", True) for e in entries)
        return {"fixtures": entries}, {"ok": ok}

    seed = _seed(options, IA_SAMPLE_CONFIG["seed"])
    if a is not None:
        r = quotient_right(theory.carrier, a, b)
        return {"quotient": theory.render(r)}, verify_solution(theory, "right", a, b, r, options)
    size = max(4, IA_SAMPLE_CONFIG["corpus_size"] // 10)
    pairs = corpus.quotient_pairs(seed, size)
    regularity = corpus.audit_regularity(pairs, cap)
    rng = random.Random(seed)
    trivial = interface_automata.trivial_automaton("q0")
    maximality = [
        corpus.audit_maximality(corpus.random_automaton(rng, prefix="p"), trivial, seed + i, witness_cap=cap)
        for i in range(size)
    ]
    random_corpus = corpus.audit_random_pairs(corpus.random_pairs(seed), seed, witness_cap=cap)
    result = {
        "regularity": regularity.to_dict(render),
        "maximality": [report.to_dict(render) for report in maximality],
        "random_pairs": {name: report.to_dict(render) for name, report in random_corpus.items()},
    }
    ok = regularity.ok and all(report.ok for report in [*maximality, *random_corpus.values()])
    return result, {"ok": ok}


def _binary(theory: Theory, op: str, a, b, options: RunOptions) -> tuple:
    h = theory.carrier
    if op == "solve-right":
        return _solve(theory, "right", a, b, options)
    if op == "solve-left":
        return _solve(theory, "left", a, b, options)
    if op == "compose":
        return theory.render(h.mu(a, b)), None
    if op == "merge":
        return theory.render(tau(h, a, b)), None
    if op == "separate":
        return theory.render(h.mu(a, h.gamma(b))), None
    return h.le(a, b), None


def run(instance: ProblemInstance) -> dict:
    """Evaluate an instance into a result document; errors become statuses"""
    opts = instance.options
    document = {
        "theory": instance.theory,
        "operation": instance.op,
        "options": opts.model_dump(),
    }
    try:
        theory = create_theory(
            instance.theory,
            [instance.a, instance.b],
            sieve_document=instance.sieve,
            bound=opts.bound,
            seed=opts.seed,
        )
        a = theory.parse(instance.a) if instance.a is not None else None
        b = theory.parse(instance.b) if instance.b is not None else None
        if instance.op in BINARY_OPERATIONS:
            result, verification = _binary(theory, instance.op, a, b, opts)
        elif instance.op == "axioms":
            result, verification = _axioms(theory, opts)
        else:
            result, verification = _oracle_verify(theory, a, b, opts)
        document["result"] = result
        if verification is not None:
            document["verification"] = verification
            if not verification.get("ok", True):
                raise VerificationError(f"{instance.theory} {instance.op}: closed form contradicted by the oracle")
    except (ValidationError, MissingEnumerationError) as e:
        logger.info("invalid instance: %s", e)
        return {**document, "status": "invalid", "error": type(e).__name__, "message": str(e)}
    except UndefinedResultError as e:
        logger.info("undefined result: %s", e)
        return {**document, "status": "undefined", "error": type(e).__name__, "message": str(e)}
    except VerificationError as e:
        logger.warning("%s", e)
        return {**document, "status": "verification_failed", "error": type(e).__name__, "message": str(e)}

    document["status"] = "ok"
    return document


STATUS_EXIT = {
    "ok": "success",
    "invalid": "validation",
    "undefined": "undefined",
    "verification_failed": "verification",
}


def exit_code(document: dict) -> int:
    return CLI_CONFIG["exit_codes"][STATUS_EXIT.get(document.get("status"), "error")]


def invalid_document(error: HeapError, **context) -> dict:
    return {**context, "status": "invalid", "error": type(error).__name__, "message": str(error)}
