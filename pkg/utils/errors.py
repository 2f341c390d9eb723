"""
Error types shared by the theories, the services and the CLI

The CLI maps each family to an exit status:
- ValidationError and subclasses: malformed operands or instances (exit 2)
- UndefinedResultError and subclasses: the theory has no result for the
  given operands, e.g. incompatible interface automata (exit 3)
- VerificationError: a closed form was contradicted by an oracle (exit 4)
"""


class HeapError(Exception):
    """Base class for every error raised by this package"""


class ValidationError(HeapError, ValueError):
    """Operands or documents that do not satisfy a theory's invariants"""


class UniverseMismatchError(ValidationError):
    """Finite sets or contracts built over different universes"""


class InvalidContractError(ValidationError):
    """Assumption/guarantee pair whose union is not the whole universe"""


class InvalidAutomatonError(ValidationError):
    """Automaton document or value violating its structural invariants"""


class AlphabetMismatchError(ValidationError):
    """Binary DFA operation over different alphabets"""


class UnregisteredAlphabetError(ValidationError):
    """Alphabet id missing from the registry of a language sieve"""


class InvalidPermutationError(ValidationError):
    """Component permutation that is not a bijection of the alphabet components"""


class InstanceSchemaError(ValidationError):
    """Problem instance document that fails schema validation"""


class MissingEnumerationError(HeapError):
    """Checker or oracle invoked on a carrier without a finite enumeration"""


class UndefinedResultError(HeapError):
    """The theory defines no result for these operands"""


class NotComposableError(UndefinedResultError):
    """Interface automata whose action sets clash"""


class IncompatibleError(UndefinedResultError):
    """Interface automata whose initial product state is incompatible"""


class QuotientUndefinedError(UndefinedResultError):
    """Closed-form quotient hit an undefined composition"""


class VerificationError(HeapError):
    """A closed-form result was contradicted by a brute-force oracle"""
