"""
Configuration settings for the preorder heap toolkit

Every value can be overridden through an environment variable (a `.env` file
in the working directory is loaded by app.py before this module is read).
The defaults keep every exhaustive check at desk scale.
"""
import os


def _int_env(name, default):
    return int(os.getenv(name, default))


# Exhaustive/sampled axiom checking
AXIOM_CHECK_CONFIG = {
    "witness_cap": _int_env("HEAP_WITNESS_CAP", 10),
    "sample_size": _int_env("HEAP_SAMPLE_SIZE", 40),
    "seed": _int_env("HEAP_SEED", 0),
}

# Brute-force oracles
ORACLE_CONFIG = {
    "max_universe": _int_env("HEAP_ORACLE_MAX_UNIVERSE", 4),
    "max_word_length": _int_env("HEAP_ORACLE_MAX_WORD_LENGTH", 4),
    "max_carrier": _int_env("HEAP_ORACLE_MAX_CARRIER", 100),
}

# Language heaps and sieves
LANGUAGE_CONFIG = {
    "sieve_bound": _int_env("HEAP_SIEVE_BOUND", 3),
    "sampled_languages": _int_env("HEAP_SIEVE_SAMPLED_LANGUAGES", 4),
    "fixture_pairs": _int_env("HEAP_LANGUAGE_FIXTURE_PAIRS", 12),
    "fixture_seed": _int_env("HEAP_LANGUAGE_FIXTURE_SEED", 7),
}

# Interface automata corpora
IA_SAMPLE_CONFIG = {
    "max_states": _int_env("HEAP_IA_MAX_STATES", 4),
    "max_actions_per_kind": _int_env("HEAP_IA_MAX_ACTIONS", 3),
    "corpus_size": _int_env("HEAP_IA_CORPUS_SIZE", 100),
    "candidate_count": _int_env("HEAP_IA_CANDIDATES", 20),
    "max_candidate_draws": _int_env("HEAP_IA_MAX_DRAWS", 400),
    "seed": _int_env("HEAP_IA_SEED", 2024),
}

# Command-line front end
CLI_CONFIG = {
    "exit_codes": {
        "success": 0,
        "error": 1,
        "validation": 2,
        "undefined": 3,
        "verification": 4,
    },
    # Above these sizes solve results carry an "unverified" marker
    "verify_limits": {
        "bool": _int_env("HEAP_VERIFY_BOOL_UNIVERSE", 4),
        "agc": _int_env("HEAP_VERIFY_AGC_UNIVERSE", 3),
        "lang": _int_env("HEAP_VERIFY_WORD_LENGTH", 4),
        "ia_states": _int_env("HEAP_VERIFY_IA_STATES", 64),
    },
    "json_indent": 2,
}

LOG_CONFIG = {
    "level": os.getenv("LOG_LEVEL", "WARNING"),
    "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
}

# Theory tags and operations accepted by the CLI
THEORIES = ("bool", "agc", "ia", "lang-sync", "lang-async")

OPERATIONS = (
    "solve-right",
    "solve-left",
    "compose",
    "merge",
    "separate",
    "refine",
    "axioms",
    "oracle-verify",
)
