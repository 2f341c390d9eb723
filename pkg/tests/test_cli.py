import json
import os
import subprocess
import sys
from pathlib import Path

import pytest
from click.testing import CliRunner

from app import cli
from services.heap_service import HeapCarrier
from services import instance_service
from services.instance_service import RunOptions, verify_solution
from theories.theory_factory import Theory
from utils.errors import IncompatibleError

ROOT = Path(__file__).resolve().parent.parent
SAMPLES = ROOT / "samples"


def sample(name: str) -> str:
    return str(SAMPLES / name)


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, ["run", *args])


# ---------- successful runs ----------


def test_boolean_quotient(runner):
    result = invoke(runner, "--theory", "bool", "--op", "solve-right", "--a", sample("bool_a.json"), "--b", sample("bool_b.json"))
    assert result.exit_code == 0, result.output
    document = json.loads(result.stdout)
    assert document["status"] == "ok"
    assert document["result"]["members"] == ["q"]
    assert document["verification"] == {"solves": True, "method": "exhaustive", "maximal": True, "ok": True}
    assert "bool solve-right: ok" in result.stderr


def test_contract_merge(runner):
    result = invoke(runner, "--theory", "agc", "--op", "merge", "--a", sample("contract_a.json"), "--b", sample("contract_b.json"))
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert document["result"] == {"universe": [1, 2], "assumptions": [], "guarantees": [1, 2]}
    assert "verification" not in document


def test_refinement_query(runner):
    result = invoke(runner, "--theory", "agc", "--op", "refine", "--a", sample("contract_a.json"), "--b", sample("contract_a.json"))
    assert json.loads(result.stdout)["result"] is True


def test_synchronous_language_quotient(runner):
    result = invoke(
        runner,
        "--theory", "lang-sync",
        "--op", "solve-right",
        "--a", sample("lang_l1.json"),
        "--b", sample("lang_sync_target.json"),
        "--sieve", sample("sieve.json"),
        "--bound", "3",
    )
    assert result.exit_code == 0, result.output
    document = json.loads(result.stdout)
    assert document["result"]["index"] == ["x", "y"]
    verification = document["verification"]
    assert verification["method"] == "pointwise"
    assert verification["pointwise"]["maximal"]
    assert verification["pointwise"]["words_checked"] == 1 + 4 + 16 + 64


def test_asynchronous_language_composition(runner):
    result = invoke(runner, "--theory", "lang-async", "--op", "compose", "--a", sample("lang_l1.json"), "--b", sample("lang_l2.json"))
    assert result.exit_code == 0
    words = json.loads(result.stdout)["result"]["language"]["words"]
    assert words == [["a", "c"], ["c", "a"], ["a", "a", "c"], ["a", "c", "a"], ["c", "a", "a"]]


def test_interface_quotient_is_verified_by_sampling(runner):
    result = invoke(runner, "--theory", "ia", "--op", "solve-right", "--a", sample("ia_producer.json"), "--b", sample("ia_spec.json"), "--seed", "1")
    document = json.loads(result.stdout)
    assert document["verification"]["solves"]
    assert document["verification"]["method"] == "sampled"
    assert result.exit_code in (0, 4)


def test_boolean_laws(runner):
    result = invoke(runner, "--theory", "bool", "--op", "axioms", "--a", sample("bool_a.json"))
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert document["result"]["ok"]
    assert document["result"]["identity"]["identity"] == ["p", "q"]


def test_interface_laws_render_automata_witnesses(runner):
    result = invoke(runner, "--theory", "ia", "--op", "axioms", "--a", sample("ia_spec.json"), "--seed", "3")
    assert result.exit_code in (0, 4), result.output
    sampled = json.loads(result.stdout)["result"]["sampled_axioms"]
    assert sampled["checked"]["reflexive"] > 0
    rendered = [w for v in sampled["violations"] for w in v["witnesses"]]
    rendered += [w for entry in sampled["undefined"] for w in entry["witnesses"]]
    assert all(isinstance(w, dict) and "states" in w for w in rendered)


def test_contract_oracle(runner):
    result = invoke(runner, "--theory", "agc", "--op", "oracle-verify", "--a", sample("contract_a.json"))
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert document["result"]["quotients"]["checked"] == 2 * 81
    assert document["result"]["adjunction_failures"] == []


def test_output_file_is_byte_identical_across_runs(runner, tmp_path):
    outputs = []
    for name in ("first.json", "second.json"):
        out = tmp_path / name
        result = invoke(
            runner,
            "--theory", "ia",
            "--op", "solve-right",
            "--a", sample("ia_producer.json"),
            "--b", sample("ia_spec.json"),
            "--seed", "5",
            "--out", str(out),
        )
        assert result.stdout.startswith("ia solve-right")
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    assert outputs[0].endswith(b"\n")


# ---------- failures ----------


def test_malformed_contract_exits_with_validation_status(runner):
    result = invoke(runner, "--theory", "agc", "--op", "compose", "--a", sample("contract_malformed.json"), "--b", sample("contract_b.json"))
    assert result.exit_code == 2
    document = json.loads(result.stdout)
    assert document["status"] == "invalid"
    assert document["error"] == "InvalidContractError"


def test_missing_operand_is_a_schema_error(runner):
    result = invoke(runner, "--theory", "bool", "--op", "compose", "--a", sample("bool_a.json"))
    assert result.exit_code == 2
    assert json.loads(result.stdout)["error"] == "InstanceSchemaError"


def test_invalid_json_is_rejected(runner, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    result = invoke(runner, "--theory", "bool", "--op", "axioms", "--a", str(broken))
    assert result.exit_code == 2


def test_incompatible_automata_exit_with_undefined_status(runner, tmp_path):
    deaf = tmp_path / "deaf.json"
    deaf.write_text(json.dumps({"states": ["e0"], "initial": ["e0"], "inputs": ["u"]}), encoding="utf-8")
    result = invoke(runner, "--theory", "ia", "--op", "compose", "--a", sample("ia_producer.json"), "--b", str(deaf))
    assert result.exit_code == 3
    document = json.loads(result.stdout)
    assert document["status"] == "undefined"
    assert document["error"] == "IncompatibleError"


ONE_STATE_DFA = {"index": ["x"], "states": 1, "initial": 0, "accepting": [0], "delta": [[0, "a", 0], [0, "b", 0]]}


@pytest.mark.parametrize(
    "theory, document, error",
    [
        ("lang-sync", {**ONE_STATE_DFA, "initial": "zero"}, "InvalidAutomatonError"),
        ("lang-sync", {**ONE_STATE_DFA, "accepting": ["0"]}, "InvalidAutomatonError"),
        ("lang-async", {**ONE_STATE_DFA, "delta": [[0, "a", 0], [-1, "b", 0]]}, "InvalidAutomatonError"),
        ("bool", {"universe": [[1], [2]], "members": []}, "ValidationError"),
        ("agc", {"universe": [{"p": 1}], "assumptions": [], "guarantees": []}, "ValidationError"),
    ],
    ids=["initial", "accepting", "negative-state", "bool-universe", "agc-universe"],
)
def test_malformed_operand_files_exit_with_validation_status(runner, tmp_path, theory, document, error):
    operand = tmp_path / "operand.json"
    operand.write_text(json.dumps(document), encoding="utf-8")
    result = invoke(runner, "--theory", theory, "--op", "compose", "--a", str(operand), "--b", str(operand))
    assert result.exit_code == 2, result.output
    document = json.loads(result.stdout)
    assert document["status"] == "invalid"
    assert document["error"] == error


def test_invalid_automaton_document_is_identical_across_hash_seeds(tmp_path):
    operand = tmp_path / "undeclared.json"
    steps = [[f"s{i}", f"x{i + 1}", f"s{i + 1}"] for i in range(4)]
    operand.write_text(json.dumps({"states": [f"s{i}" for i in range(5)], "initial": ["s0"], "steps": steps}), encoding="utf-8")
    command = [sys.executable, "-c", "from app import cli; cli()", "run", "--theory", "ia", "--op", "compose", "--a", str(operand), "--b", str(operand)]
    documents = set()
    for hash_seed in ("1", "2", "3", "4"):
        completed = subprocess.run(
            command, cwd=ROOT, env={**os.environ, "PYTHONHASHSEED": hash_seed}, capture_output=True, text=True, check=False
        )
        assert completed.returncode == 2, completed.stderr
        documents.add(completed.stdout)
    assert len(documents) == 1
    assert "('s0', 'x1', 's1')" in documents.pop()


def test_contradicted_closed_form_exits_with_verification_status(runner, monkeypatch):
    monkeypatch.setattr(instance_service, "verify_solution", lambda *args: {"solves": False, "ok": False})
    result = invoke(runner, "--theory", "bool", "--op", "solve-right", "--a", sample("bool_a.json"), "--b", sample("bool_b.json"))
    assert result.exit_code == 4
    document = json.loads(result.stdout)
    assert document["status"] == "verification_failed"
    assert document["error"] == "VerificationError"
    assert document["result"]["members"] == ["q"]


def test_undefined_check_of_a_closed_form_is_a_failed_verification():
    def incompatible(a, b):
        raise IncompatibleError("initial product state is incompatible")

    theory = Theory(
        tag="ia",
        carrier=HeapCarrier(name="clash", le=lambda a, b: True, mu=incompatible, gamma=lambda a: a),
        parse=lambda d: d,
        render=lambda x: x,
        size=10**6,
    )
    block = verify_solution(theory, "right", "p", "q", "r", RunOptions())
    assert block["solves"] is False
    assert block["solves_error"] == "IncompatibleError"
    assert block["ok"] is False
    assert block["maximality"] == "unverified"


def test_unknown_theory_is_rejected_by_the_parser(runner):
    result = invoke(runner, "--theory", "groups", "--op", "compose")
    assert result.exit_code == 2
    assert "groups" in result.stderr


# ---------- info ----------


def test_info_lists_theories_and_configuration(runner):
    result = runner.invoke(cli, ["info"])
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert "lang-async" in document["theories"]
    assert document["config"]["cli"]["exit_codes"]["undefined"] == 3
