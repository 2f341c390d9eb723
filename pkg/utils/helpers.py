"""
Utility functions for reading operand documents and writing result documents
"""
import json
from pathlib import Path
from typing import Optional

from config.settings import CLI_CONFIG
from utils.errors import ValidationError


def load_json(path: Optional[str]) -> Optional[dict]:
    """Read a JSON document; None passes through for omitted operands"""
    if path is None:
        return None
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path} is not valid JSON: {e}") from e


def _jsonable(value):
    if isinstance(value, (set, frozenset)):
        return sorted((_jsonable(v) for v in value), key=repr)
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


def dump_document(document: dict) -> str:
    """Canonical rendering: sorted keys, fixed indentation, trailing newline"""
    return json.dumps(_jsonable(document), sort_keys=True, indent=CLI_CONFIG["json_indent"]) + "\n"


def write_document(document: dict, out: Optional[str]) -> str:
    text = dump_document(document)
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text
