"""Deterministic JSON emission, comparison, and schema validation.

Every CLI command funnels its payload through :func:`dumps` so that repeated
invocations with identical inputs produce byte-identical output: keys are
sorted, indentation is fixed, exact scalars are rendered as strings, and a
single trailing newline is appended.  Floating-point values appear only in
the numeric (parabolic-dynamics) payloads and use Python's shortest-repr
float formatting, which is itself deterministic.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, List, Optional

from .scalars import GaussianRational, TauScalar
from .towers import FieldElement

_FLOAT_REL_TOL = 1e-9
_FLOAT_ABS_TOL = 1e-12


def to_jsonable(obj: Any) -> Any:
    """Recursively convert toolkit objects into plain JSON-serializable data.

    Exact scalars become strings; complex floats become ``[re, im]`` pairs;
    objects exposing ``to_json`` are converted through it.
    """
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (GaussianRational, TauScalar, FieldElement)):
        return str(obj)
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def dumps(payload: Any) -> str:
    """Serialize a payload deterministically (sorted keys, fixed layout)."""
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2,
                      ensure_ascii=True) + "\n"


def load(path) -> Any:
    """Read a JSON document from ``path``."""
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _floats_close(a: float, b: float) -> bool:
    if math.isnan(a) and math.isnan(b):
        return True
    return math.isclose(a, b, rel_tol=_FLOAT_REL_TOL, abs_tol=_FLOAT_ABS_TOL)


def diff_json(expected: Any, actual: Any, path: str = "$") -> List[str]:
    """Field-by-field comparison of two JSON-able documents.

    Returns a list of human-readable mismatch descriptions (empty when the
    documents agree).  Non-float leaves must match exactly; float leaves are
    compared with a tight relative tolerance so that serialization round
    trips cannot produce spurious diffs.
    """
    expected = to_jsonable(expected)
    actual = to_jsonable(actual)
    diffs: List[str] = []
    if isinstance(expected, dict) and isinstance(actual, dict):
        for key in sorted(expected):
            if key not in actual:
                diffs.append(f"{path}.{key}: missing from actual output")
            else:
                diffs.extend(diff_json(expected[key], actual[key], f"{path}.{key}"))
        for key in sorted(actual):
            if key not in expected:
                diffs.append(f"{path}.{key}: unexpected key (value {actual[key]!r})")
        return diffs
    if isinstance(expected, list) and isinstance(actual, list):
        if len(expected) != len(actual):
            diffs.append(f"{path}: length {len(actual)} != expected {len(expected)}")
            return diffs
        for i, (e, a) in enumerate(zip(expected, actual)):
            diffs.extend(diff_json(e, a, f"{path}[{i}]"))
        return diffs
    if isinstance(expected, float) or isinstance(actual, float):
        if isinstance(expected, (int, float)) and isinstance(actual, (int, float)) \
                and not isinstance(expected, bool) and not isinstance(actual, bool) \
                and _floats_close(float(expected), float(actual)):
            return diffs
        diffs.append(f"{path}: {actual!r} != expected {expected!r}")
        return diffs
    if type(expected) is not type(actual) or expected != actual:
        diffs.append(f"{path}: {actual!r} != expected {expected!r}")
    return diffs


def schema_names() -> List[str]:
    """Names of the JSON schemas shipped with the package."""
    root = resources.files("folsing") / "schemas"
    return sorted(p.name[:-len(".json")] for p in root.iterdir()
                  if p.name.endswith(".json"))


def load_schema(name: str) -> dict:
    """Load a shipped schema by name (without the ``.json`` suffix)."""
    root = resources.files("folsing") / "schemas"
    return json.loads((root / f"{name}.json").read_text(encoding="utf-8"))


def validate(payload: Any, schema_name: str) -> None:
    """Validate a payload against a shipped schema.

    Raises ``jsonschema.ValidationError`` on mismatch.  The jsonschema
    dependency is imported lazily so the core library does not require it.
    """
    import jsonschema

    jsonschema.validate(to_jsonable(payload), load_schema(schema_name))
