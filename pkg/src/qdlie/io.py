"""JSON ingestion and deterministic JSON/CSV output."""

import csv
import enum
import io
import json
import math

import numpy as np

from .exceptions import InvalidInputError
from .validation import check_endomorphism

SCHEMA = "qdlie/1"


def _parse(text, source):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"{source}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None
    return _parse(text, str(path))


def matrix_from_obj(obj, source="input"):
    """``{"dim": n, "rows": [[...], ...]}`` (row-major) to an array."""
    if not isinstance(obj, dict) or "rows" not in obj:
        raise InvalidInputError(f'{source}: expected an object with "dim" and "rows"')
    D = check_endomorphism(obj["rows"])
    dim = obj.get("dim", D.shape[0])
    if dim != D.shape[0]:
        raise InvalidInputError(f'{source}: "dim" is {dim} but rows give {D.shape[0]}')
    return D


def matrix_to_obj(D):
    D = np.asarray(D, dtype=float)
    return {"dim": int(D.shape[0]), "rows": D.tolist()}


def load_matrix(path):
    return matrix_from_obj(read_json(path), str(path))


def loads_matrix(text):
    return matrix_from_obj(_parse(text, "input"))


def load_group(path):
    """A matrix document, or ``{"structure_constants": [[[...]]]}``."""
    from .classifier import GroupSpec

    obj = read_json(path)
    if isinstance(obj, dict) and "structure_constants" in obj:
        return GroupSpec.from_structure_constants(obj["structure_constants"])
    return GroupSpec.from_matrix(matrix_from_obj(obj, str(path)))


def to_jsonable(obj):
    """Recursively convert numpy and enum values; non-finite floats become strings."""
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, enum.Enum):
        return to_jsonable(obj.value)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def dumps(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def report(kind, body, tolerances, params=None):
    """Versioned envelope shared by all CLI outputs."""
    return {"schema": SCHEMA, "kind": kind, "tolerances": tolerances, "params": params or {},
            "result": body}


def csv_text(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in np.atleast_2d(np.asarray(rows)) if len(rows) else []:
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
