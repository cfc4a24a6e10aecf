"""JSON file formats for matrices, modules, spans, systems, diagrams and tables.

Every loader raises :class:`MalformedFile` naming the offending field.
"""

from __future__ import annotations

import json
from pathlib import Path

from semik.bratteli import BratteliPresentation
from semik.core import NEG_INF, TROP, SemiMatrix, kernel_from_label, trop_str
from semik.errors import MalformedFile, SemikError
from semik.kflow import DirectLimitSystem
from semik.lattice import BoolSemimodule, validate
from semik.tables import FiniteSemiringTable
from semik.tropical import TropSpan


def read_json(path) -> tuple:
    """``(document, raw_bytes)``."""
    raw = Path(path).read_bytes()
    try:
        return json.loads(raw), raw
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: {exc.msg}", line=exc.lineno) from None
    except UnicodeDecodeError:
        raise MalformedFile(f"{path}: not UTF-8 text") from None


def _need(doc, key, kind):
    if not isinstance(doc, dict):
        raise MalformedFile("top level must be an object")
    if key not in doc:
        raise MalformedFile("missing field", field=key)
    value = doc[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise MalformedFile("expected an integer", field=key)
    if kind is list and not isinstance(value, list):
        raise MalformedFile("expected a list", field=key)
    return value


def _int_matrix(value, name):
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise MalformedFile("expected a list of rows", field=name)
    for r in value:
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
            raise MalformedFile("expected integer entries", field=name)
    return value


def _wrap(field, fn, *args):
    try:
        return fn(*args)
    except MalformedFile:
        raise
    except (SemikError, TypeError, ValueError) as exc:
        raise MalformedFile(str(exc), field=field) from None


# ---- matrices

def matrix_from_json(doc) -> SemiMatrix:
    label = _need(doc, "kernel", str)
    kernel = _wrap("kernel", kernel_from_label, label)
    rows, cols = _need(doc, "rows", int), _need(doc, "cols", int)
    entries = _need(doc, "entries", list)
    return _wrap("entries", SemiMatrix, kernel, rows, cols, tuple(entries))


def matrix_to_json(A: SemiMatrix) -> dict:
    if A.kernel is TROP:
        entries = [trop_str(x) for x in A.entries]
    else:
        entries = [int(x) for x in A.entries]
    return {"kernel": A.kernel.label, "rows": A.rows, "cols": A.cols, "entries": entries}


# ---- Boolean semimodules

def module_from_json(doc) -> BoolSemimodule:
    if isinstance(doc, dict) and "coords" in doc:
        coords = _need(doc, "coords", list)
        M = _wrap("coords", BoolSemimodule.from_coords, coords)
    else:
        n = _need(doc, "n", int)
        join = _int_matrix(_need(doc, "join", list), "join")
        bottom = _need(doc, "bottom", int)
        M = BoolSemimodule(n, tuple(map(tuple, join)), bottom)
    bad = validate(M)
    if bad is not None:
        raise MalformedFile(str(bad), field="join")
    return M


# ---- tropical spans

def span_from_json(doc) -> TropSpan:
    ambient = _need(doc, "ambient", int)
    gens = _need(doc, "generators", list)
    return _wrap("generators", TropSpan, ambient, tuple(gens))


def span_to_json(sp: TropSpan) -> dict:
    return sp.to_json()


def trop_entries(v) -> list:
    return [trop_str(x) for x in v]


# ---- direct systems and diagrams

def system_from_json(doc) -> DirectLimitSystem:
    units = _int_matrix(_need(doc, "units", list), "units")
    maps = _need(doc, "maps", list)
    for k, m in enumerate(maps):
        _int_matrix(m, f"maps[{k}]")
    period = doc.get("period")
    if period is not None and (isinstance(period, bool) or not isinstance(period, int)):
        raise MalformedFile("expected an integer", field="period")
    return _wrap("maps", DirectLimitSystem, tuple(map(tuple, units)), tuple(maps), period)


def diagram_from_json(doc) -> BratteliPresentation:
    levels = _int_matrix(_need(doc, "levels", list), "levels")
    steps = doc.get("steps", [])
    if not isinstance(steps, list):
        raise MalformedFile("expected a list", field="steps")
    for k, s in enumerate(steps):
        _int_matrix(s, f"steps[{k}]")
    period = doc.get("period")
    if period is not None and (isinstance(period, bool) or not isinstance(period, int)):
        raise MalformedFile("expected an integer", field="period")
    field = doc.get("field", "BOOL")
    return _wrap("steps", BratteliPresentation, tuple(map(tuple, levels)), tuple(steps), period, str(field))


# ---- tables

def table_from_json(doc) -> FiniteSemiringTable:
    order = _need(doc, "order", int)
    add = _int_matrix(_need(doc, "add", list), "add")
    mul = _int_matrix(_need(doc, "mul", list), "mul")
    zero, one = _need(doc, "zero", int), _need(doc, "one", int)
    name = doc.get("name", "")
    return _wrap("order", FiniteSemiringTable, order, tuple(map(tuple, add)),
                 tuple(map(tuple, mul)), zero, one, str(name))


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def _default(x):
    if x is NEG_INF:
        return "-inf"
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, (tuple, set, frozenset)):
        return list(x)
    return str(x)
