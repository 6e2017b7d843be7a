"""
SIL — Structure Files
Loads and validates JSON structure, span, cospan and diagram files.

Structure file:
  { "vocabulary": {"relations": {"E": 2}, "functions": {}},
    "universe": [0, 1, 2],
    "relations": {"E": [[0, 1], [1, 0]]},
    "functions": {} }

Function tables are rows [arg1, ..., argk, value]. Symmetric relations list
both orientations. Span, cospan and diagram files name their structures
inline or by a path relative to the file, and their maps as [[x, y], ...]:
  { "kind": "diagram", "base": ..., "left": ..., "right": ..., "apex": ...,
    "f1": [...], "f2": [...], "g1": [...], "g2": [...] }
"""

import json
import os
from typing import List, Optional, Tuple

from .diagrams import AmalgamationDiagram, DiagramError, Span
from .structures import Embedding, FinStructure, StructureError, Vocabulary, VocabularyMismatchError

STRUCTURE_KEYS = {"vocabulary", "universe"}
DIAGRAM_KINDS = {
    "span": ("base", "left", "right", "f1", "f2"),
    "cospan": ("left", "right", "apex", "g1", "g2"),
    "diagram": ("base", "left", "right", "apex", "f1", "f2", "g1", "g2"),
}


class StructureLoadError(Exception):
    """Raised when a structure or diagram file cannot be read or fails validation."""
    pass


# -----------------------------------------------------------------------------
# Reading
# -----------------------------------------------------------------------------

def _read_json(path: str):
    if not os.path.exists(path):
        raise StructureLoadError(f"Structure file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise StructureLoadError(f"{path}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}")


def check_structure_data(data) -> dict:
    """Shape check of a parsed structure file: {"passed": bool, "detail": str}."""
    if not isinstance(data, dict):
        return {"passed": False, "detail": "top level must be an object"}
    missing = STRUCTURE_KEYS - set(data)
    if missing:
        return {"passed": False, "detail": f"missing required keys: {sorted(missing)}"}
    vocab = data["vocabulary"]
    if not isinstance(vocab, dict):
        return {"passed": False, "detail": "field 'vocabulary' must be an object"}
    for part in ("relations", "functions"):
        table = vocab.get(part, {})
        if not isinstance(table, dict):
            return {"passed": False, "detail": f"field 'vocabulary.{part}' must be an object"}
        for name, arity in table.items():
            if not isinstance(arity, int) or isinstance(arity, bool):
                return {"passed": False, "detail": f"field 'vocabulary.{part}.{name}' must be an integer arity"}
    if not isinstance(data["universe"], list):
        return {"passed": False, "detail": "field 'universe' must be a list"}
    for i, x in enumerate(data["universe"]):
        if not isinstance(x, int) or isinstance(x, bool) or x < 0:
            return {"passed": False, "detail": f"field 'universe[{i}]' must be a non-negative integer, got {x!r}"}
    for part in ("relations", "functions"):
        tables = data.get(part, {})
        if not isinstance(tables, dict):
            return {"passed": False, "detail": f"field '{part}' must be an object"}
        for name, rows in tables.items():
            if not isinstance(rows, list):
                return {"passed": False, "detail": f"field '{part}.{name}' must be a list of rows"}
            for i, row in enumerate(rows):
                if not isinstance(row, list):
                    return {"passed": False, "detail": f"field '{part}.{name}[{i}]' must be a list"}
    return {"passed": True, "detail": "ok"}


def parse_structure(data, source: str = "<inline>") -> FinStructure:
    check = check_structure_data(data)
    if not check["passed"]:
        raise StructureLoadError(f"{source}: {check['detail']}")
    try:
        vocab = Vocabulary(data["vocabulary"].get("relations", {}), data["vocabulary"].get("functions", {}))
        rels = {n: [tuple(t) for t in rows] for n, rows in data.get("relations", {}).items()}
        fns = data.get("functions", {})
        for name, rows in fns.items():
            arity = dict(vocab.functions).get(name)
            for i, row in enumerate(rows):
                if arity is not None and len(row) != arity + 1:
                    raise StructureLoadError(
                        f"{source}: field 'functions.{name}[{i}]' needs {arity + 1} entries, got {len(row)}")
        return FinStructure(vocab, data["universe"], rels, fns)
    except StructureError as e:
        raise StructureLoadError(f"{source}: {e}")


def load_structure(path: str) -> FinStructure:
    """Load one structure file."""
    return parse_structure(_read_json(path), path)


def load_structure_dir(path: str) -> List[FinStructure]:
    """Every structure file (``*.json`` without a ``kind``) in a directory, by file name."""
    if not os.path.isdir(path):
        raise StructureLoadError(f"Structure directory not found: {path}")
    out = []
    for fname in sorted(os.listdir(path)):
        if not fname.endswith(".json"):
            continue
        full = os.path.join(path, fname)
        data = _read_json(full)
        if isinstance(data, dict) and "kind" in data:
            continue
        out.append(parse_structure(data, full))
    return out


def list_structures(path: str) -> list:
    """Names of the structure files in a directory."""
    return sorted(f[:-5] for f in os.listdir(path) if f.endswith(".json"))


# -----------------------------------------------------------------------------
# Diagrams
# -----------------------------------------------------------------------------

def _resolve(ref, where: str, field: str) -> FinStructure:
    if isinstance(ref, str):
        return load_structure(os.path.join(os.path.dirname(where), ref))
    return parse_structure(ref, f"{where}: field '{field}'")


def _mapping(rows, where: str, field: str) -> dict:
    if isinstance(rows, dict):
        try:
            return {int(k): int(v) for k, v in rows.items()}
        except (TypeError, ValueError):
            raise StructureLoadError(f"{where}: field '{field}' must map integers to integers")
    if not isinstance(rows, list) or not all(isinstance(r, list) and len(r) == 2 for r in rows):
        raise StructureLoadError(f"{where}: field '{field}' must be a list of [x, y] pairs")
    return {x: y for x, y in rows}


def _embedding(source: FinStructure, target: FinStructure, rows, where: str, field: str) -> Embedding:
    try:
        return Embedding(source, target, _mapping(rows, where, field))
    except (StructureError, VocabularyMismatchError) as e:
        raise StructureLoadError(f"{where}: field '{field}': {e}")


def _load_parts(path: str, accepted: Tuple[str, ...]) -> Tuple[str, dict]:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise StructureLoadError(f"{path}: top level must be an object")
    kind = data.get("kind")
    if kind not in accepted:
        raise StructureLoadError(f"{path}: field 'kind' must be one of {list(accepted)}, got {kind!r}")
    missing = [k for k in DIAGRAM_KINDS[kind] if k not in data]
    if missing:
        raise StructureLoadError(f"{path}: missing required keys: {missing}")
    return kind, data


def load_span(path: str) -> Span:
    """A span file, or the span of a diagram file."""
    kind, data = _load_parts(path, ("span", "diagram"))
    if kind == "diagram":
        return load_diagram(path).span
    base, left, right = (_resolve(data[k], path, k) for k in ("base", "left", "right"))
    try:
        return Span(_embedding(base, left, data["f1"], path, "f1"), _embedding(base, right, data["f2"], path, "f2"))
    except DiagramError as e:
        raise StructureLoadError(f"{path}: {e}")


def load_cospan(path: str) -> Tuple[Embedding, Embedding]:
    """A cospan file, or the legs g1, g2 of a diagram file."""
    kind, data = _load_parts(path, ("cospan", "diagram"))
    if kind == "diagram":
        d = load_diagram(path)
        return d.g1, d.g2
    left, right, apex = (_resolve(data[k], path, k) for k in ("left", "right", "apex"))
    return _embedding(left, apex, data["g1"], path, "g1"), _embedding(right, apex, data["g2"], path, "g2")


def load_diagram(path: str) -> AmalgamationDiagram:
    """A diagram file; the square must commute."""
    _, data = _load_parts(path, ("diagram",))
    base, left, right, apex = (_resolve(data[k], path, k) for k in ("base", "left", "right", "apex"))
    try:
        span = Span(_embedding(base, left, data["f1"], path, "f1"), _embedding(base, right, data["f2"], path, "f2"))
        return AmalgamationDiagram(
            span,
            _embedding(left, apex, data["g1"], path, "g1"),
            _embedding(right, apex, data["g2"], path, "g2"),
        )
    except DiagramError as e:
        raise StructureLoadError(f"{path}: {e}")


def dump_structure(M: FinStructure, path: Optional[str] = None) -> str:
    text = json.dumps(M.to_dict(), indent=2)
    if path is not None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    return text
