"""Reading and writing spaces and trees (JSON and CSV)."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .errors import FileError
from .metric_core import Mode, SemiMetricSpace, build_space
from .trees import WeightedTree


def infer_format(path, override=None) -> str:
    if override:
        return override.lower()
    suffix = Path(path).suffix.lower()
    if suffix in (".json", ".csv"):
        return suffix[1:]
    raise FileError(f"cannot infer format of {path!s}; pass --format-in json|csv")


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FileError(f"cannot read {path!s}: {exc.strerror or exc}") from None


def space_from_json(obj) -> SemiMetricSpace:
    if not isinstance(obj, dict) or "d" not in obj:
        raise FileError('space JSON must be an object with a "d" matrix')
    return build_space(obj["d"], obj.get("mode", "metric"), obj.get("labels"))


def space_to_json(space: SemiMetricSpace) -> dict:
    out = {"mode": space.mode.value}
    if space.labels is not None:
        out["labels"] = list(space.labels)
    out["d"] = space.d.tolist()
    return out


def load_space(path, format_in=None, mode=None) -> SemiMetricSpace:
    """Load a space from ``.json`` or ``.csv``; ``mode`` overrides the file's mode."""
    fmt = infer_format(path, format_in)
    text = _read_text(path)
    if fmt == "json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FileError(f"{path!s} is not valid JSON: {exc}") from None
        if mode is not None and isinstance(obj, dict):
            obj = dict(obj, mode=Mode.parse(mode).value)
        return space_from_json(obj)
    if fmt == "csv":
        rows = [line for line in text.splitlines() if line.strip()]
        try:
            d = [[float(v) for v in line.split(",")] for line in rows]
        except ValueError as exc:
            raise FileError(f"{path!s}: {exc}") from None
        return build_space(d, mode or Mode.METRIC)
    raise FileError(f"unknown input format {fmt!r}")


def save_space(space: SemiMetricSpace, path) -> None:
    try:
        Path(path).write_text(json.dumps(space_to_json(space)) + "\n")
    except OSError as exc:
        raise FileError(f"cannot write {path!s}: {exc.strerror or exc}") from None


def load_tree(path) -> WeightedTree:
    text = _read_text(path)
    try:
        obj = json.loads(text)
        edges = tuple(tuple(e) for e in obj["edges"])
        n = int(obj["n"])
        if any(len(e) != 3 for e in edges):
            raise ValueError("edges must be [u, v, weight] triples")
    except (json.JSONDecodeError, KeyError, TypeError, ValueError):
        raise FileError(f'{path!s}: tree JSON must look like {{"n": 3, "edges": [[0, 1, 1.0], ...]}}') from None
    return WeightedTree(n, edges)


def space_digest(space: SemiMetricSpace) -> dict:
    h = hashlib.sha256()
    h.update(space.mode.value.encode())
    h.update(np.ascontiguousarray(space.d, dtype="<f8").tobytes())
    return {
        "kind": "space",
        "n": space.n,
        "mode": space.mode.value,
        "labels": list(space.labels) if space.labels is not None else None,
        "sha256": h.hexdigest(),
    }


def tree_digest(tree: WeightedTree) -> dict:
    h = hashlib.sha256(json.dumps(tree.to_json(), sort_keys=True).encode())
    return {
        "kind": "tree",
        "n": tree.vertex_count,
        "edges": len(tree.edges),
        "sha256": h.hexdigest(),
    }
