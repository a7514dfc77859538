"""File formats: POVM and state documents (JSON) and CSV emission.

A POVM document is JSON with a version tag, the dimension, the outcome
labels, and one row-major list of [re, im] entry pairs per outcome. Floats
are serialized with Python's shortest round-trip repr, so
parse(serialize(P)) reproduces P bit-exactly. See docs/file-formats.md.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .povm import Povm, PovmViolation, State, validate_povm

FORMAT_VERSION = "1"


class FileFormatError(ValueError):
    """A document could not be parsed or does not match its schema."""


def _load_json(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FileFormatError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: top level must be a JSON object")
    return doc


def _require(doc: dict, key: str, path) -> object:
    if key not in doc:
        raise FileFormatError(f"{path}: missing required key {key!r}")
    return doc[key]


def _check_version(doc: dict, path) -> None:
    version = _require(doc, "format_version", path)
    if version != FORMAT_VERSION:
        raise FileFormatError(
            f"{path}: unsupported format_version {version!r} (expected {FORMAT_VERSION!r})"
        )


def _parse_matrix(entries, dim: int, path, what: str) -> np.ndarray:
    if not isinstance(entries, list) or len(entries) != dim * dim:
        raise FileFormatError(
            f"{path}: {what} must be a row-major list of {dim * dim} [re, im] pairs"
        )
    flat = np.empty(dim * dim, dtype=complex)
    for i, pair in enumerate(entries):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
        ):
            raise FileFormatError(f"{path}: {what} entry {i} is not a [re, im] number pair")
        flat[i] = complex(pair[0], pair[1])
    if not np.isfinite(flat).all():
        raise FileFormatError(f"{path}: {what} contains non-finite entries")
    return flat.reshape(dim, dim)


def _matrix_to_pairs(m: np.ndarray) -> list[list[float]]:
    flat = np.asarray(m, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def load_povm(path) -> tuple[Povm, list[PovmViolation]]:
    """Parse a POVM document; returns the POVM and its validation report.

    Schema problems raise FileFormatError; axiom violations are returned as
    data so callers can decide between strict and lenient handling.
    """
    doc = _load_json(path)
    _check_version(doc, path)
    dim = _require(doc, "dim", path)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FileFormatError(f"{path}: dim must be a positive integer")
    outcomes = _require(doc, "outcomes", path)
    if (
        not isinstance(outcomes, list)
        or not outcomes
        or not all(isinstance(o, str) for o in outcomes)
    ):
        raise FileFormatError(f"{path}: outcomes must be a nonempty list of strings")
    if len(set(outcomes)) != len(outcomes):
        raise FileFormatError(f"{path}: outcome labels must be distinct")
    elements = _require(doc, "elements", path)
    if not isinstance(elements, dict) or set(elements) != set(outcomes):
        raise FileFormatError(f"{path}: elements must map exactly the outcome labels")
    mats = np.stack(
        [_parse_matrix(elements[o], dim, path, f"element {o!r}") for o in outcomes]
    )
    povm = Povm(tuple(outcomes), mats)
    return povm, validate_povm(povm)


def save_povm(p: Povm, path) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "dim": p.dim,
        "outcomes": list(p.outcomes),
        "elements": {o: _matrix_to_pairs(p[o]) for o in p.outcomes},
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_state(path) -> State:
    doc = _load_json(path)
    _check_version(doc, path)
    dim = _require(doc, "dim", path)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FileFormatError(f"{path}: dim must be a positive integer")
    matrix = _parse_matrix(_require(doc, "matrix", path), dim, path, "matrix")
    return State(matrix)


def save_state(s: State, path) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "dim": s.dim,
        "matrix": _matrix_to_pairs(s.matrix),
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_outcome_map_pairs(path) -> list[tuple[str, str]]:
    """Parse a two-column `source target` text file into assignment pairs.

    Blank lines and lines starting with '#' are ignored. Labels must not
    contain whitespace.
    """
    pairs: list[tuple[str, str]] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if len(fields) != 2:
            raise FileFormatError(
                f"{path}: line {lineno}: expected two whitespace-separated labels, "
                f"got {len(fields)}"
            )
        pairs.append((fields[0], fields[1]))
    if not pairs:
        raise FileFormatError(f"{path}: no assignment lines found")
    seen = set()
    for src, _ in pairs:
        if src in seen:
            raise FileFormatError(f"{path}: duplicate source label {src!r}")
        seen.add(src)
    return pairs


def format_float(x: float) -> str:
    """Fixed 12-significant-digit rendering used for all emitted numbers."""
    return f"{x:.12g}"


def write_csv(path, header: list[str], rows) -> None:
    """Write rows of floats with deterministic formatting."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
