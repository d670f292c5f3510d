"""System-file loading, canonical JSON reports and content hashing.

Every numeric field in a report is an exact string (rational or interval
endpoint pair), never a float, so embedded certificates re-verify exactly.
Report bytes are canonical (sorted keys, fixed separators, trailing newline);
the manifest carries timestamps and the report body hash.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .dynamics import PolySystem
from .polynomials import Poly


def canonical_json_bytes(obj) -> bytes:
    return (
        json.dumps(obj, sort_keys=True, ensure_ascii=True, separators=(",", ":"))
        + "\n"
    ).encode("utf-8")


def content_hash(obj) -> str:
    return hashlib.sha256(canonical_json_bytes(obj)).hexdigest()


def load_system(path) -> PolySystem:
    """Read a system file: a JSON array of coefficient lists, low to high."""
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"system file not found: {p}")
    try:
        raw = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"system file {p} is not valid JSON: {exc}") from exc
    if not isinstance(raw, list) or not raw:
        raise ValueError(
            f"system file {p}: expected a non-empty JSON array of polynomials"
        )
    polys = []
    for idx, entry in enumerate(raw):
        if not isinstance(entry, list) or not entry:
            raise ValueError(
                f"system file {p}: polynomial #{idx} must be a non-empty "
                "coefficient array (low to high degree)"
            )
        try:
            polys.append(Poly.from_json(entry))
        except ValueError as exc:
            raise ValueError(
                f"system file {p}: polynomial #{idx}: {exc}"
            ) from exc
    try:
        return PolySystem(polys)
    except ValueError as exc:
        raise ValueError(f"system file {p}: {exc}") from exc


def save_system(sys: PolySystem, path) -> None:
    Path(path).write_text(json.dumps(sys.to_json(), indent=2) + "\n")
