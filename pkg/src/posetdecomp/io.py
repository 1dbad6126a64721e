"""JSON readers and writers for every file format the command line uses."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .catalog import boolean_lattice, chain, antichain, partition_lattice, quadrangle_plus_bottom
from .complexes import Face, FacePoset
from .decomp import DecompositionSet, decomposition_set_from_triples
from .errors import ParseError
from .geometry import Realization, realization_from_dict
from .poset import Poset, parse_poset


def dumps(obj: Any) -> str:
    """Deterministic JSON text (stable key order from the writers, UTF-8, trailing newline)."""
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def load_json(source) -> Any:
    """Inline JSON (text starting with ``{`` or ``[``) or a path to a JSON file."""
    if isinstance(source, (dict, list)):
        return source
    text = str(source)
    if not text.lstrip().startswith(("{", "[")):
        try:
            text = Path(text).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {source!r:.60}: {exc}") from None


def preset_poset(name: str) -> Poset:
    """``B3``, ``chain:4``, ``antichain:3``, ``partition:4``, ``quadrangle``."""
    kind, _, arg = name.partition(":")
    try:
        if kind.startswith("B") and kind[1:].isdigit():
            return boolean_lattice(int(kind[1:]))
        if kind == "chain":
            return chain(int(arg))
        if kind == "antichain":
            return antichain(int(arg))
        if kind == "partition":
            return partition_lattice(int(arg))
    except ValueError:
        pass
    if kind == "quadrangle":
        return quadrangle_plus_bottom()
    raise ParseError(f"unknown poset preset {name!r}")


def read_poset(source) -> Poset:
    if isinstance(source, str) and source.startswith("preset:"):
        return preset_poset(source[len("preset:"):])
    return parse_poset(load_json(source))


def read_decomposition_set(P: Poset, source) -> DecompositionSet:
    data = load_json(source)
    if not isinstance(data, dict) or not isinstance(data.get("triples", []), list):
        raise ParseError("decomposition-set file needs a 'triples' list")
    return decomposition_set_from_triples(P, data.get("triples", []))


def read_realization(P: Poset, source) -> Realization:
    data = load_json(source)
    try:
        return realization_from_dict(P, data)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def read_building_set(P: Poset, source) -> frozenset:
    data = load_json(source)
    members = data.get("members") if isinstance(data, dict) else None
    if not isinstance(members, list):
        raise ParseError("building-set file needs a 'members' list")
    for m in members:
        if m not in P:
            raise ParseError(f"unknown element {m!r} in building set")
    return frozenset(members)


def face_poset_from_dict(P: Poset, data: dict) -> FacePoset:
    try:
        faces = [Face(frozenset(f["members"]), tuple(f["generator"])) for f in data["faces"]]
        covers = [tuple(c) for c in data["covers"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad face-poset document: {exc}") from None
    return FacePoset(P, faces, covers)
