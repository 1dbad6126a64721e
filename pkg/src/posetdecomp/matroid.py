"""Matroids given by bases, lattices of flats, matroid types and Bergman fans."""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .catalog import name_set, set_name
from .complexes import FacePoset, _inclusion_covers, decomposition_complex, maximal_chains_of
from .decomp import closure, maximal_decomposition_set
from .errors import InvariantError, ParseError, PreconditionError, ResourceError
from .geometry import Realization, verify_realization
from .poset import Poset

log = logging.getLogger(__name__)

DEFAULT_TYPE_CAP = 8
OUTSIDE = "OUTSIDE"


@dataclass(frozen=True)
class Matroid:
    ground_size: int
    bases: frozenset

    @property
    def ground(self) -> frozenset:
        return frozenset(range(1, self.ground_size + 1))

    @cached_property
    def rank(self) -> int:
        return len(next(iter(self.bases)))

    def rank_of(self, A: Iterable[int]) -> int:
        A = frozenset(A)
        return max(len(A & b) for b in self.bases)

    def closure(self, A: Iterable[int]) -> frozenset:
        A = frozenset(A)
        r = self.rank_of(A)
        return frozenset(e for e in self.ground if e in A or self.rank_of(A | {e}) == r)

    def is_flat(self, A: Iterable[int]) -> bool:
        A = frozenset(A)
        return self.closure(A) == A

    @cached_property
    def flats(self) -> tuple:
        out = []
        for k in range(self.ground_size + 1):
            for c in itertools.combinations(range(1, self.ground_size + 1), k):
                if self.is_flat(c):
                    out.append(frozenset(c))
        return tuple(out)

    def loops(self) -> frozenset:
        return frozenset(e for e in self.ground if self.rank_of({e}) == 0)

    def is_simple(self) -> bool:
        if self.loops():
            return False
        return all(self.rank_of(p) == 2 for p in itertools.combinations(sorted(self.ground), 2))

    @cached_property
    def components(self) -> tuple:
        """Connected components (minimal non-empty separators)."""
        E = self.ground
        r = self.rank
        seps = [frozenset(c) for k in range(1, self.ground_size + 1)
                for c in itertools.combinations(sorted(E), k)
                if self.rank_of(c) + self.rank_of(E - frozenset(c)) == r]
        minimal = [s for s in seps if not any(t < s for t in seps)]
        return tuple(sorted(minimal, key=lambda s: sorted(s)))

    def to_dict(self) -> dict:
        return {"type": "bases", "n": self.ground_size, "bases": sorted(sorted(b) for b in self.bases)}


def _check_exchange(bases: frozenset):
    for b1 in bases:
        for b2 in bases:
            for x in b1 - b2:
                if not any((b1 - {x}) | {y} in bases for y in b2 - b1):
                    return (sorted(b1), sorted(b2))
    return None


def _graphic_bases(vertices: int, edges: Sequence) -> frozenset:
    def forest_size(idx):
        parent = list(range(vertices))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        size = 0
        for i in idx:
            u, v = edges[i]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                size += 1
        return size

    r = forest_size(range(len(edges)))
    return frozenset(frozenset(i + 1 for i in c) for c in itertools.combinations(range(len(edges)), r)
                     if forest_size(c) == r)


def matroid_from(spec, check_axioms: bool = True) -> Matroid:
    """Build a matroid from ``{"type": "uniform"|"graphic"|"bases", ...}`` (dict or JSON text)."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ParseError(f"matroid description is not valid JSON: {exc}") from None
    if not isinstance(spec, Mapping):
        raise ParseError("matroid description must be an object")
    kind = spec.get("type")
    try:
        if kind == "uniform":
            r, n = int(spec["r"]), int(spec["n"])
            if not 0 <= r <= n:
                raise ParseError("uniform matroid needs 0 <= r <= n")
            n_ground = n
            bases = frozenset(frozenset(c) for c in itertools.combinations(range(1, n + 1), r))
        elif kind == "graphic":
            nv = int(spec["vertices"])
            edges = [tuple(int(v) for v in e) for e in spec["edges"]]
            for u, v in edges:
                if not (0 <= u < nv and 0 <= v < nv):
                    raise ParseError(f"edge ({u}, {v}) uses an unknown vertex")
            n_ground = len(edges)
            bases = _graphic_bases(nv, edges)
        elif kind == "bases":
            n_ground = int(spec["n"])
            bases = frozenset(frozenset(int(e) for e in b) for b in spec["bases"])
            for b in bases:
                if any(e < 1 or e > n_ground for e in b):
                    raise ParseError(f"basis {sorted(b)} leaves the ground set 1..{n_ground}")
        else:
            raise ParseError(f"unknown matroid type {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad matroid description: {exc}") from None
    if not bases:
        raise ParseError("a matroid needs at least one basis")
    if len({len(b) for b in bases}) != 1:
        raise ParseError("bases have different sizes")
    if check_axioms and n_ground <= 10:
        bad = _check_exchange(bases)
        if bad:
            raise ParseError(f"basis exchange fails for {bad[0]} and {bad[1]}")
    return Matroid(n_ground, bases)


def uniform(r: int, n: int) -> Matroid:
    return matroid_from({"type": "uniform", "r": r, "n": n})


def complete_graph_edges(k: int) -> list:
    return [[i, j] for i in range(k) for j in range(i + 1, k)]


def graphic(vertices: int, edges: Sequence) -> Matroid:
    return matroid_from({"type": "graphic", "vertices": vertices, "edges": list(edges)})


def lattice_of_flats(M: Matroid) -> Poset:
    """Flats ordered by inclusion; ids are :func:`set_name` of the flat."""
    if not M.is_simple():
        log.warning("matroid is not simple; its lattice of flats equals that of the simplification")
    flats = M.flats
    names = [set_name(f) for f in flats]
    rel = [(names[i], names[j]) for i, a in enumerate(flats) for j, b in enumerate(flats) if a < b]
    return Poset(names, rel)


def atom_realization(L: Poset) -> Realization:
    """``phi(x) = {i : a_i <= x}`` with atoms numbered in element order."""
    zero = L.bottom()
    if zero is None:
        raise PreconditionError("lattice needs a minimum")
    atoms = L.upper_covers(zero)
    phi = {x: frozenset(i + 1 for i, a in enumerate(atoms) if L.leq(a, x)) for x in L.elements}
    r = Realization(L, len(atoms), phi)
    ok, bad = verify_realization(L, maximal_decomposition_set(L), r)
    if not ok:
        raise InvariantError(f"atom map is not a realization, failing at {bad}")
    return r


# ---------------------------------------------------------------------------
# matroid types


@dataclass(frozen=True)
class MatroidType:
    parent: Matroid = field(repr=False)
    bases: frozenset

    def names(self) -> list:
        return sorted(set_name(b) for b in self.bases)


def matroid_type(M: Matroid, omega: Sequence) -> MatroidType:
    """Bases of maximum total weight."""
    if len(omega) != M.ground_size:
        raise PreconditionError(f"weight vector needs {M.ground_size} entries")
    w = [Fraction(x) for x in omega]
    scores = {b: sum(w[e - 1] for e in b) for b in M.bases}
    best = max(scores.values())
    return MatroidType(M, frozenset(b for b, s in scores.items() if s == best))


def is_loopfree_type(t: MatroidType) -> bool:
    return frozenset().union(*t.bases) == t.parent.ground


def ordered_set_partitions(items: Sequence):
    items = list(items)
    if not items:
        yield []
        return
    for k in range(1, len(items) + 1):
        for first in itertools.combinations(items, k):
            rest = [x for x in items if x not in first]
            for tail in ordered_set_partitions(rest):
                yield [list(first)] + tail


def level_weights(M: Matroid, blocks: Sequence) -> list:
    m = len(blocks)
    w = [0] * M.ground_size
    for k, block in enumerate(blocks):
        for e in block:
            w[e - 1] = m - k
    return w


@dataclass
class BergmanFacePoset:
    """Loopfree types, ordered by reversed inclusion of their basis sets."""

    matroid: Matroid = field(repr=False)
    types: list
    covers: list

    def __len__(self):
        return len(self.types)

    def leq(self, i: int, j: int) -> bool:
        return self.types[i].bases >= self.types[j].bases


def all_types(M: Matroid, cap: int = DEFAULT_TYPE_CAP) -> list:
    if M.ground_size > cap:
        raise ResourceError(f"type scan limited to ground sets of size {cap}")
    seen = {}
    for blocks in ordered_set_partitions(range(1, M.ground_size + 1)):
        t = matroid_type(M, level_weights(M, blocks))
        seen.setdefault(t.bases, t)
    return list(seen.values())


def bergman_face_poset(M: Matroid, cap: int = DEFAULT_TYPE_CAP) -> BergmanFacePoset:
    if M.loops():
        raise PreconditionError("matroid has loops")
    types = [t for t in all_types(M, cap) if is_loopfree_type(t)]
    types.sort(key=lambda t: (-len(t.bases), sorted(sorted(b) for b in t.bases)))
    # reversed inclusion of basis sets = inclusion of the omitted bases
    covers = _inclusion_covers([frozenset(M.bases - t.bases) for t in types])
    return BergmanFacePoset(M, types, covers)


def psi_flats(M: Matroid, t: MatroidType, flats: Iterable[frozenset] | None = None) -> frozenset:
    """Flats ``A`` with ``rank(A) = |A ∩ b|`` for every basis ``b`` of the type."""
    flats = M.flats if flats is None else flats
    return frozenset(A for A in flats if all(M.rank_of(A) == len(A & b) for b in t.bases))


def _flat_names(flats) -> frozenset:
    return frozenset(set_name(f) for f in flats)


def bergman_faces(M: Matroid, L: Poset | None = None, fp: FacePoset | None = None) -> list:
    """Faces of ``D(L_M, G_max)`` containing both the minimum and the maximum."""
    L = L or lattice_of_flats(M)
    fp = fp or decomposition_complex(L, maximal_decomposition_set(L))
    lo, hi = L.bottom(), L.top()
    return [f for f in fp.faces if lo in f.members and hi in f.members]


def verify_bergman_embedding(M: Matroid, cap: int = DEFAULT_TYPE_CAP):
    """``(ok, reason)`` for the map from loopfree types to faces through 0̂ and 1̂."""
    L = lattice_of_flats(M)
    G = maximal_decomposition_set(L)
    faces = bergman_faces(M, L, decomposition_complex(L, G))
    target = {f.members for f in faces}
    bfp = bergman_face_poset(M, cap)
    images = [_flat_names(psi_flats(M, t)) for t in bfp.types]
    if len(set(images)) != len(images):
        return False, "psi is not injective"
    for i, a in enumerate(images):
        for j, b in enumerate(images):
            if bfp.leq(i, j) != (a <= b):
                return False, f"order mismatch between types {i} and {j}"
    if set(images) != target:
        missing = target - set(images)
        extra = set(images) - target
        return False, f"image mismatch: {len(missing)} faces missed, {len(extra)} extra sets"
    for f in faces:
        for ch in maximal_chains_of(L, f.members):
            omega = [0] * M.ground_size
            for c in ch:
                for e in name_set(c):
                    omega[e - 1] += 1
            if _flat_names(psi_flats(M, matroid_type(M, omega))) != f.members:
                return False, f"chain {ch} does not recover its face"
    return True, None


# ---------------------------------------------------------------------------
# fan


@dataclass(frozen=True)
class Cone:
    flat_chain: tuple
    rays: tuple
    lineality: tuple


def lineality_basis(M: Matroid) -> tuple:
    """``(1,...,1)`` for connected matroids, component incidence vectors otherwise."""
    comps = M.components
    if len(comps) <= 1:
        return (tuple([1] * M.ground_size),)
    return tuple(tuple(1 if e in c else 0 for e in range(1, M.ground_size + 1)) for c in comps)


def _incidence(M: Matroid, flat: frozenset) -> tuple:
    return tuple(1 if e in flat else 0 for e in range(1, M.ground_size + 1))


def bergman_fan_cones(M: Matroid) -> list:
    """One cone per face through 0̂ and 1̂, spanned by the face's proper flats."""
    L = lattice_of_flats(M)
    lo, hi = L.bottom(), L.top()
    lin = lineality_basis(M)
    out = []
    for f in bergman_faces(M, L):
        proper = [x for x in L.sort(f.members) if x not in (lo, hi)]
        chain = [x for x in f.generator if x not in (lo, hi)]
        out.append(Cone(tuple(tuple(sorted(name_set(x))) for x in chain),
                        tuple(_incidence(M, name_set(x)) for x in proper), lin))
    return out


def fan_rays(cones: Iterable[Cone]) -> list:
    return sorted({r for c in cones for r in c.rays})


def fan_to_dict(M: Matroid, cones: list) -> dict:
    return {
        "lineality": [list(v) for v in lineality_basis(M)],
        "lineality_convention": "all-ones vector; component incidence vectors when disconnected",
        "cones": [{"flat_chain": [list(c) for c in cone.flat_chain], "rays": [list(r) for r in cone.rays]}
                  for cone in cones],
    }


def level_sets(omega: Sequence) -> list:
    """Superlevel sets ``{e : omega_e >= v}`` for every value ``v`` above the minimum, largest value first."""
    w = [Fraction(x) for x in omega]
    values = sorted(set(w), reverse=True)
    return [frozenset(i + 1 for i, x in enumerate(w) if x >= v) for v in values[:-1]]


def membership_test(M: Matroid, omega: Sequence, L: Poset | None = None, G=None):
    """The face of the fan containing ``omega``, or :data:`OUTSIDE`."""
    if len(omega) != M.ground_size:
        raise PreconditionError(f"weight vector needs {M.ground_size} entries")
    sets = level_sets(omega)
    if not all(M.is_flat(F) for F in sets):
        return OUTSIDE
    L = L or lattice_of_flats(M)
    G = G or maximal_decomposition_set(L)
    chain = {L.bottom(), L.top()} | {set_name(F) for F in sets}
    return closure(L, G, chain)
