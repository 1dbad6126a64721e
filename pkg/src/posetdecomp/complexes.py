"""Decomposition complexes as face posets, plus the structural checks on their faces."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Iterable

from .decomp import (
    DecompositionSet,
    closure,
    closure_mask,
    maximal_decomposition_set,
)
from .errors import PreconditionError, ResourceError
from .poset import DEFAULT_CHAIN_CAP, Poset, _bits, enumerate_chains, join, meet

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Face:
    members: frozenset
    generator: tuple


@dataclass
class FacePoset:
    """Faces ordered by inclusion; ``covers`` holds index pairs ``(i, j)`` with face i ⋖ face j."""

    poset: Poset = field(repr=False)
    faces: list
    covers: list = field(default_factory=list)

    def __post_init__(self):
        self._index = {f.members: i for i, f in enumerate(self.faces)}
        if not self.covers:
            self.covers = _inclusion_covers([f.members for f in self.faces])

    def __len__(self):
        return len(self.faces)

    def __contains__(self, members):
        return frozenset(members) in self._index

    def index_of(self, members) -> int:
        return self._index[frozenset(members)]

    def member_sets(self) -> set:
        return set(self._index)

    def ranks(self) -> list:
        """Length of the longest chain of faces ending at each face."""
        below = [[] for _ in self.faces]
        for i, j in self.covers:
            below[j].append(i)
        rank = [0] * len(self.faces)
        for j in range(len(self.faces)):  # faces are sorted by cardinality
            rank[j] = max((rank[i] + 1 for i in below[j]), default=0)
        return rank

    def rank_counts(self) -> tuple:
        r = self.ranks()
        if not r:
            return ()
        return tuple(r.count(k) for k in range(max(r) + 1))

    def to_dict(self) -> dict:
        P = self.poset
        return {
            "faces": [{"members": list(P.sort(f.members)), "generator": list(f.generator)}
                      for f in self.faces],
            "covers": [list(c) for c in self.covers],
        }


def _inclusion_covers(sets: list) -> list:
    n = len(sets)
    above = [0] * n
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            if i != j and len(a) < len(b) and a <= b:
                above[i] |= 1 << j
    covers = []
    for i in range(n):
        reach = 0
        for j in _bits(above[i]):
            reach |= above[j]
        for j in _bits(above[i] & ~reach):
            covers.append((i, j))
    covers.sort()
    return covers


def _face_sort_key(P: Poset):
    idx = P.index
    return lambda members: (len(members), sorted(idx[e] for e in members))


def _build(P: Poset, found: dict) -> FacePoset:
    key = _face_sort_key(P)
    order = sorted(found, key=key)
    faces = [Face(m, found[m]) for m in order]
    return FacePoset(P, faces)


def decomposition_complex(P: Poset, G: DecompositionSet, max_chains: int = DEFAULT_CHAIN_CAP) -> FacePoset:
    """All closures of non-empty chains, deduplicated and ordered by inclusion.

    For normalized ``G`` a chain that is a maximal chain of an already found
    face is skipped, since every maximal chain of a face generates it.
    """
    if G.poset != P:
        raise PreconditionError("decomposition set belongs to another poset")
    n = len(P)
    up = P._up
    down = P._down
    shortcut = G.normalized
    found: dict = {}
    found_masks: list = []
    count = 0
    stack = [(i,) for i in reversed(range(n))]
    els = P.elements
    while stack:
        ch = stack.pop()
        count += 1
        if count > max_chains:
            raise ResourceError(f"chain enumeration exceeded the cap of {max_chains}")
        cmask = 0
        for i in ch:
            cmask |= 1 << i
        skip = False
        if shortcut:
            for fm in found_masks:
                if fm & cmask == cmask and _is_maximal_chain_in(cmask, fm, up, down):
                    skip = True
                    break
        if not skip:
            m = closure_mask(P, G, cmask)
            key = frozenset(P.from_mask(m))
            if key not in found:
                found[key] = tuple(els[i] for i in ch)
                found_masks.append(m)
        for j in reversed(list(_bits(up[ch[-1]] & ~(1 << ch[-1])))):
            stack.append(ch + (j,))
    return _build(P, found)


def _is_maximal_chain_in(cmask: int, face_mask: int, up, down) -> bool:
    for w in _bits(face_mask & ~cmask):
        comp = up[w] | down[w]
        if comp & cmask == cmask:
            return False
    return True


def decomposition_complex_bruteforce(P: Poset, G: DecompositionSet) -> FacePoset:
    """Closure of every non-empty chain, no shortcuts (oracle)."""
    found: dict = {}
    for ch in enumerate_chains(P):
        key = closure(P, G, ch)
        found.setdefault(key, ch)
    return _build(P, found)


def order_complex_face_poset(P: Poset) -> FacePoset:
    found = {frozenset(ch): ch for ch in enumerate_chains(P)}
    return _build(P, found)


# ---------------------------------------------------------------------------
# face tests


def maximal_chains_of(P: Poset, A: Iterable[str]) -> list:
    A = list(A)
    if not A:
        return []
    return enumerate_chains(P.subposet(A), maximal_only=True)


def _require_normalized(G):
    if not G.normalized:
        raise PreconditionError("decomposition set must be symmetric and downward closed")


def is_face(P: Poset, G: DecompositionSet, A: Iterable[str]):
    """``(ok, chain)``: A closed and generated by each of its maximal chains.

    The chain is the first maximal chain of ``A`` (or the first one failing).
    """
    _require_normalized(G)
    A = frozenset(A)
    chains = maximal_chains_of(P, A)
    if not chains:
        return False, ()
    if closure(P, G, A) != A:
        return False, chains[0]
    for ch in chains:
        if closure(P, G, ch) != A:
            return False, ch
    return True, chains[0]


def _exchange_allowed(P, G, source, target, closed_source) -> bool:
    """``target = source - {z'} + {z}`` with ``(x, z', y), (x, z, y)`` in G and ``x, y`` in ⟨source⟩."""
    removed = set(source) - set(target)
    added = set(target) - set(source)
    if len(removed) != 1 or len(added) != 1:
        return False
    (zr,), (za,) = removed, added
    for d in G.proper_members:
        if d.z != za or d.x not in closed_source or d.y not in closed_source:
            continue
        if G.get((d.x, zr, d.y)) is not None:
            return True
    return False


def chain_classes(P: Poset, G: DecompositionSet, A: Iterable[str]) -> list:
    """Maximal chains of a closed set, grouped by mutual reachability under exchange moves."""
    _require_normalized(G)
    A = frozenset(A)
    if closure(P, G, A) != A:
        raise PreconditionError("A must be closed")
    chains = maximal_chains_of(P, A)
    closures = [closure(P, G, c) for c in chains]
    n = len(chains)
    succ = [[j for j in range(n) if j != i and _exchange_allowed(P, G, chains[i], chains[j], closures[i])]
            for i in range(n)]
    reach = []
    for i in range(n):
        seen = {i}
        todo = [i]
        while todo:
            k = todo.pop()
            for j in succ[k]:
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        reach.append(seen)
    classes = []
    assigned = set()
    for i in range(n):
        if i in assigned:
            continue
        cls = [j for j in range(n) if j in reach[i] and i in reach[j]]
        assigned.update(cls)
        classes.append([chains[j] for j in cls])
    return classes


def verify_face_lattice(P: Poset, G: DecompositionSet, face) -> bool:
    members = face.members if isinstance(face, Face) else frozenset(face)
    Q = P.subposet(members)
    els = Q.elements
    for i, a in enumerate(els):
        for b in els[i + 1:]:
            if join(Q, a, b) is None or meet(Q, a, b) is None:
                return False
    return True


def is_graded(fp: FacePoset) -> bool:
    """Every face has all maximal chains below it of one length."""
    below = [[] for _ in fp.faces]
    for i, j in fp.covers:
        below[j].append(i)
    lo = [0] * len(fp.faces)
    hi = [0] * len(fp.faces)
    for j in range(len(fp.faces)):
        if below[j]:
            lo[j] = 1 + min(lo[i] for i in below[j])
            hi[j] = 1 + max(hi[i] for i in below[j])
    return lo == hi


# ---------------------------------------------------------------------------
# search for closed face intersections that are not faces


@dataclass
class PseudoWitness:
    poset: Poset
    face_a: frozenset
    face_b: frozenset
    intersection: frozenset


def non_face_intersections(P: Poset, G: DecompositionSet, fp: FacePoset | None = None) -> list:
    """Pairs of faces whose (closed) intersection is not generated by any of its maximal chains."""
    fp = fp or decomposition_complex(P, G)
    sets = [f.members for f in fp.faces]
    out = []
    seen = set()
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            c = a & b
            if not c or c in seen or c == a or c == b:
                continue
            seen.add(c)
            if c in fp:
                continue
            if all(closure(P, G, ch) != c for ch in maximal_chains_of(P, c)):
                out.append((a, b, c))
    return out


def find_pseudo_complex_witness(*, seed: int = 0, ground: int = 4, max_size: int = 12,
                                tries: int = 200000, realizable=True):
    """Scan random inclusion-ordered families of subsets of ``{1..ground}``.

    Returns the first family (containing ∅) whose maximal decomposition set
    is realized by the inclusion map and whose complex has a closed face
    intersection not generated by any of its maximal chains.
    """
    from .catalog import set_name
    from .geometry import identity_realization, verify_realization
    import itertools

    rng = random.Random(seed)
    universe = [frozenset(c) for k in range(ground + 1) for c in itertools.combinations(range(1, ground + 1), k)]
    for attempt in range(tries):
        size = rng.randint(6, max_size)
        rest = rng.sample(universe[1:], size - 1)
        family = [universe[0]] + sorted(rest, key=lambda s: (len(s), sorted(s)))
        names = [set_name(s) for s in family]
        rel = [(set_name(s), set_name(t)) for s in family for t in family if s < t]
        P = Poset(names, rel)
        G = maximal_decomposition_set(P)
        if not G.proper_members:
            continue
        hits = non_face_intersections(P, G)
        if not hits:
            continue
        if realizable:
            ok, _ = verify_realization(P, G, identity_realization(P))
            if not ok:
                continue
        a, b, c = hits[0]
        log.info("pseudo-complex witness found after %d attempts", attempt + 1)
        return PseudoWitness(P, a, b, c)
    return None
