"""Building sets, nested sets and their embedding into decomposition complexes."""

from __future__ import annotations

import itertools
import logging
from typing import Iterable

from .complexes import Face, FacePoset, _build, maximal_chains_of
from .decomp import DecompositionSet, closure, maximal_decomposition_set
from .errors import InvariantError, PreconditionError
from .poset import Poset, enumerate_chains, join_all

log = logging.getLogger(__name__)


def _bottom(P: Poset) -> str:
    b = P.bottom()
    if b is None:
        raise PreconditionError("poset needs a unique minimum")
    return b


def factors(P: Poset, G: Iterable[str], y: str) -> tuple:
    """Maximal elements of ``{g in G : g <= y}``."""
    zero = _bottom(P)
    if y == zero:
        raise PreconditionError("factors are undefined at the minimum")
    below = [g for g in P.sort(set(G)) if P.leq(g, y)]
    return tuple(g for g in below if not any(h != g and P.leq(g, h) for h in below))


def building_preset(P: Poset, name: str) -> frozenset:
    """``all`` (everything but 0̂), ``atoms``, or ``irreducibles`` (no proper decomposition at 0̂)."""
    zero = _bottom(P)
    if name == "all":
        return frozenset(P.elements) - {zero}
    if name == "atoms":
        return frozenset(P.upper_covers(zero))
    if name == "irreducibles":
        G = maximal_decomposition_set(P)
        tops = {d.y for d in G.proper_members if d.x == zero}
        return frozenset(P.elements) - {zero} - tops
    raise PreconditionError(f"unknown building-set preset {name!r}")


def is_building_set(P: Poset, G: Iterable[str]):
    """``(ok, y)``: the join map from the product of factor intervals onto ``[0̂, y]``.

    ``y`` is the first element where the map fails (None when ok).
    """
    zero = _bottom(P)
    G = frozenset(G)
    if zero in G or not G <= set(P.elements):
        return False, zero
    for y in P.elements:
        if y == zero:
            continue
        fs = factors(P, G, y)
        if not fs:
            return False, y
        target = P.from_mask(P.up_mask(zero) & P.down_mask(y))
        ivs = [P.from_mask(P.down_mask(z)) for z in fs]
        tuples = list(itertools.product(*ivs))
        if len(tuples) != len(target):
            return False, y
        image = []
        for t in tuples:
            j = join_all(P, t)
            if j is None:
                log.debug("join of %s does not exist", t)
                return False, y
            image.append(j)
        if len(set(image)) != len(image):
            return False, y
        for a, ja in zip(tuples, image):
            for b, jb in zip(tuples, image):
                if all(P.leq(u, v) for u, v in zip(a, b)) != P.leq(ja, jb):
                    return False, y
    return True, None


def is_nested(P: Poset, G: Iterable[str], S: Iterable[str], literal: bool = False) -> bool:
    """Every antichain ``A ⊆ S`` with at least two members has a join outside ``G``.

    With ``literal=True`` every subset of size >= 2 is tested, comparable
    members included.  That reading forces nested sets to be antichains
    (a chain ``a < b`` in G has join ``b`` in G), which breaks the embedding
    of nested sets into decomposition complexes, so it is opt-in.
    """
    G = frozenset(G)
    S = list(P.sort(set(S)))
    if not set(S) <= G:
        raise PreconditionError("S must be a subset of the building set")
    for k in range(2, len(S) + 1):
        for A in itertools.combinations(S, k):
            if not literal and any(P.comparable(a, b) for a, b in itertools.combinations(A, 2)):
                continue
            j = join_all(P, A)
            if j is None or j in G:
                return False
    return True


def nested_sets(P: Poset, G: Iterable[str], literal: bool = False) -> list:
    """All non-empty nested sets, grown in element order (nestedness is inherited by subsets)."""
    G = P.sort(set(G))
    out = []

    def grow(current, start):
        for i in range(start, len(G)):
            cand = current + (G[i],)
            if is_nested(P, G, cand, literal):
                out.append(cand)
                grow(cand, i + 1)

    grow((), 0)
    return out


def nested_set_complex(P: Poset, G: Iterable[str], literal: bool = False) -> FacePoset:
    ok, y = is_building_set(P, G)
    if not ok:
        raise PreconditionError(f"not a building set (fails at {y!r})")
    found = {frozenset(s): s for s in nested_sets(P, G, literal)}
    return _build(P, found)


def nested_target_set(P: Poset, G: Iterable[str]) -> DecompositionSet:
    """Trivial decompositions plus every ``(0̂, z, y)`` of the maximal set with ``y`` outside G."""
    zero = _bottom(P)
    G = frozenset(G)
    Gmax = maximal_decomposition_set(P)
    members = [d for d in Gmax.proper_members if d.x == zero and d.y not in G]
    return DecompositionSet(P, members, verify=False)


def nested_embedding(P: Poset, G: Iterable[str], S: Iterable[str], target: DecompositionSet | None = None) -> Face:
    """``S ↦ {⋁A : A ⊆ S}`` (empty join = 0̂), checked to be a face generated by each maximal chain."""
    zero = _bottom(P)
    S = P.sort(set(S))
    joins = set()
    for k in range(len(S) + 1):
        for A in itertools.combinations(S, k):
            j = join_all(P, A) if A else zero
            if j is None:
                raise InvariantError(f"join of {A} missing although S is nested")
            joins.add(j)
    members = frozenset(joins)
    target = target or nested_target_set(P, G)
    chains = maximal_chains_of(P, members)
    for ch in chains:
        if closure(P, target, ch) != members:
            raise InvariantError(f"chain {ch} does not generate the image of {S}")
    return Face(members, chains[0])


def verify_nested_image(P: Poset, G: Iterable[str], literal: bool = False):
    """``(ok, reason)``: injective, order embedding, and image = closures of chains through 0̂."""
    ok, y = is_building_set(P, G)
    if not ok:
        raise PreconditionError(f"not a building set (fails at {y!r})")
    zero = _bottom(P)
    G = frozenset(G)
    target = nested_target_set(P, G)
    sets = [()] + nested_sets(P, G, literal)
    images = []
    for S in sets:
        try:
            images.append(nested_embedding(P, G, S, target).members)
        except InvariantError as exc:
            return False, str(exc)
    if len(set(images)) != len(images):
        return False, "not injective"
    for S, img in zip(sets, images):
        if img & G != frozenset(S):
            return False, f"image of {S} meets G in {sorted(img & G)}"
    for S, a in zip(sets, images):
        for T, b in zip(sets, images):
            if (set(S) <= set(T)) != (a <= b):
                return False, f"order not preserved between {S} and {T}"
    expected = {closure(P, target, ch) for ch in enumerate_chains(P) if ch[0] == zero}
    if set(images) != expected:
        return False, "image differs from the faces generated by chains through the minimum"
    return True, None
