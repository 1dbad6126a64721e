"""Decompositions ``(x, z, y)`` with witness isomorphisms, decomposition sets and closures.

A decomposition carries ``psi``, a dict ``(u, v) -> w`` realising
``[x, z] × [z, y] ≅ [x, y]`` with ``psi(u, z) = u`` and ``psi(z, v) = v``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import InvariantError, ParseError, PreconditionError
from .poset import Poset, constrained_isomorphism, interval_mask, product, pairing

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Decomposition:
    poset: Poset = field(repr=False)
    x: str
    z: str
    y: str
    psi: Mapping = field(repr=False)

    @property
    def triple(self) -> tuple:
        return (self.x, self.z, self.y)

    @property
    def complement(self) -> str:
        return self.psi[(self.x, self.y)]

    @property
    def trivial(self) -> bool:
        return self.z == self.x or self.z == self.y

    @property
    def proper(self) -> bool:
        return not self.trivial

    @cached_property
    def inverse(self) -> dict:
        return {w: uv for uv, w in self.psi.items()}

    def __eq__(self, other):
        if not isinstance(other, Decomposition):
            return NotImplemented
        return self.triple == other.triple and dict(self.psi) == dict(other.psi)

    def __hash__(self):
        return hash(self.triple)


def _trivial(P: Poset, x: str, z: str, y: str) -> Decomposition:
    if z == x:
        psi = {(x, v): v for v in P.from_mask(interval_mask(P, x, y))}
    else:
        psi = {(u, y): u for u in P.from_mask(interval_mask(P, x, y))}
    return Decomposition(P, x, z, y, psi)


def find_witness(P: Poset, x: str, z: str, y: str):
    """A witness ``psi`` for ``(x, z, y)`` or ``None`` (first one in backtracking order)."""
    if not (P.leq(x, z) and P.leq(z, y)):
        return None
    if z == x or z == y:
        return _trivial(P, x, z, y).psi
    lo = interval_mask(P, x, z)
    hi = interval_mask(P, z, y)
    full = interval_mask(P, x, y)
    if bin(lo).count("1") * bin(hi).count("1") != bin(full).count("1"):
        return None
    A = P.subposet(P.from_mask(lo))
    B = P.subposet(P.from_mask(hi))
    prod = product(A, B)
    pairs = pairing(A, B)
    back = {ab: name for name, ab in pairs.items()}
    target = P.subposet(P.from_mask(full))
    pins = {back[(u, z)]: u for u in A.elements}
    pins.update({back[(z, v)]: v for v in B.elements})
    iso = constrained_isomorphism(prod, target, pins)
    if iso is None:
        return None
    return {pairs[name]: w for name, w in iso.items()}


def all_witnesses(P: Poset, x: str, z: str, y: str) -> list:
    """Every witness for ``(x, z, y)`` by exhaustive search (test oracle, tiny intervals only)."""
    import itertools

    lo = P.from_mask(interval_mask(P, x, z))
    hi = P.from_mask(interval_mask(P, z, y))
    full = P.from_mask(interval_mask(P, x, y))
    if len(lo) * len(hi) != len(full):
        return []
    domain = [(u, v) for u in lo for v in hi]
    out = []
    for perm in itertools.permutations(full):
        psi = dict(zip(domain, perm))
        if any(psi[(u, z)] != u for u in lo) or any(psi[(z, v)] != v for v in hi):
            continue
        if all(
            (P.leq(u1, u2) and P.leq(v1, v2)) == P.leq(psi[(u1, v1)], psi[(u2, v2)])
            for (u1, v1) in domain for (u2, v2) in domain
        ):
            out.append(psi)
    return out


def witness_is_valid(d: Decomposition) -> bool:
    P, x, z, y, psi = d.poset, d.x, d.z, d.y, d.psi
    lo = P.from_mask(interval_mask(P, x, z))
    hi = P.from_mask(interval_mask(P, z, y))
    full = set(P.from_mask(interval_mask(P, x, y)))
    if set(psi) != {(u, v) for u in lo for v in hi}:
        return False
    if set(psi.values()) != full or len(full) != len(psi):
        return False
    if any(psi[(u, z)] != u for u in lo) or any(psi[(z, v)] != v for v in hi):
        return False
    items = list(psi.items())
    for (u1, v1), w1 in items:
        for (u2, v2), w2 in items:
            if (P.leq(u1, u2) and P.leq(v1, v2)) != P.leq(w1, w2):
                return False
    return True


def make_decomposition(P: Poset, x: str, z: str, y: str):
    psi = find_witness(P, x, z, y)
    return None if psi is None else Decomposition(P, x, z, y, psi)


# ---------------------------------------------------------------------------
# restriction, order, complements


def restrict_decomposition(d: Decomposition, u: str, v: str) -> Decomposition:
    """The decomposition of ``[u, v]`` obtained by restricting ``d.psi``."""
    P = d.poset
    inv = d.inverse
    if u not in inv or v not in inv:
        raise PreconditionError(f"({u}, {v}) not inside [{d.x}, {d.y}]")
    if not P.leq(u, v):
        raise PreconditionError(f"{u} is not <= {v}")
    u1, u2 = inv[u]
    v1, v2 = inv[v]
    psi = d.psi
    mid = psi[(v1, u2)]
    firsts = [a for a in P.from_mask(interval_mask(P, u1, v1))]
    seconds = [b for b in P.from_mask(interval_mask(P, u2, v2))]
    new = {(psi[(a, u2)], psi[(v1, b)]): psi[(a, b)] for a in firsts for b in seconds}
    return Decomposition(P, u, mid, v, new)


def decomposition_leq(d1: Decomposition, d2: Decomposition) -> bool:
    inv = d2.inverse
    if d1.x not in inv or d1.y not in inv or not d1.poset.leq(d1.x, d1.y):
        return False
    return restrict_decomposition(d2, d1.x, d1.y) == d1


def complementary(d: Decomposition) -> Decomposition:
    """``(x, psi(x, y), y)`` with the factor-swapped witness."""
    P, x, z, y, psi = d.poset, d.x, d.z, d.y, d.psi
    zc = psi[(x, y)]
    lo = P.from_mask(interval_mask(P, x, z))
    hi = P.from_mask(interval_mask(P, z, y))
    new = {(psi[(x, v)], psi[(u, y)]): psi[(u, v)] for u in lo for v in hi}
    return Decomposition(P, x, zc, y, new)


# ---------------------------------------------------------------------------
# decomposition sets


class DecompositionSet:
    """A set of decompositions of ``poset`` containing all trivial ones.

    Members are keyed by triple with one stored witness each.  The
    ``symmetric`` and ``downward_closed`` flags are computed on construction.
    """

    def __init__(self, poset: Poset, members: Iterable[Decomposition] = (), *, verify: bool = True):
        self.poset = poset
        table: dict = {}
        for x, y in poset.leq_pairs():
            table[(x, x, y)] = _trivial(poset, x, x, y)
            if x != y:
                table[(x, y, y)] = _trivial(poset, x, y, y)
        for d in members:
            if d.poset is not poset and d.poset != poset:
                raise PreconditionError("decomposition belongs to a different poset")
            old = table.get(d.triple)
            if old is None:
                if verify and not witness_is_valid(d):
                    raise InvariantError(f"invalid witness for {d.triple}")
                table[d.triple] = d
            elif old != d:
                log.debug("keeping first witness for %s", d.triple)
        idx = poset.index
        self._table = dict(sorted(table.items(), key=lambda kv: tuple(idx[e] for e in kv[0])))
        self.proper_members = tuple(d for d in self._table.values() if d.proper)
        self._mask_rules = tuple(
            ((1 << idx[d.x]) | (1 << idx[d.y]), 1 << idx[d.z]) for d in self.proper_members
        )
        self.symmetric = self._is_symmetric()
        self.downward_closed = self._is_downward_closed()

    def __len__(self):
        return len(self._table)

    def __iter__(self):
        return iter(self._table.values())

    def __contains__(self, item):
        if isinstance(item, Decomposition):
            d = self._table.get(item.triple)
            return d is not None and d == item
        return tuple(item) in self._table

    def get(self, triple):
        return self._table.get(tuple(triple))

    def triples(self) -> frozenset:
        return frozenset(self._table)

    def proper_triples(self) -> frozenset:
        return frozenset(d.triple for d in self.proper_members)

    @property
    def normalized(self) -> bool:
        return self.symmetric and self.downward_closed

    def __eq__(self, other):
        if not isinstance(other, DecompositionSet):
            return NotImplemented
        return self.poset == other.poset and self.triples() == other.triples()

    __hash__ = None

    def __repr__(self):
        return f"DecompositionSet({len(self.poset)} elements, {len(self.proper_members)} proper)"

    def _is_symmetric(self) -> bool:
        for d in self.proper_members:
            c = self._table.get((d.x, d.complement, d.y))
            if c is None:
                return False
        return True

    def _is_downward_closed(self) -> bool:
        P = self.poset
        for d in self.proper_members:
            members = P.from_mask(interval_mask(P, d.x, d.y))
            for u in members:
                for v in P.from_mask(P.up_mask(u) & interval_mask(P, d.x, d.y)):
                    r = restrict_decomposition(d, u, v)
                    if r.proper and r not in self:
                        return False
        return True

    def to_dict(self) -> dict:
        return {"triples": [list(d.triple) for d in self.proper_members]}


def trivial_decomposition_set(P: Poset) -> DecompositionSet:
    return DecompositionSet(P)


def maximal_decomposition_set(P: Poset) -> DecompositionSet:
    members = []
    for x, y in P.strict_pairs():
        full = interval_mask(P, x, y)
        for z in P.from_mask(full):
            if z == x or z == y:
                continue
            d = make_decomposition(P, x, z, y)
            if d is not None:
                members.append(d)
    return DecompositionSet(P, members, verify=False)


def decomposition_set_from_triples(P: Poset, triples: Iterable) -> DecompositionSet:
    """G_min plus the listed triples; each must admit a witness."""
    members = []
    for t in triples:
        if len(t) != 3:
            raise ParseError(f"triple expected, got {t!r}")
        x, z, y = t
        for e in t:
            if e not in P:
                raise ParseError(f"unknown element {e!r} in triple {t!r}")
        d = make_decomposition(P, x, z, y)
        if d is None:
            raise ParseError(f"triple {t!r} admits no decomposition witness")
        members.append(d)
    return DecompositionSet(P, members)


def symmetric_closure(G: DecompositionSet) -> DecompositionSet:
    if G.symmetric:
        return G
    extra = [complementary(d) for d in G.proper_members]
    return DecompositionSet(G.poset, list(G) + extra, verify=False)


def downward_closure(G: DecompositionSet) -> DecompositionSet:
    if G.downward_closed:
        return G
    P = G.poset
    extra = []
    for d in G.proper_members:
        full = interval_mask(P, d.x, d.y)
        for u in P.from_mask(full):
            for v in P.from_mask(P.up_mask(u) & full):
                r = restrict_decomposition(d, u, v)
                if r.proper:
                    extra.append(r)
    return DecompositionSet(P, list(G) + extra, verify=False)


def normalize(G: DecompositionSet) -> DecompositionSet:
    """Symmetric and downward closure, repeated until both flags hold."""
    while not G.normalized:
        G = downward_closure(symmetric_closure(G))
    return G


def relabel_decomposition_set(G: DecompositionSet, mapping: Mapping[str, str]) -> DecompositionSet:
    Q = G.poset.relabel(mapping)
    members = [
        Decomposition(Q, mapping[d.x], mapping[d.z], mapping[d.y],
                      {(mapping[u], mapping[v]): mapping[w] for (u, v), w in d.psi.items()})
        for d in G.proper_members
    ]
    return DecompositionSet(Q, members, verify=False)


def dual_decomposition_set(G: DecompositionSet) -> DecompositionSet:
    """``G^op``: ``(y, z, x)`` in the dual poset, witness with swapped factors."""
    from .poset import dual

    Q = dual(G.poset)
    members = [
        Decomposition(Q, d.y, d.z, d.x, {(v, u): w for (u, v), w in d.psi.items()})
        for d in G.proper_members
    ]
    return DecompositionSet(Q, members, verify=False)


# ---------------------------------------------------------------------------
# closure operator


def closure(P: Poset, G: DecompositionSet, A: Iterable[str]) -> frozenset:
    """Least superset of ``A`` containing ``z`` whenever it contains ``x`` and ``y``."""
    return frozenset(P.from_mask(closure_mask(P, G, P.mask(_checked(P, A)))))


def _checked(P, A):
    A = list(A)
    for a in A:
        if a not in P:
            raise PreconditionError(f"element {a!r} not in poset")
    return A


def closure_mask(P: Poset, G: DecompositionSet, mask: int) -> int:
    rules = G._mask_rules
    changed = True
    while changed:
        changed = False
        for ends, mid in rules:
            if mask & ends == ends and not mask & mid:
                mask |= mid
                changed = True
    return mask


# ---------------------------------------------------------------------------
# minimality


def is_minimal_wrt(G: DecompositionSet, d: Decomposition, A: Iterable[str]) -> bool:
    if d.trivial:
        raise PreconditionError("minimality is defined for proper decompositions only")
    A = set(A)
    if d.x not in A or d.y not in A:
        return False
    P = G.poset
    inside = [a for a in P.from_mask(interval_mask(P, d.x, d.y)) if a in A]
    for u in inside:
        for v in inside:
            if (u, v) == (d.x, d.y) or not P.leq(u, v):
                continue
            r = restrict_decomposition(d, u, v)
            if r.proper and r in G:
                return False
    return True


def minimality_characterization_check(G: DecompositionSet, d: Decomposition, A: Iterable[str]) -> bool:
    """Whether ``[x, y] ∩ A ⊆ {x, z, z', y}``; requires normalized G and closed A."""
    A = frozenset(A)
    P = G.poset
    if not G.normalized:
        raise PreconditionError("decomposition set must be symmetric and downward closed")
    if closure(P, G, A) != A:
        raise PreconditionError("A must be closed")
    if d.trivial or d not in G or d.x not in A or d.y not in A:
        raise PreconditionError("d must be a proper member of G with endpoints in A")
    inside = {a for a in P.from_mask(interval_mask(P, d.x, d.y)) if a in A}
    return inside <= {d.x, d.z, d.complement, d.y}


def build_generating_sequence(P: Poset, G: DecompositionSet, A: Iterable[str]) -> list:
    """Chain of decomposition sets from G_min, each adding the lower hull of a minimal pair.

    The pair is the lexicographically least proper member of ``G`` not yet
    present that is minimal with respect to the current closure of ``A``.
    """
    if not G.normalized:
        raise PreconditionError("decomposition set must be symmetric and downward closed")
    A = list(A)
    current = trivial_decomposition_set(P)
    seq = [current]
    while True:
        closed = closure(P, current, A)
        pick = None
        for d in G.proper_members:
            if current.get(d.triple) is not None:
                continue
            if is_minimal_wrt(G, d, closed):
                pick = d
                break
        if pick is None:
            return seq
        pair = [pick, G.get((pick.x, pick.complement, pick.y))]
        hull = downward_closure(DecompositionSet(P, pair, verify=False))
        current = DecompositionSet(P, list(current) + list(hull.proper_members), verify=False)
        seq.append(current)
