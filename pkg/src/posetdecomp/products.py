"""Products and coproducts of decomposition sets and of their complexes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .complexes import decomposition_complex
from .decomp import Decomposition, DecompositionSet, closure
from .errors import InvariantError, PreconditionError
from .geometry import Realization, verify_realization
from .poset import Poset, coproduct, coproduct_name, pair_name, pairing, product


@dataclass(frozen=True)
class ProductTag:
    left: DecompositionSet = field(repr=False)
    right: DecompositionSet = field(repr=False)
    pairing: dict = field(repr=False)


def product_decomposition_set(G1: DecompositionSet, G2: DecompositionSet, P: Poset | None = None) -> DecompositionSet:
    """Triples of pairs whose coordinate triples lie in ``G1`` and ``G2``; witnesses act coordinatewise."""
    P1, P2 = G1.poset, G2.poset
    P = P or product(P1, P2)
    members = []
    for d1 in G1:
        for d2 in G2:
            psi = {}
            for (u1, v1), w1 in d1.psi.items():
                for (u2, v2), w2 in d2.psi.items():
                    psi[(pair_name(u1, u2), pair_name(v1, v2))] = pair_name(w1, w2)
            members.append(Decomposition(P, pair_name(d1.x, d2.x), pair_name(d1.z, d2.z),
                                         pair_name(d1.y, d2.y), psi))
    G = DecompositionSet(P, members, verify=False)
    G.tag = ProductTag(G1, G2, pairing(P1, P2))
    return G


def coproduct_decomposition_set(G1: DecompositionSet, G2: DecompositionSet) -> DecompositionSet:
    P = coproduct(G1.poset, G2.poset)
    members = []
    for side, G in ((1, G1), (2, G2)):
        for d in G.proper_members:
            psi = {(coproduct_name(side, u), coproduct_name(side, v)): coproduct_name(side, w)
                   for (u, v), w in d.psi.items()}
            members.append(Decomposition(P, *(coproduct_name(side, e) for e in d.triple), psi))
    return DecompositionSet(P, members, verify=False)


def product_closure_check(G1: DecompositionSet, G2: DecompositionSet, C: Iterable[str],
                          product_set: DecompositionSet | None = None) -> bool:
    """Closure of a chain in the product equals the product of the closures of its projections."""
    G = product_set or product_decomposition_set(G1, G2)
    P = G.poset
    C = list(C)
    if not C or any(c not in P for c in C) or not P.is_chain(C):
        raise PreconditionError("C must be a non-empty chain of the product")
    pr = pairing(G1.poset, G2.poset)
    left = closure(P, G, C)
    a = closure(G1.poset, G1, {pr[c][0] for c in C})
    b = closure(G2.poset, G2, {pr[c][1] for c in C})
    right = frozenset(pair_name(u, v) for u in a for v in b)
    return left == right


def product_complex_isomorphism(G1: DecompositionSet, G2: DecompositionSet,
                                product_set: DecompositionSet | None = None):
    """Certificate ``[(i1, i2, j), ...]`` for ``D(P1,G1) × D(P2,G2) ≅ D(P1×P2, G1×G2)``.

    ``i1``, ``i2``, ``j`` index the faces of the three face posets.
    Raises :class:`InvariantError` if the map is not an order isomorphism.
    """
    G = product_set or product_decomposition_set(G1, G2)
    D1 = decomposition_complex(G1.poset, G1)
    D2 = decomposition_complex(G2.poset, G2)
    D = decomposition_complex(G.poset, G)
    table = []
    for i1, f1 in enumerate(D1.faces):
        for i2, f2 in enumerate(D2.faces):
            img = frozenset(pair_name(a, b) for a in f1.members for b in f2.members)
            if img not in D:
                raise InvariantError(f"product of faces {sorted(f1.members)} and {sorted(f2.members)} is not a face")
            table.append((i1, i2, D.index_of(img)))
    if len({j for _, _, j in table}) != len(table) or len(table) != len(D):
        raise InvariantError("product face map is not a bijection")
    s1 = [f.members for f in D1.faces]
    s2 = [f.members for f in D2.faces]
    s = [f.members for f in D.faces]
    for a1, a2, a in table:
        for b1, b2, b in table:
            if (s1[a1] <= s1[b1] and s2[a2] <= s2[b2]) != (s[a] <= s[b]):
                raise InvariantError("product face map does not preserve order")
    return table


def product_face_poset(G1: DecompositionSet, G2: DecompositionSet) -> tuple:
    G = product_decomposition_set(G1, G2)
    cert = product_complex_isomorphism(G1, G2, G)
    return decomposition_complex(G.poset, G), cert


def product_realization(phi1: Realization, phi2: Realization,
                        G1: DecompositionSet | None = None, G2: DecompositionSet | None = None) -> Realization:
    """``phi(a×b) = phi1(a) ⊎ (phi2(b) + n1)``; verified when both factor sets are given."""
    P = product(phi1.poset, phi2.poset)
    n1 = phi1.ambient_size
    phi = {pair_name(a, b): frozenset(phi1.phi[a]) | frozenset(i + n1 for i in phi2.phi[b])
           for a in phi1.poset.elements for b in phi2.poset.elements}
    r = Realization(P, n1 + phi2.ambient_size, phi)
    if G1 is not None and G2 is not None:
        G = product_decomposition_set(G1, G2, P)
        if G.normalized:
            ok, bad = verify_realization(P, G, r)
            if not ok:
                raise InvariantError(f"product realization fails at {bad}")
    return r
