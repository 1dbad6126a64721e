import itertools
import logging
import random

import networkx as nx
import pytest
from hypothesis import given, settings

from posetdecomp.catalog import (
    antichain,
    boolean_lattice,
    chain,
    enumerate_lattices,
    enumerate_posets,
    partition_lattice,
    random_poset,
)
from posetdecomp.errors import ParseError, PreconditionError
from posetdecomp.poset import (
    Poset,
    constrained_isomorphism,
    coproduct,
    count_chains,
    dual,
    enumerate_chains,
    interval,
    is_isomorphism,
    is_lattice,
    isomorphic,
    join,
    join_all,
    meet,
    pairing,
    parse_poset,
    product,
)

from conftest import posets


def _digraph(P):
    g = nx.DiGraph()
    g.add_nodes_from(P.elements)
    g.add_edges_from(P.covers)
    return g


def _reachability(P):
    """leq recomputed by graph search over the cover edges only."""
    g = _digraph(P)
    return {(a, b) for a in P.elements for b in nx.descendants(g, a) | {a}}


def _brute_chains(P):
    out = set()
    for k in range(1, len(P) + 1):
        for sub in itertools.combinations(P.elements, k):
            if all(P.comparable(a, b) for a, b in itertools.combinations(sub, 2)):
                out.add(frozenset(sub))
    return out


B2_DOC = {"elements": ["∅", "1", "2", "12"],
          "relations": [["∅", "1"], ["∅", "2"], ["1", "12"], ["2", "12"]]}


def test_parse_b2_has_nine_comparable_pairs():
    P = parse_poset(B2_DOC)
    assert len(P.leq_pairs()) == 9
    assert P.elements == ("∅", "1", "2", "12")


def test_parse_singleton_is_antichain():
    P = parse_poset({"elements": ["a"], "relations": []})
    assert len(P) == 1 and P.is_antichain()


def test_parse_reduces_to_covers():
    P = parse_poset({"elements": ["a", "b", "c"], "relations": [["a", "b"], ["b", "c"], ["a", "c"]]})
    assert set(P.covers) == {("a", "b"), ("b", "c")}


@pytest.mark.parametrize("doc, fragment", [
    ({"elements": ["a", "b"], "relations": [["a", "b"], ["b", "a"]]}, "cycle"),
    ({"elements": ["a", "a"]}, "duplicate"),
    ({"elements": ["a"], "relations": [["a", "z"]]}, "unknown"),
    ("{not json", "JSON"),
    ({"relations": []}, "elements"),
])
def test_parse_rejections(doc, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_poset(doc)


def test_cycle_rejection_names_witness():
    with pytest.raises(ParseError) as info:
        Poset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])
    msg = str(info.value)
    assert all(x in msg for x in "abc")


@settings(max_examples=150, deadline=None)
@given(posets(max_size=8))
def test_leq_matches_cover_reachability(P):
    assert set(P.leq_pairs()) == _reachability(P)


@settings(max_examples=150, deadline=None)
@given(posets(max_size=8))
def test_covers_are_transitive_reduction(P):
    closure = nx.transitive_closure_dag(_digraph(P))
    reduced = nx.transitive_reduction(closure)
    assert set(P.covers) == set(reduced.edges())


def test_interval_examples():
    B3 = boolean_lattice(3)
    I = interval(B3, "∅", "12")
    assert set(I.members.elements) == {"∅", "1", "2", "12"}
    assert isomorphic(I.members, boolean_lattice(2))
    assert I.members.bottom() == "∅" and I.members.top() == "12"
    assert interval(B3, "13", "13").members.elements == ("13",)
    B2 = boolean_lattice(2)
    assert interval(B2, "∅", "12").members == B2
    with pytest.raises(PreconditionError):
        interval(B3, "1", "2")


def test_product_examples():
    B21 = product(boolean_lattice(2), boolean_lattice(1))
    assert len(B21) == 8 and isomorphic(B21, boolean_lattice(3))
    assert isomorphic(product(chain(2), chain(2)), boolean_lattice(2))
    P = random_poset(5, random.Random(3))
    assert isomorphic(product(P, antichain(1)), P)


@settings(max_examples=40, deadline=None)
@given(posets(max_size=3), posets(max_size=3), posets(max_size=2))
def test_product_associative_and_commutative(P, Q, R):
    assert isomorphic(product(P, Q), product(Q, P))
    assert isomorphic(product(product(P, Q), R), product(P, product(Q, R)))
    pair = pairing(P, Q)
    PQ = product(P, Q)
    for u, (a, b) in pair.items():
        for v, (c, d) in pair.items():
            assert PQ.leq(u, v) == (P.leq(a, c) and Q.leq(b, d))


def test_product_chain_count_is_not_multiplicative():
    C2 = chain(2)
    assert count_chains(product(C2, C2)) != count_chains(C2) ** 2


def test_coproduct_examples():
    assert coproduct(antichain(1), antichain(1)).is_antichain()
    B11 = coproduct(boolean_lattice(1), boolean_lattice(1))
    assert len(B11) == 4 and len(B11.covers) == 2
    P = random_poset(4, random.Random(9))
    empty = Poset([])
    assert isomorphic(coproduct(P, empty), P)


@settings(max_examples=60, deadline=None)
@given(posets(max_size=4), posets(max_size=4))
def test_coproduct_chains_are_disjoint_union(P, Q):
    S = coproduct(P, Q)
    assert count_chains(S) == count_chains(P) + count_chains(Q)


@settings(max_examples=100, deadline=None)
@given(posets(max_size=8))
def test_dual_is_involution(P):
    assert dual(dual(P)) == P


def test_dual_examples():
    assert isomorphic(dual(boolean_lattice(2)), boolean_lattice(2))
    D = dual(Poset(["a", "b", "c"], [("a", "b"), ("b", "c")]))
    assert set(D.covers) == {("c", "b"), ("b", "a")}


def test_chain_examples():
    assert len(enumerate_chains(boolean_lattice(2))) == 11
    singles = enumerate_chains(antichain(4))
    assert len(singles) == 4 and all(len(c) == 1 for c in singles)
    assert len(enumerate_chains(boolean_lattice(3), maximal_only=True)) == 6


@settings(max_examples=100, deadline=None)
@given(posets(max_size=7))
def test_chains_match_subset_scan(P):
    chains = enumerate_chains(P)
    assert len(chains) == len(set(chains))
    assert {frozenset(c) for c in chains} == _brute_chains(P)
    assert count_chains(P) == len(chains)
    for c in chains:
        assert all(P.lt(a, b) for a, b in zip(c, c[1:]))
    maximal = {frozenset(c) for c in enumerate_chains(P, maximal_only=True)}
    brute = _brute_chains(P)
    assert maximal == {c for c in brute if not any(c < d for d in brute)}


def test_chain_enumeration_is_deterministic():
    P = random_poset(7, random.Random(5))
    assert enumerate_chains(P) == enumerate_chains(P)


def test_chain_cap_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="posetdecomp"):
        enumerate_chains(boolean_lattice(3), cap=5)
    assert "cap" in caplog.text


def test_join_meet_examples():
    B3 = boolean_lattice(3)
    assert join(B3, "1", "2") == "12"
    assert join(antichain(2), "0", "1") is None
    Pi4 = partition_lattice(4)
    assert meet(Pi4, "12|34", "13|24") == Pi4.bottom() == "1|2|3|4"
    assert join_all(B3, []) == "∅"


@settings(max_examples=80, deadline=None)
@given(posets(max_size=6))
def test_join_is_least_upper_bound(P):
    for a, b in itertools.combinations(P.elements, 2):
        ups = [u for u in P.elements if P.leq(a, u) and P.leq(b, u)]
        least = [u for u in ups if all(P.leq(u, v) for v in ups)]
        assert join(P, a, b) == (least[0] if least else None)


def test_isomorphism_examples():
    B2 = boolean_lattice(2)
    f = constrained_isomorphism(B2, product(chain(2), chain(2)))
    assert f is not None and is_isomorphism(B2, product(chain(2), chain(2)), f)
    assert constrained_isomorphism(B2, chain(4)) is None
    assert constrained_isomorphism(B2, B2, {"∅": "12"}) is None


@settings(max_examples=80, deadline=None)
@given(posets(max_size=7), posets(max_size=7))
def test_isomorphism_agrees_with_networkx(P, Q):
    ours = constrained_isomorphism(P, Q)
    theirs = nx.is_isomorphic(_digraph(P), _digraph(Q))
    assert (ours is not None) == theirs
    if ours is not None:
        assert is_isomorphism(P, Q, ours)


@settings(max_examples=60, deadline=None)
@given(posets(max_size=7))
def test_isomorphism_to_shuffled_relabel(P):
    names = list(P.elements)
    perm = names[:]
    random.Random(len(names)).shuffle(perm)
    Q = P.relabel(dict(zip(names, perm)))
    f = constrained_isomorphism(P, Q)
    assert f is not None and is_isomorphism(P, Q, f)


# Unlabelled posets (A000112) and lattices (A006966).
POSET_COUNTS = {1: 1, 2: 2, 3: 5, 4: 16, 5: 63, 6: 318}
LATTICE_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 5, 6: 15, 7: 53, 8: 222}


@pytest.mark.parametrize("n", sorted(POSET_COUNTS))
def test_poset_enumeration_counts(n):
    found = enumerate_posets(n)
    assert len(found) == POSET_COUNTS[n]


def test_poset_enumeration_has_no_duplicates():
    found = enumerate_posets(5)
    for a, b in itertools.combinations(found, 2):
        assert not isomorphic(a, b)


@pytest.mark.parametrize("n", sorted(LATTICE_COUNTS))
def test_lattice_enumeration_counts(n):
    found = enumerate_lattices(n)
    assert len(found) == LATTICE_COUNTS[n]
    assert all(is_lattice(L) for L in found)


def test_empty_poset_operations():
    E = Poset([])
    assert enumerate_chains(E) == []
    assert len(product(E, boolean_lattice(2))) == 0
    assert dual(E) == E
