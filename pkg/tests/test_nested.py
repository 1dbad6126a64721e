import itertools

import pytest

from posetdecomp.catalog import antichain, boolean_lattice, name_set, partition_lattice
from posetdecomp.complexes import order_complex_face_poset
from posetdecomp.decomp import trivial_decomposition_set
from posetdecomp.errors import PreconditionError
from posetdecomp.matroid import lattice_of_flats, uniform
from posetdecomp.nested import (
    building_preset,
    factors,
    is_building_set,
    is_nested,
    nested_embedding,
    nested_set_complex,
    nested_sets,
    nested_target_set,
    verify_nested_image,
)
from posetdecomp.poset import Poset, enumerate_chains


def _classical_building(G, n):
    sets = {name_set(g) for g in G}
    if not all(frozenset({i}) in sets for i in range(1, n + 1)):
        return False
    return all(a | b in sets for a in sets for b in sets if a & b)


def _classical_nested(S, G):
    sets = [name_set(s) for s in S]
    gsets = {name_set(g) for g in G}
    for a, b in itertools.combinations(sets, 2):
        if not (a <= b or b <= a or not a & b):
            return False
    for k in range(2, len(sets) + 1):
        for part in itertools.combinations(sets, k):
            if all(not a & b for a, b in itertools.combinations(part, 2)):
                if frozenset().union(*part) in gsets:
                    return False
    return True


def _boolean_candidates(n):
    P = boolean_lattice(n)
    nonzero = [e for e in P.elements if e != "∅"]
    atoms = [e for e in nonzero if len(e) == 1]
    rest = [e for e in nonzero if len(e) > 1]
    for k in range(len(rest) + 1):
        for extra in itertools.combinations(rest, k):
            yield P, frozenset(atoms) | frozenset(extra)


def test_factor_examples():
    B3 = boolean_lattice(3)
    atoms = building_preset(B3, "atoms")
    assert factors(B3, atoms, "12") == ("1", "2")
    assert factors(B3, atoms, "3") == ("3",)
    Pi4 = partition_lattice(4)
    G = [p for p in Pi4.elements if sum(len(b) > 1 for b in p.split("|")) == 1]
    assert set(factors(Pi4, G, "12|34")) == {"12|3|4", "1|2|34"}
    with pytest.raises(PreconditionError):
        factors(B3, atoms, "∅")
    with pytest.raises(PreconditionError):
        factors(antichain(2), {"1"}, "1")


def test_building_set_examples():
    B3 = boolean_lattice(3)
    assert is_building_set(B3, building_preset(B3, "all"))[0]
    assert is_building_set(B3, building_preset(B3, "atoms"))[0]
    L = lattice_of_flats(uniform(2, 3))
    assert is_building_set(L, building_preset(L, "all"))[0]
    assert is_building_set(L, building_preset(L, "atoms")) == (False, "123")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_building_sets_match_classical_definition(n):
    for P, G in _boolean_candidates(n):
        assert is_building_set(P, G)[0] == _classical_building(G, n), sorted(G)


def test_building_set_needs_atoms():
    B3 = boolean_lattice(3)
    assert not is_building_set(B3, {"1", "2", "123"})[0]


def test_nested_examples():
    B3 = boolean_lattice(3)
    G = {"1", "2", "3", "123"}
    assert is_nested(B3, G, [])
    assert is_nested(B3, G, ["2"])
    assert is_nested(B3, G, ["1", "2"])
    assert not is_nested(B3, G, ["1", "2", "3"])
    with pytest.raises(PreconditionError):
        is_nested(B3, G, ["12"])


@pytest.mark.parametrize("n", [3, 4])
def test_nested_sets_match_classical_definition(n):
    for P, G in _boolean_candidates(n):
        if not is_building_set(P, G)[0]:
            continue
        found = {frozenset(S) for S in nested_sets(P, G)}
        brute = set()
        members = sorted(G)
        for k in range(1, len(members) + 1):
            for S in itertools.combinations(members, k):
                if _classical_nested(S, G):
                    brute.add(frozenset(S))
        assert found == brute, sorted(G)


def test_full_building_set_gives_chains():
    B3 = boolean_lattice(3)
    G = building_preset(B3, "all")
    C = nested_set_complex(B3, G)
    assert C.member_sets() == order_complex_face_poset(B3.subposet(G)).member_sets()


def test_literal_reading_only_keeps_antichains():
    B3 = boolean_lattice(3)
    G = building_preset(B3, "all")
    literal = nested_sets(B3, G, literal=True)
    assert all(B3.subposet(S).is_antichain() for S in literal)
    assert ("1", "12") not in literal and ("1", "12") in nested_sets(B3, G)


def test_target_set_examples():
    B3 = boolean_lattice(3)
    assert nested_target_set(B3, building_preset(B3, "all")) == trivial_decomposition_set(B3)
    T = nested_target_set(B3, building_preset(B3, "atoms")).proper_triples()
    assert {("∅", "1", "12"), ("∅", "2", "12")} <= T
    assert {("∅", z, "123") for z in B3.elements if z not in ("∅", "123")} <= T
    assert all(x == "∅" for x, _, _ in T)
    L = lattice_of_flats(uniform(2, 3))
    assert nested_target_set(L, building_preset(L, "atoms")) == trivial_decomposition_set(L)


def test_embedding_examples():
    B3 = boolean_lattice(3)
    atoms = building_preset(B3, "atoms")
    assert nested_embedding(B3, atoms, []).members == {"∅"}
    assert nested_embedding(B3, atoms, ["1", "2"]).members == {"∅", "1", "2", "12"}
    assert nested_embedding(B3, atoms, ["1", "2", "3"]).members == set(B3.elements)


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("preset", ["atoms", "all"])
def test_boolean_embeddings_verify(n, preset):
    B = boolean_lattice(n)
    assert verify_nested_image(B, building_preset(B, preset)) == (True, None)


def test_atoms_embedding_counts():
    B3 = boolean_lattice(3)
    atoms = building_preset(B3, "atoms")
    images = {nested_embedding(B3, atoms, S).members for S in [()] + nested_sets(B3, atoms)}
    assert len(images) == 1 + len(nested_sets(B3, atoms))


def test_full_building_set_image_is_chains_through_bottom():
    B3 = boolean_lattice(3)
    G = building_preset(B3, "all")
    images = {nested_embedding(B3, G, S).members for S in [()] + nested_sets(B3, G)}
    assert images == {frozenset(c) for c in enumerate_chains(B3) if c[0] == "∅"}


def test_singleton_lattice():
    P = Poset(["0"])
    assert verify_nested_image(P, set()) == (True, None)
    assert nested_embedding(P, set(), []).members == {"0"}


def test_embedding_failure_is_reported():
    # C2 x C3 with the building set {e0, e1, e2}: under the target set, b < e0 < e2 < t only
    # closes to {b, e0, e1, e2, t}, so the image of the nested set misses e3.
    L = Poset(["b", "e0", "e1", "e2", "e3", "t"],
              [("b", "e0"), ("b", "e1"), ("e0", "e2"), ("e0", "e3"), ("e1", "e3"), ("e2", "t"), ("e3", "t")])
    G = {"e0", "e1", "e2"}
    assert is_building_set(L, G)[0]
    assert is_nested(L, G, G)
    ok, reason = verify_nested_image(L, G)
    assert not ok and "does not generate" in reason


def test_irreducibles_preset():
    B3 = boolean_lattice(3)
    assert building_preset(B3, "irreducibles") == building_preset(B3, "atoms")
    with pytest.raises(PreconditionError):
        building_preset(B3, "nope")


def test_non_building_set_rejected():
    L = lattice_of_flats(uniform(2, 3))
    with pytest.raises(PreconditionError):
        nested_set_complex(L, building_preset(L, "atoms"))
    with pytest.raises(PreconditionError):
        verify_nested_image(L, building_preset(L, "atoms"))
