import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from posetdecomp.catalog import boolean_lattice, name_set, partition_lattice, set_name
from posetdecomp.complexes import decomposition_complex
from posetdecomp.decomp import closure, maximal_decomposition_set
from posetdecomp.errors import ParseError, PreconditionError, ResourceError
from posetdecomp.geometry import verify_realization
from posetdecomp.matroid import (
    OUTSIDE,
    all_types,
    atom_realization,
    bergman_face_poset,
    bergman_fan_cones,
    bergman_faces,
    complete_graph_edges,
    fan_rays,
    fan_to_dict,
    graphic,
    is_loopfree_type,
    lattice_of_flats,
    level_sets,
    lineality_basis,
    matroid_from,
    matroid_type,
    membership_test,
    ordered_set_partitions,
    psi_flats,
    uniform,
    verify_bergman_embedding,
)
from posetdecomp.poset import isomorphic, join, meet

K4 = complete_graph_edges(4)


def _rank(M, A):
    return max(len(set(A) & set(b)) for b in M.bases)


def _brute_flats(M):
    E = range(1, M.ground_size + 1)
    out = set()
    for k in range(M.ground_size + 1):
        for A in itertools.combinations(E, k):
            r = _rank(M, A)
            if all(_rank(M, set(A) | {e}) > r for e in E if e not in A):
                out.add(frozenset(A))
    return out


def _brute_type(M, omega):
    best = max(sum(omega[e - 1] for e in b) for b in M.bases)
    return frozenset(b for b in M.bases if sum(omega[e - 1] for e in b) == best)


def _loopfree_types_by_grid(M):
    n = M.ground_size
    found = set()
    for omega in itertools.product(range(n), repeat=n):
        t = _brute_type(M, omega)
        if frozenset().union(*t) == M.ground:
            found.add(t)
    return found


def _test_matroids():
    yield "U23", uniform(2, 3)
    yield "U24", uniform(2, 4)
    yield "U34", uniform(3, 4)
    yield "K4", graphic(4, K4)
    yield "C4", graphic(4, [[0, 1], [1, 2], [2, 3], [3, 0]])
    for n in range(1, 6):
        yield f"free{n}", uniform(n, n)


MATROIDS = dict(_test_matroids())


def test_construction_examples():
    assert {set_name(b) for b in uniform(2, 3).bases} == {"12", "13", "23"}
    K = graphic(4, K4)
    assert len(K.bases) == 16
    M = matroid_from({"type": "bases", "n": 3, "bases": [[1, 2], [1, 3]]})
    assert M.rank == 2 and _rank(M, {1}) == 1


def test_graphic_bases_are_spanning_trees():
    edges = K4 + [[0, 1]]
    M = graphic(4, edges)
    trees = set()
    for sub in itertools.combinations(range(len(edges)), 3):
        g = nx.MultiGraph()
        g.add_nodes_from(range(4))
        g.add_edges_from(edges[i] for i in sub)
        if nx.is_tree(g):
            trees.add(frozenset(i + 1 for i in sub))
    assert M.bases == trees


@pytest.mark.parametrize("spec, fragment", [
    ({"type": "bases", "n": 4, "bases": [[1, 2], [3, 4]]}, "exchange"),
    ({"type": "bases", "n": 3, "bases": []}, "at least one"),
    ({"type": "bases", "n": 3, "bases": [[1], [2, 3]]}, "sizes"),
    ({"type": "uniform", "r": 4, "n": 3}, "0 <= r <= n"),
    ({"type": "graphic", "vertices": 2, "edges": [[0, 5]]}, "vertex"),
    ({"type": "wheel"}, "unknown"),
    ("{oops", "JSON"),
])
def test_matroid_rejections(spec, fragment):
    with pytest.raises(ParseError, match=fragment):
        matroid_from(spec)


@pytest.mark.parametrize("name", MATROIDS)
def test_flats_match_rank_definition(name):
    M = MATROIDS[name]
    assert set(M.flats) == _brute_flats(M)


def test_flat_lattice_examples():
    U = lattice_of_flats(uniform(2, 3))
    assert set(U.elements) == {"∅", "1", "2", "3", "123"}
    L = lattice_of_flats(graphic(4, K4))
    assert len(L) == 15 and isomorphic(L, partition_lattice(4))
    assert len(lattice_of_flats(uniform(1, 1))) == 2
    assert isomorphic(lattice_of_flats(uniform(3, 3)), boolean_lattice(3))


@pytest.mark.parametrize("name", MATROIDS)
def test_atom_realization_is_valid(name):
    M = MATROIDS[name]
    L = lattice_of_flats(M)
    phi = atom_realization(L)
    assert verify_realization(L, maximal_decomposition_set(L), phi)[0]


def test_atom_realization_examples():
    L = lattice_of_flats(uniform(2, 3))
    phi = atom_realization(L)
    assert phi.phi["123"] == {1, 2, 3}
    assert [phi.phi[a] for a in ("1", "2", "3")] == [{1}, {2}, {3}]
    B3 = boolean_lattice(3)
    assert atom_realization(B3).phi == {x: frozenset(int(c) for c in x if c != "∅") for x in B3.elements}
    K = lattice_of_flats(graphic(4, K4))
    triangle = set_name({1, 2, 4})  # edges 01, 02, 12
    assert len(atom_realization(K).phi[triangle]) == 3


def test_type_examples():
    U = uniform(2, 3)
    assert matroid_type(U, (0, 0, 0)).bases == U.bases
    assert matroid_type(U, (1, 0, 0)).names() == ["12", "13"]
    assert matroid_type(U, (2, 1, 0)).names() == ["12"]
    assert is_loopfree_type(matroid_type(U, (0, 0, 0)))
    assert not is_loopfree_type(matroid_type(U, (2, 1, 0)))
    assert is_loopfree_type(matroid_type(U, (1, 0, 0)))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(list(MATROIDS.values())), st.data())
def test_type_matches_brute_force(M, data):
    omega = [Fraction(data.draw(st.integers(-6, 6)), data.draw(st.integers(1, 4))) for _ in range(M.ground_size)]
    assert matroid_type(M, omega).bases == _brute_type(M, omega)


def test_ordered_set_partitions_count():
    # Fubini numbers.
    assert [sum(1 for _ in ordered_set_partitions(range(n))) for n in range(6)] == [1, 1, 3, 13, 75, 541]


def test_face_poset_examples():
    B = bergman_face_poset(uniform(2, 3))
    assert sorted(tuple(t.names()) for t in B.types) == [("12", "13"), ("12", "13", "23"), ("12", "23"), ("13", "23")]
    assert len(bergman_face_poset(uniform(1, 2))) == 1
    with pytest.raises(ResourceError):
        all_types(uniform(2, 9))


@pytest.mark.parametrize("name", MATROIDS)
def test_loopfree_types_match_weight_grid(name):
    M = MATROIDS[name]
    found = {t.bases for t in bergman_face_poset(M).types}
    assert found == _loopfree_types_by_grid(M)


def test_k4_type_count_matches_faces_through_bounds():
    M = graphic(4, K4)
    assert len(bergman_face_poset(M)) == len(bergman_faces(M))


def test_psi_examples():
    U = uniform(2, 3)
    names = lambda t: {set_name(F) for F in psi_flats(U, t)}
    assert names(matroid_type(U, (0, 0, 0))) == {"∅", "123"}
    assert names(matroid_type(U, (1, 0, 0))) == {"∅", "1", "123"}


@pytest.mark.parametrize("name", ["U23", "U24", "U34", "K4"])
def test_all_bases_type_of_connected_matroid(name):
    M = MATROIDS[name]
    full = matroid_type(M, [0] * M.ground_size)
    assert psi_flats(M, full) == {frozenset(), M.ground}


@pytest.mark.parametrize("name", MATROIDS)
def test_bergman_embedding_verifies(name):
    M = MATROIDS[name]
    assert verify_bergman_embedding(M) == (True, None)


@pytest.mark.parametrize("name", MATROIDS)
def test_psi_images_are_closed_and_modular(name):
    # The two facts the embedding proof borrows: psi(M_w) is closed, and any two
    # of its flats have modular rank with meet and join again in psi(M_w).
    M = MATROIDS[name]
    L = lattice_of_flats(M)
    G = maximal_decomposition_set(L)
    for t in bergman_face_poset(M).types:
        image = {set_name(F) for F in psi_flats(M, t)}
        assert closure(L, G, image) == image
        for a, b in itertools.combinations(sorted(image), 2):
            lo, hi = meet(L, a, b), join(L, a, b)
            assert lo in image and hi in image
            assert M.rank_of(name_set(a)) + M.rank_of(name_set(b)) == M.rank_of(name_set(lo)) + M.rank_of(name_set(hi))


def test_free_matroid_has_a_single_face():
    M = uniform(3, 3)
    B = bergman_face_poset(M)
    assert len(B) == 1
    assert psi_flats(M, B.types[0]) == set(M.flats)


def test_matroid_with_loops_is_rejected():
    M = uniform(0, 3)
    with pytest.raises(PreconditionError):
        bergman_face_poset(M)


def test_fan_examples():
    U = uniform(2, 3)
    cones = bergman_fan_cones(U)
    assert fan_rays(cones) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert lineality_basis(U) == ((1, 1, 1),)
    K = graphic(4, K4)
    rays = fan_rays(bergman_fan_cones(K))
    assert len(rays) == 13
    assert sum(1 for r in rays if sum(r) == 1) == 6 and sum(1 for r in rays if sum(r) == 3) == 4
    free = uniform(3, 3)
    cones = bergman_fan_cones(free)
    assert len(cones) == 1 and len(cones[0].rays) == 6
    assert lineality_basis(free) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_fan_export_shape():
    U = uniform(2, 3)
    doc = fan_to_dict(U, bergman_fan_cones(U))
    assert doc["lineality"] == [[1, 1, 1]]
    assert {"flat_chain", "rays"} == set(doc["cones"][0])


def test_membership_examples():
    U = uniform(2, 3)
    assert membership_test(U, (1, 1, 1)) == {"∅", "123"}
    assert membership_test(U, (1, 0, 0)) == {"∅", "1", "123"}
    K = graphic(4, K4)
    omega = (1, 1, 0, 0, 0, 0)  # edges 01 and 02 share vertex 0; {1, 2} is not a flat
    assert membership_test(K, omega) == OUTSIDE
    assert not is_loopfree_type(matroid_type(K, omega))


def test_level_sets():
    assert level_sets((3, 1, 3, 2)) == [frozenset({1, 3}), frozenset({1, 3, 4})]
    assert level_sets((5, 5)) == []


@pytest.mark.parametrize("name", MATROIDS)
def test_membership_iff_loopfree(name):
    M = MATROIDS[name]
    rng = random.Random(name)
    L = lattice_of_flats(M)
    G = maximal_decomposition_set(L)
    for _ in range(150):
        omega = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(M.ground_size)]
        inside = membership_test(M, omega, L, G) != OUTSIDE
        assert inside == is_loopfree_type(matroid_type(M, omega)), omega


@pytest.mark.parametrize("name", ["U23", "U24", "K4"])
def test_membership_face_matches_type_image(name):
    M = MATROIDS[name]
    rng = random.Random(7)
    L = lattice_of_flats(M)
    G = maximal_decomposition_set(L)
    for _ in range(100):
        omega = [rng.randint(0, 3) for _ in range(M.ground_size)]
        face = membership_test(M, omega, L, G)
        if face == OUTSIDE:
            continue
        assert face == {set_name(F) for F in psi_flats(M, matroid_type(M, omega))}


def test_bergman_faces_are_faces():
    M = graphic(4, K4)
    L = lattice_of_flats(M)
    D = decomposition_complex(L, maximal_decomposition_set(L))
    for f in bergman_faces(M, L, D):
        assert f.members in D and {"∅", set_name(M.ground)} <= f.members
