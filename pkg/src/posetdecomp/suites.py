"""Exhaustive and randomized verification suites shared by the CLI and the tests."""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import catalog
from .complexes import (
    chain_classes,
    decomposition_complex,
    is_face,
    non_face_intersections,
    order_complex_face_poset,
    verify_face_lattice,
)
from .decomp import (
    DecompositionSet,
    all_witnesses,
    closure,
    complementary,
    is_minimal_wrt,
    maximal_decomposition_set,
    minimality_characterization_check,
    normalize,
    trivial_decomposition_set,
)
from .geometry import (
    canonical_min_realization,
    check_pseudo_complex,
    identity_realization,
    is_polytopal_complex,
    realizability_probe,
    realize_complex,
    verify_realization,
)
from .matroid import (
    bergman_face_poset,
    bergman_faces,
    complete_graph_edges,
    graphic,
    is_loopfree_type,
    lattice_of_flats,
    matroid_type,
    membership_test,
    OUTSIDE,
    uniform,
    verify_bergman_embedding,
    bergman_fan_cones,
    fan_rays,
)
from .nested import building_preset, is_building_set, nested_sets, verify_nested_image
from .poset import Poset, enumerate_chains, parse_poset, product
from .products import product_closure_check, product_decomposition_set

DEFAULT_SEED = 20240601


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    violations: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.violations == 0

    categories: dict = field(default_factory=dict)

    def fail(self, msg: str, category: str | None = None):
        self.violations += 1
        if category:
            self.categories[category] = self.categories.get(category, 0) + 1
        if len(self.failures) < 5:
            self.failures.append(msg)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "".join(f" {k}={v}" for k, v in {**self.notes, **self.categories}.items())
        return f"{status} {self.name}: checked={self.checked} violations={self.violations}{extra} ({self.seconds:.1f}s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def posets_up_to(n: int):
    for k in range(1, n + 1):
        yield from catalog.enumerate_posets(k)


def random_normalized_set(P: Poset, rng: random.Random, Gmax: DecompositionSet | None = None) -> DecompositionSet:
    Gmax = Gmax or maximal_decomposition_set(P)
    pool = list(Gmax.proper_members)
    p = rng.random()
    chosen = [d for d in pool if rng.random() < p]
    return normalize(DecompositionSet(P, chosen, verify=False))


def closed_subsets(P: Poset, G: DecompositionSet):
    n = len(P)
    for mask in range(1, 1 << n):
        A = frozenset(P.from_mask(mask))
        if closure(P, G, A) == A:
            yield A


# ---------------------------------------------------------------------------
# complexes


@_timed
def order_complex_suite(max_n: int = 7) -> SuiteResult:
    """D(P, G_min) against the order complex for every poset up to isomorphism."""
    res = SuiteResult("order_complex")
    for P in posets_up_to(max_n):
        res.checked += 1
        D = decomposition_complex(P, trivial_decomposition_set(P))
        O = order_complex_face_poset(P)
        if D.member_sets() != O.member_sets() or len(D) != len(O):
            res.fail(f"mismatch on {P.to_dict()}")
    return res


def _check_structure(P: Poset, G: DecompositionSet, res: SuiteResult, rng: random.Random):
    """Closure laws, minimality lemma, three-way face equivalence and face lattices."""
    n = len(P)
    subsets = [frozenset(P.from_mask(m)) for m in range(1 << n)]
    cl = {A: closure(P, G, A) for A in subsets}
    for A in subsets:
        c = cl[A]
        if not A <= c or cl[c] != c:
            res.fail(f"closure law (extensive/idempotent) at {sorted(A)}", "closure_law")
    for _ in range(8):
        A = rng.choice(subsets)
        B = A | rng.choice(subsets)
        if not cl[A] <= cl[B]:
            res.fail(f"closure not monotone at {sorted(A)} <= {sorted(B)}", "closure_law")
    res.checked += 1
    if not G.normalized:
        return
    D = decomposition_complex(P, G)
    faces = D.member_sets()
    closed = [A for A in subsets if A and cl[A] == A]
    for A in closed:
        for d in G.proper_members:
            if d.x in A and d.y in A:
                if is_minimal_wrt(G, d, A) != minimality_characterization_check(G, d, A):
                    res.fail(f"minimality lemma fails for {d.triple} and {sorted(A)}", "minimality")
                if is_minimal_wrt(G, d, A) != is_minimal_wrt(G, complementary(d), A):
                    res.fail(f"minimality not symmetric for {d.triple} and {sorted(A)}", "minimality_symmetry")
        in_d = A in faces
        face_ok = is_face(P, G, A)[0]
        one_class = len(chain_classes(P, G, A)) == 1
        if not in_d == face_ok == one_class:
            res.fail(f"face equivalence ({in_d}, {face_ok}, {one_class}) at {sorted(A)}", "face_equivalence")
    for A in subsets:
        if A and cl[A] != A and (A in faces or is_face(P, G, A)[0]):
            res.fail(f"non-closed set {sorted(A)} reported as face", "face_equivalence")
    for f in D.faces:
        if not verify_face_lattice(P, G, f):
            res.fail(f"face {sorted(f.members)} of poset with covers {list(P.covers)} is not a lattice",
                     "face_lattice")


@_timed
def structure_suite(max_n: int = 6, random_per_size: int = 500, seed: int = DEFAULT_SEED) -> SuiteResult:
    """Closure laws and the face characterizations over all small posets and random normalized sets."""
    res = SuiteResult("structure")
    rng = random.Random(seed)
    for P in posets_up_to(max_n):
        Gmax = maximal_decomposition_set(P)
        _check_structure(P, trivial_decomposition_set(P), res, rng)
        _check_structure(P, Gmax, res, rng)
    extra = 0
    for n in range(2, max_n + 1):
        pool = catalog.enumerate_posets(n)
        rich = [P for P in pool if maximal_decomposition_set(P).proper_members] or pool
        for _ in range(random_per_size):
            P = rng.choice(rich)
            G = random_normalized_set(P, rng)
            extra += 1
            _check_structure(P, G, res, rng)
    res.notes["random_sets"] = extra
    return res


@_timed
def witness_suite(max_n: int = 6) -> SuiteResult:
    """Complements do not depend on the witness; properness is shared with the complement."""
    res = SuiteResult("witnesses")
    multi = 0
    for P in posets_up_to(max_n):
        for d in maximal_decomposition_set(P).proper_members:
            ws = all_witnesses(P, d.x, d.z, d.y)
            res.checked += 1
            if len(ws) > 1:
                multi += 1
            if len({w[(d.x, d.y)] for w in ws}) != 1:
                res.fail(f"complement depends on witness for {d.triple}")
            if complementary(d).trivial:
                res.fail(f"complement of proper {d.triple} is trivial")
    res.notes["triples_with_several_witnesses"] = multi
    return res


@_timed
def realization_suite(max_n: int = 7) -> SuiteResult:
    res = SuiteResult("canonical_realization")
    for P in posets_up_to(max_n):
        res.checked += 1
        ok, bad = verify_realization(P, trivial_decomposition_set(P), canonical_min_realization(P))
        if not ok:
            res.fail(f"canonical realization fails at {bad}")
    return res


# ---------------------------------------------------------------------------
# products


def product_factor_pool(max_size: int = 5, rng: random.Random | None = None, randoms: int = 4) -> list:
    rng = rng or random.Random(DEFAULT_SEED)
    pool = []
    for k in range(1, max_size + 1):
        pool.append((f"chain{k}", catalog.chain(k)))
        pool.append((f"antichain{k}", catalog.antichain(k)))
    B2 = catalog.boolean_lattice(2)
    pool.append(("B2", B2))
    B3 = catalog.boolean_lattice(3)
    pool.append(("B3-point", B3.subposet([e for e in B3.elements if e != "123"])))
    for i in range(randoms):
        k = rng.randint(2, max_size)
        pool.append((f"random{i}", catalog.random_poset(k, rng)))
    return pool


@_timed
def product_closure_suite(max_size: int = 5, seed: int = DEFAULT_SEED, max_product: int = 36) -> SuiteResult:
    """Closure of chains in products against the product of projected closures."""
    res = SuiteResult("product_closure")
    rng = random.Random(seed)
    pool = product_factor_pool(max_size, rng)
    for (n1, P1), (n2, P2) in itertools.product(pool, repeat=2):
        if len(P1) * len(P2) > max_product:
            continue
        sets1 = [trivial_decomposition_set(P1), maximal_decomposition_set(P1)]
        sets2 = [trivial_decomposition_set(P2), maximal_decomposition_set(P2)]
        sets1.append(random_normalized_set(P1, rng, sets1[1]))
        sets2.append(random_normalized_set(P2, rng, sets2[1]))
        for G1, G2 in itertools.product(sets1, sets2):
            G = product_decomposition_set(G1, G2)
            if G1.symmetric and G2.symmetric and not G.symmetric:
                res.fail(f"symmetry lost in {n1} x {n2}")
            if G1.downward_closed and G2.downward_closed and not G.downward_closed:
                res.fail(f"downward closure lost in {n1} x {n2}")
            for ch in enumerate_chains(G.poset):
                res.checked += 1
                if not product_closure_check(G1, G2, ch, G):
                    res.fail(f"closure mismatch in {n1} x {n2} at {ch}")
    return res


@_timed
def product_sets_suite(max_size: int = 5) -> SuiteResult:
    """Maximal sets multiply; minimal sets multiply exactly when a factor is an antichain."""
    res = SuiteResult("product_sets")
    pool = list(posets_up_to(max_size))
    for i, P1 in enumerate(pool):
        for P2 in pool[i:]:
            res.checked += 1
            PP = product(P1, P2)
            G = product_decomposition_set(maximal_decomposition_set(P1), maximal_decomposition_set(P2), PP)
            if G.triples() != maximal_decomposition_set(PP).triples():
                res.fail(f"maximal sets differ for {P1.to_dict()} x {P2.to_dict()}")
            Gm = product_decomposition_set(trivial_decomposition_set(P1), trivial_decomposition_set(P2), PP)
            equal = Gm.triples() == trivial_decomposition_set(PP).triples()
            if equal != (P1.is_antichain() or P2.is_antichain()):
                res.fail(f"antichain criterion fails for {P1.to_dict()} x {P2.to_dict()}")
    return res


# ---------------------------------------------------------------------------
# nested sets


@_timed
def nested_suite(max_lattice: int = 8) -> SuiteResult:
    """Embedding theorem on Boolean lattices and on every building set of small lattices."""
    res = SuiteResult("nested")
    for n in (3, 4):
        B = catalog.boolean_lattice(n)
        for name in ("atoms", "all"):
            res.checked += 1
            ok, why = verify_nested_image(B, building_preset(B, name))
            if not ok:
                res.fail(f"B_{n} {name}: {why}")
    found = 0
    differ = 0
    literal_fail = 0
    for k in range(1, max_lattice + 1):
        for L in catalog.enumerate_lattices(k):
            zero = L.bottom()
            rest = [e for e in L.elements if e != zero]
            for r in range(len(rest) + 1):
                for G in itertools.combinations(rest, r):
                    if not is_building_set(L, G)[0]:
                        continue
                    found += 1
                    res.checked += 1
                    if nested_sets(L, G) != nested_sets(L, G, literal=True):
                        differ += 1
                    if not verify_nested_image(L, G, literal=True)[0]:
                        literal_fail += 1
                    ok, why = verify_nested_image(L, G)
                    if not ok:
                        res.fail(f"lattice covers {list(L.covers)} building set {list(G)}: {why}")
    res.notes.update(building_sets=found, readings_differ=differ, literal_reading_failures=literal_fail)
    return res


# ---------------------------------------------------------------------------
# matroids


def bergman_matroids() -> list:
    out = [
        ("U23", uniform(2, 3)),
        ("U24", uniform(2, 4)),
        ("U34", uniform(3, 4)),
        ("K4", graphic(4, complete_graph_edges(4))),
        ("C4", graphic(4, [[0, 1], [1, 2], [2, 3], [3, 0]])),
    ]
    out += [(f"free{n}", uniform(n, n)) for n in range(1, 6)]
    return out


@_timed
def bergman_suite(seed: int = DEFAULT_SEED, samples: int = 200) -> SuiteResult:
    res = SuiteResult("bergman")
    rng = random.Random(seed)
    for name, M in bergman_matroids():
        res.checked += 1
        ok, why = verify_bergman_embedding(M)
        if not ok:
            res.fail(f"{name}: {why}")
        L = lattice_of_flats(M)
        G = maximal_decomposition_set(L)
        if len(bergman_face_poset(M)) != len(bergman_faces(M, L)):
            res.fail(f"{name}: type count differs from face count")
        for _ in range(samples):
            omega = [rng.randint(-3, 3) for _ in range(M.ground_size)]
            inside = membership_test(M, omega, L, G) != OUTSIDE
            if inside != is_loopfree_type(matroid_type(M, omega)):
                res.fail(f"{name}: membership disagrees with type at {omega}")
    rays = {name: len(fan_rays(bergman_fan_cones(M))) for name, M in bergman_matroids()[:4]}
    res.notes["rays"] = ",".join(f"{k}:{v}" for k, v in rays.items())
    if rays["U23"] != 3 or rays["K4"] != 13:
        res.fail(f"ray counts {rays}")
    return res


# ---------------------------------------------------------------------------
# pseudo-complexes and realizability


FIXTURE = Path(__file__).with_name("data") / "pseudo_complex_fixture.json"


def load_pseudo_fixture(path: Path = FIXTURE) -> dict:
    data = json.loads(path.read_text(encoding="utf-8"))
    data["poset"] = parse_poset(data["poset"])
    return data


@_timed
def pseudo_complex_suite(path: Path = FIXTURE) -> SuiteResult:
    res = SuiteResult("pseudo_complex")
    fx = load_pseudo_fixture(path)
    P = fx["poset"]
    G = maximal_decomposition_set(P)
    D = decomposition_complex(P, G)
    hits = non_face_intersections(P, G, D)
    inter = frozenset(fx["intersection"])
    res.checked += 1
    if inter not in {c for _, _, c in hits}:
        res.fail("pinned intersection is no longer a non-face intersection")
    if len(chain_classes(P, G, inter)) < 2 or is_face(P, G, inter)[0]:
        res.fail("pinned intersection should split into several chain classes")
    pc = realize_complex(P, G, identity_realization(P), D)
    if not check_pseudo_complex(pc, denominator=2):
        res.fail("pseudo-complex axioms fail")
    if is_polytopal_complex(pc):
        res.fail("realization unexpectedly is a polytopal complex")
    return res


@_timed
def realizability_suite() -> SuiteResult:
    res = SuiteResult("realizability")
    Q = catalog.quadrangle_plus_bottom()
    res.checked += 3
    if realizability_probe(Q, maximal_decomposition_set(Q)) != "NOT_REALIZABLE":
        res.fail("quadrangle plus bottom should not be realizable")
    B3 = catalog.boolean_lattice(3)
    if realizability_probe(B3, maximal_decomposition_set(B3)) != "UNKNOWN":
        res.fail("B_3 with the maximal set should be UNKNOWN")
    if realizability_probe(Q, trivial_decomposition_set(Q)) != "UNKNOWN":
        res.fail("minimal sets are always realizable")
    return res


SUITES = {
    "order_complex": lambda max_n, seed: order_complex_suite(min(max_n, 7)),
    "structure": lambda max_n, seed: structure_suite(min(max_n, 6), 500, seed),
    "witnesses": lambda max_n, seed: witness_suite(min(max_n, 6)),
    "canonical_realization": lambda max_n, seed: realization_suite(min(max_n, 7)),
    "product_closure": lambda max_n, seed: product_closure_suite(min(max_n, 5), seed),
    "product_sets": lambda max_n, seed: product_sets_suite(min(max_n, 5)),
    "nested": lambda max_n, seed: nested_suite(min(max_n, 8)),
    "bergman": lambda max_n, seed: bergman_suite(seed),
    "pseudo_complex": lambda max_n, seed: pseudo_complex_suite(),
    "realizability": lambda max_n, seed: realizability_suite(),
}


def run_suites(names, max_n: int, seed: int = DEFAULT_SEED) -> list:
    if "all" in names:
        names = list(SUITES)
    return [SUITES[n](max_n, seed) for n in names]
