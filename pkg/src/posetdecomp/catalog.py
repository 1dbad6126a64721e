"""Named posets and exhaustive / random poset generators used by the test suites."""

from __future__ import annotations

import itertools
import random
from typing import Iterable

from .poset import Poset, _bits, constrained_isomorphism, is_lattice, signatures


def set_name(s: Iterable[int]) -> str:
    """Canonical id of a finite set of positive integers: ``∅``, ``12``, ``1,10``."""
    s = sorted(s)
    if not s:
        return "∅"
    if s[-1] >= 10:
        return ",".join(map(str, s))
    return "".join(map(str, s))


def name_set(name: str) -> frozenset:
    """Inverse of :func:`set_name`."""
    if name in ("∅", ""):
        return frozenset()
    if "," in name:
        return frozenset(int(t) for t in name.split(","))
    return frozenset(int(c) for c in name)


def boolean_lattice(n: int) -> Poset:
    """B_n on {1..n}; elements ordered by size, then lexicographically."""
    subsets = [c for k in range(n + 1) for c in itertools.combinations(range(1, n + 1), k)]
    names = [set_name(s) for s in subsets]
    rel = []
    for s in subsets:
        for t in subsets:
            if len(t) == len(s) + 1 and set(s) <= set(t):
                rel.append((set_name(s), set_name(t)))
    return Poset(names, rel)


def chain(n: int, names=None) -> Poset:
    names = list(names) if names is not None else [str(i) for i in range(n)]
    return Poset(names, list(zip(names, names[1:])))


def antichain(n: int, names=None) -> Poset:
    names = list(names) if names is not None else [str(i) for i in range(n)]
    return Poset(names)


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def partition_name(blocks) -> str:
    return "|".join("".join(map(str, b)) for b in sorted(sorted(b) for b in blocks))


def partition_lattice(n: int) -> Poset:
    """Π_n ordered by refinement (bottom ``1|2|...|n``, top ``12...n``)."""
    parts = [tuple(tuple(sorted(b)) for b in p) for p in _set_partitions(list(range(1, n + 1)))]
    parts.sort(key=lambda p: (-len(p), partition_name(p)))
    names = [partition_name(p) for p in parts]

    def refines(p, q):
        return all(any(set(b) <= set(c) for c in q) for b in p)

    rel = [(names[i], names[j]) for i, p in enumerate(parts) for j, q in enumerate(parts)
           if i != j and refines(p, q)]
    return Poset(names, rel)


def quadrangle_plus_bottom() -> Poset:
    """Face poset of a quadrangle (4 vertices, 4 edges, the 2-cell) with a new minimum."""
    vs = ["v1", "v2", "v3", "v4"]
    es = {"e12": ("v1", "v2"), "e23": ("v2", "v3"), "e34": ("v3", "v4"), "e41": ("v4", "v1")}
    rel = [("0", v) for v in vs]
    for e, (a, b) in es.items():
        rel += [(a, e), (b, e), (e, "Q")]
    return Poset(["0"] + vs + list(es) + ["Q"], rel)


def poset_from_masks(up, names=None) -> Poset:
    names = names or [str(i) for i in range(len(up))]
    return Poset._from_masks(names, up)


# ---------------------------------------------------------------------------
# enumeration up to isomorphism


def _order_ideals(up, n):
    down = [0] * n
    for i in range(n):
        for j in _bits(up[i]):
            down[j] |= 1 << i
    for mask in range(1 << n):
        ok = True
        for i in _bits(mask):
            if down[i] & ~mask:
                ok = False
                break
        if ok:
            yield mask


def _invariant(P: Poset):
    sig = signatures(P)
    rows = []
    for i, e in enumerate(P.elements):
        ups = sorted(sig[P.index[u]] for u in P.upper_covers(e))
        downs = sorted(sig[P.index[d]] for d in P.lower_covers(e))
        rows.append((sig[i], tuple(ups), tuple(downs)))
    return tuple(sorted(rows)), sig


_POSET_CACHE: dict = {}


def enumerate_posets(n: int) -> list:
    """All posets on ``n`` elements up to isomorphism (ids ``"0".."n-1"``).

    Grown one new maximal element at a time; duplicates are removed by an
    invariant bucket followed by an explicit isomorphism test.
    """
    if n in _POSET_CACHE:
        return _POSET_CACHE[n]
    if n == 0:
        result = [poset_from_masks([])]
    else:
        result = []
        buckets: dict = {}
        for base in enumerate_posets(n - 1):
            up0 = list(base._up)
            for ideal in _order_ideals(up0, n - 1):
                up = [m | (1 << (n - 1)) if ideal >> i & 1 else m for i, m in enumerate(up0)]
                up.append(1 << (n - 1))
                P = poset_from_masks(up)
                key, sig = _invariant(P)
                bucket = buckets.setdefault(key, [])
                if any(constrained_isomorphism(P, Q, sig_a=sig, sig_b=sq) is not None
                       for Q, sq in bucket):
                    continue
                bucket.append((P, sig))
                result.append(P)
    _POSET_CACHE[n] = result
    return result


def enumerate_lattices(n: int) -> list:
    """Lattices with ``n`` elements up to isomorphism (bounded extensions of ``n-2``-posets)."""
    if n == 1:
        return [poset_from_masks([1], ["0"])]
    if n == 2:
        return [chain(2, ["b", "t"])]
    out = []
    for core in enumerate_posets(n - 2):
        m = n - 2
        full = (1 << n) - 1
        up = [full]  # bottom at index 0
        for i in range(m):
            up.append((core._up[i] << 1) | (1 << (n - 1)))
        up.append(1 << (n - 1))
        names = ["b"] + [f"e{i}" for i in range(m)] + ["t"]
        L = poset_from_masks(up, names)
        if is_lattice(L):
            out.append(L)
    return out


def random_poset(n: int, rng: random.Random, density: float | None = None) -> Poset:
    """Random naturally labelled poset: each pair i<j related with probability ``density``."""
    p = rng.uniform(0.15, 0.6) if density is None else density
    names = [str(i) for i in range(n)]
    rel = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    order = names[:]
    rng.shuffle(order)
    return Poset(order, rel)
