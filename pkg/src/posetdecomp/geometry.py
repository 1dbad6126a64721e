"""Realizations ``P -> B_n``, the 0/1 polytopes Γ(A) and polytopal pseudo-complexes.

Polytopes are kept as vertex sets.  Geometric statements are checked on a
finite rational grid: every convex combination of the vertices whose weights
share a denominator ``d <= denominator``.  Membership of such a point in
another polytope is decided exactly (Carathéodory: try affinely independent
vertex subsets, solve with Fractions, accept non-negative solutions).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Mapping

from .catalog import name_set
from .complexes import FacePoset, decomposition_complex, is_graded
from .decomp import DecompositionSet
from .errors import PreconditionError
from .poset import Poset

DEFAULT_DENOMINATOR = 4


@dataclass(frozen=True)
class Realization:
    poset: Poset = field(repr=False)
    ambient_size: int
    phi: Mapping

    def vector(self, x: str) -> tuple:
        s = self.phi[x]
        return tuple(1 if i in s else 0 for i in range(1, self.ambient_size + 1))

    def to_dict(self) -> dict:
        return {"n": self.ambient_size,
                "phi": {x: sorted(self.phi[x]) for x in self.poset.elements}}

    def __eq__(self, other):
        if not isinstance(other, Realization):
            return NotImplemented
        return (self.poset == other.poset and self.ambient_size == other.ambient_size
                and dict(self.phi) == dict(other.phi))

    def __hash__(self):
        return hash((self.poset, self.ambient_size))


def canonical_min_realization(P: Poset) -> Realization:
    """``phi(x) = {i : x_i <= x}`` with elements numbered in list order from 1."""
    phi = {x: frozenset(i + 1 for i, xi in enumerate(P.elements) if P.leq(xi, x)) for x in P.elements}
    return Realization(P, len(P), phi)


def identity_realization(P: Poset, n: int | None = None) -> Realization:
    """Read element ids as subsets (``∅``, ``12``, ``1,10``)."""
    phi = {x: name_set(x) for x in P.elements}
    if n is None:
        n = max((max(s) for s in phi.values() if s), default=0)
    return Realization(P, n, phi)


def realization_from_dict(P: Poset, data: Mapping) -> Realization:
    try:
        n = int(data["n"])
        phi = {x: frozenset(int(i) for i in data["phi"][x]) for x in P.elements}
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"bad realization document: {exc}") from None
    return Realization(P, n, phi)


def verify_realization(P: Poset, G: DecompositionSet, phi: Realization):
    """``(ok, witness)``; the witness is the offending pair of triples or element pair."""
    if not G.normalized:
        raise PreconditionError("decomposition set must be symmetric and downward closed")
    f = phi.phi
    els = P.elements
    for i, a in enumerate(els):
        if any(k < 1 or k > phi.ambient_size for k in f[a]):
            return False, (a,)
        for b in els[i + 1:]:
            if f[a] == f[b]:
                return False, (a, b)
    for a in els:
        for b in els:
            if P.leq(a, b) != (f[a] <= f[b]):
                return False, (a, b)
    for d in G.proper_members:
        zc = d.complement
        if f[d.x] != f[d.z] & f[zc] or f[d.y] != f[d.z] | f[zc]:
            return False, (d.triple, (d.x, zc, d.y))
    return True, None


# ---------------------------------------------------------------------------
# exact convex geometry


def _invert(M: list):
    """Inverse of a square Fraction matrix, or None if singular."""
    n = len(M)
    rows = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return None
        rows[c], rows[piv] = rows[piv], rows[c]
        pv = rows[c][c]
        rows[c] = [v / pv for v in rows[c]]
        for i in range(n):
            if i != c and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return [row[n:] for row in rows]


def _row_basis(vectors: list) -> tuple:
    """Indices of a maximal independent subset of ``vectors`` and the pivot coordinates."""
    basis, pivots, reduced = [], [], []
    for idx, v in enumerate(vectors):
        w = [Fraction(x) for x in v]
        for (pc, r) in zip(pivots, reduced):
            if w[pc] != 0:
                f = w[pc] / r[pc]
                w = [a - f * b for a, b in zip(w, r)]
        pc = next((i for i, x in enumerate(w) if x != 0), None)
        if pc is not None:
            basis.append(idx)
            pivots.append(pc)
            reduced.append(w)
    return basis, pivots


class HullOracle:
    """Exact membership in the convex hull of finitely many integer points.

    Points are mapped to affine coordinates of the hull's affine span; a point
    of the span lies in the hull iff it lies in one of the simplices spanned by
    affinely independent vertex subsets (Carathéodory).  Simplex inverses are
    computed once and reused for every query.
    """

    def __init__(self, vertices: Iterable):
        self.vertices = [tuple(int(x) for x in v) for v in vertices]
        if not self.vertices:
            raise PreconditionError("empty vertex set")
        V = self.vertices
        self.vset = set(V)
        n = len(V[0])
        self.lo = [min(v[i] for v in V) for i in range(n)]
        self.hi = [max(v[i] for v in V) for i in range(n)]
        self.base = V[0]
        diffs = [[a - b for a, b in zip(v, self.base)] for v in V]
        basis, _ = _row_basis(diffs)
        self.dirs = [diffs[i] for i in basis]
        self.rank = len(basis)
        cols, _ = _row_basis([list(col) for col in zip(*self.dirs)]) if self.dirs else ([], [])
        self.coords = cols
        sub = [[d[c] for c in cols] for d in self.dirs]
        self.chart_inv = _invert(sub) if self.dirs else []
        self._simplices = None

    def chart(self, point):
        """Affine coordinates of ``point`` in the span, or None if it lies outside the span."""
        delta = [Fraction(a) - b for a, b in zip(point, self.base)]
        r = self.rank
        rhs = [delta[c] for c in self.coords]
        coef = [sum(rhs[i] * self.chart_inv[i][j] for i in range(r)) for j in range(r)]
        for k in range(len(delta)):
            if sum(coef[j] * self.dirs[j][k] for j in range(r)) != delta[k]:
                return None
        return coef

    def simplices(self) -> list:
        if self._simplices is None:
            charts = [self.chart(v) for v in self.vertices]
            out = []
            for subset in itertools.combinations(range(len(charts)), self.rank + 1):
                M = [[charts[i][row] for i in subset] for row in range(self.rank)] + [[1] * len(subset)]
                inv = _invert(M)
                if inv is not None:
                    out.append(inv)
            self._simplices = out
        return self._simplices

    def __contains__(self, point) -> bool:
        point = tuple(Fraction(x) for x in point)
        if any(x < lo or x > hi for x, lo, hi in zip(point, self.lo, self.hi)):
            return False
        if point in self.vset:
            return True
        if self.rank == 0:
            return False
        c = self.chart(point)
        if c is None:
            return False
        vec = c + [Fraction(1)]
        for inv in self.simplices():
            if all(sum(a * b for a, b in zip(row, vec)) >= 0 for row in inv):
                return True
        return False


def affine_rank(vertices: list) -> int:
    if not vertices:
        return -1
    base = vertices[0]
    return len(_row_basis([[a - b for a, b in zip(v, base)] for v in vertices])[0])


def in_hull(point, vertices: list) -> bool:
    """Exact test ``point ∈ conv(vertices)``."""
    if not vertices:
        return False
    return point in HullOracle(vertices)


def grid_points(vertices: list, denominator: int = DEFAULT_DENOMINATOR) -> list:
    """Distinct convex combinations with weights ``k_i / d`` for ``d = 1..denominator``."""
    out = set()
    m = len(vertices)
    if not m:
        return []
    dim = len(vertices[0])
    for d in range(1, denominator + 1):
        for combo in itertools.combinations_with_replacement(range(m), d):
            counts = [0] * m
            for c in combo:
                counts[c] += 1
            pt = tuple(Fraction(sum(counts[j] * vertices[j][i] for j in range(m)), d) for i in range(dim))
            out.add(pt)
    return sorted(out)


@dataclass(frozen=True)
class ZeroOnePolytope:
    vertices: tuple
    label: tuple

    @cached_property
    def _oracle(self) -> HullOracle:
        return HullOracle(self.vertices)

    def contains(self, point) -> bool:
        return point in self._oracle

    def dimension(self) -> int:
        return self._oracle.rank

    def grid(self, denominator: int = DEFAULT_DENOMINATOR) -> list:
        return grid_points(list(self.vertices), denominator)


def gamma(phi: Realization, A: Iterable[str]) -> ZeroOnePolytope:
    P = phi.poset
    label = P.sort(set(A))
    for a in label:
        if a not in P:
            raise PreconditionError(f"element {a!r} not in poset")
    verts = tuple(phi.vector(a) for a in label)
    return ZeroOnePolytope(verts, label)


# ---------------------------------------------------------------------------
# pseudo-complexes


@dataclass
class PseudoComplex:
    realization: Realization
    face_poset: FacePoset
    cells: list

    def labels(self) -> list:
        return [frozenset(c.label) for c in self.cells]

    def cells_by_dimension(self) -> dict:
        out: dict = {}
        for c in self.cells:
            out.setdefault(c.dimension(), []).append(c)
        return out

    def maximal_cells(self) -> list:
        labels = self.labels()
        return [c for c, a in zip(self.cells, labels) if not any(a < b for b in labels)]


def realize_complex(P: Poset, G: DecompositionSet, phi: Realization, fp: FacePoset | None = None) -> PseudoComplex:
    ok, bad = verify_realization(P, G, phi)
    if not ok:
        raise PreconditionError(f"not a valid realization, failing at {bad}")
    fp = fp or decomposition_complex(P, G)
    cells = [gamma(phi, f.members) for f in fp.faces]
    pc = PseudoComplex(phi, fp, cells)
    if not check_pseudo_complex(pc, denominator=0):
        raise PreconditionError("realized cells violate the pseudo-complex axioms")
    return pc


def union_decomposition_check(phi: Realization, x: str, z: str, z_comp: str, y: str,
                              denominator: int = DEFAULT_DENOMINATOR) -> bool:
    """Γ({x, z, z', y}) equals Γ({x, z, y}) ∪ Γ({x, z', y}) on the grid."""
    left = gamma(phi, {x, z, z_comp, y})
    r1 = gamma(phi, {x, z, y})
    r2 = gamma(phi, {x, z_comp, y})
    for p in left.grid(denominator):
        if not (r1.contains(p) or r2.contains(p)):
            return False
    for p in r1.grid(denominator) + r2.grid(denominator):
        if not left.contains(p):
            return False
    return True


def chain_cone_cover_check(phi: Realization, A: Iterable[str], denominator: int = DEFAULT_DENOMINATOR) -> bool:
    """Γ(A) equals the union of Γ(C) over maximal chains C of A, on the grid."""
    from .complexes import maximal_chains_of

    A = frozenset(A)
    whole = gamma(phi, A)
    pieces = [gamma(phi, c) for c in maximal_chains_of(phi.poset, A)]
    for p in whole.grid(denominator):
        if not any(c.contains(p) for c in pieces):
            return False
    for c in pieces:
        for p in c.grid(denominator):
            if not whole.contains(p):
                return False
    return True


def is_subdivision(fine: PseudoComplex, coarse: PseudoComplex, denominator: int = DEFAULT_DENOMINATOR) -> bool:
    if fine.realization != coarse.realization:
        raise PreconditionError("complexes use different realizations")
    fl = fine.labels()
    cl = coarse.labels()
    for a in cl:
        inside = [b for b in fl if b <= a]
        if frozenset().union(*inside) != a:
            return False
    for b in fl:
        if not any(b <= a for a in cl):
            return False
    if denominator:
        for a, cell in zip(cl, coarse.cells):
            inside = [c for b, c in zip(fl, fine.cells) if b <= a]
            inside = [c for c in inside if not any(set(c.label) < set(o.label) for o in inside)]
            for p in cell.grid(denominator):
                if not any(c.contains(p) for c in inside):
                    return False
    return True


def is_polytopal_complex(pc: PseudoComplex) -> bool:
    """Every non-empty pairwise intersection of cells is itself a cell."""
    labels = pc.labels()
    known = set(labels)
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            c = a & b
            if c and c not in known:
                return False
    return True


def check_pseudo_complex(pc: PseudoComplex, denominator: int = 2) -> bool:
    """Pseudo-complex axioms for the realized cells.

    Combinatorial part: labels are distinct, every face of the complex lying
    in a cell is a cell, vertices are distinct.  With ``denominator > 0``,
    grid points of Γ(A) that lie in Γ(B) must lie in Γ(F) for some cell
    ``F ⊆ A ∩ B``.
    """
    labels = pc.labels()
    if len(set(labels)) != len(labels):
        return False
    for c in pc.cells:
        if len(set(c.vertices)) != len(c.vertices):
            return False
    known = set(labels)
    fp_sets = pc.face_poset.member_sets()
    for a in labels:
        for f in fp_sets:
            if f <= a and f not in known:
                return False
    if not denominator:
        return True
    by_label = dict(zip(labels, pc.cells))
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            inter = a & b
            if inter == a or inter == b:
                continue
            inside = [f for f in labels if f <= inter]
            inside = [f for f in inside if not any(f < g for g in inside)]
            ca, cb = by_label[a], by_label[b]
            for p in ca.grid(denominator):
                if cb.contains(p) and not any(by_label[f].contains(p) for f in inside):
                    return False
    return True


def realizability_probe(P: Poset, G: DecompositionSet, fp: FacePoset | None = None) -> str:
    """``NOT_REALIZABLE`` when the complex is not graded, otherwise ``UNKNOWN``."""
    fp = fp or decomposition_complex(P, G)
    return "UNKNOWN" if is_graded(fp) else "NOT_REALIZABLE"


# ---------------------------------------------------------------------------
# export


def _vertex_table(pc: PseudoComplex):
    phi = pc.realization
    ids = {}
    verts = []
    for x in phi.poset.elements:
        v = phi.vector(x)
        if v not in ids:
            ids[v] = len(verts)
            verts.append(v)
    return verts, ids


def export_json(pc: PseudoComplex) -> dict:
    verts, ids = _vertex_table(pc)
    return {
        "n": pc.realization.ambient_size,
        "vertices": [list(v) for v in verts],
        "cells": [{"face": list(c.label), "vertex_ids": [ids[v] for v in c.vertices]} for c in pc.cells],
    }


def _cyclic_order(vertices: list) -> list:
    """Vertices of a planar convex polygon in boundary order (float angles, export only)."""
    n = len(vertices)
    c = [sum(v[i] for v in vertices) / n for i in range(len(vertices[0]))]
    base = [vertices[0][i] - c[i] for i in range(len(c))]
    other = None
    for v in vertices[1:]:
        w = [v[i] - c[i] for i in range(len(c))]
        dot = sum(a * b for a, b in zip(w, base))
        nb = sum(a * a for a in base)
        perp = [w[i] - dot / nb * base[i] for i in range(len(c))]
        if sum(a * a for a in perp) > 1e-12:
            other = perp
            break
    if other is None:
        return list(range(n))

    def angle(k):
        w = [vertices[k][i] - c[i] for i in range(len(c))]
        return math.atan2(sum(a * b for a, b in zip(w, other)), sum(a * b for a, b in zip(w, base)))

    return sorted(range(n), key=angle)


def export_off(pc: PseudoComplex) -> str:
    """OFF text: 2-cells as polygons, 3-cells listed in trailing comments with their labels."""
    verts, ids = _vertex_table(pc)
    n = pc.realization.ambient_size
    polys = []
    solids = []
    for c in pc.cells:
        dim = c.dimension()
        if dim == 2:
            order = _cyclic_order(list(c.vertices))
            polys.append(([ids[c.vertices[k]] for k in order], c.label))
        elif dim == 3:
            solids.append(([ids[v] for v in c.vertices], c.label))
    lines = ["OFF" if n == 3 else "nOFF"]
    if n != 3:
        lines.append(str(n))
    lines.append(f"{len(verts)} {len(polys)} 0")
    lines += [" ".join(map(str, v)) for v in verts]
    lines += [f"{len(ix)} " + " ".join(map(str, ix)) for ix, _ in polys]
    for k, (_, label) in enumerate(polys):
        lines.append(f"# face {k}: {' '.join(label)}")
    for ix, label in solids:
        lines.append(f"# cell3 {' '.join(map(str, ix))} : {' '.join(label)}")
    return "\n".join(lines) + "\n"
