"""Finite posets: construction, intervals, chains, products and isomorphism search.

Elements are string identifiers.  Internally the order is kept as one
bitmask per element (bit ``j`` of ``_up[i]`` is set iff ``elements[i] <=
elements[j]``), which keeps the exhaustive small-``n`` scans cheap.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, PreconditionError

log = logging.getLogger(__name__)

PAIR_SEP = "×"
DEFAULT_CHAIN_CAP = 10**6

Chain = tuple  # tuple of element ids, ascending in the ambient order


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """Immutable finite poset.

    ``relations`` may be any strict order pairs ``(a, b)`` meaning ``a < b``;
    the stored ``covers`` are the transitive reduction.
    """

    __slots__ = ("elements", "index", "_up", "_down", "_covers", "_hash")

    def __init__(self, elements: Iterable[str], relations: Iterable[Sequence[str]] = ()):
        elements = tuple(elements)
        index: dict[str, int] = {}
        for i, e in enumerate(elements):
            if not isinstance(e, str):
                raise ParseError(f"element identifiers must be strings, got {e!r}")
            if e in index:
                raise ParseError(f"duplicate element identifier {e!r}")
            index[e] = i
        n = len(elements)
        succ = [0] * n
        for pair in relations:
            if len(pair) != 2:
                raise ParseError(f"relation must be a pair, got {pair!r}")
            a, b = pair
            if a not in index or b not in index:
                missing = a if a not in index else b
                raise ParseError(f"relation {pair!r} references unknown element {missing!r}")
            if a == b:
                raise ParseError(f"cycle detected: {a} < {a}")
            succ[index[a]] |= 1 << index[b]
        order = _topological_order(elements, succ)
        up = [0] * n
        for i in reversed(order):
            m = 1 << i
            for j in _bits(succ[i]):
                m |= up[j]
            up[i] = m
        self._init(elements, index, up)

    def _init(self, elements, index, up):
        n = len(elements)
        down = [0] * n
        for i in range(n):
            for j in _bits(up[i]):
                down[j] |= 1 << i
        self.elements = elements
        self.index = index
        self._up = tuple(up)
        self._down = tuple(down)
        self._covers = None
        self._hash = None

    @classmethod
    def _from_masks(cls, elements, up):
        """Build from reflexive up-set masks (trusted input)."""
        obj = cls.__new__(cls)
        elements = tuple(elements)
        obj._init(elements, {e: i for i, e in enumerate(elements)}, list(up))
        return obj

    # -- basic protocol -------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, e):
        return e in self.index

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self._up == other._up

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.elements, self._up))
        return self._hash

    def __repr__(self):
        return f"Poset({list(self.elements)!r}, covers={list(self.covers)!r})"

    # -- order queries ----------------------------------------------------

    def leq(self, a: str, b: str) -> bool:
        return bool(self._up[self.index[a]] >> self.index[b] & 1)

    def lt(self, a: str, b: str) -> bool:
        return a != b and self.leq(a, b)

    def comparable(self, a: str, b: str) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def up_mask(self, a: str) -> int:
        return self._up[self.index[a]]

    def down_mask(self, a: str) -> int:
        return self._down[self.index[a]]

    def from_mask(self, mask: int) -> tuple:
        els = self.elements
        return tuple(els[i] for i in _bits(mask))

    def mask(self, subset: Iterable[str]) -> int:
        m = 0
        for e in subset:
            m |= 1 << self.index[e]
        return m

    def up_set(self, a: str) -> frozenset:
        return frozenset(self.from_mask(self.up_mask(a)))

    def down_set(self, a: str) -> frozenset:
        return frozenset(self.from_mask(self.down_mask(a)))

    def sort(self, subset: Iterable[str]) -> tuple:
        """Elements of ``subset`` in element-list order."""
        idx = self.index
        return tuple(sorted(subset, key=idx.__getitem__))

    def sort_chain(self, chain: Iterable[str]) -> tuple:
        """A chain sorted ascending in the order."""
        return tuple(sorted(chain, key=lambda e: bin(self.down_mask(e)).count("1")))

    @property
    def covers(self) -> tuple:
        if self._covers is None:
            out = []
            for i in range(len(self.elements)):
                strict = self._up[i] & ~(1 << i)
                above = 0
                for j in _bits(strict):
                    above |= self._up[j] & ~(1 << j)
                for j in _bits(strict & ~above):
                    out.append((self.elements[i], self.elements[j]))
            self._covers = tuple(out)
        return self._covers

    def upper_covers(self, a: str) -> tuple:
        i = self.index[a]
        strict = self._up[i] & ~(1 << i)
        above = 0
        for j in _bits(strict):
            above |= self._up[j] & ~(1 << j)
        return self.from_mask(strict & ~above)

    def lower_covers(self, a: str) -> tuple:
        i = self.index[a]
        strict = self._down[i] & ~(1 << i)
        below = 0
        for j in _bits(strict):
            below |= self._down[j] & ~(1 << j)
        return self.from_mask(strict & ~below)

    def leq_pairs(self) -> list:
        """All comparable pairs ``(a, b)`` with ``a <= b``, reflexive ones included."""
        return [(a, b) for a in self.elements for b in self.from_mask(self.up_mask(a))]

    def strict_pairs(self) -> list:
        return [(a, b) for a, b in self.leq_pairs() if a != b]

    def minimal_elements(self) -> tuple:
        return tuple(e for i, e in enumerate(self.elements) if self._down[i] == 1 << i)

    def maximal_elements(self) -> tuple:
        return tuple(e for i, e in enumerate(self.elements) if self._up[i] == 1 << i)

    def bottom(self):
        mins = self.minimal_elements()
        if len(mins) == 1 and self._up[self.index[mins[0]]] == (1 << len(self)) - 1:
            return mins[0]
        return None

    def top(self):
        maxs = self.maximal_elements()
        if len(maxs) == 1 and self._down[self.index[maxs[0]]] == (1 << len(self)) - 1:
            return maxs[0]
        return None

    def is_chain(self, subset: Iterable[str]) -> bool:
        s = list(subset)
        return all(self.comparable(a, b) for i, a in enumerate(s) for b in s[i + 1:])

    def is_antichain(self) -> bool:
        return not self.covers

    def height_of(self, a: str) -> int:
        """Length of the longest chain ending at ``a``."""
        return _heights(self)[self.index[a]]

    # -- derived posets -----------------------------------------------------

    def subposet(self, members: Iterable[str]) -> "Poset":
        """Induced subposet, elements kept in the parent's order."""
        keep = sorted({self.index[e] for e in members})
        pos = {old: new for new, old in enumerate(keep)}
        up = []
        for old in keep:
            m = 0
            for j in _bits(self._up[old]):
                if j in pos:
                    m |= 1 << pos[j]
            up.append(m)
        return Poset._from_masks([self.elements[i] for i in keep], up)

    def relabel(self, mapping: Mapping[str, str]) -> "Poset":
        new = [mapping[e] for e in self.elements]
        if len(set(new)) != len(new):
            raise PreconditionError("relabelling is not injective")
        return Poset._from_masks(new, self._up)

    def to_dict(self) -> dict:
        return {"elements": list(self.elements), "relations": [list(c) for c in self.covers]}


def _topological_order(elements, succ):
    n = len(elements)
    color = [0] * n
    order: list[int] = []
    parent = [-1] * n
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, iter(list(_bits(succ[root]))))]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                order.append(node)
                stack.pop()
            elif color[nxt] == 0:
                color[nxt] = 1
                parent[nxt] = node
                stack.append((nxt, iter(list(_bits(succ[nxt])))))
            elif color[nxt] == 1:
                cycle = [nxt]
                cur = node
                while cur != nxt:
                    cycle.append(cur)
                    cur = parent[cur]
                cycle.append(nxt)
                names = " < ".join(elements[i] for i in reversed(cycle))
                raise ParseError(f"cycle detected: {names}")
    order.reverse()
    return order


def _heights(P: Poset) -> list:
    n = len(P)
    h = [-1] * n

    def rec(i):
        if h[i] < 0:
            below = P._down[i] & ~(1 << i)
            h[i] = 1 + max((rec(j) for j in _bits(below)), default=-1)
        return h[i]

    for i in range(n):
        rec(i)
    return h


def _depths(P: Poset) -> list:
    n = len(P)
    d = [-1] * n

    def rec(i):
        if d[i] < 0:
            above = P._up[i] & ~(1 << i)
            d[i] = 1 + max((rec(j) for j in _bits(above)), default=-1)
        return d[i]

    for i in range(n):
        rec(i)
    return d


# ---------------------------------------------------------------------------
# parsing


def parse_poset(description) -> Poset:
    """Build a poset from ``{"elements": [...], "relations": [[a, b], ...]}``.

    A JSON string is accepted as well.  Identifiers must not contain the
    product separator.
    """
    if isinstance(description, (str, bytes)):
        import json

        try:
            description = json.loads(description)
        except ValueError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(description, Mapping) or "elements" not in description:
        raise ParseError("poset description needs an 'elements' list")
    elements = description["elements"]
    if not isinstance(elements, list):
        raise ParseError("'elements' must be a list")
    for e in elements:
        if isinstance(e, str) and PAIR_SEP in e:
            raise ParseError(f"identifier {e!r} contains the reserved separator {PAIR_SEP!r}")
    relations = description.get("relations", [])
    if not isinstance(relations, list):
        raise ParseError("'relations' must be a list of pairs")
    return Poset(elements, [tuple(r) for r in relations])


# ---------------------------------------------------------------------------
# intervals, products, duals


@dataclass(frozen=True)
class Interval:
    parent: Poset
    bottom: str
    top: str
    members: Poset


def interval(P: Poset, x: str, y: str) -> Interval:
    if x not in P or y not in P:
        raise PreconditionError(f"{x!r} or {y!r} not in poset")
    if not P.leq(x, y):
        raise PreconditionError(f"interval [{x}, {y}] is empty: {x} is not <= {y}")
    mask = P.up_mask(x) & P.down_mask(y)
    return Interval(P, x, y, P.subposet(P.from_mask(mask)))


def interval_mask(P: Poset, x: str, y: str) -> int:
    return P.up_mask(x) & P.down_mask(y)


def _wrap(name: str) -> str:
    return f"({name})" if PAIR_SEP in name else name


def pair_name(a: str, b: str) -> str:
    return f"{_wrap(a)}{PAIR_SEP}{_wrap(b)}"


def product(P1: Poset, P2: Poset) -> Poset:
    """Cartesian product with the componentwise order."""
    n2 = len(P2)
    names = [pair_name(a, b) for a in P1.elements for b in P2.elements]
    up = []
    for i in range(len(P1)):
        for j in range(n2):
            m = 0
            for k in _bits(P1._up[i]):
                m |= P2._up[j] << (k * n2)
            up.append(m)
    if len(set(names)) != len(names):
        raise PreconditionError("product element names collide")
    return Poset._from_masks(names, up)


def pairing(P1: Poset, P2: Poset) -> dict:
    """Product element id -> (left id, right id)."""
    return {pair_name(a, b): (a, b) for a in P1.elements for b in P2.elements}


def coproduct_name(side: int, a: str) -> str:
    return f"{side}:{a}"


def coproduct(P1: Poset, P2: Poset) -> Poset:
    """Disjoint union; ids are prefixed with ``1:`` or ``2:``."""
    names = [coproduct_name(1, a) for a in P1.elements] + [coproduct_name(2, b) for b in P2.elements]
    shift = len(P1)
    up = list(P1._up) + [m << shift for m in P2._up]
    return Poset._from_masks(names, up)


def dual(P: Poset) -> Poset:
    return Poset._from_masks(P.elements, P._down)


# ---------------------------------------------------------------------------
# chains


def enumerate_chains(P: Poset, maximal_only: bool = False, cap: int = DEFAULT_CHAIN_CAP) -> list:
    """Non-empty chains (or maximal chains) in lexicographic index order.

    Logs a warning once the count passes ``cap``; enumeration continues.
    """
    out = []
    els = P.elements
    n = len(P)
    warned = False
    if maximal_only:
        cover_up = [P.mask(P.upper_covers(e)) for e in els]
        stack = [(i,) for i in reversed(range(n)) if P._down[i] == 1 << i]
        while stack:
            ch = stack.pop()
            ups = cover_up[ch[-1]]
            if not ups:
                out.append(tuple(els[i] for i in ch))
                if not warned and len(out) > cap:
                    log.warning("chain count exceeded cap %d", cap)
                    warned = True
                continue
            for j in reversed(list(_bits(ups))):
                stack.append(ch + (j,))
        return out
    strict_up = [P._up[i] & ~(1 << i) for i in range(n)]
    stack = [(i,) for i in reversed(range(n))]
    while stack:
        ch = stack.pop()
        out.append(tuple(els[i] for i in ch))
        if not warned and len(out) > cap:
            log.warning("chain count exceeded cap %d", cap)
            warned = True
        for j in reversed(list(_bits(strict_up[ch[-1]]))):
            stack.append(ch + (j,))
    return out


def count_chains(P: Poset) -> int:
    """Number of non-empty chains, by dynamic programming."""
    n = len(P)
    order = sorted(range(n), key=lambda i: -bin(P._down[i]).count("1"))
    ending = [0] * n
    for i in reversed(order):
        below = P._down[i] & ~(1 << i)
        ending[i] = 1 + sum(ending[j] for j in _bits(below))
    return sum(ending)


# ---------------------------------------------------------------------------
# lattice operations


def join(P: Poset, a: str, b: str):
    """Least upper bound of ``a`` and ``b`` or ``None``."""
    common = P.up_mask(a) & P.up_mask(b)
    for k in _bits(common):
        if P._up[k] & common == common:
            return P.elements[k]
    return None


def meet(P: Poset, a: str, b: str):
    common = P.down_mask(a) & P.down_mask(b)
    for k in _bits(common):
        if P._down[k] & common == common:
            return P.elements[k]
    return None


def join_all(P: Poset, elems: Iterable[str]):
    """Join of a finite set; the empty join is the bottom element (if any)."""
    common = (1 << len(P)) - 1
    for e in elems:
        common &= P.up_mask(e)
    for k in _bits(common):
        if P._up[k] & common == common:
            return P.elements[k]
    return None


def is_lattice(P: Poset) -> bool:
    if not len(P):
        return False
    els = P.elements
    for i, a in enumerate(els):
        for b in els[i + 1:]:
            if join(P, a, b) is None or meet(P, a, b) is None:
                return False
    return True


# ---------------------------------------------------------------------------
# isomorphism search


def signatures(P: Poset) -> list:
    """Per-element invariant: (#upper covers, #lower covers, height, depth, |up|, |down|)."""
    h = _heights(P)
    d = _depths(P)
    out = []
    for i, e in enumerate(P.elements):
        out.append((
            len(P.upper_covers(e)),
            len(P.lower_covers(e)),
            h[i],
            d[i],
            bin(P._up[i]).count("1"),
            bin(P._down[i]).count("1"),
        ))
    return out


def constrained_isomorphism(A: Poset, B: Poset, pins: Mapping[str, str] | None = None,
                            *, sig_a=None, sig_b=None):
    """An order isomorphism ``A -> B`` extending ``pins``, or ``None``.

    Backtracking over A's elements in list order (pinned ones first), trying
    B's elements in list order; candidates are pruned by signature and by
    consistency of both comparabilities with every earlier assignment.
    """
    n = len(A)
    if n != len(B):
        return None
    pins = dict(pins or {})
    sa = sig_a if sig_a is not None else signatures(A)
    sb = sig_b if sig_b is not None else signatures(B)
    if sorted(sa) != sorted(sb):
        return None
    ia, ib = A.index, B.index
    for a, b in pins.items():
        if a not in ia or b not in ib or sa[ia[a]] != sb[ib[b]]:
            return None
    if len(set(pins.values())) != len(pins):
        return None
    order = [ia[a] for a in pins] + [i for i in range(n) if A.elements[i] not in pins]
    forced = {ia[a]: ib[b] for a, b in pins.items()}
    by_sig: dict = {}
    for j in range(n):
        by_sig.setdefault(sb[j], []).append(j)
    Aup, Adown, Bup, Bdown = A._up, A._down, B._up, B._down
    assign = [-1] * n
    used = 0
    placed_mask_a = 0

    def consistent(i, j):
        # For every already placed a' (bits of placed_mask_a) compare relations.
        for k in _bits(placed_mask_a):
            jk = assign[k]
            if bool(Aup[i] >> k & 1) != bool(Bup[j] >> jk & 1):
                return False
            if bool(Adown[i] >> k & 1) != bool(Bdown[j] >> jk & 1):
                return False
        return True

    def rec(pos):
        nonlocal used, placed_mask_a
        if pos == n:
            return True
        i = order[pos]
        cands = [forced[i]] if i in forced else by_sig[sa[i]]
        for j in cands:
            if used >> j & 1:
                continue
            if not consistent(i, j):
                continue
            assign[i] = j
            used |= 1 << j
            placed_mask_a |= 1 << i
            if rec(pos + 1):
                return True
            assign[i] = -1
            used &= ~(1 << j)
            placed_mask_a &= ~(1 << i)
        return False

    if not rec(0):
        return None
    result = {A.elements[i]: B.elements[assign[i]] for i in range(n)}
    if not is_isomorphism(A, B, result):  # pragma: no cover - guarded by construction
        raise AssertionError("isomorphism search returned an invalid map")
    return result


def is_isomorphism(A: Poset, B: Poset, f: Mapping[str, str]) -> bool:
    if len(A) != len(B) or set(f) != set(A.elements) or set(f.values()) != set(B.elements):
        return False
    for a in A.elements:
        for a2 in A.elements:
            if A.leq(a, a2) != B.leq(f[a], f[a2]):
                return False
    return True


def isomorphic(A: Poset, B: Poset) -> bool:
    return constrained_isomorphism(A, B) is not None
