"""Finite 2-groups as dense Cayley tables, with the structure theory needed
for the exponent-4 classification: commutators, characteristic subgroups,
series, and isomorphism testing.

Elements are plain ints in ``range(order)``; index 0 is always the identity.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError, SizeLimitError, ValidationError
from .words import parse_word

MAX_ORDER = 4096
MAX_ISO_ORDER = 256
MAX_SUBGROUP_ORDER = 64
# full n^3 associativity check below this order, Light's test above it
_FULL_ASSOC_ORDER = 256


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


class Group:
    """A finite 2-group given by its multiplication table.

    ``table[a, b]`` is the index of ``a*b``.  The table is validated on
    construction (identity at 0, Latin square, associativity, 2-power
    order) and then frozen.  ``generators`` and ``gen_names`` are optional
    and only used to evaluate words such as ``"g^2h"``.
    """

    def __init__(
        self,
        table,
        label: str = "",
        *,
        generators: Sequence[int] | None = None,
        gen_names: Sequence[str] | None = None,
        validate: bool = True,
    ):
        table = np.array(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise ValidationError(f"table must be a non-empty square array, got shape {table.shape}")
        n = table.shape[0]
        if n > MAX_ORDER:
            raise SizeLimitError(f"order {n} exceeds the cap of {MAX_ORDER}")
        self.order = n
        self.label = label
        self.table = table
        self.generators = tuple(int(g) for g in generators) if generators is not None else None
        self.gen_names = tuple(gen_names) if gen_names is not None else None
        if validate:
            self._validate()
        table.setflags(write=False)
        self.inverse = np.argmin(table, axis=1)  # position of the identity in each row
        self.inverse.setflags(write=False)
        self._cache: dict = {}

    def _validate(self):
        t, n = self.table, self.order
        if t.min() < 0 or t.max() >= n:
            raise ValidationError("table entries must lie in [0, order)")
        idx = np.arange(n)
        if not (np.array_equal(t[0], idx) and np.array_equal(t[:, 0], idx)):
            raise ValidationError("index 0 must be a two-sided identity")
        bad_rows = np.flatnonzero((np.sort(t, axis=1) != idx).any(axis=1))
        if len(bad_rows):
            raise ValidationError(f"row {bad_rows[0]} is not a permutation")
        bad_cols = np.flatnonzero((np.sort(t, axis=0) != idx[:, None]).any(axis=0))
        if len(bad_cols):
            raise ValidationError(f"column {bad_cols[0]} is not a permutation")
        if n <= _FULL_ASSOC_ORDER:
            middles = range(n)
        else:
            middles = _generating_set(t)
        for b in middles:
            # (a*b)*c versus a*(b*c) for all a, c
            lhs = t[t[:, b], :]
            rhs = t[:, t[b, :]]
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                a, c = (int(v) for v in bad[0])
                raise ValidationError(f"associativity fails for ({a}, {b}, {c})")
        if not _is_power_of_two(n):
            raise DomainError(f"order {n} is not a power of 2")

    def __repr__(self):
        return f"Group({self.label or '?'}, order={self.order})"

    def __len__(self):
        return self.order

    @property
    def identity(self) -> int:
        return 0

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        r = 0
        for _ in range(k):
            r = int(self.table[r, a])
        return r

    def commutator(self, a: int, b: int) -> int:
        """``(a, b) = a^-1 b^-1 a b``."""
        t, inv = self.table, self.inverse
        return int(t[t[inv[a], inv[b]], t[a, b]])

    def conjugate(self, a: int, b: int) -> int:
        """``a^b = b^-1 a b``."""
        t = self.table
        return int(t[t[self.inverse[b], a], b])

    @property
    def element_orders(self) -> np.ndarray:
        if "orders" not in self._cache:
            n = self.order
            idx = np.arange(n)
            orders = np.zeros(n, dtype=np.int64)
            cur = idx.copy()
            k = 1
            while (orders == 0).any():
                orders[(cur == 0) & (orders == 0)] = k
                cur = self.table[cur, idx]
                k += 1
            orders.setflags(write=False)
            self._cache["orders"] = orders
        return self._cache["orders"]

    def element_order(self, a: int) -> int:
        return int(self.element_orders[a])

    @property
    def rows(self) -> list[list[int]]:
        if "rows" not in self._cache:
            self._cache["rows"] = self.table.tolist()
        return self._cache["rows"]

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def element(self, expr: str) -> int:
        """Evaluate a word in the named generators, e.g. ``G.element("gh^3")``."""
        if self.generators is None or self.gen_names is None:
            raise DomainError(f"{self.label} has no named generators")
        r = 0
        for x in parse_word(expr, self.gen_names):
            g = self.generators[abs(x) - 1]
            r = int(self.table[r, g if x > 0 else self.inverse[g]])
        return r


@dataclass(frozen=True)
class Subgroup:
    """A subgroup stored as its sorted member tuple; equality is by members."""

    parent: Group = field(compare=False, repr=False)
    members: tuple[int, ...]

    def __len__(self):
        return len(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, a):
        return a in self._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_memberset")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_memberset", s)
        return s

    def issubset(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def is_abelian(self) -> bool:
        m = np.array(self.members)
        sub = self.parent.table[np.ix_(m, m)]
        return bool(np.array_equal(sub, sub.T))

    def is_central(self) -> bool:
        return self.issubset(center(self.parent))

    def as_group(self, label: str = "") -> Group:
        """The subgroup as a standalone Group, renumbered in member order."""
        m = np.array(self.members)
        pos = np.full(self.parent.order, -1)
        pos[m] = np.arange(len(m))
        return Group(pos[self.parent.table[np.ix_(m, m)]], label, validate=False)


def _closure(rows: list[list[int]], gens: Iterable[int]) -> list[int]:
    gens = [int(g) for g in gens if g != 0]
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        row = rows[x]
        for g in gens:
            y = row[g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def _generating_set(table: np.ndarray) -> list[int]:
    rows = table.tolist()
    gens: list[int] = []
    span = {0}
    for a in range(table.shape[0]):
        if a not in span:
            gens.append(a)
            span = set(_closure(rows, gens))
    return gens


def subgroup_generated(G: Group, elements: Iterable[int]) -> Subgroup:
    return Subgroup(G, tuple(_closure(G.rows, elements)))


def whole(G: Group) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def trivial(G: Group) -> Subgroup:
    return Subgroup(G, (0,))


def _cached(G: Group, key, compute):
    if key not in G._cache:
        G._cache[key] = compute()
    return G._cache[key]


def commutator_subgroup(G: Group, A: Subgroup, B: Subgroup) -> Subgroup:
    a = np.array(A.members)
    b = np.array(B.members)
    t, inv = G.table, G.inverse
    comms = t[t[inv[a][:, None], inv[b][None, :]], t[a[:, None], b[None, :]]]
    return subgroup_generated(G, np.unique(comms))


def derived_subgroup(G: Group) -> Subgroup:
    return _cached(G, "derived", lambda: commutator_subgroup(G, whole(G), whole(G)))


def center(G: Group) -> Subgroup:
    def compute():
        t = G.table
        members = [a for a in range(G.order) if np.array_equal(t[a], t[:, a])]
        return Subgroup(G, tuple(members))

    return _cached(G, "center", compute)


def centralizer_sizes(G: Group) -> np.ndarray:
    return _cached(G, "centralizer_sizes", lambda: (G.table == G.table.T).sum(axis=1))


def agemo(G: Group, k: int) -> Subgroup:
    """Subgroup generated by all k-th powers."""
    if not _is_power_of_two(k):
        raise DomainError(f"k={k} must be a power of 2")
    idx = np.arange(G.order)
    cur = np.zeros(G.order, dtype=np.int64)
    for _ in range(k):
        cur = G.table[cur, idx]
    return subgroup_generated(G, np.unique(cur))


def frattini(G: Group) -> Subgroup:
    """Frattini subgroup of a 2-group: generated by G' and all squares."""

    def compute():
        squares = G.table[np.arange(G.order), np.arange(G.order)]
        return subgroup_generated(G, set(derived_subgroup(G).members) | set(squares.tolist()))

    return _cached(G, "frattini", compute)


def maximal_subgroups(G: Group) -> list[Subgroup]:
    """Index-2 subgroups, found as kernels of homomorphisms onto C2.

    Independent of the Frattini formula above: every assignment of signs
    to a generating set is tested for compatibility with the table.
    """
    if G.order > MAX_SUBGROUP_ORDER:
        raise SizeLimitError(f"maximal subgroup enumeration is capped at order {MAX_SUBGROUP_ORDER}")
    if G.order == 1:
        return []
    gens = _generating_set(G.table)
    parent, via, order = _schreier_tree(G.table, gens)
    out = []
    for bits in range(1, 1 << len(gens)):
        f = np.zeros(G.order, dtype=np.int64)
        for e in order[1:]:
            f[e] = f[parent[e]] ^ ((bits >> via[e]) & 1)
        if np.array_equal(f[G.table], f[:, None] ^ f[None, :]):
            out.append(Subgroup(G, tuple(np.flatnonzero(f == 0).tolist())))
    return sorted(set(out), key=lambda s: s.members)


def _schreier_tree(table, gens):
    """BFS tree of <gens> under right multiplication; returns (parent, via, order)."""
    n = table.shape[0]
    parent = np.full(n, -1)
    via = np.full(n, -1)
    parent[0] = 0
    order = [0]
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for i, g in enumerate(gens):
            y = int(table[x, g])
            if parent[y] < 0:
                parent[y] = x
                via[y] = i
                order.append(y)
                queue.append(y)
    return parent, via, order


def lower_central_series(G: Group) -> list[Subgroup]:
    """gamma_1 = G, gamma_{i+1} = [gamma_i, G], ending at the trivial subgroup."""
    series = [whole(G)]
    while len(series[-1]) > 1:
        nxt = commutator_subgroup(G, series[-1], series[0])
        if nxt == series[-1]:
            raise DomainError(f"{G.label} is not nilpotent")
        series.append(nxt)
    return series


def nilpotency_class(G: Group) -> int:
    """0 for the trivial group, 1 for nontrivial abelian groups."""
    return _cached(G, "class", lambda: len(lower_central_series(G)) - 1)


def exponent(G: Group) -> int:
    return int(G.element_orders.max())


def is_elementary_abelian(H: Subgroup) -> bool:
    orders = H.parent.element_orders[list(H.members)]
    return bool((orders <= 2).all()) and H.is_abelian()


def direct_product(A: Group, B: Group, label: str | None = None) -> Group:
    """Pairs (a, b) are numbered ``a * |B| + b``."""
    n, m = A.order, B.order
    if n * m > MAX_ORDER:
        raise SizeLimitError(f"product order {n * m} exceeds the cap of {MAX_ORDER}")
    t = A.table[:, None, :, None] * m + B.table[None, :, None, :]
    gens = names = None
    if A.generators is not None and B.generators is not None:
        gens = [g * m for g in A.generators] + list(B.generators)
        if A.gen_names and B.gen_names and not set(A.gen_names) & set(B.gen_names):
            names = list(A.gen_names) + list(B.gen_names)
    return Group(
        t.reshape(n * m, n * m),
        label if label is not None else f"{A.label}x{B.label}",
        generators=gens,
        gen_names=names,
        validate=False,
    )


def embed_factors(A: Group, B: Group) -> tuple[list[int], list[int]]:
    """Images of A and B inside ``direct_product(A, B)``."""
    m = B.order
    return [a * m for a in range(A.order)], list(range(m))


# --- isomorphism testing --------------------------------------------------


def _abelianization_profile(G: Group) -> tuple:
    D = derived_subgroup(G)
    dset = D._set
    orders = []
    for g in range(G.order):
        k, cur = 1, g
        while cur not in dset:
            cur = G.mul(cur, g)
            k += 1
        orders.append(k)
    counts = np.bincount(orders)
    return tuple(int(c) // len(D) for c in counts)


def fingerprint(G: Group) -> tuple:
    """Isomorphism invariants; differing fingerprints rule out isomorphism."""

    def compute():
        return (
            G.order,
            tuple(np.bincount(G.element_orders).tolist()),
            len(center(G)),
            len(derived_subgroup(G)),
            len(frattini(G)),
            exponent(G),
            nilpotency_class(G),
            _abelianization_profile(G),
        )

    return _cached(G, "fingerprint", compute)


def _element_invariants(G: Group) -> list[tuple]:
    def compute():
        Z, D, F = center(G), derived_subgroup(G), frattini(G)
        cs = centralizer_sizes(G)
        sq = G.table[np.arange(G.order), np.arange(G.order)]
        return [
            (int(G.element_orders[a]), int(cs[a]), a in Z, a in D, a in F, int(cs[sq[a]]))
            for a in range(G.order)
        ]

    return _cached(G, "element_invariants", compute)


def minimal_generating_set(G: Group) -> list[int]:
    """Burnside basis: lifts of a basis of G/Phi(G), preferring rare elements."""

    def compute():
        inv = _element_invariants(G)
        counts: dict = {}
        for v in inv:
            counts[v] = counts.get(v, 0) + 1
        candidates = sorted(range(1, G.order), key=lambda a: (counts[inv[a]], a))
        F = frattini(G)
        gens: list[int] = []
        span = set(F.members)
        for a in candidates:
            if a not in span:
                gens.append(a)
                span = set(_closure(G.rows, list(F.members) + gens))
            if len(span) == G.order:
                break
        return gens

    return _cached(G, "mingens", compute)


def isomorphisms(A: Group, B: Group) -> Iterator[np.ndarray]:
    """Yield every isomorphism A -> B as an index array ``phi[a]``."""
    if max(A.order, B.order) > MAX_ISO_ORDER:
        raise SizeLimitError(f"isomorphism search is capped at order {MAX_ISO_ORDER}")
    if fingerprint(A) != fingerprint(B):
        return
    gens = minimal_generating_set(A)
    if not gens:
        yield np.zeros(1, dtype=np.int64)
        return
    inv_a, inv_b = _element_invariants(A), _element_invariants(B)
    candidates = [[b for b in range(B.order) if inv_b[b] == inv_a[x]] for x in gens]
    # Schreier trees of the chain <x1> <= <x1,x2> <= ... for incremental checks
    trees = []
    for k in range(1, len(gens) + 1):
        parent, via, order = _schreier_tree(A.table, gens[:k])
        members = np.array(order)
        trees.append((members, order, parent, via))

    def extend(images: list[int]):
        k = len(images)
        members, order, parent, via = trees[k - 1]
        phi = np.full(A.order, -1, dtype=np.int64)
        phi[0] = 0
        for e in order[1:]:
            phi[e] = B.table[phi[parent[e]], images[via[e]]]
        img = phi[members]
        if len(np.unique(img)) != len(members):
            return None
        for j in range(k):
            if not np.array_equal(phi[A.table[members, gens[j]]], B.table[img, images[j]]):
                return None
        return phi

    def search(images: list[int]):
        k = len(images)
        for b in candidates[k]:
            if b in images:
                continue
            images.append(b)
            phi = extend(images)
            if phi is not None:
                if k + 1 == len(gens):
                    yield phi
                else:
                    yield from search(images)
            images.pop()

    yield from search([])


def find_isomorphism(A: Group, B: Group) -> np.ndarray | None:
    return next(isomorphisms(A, B), None)


def is_isomorphic(A: Group, B: Group) -> bool:
    return find_isomorphism(A, B) is not None


def automorphisms(G: Group) -> list[np.ndarray]:
    return list(isomorphisms(G, G))


# --- subgroup enumeration --------------------------------------------------


def two_generated_nonabelian_subgroups(G: Group) -> list[Subgroup]:
    if G.order > MAX_SUBGROUP_ORDER:
        raise SizeLimitError(f"subgroup enumeration is capped at order {MAX_SUBGROUP_ORDER}")
    t = G.table
    noncomm = np.argwhere(t != t.T)
    found: dict[tuple, Subgroup] = {}
    for a, b in noncomm:
        if a < b:
            members = tuple(_closure(G.rows, (int(a), int(b))))
            found.setdefault(members, Subgroup(G, members))
    return sorted(found.values(), key=lambda s: (len(s), s.members))


def subgroups_of_abelian(G: Group, A: Subgroup) -> list[Subgroup]:
    """All subgroups of an abelian subgroup ``A``, by joining cyclic pieces."""
    cyclic = {tuple(_closure(G.rows, [a])) for a in A.members}
    subs = {(0,)}
    frontier = [(0,)]
    while frontier:
        nxt = []
        for s in frontier:
            for c in cyclic:
                if not set(c) <= set(s):
                    j = tuple(_closure(G.rows, s + c))
                    if j not in subs:
                        subs.add(j)
                        nxt.append(j)
        frontier = nxt
    return sorted((Subgroup(G, s) for s in subs), key=lambda s: (len(s), s.members))
