"""The group algebra F2[G] of a finite 2-group.

An element is a bit mask over the group's element indices (bit ``i`` is the
coefficient of element ``i``).  Addition is XOR.  Over F2 and a 2-group the
algebra is local, so an element is a unit exactly when its augmentation
(coefficient parity) is 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError, PreconditionError
from .group_core import Group, Subgroup

# pair masks are n^2 Python ints; above this order square() falls back to mul()
_PAIR_MASK_ORDER = 256
# below this support product mul() uses Python bit loops instead of numpy
_SPARSE_MUL = 256


class _Tables:
    """Per-group data used by the algebra: squares and symmetric pair masks."""

    def __init__(self, G: Group):
        n = G.order
        self.nbytes = (n + 7) // 8
        self.rows = G.rows
        diag = np.diag(G.table)
        self.square_bit = [1 << int(v) for v in diag]
        self.pair = None
        if n <= _PAIR_MASK_ORDER:
            t = G.rows
            # P[i][j] = g_i g_j + g_j g_i, zero when the two commute
            self.pair = [[(1 << t[i][j]) ^ (1 << t[j][i]) for j in range(n)] for i in range(n)]


def _tables(G: Group) -> _Tables:
    if "algebra" not in G._cache:
        G._cache["algebra"] = _Tables(G)
    return G._cache["algebra"]


def support(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _to_bits(mask: int, n: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]


def _from_bits(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits.astype(np.uint8), bitorder="little").tobytes(), "little")


def _mul_masks(G: Group, a: int, b: int) -> int:
    sa, sb = support(a), support(b)
    if not sa or not sb:
        return 0
    if len(sa) * len(sb) <= _SPARSE_MUL:
        rows = G.rows
        r = 0
        for i in sa:
            row = rows[i]
            for j in sb:
                r ^= 1 << row[j]
        return r
    prods = G.table[np.ix_(sa, sb)].ravel()
    return _from_bits(np.bincount(prods, minlength=G.order) & 1)


@dataclass(frozen=True)
class AlgebraElement:
    group: Group
    coeffs: int

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, G: Group) -> "AlgebraElement":
        return cls(G, 0)

    @classmethod
    def one(cls, G: Group) -> "AlgebraElement":
        return cls(G, 1)

    @classmethod
    def basis(cls, G: Group, g: int) -> "AlgebraElement":
        return cls(G, 1 << int(g))

    @classmethod
    def from_elements(cls, G: Group, elements: Iterable[int]) -> "AlgebraElement":
        """Sum of group elements; repeated elements cancel in pairs."""
        m = 0
        for g in elements:
            m ^= 1 << int(g)
        return cls(G, m)

    @classmethod
    def parse(cls, G: Group, expr: str) -> "AlgebraElement":
        """Sum of words in the named generators, e.g. ``"1 + g + gh"``."""
        return cls.from_elements(G, (G.element(t) for t in expr.split("+")))

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if other.group is not self.group:
            raise DomainError("algebra elements belong to different groups")
        return None

    def __add__(self, other):
        if (bad := self._check(other)) is not None:
            return bad
        return AlgebraElement(self.group, self.coeffs ^ other.coeffs)

    __sub__ = __add__

    def __mul__(self, other):
        if (bad := self._check(other)) is not None:
            return bad
        return AlgebraElement(self.group, _mul_masks(self.group, self.coeffs, other.coeffs))

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative powers are not supported")
        result = AlgebraElement.one(self.group)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __bool__(self):
        return self.coeffs != 0

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.group is other.group and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.group), self.coeffs))

    def support(self) -> list[int]:
        return support(self.coeffs)

    def __repr__(self):
        terms = " + ".join(str(g) for g in self.support()) or "0"
        return f"AlgebraElement({self.group.label}: {terms})"


def add(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x + y


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def augmentation(x: AlgebraElement) -> int:
    return x.coeffs.bit_count() & 1


def is_unit(x: AlgebraElement) -> bool:
    return augmentation(x) == 1


def square_mask(G: Group, mask: int) -> int:
    tabs = _tables(G)
    if tabs.pair is None:
        return _mul_masks(G, mask, mask)
    s = support(mask)
    sq, pair = tabs.square_bit, tabs.pair
    r = 0
    for k, i in enumerate(s):
        r ^= sq[i]
        row = pair[i]
        for j in s[k + 1:]:
            r ^= row[j]
    return r


def square(x: AlgebraElement) -> AlgebraElement:
    """``x*x`` via squares of the support plus symmetric pair masks."""
    return AlgebraElement(x.group, square_mask(x.group, x.coeffs))


def unit_order(x: AlgebraElement) -> int:
    """Order of a unit, always a power of 2, by repeated squaring."""
    if not is_unit(x):
        raise DomainError("not a unit (augmentation 0)")
    G = x.group
    m, k = x.coeffs, 1
    for _ in range(2 * G.order + 1):
        if m == 1:
            return k
        m = square_mask(G, m)
        k *= 2
    raise DomainError("squaring chain did not reach 1")


def nilpotency_index(z: AlgebraElement) -> int:
    """Smallest k with z^k = 0 (with z^1 = z, so the zero element gives 1)."""
    if augmentation(z) != 0:
        raise DomainError("augmentation 1 elements are units, never nilpotent")
    G = z.group
    p, k = z.coeffs, 1
    while p:
        if k > G.order:
            raise DomainError("not nilpotent within the group-order bound")
        p = _mul_masks(G, p, z.coeffs)
        k += 1
    return k


def lie_bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """``[x, y] = xy - yx``, which is ``xy + yx`` in characteristic 2."""
    return x * y + y * x


@dataclass(frozen=True)
class CosetDecomposition:
    """``x = sum_i g_i u_i`` with each ``u_i`` supported on the subgroup."""

    transversal: tuple[int, ...]
    subgroup: Subgroup
    components: tuple[AlgebraElement, ...]

    def recombine(self) -> AlgebraElement:
        G = self.subgroup.parent
        total = AlgebraElement.zero(G)
        for g, u in zip(self.transversal, self.components):
            total = total + AlgebraElement.basis(G, g) * u
        return total


def coset_transversal(N: Subgroup) -> tuple[int, ...]:
    """Left coset representatives ``gN``, identity first, then least index."""
    G = N.parent
    seen: set[int] = set()
    reps = []
    for g in range(G.order):
        if g not in seen:
            reps.append(g)
            seen.update(G.rows[g][n] for n in N.members)
    return tuple(reps)


def decompose(x: AlgebraElement, N: Subgroup) -> CosetDecomposition:
    G = x.group
    reps = coset_transversal(N)
    which = {}
    for i, g in enumerate(reps):
        for n in N.members:
            which[G.rows[g][n]] = (i, n)
    comps = [0] * len(reps)
    for e in x.support():
        i, n = which[e]
        comps[i] ^= 1 << n
    return CosetDecomposition(reps, N, tuple(AlgebraElement(G, c) for c in comps))


def brauer_square(x: AlgebraElement, N: Subgroup) -> AlgebraElement:
    """Square of ``x`` computed from its decomposition over a central subgroup.

    With ``x = sum g_i u_i`` and the ``u_i`` central,
    ``x^2 = sum g_i^2 u_i^2 + sum_{1<i<j} (g_i g_j + g_j g_i) u_i u_j``;
    pairs involving ``g_1 = 1`` drop out because 1 commutes with everything.
    """
    G = x.group
    if N.parent is not G:
        raise DomainError("subgroup of a different group")
    if not N.is_central():
        raise PreconditionError("the decomposition subgroup must be central")
    d = decompose(x, N)
    reps = d.transversal
    comps = [u.coeffs for u in d.components]
    rows = G.rows
    r = 0
    for g, u in zip(reps, comps):
        if u:
            r ^= _mul_masks(G, 1 << rows[g][g], _mul_masks(G, u, u))
    live = [i for i in range(1, len(reps)) if comps[i]]
    for a, i in enumerate(live):
        gi = reps[i]
        for j in live[a + 1:]:
            gj = reps[j]
            gij, gji = rows[gi][gj], rows[gj][gi]
            if gij == gji:
                continue
            uu = _mul_masks(G, comps[i], comps[j])
            for e in support(uu):
                r ^= (1 << rows[gij][e]) ^ (1 << rows[gji][e])
    return AlgebraElement(G, r)


def augmentation_ideal_basis(N: Subgroup) -> list[AlgebraElement]:
    """``1 + n`` for the non-identity members of ``N``, inside F2[parent]."""
    G = N.parent
    return [AlgebraElement(G, 1 | (1 << n)) for n in N.members if n]


def _span(basis: list[AlgebraElement]) -> list[AlgebraElement]:
    G = basis[0].group if basis else None
    out = [0]
    for b in basis:
        out += [m ^ b.coeffs for m in out]
    return [AlgebraElement(G, m) for m in sorted(set(out))]


def ideal_elements(N: Subgroup) -> list[AlgebraElement]:
    """Every element of the augmentation ideal of F2[N] (2^(|N|-1) of them)."""
    basis = augmentation_ideal_basis(N)
    if not basis:
        return [AlgebraElement.zero(N.parent)]
    return _span(basis)


__all__ = [
    "AlgebraElement", "CosetDecomposition", "add", "augmentation", "augmentation_ideal_basis",
    "brauer_square", "coset_transversal", "decompose", "ideal_elements", "is_unit", "lie_bracket",
    "mul", "nilpotency_index", "square", "square_mask", "support", "unit_order",
]
