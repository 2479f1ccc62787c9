"""Named groups, presentations, coset enumeration and table files.

Groups given by presentations are built with HLT-style Todd-Coxeter coset
enumeration over the trivial subgroup; the resulting coset table is
renumbered in breadth-first discovery order and turned into a Cayley table.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import group_core as gc
from .errors import EnumerationError, NormUnitsError, ParseError, ValidationError
from .group_core import Group
from .words import Word, format_word, free_reduce, parse_word

DEFAULT_COSET_CAP = 65536


@dataclass(frozen=True)
class Presentation:
    num_generators: int
    relators: tuple[Word, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(f"g{i + 1}" for i in range(self.num_generators)))
        if len(self.names) != self.num_generators:
            raise ValueError("one name per generator required")
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > self.num_generators:
                    raise ValueError(f"bad letter {x} in relator {r}")

    @classmethod
    def from_strings(cls, names: Sequence[str], relators: Sequence[str]) -> "Presentation":
        return cls(len(names), tuple(parse_word(r, names) for r in relators), tuple(names))

    def __str__(self):
        rels = ", ".join(format_word(r, self.names) for r in self.relators)
        return f"<{', '.join(self.names)} | {rels}>"


class _CosetTable:
    def __init__(self, ngens: int, cap: int):
        self.ncols = 2 * ngens
        self.cap = cap
        self.rows: list[list[int]] = []
        self.parent: list[int] = []
        self._new()

    def _new(self) -> int:
        if len(self.rows) >= self.cap:
            raise EnumerationError(
                f"coset enumeration exceeded {self.cap} cosets "
                "(group may be infinite or the cap too small)"
            )
        self.rows.append([-1] * self.ncols)
        self.parent.append(len(self.rows) - 1)
        return len(self.rows) - 1

    def define(self, c: int, x: int):
        d = self._new()
        self.rows[c][x] = d
        self.rows[d][x ^ 1] = c

    def rep(self, c: int) -> int:
        p = self.parent
        r = c
        while p[r] != r:
            r = p[r]
        while p[c] != r:
            p[c], c = r, p[c]
        return r

    def _merge(self, k: int, l: int, queue: list[int]):
        k, l = self.rep(k), self.rep(l)
        if k != l:
            if k > l:
                k, l = l, k
            self.parent[l] = k
            queue.append(l)

    def coincidence(self, a: int, b: int):
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        rows = self.rows
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.ncols):
                f = rows[e][x]
                if f < 0:
                    continue
                rows[f][x ^ 1] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if rows[e1][x] >= 0:
                    self._merge(f1, rows[e1][x], queue)
                elif rows[f1][x ^ 1] >= 0:
                    self._merge(e1, rows[f1][x ^ 1], queue)
                else:
                    rows[e1][x] = f1
                    rows[f1][x ^ 1] = e1

    def scan_and_fill(self, c: int, word: Sequence[int]):
        rows = self.rows
        f = b = c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and rows[f][word[i]] >= 0:
                f = rows[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and rows[b][word[j] ^ 1] >= 0:
                b = rows[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                rows[f][word[i]] = b
                rows[b][word[i] ^ 1] = f
                return
            self.define(f, word[i])

    def live(self, c: int) -> bool:
        return self.parent[c] == c


def _column(letter: int) -> int:
    return 2 * (abs(letter) - 1) + (letter < 0)


def enumerate_cosets(P: Presentation, coset_cap: int = DEFAULT_COSET_CAP) -> np.ndarray:
    """Coset table of the trivial subgroup, standardised (BFS, identity first).

    Column ``2i`` is the action of generator ``i``, column ``2i+1`` of its
    inverse.
    """
    if coset_cap < 1:
        raise ValueError("coset_cap must be at least 1")
    relators = [[_column(x) for x in free_reduce(r)] for r in P.relators]
    relators = [r for r in relators if r]
    ct = _CosetTable(P.num_generators, coset_cap)
    c = 0
    while c < len(ct.rows):
        if ct.live(c):
            for r in relators:
                if not ct.live(c):
                    break
                ct.scan_and_fill(c, r)
            if ct.live(c):
                for x in range(ct.ncols):
                    if ct.rows[c][x] < 0:
                        ct.define(c, x)
        c += 1

    # standardise: renumber live cosets in BFS order over columns
    number = {0: 0}
    order = [0]
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for x in range(ct.ncols):
            b = ct.rep(ct.rows[a][x])
            if b not in number:
                number[b] = len(order)
                order.append(b)
                queue.append(b)
    table = np.array([[number[ct.rep(ct.rows[a][x])] for x in range(ct.ncols)] for a in order], dtype=np.int64)
    return table.reshape(len(order), ct.ncols)


def from_presentation(P: Presentation, coset_cap: int = DEFAULT_COSET_CAP, label: str = "") -> Group:
    """The finite group defined by ``P`` as a Cayley table."""
    C = enumerate_cosets(P, coset_cap)
    n = C.shape[0]
    # BFS spanning tree in the standardised table: element b = parent[b] * letter
    parent = np.full(n, -1)
    via = np.full(n, -1)
    parent[0] = 0
    for a in range(n):
        for x in range(C.shape[1]):
            b = C[a, x]
            if parent[b] < 0:
                parent[b], via[b] = a, x
    T = np.empty((n, n), dtype=np.int64)
    T[:, 0] = np.arange(n)
    for b in range(1, n):  # parents always precede children in BFS numbering
        T[:, b] = C[T[:, parent[b]], via[b]]
    gens = [int(C[0, 2 * i]) for i in range(P.num_generators)]
    return Group(T, label, generators=gens, gen_names=P.names)


# --- structural constructions ---------------------------------------------


def cyclic(n: int) -> Group:
    idx = np.arange(n)
    return Group((idx[:, None] + idx[None, :]) % n, f"C{n}", generators=[1 % n], gen_names=["a"])


def semidirect_product(N: Group, K: Group, action: Callable[[int], np.ndarray], label: str = "") -> Group:
    """``N x| K`` with ``(n1,k1)(n2,k2) = (n1 * action(k1)[n2], k1 k2)``.

    ``action(k)`` must be an automorphism of N given as an index array; the
    pair ``(n, k)`` is numbered ``n * |K| + k``.
    """
    nn, nk = N.order, K.order
    act = np.array([action(k) for k in range(nk)])
    n1 = np.repeat(np.arange(nn), nk)
    k1 = np.tile(np.arange(nk), nn)
    left = N.table[n1[:, None], act[k1][:, n1]]
    T = left * nk + K.table[k1[:, None], k1[None, :]]
    return Group(T, label)


def _power_perm(perm: np.ndarray, k: int) -> np.ndarray:
    out = np.arange(len(perm))
    for _ in range(k):
        out = perm[out]
    return out


def c4_by_c4() -> Group:
    """C4 x| C4 with the generator of the top factor inverting the bottom."""
    C4 = cyclic(4)
    inversion = np.array([0, 3, 2, 1])
    return semidirect_product(C4, C4, lambda k: _power_perm(inversion, k), "C4:C4")


def c4c2_by_c4() -> Group:
    """(C4 x C2) x| C4 where the top generator sends a -> ab, b -> b."""
    C4, C2 = cyclic(4), cyclic(2)
    N = gc.direct_product(C4, C2)
    # (i, j) is i*2 + j; alpha(i, j) = (i, j + i mod 2)
    alpha = np.array([i * 2 + (j + i) % 2 for i in range(4) for j in range(2)])
    G = semidirect_product(N, C4, lambda k: _power_perm(alpha, k), "(C4xC2):C4")
    # a = ((1,0), 0), t = ((0,0), 1)
    return Group(G.table, G.label, generators=[2 * 4, 1], gen_names=["g", "h"], validate=False)


# --- named groups ----------------------------------------------------------

# The four groups exactly as displayed in the source; the last two
# define groups of order 16, not 32 (see DISPLAYED_DEFECTS).
DISPLAYED = {
    "G16_3": ("g h", ["g^4", "h^2", "[g^2,h]", "(gh)^3 = hg^3"]),
    "G16_4": ("g h", ["g^4", "h^4", "Hgh = g^3"]),
    "G32_2": ("g h", ["g^4", "h^4", "(gh)^2", "[g^2,h]", "[g,h^2]"]),
    "G32_6": ("g h", ["g^4", "h^4", "(g^3h)^2", "[g^2,h]", "[g,h^2]"]),
}
DISPLAYED_ORDERS = {"G16_3": 16, "G16_4": 16, "G32_2": 32, "G32_6": 32}

# Presentations arising in the case analysis of the two-generated subgroups.
PROOF_CASES = {
    "CaseA": ("g h", ["g^4", "h^2", "[g^2,h]", "(gh)^4"]),
    "CaseB": ("g h", ["g^4", "h^4", "(gh)^2", "[g^2,h]"]),
    "Case2": ("g h", ["g^4", "h^4", "[g,h^2]", "[g^2,h]", "(gh)^2 = (hg)^2"]),
    "Case4": ("g h", ["g^4", "h^4", "g^2 = h^2", "(gh)^2 = (hg)^2"]),
    "Case74": ("g h", ["g^4", "h^4", "(g^3h)^2", "ghg^2 = hgh^2"]),
}

_E64_RELATORS = ["a^2", "b^2", "c^2"] + [
    f"[[{x},{y}],{z}]" for x, y in (("a", "b"), ("a", "c"), ("b", "c")) for z in "abc"
]

_PRESENTED = {
    "D8": ("g h", ["g^4", "h^2", "hgh = g^3"]),
    "Q8": ("g h", ["g^4", "g^2 = h^2", "Hgh = g^3"]),
    "G16_3": DISPLAYED["G16_3"],
    "G16_4": DISPLAYED["G16_4"],
    "G32_6": PROOF_CASES["Case74"],
    "E64": ("a b c", _E64_RELATORS),
    "G32_2_displayed": DISPLAYED["G32_2"],
    "G32_6_displayed": DISPLAYED["G32_6"],
    **PROOF_CASES,
}

_EXPECTED = {
    "C2": (2, "C2"),
    "C4": (4, "C4"),
    "C8": (8, "C8"),
    "D8": (8, "D8"),
    "Q8": (8, "Q8"),
    "G16_3": (16, "(C4xC2):C2"),
    "G16_4": (16, "C4:C4"),
    "G32_2": (32, "(C4xC2):C4"),
    "G32_6": (32, "((C4xC2):C2):C2"),
    "E64": (64, None),
    "CaseA": (16, None),
    "Case2": (32, None),
    "Case4": (16, None),
    "Case74": (32, None),
}

BASE_NAMES = ("C2", "C4", "C8", "D8", "Q8", "G16_3", "G16_4", "G32_2", "G32_6", "E64") + tuple(
    k for k in _PRESENTED if k not in ("D8", "Q8", "G16_3", "G16_4", "G32_6", "E64")
)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    source: str
    group: Group
    expected_order: int | None = None
    expected_structure: str | None = None
    presentation: Presentation | None = None

    def __post_init__(self):
        if self.expected_order is not None and self.group.order != self.expected_order:
            raise ValidationError(
                f"{self.name}: constructed order {self.group.order} != expected {self.expected_order}"
            )


_BUILTIN_CACHE: dict[str, CatalogEntry] = {}


def presentation_of(name: str) -> Presentation:
    gens, rels = _PRESENTED[name]
    return Presentation.from_strings(gens.split(), rels)


def _build_base(name: str) -> CatalogEntry:
    expected_order, structure = _EXPECTED.get(name, (None, None))
    if name in ("C2", "C4", "C8"):
        return CatalogEntry(name, "builtin-structure", cyclic(int(name[1:])), expected_order, structure)
    if name == "G32_2":
        G = c4c2_by_c4()
        G.label = name
        return CatalogEntry(name, "builtin-structure", G, expected_order, structure)
    if name in _PRESENTED:
        P = presentation_of(name)
        return CatalogEntry(name, "builtin-presentation", from_presentation(P, label=name), expected_order, structure, P)
    raise KeyError(f"unknown group name {name!r}")


def builtin(name: str) -> CatalogEntry:
    """A named group, or an ``x``-separated direct product of named groups."""
    if name in _BUILTIN_CACHE:
        return _BUILTIN_CACHE[name]
    parts = name.split("x")
    if len(parts) == 1:
        entry = _build_base(name)
    else:
        factors = [builtin(p) for p in parts]
        G = factors[0].group
        for f in factors[1:]:
            G = gc.direct_product(G, f.group)
        G.label = name
        orders = [f.group.order for f in factors]
        entry = CatalogEntry(name, "builtin-product", G, int(np.prod(orders)))
    _BUILTIN_CACHE[name] = entry
    return entry


DEFAULT_CATALOG = (
    "C2", "C4", "C8", "C2xC2", "C4xC2", "C8xC2", "C2xC2xC2", "C4xC4", "C4xC2xC2", "C2xC2xC2xC2",
    "D8", "Q8", "G16_3", "G16_4", "D8xC2", "Q8xC2", "CaseB", "G32_2_displayed", "G32_6_displayed",
    "G32_2", "G32_6", "D8xC4", "Q8xC4", "D8xC2xC2", "Q8xC2xC2", "G16_3xC2", "G16_4xC2",
    "E64", "D8xD8", "D8xQ8", "Q8xQ8",
)


# --- file formats ----------------------------------------------------------


def _lines(path):
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"not UTF-8: {e}") from None
    return text.split("\n")


def parse_cayley_table(lines: Sequence[str], name: str = "") -> CatalogEntry:
    lines = list(lines)
    while lines and lines[-1].strip() == "":
        lines.pop()
    if not lines:
        raise ParseError("empty file", 1)
    head = lines[0].split()
    if len(head) != 2 or head[0] != "order" or not head[1].isdigit() or int(head[1]) < 1:
        raise ParseError("expected 'order N'", 1)
    n = int(head[1])
    label = name
    start = 1
    if len(lines) > 1 and lines[1].startswith("label"):
        label = lines[1][len("label"):].strip() or name
        start = 2
    body = lines[start:]
    if len(body) != n:
        raise ParseError(f"expected {n} table rows, found {len(body)}", start + min(len(body), n) + 1)
    rows = []
    for k, line in enumerate(body, start=start + 1):
        fields = line.split()
        if len(fields) != n:
            raise ParseError(f"expected {n} entries, found {len(fields)}", k)
        try:
            row = [int(f) for f in fields]
        except ValueError:
            raise ParseError("non-integer entry", k) from None
        if any(v < 0 or v >= n for v in row):
            raise ParseError(f"entry out of range [0, {n})", k)
        rows.append(row)
    G = Group(rows, label)
    return CatalogEntry(label, "file", G)


def load_cayley_table(path) -> CatalogEntry:
    return parse_cayley_table(_lines(path), Path(path).stem)


def format_cayley_table(G: Group) -> str:
    out = [f"order {G.order}"]
    if G.label:
        out.append(f"label {G.label}")
    out.extend(" ".join(str(v) for v in row) for row in G.rows)
    return "\n".join(out) + "\n"


def save_cayley_table(entry: CatalogEntry | Group, path):
    G = entry.group if isinstance(entry, CatalogEntry) else entry
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_cayley_table(G))


def parse_presentation(lines: Sequence[str]) -> Presentation:
    if not lines:
        raise ParseError("empty file", 1)
    head = lines[0].split()
    if len(head) != 2 or head[0] != "gens" or not head[1].isdigit():
        raise ParseError("expected 'gens k'", 1)
    k = int(head[1])
    names = [f"g{i + 1}" for i in range(k)]
    relators = []
    for lineno, line in enumerate(lines[1:], start=2):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        relators.append(parse_word(text, names, line=lineno))
    return Presentation(k, tuple(relators), tuple(names))


def load_presentation(path) -> Presentation:
    return parse_presentation(_lines(path))


def load_catalog_file(path, coset_cap: int = DEFAULT_COSET_CAP) -> CatalogEntry:
    """Load either file format, dispatching on the first keyword."""
    lines = _lines(path)
    first = lines[0].split()[:1] if lines else []
    if first == ["gens"]:
        P = parse_presentation(lines)
        name = Path(path).stem
        return CatalogEntry(name, "file", from_presentation(P, coset_cap, label=name), presentation=P)
    if first == ["order"]:
        return parse_cayley_table(lines, Path(path).stem)
    raise ParseError("expected 'order N' or 'gens k'", 1)


__all__ = [
    "BASE_NAMES", "CatalogEntry", "DEFAULT_CATALOG", "DISPLAYED", "DISPLAYED_ORDERS", "NormUnitsError",
    "PROOF_CASES", "Presentation", "builtin", "c4_by_c4", "c4c2_by_c4", "cyclic", "enumerate_cosets",
    "from_presentation", "load_catalog_file", "load_cayley_table", "load_presentation",
    "parse_cayley_table", "parse_presentation", "presentation_of", "save_cayley_table",
    "semidirect_product",
]
