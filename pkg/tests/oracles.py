"""Independent reference implementations used only by the tests.

Nothing here imports the package: groups are built from permutations and
integer matrices, and algebra elements are plain dicts of coefficients.
"""

from __future__ import annotations

import itertools
from collections import Counter

# Frozen reference values computed with sympy (FpGroup coset enumeration and
# permutation-group routines).  Tuple: order, |Z|, |G'|, |Phi|, class, exp G.
SYMPY_INVARIANTS = {
    "C2": (2, 2, 1, 1, 1, 2),
    "C4": (4, 4, 1, 2, 1, 4),
    "C8": (8, 8, 1, 4, 1, 8),
    "D8": (8, 2, 2, 2, 2, 4),
    "Q8": (8, 2, 2, 2, 2, 4),
    "G16_3": (16, 4, 2, 4, 2, 4),
    "G16_4": (16, 4, 2, 4, 2, 4),
    "CaseB": (16, 4, 2, 4, 2, 4),
    "Case2": (32, 8, 2, 8, 2, 4),
    "G32_6": (32, 2, 4, 8, 3, 4),
    "D8xC2": (16, 4, 2, 2, 2, 4),
    "Q8xC2": (16, 4, 2, 2, 2, 4),
    "D8xC4": (32, 8, 2, 4, 2, 4),
    "G16_3xC2": (32, 8, 2, 4, 2, 4),
    "G16_4xC2": (32, 8, 2, 4, 2, 4),
    "D8xD8": (64, 4, 4, 4, 2, 4),
    "D8xQ8": (64, 4, 4, 4, 2, 4),
    "Q8xQ8": (64, 4, 4, 4, 2, 4),
    "E64": (64, 8, 8, 8, 2, 4),
}

# Orders of the groups defined by presentations, from sympy's coset enumerator.
SYMPY_PRESENTATION_ORDERS = {
    "G16_3": 16, "G16_4": 16, "G32_2_displayed": 16, "G32_6_displayed": 16,
    "CaseA": 16, "CaseB": 16, "Case2": 32, "Case4": 16, "Case74": 32, "D8": 8, "Q8": 8,
}

# Exponent of the normalized unit group, by naive enumeration of every unit
# over Cayley tables taken from sympy permutation groups.
NAIVE_UNIT_EXPONENTS = {
    "C2": 2, "C4": 4, "C8": 8, "C2xC2": 2, "C4xC2": 4, "C2xC2xC2": 2,
    "D8": 4, "Q8": 4, "G16_3": 4, "G16_4": 4, "CaseB": 4, "D8xC2": 4, "Q8xC2": 4,
    "C4xC4": 4, "C8xC2": 8, "C4xC2xC2": 4,
}


# --- concrete groups -----------------------------------------------------------


def compose(p, q):
    """Permutation product: apply p, then q."""
    return tuple(q[i] for i in p)


def closure(gens, mul, identity):
    elems = [identity]
    seen = {identity}
    for x in elems:
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                elems.append(y)
    return elems


def table_of(elems, mul):
    """Cayley table with the identity moved to index 0 (it is elems[0])."""
    idx = {e: i for i, e in enumerate(elems)}
    return [[idx[mul(a, b)] for b in elems] for a in elems]


def dihedral8():
    r = (1, 2, 3, 0)
    s = (0, 3, 2, 1)
    return table_of(closure([r, s], compose, (0, 1, 2, 3)), compose)


def _mat_mul(a, b):
    (a0, a1, a2, a3), (b0, b1, b2, b3) = a, b
    return (a0 * b0 + a1 * b2, a0 * b1 + a1 * b3, a2 * b0 + a3 * b2, a2 * b1 + a3 * b3)


def quaternion8():
    # 2x2 Gaussian-integer matrices encoded as pairs (re, im) per entry
    def cm(a, b):
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    def cadd(a, b):
        return (a[0] + b[0], a[1] + b[1])

    def mul(x, y):
        return (
            cadd(cm(x[0], y[0]), cm(x[1], y[2])),
            cadd(cm(x[0], y[1]), cm(x[1], y[3])),
            cadd(cm(x[2], y[0]), cm(x[3], y[2])),
            cadd(cm(x[2], y[1]), cm(x[3], y[3])),
        )

    one = ((1, 0), (0, 0), (0, 0), (1, 0))
    i = ((0, 1), (0, 0), (0, 0), (0, -1))
    j = ((0, 0), (1, 0), (-1, 0), (0, 0))
    return table_of(closure([i, j], mul, one), mul)


def cyclic(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def product(A, B):
    nb = len(B)
    n = len(A) * nb
    return [[A[x // nb][y // nb] * nb + B[x % nb][y % nb] for y in range(n)] for x in range(n)]


# --- naive group theory --------------------------------------------------------


def inverse_of(T, a):
    return T[a].index(0)


def gen_closure(T, gens):
    return frozenset(closure(list(gens), lambda x, g: T[x][g], 0))


def subgroups_upto(T, k):
    """All subgroups generated by at most k elements."""
    n = len(T)
    out = set()
    for r in range(k + 1):
        for gens in itertools.combinations(range(1, n), r):
            out.add(gen_closure(T, gens))
    return out


def frattini_by_maximals(T, k):
    n = len(T)
    subs = subgroups_upto(T, k)
    maxes = [S for S in subs if len(S) * 2 == n]
    inter = frozenset(range(n))
    for M in maxes:
        inter &= M
    return inter


def center(T):
    n = len(T)
    return frozenset(a for a in range(n) if all(T[a][b] == T[b][a] for b in range(n)))


def element_order(T, a):
    k, x = 1, a
    while x != 0:
        x = T[x][a]
        k += 1
    return k


def is_homomorphism(TA, TB, phi):
    n = len(TA)
    return all(phi[TA[a][b]] == TB[phi[a]][phi[b]] for a in range(n) for b in range(n))


# --- naive group algebra -------------------------------------------------------


def alg_mul(T, x, y):
    """x, y are sets of group elements (F2 coefficients); returns a set."""
    c = Counter(T[a][b] for a in x for b in y)
    return frozenset(g for g, v in c.items() if v % 2)


def alg_add(x, y):
    return frozenset(x) ^ frozenset(y)


def alg_pow(T, x, k):
    r = frozenset([0])
    for _ in range(k):
        r = alg_mul(T, r, x)
    return r


def unit_order(T, x):
    x = frozenset(x)
    assert len(x) % 2 == 1
    k, p = 1, x
    while p != frozenset([0]):
        p = alg_mul(T, p, x)
        k += 1
    return k
