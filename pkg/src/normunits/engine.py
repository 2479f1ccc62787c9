"""Exponent of V(F2 G): exhaustive Gray-code walks, sampling, witness search.

For groups of order <= 64 an algebra element fits in one uint64.  Squaring
is evaluated with byte-indexed lookup tables: a square splits into
per-byte squares plus a bilinear cross term for every pair of bytes, and
the symmetric translation ``x g + g x`` (linear in ``x``) is one table
lookup per byte.  The exhaustive walk visits all augmentation-1 vectors
in reflected Gray-code order, flipping one free coefficient together
with the identity coefficient, and updates ``x^2`` incrementally:

    (x + g + 1)^2 = x^2 + g^2 + 1 + (x g + g x)
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numba
import numpy as np
from numba import njit, prange

from . import group_core as gc
from .algebra import AlgebraElement, unit_order
from .errors import DomainError, SizeLimitError
from .group_core import Group

log = logging.getLogger(__name__)

MAX_EXHAUSTIVE_ORDER = 32
MAX_WORD_ORDER = 64
DEFAULT_SHARD_BITS = 8
SPARSE_BUDGET = 100_000
RANDOM_BUDGET = 1_000_000
# random-phase cap for groups too large for the uint64 kernels
PYTHON_RANDOM_BUDGET = 10_000

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_ONE = np.uint64(1)
_BYTE = np.uint64(255)


@dataclass
class ExponentResult:
    group_label: str
    method: str  # exhaustive | bounded-exhaustive | sampled | witness
    exponent: int
    witness: AlgebraElement | None = None
    samples: int = 0
    seed: int | None = None
    wall_time: float = field(default=0.0, compare=False)

    @property
    def exact(self) -> bool:
        return self.method == "exhaustive"


class DividesFour(NamedTuple):
    holds: bool
    counterexample: AlgebraElement | None


# --- lookup tables -----------------------------------------------------------


@njit(cache=True)
def _build_tables(n, pair, sqbit):
    nbytes = (n + 7) // 8
    lt = np.zeros((n, nbytes, 256), dtype=np.uint64)
    for e in range(n):
        for p in range(nbytes):
            for v in range(1, 256):
                low = 0
                while not (v >> low) & 1:
                    low += 1
                i = 8 * p + low
                add = pair[i, e] if i < n else np.uint64(0)
                lt[e, p, v] = lt[e, p, v & (v - 1)] ^ add
    sqt = np.zeros((nbytes, 256), dtype=np.uint64)
    for p in range(nbytes):
        for v in range(1, 256):
            low = 0
            while not (v >> low) & 1:
                low += 1
            i = 8 * p + low
            if i >= n:
                sqt[p, v] = sqt[p, v & (v - 1)]
                continue
            r = sqt[p, v & (v - 1)] ^ sqbit[i]
            rest = v & (v - 1)
            for b in range(8):
                if (rest >> b) & 1 and 8 * p + b < n:
                    r ^= pair[i, 8 * p + b]
            sqt[p, v] = r
    npairs = nbytes * (nbytes - 1) // 2
    bt = np.zeros((max(npairs, 1), 256, 256), dtype=np.uint64)
    k = 0
    for p in range(nbytes):
        for q in range(p + 1, nbytes):
            rq = np.zeros((8, 256), dtype=np.uint64)
            for a in range(8):
                i = 8 * p + a
                if i >= n:
                    continue
                for w in range(1, 256):
                    low = 0
                    while not (w >> low) & 1:
                        low += 1
                    j = 8 * q + low
                    add = pair[i, j] if j < n else np.uint64(0)
                    rq[a, w] = rq[a, w & (w - 1)] ^ add
            for v in range(1, 256):
                low = 0
                while not (v >> low) & 1:
                    low += 1
                for w in range(256):
                    bt[k, v, w] = bt[k, v & (v - 1), w] ^ rq[low, w]
            k += 1
    return lt, sqt, bt


class _WordTables:
    def __init__(self, G: Group):
        n = G.order
        if n > MAX_WORD_ORDER:
            raise SizeLimitError(f"word kernels need order <= {MAX_WORD_ORDER}")
        t = G.table
        bit = np.left_shift(np.uint64(1), t.astype(np.uint64))
        pair = bit ^ bit.T
        sqbit = np.ascontiguousarray(np.diag(bit))
        self.n = n
        self.nbytes = (n + 7) // 8
        self.sqbit = sqbit
        self.lt, self.sqt, self.bt = _build_tables(n, np.ascontiguousarray(pair), sqbit)


def _word_tables(G: Group) -> _WordTables:
    if "engine" not in G._cache:
        G._cache["engine"] = _WordTables(G)
    return G._cache["engine"]


# --- kernels -----------------------------------------------------------------


@njit(inline="always")
def _sq(y, nbytes, sqt, bt):
    r = np.uint64(0)
    k = 0
    for p in range(nbytes):
        bp = (y >> np.uint64(8 * p)) & _BYTE
        r ^= sqt[p, bp]
        for q in range(p + 1, nbytes):
            r ^= bt[k, bp, (y >> np.uint64(8 * q)) & _BYTE]
            k += 1
    return r


@njit(inline="always")
def _log2_order(x, y, nbytes, sqt, bt):
    # x a unit, y = x^2; returns log2 of the order of x
    if x == _ONE:
        return 0
    e = 1
    while y != _ONE:
        y = _sq(y, nbytes, sqt, bt)
        e += 1
        if e > 64:
            return -1
    return e


@njit(inline="always")
def _popcount(v):
    c = 0
    while v:
        v &= v - _ONE
        c += 1
    return c


@njit(cache=True)
def square_word(y, nbytes, sqt, bt):
    return _sq(np.uint64(y), nbytes, sqt, bt)


@njit(cache=True)
def log2_orders(xs, nbytes, sqt, bt):
    out = np.empty(len(xs), dtype=np.int64)
    for i in range(len(xs)):
        x = xs[i]
        out[i] = _log2_order(x, _sq(x, nbytes, sqt, bt), nbytes, sqt, bt)
    return out


@njit(parallel=True, cache=True)
def _walk(n, m, shard_lo, shard_hi, lt, sqt, bt, sqbit, stop_above):
    """Gray-code walk over shards ``[shard_lo, shard_hi)``.

    Each shard fixes the top free bits to its index and walks the low ``m``
    free bits.  Returns per-shard (best log2 order, first unit reaching it).
    With ``stop_above >= 0`` a shard stops at its first unit of log2 order
    greater than ``stop_above``, and shards above the lowest such shard
    abandon their walk.
    """
    nbytes = (n + 7) // 8
    nsh = shard_hi - shard_lo
    best = np.full(nsh, -1, dtype=np.int64)
    best_x = np.zeros(nsh, dtype=np.uint64)
    lowest_hit = np.full(1, nsh, dtype=np.int64)
    steps = np.int64(1) << m
    for si in prange(nsh):
        free = np.uint64(shard_lo + si) << np.uint64(m)
        x = (free << _ONE) | np.uint64(1 - (_popcount(free) & 1))
        y = _sq(x, nbytes, sqt, bt)
        o = _log2_order(x, y, nbytes, sqt, bt)
        best[si] = o
        best_x[si] = x
        if stop_above >= 0 and o > stop_above:
            if si < lowest_hit[0]:
                lowest_hit[0] = si
            continue
        for i in range(1, steps):
            if stop_above >= 0 and (i & 0xFFFF) == 0 and lowest_hit[0] < si:
                break
            k = 0
            while not (i >> k) & 1:
                k += 1
            e = k + 1
            lin = np.uint64(0)
            for p in range(nbytes):
                lin ^= lt[e, p, (x >> np.uint64(8 * p)) & _BYTE]
            y ^= sqbit[e] ^ _ONE ^ lin
            x ^= (_ONE << np.uint64(e)) | _ONE
            if y == _ONE:
                o = 0 if x == _ONE else 1
            else:
                o = _log2_order(x, y, nbytes, sqt, bt)
            if o > best[si]:
                best[si] = o
                best_x[si] = x
                if stop_above >= 0 and o > stop_above:
                    if si < lowest_hit[0]:
                        lowest_hit[0] = si
                    break
    return best, best_x


@njit(cache=True)
def _walk_checkpoints(n, m, shard, lt, sqt, bt, sqbit, checkpoints):
    """Walk one shard and compare the incremental state with a fresh
    computation at each (sorted) checkpoint step.  Returns mismatch count."""
    nbytes = (n + 7) // 8
    free = np.uint64(shard) << np.uint64(m)
    x = (free << _ONE) | np.uint64(1 - (_popcount(free) & 1))
    y = _sq(x, nbytes, sqt, bt)
    bad = 0
    c = 0
    steps = np.int64(1) << m
    for i in range(0, steps):
        if c >= len(checkpoints):
            break
        if i > 0:
            k = 0
            while not (i >> k) & 1:
                k += 1
            e = k + 1
            lin = np.uint64(0)
            for p in range(nbytes):
                lin ^= lt[e, p, (x >> np.uint64(8 * p)) & _BYTE]
            y ^= sqbit[e] ^ _ONE ^ lin
            x ^= (_ONE << np.uint64(e)) | _ONE
        while c < len(checkpoints) and checkpoints[c] == i:
            fr = free | np.uint64(i ^ (i >> 1))
            xr = (fr << _ONE) | np.uint64(1 - (_popcount(fr) & 1))
            if xr != x or _sq(xr, nbytes, sqt, bt) != y:
                bad += 1
            c += 1
    return bad


@njit(inline="always")
def _splitmix(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def random_units(n, count, seed, offset):
    """Counter-based draws: unit ``i`` depends only on (seed, offset + i)."""
    nfree = n - 1
    mask = (_ONE << np.uint64(nfree)) - _ONE if nfree < 64 else ~np.uint64(0)
    out = np.empty(count, dtype=np.uint64)
    base = np.uint64(seed)
    for i in range(count):
        z = _splitmix(base + np.uint64(offset + i + 1) * _GAMMA)
        free = z & mask
        out[i] = (free << _ONE) | np.uint64(1 - (_popcount(free) & 1))
    return out


@njit(parallel=True, cache=True)
def _sample_log2_orders(n, count, seed, sqt, bt):
    nbytes = (n + 7) // 8
    xs = random_units(n, count, seed, 0)
    out = np.empty(count, dtype=np.int64)
    for i in prange(count):
        x = xs[i]
        out[i] = _log2_order(x, _sq(x, nbytes, sqt, bt), nbytes, sqt, bt)
    return xs, out


# --- public API --------------------------------------------------------------


def set_threads(threads: int | None):
    if threads is not None:
        numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))


def _element(G: Group, x) -> AlgebraElement:
    return AlgebraElement(G, int(x))


def _shard_layout(n: int, shard_bits: int):
    nfree = n - 1
    b = min(shard_bits, nfree)
    return b, nfree - b


def _run_walk(G: Group, stop_above: int, threads, shard_bits):
    if G.order > MAX_EXHAUSTIVE_ORDER:
        raise SizeLimitError(
            f"exhaustive enumeration is capped at order {MAX_EXHAUSTIVE_ORDER}; "
            "use exponent_sampled or find_order_witness"
        )
    set_threads(threads)
    T = _word_tables(G)
    b, m = _shard_layout(G.order, shard_bits)
    best, best_x = _walk(G.order, m, 0, 1 << b, T.lt, T.sqt, T.bt, T.sqbit, stop_above)
    if (best < 0).any():
        raise DomainError("squaring chain failed to reach 1")
    return best, best_x


def exponent_exhaustive(G: Group, threads: int | None = None, shard_bits: int = DEFAULT_SHARD_BITS) -> ExponentResult:
    """Exact exponent of V(F2 G) by visiting all 2^(|G|-1) normalised units."""
    t0 = time.perf_counter()
    best, best_x = _run_walk(G, -1, threads, shard_bits)
    top = int(best.max())
    shard = int(np.flatnonzero(best == top)[0])
    return ExponentResult(
        G.label, "exhaustive", 1 << top, _element(G, best_x[shard]),
        samples=1 << (G.order - 1), wall_time=time.perf_counter() - t0,
    )


def check_exponent_divides_4(G: Group, threads: int | None = None, shard_bits: int = DEFAULT_SHARD_BITS) -> DividesFour:
    """Whether every normalised unit satisfies x^4 = 1 (equivalently z^4 = 0
    on the augmentation ideal); otherwise the first offending unit found in
    shard order."""
    best, best_x = _run_walk(G, 2, threads, shard_bits)
    hits = np.flatnonzero(best > 2)
    if len(hits) == 0:
        return DividesFour(True, None)
    return DividesFour(False, _element(G, best_x[hits[0]]))


def estimate_walk_seconds(G: Group, threads: int | None = None) -> float:
    """Rough wall time of a full walk, timed on one shard."""
    set_threads(threads)
    T = _word_tables(G)
    b, m = _shard_layout(G.order, DEFAULT_SHARD_BITS)
    _walk(G.order, 0, 0, 1, T.lt, T.sqt, T.bt, T.sqbit, -1)  # compile
    probe_m = min(m, 20)
    t0 = time.perf_counter()
    _walk(G.order, probe_m, 0, 1, T.lt, T.sqt, T.bt, T.sqbit, -1)
    dt = time.perf_counter() - t0
    per_step = dt / (1 << probe_m)
    nthreads = numba.get_num_threads()
    return per_step * (1 << (G.order - 1)) / nthreads


def verify_gray_walk(G: Group, checkpoints: int, seed: int = 0, shard: int = 0, shard_bits: int = DEFAULT_SHARD_BITS) -> int:
    """Mismatches between incremental and from-scratch state at random steps
    within the first 2^24 steps of one shard."""
    T = _word_tables(G)
    b, m = _shard_layout(G.order, shard_bits)
    rng = np.random.default_rng(seed)
    steps = np.sort(rng.integers(0, 1 << min(m, 24), size=checkpoints))
    return int(_walk_checkpoints(G.order, m, shard, T.lt, T.sqt, T.bt, T.sqbit, steps))


def _python_units(G: Group, count: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        bits = rng.integers(0, 2, size=G.order, dtype=np.uint8)
        bits[0] = 1 ^ (int(bits[1:].sum()) & 1)
        yield AlgebraElement(G, int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little"))


def exponent_sampled(G: Group, n: int, seed: int = 0, threads: int | None = None) -> ExponentResult:
    """Lower bound on the exponent from ``n`` seeded uniform units."""
    if n < 1:
        raise ValueError("n must be positive")
    t0 = time.perf_counter()
    if G.order <= MAX_WORD_ORDER:
        set_threads(threads)
        T = _word_tables(G)
        xs, orders = _sample_log2_orders(G.order, n, seed, T.sqt, T.bt)
        i = int(np.argmax(orders))
        top, witness = int(orders[i]), _element(G, xs[i])
        exp = 1 << top
    else:
        exp, witness = 0, None
        for x in _python_units(G, n, seed):
            o = unit_order(x)
            if o > exp:
                exp, witness = o, x
    return ExponentResult(G.label, "sampled", exp, witness, samples=n, seed=seed,
                          wall_time=time.perf_counter() - t0)


def sparse_pool(G: Group) -> list[int]:
    """{1}, the generators, and all products of two generators."""
    gens = list(G.generators) if G.generators is not None else gc.minimal_generating_set(G)
    pool = [0]
    for g in gens + [G.mul(a, b) for a in gens for b in gens]:
        if g not in pool:
            pool.append(g)
    return pool


def _orders_of(G: Group, masks: list[int]) -> list[int]:
    if G.order <= MAX_WORD_ORDER:
        T = _word_tables(G)
        arr = np.array(masks, dtype=np.uint64)
        return [1 << int(e) for e in log2_orders(arr, T.nbytes, T.sqt, T.bt)]
    return [unit_order(AlgebraElement(G, m)) for m in masks]


def find_order_witness(
    G: Group,
    target: int,
    strategy: str = "sparse-first",
    *,
    sparse_budget: int = SPARSE_BUDGET,
    random_budget: int = RANDOM_BUDGET,
    seed: int = 0,
    threads: int | None = None,
) -> AlgebraElement | None:
    """A unit of order >= ``target``, or None once the budget is spent."""
    if target < 8 or target & (target - 1):
        raise DomainError("target must be a power of 2 that is at least 8")
    if strategy not in ("sparse-first", "random"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "sparse-first":
        pool = sparse_pool(G)
        batch: list[int] = []
        tried = 0
        for size in range(1, 5):
            for combo in itertools.combinations(pool, size):
                if tried >= sparse_budget:
                    break
                tried += 1
                if size % 2 == 1:  # distinct elements: odd support <=> augmentation 1
                    batch.append(sum(1 << g for g in combo))
        for mask, o in zip(batch, _orders_of(G, batch)):
            if o >= target:
                return AlgebraElement(G, mask)
        log.debug("sparse phase: %d candidates, no witness in %s", len(batch), G.label)
    if G.order <= MAX_WORD_ORDER:
        set_threads(threads)
        T = _word_tables(G)
        chunk = 1 << 16
        need = int(math.log2(target))
        for start in range(0, random_budget, chunk):
            count = min(chunk, random_budget - start)
            xs = random_units(G.order, count, seed, start)
            orders = log2_orders(xs, T.nbytes, T.sqt, T.bt)
            hit = np.flatnonzero(orders >= need)
            if len(hit):
                return _element(G, xs[hit[0]])
        return None
    for x in _python_units(G, min(random_budget, PYTHON_RANDOM_BUDGET), seed):
        if unit_order(x) >= target:
            return x
    return None
