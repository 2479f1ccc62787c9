"""Acceptance gate: one test and one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the PASS/FAIL lines are
printed in the terminal summary.  Criterion 5 walks 2^31 units twice and
only runs when NORMUNITS_HEAVY=1.
"""

import time

import numpy as np
import pytest

from conftest import HEAVY
from normunits import algebra as alg
from normunits import catalog, cli, engine
from normunits import group_core as gc
from normunits.algebra import AlgebraElement
from normunits.catalog import Presentation, builtin, from_presentation
from normunits.theorem import lemma3_closure_check, lemma4_witness, proof_case_witnesses, theorem_predicate

CASES = 10_000
SEED = 20240611


def test_criterion_01_presentation_orders(verdict):
    t0 = time.perf_counter()
    orders = {}
    for name, (gens, rels) in catalog.DISPLAYED.items():
        orders[name] = from_presentation(Presentation.from_strings(gens.split(), rels)).order
    dt = time.perf_counter() - t0
    want = {"G16_3": 16, "G16_4": 16, "G32_2": 32, "G32_6": 32}
    ok = orders == want and dt < 1.0
    detail = ", ".join(f"{k}={v}" for k, v in orders.items()) + f"; {dt:.3f}s"
    assert verdict(1, "displayed presentations enumerate to 16, 16, 32, 32", ok, detail), detail


def test_criterion_02_structure_identifications(verdict):
    t0 = time.perf_counter()
    checks = {
        "G16_4~C4:C4": gc.is_isomorphic(builtin("G16_4").group, catalog.c4_by_c4()),
        "Case2~G32_2": gc.is_isomorphic(builtin("Case2").group, builtin("G32_2").group),
        "Case4~G16_4": gc.is_isomorphic(builtin("Case4").group, builtin("G16_4").group),
    }
    dt = time.perf_counter() - t0
    ok = all(checks.values()) and dt < 5.0
    detail = ", ".join(f"{k}:{v}" for k, v in checks.items()) + f"; {dt:.3f}s"
    assert verdict(2, "structure identifications", ok, detail), detail


def test_criterion_03_proof_case_identities(verdict):
    t0 = time.perf_counter()
    outs = proof_case_witnesses()
    dt = time.perf_counter() - t0
    bad = [o.name for o in outs if not o]
    ok = len(outs) == 6 and not bad and dt < 1.0
    assert verdict(3, "proof-case identities (a)-(f)", ok, f"failed={bad}; {dt:.3f}s"), bad


def test_criterion_04_exhaustive_exponents(verdict):
    exps = {n: engine.exponent_exhaustive(builtin(n).group).exponent
            for n in ("D8", "Q8", "G16_3", "G16_4", "D8xC2", "Q8xC2")}
    K = builtin("G32_6").group
    w = AlgebraElement.parse(K, "1 + g + gh")
    alg.unit_order(w)  # builds the per-group squaring tables
    best = min(_timed(lambda: alg.unit_order(w)) for _ in range(5))
    order = alg.unit_order(w)
    ok = all(v == 4 for v in exps.values()) and order == 8 and best < 1e-3
    detail = f"{exps}; order(1+g+gh)={order} in {best * 1e6:.0f}us"
    assert verdict(4, "exhaustive exponents and the order-8 witness", ok, detail), detail


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


@pytest.mark.heavy
def test_criterion_05_heavy_gate(verdict):
    t0 = time.perf_counter()
    g32 = engine.check_exponent_divides_4(builtin("G32_2").group)
    l3 = lemma3_closure_check(builtin("D8").group, 4, max_exhaustive_order=32)
    dt = time.perf_counter() - t0
    ok = g32.holds and bool(l3) and l3.exhaustive
    detail = f"G32_2 divides-4={g32.holds}, lemma3(D8,4)={l3.status}; {dt:.0f}s"
    assert verdict(5, "heavy mode: order-32 bounded walks", ok, detail), detail


if not HEAVY:
    def test_criterion_05_heavy_gate_not_enabled(verdict):
        line = "criterion  5: SKIP  heavy mode not enabled (set NORMUNITS_HEAVY=1)"
        from conftest import ACCEPTANCE_LINES

        ACCEPTANCE_LINES.append(line)
        pytest.skip("set NORMUNITS_HEAVY=1")


def test_criterion_06_grand_agreement(verdict):
    # the classification concerns nonabelian groups; abelian ones are criterion 9
    names = [n for n in catalog.DEFAULT_CATALOG if builtin(n).group.order <= 16]
    names += [n for n in ("CaseA", "Case4") if n not in names]
    disagree, checked = [], 0
    for n in names:
        G = builtin(n).group
        if G.is_abelian:
            continue
        r = engine.exponent_exhaustive(G)
        v = theorem_predicate(G, r)
        checked += 1
        if v.predicted_exp4 != (r.exponent == 4):
            disagree.append(n)
    ok = checked > 0 and not disagree
    detail = f"{checked} nonabelian groups, disagreements={disagree}"
    assert verdict(6, "predicted_exp4 iff exhaustive exponent 4", ok, detail), detail


def test_criterion_07_lemma4_instance(verdict):
    t0 = time.perf_counter()
    w = lemma4_witness(builtin("E64").group)
    order = alg.unit_order(w)
    dt = time.perf_counter() - t0
    ok = order >= 8
    detail = f"support {w.support()}, order {order}; {dt:.2f}s"
    assert verdict(7, "unit of order >= 8 in F E64", ok, detail), detail


PROPERTY_GROUPS = ("D8", "Q8", "G16_3", "G16_4", "G32_2", "G32_6", "E64", "D8xD8")


def _random_mask(rng, n):
    return int.from_bytes(rng.bytes((n + 7) // 8), "little") & ((1 << n) - 1)


def _e1_holds(G, a, b, c):
    comm, mul = G.commutator, G.mul
    ab, ac = comm(a, b), comm(a, c)
    first = comm(a, mul(b, c)) == mul(mul(ab, ac), comm(ab, c))
    second = comm(mul(a, b), c) == mul(mul(ac, comm(ac, b)), comm(b, c))
    return first and second


def test_criterion_08_property_suites(verdict):
    failures = {}
    for name in PROPERTY_GROUPS:
        G = builtin(name).group
        n = G.order
        rng = np.random.default_rng([SEED, n])
        Z = gc.center(G)
        one = AlgebraElement.one(G)
        bad = {"square": 0, "brauer": 0, "fourth": 0, "E1": 0, "reach1": 0}
        for _ in range(CASES):
            m = _random_mask(rng, n)
            x = AlgebraElement(G, m)
            sq = alg.square(x)
            bad["square"] += sq != x * x
            bad["brauer"] += alg.brauer_square(x, Z) != sq
            z = AlgebraElement(G, m ^ (m.bit_count() & 1))
            bad["fourth"] += (one + z) ** 4 != one + z ** 4
            u = one + z
            k = 0
            while u != one and k <= 2 * n:
                u = alg.square(u)
                k += 1
            bad["reach1"] += u != one
            a, b, c = (int(v) for v in rng.integers(0, n, 3))
            bad["E1"] += not _e1_holds(G, a, b, c)
        if any(bad.values()):
            failures[name] = {k: v for k, v in bad.items() if v}
    ok = not failures
    detail = f"{CASES} cases x {len(PROPERTY_GROUPS)} groups; failures={failures}"
    assert verdict(8, "property suites", ok, detail), detail


def test_criterion_09_abelian_law(verdict):
    names = [n for n in catalog.DEFAULT_CATALOG if builtin(n).group.order <= 16 and builtin(n).group.is_abelian]
    bad = {}
    for n in names:
        G = builtin(n).group
        got, want = engine.exponent_exhaustive(G).exponent, gc.exponent(G)
        if got != want:
            bad[n] = (got, want)
    ok = bool(names) and not bad
    assert verdict(9, "abelian groups: max unit order = exp G", ok, f"{len(names)} groups, mismatches={bad}"), bad


def test_criterion_10_determinism(verdict, tmp_path):
    outs = []
    for threads in (1, 2, 1):
        path = tmp_path / f"r{len(outs)}.tsv"
        code = cli.main(["--seed", "7", "--threads", str(threads), "--out", str(path)])
        outs.append((code, path.read_bytes()))
    codes = {c for c, _ in outs}
    same = len({b for _, b in outs}) == 1
    ok = same and codes == {0}
    assert verdict(10, "byte-identical reports across runs and thread counts", ok, f"exit codes {sorted(codes)}"), codes
