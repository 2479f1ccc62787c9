"""The exponent-4 classification as a checkable predicate, and replays of the
lemmas and proof-case identities behind it.

Checks return :class:`CheckOutcome`, which is truthy only on ``pass``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import catalog
from . import engine
from . import group_core as gc
from .algebra import AlgebraElement, coset_transversal, ideal_elements, nilpotency_index, square, unit_order
from .engine import ExponentResult
from .errors import AnomalyError, PreconditionError, SizeLimitError
from .group_core import Group, Subgroup

LEMMA1_NAMES = ("D8", "Q8", "G16_3", "G16_4", "G32_2")


@dataclass
class CheckOutcome:
    name: str
    status: str  # pass | fail | n/a | flag | anomaly
    detail: str = ""
    exhaustive: bool = True

    def __bool__(self):
        return self.status == "pass"

    @classmethod
    def of(cls, name: str, ok: bool, detail: str = "", exhaustive: bool = True) -> "CheckOutcome":
        return cls(name, "pass" if ok else "fail", detail, exhaustive)


@dataclass
class PredicateVerdict:
    group_label: str
    order: int
    is_nonabelian: bool
    nilpotency_class: int
    class2: bool
    frattini_central: bool
    frattini_elem_abelian: bool
    derived_order: int
    frattini_order: int
    predicted_exp4: bool
    computed_exponent: int | None = None
    method: str | None = None
    agreement: bool | None = None


def _h_conditions(G: Group) -> dict:
    F = gc.frattini(G)
    c = gc.nilpotency_class(G)
    return dict(
        is_nonabelian=not G.is_abelian,
        nilpotency_class=c,
        class2=c == 2,
        frattini_central=F.is_central(),
        frattini_elem_abelian=gc.is_elementary_abelian(F),
        derived_order=len(gc.derived_subgroup(G)),
        frattini_order=len(F),
    )


def _predicted(cond: dict) -> bool:
    return (
        cond["is_nonabelian"]
        and cond["class2"]
        and cond["frattini_central"]
        and cond["frattini_elem_abelian"]
        and cond["derived_order"] <= 4
    )


def theorem_predicate(G: Group, result: ExponentResult | None = None) -> PredicateVerdict:
    """Evaluate the classification in flattened form.

    For nonabelian G: exp V = 4 iff G has class 2, Phi(G) is central and
    elementary abelian, and |G'| <= 4.  Abelian groups are outside the
    statement and are always predicted False; their agreement is judged
    against exp V(FG) = exp G instead.

    ``result`` may be exact (exhaustive) or a lower bound.  A lower bound
    only decides agreement when it already exceeds 4.
    """
    cond = _h_conditions(G)
    v = PredicateVerdict(G.label, G.order, predicted_exp4=_predicted(cond), **cond)
    if result is None:
        return v
    v.method = result.method
    if result.exact:
        v.computed_exponent = result.exponent
        if v.is_nonabelian:
            v.agreement = v.predicted_exp4 == (result.exponent == 4)
        else:
            v.agreement = result.exponent == gc.exponent(G)
    elif result.exponent > 4 and v.is_nonabelian:
        v.computed_exponent = result.exponent
        v.agreement = not v.predicted_exp4
    return v


def decomposition_search(G: Group) -> tuple[Subgroup, Subgroup] | None:
    """Find G = H x W with H meeting the class-2 conditions and W abelian of
    exponent <= 4.

    W commutes with H and with itself, so W is central; complements of a
    central W are exactly the subgroups generated by ``x_i w_i`` for a fixed
    generating set ``x_i`` of G and a choice of ``w_i`` in W.  Candidates are
    tried with W by increasing order, then tuples lexicographically.
    """
    if G.order > gc.MAX_SUBGROUP_ORDER:
        raise SizeLimitError(f"decomposition search is capped at order {gc.MAX_SUBGROUP_ORDER}")
    if G.is_abelian:
        return None
    gens = gc.minimal_generating_set(G)
    Z = gc.center(G)
    for W in gc.subgroups_of_abelian(G, Z):
        if gc.exponent(W.as_group()) > 4:
            continue
        target = G.order // len(W)
        wset = W._set
        for ws in itertools.product(W.members, repeat=len(gens)):
            H = gc.subgroup_generated(G, [G.mul(x, w) for x, w in zip(gens, ws)])
            if len(H) != target or any(h in wset for h in H.members[1:]):
                continue
            if _predicted(_h_conditions(H.as_group())):
                return H, W
    return None


def corollary1_check(G: Group) -> CheckOutcome:
    """G' <= Phi(G) <= Z(G), Phi(G) elementary abelian, class 2."""
    D, F, Z = gc.derived_subgroup(G), gc.frattini(G), gc.center(G)
    parts = {
        "G'<=Phi": D.issubset(F),
        "Phi<=Z": F.issubset(Z),
        "Phi elementary abelian": gc.is_elementary_abelian(F),
        "class 2": gc.nilpotency_class(G) == 2,
    }
    failed = [k for k, ok in parts.items() if not ok]
    return CheckOutcome.of(f"corollary1:{G.label}", not failed, ", ".join(failed))


def _lemma1_targets() -> list[tuple[str, Group]]:
    return [(name, catalog.builtin(name).group) for name in LEMMA1_NAMES]


def classify_two_generated(G: Group) -> list[tuple[Subgroup, str | None]]:
    """Each nonabelian 2-generated subgroup with the listed name it matches."""
    targets = _lemma1_targets()
    out = []
    for S in gc.two_generated_nonabelian_subgroups(G):
        H = S.as_group()
        match = next((name for name, K in targets if gc.is_isomorphic(H, K)), None)
        out.append((S, match))
    return out


def lemma1_subgroup_classification(G: Group) -> CheckOutcome:
    """Every nonabelian 2-generated subgroup H is one of the five listed
    groups and satisfies H' <= Phi(H) <= Z(H)."""
    problems = []
    counts: dict[str, int] = {}
    for S, match in classify_two_generated(G):
        H = S.as_group()
        if match is None:
            problems.append(f"unlisted subgroup of order {len(S)}")
            continue
        counts[match] = counts.get(match, 0) + 1
        if not (gc.derived_subgroup(H).issubset(gc.frattini(H)) and gc.frattini(H).issubset(gc.center(H))):
            problems.append(f"{match} copy violates H'<=Phi(H)<=Z(H)")
    detail = "; ".join(problems) if problems else ", ".join(f"{k}:{v}" for k, v in sorted(counts.items()))
    return CheckOutcome.of(f"lemma1:{G.label}", not problems, detail)


def lemma2_hypotheses(G: Group) -> bool:
    F, D = gc.frattini(G), gc.derived_subgroup(G)
    return (
        not G.is_abelian
        and F.is_central()
        and gc.is_elementary_abelian(F)
        and D.issubset(F)
        and len(D) <= 4
    )


def omega_cubed_vanishes(N: Subgroup) -> bool:
    """Every product of three augmentation-ideal elements of F2[N] is zero."""
    elems = ideal_elements(N)
    return all(not (x * y * z) for x in elems for y in elems for z in elems)


def lemma2_check(
    G: Group,
    max_exhaustive_order: int = 16,
    samples: int = 10_000,
    seed: int = 0,
    threads: int | None = None,
) -> CheckOutcome:
    name = f"lemma2:{G.label}"
    if not lemma2_hypotheses(G):
        return CheckOutcome(name, "n/a", "hypotheses not met")
    notes = []
    reps = coset_transversal(gc.frattini(G))
    for gi, gj in itertools.combinations(reps, 2):
        z = AlgebraElement(G, 1 ^ (1 << G.commutator(gj, gi)))
        if nilpotency_index(z) > 2:
            return CheckOutcome(name, "fail", f"1+({gj},{gi}) has nilpotency index > 2")
    D = gc.derived_subgroup(G)
    if len(D) == 4 and gc.is_elementary_abelian(D):
        if not omega_cubed_vanishes(D):
            return CheckOutcome(name, "fail", "omega(FG')^3 != 0")
        notes.append("omega(FG')^3=0")
    if G.order <= max_exhaustive_order:
        r = engine.exponent_exhaustive(G, threads)
        return CheckOutcome.of(name, r.exponent == 4, "; ".join(notes + [f"exhaustive exp={r.exponent}"]))
    r = engine.exponent_sampled(G, samples, seed, threads)
    w = engine.find_order_witness(G, 8, random_budget=0, seed=seed)
    if w is not None or r.exponent > 4:
        return CheckOutcome(name, "fail", "found a unit of order > 4", exhaustive=False)
    notes.append(f"sampled lower bound {r.exponent} over {samples}, no sparse order-8 witness")
    return CheckOutcome(name, "pass", "; ".join(notes), exhaustive=False)


def lemma3_closure_check(
    H: Group,
    cyclic_order: int,
    max_exhaustive_order: int = 32,
    samples: int = 10_000,
    seed: int = 0,
    threads: int | None = None,
) -> CheckOutcome:
    """exp V(F(H x C_k)) = 4 for k in {2, 4}, given exp V(FH) = 4."""
    if cyclic_order not in (2, 4):
        raise ValueError("cyclic_order must be 2 or 4")
    G = gc.direct_product(H, catalog.cyclic(cyclic_order))
    name = f"lemma3:{G.label}"
    if H.order <= engine.MAX_EXHAUSTIVE_ORDER and H.order <= max_exhaustive_order:
        if engine.exponent_exhaustive(H, threads).exponent != 4:
            return CheckOutcome(name, "n/a", f"exp V(F{H.label}) != 4")
    if G.order <= max_exhaustive_order:
        res = engine.check_exponent_divides_4(G, threads)
        detail = "bounded-exhaustive walk"
        if not res.holds:
            detail += f"; unit of order {unit_order(res.counterexample)} found"
        return CheckOutcome.of(name, res.holds, detail)
    r = engine.exponent_sampled(G, samples, seed, threads)
    ok = r.exponent <= 4
    return CheckOutcome.of(name, ok, f"sampled fallback: lower bound {r.exponent} over {samples}", exhaustive=False)


def lemma4_hypotheses(G: Group) -> bool:
    D = gc.derived_subgroup(G)
    return D.is_central() and gc.is_elementary_abelian(D) and len(D) >= 8


def lemma4_witness(G: Group, *, random_budget: int = engine.RANDOM_BUDGET, seed: int = 0) -> AlgebraElement:
    """A unit of order >= 8 when G' is central elementary abelian of order >= 8.

    Raises PreconditionError when the hypotheses fail and AnomalyError when
    no witness is found within budget.
    """
    if not lemma4_hypotheses(G):
        raise PreconditionError(f"{G.label}: G' is not central elementary abelian of order >= 8")
    w = engine.find_order_witness(G, 8, random_budget=random_budget, seed=seed)
    if w is None:
        raise AnomalyError(f"{G.label}: no unit of order >= 8 found within budget")
    return w


def proof_case_witnesses() -> list[CheckOutcome]:
    """Identities from the case analysis, evaluated in the relevant algebras."""
    out = []

    H = catalog.builtin("G16_3").group
    x = AlgebraElement.parse(H, "1 + g + h")
    lhs = x ** 4 + AlgebraElement.one(H)
    rhs = AlgebraElement.parse(H, "(gh)^2 + (hg)^2 + g^3h + ghg^2 + g^2hg + hg^3 + g^2 + hg^2h")
    out.append(CheckOutcome.of("witness:a case A expansion", lhs == rhs,
                               f"x^4+1 {'=' if lhs == rhs else '!='} expansion; order(x)={unit_order(x)}"))

    e = H.element
    ok_b = H.commutator(e("h"), e("g^2")) == 0 and e("(gh)^2") == e("(hg)^2")
    out.append(CheckOutcome.of("witness:b case A relations", ok_b, "(h,g^2)=1 and (gh)^2=(hg)^2 in G16_3"))

    B = catalog.builtin("CaseB").group
    y = AlgebraElement.parse(B, "1 + g + gh")
    ok_c = square(y) == AlgebraElement.parse(B, "g^2 + g^2h + h^3") and y ** 4 == AlgebraElement.one(B)
    out.append(CheckOutcome.of("witness:c case B square", ok_c, f"|CaseB|={B.order}, order(y)={unit_order(y)}"))

    K = catalog.builtin("G32_6").group
    w = AlgebraElement.parse(K, "1 + g + gh")
    ok_d = square(w) == AlgebraElement.parse(K, "1 + g^2 + (gh)^2 + g^2h + ghg") and w ** 4 != AlgebraElement.one(K)
    out.append(CheckOutcome.of("witness:d order-8 unit in G32_6", ok_d, f"order(w)={unit_order(w)}"))

    ok_e = gc.is_isomorphic(catalog.builtin("Case2").group, catalog.builtin("G32_2").group)
    out.append(CheckOutcome.of("witness:e case 2 is G32_2", ok_e))

    ok_f = gc.is_isomorphic(catalog.builtin("Case4").group, catalog.builtin("G16_4").group)
    out.append(CheckOutcome.of("witness:f case 4 is G16_4", ok_f))
    return out
