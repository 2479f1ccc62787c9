import pytest
from hypothesis import given, settings, strategies as st

import oracles
from normunits import algebra as alg
from normunits import group_core as gc
from normunits.algebra import AlgebraElement
from normunits.catalog import builtin
from normunits.errors import DomainError, PreconditionError

NAMES = ["D8", "Q8", "G16_3", "G16_4", "G32_6", "D8xC4", "E64"]


@st.composite
def elements(draw, names=NAMES, unit=None):
    G = builtin(draw(st.sampled_from(names))).group
    mask = draw(st.integers(0, (1 << G.order) - 1))
    if unit is True and mask.bit_count() % 2 == 0:
        mask ^= 1
    if unit is False and mask.bit_count() % 2 == 1:
        mask ^= 1
    return AlgebraElement(G, mask)


def as_set(x):
    return frozenset(x.support())


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_mul_matches_naive(data):
    x = data.draw(elements())
    y = AlgebraElement(x.group, data.draw(st.integers(0, (1 << x.group.order) - 1)))
    assert as_set(x * y) == oracles.alg_mul(x.group.rows, as_set(x), as_set(y))


@settings(max_examples=150, deadline=None)
@given(elements())
def test_square_is_self_product(x):
    assert alg.square(x) == x * x


@settings(max_examples=100, deadline=None)
@given(elements(unit=True))
def test_unit_order_matches_naive(x):
    if x.group.order > 16:
        return
    assert alg.unit_order(x) == oracles.unit_order(x.group.rows, as_set(x))


@settings(max_examples=100, deadline=None)
@given(elements(unit=False))
def test_fourth_power_of_one_plus_nilpotent(z):
    one = AlgebraElement.one(z.group)
    assert (one + z) ** 4 == one + z ** 4


@settings(max_examples=100, deadline=None)
@given(elements())
def test_brauer_square_over_center(x):
    Z = gc.center(x.group)
    assert alg.brauer_square(x, Z) == alg.square(x)


def test_decompose_recombine():
    G = builtin("G16_3").group
    x = AlgebraElement.parse(G, "1 + g + gh + h + g^2h")
    d = alg.decompose(x, gc.frattini(G))
    assert d.transversal[0] == 0
    assert d.recombine() == x
    assert all(set(u.support()) <= set(gc.frattini(G).members) for u in d.components)


def test_brauer_requires_central():
    G = builtin("D8").group
    H = gc.subgroup_generated(G, [G.element("h")])
    with pytest.raises(PreconditionError):
        alg.brauer_square(AlgebraElement.one(G), H)


def test_augmentation_and_units():
    G = builtin("Q8").group
    assert alg.is_unit(AlgebraElement.parse(G, "1 + g + h"))
    assert not alg.is_unit(AlgebraElement.parse(G, "1 + g"))
    with pytest.raises(DomainError):
        alg.unit_order(AlgebraElement.parse(G, "1 + g"))


def test_known_orders():
    G = builtin("G16_3").group
    assert alg.unit_order(AlgebraElement.parse(G, "1 + g + h")) == 4
    W = builtin("G32_6").group
    assert alg.unit_order(AlgebraElement.parse(W, "1 + g + gh")) == 8


def test_square_of_order_eight_witness():
    W = builtin("G32_6").group
    w = AlgebraElement.parse(W, "1 + g + gh")
    assert alg.square(w) == AlgebraElement.parse(W, "1 + g^2 + ghgh + g^2h + ghg")


def test_nilpotency_index():
    G = builtin("C2").group
    z = AlgebraElement.parse(G, "1 + a")
    assert alg.nilpotency_index(z) == 2
    assert alg.nilpotency_index(AlgebraElement.zero(G)) == 1
    with pytest.raises(DomainError):
        alg.nilpotency_index(AlgebraElement.one(G))


def test_lie_bracket_vanishes_on_commuting():
    G = builtin("D8").group
    g, g2 = AlgebraElement.parse(G, "g"), AlgebraElement.parse(G, "g^2")
    assert not alg.lie_bracket(g, g2)
    assert alg.lie_bracket(g, AlgebraElement.parse(G, "h"))


def test_group_mismatch():
    a = AlgebraElement.one(builtin("D8").group)
    b = AlgebraElement.one(builtin("Q8").group)
    with pytest.raises(DomainError):
        a * b


def test_ideal_elements_count():
    G = builtin("D8xD8").group
    N = gc.derived_subgroup(G)
    els = alg.ideal_elements(N)
    assert len(els) == 2 ** (len(N) - 1)
    assert all(alg.augmentation(z) == 0 for z in els)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_distributive_and_associative(data):
    x = data.draw(elements(["D8", "G16_4", "G32_6"]))
    n = x.group.order
    y = AlgebraElement(x.group, data.draw(st.integers(0, (1 << n) - 1)))
    z = AlgebraElement(x.group, data.draw(st.integers(0, (1 << n) - 1)))
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
