import pytest

import oracles
from normunits import catalog, group_core as gc
from normunits.catalog import Presentation, builtin, enumerate_cosets, from_presentation
from normunits.errors import EnumerationError, ParseError, ValidationError


@pytest.mark.parametrize("name", sorted(oracles.SYMPY_PRESENTATION_ORDERS))
def test_presentation_orders_match_reference(name):
    if name in ("G32_2_displayed", "G32_6_displayed"):
        gens, rels = catalog.DISPLAYED[name.split("_displayed")[0]]
    elif name in catalog.PROOF_CASES:
        gens, rels = catalog.PROOF_CASES[name]
    else:
        gens, rels = catalog._PRESENTED[name]
    G = from_presentation(Presentation.from_strings(gens.split(), rels))
    assert G.order == oracles.SYMPY_PRESENTATION_ORDERS[name]


def test_cyclic_presentation():
    P = Presentation.from_strings(["a"], ["a^8"])
    assert from_presentation(P).order == 8


def test_coset_cap():
    P = Presentation.from_strings(["a", "b"], ["a^2", "b^2"])  # infinite dihedral
    with pytest.raises(EnumerationError):
        enumerate_cosets(P, coset_cap=200)


def test_generators_evaluate_words():
    G = builtin("D8").group
    g, h = G.element("g"), G.element("h")
    assert G.element("g^4") == 0 and G.element("h^2") == 0
    assert G.element("hgh") == G.element("g^3")
    assert g != h


@pytest.mark.parametrize("name", catalog.DEFAULT_CATALOG)
def test_default_catalog_builds(name):
    e = builtin(name)
    if e.expected_order is not None:
        assert e.group.order == e.expected_order


def test_builtin_g32_2_structure():
    G = builtin("G32_2").group
    assert G.order == 32
    assert gc.is_isomorphic(G, builtin("Case2").group)
    assert gc.exponent(G) == 4


def test_builtin_g32_6_has_class_three():
    G = builtin("G32_6").group
    assert gc.nilpotency_class(G) == 3


def test_case_b_is_g16_3():
    assert gc.is_isomorphic(builtin("CaseB").group, builtin("G16_3").group)


def test_cayley_round_trip(tmp_path):
    G = builtin("G16_4").group
    path = tmp_path / "g.txt"
    catalog.save_cayley_table(G, path)
    e = catalog.load_cayley_table(path)
    assert e.group.rows == G.rows
    assert e.group.label == "G16_4"
    assert catalog.load_catalog_file(path).group.rows == G.rows


def test_presentation_file(tmp_path):
    path = tmp_path / "q8.txt"
    path.write_text("gens 2\n# quaternion\ng1^4\n\ng1^2 = g2^2\nG2g1g2 = g1^3\n")
    e = catalog.load_catalog_file(path)
    assert e.group.order == 8
    assert gc.is_isomorphic(e.group, builtin("Q8").group)


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("order x\n", 1),
        ("order 2\n0 1\n", 3),
        ("order 2\n0 1\n1\n", 3),
        ("order 2\n0 1\n1 z\n", 3),
        ("order 2\n0 1\n1 5\n", 3),
        ("gens 2\ng1^4\ng1g3\n", 3),
        ("groups 2\n", 1),
    ],
)
def test_parse_errors_have_line_numbers(tmp_path, text, line):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(ParseError) as err:
        catalog.load_catalog_file(path)
    assert err.value.line == line


def test_non_group_table_file(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("order 3\n0 1 2\n1 0 0\n2 2 1\n")
    with pytest.raises(ValidationError):
        catalog.load_catalog_file(path)


def test_semidirect_inversion_action():
    G = catalog.c4_by_c4()
    assert G.order == 16
    assert len(gc.center(G)) == 4
