import pytest
from hypothesis import given, strategies as st

from normunits.errors import ParseError
from normunits.words import commutator, format_word, free_reduce, inverse, parse_word, power

NAMES = ["g", "h"]
letters = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=20)


def test_basic_parse():
    assert parse_word("gh", NAMES) == (1, 2)
    assert parse_word("G", NAMES) == (-1,)
    assert parse_word("g^3", NAMES) == (1, 1, 1)
    assert parse_word("(gh)^2", NAMES) == (1, 2, 1, 2)
    assert parse_word("1", NAMES) == ()


def test_commutator_convention():
    # [x,y] = x^-1 y^-1 x y
    assert parse_word("[g,h]", NAMES) == (-1, -2, 1, 2)


def test_equation_becomes_relator():
    assert parse_word("hgh = g^3", NAMES) == free_reduce((2, 1, 2, -1, -1, -1))


def test_parse_error_carries_line():
    with pytest.raises(ParseError) as err:
        parse_word("g^", NAMES, line=7)
    assert err.value.line == 7
    assert "line 7" in str(err.value)


@pytest.mark.parametrize("bad", ["x", "(g", "[g,h", "g^0", "g^-1", "g==h"])
def test_malformed(bad):
    with pytest.raises(ParseError):
        parse_word(bad, NAMES)


@given(letters)
def test_word_times_inverse_reduces_to_empty(w):
    assert free_reduce(tuple(w) + inverse(w)) == ()


@given(letters)
def test_reduce_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert all(a != -b for a, b in zip(r, r[1:]))


@given(letters)
def test_format_parse_round_trip(w):
    r = free_reduce(w)
    assert free_reduce(parse_word(format_word(r, NAMES), NAMES)) == r


@given(letters, letters)
def test_commutator_inverse(u, v):
    assert free_reduce(inverse(commutator(u, v))) == free_reduce(commutator(v, u))


def test_power():
    assert power((1, 2), 3) == (1, 2, 1, 2, 1, 2)
