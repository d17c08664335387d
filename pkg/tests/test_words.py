import random

import pytest
from hypothesis import given, settings, strategies as st

from raagstab.errors import BudgetExceeded, InputError
from raagstab.graph import cycle_graph
from raagstab.words import (
    abelianization, are_equal, canonical_form, cyclic_reduce, first_letters, format_word,
    inverse, is_cyclically_reduced, is_normal_form, multiply, normalize, parse_word,
    shuffle_class, support,
)
from oracles import free_reduce

C5 = cycle_graph(5)
words = st.lists(st.integers(0, 9), max_size=14).map(tuple)


def w(text):
    return parse_word(C5, text)


def test_parse_and_format():
    assert w("a^3 b^-2") == w("a a a b^-1 b^-1")
    assert format_word(C5, w("a b^-1")) == "a b^-1"
    assert w("1") == () and format_word(C5, ()) == "1"
    for bad in ("a^0", "z", "a^x", "a^"):
        with pytest.raises(InputError):
            parse_word(C5, bad)


def test_normal_form_examples():
    assert normalize(C5, w("a b a^-1")) == w("b")
    assert normalize(C5, w("a c a^-1")) == w("a c a^-1")
    assert normalize(C5, w("a b e a^-1 b^-1")) == w("b e b^-1")
    assert is_normal_form(C5, w("a c a^-1"))
    assert not is_normal_form(C5, w("a b a^-1"))


def test_cyclic_reduce_examples():
    cf = cyclic_reduce(C5, w("c a b c^-1"))
    assert cf.core == w("a b") and cf.conjugator == w("c")
    assert are_equal(C5, cf.conjugator + cf.core + inverse(cf.conjugator), w("c a b c^-1"))
    assert cyclic_reduce(C5, w("a b a^-1")).core == w("b")


def test_shuffle_class_and_canonical():
    cls = shuffle_class(C5, w("a b c"))
    assert cls == {w("a b c"), w("b a c"), w("a c b")}
    assert canonical_form(C5, w("b a c")) == min(cls)
    with pytest.raises(BudgetExceeded):
        shuffle_class(C5, w("a b a b a b e e e"), cap=3)


def test_support_and_abelianization():
    assert support(C5, "a c a^-1") == ("a", "c")
    assert abelianization(C5, w("a a b^-1")) == (2, -1, 0, 0, 0)


def test_first_letters():
    assert set(first_letters(C5, w("a b c"))) == {0, 1}


@given(words, words)
@settings(max_examples=300, deadline=None)
def test_equality_needs_equal_abelianization(u, v):
    if are_equal(C5, u, v):
        assert abelianization(C5, u) == abelianization(C5, v)


@given(words)
@settings(max_examples=300, deadline=None)
def test_normal_form_properties(u):
    nf = normalize(C5, u)
    assert is_normal_form(C5, nf)
    assert normalize(C5, nf) == nf
    assert are_equal(C5, u, nf)
    assert abelianization(C5, nf) == abelianization(C5, u)
    assert len(nf) <= len(u)
    assert canonical_form(C5, u) in shuffle_class(C5, nf)
    assert not normalize(C5, u + inverse(u))


@given(words, words)
@settings(max_examples=200, deadline=None)
def test_multiply_matches_normalize(u, v):
    assert multiply(C5, normalize(C5, u), v) == normalize(C5, u + v)


@given(words)
@settings(max_examples=200, deadline=None)
def test_cyclic_reduction_is_conjugate(u):
    cf = cyclic_reduce(C5, u)
    assert is_cyclically_reduced(C5, cf.core)
    assert are_equal(C5, cf.conjugator + cf.core + inverse(cf.conjugator), u)


@given(st.lists(st.sampled_from([0, 1, 4, 5]), max_size=16).map(tuple))
@settings(max_examples=300, deadline=None)
def test_free_subgroup_matches_free_reduction(u):
    # a and c do not commute, so words in them reduce as in a free group
    assert (not normalize(C5, u)) == (not free_reduce(u))
    assert len(normalize(C5, u)) == len(free_reduce(u))


def test_invalid_codes_rejected():
    with pytest.raises(InputError):
        normalize(C5, (10,))
