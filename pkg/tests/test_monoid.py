import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unifree.errors import ElementNotInMonoid, InputError
from unifree.monoid import (
    EnumerationBound,
    Kind,
    Monoid,
    check_monoid_axioms,
    monoid_by_name,
    reduce_group_word,
    small_monoids,
)

# Monoids of order n up to isomorphism (OEIS A058129): 1, 2, 7, 35.
MONOID_COUNTS = {1: 1, 2: 2, 3: 7, 4: 35}


@pytest.mark.parametrize("order,count", sorted(MONOID_COUNTS.items()))
def test_small_monoid_census(order, count):
    ms = small_monoids(order)
    assert len(ms) == count
    assert all(check_monoid_axioms(m).passed for m in ms)


def test_cyclic_arithmetic():
    z5 = Monoid.cyclic(5)
    assert z5.multiply(3, 4) == 2
    assert z5.identity == 0
    assert z5.enumerate() == [0, 1, 2, 3, 4]


def test_integer_enumeration_order():
    z = Monoid.integers()
    assert z.enumerate(EnumerationBound(7)) == [0, 1, -1, 2, -2, 3, -3]


def test_free_monoid_length_then_lex():
    f2 = Monoid.free_monoid(2)
    words = f2.enumerate(EnumerationBound(7))
    assert [f2.format(w) for w in words] == ["1", "a", "b", "aa", "ab", "ba", "bb"]


def test_free_group_reduction():
    g = Monoid.free_group(2)
    a, A = g.parse("a"), g.parse("A")
    assert g.multiply(a, A) == ()
    assert g.format(g.parse("abBa")) == "aa"
    assert reduce_group_word((1, 2, -2, -1)) == ()


def test_free_group_enumeration_skips_unreduced():
    g = Monoid.free_group(1)
    assert [g.format(w) for w in g.enumerate(EnumerationBound(5))] == ["1", "a", "A", "aa", "AA"]


def test_word_length_bound():
    assert Monoid.naturals().enumerate(EnumerationBound(64, max_word_length=4)) == [0, 1, 2, 3, 4]


def test_bad_elements_rejected():
    with pytest.raises(ElementNotInMonoid):
        Monoid.cyclic(3).multiply(1, 3)
    with pytest.raises(ElementNotInMonoid):
        Monoid.naturals().check(-1)
    with pytest.raises(ElementNotInMonoid):
        Monoid.free_monoid(1).parse("A")


def test_finite_table_axioms_detect_failure():
    bad = Monoid.finite_table([[0, 1], [1, 1]], identity=1)
    assert not check_monoid_axioms(bad).passed


@pytest.mark.parametrize("name", ["trivial", "N", "Z", "Z3", "free2", "freegroup1"])
def test_monoid_by_name_roundtrip(name):
    m = monoid_by_name(name)
    assert Monoid.from_json(m.to_json()) == m


def test_unknown_monoid_name():
    with pytest.raises(InputError):
        monoid_by_name("quaternions")


@given(st.lists(st.integers(-2, 2).filter(bool), max_size=8), st.lists(st.integers(-2, 2).filter(bool), max_size=8))
def test_free_group_product_is_reduced_and_associative(u, v):
    g = Monoid.free_group(2)
    a, b = reduce_group_word(u), reduce_group_word(v)
    ab = g.multiply(a, b)
    assert reduce_group_word(ab) == ab
    inv = tuple(-x for x in reversed(b))
    assert g.multiply(ab, inv) == a


@settings(max_examples=50)
@given(st.integers(1, 4), st.data())
def test_small_monoid_associativity_sampled(order, data):
    m = data.draw(st.sampled_from(small_monoids(order)))
    x, y, z = (data.draw(st.integers(0, order - 1)) for _ in range(3))
    assert m.multiply(m.multiply(x, y), z) == m.multiply(x, m.multiply(y, z))
    assert m.kind is Kind.FINITE_TABLE
