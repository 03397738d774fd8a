import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unifree.action import (
    SetCarrier,
    SetMAction,
    all_actions,
    counit_extension,
    lift_action_to_zeta,
    orbit_closure,
    restrict,
    verify_extension_uniqueness,
    zeta_of_map,
    zeta_of_set,
)
from unifree.errors import BoundExceeded, EmptyCarrier, PreconditionViolated
from unifree.monoid import EnumerationBound, Monoid, small_monoids

B = EnumerationBound(max_elements=6)


def brute_force_action_count(m: Monoid, n: int) -> int:
    """Count assignments element -> self-map that respect identity and products."""
    pts = range(n)
    maps = list(itertools.product(pts, repeat=n))
    elems = m.enumerate()
    count = 0
    for choice in itertools.product(maps, repeat=len(elems)):
        img = dict(zip(elems, choice))
        if img[m.identity] != tuple(pts):
            continue
        if all(
            img[m.multiply(a, b)] == tuple(img[a][img[b][x]] for x in pts)
            for a in elems
            for b in elems
        ):
            count += 1
    return count


def involutions(n: int) -> int:
    return sum(math.comb(n, 2 * k) * math.prod(range(2 * k - 1, 0, -2)) for k in range(n // 2 + 1))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_action_counts_match_brute_force_for_small_tables(n):
    for order in (1, 2, 3):
        for m in small_monoids(order):
            assert sum(1 for _ in all_actions(m, n)) == brute_force_action_count(m, n), (m.table, n)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_action_counts_closed_forms(n):
    assert sum(1 for _ in all_actions(Monoid.naturals(), n)) == n**n
    assert sum(1 for _ in all_actions(Monoid.free_monoid(1), n)) == n**n
    assert sum(1 for _ in all_actions(Monoid.integers(), n)) == math.factorial(n)
    assert sum(1 for _ in all_actions(Monoid.cyclic(2), n)) == involutions(n)
    assert sum(1 for _ in all_actions(Monoid.trivial(), n)) == 1


def test_enumerated_actions_satisfy_laws():
    for m in small_monoids(3) + [Monoid.cyclic(3), Monoid.integers()]:
        for psi in all_actions(m, 3):
            assert psi.law_failures(B) == []


def test_zeta_on_naturals_is_shift_of_a_column():
    z = zeta_of_set(Monoid.naturals(), SetCarrier.finite(["s"]), EnumerationBound(3))
    assert [z.act(1, (a, "s")) for a in range(3)] == [(1, "s"), (2, "s"), (3, "s")]
    assert z.eta("s") == (0, "s")


def test_zeta_functor_laws():
    m = Monoid.cyclic(3)
    S, T, U = (SetCarrier.finite(range(k)) for k in (2, 3, 2))
    ident = zeta_of_map(m, {0: 0, 1: 1}, S, S)
    assert all(ident(x) == x for x in ident.source.carrier) and ident.passes
    f, g = {0: 2, 1: 0}, {0: 1, 1: 0, 2: 1}
    zf, zg = zeta_of_map(m, f, S, T), zeta_of_map(m, g, T, U)
    zgf = zeta_of_map(m, {x: g[f[x]] for x in S}, S, U)
    assert all(zgf(x) == zg(zf(x)) for x in zf.source.carrier)
    assert zf.passes and zg.passes


def test_lift_to_zeta_example_swap():
    z2 = Monoid.cyclic(2)
    psi = SetMAction.from_table(z2, SetCarrier.finite("ab"), {1: {"a": "b", "b": "a"}})
    lift = lift_action_to_zeta(psi)
    assert lift.passes and lift.surjective_on_bound
    assert lift((1, "a")) == "b"


def test_counit_extension_and_uniqueness():
    z2 = Monoid.cyclic(2)
    psi = SetMAction.from_table(z2, SetCarrier.finite("ab"), {1: {"a": "b", "b": "a"}})
    S = SetCarrier.finite(["s"])
    ext = counit_extension(psi, {"s": "a"}, S)
    assert ext.passes and ext.triangle_ok
    assert ext((1, "s")) == "b"
    assert verify_extension_uniqueness(psi, {"s": "a"}, ext, S)
    assert not verify_extension_uniqueness(psi, {"s": "a"}, lambda p: "a", S)


def test_orbit_closure_and_restrict():
    n = Monoid.naturals()
    psi = SetMAction.from_table(n, SetCarrier.finite(range(5)), {1: {0: 1, 1: 2, 2: 2, 3: 4, 4: 3}})
    assert orbit_closure(psi, [0]) == {0, 1, 2}
    sub = restrict(psi, orbit_closure(psi, [3]))
    assert sub.carrier.points == (3, 4)
    assert sub.law_failures(B) == []


def test_orbit_closure_bound():
    shift = SetMAction(Monoid.naturals(), SetCarrier.naturals(EnumerationBound(5)), lambda m, x: x + m)
    assert orbit_closure(shift, [2], EnumerationBound(5)) == {2, 3, 4}
    with pytest.raises(BoundExceeded):
        orbit_closure(shift, [2], EnumerationBound(5), strict=True)


def test_orbit_closure_leaving_complete_carrier():
    bad = SetMAction(Monoid.naturals(), SetCarrier.finite([0, 1]), lambda m, x: x + m)
    with pytest.raises(PreconditionViolated):
        orbit_closure(bad, [0])


def test_empty_inputs():
    with pytest.raises(EmptyCarrier):
        SetCarrier.finite([])
    psi = SetMAction.trivial(Monoid.cyclic(2), SetCarrier.finite([0]))
    with pytest.raises(EmptyCarrier):
        orbit_closure(psi, [])


@settings(max_examples=40)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=4), st.integers(1, 8))
def test_lift_to_zeta_property_naturals(images, size):
    n = len(images)
    images = [i % n for i in images]
    psi = SetMAction.from_table(Monoid.naturals(), SetCarrier.finite(range(n)), {1: dict(enumerate(images))})
    lift = lift_action_to_zeta(psi, EnumerationBound(size))
    assert lift.passes and lift.surjective_on_bound
