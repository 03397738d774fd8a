import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import BARE_Z, DESCRIPTIONS, HAIRY_Z, LOOP, RAY, TWO_CYCLE
from unifree.errors import (
    EmptyCarrier,
    InputError,
    MalformedTemplate,
    NoFixedPoint,
    NotEnoughNaturalComponents,
)
from unifree.funcgraph import (
    HAS_CYCLE,
    NATURAL,
    OMEGA,
    UNBOUNDED_BELOW,
    FiniteCore,
    FiniteSelfMap,
    Natural,
    Periodic,
    SelfMapDescription,
    all_self_maps,
    brute_force_lifting_exists,
    classify_component,
    decide_universality,
    grading_contradiction,
    lift_finite_map_to_nu,
    lift_with_fixed_point,
    nu,
    nu_description,
    truncate,
    vertex_id,
)


def test_finite_self_map_basics():
    f = FiniteSelfMap.from_list([1, 2, 2, 0])
    assert f.iterate(0, 5) == 2
    assert f.fixed_points() == [2]
    assert len(f.components()) == 1
    assert FiniteSelfMap.from_json(f.to_json()) == f


def test_finite_self_map_rejects_partial():
    with pytest.raises(InputError):
        FiniteSelfMap((0, 1), {0: 1})
    with pytest.raises(EmptyCarrier):
        FiniteSelfMap.from_list([])


def test_classification_examples():
    loop = classify_component(LOOP)
    assert loop.kind == HAS_CYCLE
    assert loop.certificate["returned"] - loop.certificate["assigned"] == 1
    ray = classify_component(RAY)
    assert ray.kind == NATURAL and ray.witness((5, 0)) == 5
    assert classify_component(BARE_Z).kind == UNBOUNDED_BELOW
    assert classify_component(HAIRY_Z).kind == UNBOUNDED_BELOW


def test_grading_contradiction_on_rho():
    cert = grading_contradiction(FiniteCore((1, 2, 3, 1)))
    assert sorted(cert["cycle"]) == [1, 2, 3]
    assert cert["returned"] - cert["assigned"] == 3


def test_natural_template_rejects_non_merging_levels():
    with pytest.raises(MalformedTemplate):
        Natural(Periodic.constant(2), Periodic.constant((1, 0)))
    with pytest.raises(MalformedTemplate):
        Natural(Periodic.constant(0))


def test_finite_core_must_be_connected():
    with pytest.raises(MalformedTemplate):
        FiniteCore((0, 1))


@pytest.mark.parametrize("name", sorted(DESCRIPTIONS))
def test_description_verdicts(name):
    d, expected = DESCRIPTIONS[name]
    v = decide_universality(d)
    assert v.is_universal is expected
    assert SelfMapDescription.from_json(d.to_json()) == d


def test_nu_verdict_json():
    out = decide_universality(nu_description()).to_json()
    assert out["universal"] is True
    assert out["condition_I"] == "omega components"
    assert out["condition_W"] == "all natural"


def test_loop_counterexample():
    d = SelfMapDescription((LOOP,), ((RAY, OMEGA),))
    assert decide_universality(d).to_json()["counterexample"] == "has_cycle"


def test_single_ray_fails_condition_one():
    v = decide_universality(SelfMapDescription((RAY,)))
    assert not v.condition_I and v.condition_W == {"component 0": NATURAL}


def test_nu_lift_formula_exhaustive():
    for n in range(1, 5):
        for f in all_self_maps(n):
            q = lift_finite_map_to_nu(f.points, f, 8)
            assert q.passes
            for (m, k), x in q.table.items():
                assert x == f.iterate(f.points[k], m)


def test_truncation_shapes():
    tr = truncate(nu_description(), 4, copies=2)
    assert len(tr.components) == 2 and not tr.complete
    assert tr.succ[(0, (3, 0))] == (0, (4, 0))
    assert tr.succ[(0, (4, 0))] is None
    tr = truncate(SelfMapDescription((TWO_CYCLE,)), 3)
    assert tr.complete and len(tr.vertices) == 2
    with pytest.raises(InputError):
        truncate(nu_description(), 0)
    assert vertex_id((1, (2, 0))) == "1:(2,0)"


def test_universal_lift_certificates():
    v = decide_universality(nu_description())
    for n in (1, 2, 3):
        for f in all_self_maps(n):
            assert v.lift(f, 6).passes


def test_non_universal_has_no_lift_witness():
    with pytest.raises(NotEnoughNaturalComponents):
        decide_universality(SelfMapDescription((RAY,))).lift(FiniteSelfMap.from_list([0]), 4)


def test_oracle_examples():
    loops = SelfMapDescription((), ((LOOP, OMEGA),))
    assert brute_force_lifting_exists(loops, FiniteSelfMap.from_list([1, 0])).outcome == "no"
    assert brute_force_lifting_exists(nu_description(), FiniteSelfMap.from_list([1, 2, 0])).outcome == "yes"
    one_ray = SelfMapDescription((RAY,))
    assert brute_force_lifting_exists(one_ray, FiniteSelfMap.from_list([0, 1, 2])).outcome == "no"
    bare = SelfMapDescription((), ((BARE_Z, OMEGA),))
    assert brute_force_lifting_exists(bare, FiniteSelfMap.from_list([1, 1])).outcome == "no"


def test_oracle_witness_is_a_lifting():
    d = SelfMapDescription((BARE_Z,), ((RAY, OMEGA),))
    f = FiniteSelfMap.from_list([1, 2, 0])
    res = brute_force_lifting_exists(d, f)
    assert res.outcome == "yes"
    for v, w in res.truncation.edges():
        assert res.witness[w] == f(res.witness[v])
    assert set(res.witness.values()) == set(f.points)


def test_fixed_point_lifting():
    w = SelfMapDescription((BARE_Z, LOOP), ((RAY, OMEGA),))
    for n in (1, 2, 3):
        for f in all_self_maps(n):
            if f.fixed_points():
                assert lift_with_fixed_point(w, f).passes
            else:
                with pytest.raises(NoFixedPoint):
                    lift_with_fixed_point(w, f)


def test_fixed_point_lifting_when_everything_is_natural():
    f = FiniteSelfMap.from_list([0, 0, 1])
    lifting = lift_with_fixed_point(nu_description(), f, depth=5)
    assert lifting.passes
    first = lifting.truncation.components[0][2]
    assert {lifting.q[v] for v in first} == {0}


def test_fixed_point_designation_checked():
    with pytest.raises(NoFixedPoint):
        lift_with_fixed_point(nu_description(), FiniteSelfMap.from_list([0, 0]), fixed_point=1)


def test_fixed_point_needs_omega_naturals():
    with pytest.raises(NotEnoughNaturalComponents):
        lift_with_fixed_point(SelfMapDescription((RAY,)), FiniteSelfMap.from_list([0]))


def test_nu_function():
    assert nu((0, 3)) == (1, 3)


templates = st.sampled_from([RAY, LOOP, TWO_CYCLE, BARE_Z, HAIRY_Z, Natural(Periodic.constant(2))])


@settings(max_examples=60, deadline=None)
@given(
    st.lists(templates, max_size=2),
    st.lists(st.tuples(templates, st.sampled_from([1, 2, OMEGA])), min_size=1, max_size=2),
    st.lists(st.integers(0, 2), min_size=1, max_size=3),
)
def test_verdict_never_contradicted_by_oracle(comps, fams, images):
    d = SelfMapDescription(tuple(comps), tuple(fams))
    n = len(images)
    f = FiniteSelfMap.from_list([i % n for i in images])
    v = decide_universality(d)
    outcome = brute_force_lifting_exists(d, f, depth=5).outcome
    if v.is_universal:
        assert outcome != "no"
        assert v.lift(f, 5).passes


def test_all_self_maps_count():
    assert sum(1 for _ in all_self_maps(3)) == 27
    assert len(list(itertools.islice(all_self_maps(4), 300))) == 256
