"""Acceptance criteria 1-7, one printed PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from helpers import DESCRIPTIONS
from unifree.action import SetCarrier, all_actions, lift_action_to_zeta, zeta_of_set
from unifree.ellone import RationalTarget, functor_square, lift_through_nu
from unifree.errors import NoFixedPoint, SquareDoesNotCommuteAtSetLevel
from unifree.freecat import (
    Ens,
    FinVecQ,
    Monounary,
    diagram_coherence,
    free_maction_functor,
    law_suite,
    maction_suite,
    monogenic_actions,
    set_action_as_object_action,
)
from unifree.funcgraph import (
    HAS_CYCLE,
    OMEGA,
    UNBOUNDED_BELOW,
    FiniteSelfMap,
    Natural,
    all_self_maps,
    brute_force_lifting_exists,
    decide_universality,
    lift_finite_map_to_nu,
    lift_with_fixed_point,
    nu,
)
from unifree.monoid import EnumerationBound, Monoid, small_monoids

BOUND = EnumerationBound(max_elements=64, max_word_length=4)


def monoids_under_test():
    ms = [m for order in range(1, 5) for m in small_monoids(order)]
    return ms + [Monoid.naturals(), Monoid.cyclic(2), Monoid.integers(), Monoid.free_monoid(1)]


def report(number: int, ok: bool, detail: str, elapsed: float, limit: float | None):
    timing = f"{elapsed:.2f}s" + (f" (limit {limit:.0f}s)" if limit else "")
    within = limit is None or elapsed < limit
    line = f"criterion {number}: {'PASS' if ok and within else 'FAIL'} - {detail} [{timing}]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, detail
    assert within, f"runtime {elapsed:.1f}s exceeds {limit}s"


def targets_up_to(n):
    for k in range(1, n + 1):
        yield from all_self_maps(k)


def test_criterion_1_oracle_agreement():
    t0 = time.perf_counter()
    problems = []
    for name, (d, expected) in DESCRIPTIONS.items():
        v = decide_universality(d)
        if v.is_universal is not expected:
            problems.append(f"{name}: verdict {v.is_universal}")
        outcomes = []
        for f in targets_up_to(3):
            out = brute_force_lifting_exists(d, f, depth=6).outcome
            outcomes.append(out)
            if v.is_universal and (out == "no" or not v.lift(f, 6).passes):
                problems.append(f"{name}: universal but {out} on {f.images}")
        if v.is_universal:
            continue
        if "no" in outcomes or v.counterexample in (HAS_CYCLE, UNBOUNDED_BELOW):
            continue
        # finitely many natural components: k of them cannot cover k+1 fixed points
        k = sum(1 for _ in d.iter_components())
        ident = FiniteSelfMap.from_list(list(range(k + 1)))
        if brute_force_lifting_exists(d, ident, depth=6).outcome != "no":
            problems.append(f"{name}: no obstruction found")
    elapsed = time.perf_counter() - t0
    detail = f"{len(DESCRIPTIONS)} descriptions x 32 targets" if not problems else "; ".join(problems[:3])
    report(1, not problems, detail, elapsed, 60)


def test_criterion_2_nu_lifting_identity():
    t0 = time.perf_counter()
    bad, pairs = 0, 0
    for f in targets_up_to(4):
        for depth in range(1, 9):
            q = lift_finite_map_to_nu(f.points, f, depth)
            bad += not q.surjective
            for (m, n), x in q.table.items():
                pairs += 1
                bad += x != f.iterate(f.points[n], m)
                up = nu((m, n))
                if up in q.table:
                    bad += q.table[up] != f(x)
            bad += sum(not sq.ok for sq in q.certificate)
    elapsed = time.perf_counter() - t0
    report(2, bad == 0, f"{pairs} evaluated pairs, {bad} mismatches", elapsed, 5)


def test_criterion_3_adjunction_laws():
    t0 = time.perf_counter()
    failed, checked = [], 0
    for inst, size in ((Ens(), 4), (Monounary(), 4), (FinVecQ(), 3)):
        for r in law_suite(inst, size):
            checked += r.checked
            if not r.passed:
                failed.append(f"{inst.name}/{r.name}")
    ens = Ens()
    monoids = monoids_under_test()
    base = SetCarrier.finite(["s"])
    ens_actions = [set_action_as_object_action(ens, psi) for m in monoids for n in range(1, 5) for psi in all_actions(m, n)]
    suites = [(ens, ens_actions, None)]
    one_gen = [Monoid.naturals(), Monoid.cyclic(2), Monoid.integers(), Monoid.free_monoid(1), Monoid.trivial()]
    mo, fv = Monounary(), FinVecQ()
    mo_actions = [a for m in one_gen for A in mo.small_objects(3) for a in monogenic_actions(mo, m, A)]
    fv_actions = [a for m in one_gen for A in fv.small_objects(2) for a in monogenic_actions(fv, m, A)]
    suites += [(mo, mo_actions, None), (fv, fv_actions, fv.column_options)]
    small = EnumerationBound(max_elements=9, max_word_length=4)
    for inst, actions, values in suites:
        for r in maction_suite(inst, actions, base, small, values):
            checked += r.checked
            if not r.passed:
                failed.append(f"{inst.name}/{r.name}")
    for inst in (ens, mo, fv):
        for m in one_gen + [Monoid.cyclic(3)]:
            checked += 1
            if not diagram_coherence(inst, m, SetCarrier.finite("ab"), small):
                failed.append(f"{inst.name}/coherence/{m}")
    elapsed = time.perf_counter() - t0
    detail = f"{checked} checks over 3 instances and {len(monoids)} monoids" if not failed else ", ".join(failed[:5])
    report(3, not failed, detail, elapsed, 120)


def test_criterion_4_zeta_lifting():
    t0 = time.perf_counter()
    total, bad = 0, 0
    for m in monoids_under_test():
        for n in range(1, 5):
            for psi in all_actions(m, n):
                total += 1
                lift = lift_action_to_zeta(psi, BOUND)
                bad += bool(lift.failing) or not lift.surjective_on_bound
    elapsed = time.perf_counter() - t0
    report(4, bad == 0 and total > 0, f"{total} actions, {bad} failing", elapsed, None)


def test_criterion_5_mf_coincidence():
    t0 = time.perf_counter()
    ens, bad, total = Ens(), 0, 0
    for m in monoids_under_test():
        elems = m.enumerate(BOUND)
        for n in range(1, 5):
            S = SetCarrier.finite(range(n))
            z = zeta_of_set(m, S, BOUND)
            mf = free_maction_functor(ens, m, S, BOUND)
            total += 1
            if mf.obj.points != z.carrier.points:
                bad += 1
                continue
            bad += any(mf.action.act(a)(p) != z.act(a, p) for a in elems for p in z.carrier)
            bad += any(mf.unit(s) != z.eta(s) for s in S)
    # N on one point over monounary algebras: each column of the free algebra carries nu
    mo = Monounary(depth=5)
    mf = free_maction_functor(mo, Monoid.naturals(), SetCarrier.finite(["s"]), EnumerationBound(6))
    flat = lambda pt: (pt[0][0], pt[1])  # ((a, s), n) -> (a, n)  # noqa: E731
    nu_ok = all(
        flat(mf.action.act(1)(pt)) == nu(flat(pt)) and flat(mf.obj.op(pt)) == (pt[0][0], pt[1] + 1)
        for pt in mf.obj.carrier.points
    )
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and nu_ok
    report(5, ok, f"{total} (monoid, set) pairs, {bad} mismatches, nu columns {'ok' if nu_ok else 'broken'}", elapsed, None)


def test_criterion_6_ell_one_pipeline():
    t0 = time.perf_counter()
    h, t = Fraction(1, 2), Fraction(1, 3)
    matrices = [
        [[1]], [[-1]], [[h]], [[0]],
        [[0, 1], [1, 0]], [[0, 0], [1, 0]], [[h, 0], [0, h]], [[h, h], [h, -h]], [[1, 0], [0, -1]],
        [[0, 0, 1], [1, 0, 0], [0, 1, 0]], [[t, 0, 0], [t, 1, 0], [t, 0, 1]], [[h, h, 0], [h, -h, 0], [0, 0, 1]],
    ]
    bad = []
    for rows in matrices:
        target = RationalTarget.from_rows(rows)
        basis = [[int(i == j) for j in range(target.dim)] for i in range(target.dim)]
        lifting = lift_through_nu(target, basis, depth=6)
        if not (lifting.passes and lifting.square.norm_one and lifting.rank == target.dim):
            bad.append(rows)
    try:
        functor_square(lambda p: p[0] % 3, nu, lambda x: (x + 2) % 3, [(m, 0) for m in range(6)])
        rejected = False
    except SquareDoesNotCommuteAtSetLevel:
        rejected = True
    elapsed = time.perf_counter() - t0
    ok = not bad and rejected and len(matrices) >= 10
    report(6, ok, f"{len(matrices)} matrices, {len(bad)} failing, broken square rejected={rejected}", elapsed, 30)


def test_criterion_7_fixed_point():
    t0 = time.perf_counter()
    fixtures = {
        name: d
        for name, (d, _) in DESCRIPTIONS.items()
        if any(isinstance(tm, Natural) and mult == OMEGA for tm, mult in d.families)
    }
    bad, lifted, refused = [], 0, 0
    for name, d in fixtures.items():
        mixed = not all(isinstance(tm, Natural) for _, tm in d.templates())
        for f in targets_up_to(3):
            if f.fixed_points():
                lifted += 1
                if not lift_with_fixed_point(d, f, depth=6).passes:
                    bad.append(f"{name} on {f.images}")
            elif mixed:
                try:
                    lift_with_fixed_point(d, f, depth=6)
                    bad.append(f"{name} lifted fixed-point-free {f.images}")
                except NoFixedPoint:
                    refused += 1
    elapsed = time.perf_counter() - t0
    ok = not bad and "nu_plus_zchain" in fixtures and refused > 0
    report(7, ok, f"{len(fixtures)} fixtures, {lifted} lifts, {refused} NoFixedPoint refusals, {len(bad)} bad", elapsed, None)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
