"""College admissions: slot expansion, stability, additive utilities."""

import random

import pytest

from paretomatch import (
    CawInstance,
    CawOutcome,
    GroupPreferenceMode,
    UNMATCHED,
    caw_weak_stability_check,
    expand_to_smiw,
    manipulation_search,
    pareto_stable_set,
    solve_caw,
    solve_smiw,
)
from paretomatch.generator import random_caw_instance

from conftest import wo


def test_capacity_must_be_positive():
    with pytest.raises(ValueError):
        CawInstance((wo(1, 0),), (wo(1, 0),), (0,))


def test_expansion_one_college_two_slots():
    instance = CawInstance(
        students=(wo(1, 0), wo(1, 0)),
        colleges=(wo(1, 2, 0),),
        capacities=(2,),
    )
    reduction = expand_to_smiw(instance)
    assert reduction.college_of_slot == (1, 1)
    assert reduction.smiw.n_women == 2
    assert reduction.smiw.women[0] == reduction.smiw.women[1]
    # A student is indifferent among a college's slots.
    assert reduction.smiw.men[0].tiers[0] == frozenset({1, 2})


def test_expansion_two_colleges_slot_map():
    instance = CawInstance(
        students=(wo(1, 2, 0),) * 4,
        colleges=(wo(1, 2, 3, 4, 0), wo(4, 3, 2, 1, 0)),
        capacities=(1, 3),
    )
    reduction = expand_to_smiw(instance)
    assert reduction.college_of_slot == (1, 2, 2, 2)
    assert reduction.slots_of(2) == (2, 3, 4)


def test_unbalanced_instances_solve_cleanly():
    # Total capacity exceeds the student count; the marriage layer pads.
    instance = CawInstance(
        students=(wo(1, 0),),
        colleges=(wo(1, 0),),
        capacities=(3,),
    )
    out = solve_caw(instance)
    assert out.assignment == (1,)
    assert out.roster(1) == frozenset({1})


def test_solve_no_competition():
    instance = CawInstance(
        students=(wo(1, 0), wo(1, 0)),
        colleges=(wo({1, 2}, 0),),
        capacities=(2,),
    )
    out = solve_caw(instance)
    assert out.assignment == (1, 1)
    assert caw_weak_stability_check(instance, out) == []


def test_solve_scarce_seat_goes_to_preferred_student():
    # Enumeration of the four matchings leaves a single weakly stable one.
    instance = CawInstance(
        students=(wo(1, 0), wo(1, 0)),
        colleges=(wo(1, 2, 0),),
        capacities=(1,),
    )
    out = solve_caw(instance)
    assert out.assignment == (1, UNMATCHED)


def test_unacceptable_student_never_admitted():
    instance = CawInstance(
        students=(wo(1, 0),),
        colleges=(wo(0, 1),),
        capacities=(1,),
    )
    assert solve_caw(instance).assignment == (UNMATCHED,)
    reports = manipulation_search(instance, 1)
    assert all(r.misreport_result == UNMATCHED for r in reports)
    assert not any(r.improved for r in reports)


def test_stability_check_flags_wasted_seat():
    instance = CawInstance(
        students=(wo(1, 0),),
        colleges=(wo(1, 0),),
        capacities=(1,),
    )
    bad = CawOutcome.from_assignment(instance, (UNMATCHED,))
    violations = caw_weak_stability_check(instance, bad)
    assert violations and "condition (2)" in violations[0]


def test_stability_check_flags_displacement():
    instance = CawInstance(
        students=(wo(1, 0), wo(1, 0)),
        colleges=(wo(1, 2, 0),),
        capacities=(1,),
    )
    bad = CawOutcome.from_assignment(instance, (UNMATCHED, 1))
    violations = caw_weak_stability_check(instance, bad)
    assert any("condition (1)" in v for v in violations)


def test_capacity_enforced_on_outcomes():
    instance = CawInstance(
        students=(wo(1, 0), wo(1, 0)),
        colleges=(wo(1, 2, 0),),
        capacities=(1,),
    )
    with pytest.raises(ValueError):
        CawOutcome.from_assignment(instance, (1, 1))


def test_random_instances_are_weakly_stable_and_slot_pareto():
    rng = random.Random(119)
    for _ in range(60):
        instance = random_caw_instance(
            rng,
            n_students=rng.randint(1, 5),
            n_colleges=rng.randint(1, 3),
            max_capacity=2,
            tie_prob=0.4,
        )
        out = solve_caw(instance)
        assert caw_weak_stability_check(instance, out) == []
        for roster, cap in zip(out.rosters, instance.capacities):
            assert len(roster) <= cap
        reduction = expand_to_smiw(instance)
        if reduction.smiw.n_men <= 6:
            slot_matching = solve_smiw(reduction.smiw, reduction.utilities)
            assert slot_matching in pareto_stable_set(reduction.smiw)


def test_additive_mode_requires_consistent_tables():
    with pytest.raises(ValueError):
        CawInstance(
            students=(wo(1, 0), wo(1, 0)),
            colleges=(wo(1, 2, 0),),
            capacities=(1,),
            mode=GroupPreferenceMode.ADDITIVE_UTILITY,
            utilities=({1: 1, 2: 5, 0: 0},),  # reversed vs the order
        )
    with pytest.raises(ValueError):
        CawInstance(
            students=(wo(1, 0),),
            colleges=(wo(1, 0),),
            capacities=(1,),
            utilities=({1: 1, 0: 0},),  # tables without additive mode
        )


def test_additive_mode_outcome_is_pareto_stable_in_additive_sense():
    rng = random.Random(2024)
    for _ in range(30):
        n_students = rng.randint(1, 4)
        base = random_caw_instance(rng, n_students, rng.randint(1, 2), max_capacity=2, tie_prob=0.3)
        tables = []
        for order in base.colleges:
            # A valid table: strictly decreasing blocks with random gaps.
            value = 3 * len(order.tiers)
            table = {}
            for tier in order.tiers:
                for a in tier:
                    table[a] = value
                value -= rng.randint(1, 3)
            shift = table[UNMATCHED]
            tables.append({a: v - shift for a, v in table.items()})
        instance = CawInstance(
            base.students,
            base.colleges,
            base.capacities,
            GroupPreferenceMode.ADDITIVE_UTILITY,
            tuple(tables),
        )
        out = solve_caw(instance)
        assert caw_weak_stability_check(instance, out) == []
        assert out in pareto_stable_set(instance)


def test_student_strategyproofness_small_sweep():
    rng = random.Random(31337)
    for _ in range(8):
        instance = random_caw_instance(rng, rng.randint(2, 4), 2, max_capacity=2, tie_prob=0.4)
        for student in range(1, instance.n_students + 1):
            reports = manipulation_search(instance, student)
            assert len(reports) == 13
            assert not any(r.improved for r in reports)
