"""Exhaustive oracles, the tie-break-then-improve baseline, misreport sweeps."""

import random

import pytest

from paretomatch import (
    Bidder,
    CawInstance,
    SmiwInstance,
    Uap,
    all_weak_orders,
    brute_force_greedy_mwm,
    enumerate_matchings,
    manipulation_search,
    pareto_stable_set,
    solve_smiw,
    two_phase_baseline,
    weakly_stable_set,
)
from paretomatch.generator import random_smiw_instance

from conftest import M2, M4, M5, wo


def test_enumeration_counts():
    one = SmiwInstance((wo(1, 0),), (wo(1, 0),))
    assert len(enumerate_matchings(one)) == 2
    three = random_smiw_instance(random.Random(0), 3)
    assert len(enumerate_matchings(three)) == 34
    caw = CawInstance((wo(1, 0), wo(1, 0)), (wo(1, 2, 0),), (2,))
    assert len(enumerate_matchings(caw)) == 4


def test_enumeration_size_guard():
    big = random_smiw_instance(random.Random(1), 7)
    with pytest.raises(ValueError):
        enumerate_matchings(big)
    with pytest.raises(ValueError):
        brute_force_greedy_mwm(
            Uap(tuple(Bidder(i, {1: 1}, i) for i in range(1, 9)), frozenset({1}))
        )


def test_reference_profile_stable_sets(instance_i, instance_i_prime):
    assert {m.assignment for m in weakly_stable_set(instance_i)} == {M2, M4, M5}
    assert {m.assignment for m in pareto_stable_set(instance_i)} == {M4, M5}
    assert {m.assignment for m in weakly_stable_set(instance_i_prime)} == {M2, M4}
    assert {m.assignment for m in pareto_stable_set(instance_i_prime)} == {M4}


def test_reference_profile_exclusions(instance_i):
    # The two perfect matchings pairing man 3 with woman 3 are blocked by
    # (man 3, woman 1); the dominated stable matching is excluded from the
    # Pareto-stable set.
    stable = {m.assignment for m in weakly_stable_set(instance_i)}
    assert (1, 2, 3) not in stable
    assert (2, 1, 3) not in stable
    pareto = {m.assignment for m in pareto_stable_set(instance_i)}
    assert M2 in stable and M2 not in pareto


def test_baseline_outputs(instance_i, instance_i_prime):
    assert two_phase_baseline(instance_i).assignment == M5
    assert two_phase_baseline(instance_i_prime).assignment == M4


def test_baseline_matches_unique_stable_matching_on_strict_instances():
    rng = random.Random(1234)
    seen = 0
    for _ in range(200):
        instance = random_smiw_instance(rng, 3, tie_prob=0.0)
        stable = weakly_stable_set(instance)
        if len(stable) != 1:
            continue
        seen += 1
        (only,) = tuple(stable)
        assert two_phase_baseline(instance) == only
    assert seen > 20


def test_baseline_is_manipulable_on_reference_profile(instance_i):
    reports = manipulation_search(instance_i, 1, two_phase_baseline)
    improving = {r.misreport for r in reports if r.improved}
    assert improving
    assert wo(2, 1, 3, 0) in improving


def test_mechanism_not_manipulable_on_reference_profile(instance_i):
    for man in (1, 2, 3):
        assert not any(r.improved for r in manipulation_search(instance_i, man))


def test_single_pair_instance_has_no_useful_misreport():
    instance = SmiwInstance((wo(1, 0),), (wo(1, 0),))
    reports = manipulation_search(instance, 1)
    assert len(reports) == 3
    assert not any(r.improved for r in reports)


def test_misreport_sweep_size_guard():
    wide = random_smiw_instance(random.Random(5), 4)
    with pytest.raises(ValueError):
        manipulation_search(wide, 1)


def test_weak_order_counts():
    assert len(all_weak_orders(range(2))) == 3
    assert len(all_weak_orders(range(3))) == 13
    assert len(all_weak_orders(range(4))) == 75


def test_brute_force_tie_break_is_canonical():
    auction = Uap(
        (Bidder(1, {1: 5, 2: 5}, 1), Bidder(2, {1: 5, 2: 5}, 2)),
        frozenset({1, 2}),
    )
    first = brute_force_greedy_mwm(auction)
    second = brute_force_greedy_mwm(auction)
    assert first.edges == second.edges == frozenset({(1, 1), (2, 2)})


def test_mechanism_output_always_in_pareto_stable_set():
    rng = random.Random(864)
    for _ in range(40):
        instance = random_smiw_instance(rng, rng.randint(1, 4), tie_prob=0.5)
        assert solve_smiw(instance) in pareto_stable_set(instance)
