"""Seeded random instance generation for tests and the ``gen`` subcommand."""

from __future__ import annotations

import random
from typing import Iterable

from .caw import CawInstance, GroupPreferenceMode
from .smiw import SmiwInstance, WeakOrder

__all__ = [
    "random_weak_order",
    "random_smiw_instance",
    "random_caw_instance",
    "generated_instance",
]


def random_weak_order(rng: random.Random, alternatives: Iterable[int], tie_prob: float) -> WeakOrder:
    """Shuffle the alternatives, then merge neighbors into tiers at random."""
    alts = list(alternatives)
    rng.shuffle(alts)
    tiers: list[set[int]] = [{alts[0]}]
    for a in alts[1:]:
        if rng.random() < tie_prob:
            tiers[-1].add(a)
        else:
            tiers.append({a})
    return WeakOrder(tuple(frozenset(t) for t in tiers))


def random_smiw_instance(
    rng: random.Random, n_men: int, n_women: int | None = None, tie_prob: float = 0.3
) -> SmiwInstance:
    if n_women is None:
        n_women = n_men
    men = tuple(random_weak_order(rng, range(n_women + 1), tie_prob) for _ in range(n_men))
    women = tuple(random_weak_order(rng, range(n_men + 1), tie_prob) for _ in range(n_women))
    return SmiwInstance(men, women)


def random_caw_instance(
    rng: random.Random,
    n_students: int,
    n_colleges: int,
    max_capacity: int = 2,
    tie_prob: float = 0.3,
) -> CawInstance:
    students = tuple(
        random_weak_order(rng, range(n_colleges + 1), tie_prob) for _ in range(n_students)
    )
    colleges = tuple(
        random_weak_order(rng, range(n_students + 1), tie_prob) for _ in range(n_colleges)
    )
    capacities = tuple(rng.randint(1, max_capacity) for _ in range(n_colleges))
    return CawInstance(students, colleges, capacities, GroupPreferenceMode.MINIMALLY_RESPONSIVE)


def generated_instance(kind: str, n: int, seed: int, tie_prob: float = 0.3, max_cap: int = 2):
    """Build the instance behind ``gen --kind KIND --n N --seed S``.

    For marriage instances ``n`` is the number of agents per side.  For
    college instances ``n`` counts students plus total capacity: half the
    budget becomes students, the rest is split into random capacities of at
    most ``max_cap`` seats each.
    """
    rng = random.Random(seed)
    if kind == "smiw":
        if n < 1:
            raise ValueError("gen smiw needs n >= 1")
        return random_smiw_instance(rng, n, n, tie_prob)
    if kind == "caw":
        if n < 2:
            raise ValueError("gen caw needs n >= 2 (students plus total capacity)")
        n_students = n // 2
        budget = n - n_students
        capacities: list[int] = []
        while budget > 0:
            c = rng.randint(1, min(max_cap, budget))
            capacities.append(c)
            budget -= c
        students = tuple(
            random_weak_order(rng, range(len(capacities) + 1), tie_prob)
            for _ in range(n_students)
        )
        colleges = tuple(
            random_weak_order(rng, range(n_students + 1), tie_prob)
            for _ in range(len(capacities))
        )
        return CawInstance(
            students, colleges, tuple(capacities), GroupPreferenceMode.MINIMALLY_RESPONSIVE
        )
    raise ValueError(f"unknown kind {kind!r}")
