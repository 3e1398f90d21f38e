"""College admissions with weak preferences via capacity expansion.

Each college of capacity c is split into c interchangeable slots carrying
the college's order over students; students are indifferent among a
college's slots.  The resulting marriage instance is solved by the
mechanism in :mod:`paretomatch.smiw` and slot assignments are folded back
into college rosters.  Group preferences of a college over rosters are
taken either as any minimally responsive extension of its order (verified
at the slot level) or as the sums of an explicit integer utility table.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .smiw import (
    UNMATCHED,
    SmiwInstance,
    UtilityAssignment,
    WeakOrder,
    canonical_utility,
    solve_smiw,
)

__all__ = [
    "GroupPreferenceMode",
    "CawInstance",
    "CawOutcome",
    "SmiwReduction",
    "expand_to_smiw",
    "solve_caw",
    "caw_weak_stability_check",
]


class GroupPreferenceMode(enum.Enum):
    MINIMALLY_RESPONSIVE = "minimally-responsive"
    ADDITIVE_UTILITY = "additive-utility"


@dataclass(frozen=True)
class CawInstance:
    """Students over colleges, colleges over students, and capacities.

    ``utilities`` holds one explicit integer table per college and is
    required exactly in additive-utility mode; tables must rank students the
    way the college's order does and give the unmatched option utility zero.
    """

    students: tuple[WeakOrder, ...]
    colleges: tuple[WeakOrder, ...]
    capacities: tuple[int, ...]
    mode: GroupPreferenceMode = GroupPreferenceMode.MINIMALLY_RESPONSIVE
    utilities: tuple[dict[int, int], ...] | None = None

    def __post_init__(self) -> None:
        students = tuple(self.students)
        colleges = tuple(self.colleges)
        capacities = tuple(self.capacities)
        if len(colleges) != len(capacities):
            raise ValueError("each college needs a capacity")
        for j, c in enumerate(capacities, 1):
            if not isinstance(c, int) or c < 1:
                raise ValueError(f"college {j}: capacity must be a positive integer")
        college_alts = frozenset(range(len(colleges) + 1))
        student_alts = frozenset(range(len(students) + 1))
        for i, order in enumerate(students, 1):
            if order.alternatives() != college_alts:
                raise ValueError(f"student {i}: order must cover every college and _")
        for j, order in enumerate(colleges, 1):
            if order.alternatives() != student_alts:
                raise ValueError(f"college {j}: order must cover every student and _")
        if (self.mode is GroupPreferenceMode.ADDITIVE_UTILITY) != (self.utilities is not None):
            raise ValueError("explicit utility tables are required exactly in additive mode")
        if self.utilities is not None:
            tables = tuple(dict(t) for t in self.utilities)
            if len(tables) != len(colleges):
                raise ValueError("one utility table per college is required")
            for j, (order, psi) in enumerate(zip(colleges, tables), 1):
                _validate_table(j, order, psi)
            object.__setattr__(self, "utilities", tables)
        object.__setattr__(self, "students", students)
        object.__setattr__(self, "colleges", colleges)
        object.__setattr__(self, "capacities", capacities)

    @property
    def n_students(self) -> int:
        return len(self.students)

    @property
    def n_colleges(self) -> int:
        return len(self.colleges)

    def college_utility(self, j: int) -> dict[int, int]:
        """The table used for college ``j``'s additive comparisons and bids."""
        if self.utilities is not None:
            return self.utilities[j - 1]
        return canonical_utility(self.colleges[j - 1])

    def replace_student(self, i: int, order: WeakOrder) -> "CawInstance":
        students = list(self.students)
        students[i - 1] = order
        return CawInstance(tuple(students), self.colleges, self.capacities, self.mode, self.utilities)


def _validate_table(j: int, order: WeakOrder, psi: dict[int, int]) -> None:
    if set(psi) != set(order.alternatives()):
        raise ValueError(f"college {j}: utility table must cover every student and _")
    if psi[UNMATCHED] != 0:
        raise ValueError(f"college {j}: utility of _ must be 0")
    previous: int | None = None
    for tier in order.tiers:
        values = {psi[a] for a in tier}
        if len(values) > 1:
            raise ValueError(f"college {j}: tied students must share one utility")
        value = values.pop()
        if not isinstance(value, int):
            raise ValueError(f"college {j}: utilities must be integers")
        if previous is not None and value >= previous:
            raise ValueError(f"college {j}: utilities must strictly decrease across tiers")
        previous = value


@dataclass(frozen=True)
class CawOutcome:
    """Assignment of each student to a college or UNMATCHED, plus rosters."""

    assignment: tuple[int, ...]
    rosters: tuple[frozenset[int], ...]

    @classmethod
    def from_assignment(cls, instance: CawInstance, assignment: tuple[int, ...]) -> "CawOutcome":
        rosters = [set() for _ in range(instance.n_colleges)]
        for i, j in enumerate(assignment, 1):
            if j == UNMATCHED:
                continue
            if not 1 <= j <= instance.n_colleges:
                raise ValueError(f"student {i} assigned to unknown college {j}")
            rosters[j - 1].add(i)
        for j, (roster, cap) in enumerate(zip(rosters, instance.capacities), 1):
            if len(roster) > cap:
                raise ValueError(f"college {j} over capacity: {sorted(roster)}")
        return cls(assignment, tuple(frozenset(r) for r in rosters))

    def student_college(self, i: int) -> int:
        return self.assignment[i - 1]

    def roster(self, j: int) -> frozenset[int]:
        return self.rosters[j - 1]


@dataclass(frozen=True)
class SmiwReduction:
    """A college-admissions instance expanded into per-slot marriage form."""

    smiw: SmiwInstance
    college_of_slot: tuple[int, ...]
    utilities: UtilityAssignment | None

    def slots_of(self, j: int) -> tuple[int, ...]:
        return tuple(s for s, jj in enumerate(self.college_of_slot, 1) if jj == j)


def expand_to_smiw(instance: CawInstance) -> SmiwReduction:
    """Split colleges into slots and translate both sides' orders.

    All slots of one college carry identical orders and identical utility
    tables, so slot identity within a college never matters; only rosters
    are part of the output contract.
    """
    college_of_slot: list[int] = []
    for j, cap in enumerate(instance.capacities, 1):
        college_of_slot.extend([j] * cap)
    slots_of: dict[int, list[int]] = {j: [] for j in range(1, instance.n_colleges + 1)}
    for s, j in enumerate(college_of_slot, 1):
        slots_of[j].append(s)

    men = []
    for order in instance.students:
        tiers = []
        for tier in order.tiers:
            expanded: set[int] = set()
            for a in tier:
                if a == UNMATCHED:
                    expanded.add(UNMATCHED)
                else:
                    expanded.update(slots_of[a])
            tiers.append(frozenset(expanded))
        men.append(WeakOrder(tuple(tiers)))
    women = tuple(instance.colleges[j - 1] for j in college_of_slot)

    utilities: UtilityAssignment | None = None
    if instance.mode is GroupPreferenceMode.ADDITIVE_UTILITY:
        utilities = UtilityAssignment(
            tuple(dict(instance.college_utility(j)) for j in college_of_slot)
        )
    return SmiwReduction(
        smiw=SmiwInstance(tuple(men), women),
        college_of_slot=tuple(college_of_slot),
        utilities=utilities,
    )


def solve_caw(instance: CawInstance) -> CawOutcome:
    """Run the mechanism and fold slot matches back into college rosters."""
    reduction = expand_to_smiw(instance)
    slot_matching = solve_smiw(reduction.smiw, reduction.utilities)
    assignment = []
    for i in range(1, instance.n_students + 1):
        s = slot_matching.man_partner(i)
        assignment.append(UNMATCHED if s == UNMATCHED else reduction.college_of_slot[s - 1])
    return CawOutcome.from_assignment(instance, tuple(assignment))


def caw_weak_stability_check(instance: CawInstance, outcome: CawOutcome) -> list[str]:
    """List individual-rationality and strong-blocking violations.

    A student-college pair blocks when the student strictly prefers the
    college to their assignment and either (1) the college strictly prefers
    the student to somebody on its roster, or (2) it has a free seat and
    strictly prefers the student to leaving it empty.
    """
    violations: list[str] = []
    for i in range(1, instance.n_students + 1):
        j = outcome.student_college(i)
        if j == UNMATCHED:
            continue
        if instance.students[i - 1].strictly_prefers(UNMATCHED, j):
            violations.append(f"individual rationality: student {i} prefers _ to college {j}")
        if instance.colleges[j - 1].strictly_prefers(UNMATCHED, i):
            violations.append(f"individual rationality: college {j} prefers _ to student {i}")
    for i in range(1, instance.n_students + 1):
        student_order = instance.students[i - 1]
        current = outcome.student_college(i)
        for j in range(1, instance.n_colleges + 1):
            if not student_order.strictly_prefers(j, current):
                continue
            college_order = instance.colleges[j - 1]
            roster = outcome.roster(j)
            for p in sorted(roster):
                if college_order.strictly_prefers(i, p):
                    violations.append(
                        f"blocking pair (student {i}, college {j}): condition (1), "
                        f"displaces student {p}"
                    )
                    break
            if len(roster) < instance.capacities[j - 1] and college_order.strictly_prefers(
                i, UNMATCHED
            ):
                violations.append(
                    f"blocking pair (student {i}, college {j}): condition (2), free seat"
                )
    return violations
