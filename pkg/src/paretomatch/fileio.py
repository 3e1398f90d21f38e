"""Plain-text instance and matching formats.

Instances are tiny and meant to be hand-auditable, so the format is line
oriented: a header naming the kind, counts, one preference line per agent
with tiers separated by ``|`` and the token ``_`` standing for the
unmatched option, plus capacity and optional utility lines for college
instances.  ``#`` starts a comment that runs to the end of the line.

Emission is canonical (single spaces, members of a tier ascending with
``_`` first), so ``parse_instance(emit_instance(x)) == x`` and identical
instances always serialize to identical bytes.
"""

from __future__ import annotations

import re
from typing import Union

from .caw import CawInstance, CawOutcome, GroupPreferenceMode
from .smiw import UNMATCHED, MatchingOutcome, SmiwInstance, WeakOrder, canonical_utility

__all__ = [
    "ParseError",
    "parse_instance",
    "emit_instance",
    "parse_matching",
    "emit_matching",
]

Instance = Union[SmiwInstance, CawInstance]
Outcome = Union[MatchingOutcome, CawOutcome]


class ParseError(ValueError):
    """Malformed instance or matching text, with a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _meaningful_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for number, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append((number, body))
    return out


def _parse_count(line: tuple[int, str], keyword: str) -> int:
    number, body = line
    m = re.fullmatch(rf"{keyword}\s+(\d+)", body)
    if not m:
        raise ParseError(f"expected '{keyword} <count>'", number)
    return int(m.group(1))


def _parse_tiers(text: str, expected: set[int], number: int) -> WeakOrder:
    tiers: list[set[int]] = []
    seen: set[int] = set()
    for chunk in text.split("|"):
        tokens = chunk.split()
        if not tokens:
            raise ParseError("empty tier", number)
        tier: set[int] = set()
        for token in tokens:
            if token == "_":
                value = UNMATCHED
            elif token.isdigit():
                value = int(token)
            else:
                raise ParseError(f"bad token {token!r} in preference list", number)
            if value in seen:
                name = "_" if value == UNMATCHED else str(value)
                raise ParseError(f"duplicate alternative {name}", number)
            if value not in expected:
                raise ParseError(f"unknown index {value}", number)
            seen.add(value)
            tier.add(value)
        tiers.append(tier)
    missing = expected - seen
    if missing:
        names = ["_" if v == UNMATCHED else str(v) for v in sorted(missing)]
        raise ParseError(f"totality violation: missing {' '.join(names)}", number)
    return WeakOrder(tuple(frozenset(t) for t in tiers))


def parse_instance(text: str) -> Instance:
    """Parse instance text into a marriage or college-admissions instance."""
    lines = _meaningful_lines(text)
    if not lines:
        raise ParseError("empty input")
    number, kind = lines[0]
    if kind == "SMIW":
        return _parse_smiw(lines[1:])
    if kind == "CAW":
        return _parse_caw(lines[1:])
    raise ParseError("expected header SMIW or CAW", number)


def _parse_smiw(lines: list[tuple[int, str]]) -> SmiwInstance:
    if len(lines) < 2:
        raise ParseError("expected 'men <count>' and 'women <count>' lines")
    n_men = _parse_count(lines[0], "men")
    n_women = _parse_count(lines[1], "women")
    men: dict[int, WeakOrder] = {}
    women: dict[int, WeakOrder] = {}
    woman_alts = set(range(n_women + 1))
    man_alts = set(range(n_men + 1))
    for number, body in lines[2:]:
        m = re.fullmatch(r"(man|woman)\s+(\d+)\s*:\s*(.+)", body)
        if not m:
            raise ParseError("expected 'man <i>: ...' or 'woman <j>: ...'", number)
        side, index_text, tail = m.groups()
        index = int(index_text)
        if side == "man":
            if not 1 <= index <= n_men:
                raise ParseError(f"unknown index {index}", number)
            if index in men:
                raise ParseError(f"duplicate preference line for man {index}", number)
            men[index] = _parse_tiers(tail, woman_alts, number)
        else:
            if not 1 <= index <= n_women:
                raise ParseError(f"unknown index {index}", number)
            if index in women:
                raise ParseError(f"duplicate preference line for woman {index}", number)
            women[index] = _parse_tiers(tail, man_alts, number)
    for i in range(1, n_men + 1):
        if i not in men:
            raise ParseError(f"missing preference line for man {i}")
    for j in range(1, n_women + 1):
        if j not in women:
            raise ParseError(f"missing preference line for woman {j}")
    return SmiwInstance(
        tuple(men[i] for i in range(1, n_men + 1)),
        tuple(women[j] for j in range(1, n_women + 1)),
    )


def _parse_caw(lines: list[tuple[int, str]]) -> CawInstance:
    if len(lines) < 2:
        raise ParseError("expected 'students <count>' and 'colleges <count>' lines")
    n_students = _parse_count(lines[0], "students")
    n_colleges = _parse_count(lines[1], "colleges")
    capacities: dict[int, int] = {}
    students: dict[int, WeakOrder] = {}
    colleges: dict[int, WeakOrder] = {}
    utility_lines: dict[int, tuple[int, str]] = {}
    college_alts = set(range(n_colleges + 1))
    student_alts = set(range(n_students + 1))
    for number, body in lines[2:]:
        m = re.fullmatch(r"college\s+(\d+)\s+capacity\s+(-?\d+)", body)
        if m:
            j, cap = int(m.group(1)), int(m.group(2))
            if not 1 <= j <= n_colleges:
                raise ParseError(f"unknown index {j}", number)
            if j in capacities:
                raise ParseError(f"duplicate capacity line for college {j}", number)
            if cap < 1:
                raise ParseError(f"bad capacity {cap} for college {j}", number)
            capacities[j] = cap
            continue
        m = re.fullmatch(r"college\s+(\d+)\s+utility\s*:\s*(.+)", body)
        if m:
            j = int(m.group(1))
            if not 1 <= j <= n_colleges:
                raise ParseError(f"unknown index {j}", number)
            if j in utility_lines:
                raise ParseError(f"duplicate utility line for college {j}", number)
            utility_lines[j] = (number, m.group(2))
            continue
        m = re.fullmatch(r"(student|college)\s+(\d+)\s*:\s*(.+)", body)
        if not m:
            raise ParseError(
                "expected a capacity, preference, or utility line", number
            )
        side, index_text, tail = m.groups()
        index = int(index_text)
        if side == "student":
            if not 1 <= index <= n_students:
                raise ParseError(f"unknown index {index}", number)
            if index in students:
                raise ParseError(f"duplicate preference line for student {index}", number)
            students[index] = _parse_tiers(tail, college_alts, number)
        else:
            if not 1 <= index <= n_colleges:
                raise ParseError(f"unknown index {index}", number)
            if index in colleges:
                raise ParseError(f"duplicate preference line for college {index}", number)
            colleges[index] = _parse_tiers(tail, student_alts, number)
    for i in range(1, n_students + 1):
        if i not in students:
            raise ParseError(f"missing preference line for student {i}")
    for j in range(1, n_colleges + 1):
        if j not in colleges:
            raise ParseError(f"missing preference line for college {j}")
        if j not in capacities:
            raise ParseError(f"missing capacity line for college {j}")

    mode = GroupPreferenceMode.MINIMALLY_RESPONSIVE
    utilities = None
    if utility_lines:
        mode = GroupPreferenceMode.ADDITIVE_UTILITY
        tables: list[dict[int, int]] = []
        for j in range(1, n_colleges + 1):
            table = dict(canonical_utility(colleges[j]))
            if j in utility_lines:
                number, tail = utility_lines[j]
                for token in tail.split():
                    m = re.fullmatch(r"(\d+):(-?\d+)", token)
                    if not m:
                        raise ParseError(f"bad utility entry {token!r}", number)
                    student, value = int(m.group(1)), int(m.group(2))
                    if not 1 <= student <= n_students:
                        raise ParseError(f"unknown index {student}", number)
                    table[student] = value
            tables.append(table)
        utilities = tuple(tables)

    try:
        return CawInstance(
            tuple(students[i] for i in range(1, n_students + 1)),
            tuple(colleges[j] for j in range(1, n_colleges + 1)),
            tuple(capacities[j] for j in range(1, n_colleges + 1)),
            mode,
            utilities,
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _tier_text(tier: frozenset[int]) -> str:
    return " ".join("_" if a == UNMATCHED else str(a) for a in sorted(tier))


def _order_text(order: WeakOrder) -> str:
    return " | ".join(_tier_text(t) for t in order.tiers)


def emit_instance(instance: Instance) -> str:
    """Serialize an instance in canonical form."""
    out: list[str] = []
    if isinstance(instance, SmiwInstance):
        out.append("SMIW")
        out.append(f"men {instance.n_men}")
        out.append(f"women {instance.n_women}")
        for i, order in enumerate(instance.men, 1):
            out.append(f"man {i}: {_order_text(order)}")
        for j, order in enumerate(instance.women, 1):
            out.append(f"woman {j}: {_order_text(order)}")
    else:
        out.append("CAW")
        out.append(f"students {instance.n_students}")
        out.append(f"colleges {instance.n_colleges}")
        for j, cap in enumerate(instance.capacities, 1):
            out.append(f"college {j} capacity {cap}")
        for i, order in enumerate(instance.students, 1):
            out.append(f"student {i}: {_order_text(order)}")
        for j, order in enumerate(instance.colleges, 1):
            out.append(f"college {j}: {_order_text(order)}")
        if instance.utilities is not None:
            for j, table in enumerate(instance.utilities, 1):
                entries = " ".join(
                    f"{i}:{table[i]}" for i in sorted(table) if i != UNMATCHED
                )
                out.append(f"college {j} utility: {entries}")
    return "\n".join(out) + "\n"


def parse_matching(text: str, instance: Instance) -> Outcome:
    """Parse a matching file and validate it against an instance."""
    lines = _meaningful_lines(text)
    if not lines or lines[0][1] != "MATCHING":
        number = lines[0][0] if lines else None
        raise ParseError("expected header MATCHING", number)
    n_left = instance.n_men if isinstance(instance, SmiwInstance) else instance.n_students
    n_right = instance.n_women if isinstance(instance, SmiwInstance) else instance.n_colleges
    assignment: dict[int, int] = {}
    for number, body in lines[1:]:
        m = re.fullmatch(r"(\d+)\s+(\d+|_)", body)
        if not m:
            raise ParseError("expected '<i> <j|_>'", number)
        i = int(m.group(1))
        j = UNMATCHED if m.group(2) == "_" else int(m.group(2))
        if not 1 <= i <= n_left:
            raise ParseError(f"unknown index {i}", number)
        if i in assignment:
            raise ParseError(f"duplicate line for agent {i}", number)
        if j != UNMATCHED and not 1 <= j <= n_right:
            raise ParseError(f"unknown index {j}", number)
        assignment[i] = j
    for i in range(1, n_left + 1):
        if i not in assignment:
            raise ParseError(f"missing line for agent {i}")
    values = tuple(assignment[i] for i in range(1, n_left + 1))
    try:
        if isinstance(instance, SmiwInstance):
            return MatchingOutcome(values)
        return CawOutcome.from_assignment(instance, values)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def emit_matching(outcome: Outcome) -> str:
    """Serialize a matching with one line per left-side agent."""
    lines = ["MATCHING"]
    for i, j in enumerate(outcome.assignment, 1):
        lines.append(f"{i} {'_' if j == UNMATCHED else j}")
    return "\n".join(lines) + "\n"
