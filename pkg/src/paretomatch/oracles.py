"""Brute-force reference implementations for desk-scale validation.

Everything here trades speed for obviousness: matchings are enumerated
exhaustively, stability and domination are checked straight from the
definitions, and misreports are swept over every weak order.  Size guards
fail hard instead of truncating, because an approximate oracle is worse
than none.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Union

from .caw import CawInstance, CawOutcome
from .smiw import UNMATCHED, MatchingOutcome, SmiwInstance, WeakOrder, solve_smiw
from .uap import Matching, Uap

__all__ = [
    "MAX_ENUM_AGENTS",
    "MAX_ENUM_BIDDERS",
    "MatchingSet",
    "ManipulationReport",
    "enumerate_matchings",
    "weakly_stable_set",
    "pareto_stable_set",
    "is_individually_rational",
    "strongly_blocking_pairs",
    "pareto_dominates",
    "rationality_violations",
    "find_dominator",
    "iter_uap_matchings",
    "brute_force_greedy_mwm",
    "all_greedy_matchings",
    "all_weak_orders",
    "manipulation_search",
    "two_phase_baseline",
]

Instance = Union[SmiwInstance, CawInstance]
Outcome = Union[MatchingOutcome, CawOutcome]

MAX_ENUM_AGENTS = 6
MAX_ENUM_BIDDERS = 7


@dataclass(frozen=True)
class MatchingSet:
    """An exact set of matchings enumerated for one instance."""

    matchings: frozenset

    def __contains__(self, outcome: object) -> bool:
        return outcome in self.matchings

    def __iter__(self):
        return iter(self.matchings)

    def __len__(self) -> int:
        return len(self.matchings)


@dataclass(frozen=True)
class ManipulationReport:
    """Outcome of one misreport, judged by the agent's true order."""

    agent: int
    misreport: WeakOrder
    truthful_result: int
    misreport_result: int
    improved: bool


def _guard_size(instance: Instance) -> None:
    left = instance.n_men if isinstance(instance, SmiwInstance) else instance.n_students
    if left > MAX_ENUM_AGENTS:
        raise ValueError(
            f"instance too large for exhaustive enumeration ({left} > {MAX_ENUM_AGENTS} agents)"
        )


def _iter_assignments(instance: Instance) -> Iterator[tuple[int, ...]]:
    if isinstance(instance, SmiwInstance):
        n, options = instance.n_men, instance.n_women
        chosen: list[int] = []
        used: set[int] = set()

        def rec_smiw(i: int) -> Iterator[tuple[int, ...]]:
            if i > n:
                yield tuple(chosen)
                return
            chosen.append(UNMATCHED)
            yield from rec_smiw(i + 1)
            chosen.pop()
            for j in range(1, options + 1):
                if j in used:
                    continue
                used.add(j)
                chosen.append(j)
                yield from rec_smiw(i + 1)
                chosen.pop()
                used.remove(j)

        yield from rec_smiw(1)
    else:
        n = instance.n_students
        remaining = list(instance.capacities)
        chosen = []

        def rec_caw(i: int) -> Iterator[tuple[int, ...]]:
            if i > n:
                yield tuple(chosen)
                return
            chosen.append(UNMATCHED)
            yield from rec_caw(i + 1)
            chosen.pop()
            for j in range(1, instance.n_colleges + 1):
                if remaining[j - 1] == 0:
                    continue
                remaining[j - 1] -= 1
                chosen.append(j)
                yield from rec_caw(i + 1)
                chosen.pop()
                remaining[j - 1] += 1

        yield from rec_caw(1)


def _wrap(instance: Instance, assignment: tuple[int, ...]) -> Outcome:
    if isinstance(instance, SmiwInstance):
        return MatchingOutcome(assignment)
    return CawOutcome.from_assignment(instance, assignment)


def enumerate_matchings(instance: Instance) -> MatchingSet:
    """Every valid (capacity-respecting, possibly partial) matching."""
    _guard_size(instance)
    return MatchingSet(frozenset(_wrap(instance, a) for a in _iter_assignments(instance)))


def is_individually_rational(instance: Instance, outcome: Outcome) -> bool:
    return not rationality_violations(instance, outcome)


def rationality_violations(instance: Instance, outcome: Outcome) -> list[str]:
    violations: list[str] = []
    if isinstance(instance, SmiwInstance):
        assert isinstance(outcome, MatchingOutcome)
        for i, j in outcome.pairs():
            if instance.men[i - 1].strictly_prefers(UNMATCHED, j):
                violations.append(f"individual rationality: man {i} prefers _ to woman {j}")
            if instance.women[j - 1].strictly_prefers(UNMATCHED, i):
                violations.append(f"individual rationality: woman {j} prefers _ to man {i}")
    else:
        assert isinstance(outcome, CawOutcome)
        for i, j in enumerate(outcome.assignment, 1):
            if j == UNMATCHED:
                continue
            if instance.students[i - 1].strictly_prefers(UNMATCHED, j):
                violations.append(f"individual rationality: student {i} prefers _ to college {j}")
            if instance.colleges[j - 1].strictly_prefers(UNMATCHED, i):
                violations.append(f"individual rationality: college {j} prefers _ to student {i}")
    return violations


def strongly_blocking_pairs(instance: Instance, outcome: Outcome) -> list[tuple[int, int]]:
    """Pairs where both sides strictly gain by matching with each other."""
    pairs: list[tuple[int, int]] = []
    if isinstance(instance, SmiwInstance):
        assert isinstance(outcome, MatchingOutcome)
        for i in range(1, instance.n_men + 1):
            man_order = instance.men[i - 1]
            current = outcome.man_partner(i)
            for j in range(1, instance.n_women + 1):
                if not man_order.strictly_prefers(j, current):
                    continue
                if instance.women[j - 1].strictly_prefers(i, outcome.woman_partner(j)):
                    pairs.append((i, j))
    else:
        assert isinstance(outcome, CawOutcome)
        for i in range(1, instance.n_students + 1):
            student_order = instance.students[i - 1]
            current = outcome.student_college(i)
            for j in range(1, instance.n_colleges + 1):
                if not student_order.strictly_prefers(j, current):
                    continue
                college_order = instance.colleges[j - 1]
                roster = outcome.roster(j)
                displaces = any(college_order.strictly_prefers(i, p) for p in roster)
                free_seat = len(roster) < instance.capacities[j - 1] and (
                    college_order.strictly_prefers(i, UNMATCHED)
                )
                if displaces or free_seat:
                    pairs.append((i, j))
    return pairs


def _is_weakly_stable(instance: Instance, outcome: Outcome) -> bool:
    return is_individually_rational(instance, outcome) and not strongly_blocking_pairs(
        instance, outcome
    )


def weakly_stable_set(instance: Instance) -> MatchingSet:
    """Individually rational matchings without a strongly blocking pair."""
    return MatchingSet(
        frozenset(m for m in enumerate_matchings(instance) if _is_weakly_stable(instance, m))
    )


def _weakly_improves(instance: Instance, new: Outcome, old: Outcome) -> bool:
    """Every agent finds ``new`` at least as good as ``old``."""
    if isinstance(instance, SmiwInstance):
        assert isinstance(new, MatchingOutcome) and isinstance(old, MatchingOutcome)
        for i in range(1, instance.n_men + 1):
            if not instance.men[i - 1].weakly_prefers(new.man_partner(i), old.man_partner(i)):
                return False
        for j in range(1, instance.n_women + 1):
            if not instance.women[j - 1].weakly_prefers(
                new.woman_partner(j), old.woman_partner(j)
            ):
                return False
        return True
    assert isinstance(new, CawOutcome) and isinstance(old, CawOutcome)
    for i in range(1, instance.n_students + 1):
        if not instance.students[i - 1].weakly_prefers(
            new.student_college(i), old.student_college(i)
        ):
            return False
    for j in range(1, instance.n_colleges + 1):
        psi = instance.college_utility(j)
        if sum(psi[p] for p in new.roster(j)) < sum(psi[p] for p in old.roster(j)):
            return False
    return True


def pareto_dominates(instance: Instance, new: Outcome, old: Outcome) -> bool:
    """``new`` weakly improves on ``old`` for everyone and is not equivalent.

    College comparisons use additive utilities (the instance's tables when
    present, the canonical rank-difference tables otherwise).
    """
    return _weakly_improves(instance, new, old) and not _weakly_improves(instance, old, new)


def find_dominator(instance: Instance, outcome: Outcome) -> Outcome | None:
    """Lexicographically least matching that Pareto-dominates ``outcome``."""
    best: Outcome | None = None
    for assignment in _iter_assignments(instance):
        candidate = _wrap(instance, assignment)
        if pareto_dominates(instance, candidate, outcome):
            if best is None or candidate.assignment < best.assignment:
                best = candidate
    return best


def pareto_stable_set(instance: Instance) -> MatchingSet:
    """Weakly stable matchings not Pareto-dominated by any matching."""
    _guard_size(instance)
    stable = weakly_stable_set(instance)
    result = frozenset(m for m in stable if find_dominator(instance, m) is None)
    return MatchingSet(result)


def iter_uap_matchings(auction: Uap) -> Iterator[tuple[tuple[int, int], ...]]:
    """All matchings of an auction, as sorted edge tuples."""
    bidders = auction.bidders
    used: set[int] = set()
    acc: list[tuple[int, int]] = []

    def rec(idx: int) -> Iterator[tuple[tuple[int, int], ...]]:
        if idx == len(bidders):
            yield tuple(acc)
            return
        b = bidders[idx]
        yield from rec(idx + 1)
        for v in b.bid:
            if v in used:
                continue
            used.add(v)
            acc.append((b.id, v))
            yield from rec(idx + 1)
            acc.pop()
            used.remove(v)

    yield from rec(0)


def _guard_auction(auction: Uap) -> None:
    if len(auction.bidders) > MAX_ENUM_BIDDERS or len(auction.items) > MAX_ENUM_BIDDERS:
        raise ValueError(
            f"auction too large for exhaustive enumeration (> {MAX_ENUM_BIDDERS} bidders or items)"
        )


def _edge_triple(auction: Uap, edges: tuple[tuple[int, int], ...]) -> tuple[int, int, int]:
    by_id = {b.id: b for b in auction.bidders}
    weight = sum(by_id[b].bid[v] for b, v in edges)
    priority = sum(by_id[b].priority for b, v in edges)
    return (weight, len(edges), priority)


def brute_force_greedy_mwm(auction: Uap) -> Matching:
    """Lexicographic maximum over all matchings by (weight, size, priority).

    Ties resolve to the lexicographically least sorted edge tuple so the
    result is a canonical representative.
    """
    _guard_auction(auction)
    best_triple: tuple[int, int, int] | None = None
    best_edges: tuple[tuple[int, int], ...] | None = None
    for edges in iter_uap_matchings(auction):
        triple = _edge_triple(auction, edges)
        canon = tuple(sorted(edges))
        if best_triple is None or triple > best_triple or (
            triple == best_triple and canon < best_edges
        ):
            best_triple = triple
            best_edges = canon
    assert best_edges is not None
    return Matching.from_edges(auction, best_edges)


def all_greedy_matchings(auction: Uap) -> tuple[frozenset[tuple[int, int]], ...]:
    """Edge sets of every matching achieving the greedy optimum."""
    _guard_auction(auction)
    best = brute_force_greedy_mwm(auction).triple
    return tuple(
        frozenset(edges)
        for edges in iter_uap_matchings(auction)
        if _edge_triple(auction, edges) == best
    )


def all_weak_orders(alternatives) -> list[WeakOrder]:
    """Every weak order (ordered set partition) over the alternatives."""
    alts = sorted(alternatives)
    results: list[WeakOrder] = []

    def rec(remaining: tuple[int, ...], acc: list[frozenset[int]]) -> None:
        if not remaining:
            results.append(WeakOrder(tuple(acc)))
            return
        m = len(remaining)
        for mask in range(1, 1 << m):
            tier = frozenset(remaining[k] for k in range(m) if mask >> k & 1)
            rest = tuple(remaining[k] for k in range(m) if not mask >> k & 1)
            acc.append(tier)
            rec(rest, acc)
            acc.pop()

    rec(tuple(alts), [])
    return results


def manipulation_search(
    instance: Instance,
    agent: int,
    mechanism: Callable[[Instance], Outcome] | None = None,
) -> list[ManipulationReport]:
    """Sweep every possible misreport for one left-side agent.

    Results are judged by the agent's true order; for a strategyproof
    mechanism no report comes back improved.
    """
    if isinstance(instance, SmiwInstance):
        opposite = instance.n_women
        true_order = instance.men[agent - 1]
        substitute = instance.replace_man
        if mechanism is None:
            mechanism = solve_smiw
    else:
        opposite = instance.n_colleges
        true_order = instance.students[agent - 1]
        substitute = instance.replace_student
        if mechanism is None:
            mechanism = _solve_caw_lazy()
    if opposite + 1 > 4:
        raise ValueError("misreport sweep limited to at most 4 alternatives per agent")
    truthful = mechanism(instance)
    truthful_result = _result_of(truthful, agent)
    reports: list[ManipulationReport] = []
    for order in all_weak_orders(range(opposite + 1)):
        outcome = mechanism(substitute(agent, order))
        result = _result_of(outcome, agent)
        reports.append(
            ManipulationReport(
                agent=agent,
                misreport=order,
                truthful_result=truthful_result,
                misreport_result=result,
                improved=true_order.strictly_prefers(result, truthful_result),
            )
        )
    return reports


def _result_of(outcome: Outcome, agent: int) -> int:
    if isinstance(outcome, MatchingOutcome):
        return outcome.man_partner(agent)
    return outcome.student_college(agent)


def _solve_caw_lazy() -> Callable[[CawInstance], CawOutcome]:
    from .caw import solve_caw

    return solve_caw


def two_phase_baseline(instance: SmiwInstance) -> MatchingOutcome:
    """Tie-break-then-improve baseline mechanism (not strategyproof).

    Phase one breaks every tie in favor of higher-indexed agents (with the
    unmatched option treated as index zero) and runs man-proposing deferred
    acceptance on the resulting strict lists.  Phase two repeatedly replaces
    the matching with the lexicographically least matching that
    Pareto-dominates it, until none exists.
    """
    _guard_size(instance)
    n_m, n_w = instance.n_men, instance.n_women

    def strictify(order: WeakOrder) -> list[int]:
        out: list[int] = []
        for tier in order.tiers:
            out.extend(sorted(tier, reverse=True))
        return out

    men_lists = [strictify(o) for o in instance.men]
    women_rank: list[dict[int, int]] = []
    for o in instance.women:
        strict = strictify(o)
        women_rank.append({a: k for k, a in enumerate(strict)})

    # Man-proposing deferred acceptance on the strict lists.  A man proposes
    # down his list and stops when he reaches the unmatched option.
    partner_of_woman: dict[int, int] = {}
    next_choice = [0] * n_m
    free = list(range(n_m, 0, -1))
    while free:
        i = free.pop()
        while next_choice[i - 1] < len(men_lists[i - 1]):
            j = men_lists[i - 1][next_choice[i - 1]]
            next_choice[i - 1] += 1
            if j == UNMATCHED:
                break  # the man now prefers staying single
            rank = women_rank[j - 1]
            incumbent = partner_of_woman.get(j, UNMATCHED)
            if rank[i] < rank[incumbent]:
                if incumbent != UNMATCHED:
                    free.append(incumbent)
                partner_of_woman[j] = i
                break
    assignment = [UNMATCHED] * n_m
    for j, i in partner_of_woman.items():
        assignment[i - 1] = j
    matching = MatchingOutcome(tuple(assignment))

    while True:
        dominator = find_dominator(instance, matching)
        if dominator is None:
            return matching
        matching = dominator
