"""Stable marriage with incomplete weak preferences, solved as an auction.

Agents rank the opposite side plus the option of staying unmatched in
ordered indifference tiers.  Each woman's tiers are converted to an integer
utility function with the unmatched option pinned at zero; each man becomes
a multibidder whose k-th bidder bids, on every woman in his k-th tier, her
utility for him.  A per-man fallback item stands in for his unmatched
option.  Running the revelation loop and reading the greedy maximum-weight
matching back off the items yields a matching that is individually
rational, weakly stable, Pareto-stable, and strategyproof for the men for
any fixed utility assignment derived from the women's reports alone.

Indices are 1-based throughout, matching the file format; ``UNMATCHED``
(zero) denotes the unmatched option.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .iuap import Iuap, Multibidder, RevelationOutcome, iuap_threshold, reveal_all
from .uap import Bidder, ThresholdPair

__all__ = [
    "UNMATCHED",
    "WeakOrder",
    "SmiwInstance",
    "UtilityAssignment",
    "MatchingOutcome",
    "ThresholdFact",
    "canonical_utility",
    "canonical_assignment",
    "build_iuap",
    "solve_smiw",
    "smiw_threshold_report",
    "threshold_without_man",
]

#: Index of the "stay unmatched" alternative inside preference orders.
UNMATCHED = 0


class WeakOrder:
    """Ordered indifference tiers over integer alternatives.

    ``tiers[0]`` is the most preferred tier.  Alternatives within a tier are
    tied; alternatives in earlier tiers are strictly preferred to later ones.
    """

    __slots__ = ("tiers", "_rank")

    def __init__(self, tiers: Iterable[Iterable[int]]):
        normalized = tuple(frozenset(t) for t in tiers)
        rank: dict[int, int] = {}
        for k, tier in enumerate(normalized, 1):
            if not tier:
                raise ValueError("tiers must be nonempty")
            for a in tier:
                if not isinstance(a, int) or a < 0:
                    raise ValueError(f"alternatives must be nonnegative integers, got {a!r}")
                if a in rank:
                    raise ValueError(f"alternative {a} appears in two tiers")
                rank[a] = k
        self.tiers = normalized
        self._rank = rank

    def alternatives(self) -> frozenset[int]:
        return frozenset(self._rank)

    def rank(self, a: int) -> int:
        """1-based tier index of an alternative (smaller is better)."""
        return self._rank[a]

    def weakly_prefers(self, a: int, b: int) -> bool:
        return self._rank[a] <= self._rank[b]

    def strictly_prefers(self, a: int, b: int) -> bool:
        return self._rank[a] < self._rank[b]

    def indifferent(self, a: int, b: int) -> bool:
        return self._rank[a] == self._rank[b]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WeakOrder) and self.tiers == other.tiers

    def __hash__(self) -> int:
        return hash(self.tiers)

    def __repr__(self) -> str:
        body = " | ".join(" ".join(str(a) for a in sorted(t)) for t in self.tiers)
        return f"WeakOrder({body})"


@dataclass(frozen=True)
class SmiwInstance:
    """Preference profiles of men over women and women over men.

    Each man's order must partition {UNMATCHED, 1..#women}; each woman's
    order must partition {UNMATCHED, 1..#men}.  Sides may have different
    sizes; the solver pads internally and strips the padding from results.
    """

    men: tuple[WeakOrder, ...]
    women: tuple[WeakOrder, ...]

    def __post_init__(self) -> None:
        men = tuple(self.men)
        women = tuple(self.women)
        woman_alts = frozenset(range(len(women) + 1))
        man_alts = frozenset(range(len(men) + 1))
        for i, order in enumerate(men, 1):
            if order.alternatives() != woman_alts:
                raise ValueError(
                    f"man {i}: order must cover every woman and _ exactly once"
                )
        for j, order in enumerate(women, 1):
            if order.alternatives() != man_alts:
                raise ValueError(
                    f"woman {j}: order must cover every man and _ exactly once"
                )
        object.__setattr__(self, "men", men)
        object.__setattr__(self, "women", women)

    @property
    def n_men(self) -> int:
        return len(self.men)

    @property
    def n_women(self) -> int:
        return len(self.women)

    def replace_man(self, i: int, order: WeakOrder) -> "SmiwInstance":
        men = list(self.men)
        men[i - 1] = order
        return SmiwInstance(tuple(men), self.women)


@dataclass(frozen=True)
class UtilityAssignment:
    """Per-woman integer utilities over the men plus the unmatched option."""

    per_woman: tuple[dict[int, int], ...]

    def of(self, j: int) -> dict[int, int]:
        return self.per_woman[j - 1]


@dataclass(frozen=True)
class MatchingOutcome:
    """Assignment of each man to a woman index or UNMATCHED."""

    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        taken: set[int] = set()
        for j in self.assignment:
            if j == UNMATCHED:
                continue
            if j in taken:
                raise ValueError(f"woman {j} matched twice")
            taken.add(j)

    def man_partner(self, i: int) -> int:
        return self.assignment[i - 1]

    def woman_partner(self, j: int) -> int:
        for i, jj in enumerate(self.assignment, 1):
            if jj == j:
                return i
        return UNMATCHED

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i, j in enumerate(self.assignment, 1) if j != UNMATCHED)


def canonical_utility(order: WeakOrder) -> dict[int, int]:
    """Rank-difference utilities for one woman's order.

    The utility of an alternative is the number of alternatives it weakly
    beats, shifted so the unmatched option sits at zero.  Depends only on
    the given order.
    """
    at_or_below = 0
    psi: dict[int, int] = {}
    for tier in reversed(order.tiers):
        at_or_below += len(tier)
        for a in tier:
            psi[a] = at_or_below
    base = psi[UNMATCHED]
    return {a: value - base for a, value in psi.items()}


def canonical_assignment(instance: SmiwInstance) -> UtilityAssignment:
    return UtilityAssignment(tuple(canonical_utility(order) for order in instance.women))


def validate_assignment(instance: SmiwInstance, utilities: UtilityAssignment) -> None:
    """Check a utility assignment against the women's stated orders."""
    if len(utilities.per_woman) != instance.n_women:
        raise ValueError("utility assignment must cover every woman")
    for j, (order, psi) in enumerate(zip(instance.women, utilities.per_woman), 1):
        if set(psi) != set(order.alternatives()):
            raise ValueError(f"woman {j}: utilities must cover every man and _")
        if psi[UNMATCHED] != 0:
            raise ValueError(f"woman {j}: utility of _ must be 0")
        for value in psi.values():
            if not isinstance(value, int):
                raise ValueError(f"woman {j}: utilities must be integers")
        previous: int | None = None
        for tier in order.tiers:
            values = {psi[a] for a in tier}
            if len(values) > 1:
                raise ValueError(f"woman {j}: tied men must share one utility")
            value = values.pop()
            if previous is not None and value >= previous:
                raise ValueError(f"woman {j}: utilities must strictly decrease across tiers")
            previous = value


def _pad_square(
    instance: SmiwInstance, utilities: UtilityAssignment | None
) -> tuple[SmiwInstance, UtilityAssignment]:
    """Equalize the two sides, extending orders and utilities consistently.

    Padding agents put the unmatched option alone in their top tier, so they
    can never be matched; existing agents place them in the tier holding
    their unmatched option, which keeps every padded utility at zero.
    """
    nm, nw = instance.n_men, instance.n_women
    n = max(nm, nw)
    if utilities is None:
        utilities = canonical_assignment(instance)
    else:
        validate_assignment(instance, utilities)
    if nm == nw:
        return instance, utilities

    new_women_idx = range(nw + 1, n + 1)
    new_men_idx = range(nm + 1, n + 1)

    men = [
        WeakOrder(
            tuple(t | frozenset(new_women_idx) if UNMATCHED in t else t for t in order.tiers)
        )
        for order in instance.men
    ]
    women = [
        WeakOrder(
            tuple(t | frozenset(new_men_idx) if UNMATCHED in t else t for t in order.tiers)
        )
        for order in instance.women
    ]
    per_woman = [dict(psi) for psi in utilities.per_woman]
    for psi in per_woman:
        for i in new_men_idx:
            psi[i] = 0

    everyone = frozenset(range(1, n + 1))
    for _ in new_men_idx:
        men.append(WeakOrder((frozenset({UNMATCHED}), everyone)))
    for _ in new_women_idx:
        order = WeakOrder((frozenset({UNMATCHED}), everyone))
        women.append(order)
        per_woman.append(canonical_utility(order))
    padded = SmiwInstance(tuple(men), tuple(women))
    return padded, UtilityAssignment(tuple(per_woman))


def _tier_stride(n: int) -> int:
    # Encodes (man, tier) pairs into bidder ids: a man has at most n + 1 tiers.
    return n + 2


def build_iuap(instance: SmiwInstance, utilities: UtilityAssignment) -> Iuap:
    """Translate a square instance into an iterated auction.

    Items 1..n are the women; item n+i is man i's personal fallback, carried
    at utility zero.  Man i becomes the multibidder of priority i whose k-th
    bidder bids on every item in his k-th tier.
    """
    n = instance.n_men
    if instance.n_women != n:
        raise ValueError("build_iuap expects an equal number of men and women")
    validate_assignment(instance, utilities)
    stride = _tier_stride(n)
    multibidders = []
    for i, order in enumerate(instance.men, 1):
        tiers = []
        for tier in order.tiers:
            tiers.append(frozenset(n + i if a == UNMATCHED else a for a in tier))
        bidders = []
        for k, tier in enumerate(tiers, 1):
            bid = {
                j: (0 if j == n + i else utilities.of(j)[i])
                for j in tier
            }
            bidders.append(Bidder((i - 1) * stride + k, bid, i))
        multibidders.append(Multibidder(tuple(bidders), i))
    items = frozenset(range(1, 2 * n + 1))
    return Iuap(tuple(multibidders), items)


def _man_of_bidder(bidder_id: int, n: int) -> int:
    return (bidder_id - 1) // _tier_stride(n) + 1


def _solve_internal(
    instance: SmiwInstance, utilities: UtilityAssignment | None
) -> tuple[SmiwInstance, UtilityAssignment, RevelationOutcome, dict[int, int]]:
    """Pad, reduce, reveal; return the item matched by each (padded) man."""
    padded, assignment = _pad_square(instance, utilities)
    auction = build_iuap(padded, assignment)
    outcome = reveal_all(auction)
    n = padded.n_men
    item_of_man: dict[int, int] = {}
    for bidder_id, item in outcome.matching.edges:
        i = _man_of_bidder(bidder_id, n)
        if i in item_of_man:
            raise RuntimeError(f"internal consistency failure: man {i} matched twice")
        item_of_man[i] = item
    if set(item_of_man) != set(range(1, n + 1)):
        raise RuntimeError("internal consistency failure: some man has no matched bidder")
    return padded, assignment, outcome, item_of_man


def solve_smiw(
    instance: SmiwInstance, utilities: UtilityAssignment | None = None
) -> MatchingOutcome:
    """Compute the mechanism's matching for an instance.

    ``utilities`` may override the canonical utility assignment; it must be
    consistent with the women's orders and is validated.  The mechanism's
    guarantees hold for any such fixed assignment, although the selected
    matching may differ between assignments.
    """
    padded, _, _, item_of_man = _solve_internal(instance, utilities)
    n = padded.n_men
    result = []
    for i in range(1, instance.n_men + 1):
        j = item_of_man[i]
        if j > n:
            result.append(UNMATCHED)
        else:
            if j > instance.n_women:
                raise RuntimeError("internal consistency failure: matched to a padding woman")
            result.append(j)
    return MatchingOutcome(tuple(result))


def threshold_without_man(
    instance: SmiwInstance, man: int, item: int, utilities: UtilityAssignment | None = None
) -> ThresholdPair:
    """Threshold of woman ``item``'s item in the market without ``man``.

    This is the bound the man's own utility-priority offer is measured
    against when verifying strategyproofness.
    """
    if not 1 <= man <= instance.n_men:
        raise ValueError(f"unknown man {man}")
    if not 1 <= item <= instance.n_women:
        raise ValueError(f"unknown woman {item}")
    padded, assignment = _pad_square(instance, utilities)
    auction = build_iuap(padded, assignment)
    others = Iuap(tuple(t for t in auction.multibidders if t.priority != man), auction.items)
    return iuap_threshold(others, item)


@dataclass(frozen=True)
class ThresholdFact:
    """One verified threshold inequality for a man's matched or skipped item.

    ``kind`` is "matched" when the man's winning offer must weakly clear the
    item's threshold without him, and "preferred" when an offer on a
    strictly better alternative must fall below that item's threshold.
    ``woman`` is UNMATCHED when the item is the man's fallback.
    """

    man: int
    woman: int
    kind: str
    offer: ThresholdPair
    bound: ThresholdPair
    passed: bool


def smiw_threshold_report(
    instance: SmiwInstance, utilities: UtilityAssignment | None = None
) -> list[ThresholdFact]:
    """Verify the threshold inequalities that underpin strategyproofness.

    For each man: his utility-priority offer on the woman he is matched
    with must be at least the threshold of her item in the market without
    him, and his offer on every strictly preferred alternative must be
    strictly below that alternative's threshold.
    """
    padded, assignment, _, item_of_man = _solve_internal(instance, utilities)
    n = padded.n_men
    auction = build_iuap(padded, assignment)
    facts: list[ThresholdFact] = []
    for i in range(1, instance.n_men + 1):
        others = Iuap(
            tuple(t for t in auction.multibidders if t.priority != i), auction.items
        )
        order = padded.men[i - 1]
        matched_item = item_of_man[i]
        matched_alt = UNMATCHED if matched_item == n + i else matched_item

        def offer_on(item: int) -> ThresholdPair:
            value = 0 if item == n + i else assignment.of(item)[i]
            return ThresholdPair(value, i)

        bound = iuap_threshold(others, matched_item)
        offer = offer_on(matched_item)
        facts.append(
            ThresholdFact(
                man=i,
                woman=matched_alt,
                kind="matched",
                offer=offer,
                bound=bound,
                passed=offer >= bound,
            )
        )
        matched_rank = order.rank(matched_alt)
        for j in list(range(1, n + 1)) + [n + i]:
            alt = UNMATCHED if j == n + i else j
            if order.rank(alt) >= matched_rank:
                continue
            bound = iuap_threshold(others, j)
            offer = offer_on(j)
            facts.append(
                ThresholdFact(
                    man=i,
                    woman=alt,
                    kind="preferred",
                    offer=offer,
                    bound=bound,
                    passed=offer < bound,
                )
            )
    return facts
