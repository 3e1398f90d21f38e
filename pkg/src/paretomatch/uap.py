"""Unit-demand auctions with priorities.

A bidder places integer bids on a subset of the items and carries an
integer priority.  The central object computed here is a *greedy*
maximum-weight matching: among all matchings of the bidder-item graph it
maximizes total weight, then cardinality, then the summed priority of the
matched bidders, in that lexicographic order.

The solver is incremental.  Bidders are inserted one at a time and each
insertion runs a single shortest-augmenting-path search over a residual
graph, using maintained potentials (dual prices) so that all reduced edge
costs stay nonnegative and a plain binary-heap Dijkstra suffices.  A
reserved fallback item of weight zero, connected to every bidder, lets the
search express "leave somebody unmatched" as an ordinary path; fallback
edges never appear in extracted matchings.

All arithmetic is exact integer arithmetic.  No floats enter this module.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "DUMMY_ITEM",
    "Bidder",
    "Uap",
    "Matching",
    "ThresholdPair",
    "SolverState",
    "greedy_mwm",
    "threshold",
    "priority_histogram",
]

#: Reserved index of the solver-internal fallback item.  Real items must use
#: positive indices.
DUMMY_ITEM = 0


@dataclass(frozen=True)
class Bidder:
    """A unit-demand bidder: integer id, item -> weight bids, and a priority."""

    id: int
    bid: Mapping[int, int]
    priority: int

    def __post_init__(self) -> None:
        if not isinstance(self.id, int):
            raise ValueError(f"bidder id must be an integer, got {self.id!r}")
        if not isinstance(self.priority, int):
            raise ValueError(f"bidder {self.id}: priority must be an integer, got {self.priority!r}")
        normalized: dict[int, int] = {}
        for item in sorted(self.bid):
            weight = self.bid[item]
            if not isinstance(item, int) or item <= 0:
                raise ValueError(f"bidder {self.id}: item indices must be positive integers, got {item!r}")
            if not isinstance(weight, int):
                raise ValueError(f"bidder {self.id}: bid weights must be integers, got {weight!r}")
            normalized[item] = weight
        object.__setattr__(self, "bid", normalized)

    def items(self) -> frozenset[int]:
        """Set of items this bidder bids on."""
        return frozenset(self.bid)


@dataclass(frozen=True)
class Uap:
    """An auction instance: bidders with distinct ids over a set of items."""

    bidders: tuple[Bidder, ...]
    items: frozenset[int]

    def __post_init__(self) -> None:
        bidders = tuple(sorted(self.bidders, key=lambda b: b.id))
        items = frozenset(self.items)
        for v in items:
            if not isinstance(v, int) or v <= 0:
                raise ValueError(f"item indices must be positive integers, got {v!r}")
        seen: set[int] = set()
        for b in bidders:
            if b.id in seen:
                raise ValueError(f"duplicate bidder id {b.id}")
            seen.add(b.id)
            missing = set(b.bid) - items
            if missing:
                raise ValueError(f"bidder {b.id} bids on unknown items {sorted(missing)}")
        object.__setattr__(self, "bidders", bidders)
        object.__setattr__(self, "items", items)

    def bidder(self, bidder_id: int) -> Bidder:
        for b in self.bidders:
            if b.id == bidder_id:
                return b
        raise KeyError(bidder_id)

    def bidder_ids(self) -> tuple[int, ...]:
        return tuple(b.id for b in self.bidders)


@dataclass(frozen=True)
class Matching:
    """A matching of an auction together with its aggregate statistics.

    ``matched_priorities`` is the sorted multiset of priorities of matched
    bidders; it is the quantity that is identical across every greedy
    maximum-weight matching of the same auction.
    """

    edges: frozenset[tuple[int, int]]
    weight: int
    cardinality: int
    priority_sum: int
    matched_priorities: tuple[int, ...]

    @classmethod
    def from_edges(cls, auction: Uap, edges: Iterable[tuple[int, int]]) -> "Matching":
        """Build a matching from (bidder id, item) pairs, validating it."""
        edge_set = frozenset(edges)
        by_id = {b.id: b for b in auction.bidders}
        seen_bidders: set[int] = set()
        seen_items: set[int] = set()
        weight = 0
        priorities: list[int] = []
        for bidder_id, item in edge_set:
            if bidder_id in seen_bidders:
                raise ValueError(f"bidder {bidder_id} matched twice")
            if item in seen_items:
                raise ValueError(f"item {item} matched twice")
            seen_bidders.add(bidder_id)
            seen_items.add(item)
            b = by_id.get(bidder_id)
            if b is None or item not in b.bid:
                raise ValueError(f"edge ({bidder_id}, {item}) is not in the auction")
            weight += b.bid[item]
            priorities.append(b.priority)
        return cls(
            edges=edge_set,
            weight=weight,
            cardinality=len(edge_set),
            priority_sum=sum(priorities),
            matched_priorities=tuple(sorted(priorities)),
        )

    @property
    def triple(self) -> tuple[int, int, int]:
        """The (weight, cardinality, priority sum) objective, best-first."""
        return (self.weight, self.cardinality, self.priority_sum)

    @property
    def matched_bidders(self) -> frozenset[int]:
        return frozenset(b for b, _ in self.edges)

    def item_of(self, bidder_id: int) -> int | None:
        for b, v in self.edges:
            if b == bidder_id:
                return v
        return None


@dataclass(frozen=True, order=True)
class ThresholdPair:
    """A (weight, priority) pair compared lexicographically, weight first."""

    weight: int
    priority: int


def priority_histogram(matching: Matching) -> Counter:
    """Multiset of priorities of the matched bidders."""
    return Counter(matching.matched_priorities)


class SolverState:
    """Incremental state for maintaining a greedy maximum-weight matching.

    Holds the current matching, item potentials, and the matched bidders'
    bid data; together these encode the residual graph that each insertion
    searches.  Single-owner: one solve at a time, no concurrent mutation.
    """

    def __init__(self, items: Iterable[int]):
        item_list = sorted(set(items))
        for v in item_list:
            if not isinstance(v, int) or v <= 0:
                raise ValueError(f"item indices must be positive integers, got {v!r}")
        self._item_pot: dict[int, int] = {v: 0 for v in item_list}
        self._item_pot[DUMMY_ITEM] = 0
        self._bidder_pot: dict[int, int] = {}
        self._item_of: dict[int, int] = {}  # matched bidder id -> item
        self._holder_of: dict[int, int] = {}  # item -> matched bidder id
        self._matched: dict[int, Bidder] = {}

    @property
    def matched_bidder_ids(self) -> frozenset[int]:
        return frozenset(self._item_of)

    def process(self, newcomer: Bidder) -> int | None:
        """Insert one bidder, restoring greedy optimality.

        Returns the id of the bidder left unmatched by this step: the
        newcomer itself when it cannot be matched without hurting the
        objective, a displaced incumbent when one is swapped out, or None
        when the matching simply grows.
        """
        if newcomer.id in self._matched:
            raise ValueError(f"bidder id {newcomer.id} is already matched")
        for v in newcomer.bid:
            if v not in self._item_pot:
                raise ValueError(f"bidder {newcomer.id} bids on unknown item {v}")

        item_pot = self._item_pot
        bidder_pot = self._bidder_pot
        source = newcomer.id
        pot_source = item_pot[DUMMY_ITEM]
        for v, w in newcomer.bid.items():
            pot_source = max(pot_source, w + item_pot[v])

        # Shortest paths over the residual graph using reduced costs.  The
        # potentials keep every reduced cost nonnegative, so Dijkstra with a
        # binary heap is enough.  Heap entries carry a running counter so
        # ties pop in insertion order, which makes the search deterministic.
        dist_item: dict[int, int] = {}
        dist_bidder: dict[int, int] = {source: 0}
        parent_item: dict[int, int] = {}
        parent_bidder: dict[int, int] = {}
        done_item: set[int] = set()
        done_bidder: set[int] = set()
        heap: list[tuple[int, int, int, int]] = [(0, 0, 1, source)]
        counter = 1
        while heap:
            dr, _, kind, key = heapq.heappop(heap)
            if kind == 1:
                if key in done_bidder:
                    continue
                done_bidder.add(key)
                if key == source:
                    bidder, pot_b = newcomer, pot_source
                else:
                    bidder, pot_b = self._matched[key], bidder_pot[key]
                held = self._item_of.get(key)
                base = dr + pot_b
                for v, w in bidder.bid.items():
                    if v == held or v in done_item:
                        continue
                    nd = base - w - item_pot[v]
                    if v not in dist_item or nd < dist_item[v]:
                        dist_item[v] = nd
                        parent_item[v] = key
                        heapq.heappush(heap, (nd, counter, 0, v))
                        counter += 1
                nd = base - item_pot[DUMMY_ITEM]
                if DUMMY_ITEM not in done_item and (
                    DUMMY_ITEM not in dist_item or nd < dist_item[DUMMY_ITEM]
                ):
                    dist_item[DUMMY_ITEM] = nd
                    parent_item[DUMMY_ITEM] = key
                    heapq.heappush(heap, (nd, counter, 0, DUMMY_ITEM))
                    counter += 1
            else:
                if key in done_item:
                    continue
                done_item.add(key)
                holder = self._holder_of.get(key)
                if holder is not None and holder not in done_bidder:
                    nd = dr + self._matched[holder].bid[key] + item_pot[key] - bidder_pot[holder]
                    if holder not in dist_bidder or nd < dist_bidder[holder]:
                        dist_bidder[holder] = nd
                        parent_bidder[holder] = key
                        heapq.heappush(heap, (nd, counter, 1, holder))
                        counter += 1

        # Convert reduced distances back to true path weights, then pick the
        # augmenting path terminal.  A path to an unmatched real item grows
        # the matching; otherwise the path ends at the bidder that is pushed
        # onto the fallback item, and we take a minimum-priority one so the
        # matching stays priority-maximal.
        target_w = dist_item[DUMMY_ITEM] - pot_source + item_pot[DUMMY_ITEM]
        for v, dr in dist_item.items():
            if v == DUMMY_ITEM or v in self._holder_of:
                continue
            target_w = min(target_w, dr - pot_source + item_pot[v])
        hole: int | None = None
        for v, dr in dist_item.items():
            if v == DUMMY_ITEM or v in self._holder_of:
                continue
            if dr - pot_source + item_pot[v] == target_w and (hole is None or v < hole):
                hole = v

        if hole is not None:
            term_kind, term, dr_t = 0, hole, dist_item[hole]
        else:
            chosen: int | None = None
            chosen_key: tuple[int, int] | None = None
            for b, dr in dist_bidder.items():
                pot_b = pot_source if b == source else bidder_pot[b]
                if dr - pot_source + pot_b != target_w:
                    continue
                pri = newcomer.priority if b == source else self._matched[b].priority
                key = (pri, b)
                if chosen_key is None or key < chosen_key:
                    chosen_key, chosen = key, b
            assert chosen is not None
            term_kind, term, dr_t = 1, chosen, dist_bidder[chosen]

        # Reconstruct the augmenting path and apply it.
        pairs: list[tuple[int, int]] = []
        k, x = term_kind, term
        while not (k == 1 and x == source):
            if k == 0:
                b = parent_item[x]
                pairs.append((b, x))
                k, x = 1, b
            else:
                k, x = 0, parent_bidder[x]

        displaced: int | None = None
        if term_kind == 1 and term != source:
            displaced = term
            del self._holder_of[self._item_of[displaced]]
            del self._item_of[displaced]
            del self._bidder_pot[displaced]
            del self._matched[displaced]
        if term_kind == 0 or term != source:
            self._matched[source] = newcomer
            self._bidder_pot[source] = pot_source
            for b, v in pairs:
                self._item_of[b] = v
                self._holder_of[v] = b
            result = displaced
        else:
            result = source

        # Shift potentials so all residual reduced costs stay nonnegative.
        # Vertices beyond the terminal (or unreached) move by the terminal's
        # reduced distance.
        for v in item_pot:
            dv = dist_item.get(v)
            item_pot[v] += dr_t if (dv is None or dv > dr_t) else dv
        for b in bidder_pot:
            db = dist_bidder.get(b)
            bidder_pot[b] += dr_t if (db is None or db > dr_t) else db
        return result

    def matching(self) -> Matching:
        """Snapshot of the current matching (fallback edges never appear)."""
        edges = frozenset(self._item_of.items())
        weight = sum(self._matched[b].bid[v] for b, v in edges)
        priorities = tuple(sorted(self._matched[b].priority for b in self._item_of))
        return Matching(
            edges=edges,
            weight=weight,
            cardinality=len(edges),
            priority_sum=sum(priorities),
            matched_priorities=priorities,
        )


def greedy_mwm(auction: Uap, order: Sequence[int] | None = None) -> Matching:
    """Greedy maximum-weight matching of an auction.

    Bidders are inserted in ascending id order by default; ``order`` may
    supply any permutation of the bidder ids.  The edge set can depend on
    the insertion order, but the (weight, cardinality, priority histogram)
    aggregates cannot.
    """
    if order is None:
        sequence: Iterator[Bidder] = iter(auction.bidders)
    else:
        ids = list(order)
        if sorted(ids) != sorted(auction.bidder_ids()):
            raise ValueError("order must be a permutation of the auction's bidder ids")
        by_id = {b.id: b for b in auction.bidders}
        sequence = iter(by_id[i] for i in ids)
    state = SolverState(auction.items)
    for bidder in sequence:
        state.process(bidder)
    return state.matching()


def threshold(auction: Uap, item: int) -> ThresholdPair:
    """How strong a single-item bid on ``item`` must be to win.

    Returned as the lexicographic (weight, priority) pair: the difference
    between the greedy matching aggregates of the auction and of the same
    auction with ``item`` deleted.  A fresh probe bidding only on ``item``
    is matched whenever its (weight, priority) exceeds this pair and never
    matched when it falls below it.
    """
    if item not in auction.items:
        raise ValueError(f"unknown item {item}")
    full = greedy_mwm(auction)
    reduced_bidders = tuple(
        Bidder(b.id, {v: w for v, w in b.bid.items() if v != item}, b.priority)
        for b in auction.bidders
    )
    rest = greedy_mwm(Uap(reduced_bidders, auction.items - {item}))
    return ThresholdPair(full.weight - rest.weight, full.priority_sum - rest.priority_sum)
