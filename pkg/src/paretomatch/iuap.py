"""Iterated auctions: multibidders revealing fallback bids one at a time.

A multibidder owns an ordered sequence of bidders that all share one
priority.  The revelation loop keeps an auction of the bidders revealed so
far together with its greedy maximum-weight matching; whenever a
multibidder's priority is absent from the matching and it still has
unrevealed bidders, its next bidder becomes ready and may be revealed.
The loop is confluent: the final auction does not depend on which ready
bidder is picked at each step, so any revelation policy yields the same
winners, losers, and thresholds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .uap import Bidder, Matching, SolverState, ThresholdPair, Uap, threshold

__all__ = [
    "Multibidder",
    "Iuap",
    "RevelationOutcome",
    "reveal_all",
    "to_uap",
    "winners",
    "losers",
    "add_bidder",
    "iuap_threshold",
    "exit_check",
]


@dataclass(frozen=True)
class Multibidder:
    """An ordered sequence of fallback bidders sharing one priority."""

    bidders: tuple[Bidder, ...]
    priority: int

    def __post_init__(self) -> None:
        bidders = tuple(self.bidders)
        if not bidders:
            raise ValueError("a multibidder needs at least one bidder")
        seen: set[int] = set()
        for b in bidders:
            if b.id in seen:
                raise ValueError(f"duplicate bidder id {b.id} inside a multibidder")
            seen.add(b.id)
            if b.priority != self.priority:
                raise ValueError(
                    f"bidder {b.id} has priority {b.priority}, expected {self.priority}"
                )
        object.__setattr__(self, "bidders", bidders)


@dataclass(frozen=True)
class Iuap:
    """A set of multibidders with pairwise distinct priorities over items."""

    multibidders: tuple[Multibidder, ...]
    items: frozenset[int]

    def __post_init__(self) -> None:
        mbs = tuple(sorted(self.multibidders, key=lambda t: t.priority))
        items = frozenset(self.items)
        priorities: set[int] = set()
        ids: set[int] = set()
        for t in mbs:
            if t.priority in priorities:
                raise ValueError(f"duplicate multibidder priority {t.priority}")
            priorities.add(t.priority)
            for b in t.bidders:
                if b.id in ids:
                    raise ValueError(f"bidder id {b.id} appears in two multibidders")
                ids.add(b.id)
                missing = set(b.bid) - items
                if missing:
                    raise ValueError(f"bidder {b.id} bids on unknown items {sorted(missing)}")
        object.__setattr__(self, "multibidders", mbs)
        object.__setattr__(self, "items", items)

    def all_bidders(self) -> tuple[Bidder, ...]:
        return tuple(b for t in self.multibidders for b in t.bidders)


@dataclass(frozen=True)
class RevelationOutcome:
    """Result of running the revelation loop to completion."""

    revealed: tuple[Bidder, ...]
    matching: Matching
    uap: Uap


def reveal_all(instance: Iuap, rng: random.Random | None = None) -> RevelationOutcome:
    """Run the revelation loop until no bidder is ready.

    With ``rng`` unset the ready multibidder of lowest priority is revealed
    first; otherwise the choice is drawn from ``rng``.  By confluence the
    returned auction, matching aggregates, and winner set are the same for
    every policy.
    """
    state = SolverState(instance.items)
    by_priority = {t.priority: t for t in instance.multibidders}
    progress = {z: 0 for z in by_priority}
    priority_of = {b.id: t.priority for t in instance.multibidders for b in t.bidders}
    ready = set(by_priority)
    revealed: list[Bidder] = []
    while ready:
        if rng is None:
            z = min(ready)
        else:
            z = rng.choice(sorted(ready))
        mb = by_priority[z]
        bidder = mb.bidders[progress[z]]
        progress[z] += 1
        revealed.append(bidder)
        dropped = state.process(bidder)
        if dropped == bidder.id:
            if progress[z] >= len(mb.bidders):
                ready.discard(z)
        else:
            ready.discard(z)
            if dropped is not None:
                z2 = priority_of[dropped]
                if progress[z2] < len(by_priority[z2].bidders):
                    ready.add(z2)
    return RevelationOutcome(
        revealed=tuple(revealed),
        matching=state.matching(),
        uap=Uap(tuple(revealed), instance.items),
    )


def to_uap(instance: Iuap, rng: random.Random | None = None) -> Uap:
    """The auction of revealed bidders once the revelation loop halts."""
    return reveal_all(instance, rng).uap


def winners(instance: Iuap) -> frozenset[int]:
    """Bidders matched in every greedy maximum-weight matching of the result."""
    return reveal_all(instance).matching.matched_bidders


def losers(instance: Iuap) -> frozenset[int]:
    """Revealed bidders that end up unmatched."""
    outcome = reveal_all(instance)
    return frozenset(b.id for b in outcome.revealed) - outcome.matching.matched_bidders


def add_bidder(instance: Iuap, newcomer: Bidder) -> Iuap:
    """Append a bidder to the multibidder sharing its priority, or start one."""
    for t in instance.multibidders:
        for b in t.bidders:
            if b.id == newcomer.id:
                raise ValueError(f"duplicate bidder id {newcomer.id}")
    replaced = False
    mbs: list[Multibidder] = []
    for t in instance.multibidders:
        if t.priority == newcomer.priority:
            mbs.append(Multibidder(t.bidders + (newcomer,), t.priority))
            replaced = True
        else:
            mbs.append(t)
    if not replaced:
        mbs.append(Multibidder((newcomer,), newcomer.priority))
    return Iuap(tuple(mbs), instance.items)


def iuap_threshold(instance: Iuap, item: int) -> ThresholdPair:
    """Threshold of an item in an iterated auction.

    Realized by adding a probe bidder with a fresh id, a fresh priority above
    every existing one, and a bid on ``item`` large enough that it must win;
    the revealed auction minus the probe is then the unique auction against
    which the plain item threshold is taken.
    """
    if item not in instance.items:
        raise ValueError(f"unknown item {item}")
    all_bidders = instance.all_bidders()
    probe_id = max((b.id for b in all_bidders), default=0) + 1
    probe_priority = max((t.priority for t in instance.multibidders), default=0) + 1
    offer = 1 + sum(abs(w) for b in all_bidders for w in b.bid.values())
    probe = Bidder(probe_id, {item: offer}, probe_priority)
    outcome = reveal_all(add_bidder(instance, probe))
    if probe_id not in outcome.matching.matched_bidders:
        raise RuntimeError("internal consistency failure: oversized probe bid did not win")
    rest = tuple(b for b in outcome.revealed if b.id != probe_id)
    return threshold(Uap(rest, instance.items), item)


def exit_check(instance: Iuap, matching: Matching) -> list[str]:
    """Diagnose the exit state of the revelation loop against a matching.

    For each multibidder: if its k-th bidder is matched, exactly the first k
    bidders must have been revealed; if none is matched, all of them must
    have been.  Returns human-readable violations (empty when consistent).
    """
    outcome = reveal_all(instance)
    revealed_ids = {b.id for b in outcome.revealed}
    matched_ids = matching.matched_bidders
    violations: list[str] = []
    for t in instance.multibidders:
        ids = [b.id for b in t.bidders]
        matched_ks = [k for k, i in enumerate(ids, 1) if i in matched_ids]
        present = [i for i in ids if i in revealed_ids]
        if len(matched_ks) > 1:
            violations.append(
                f"multibidder priority {t.priority}: bidders {matched_ks} all matched"
            )
        elif matched_ks:
            k = matched_ks[0]
            if present != ids[:k]:
                violations.append(
                    f"multibidder priority {t.priority}: matched at position {k} "
                    f"but revealed {present}"
                )
        else:
            if present != ids:
                violations.append(
                    f"multibidder priority {t.priority}: unmatched but revealed only {present}"
                )
    return violations
