import pytest

from paretomatch import Bidder, Iuap, Multibidder, SmiwInstance, Uap, WeakOrder


def wo(*tiers):
    """Build a WeakOrder from ints (singleton tiers) or iterables."""
    normalized = []
    for t in tiers:
        if isinstance(t, int):
            normalized.append(frozenset({t}))
        else:
            normalized.append(frozenset(t))
    return WeakOrder(tuple(normalized))


def random_uap(rng, max_bidders=5, max_items=5, weight_range=(0, 9), distinct_priorities=True):
    nb = rng.randint(0, max_bidders)
    ni = rng.randint(1, max_items)
    items = frozenset(range(1, ni + 1))
    if distinct_priorities:
        priorities = rng.sample(range(100), nb)
    else:
        priorities = [rng.randint(0, 5) for _ in range(nb)]
    bidders = []
    for k in range(nb):
        size = rng.randint(0, ni)
        chosen = rng.sample(range(1, ni + 1), size)
        bid = {v: rng.randint(*weight_range) for v in chosen}
        bidders.append(Bidder(k + 1, bid, priorities[k]))
    return Uap(tuple(bidders), items)


def random_iuap(rng, max_multibidders=5, max_chain=3, max_items=5, weight_range=(0, 9)):
    nt = rng.randint(0, max_multibidders)
    ni = rng.randint(1, max_items)
    items = list(range(1, ni + 1))
    priorities = rng.sample(range(50), nt)
    multibidders = []
    next_id = 1
    for z in priorities:
        chain = []
        for _ in range(rng.randint(1, max_chain)):
            size = rng.randint(1, ni)
            chosen = rng.sample(items, size)
            bid = {v: rng.randint(*weight_range) for v in chosen}
            chain.append(Bidder(next_id, bid, z))
            next_id += 1
        multibidders.append(Multibidder(tuple(chain), z))
    return Iuap(tuple(multibidders), frozenset(items))


@pytest.fixture
def instance_i():
    """Three-by-three profile whose weakly stable set has a dominated member."""
    return SmiwInstance(
        men=(wo(2, 3, 1, 0), wo(1, 3, 2, 0), wo({1, 2}, 3, 0)),
        women=(wo(3, 1, 2, 0), wo({1, 2, 3}, 0), wo(3, 2, 1, 0)),
    )


@pytest.fixture
def instance_i_prime(instance_i):
    """Same profile after man 1 flips his second and third choices."""
    return instance_i.replace_man(1, wo(2, 1, 3, 0))


# Assignment tuples of the six perfect matchings of a 3x3 instance, in the
# conventional order M1..M6.
M1 = (1, 2, 3)
M2 = (1, 3, 2)
M3 = (2, 1, 3)
M4 = (2, 3, 1)
M5 = (3, 1, 2)
M6 = (3, 2, 1)
