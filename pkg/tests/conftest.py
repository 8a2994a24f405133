from __future__ import annotations

import random
from collections import Counter

import pytest

from quiverlab.quiver import Quiver, make_quiver


@pytest.fixture
def a1() -> Quiver:
    return make_quiver(["1"], [])


@pytest.fixture
def a2() -> Quiver:
    return make_quiver(["1", "2"], [("1", "2")])


@pytest.fixture
def a3() -> Quiver:
    return make_quiver(["1", "2", "3"], [("1", "2"), ("2", "3")])


@pytest.fixture
def qt() -> Quiver:
    """Transitive tournament on three vertices."""
    return make_quiver(["1", "2", "3"], [("1", "2"), ("2", "3"), ("1", "3")])


@pytest.fixture
def out_star() -> Quiver:
    return make_quiver(["1", "2", "3"], [("1", "2"), ("1", "3")])


def random_tree_quiver(rng: random.Random, n: int) -> Quiver:
    """Random orientation of a random tree on n vertices."""
    verts = [str(i + 1) for i in range(n)]
    pairs = []
    for i in range(1, n):
        p = rng.randrange(i)
        if rng.random() < 0.5:
            pairs.append((verts[p], verts[i]))
        else:
            pairs.append((verts[i], verts[p]))
    return make_quiver(verts, pairs)


def random_acyclic_quiver(
    rng: random.Random, n: int, max_arrows: int, max_multiplicity: int = 2
) -> Quiver:
    """Random DAG; parallel arrows capped so exact depth-4 clusters stay
    desk-sized (high multiplicities make variables astronomically large)."""
    verts = [str(i + 1) for i in range(n)]
    if n < 2:
        return make_quiver(verts, [])
    order = verts[:]
    rng.shuffle(order)
    rank = {v: i for i, v in enumerate(order)}
    pairs = []
    mult: Counter = Counter()
    for _ in range(rng.randint(1, max_arrows)):
        a, b = rng.sample(verts, 2)
        if rank[a] > rank[b]:
            a, b = b, a
        if mult[(a, b)] >= max_multiplicity:
            continue
        mult[(a, b)] += 1
        pairs.append((a, b))
    return make_quiver(verts, pairs)
