from __future__ import annotations

import random

import pytest

from quiverlab.errors import CyclicQuiverError, QuiverStructureError, WalkError
from quiverlab.quiver import (
    Arrow,
    Quiver,
    Walk,
    find_anti_isomorphisms,
    find_isomorphisms,
    is_quiver_with_length,
    is_symmetric_quiver,
    make_quiver,
    opposite,
    verify_quiver_map,
    walk_length,
)
from conftest import random_acyclic_quiver


def arrow_pairs(q: Quiver) -> list[tuple[str, str]]:
    return sorted((a.source, a.target) for a in q.arrows)


def test_opposite_reverses_every_arrow(a2, qt):
    assert arrow_pairs(opposite(a2)) == [("2", "1")]
    assert arrow_pairs(opposite(qt)) == [("2", "1"), ("3", "1"), ("3", "2")]


def test_opposite_is_an_involution():
    rng = random.Random(2)
    for _ in range(25):
        q = random_acyclic_quiver(rng, rng.randint(1, 6), 8)
        assert opposite(opposite(q)) == q


def test_quiver_validation():
    with pytest.raises(QuiverStructureError):
        Quiver(("1",), (Arrow("a", "1", "2"),))
    with pytest.raises(QuiverStructureError):
        Quiver(("1", "2"), (Arrow("a", "1", "2"), Arrow("a", "2", "1")))
    loop = Quiver(("1",), (Arrow("a", "1", "1"),))
    with pytest.raises(QuiverStructureError):
        loop.check_mutable()
    two_cycle = make_quiver(["1", "2"], [("1", "2"), ("2", "1")])
    with pytest.raises(QuiverStructureError):
        two_cycle.check_mutable()


def test_isomorphisms_identity_first(a2):
    maps = find_isomorphisms(a2, a2)
    assert maps[0].vertex_dict() == {"1": "1", "2": "2"}
    assert all(verify_quiver_map(a2, a2, m) for m in maps)


def test_isomorphism_qt_to_opposite_is_unique(qt):
    maps = find_isomorphisms(qt, opposite(qt))
    assert len(maps) == 1
    assert maps[0].vertex_dict() == {"1": "3", "2": "2", "3": "1"}
    assert verify_quiver_map(qt, opposite(qt), maps[0])


def test_star_orientations_not_isomorphic(out_star):
    in_star = make_quiver(["1", "2", "3"], [("2", "1"), ("3", "1")])
    assert find_isomorphisms(out_star, in_star) == []


def test_anti_isomorphisms_match_opposite_search(a2, qt):
    assert [m.vertex_dict() for m in find_anti_isomorphisms(a2, a2)] == [
        {"1": "2", "2": "1"}
    ]
    maps = find_anti_isomorphisms(qt, qt)
    assert [m.vertex_dict() for m in maps] == [{"1": "3", "2": "2", "3": "1"}]
    single = make_quiver(["1"], [])
    assert find_anti_isomorphisms(single, single)[0].vertex_dict() == {"1": "1"}


def test_anti_isomorphism_equivalence_property():
    rng = random.Random(5)
    for _ in range(20):
        q = random_acyclic_quiver(rng, rng.randint(1, 5), 6)
        r = random_acyclic_quiver(rng, rng.randint(1, 5), 6)
        assert bool(find_anti_isomorphisms(q, r)) == bool(
            find_isomorphisms(opposite(q), r)
        )


def test_anti_isomorphism_replay_contract(qt):
    m = find_anti_isomorphisms(qt, qt)[0]
    vmap = m.vertex_dict()
    amap = m.arrow_dict()
    for a in qt.arrows:
        img = qt.arrow(amap[a.id])
        assert img.source == vmap[a.target]
        assert img.target == vmap[a.source]


def test_walk_length(qt):
    a12 = qt.arrows[0].id
    a23 = qt.arrows[1].id
    assert walk_length(qt, Walk(((a12, 1),))) == 1
    assert walk_length(qt, Walk(((a12, 1), (a12, -1)))) == 0
    assert walk_length(qt, Walk(((a12, 1), (a23, 1)))) == 2
    with pytest.raises(WalkError):
        walk_length(qt, Walk(((a23, 1), (a23, 1))))


def test_quiver_with_length(a3, qt, out_star):
    assert is_quiver_with_length(a3) == (True, None)
    ok, pair = is_quiver_with_length(qt)
    assert not ok
    w1, w2 = pair
    assert {len(w1.steps), len(w2.steps)} == {1, 2}
    assert is_quiver_with_length(out_star)[0]


def test_quiver_with_length_rejects_cycles():
    cyc = make_quiver(["1", "2", "3"], [("1", "2"), ("2", "3"), ("3", "1")])
    with pytest.raises(CyclicQuiverError):
        is_quiver_with_length(cyc)


def test_with_length_consistent_with_brute_force():
    rng = random.Random(11)
    for _ in range(20):
        q = random_acyclic_quiver(rng, rng.randint(2, 5), 6, max_multiplicity=1)
        ok, _ = is_quiver_with_length(q)
        # brute force: all directed paths per ordered pair, compare lengths
        paths: dict[tuple[str, str], set[int]] = {}

        def dfs(start, v, length):
            for a in q.out_arrows(v):
                paths.setdefault((start, a.target), set()).add(length + 1)
                dfs(start, a.target, length + 1)

        for v in q.vertices:
            dfs(v, v, 0)
        brute = all(len(ls) == 1 for ls in paths.values())
        assert ok == brute


def test_symmetric_quiver_discrete_and_single_arrow():
    discrete = make_quiver(["2", "3"], [])
    m = is_symmetric_quiver(discrete)
    assert m is not None and m.vertex_dict() == {"2": "2", "3": "3"}

    single = make_quiver(["1", "2"], [("1", "2")])
    m = is_symmetric_quiver(single)
    assert m is not None
    assert m.vertex_dict() == {"1": "2", "2": "1"}
    aid = single.arrows[0].id
    assert m.arrow_dict() == {aid: aid}


def test_symmetric_quiver_path_half_turn(a3):
    # the half-turn 1<->3 reverses both arrows and is an involution, so the
    # equioriented path is symmetric; condition (b) never applies to it
    m = is_symmetric_quiver(a3)
    assert m is not None
    assert m.vertex_dict() == {"1": "3", "2": "2", "3": "1"}
    for a in a3.arrows:
        img = a3.arrow(m.arrow_dict()[a.id])
        if m.vertex_dict()[a.target] == a.source:
            assert img == a


def test_symmetric_quiver_conditions_hold_whenever_found():
    rng = random.Random(23)
    for _ in range(30):
        q = random_acyclic_quiver(rng, rng.randint(1, 5), 6)
        m = is_symmetric_quiver(q)
        if m is None:
            continue
        vmap, amap = m.vertex_dict(), m.arrow_dict()
        assert all(vmap[vmap[v]] == v for v in q.vertices)
        assert all(amap[amap[a.id]] == a.id for a in q.arrows)
        for a in q.arrows:
            img = q.arrow(amap[a.id])
            assert img.source == vmap[a.target]
            assert img.target == vmap[a.source]
            if vmap[a.target] == a.source:
                assert amap[a.id] == a.id


def test_asymmetric_example():
    # out-degrees force the unique candidate map, which breaks condition (a)
    q = make_quiver(["1", "2", "3"], [("1", "2"), ("1", "3"), ("2", "3")])
    double = make_quiver(["1", "2", "3"], [("1", "2"), ("1", "2"), ("2", "3")])
    assert is_symmetric_quiver(double) is None


def test_json_round_trip(qt):
    assert Quiver.from_json(qt.to_json()) == qt
    doc = {"vertices": ["1", "2"], "arrows": [{"source": "1", "target": "2"}]}
    q = Quiver.from_doc(doc)
    assert q.arrows[0].id == "a0"


def test_dot_export(qt):
    dot = qt.to_dot()
    assert dot.startswith("digraph")
    assert '"1" -> "2"' in dot
