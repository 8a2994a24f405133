from __future__ import annotations

import itertools
import random

import pytest

from quiverlab.algebra import laurent_form
from quiverlab.errors import MutationError, QuiverStructureError
from quiverlab.mutation import (
    enumerate_cluster_variables,
    exchange_terms,
    initial_seed,
    mutation_class,
    op_mutation_equivalent,
    quiver_mutate,
    seed_mutate,
)
from quiverlab.quiver import Quiver, make_quiver, opposite
from conftest import random_acyclic_quiver


def pairs(q: Quiver) -> list[tuple[str, str]]:
    return sorted((a.source, a.target) for a in q.arrows)


def test_mutate_a2_reverses_the_arrow(a2):
    assert pairs(quiver_mutate(a2, "1")) == [("2", "1")]


def test_mutate_qt_creates_double_arrow(qt):
    m = quiver_mutate(qt, "2")
    assert pairs(m) == [("1", "3"), ("1", "3"), ("2", "1"), ("3", "2")]


def test_mutation_errors(qt):
    with pytest.raises(MutationError):
        quiver_mutate(qt, "9")
    two_cycle = make_quiver(["1", "2"], [("1", "2"), ("2", "1")])
    with pytest.raises(QuiverStructureError):
        quiver_mutate(two_cycle, "1")


def test_mutation_involutivity_randomized():
    rng = random.Random(31)
    for _ in range(40):
        q = random_acyclic_quiver(rng, rng.randint(2, 6), 8)
        for k in q.vertices:
            assert quiver_mutate(quiver_mutate(q, k), k).same_labeled(q)


def test_mutation_commutes_with_opposite():
    rng = random.Random(32)
    for _ in range(40):
        q = random_acyclic_quiver(rng, rng.randint(2, 6), 8)
        for k in q.vertices:
            assert opposite(quiver_mutate(q, k)).same_labeled(
                quiver_mutate(opposite(q), k)
            )


def test_seed_mutation_a2(a2):
    s = seed_mutate(initial_seed(a2), "1")
    assert s.variable("1").render() == "(x2 + 1)/(x1)"
    assert s.variable("2").render() == "x2"
    assert s.history == ("1",)


def test_seed_mutation_qt_reproduces_known_values(qt):
    s1 = seed_mutate(initial_seed(qt), "1")
    assert s1.variable("1").render() == "(x2*x3 + 1)/(x1)"
    s12 = seed_mutate(s1, "2")
    assert s12.variable("2").render() == "(x1 + x2*x3^2 + x3)/(x1*x2)"


def test_exchange_identity_randomized():
    rng = random.Random(33)
    for _ in range(30):
        q = random_acyclic_quiver(rng, rng.randint(2, 5), 6)
        s = initial_seed(q)
        k = rng.choice(q.vertices)
        out_p, in_p = exchange_terms(s, k)
        s2 = seed_mutate(s, k)
        assert s.variable(k) * s2.variable(k) == out_p + in_p


def _canonical_form(q: Quiver) -> tuple:
    """Isomorphism-class key by brute force over all vertex relabelings."""
    best = None
    for perm in itertools.permutations(range(len(q.vertices))):
        relabel = {v: str(perm[i]) for i, v in enumerate(q.vertices)}
        key = tuple(sorted((relabel[a.source], relabel[a.target]) for a in q.arrows))
        if best is None or key < best:
            best = key
    return (len(q.vertices), best)


def _brute_force_class_count(q: Quiver, depth: int) -> tuple[int, bool]:
    seen_labeled = {tuple(sorted(pairs(q)))}
    forms = {_canonical_form(q)}
    frontier = [q]
    for _ in range(depth):
        nxt = []
        for cur in frontier:
            for k in cur.vertices:
                child = quiver_mutate(cur, k)
                key = tuple(sorted(pairs(child)))
                if key in seen_labeled:
                    continue
                seen_labeled.add(key)
                nxt.append(child)
                forms.add(_canonical_form(child))
        frontier = nxt
    return len(forms), not frontier


def test_mutation_class_a2(a2):
    r = mutation_class(a2, 5)
    assert len(r.representatives) == 1
    assert r.complete
    assert _brute_force_class_count(a2, 5) == (1, True)


def test_mutation_class_qt(qt):
    r = mutation_class(qt, 6)
    assert len(r.representatives) == 2
    assert r.complete
    assert _brute_force_class_count(qt, 6)[0] == 2
    # the companion class carries a double arrow on a 3-cycle
    shapes = [sorted(cnt for cnt in q.pair_counts().values()) for q, _ in r.representatives]
    assert [1, 1, 2] in shapes


def test_mutation_class_a3(a3):
    r = mutation_class(a3, 8)
    assert len(r.representatives) == 4
    assert r.complete
    assert _brute_force_class_count(a3, 8) == (4, True)


def test_op_equivalence_qt_immediate(qt):
    r = op_mutation_equivalent(qt, 6)
    assert r.sequence == ()
    assert r.iso.vertex_dict() == {"1": "3", "2": "2", "3": "1"}


def test_op_equivalence_star(out_star):
    r = op_mutation_equivalent(out_star, 6)
    assert r.sequence == ("1",)
    assert r.iso.vertex_dict() == {"1": "1", "2": "2", "3": "3"}


def test_op_equivalence_a3(a3):
    r = op_mutation_equivalent(a3, 6)
    assert r.sequence == ()
    assert r.iso.vertex_dict() == {"1": "3", "2": "2", "3": "1"}


def test_op_equivalence_depth_capped(out_star):
    r = op_mutation_equivalent(out_star, 0)
    assert r.sequence is None
    assert not r.complete


def test_enumerate_a2_closes_at_five_variables(a2):
    vs = enumerate_cluster_variables(initial_seed(a2), 5)
    assert sorted(e.render() for e in vs) == [
        "(x1 + 1)/(x2)",
        "(x1 + x2 + 1)/(x1*x2)",
        "(x2 + 1)/(x1)",
        "x1",
        "x2",
    ]
    assert enumerate_cluster_variables(initial_seed(a2), 6) == vs


def test_enumerate_single_vertex(a1):
    vs = enumerate_cluster_variables(initial_seed(a1), 3)
    assert sorted(e.render() for e in vs) == ["(2)/(x1)", "x1"]


def test_enumerate_qt_contains_reference_values(qt):
    rendered = {e.render() for e in enumerate_cluster_variables(initial_seed(qt), 2)}
    assert "(x2*x3 + 1)/(x1)" in rendered
    assert "(x1 + x2*x3^2 + x3)/(x1*x2)" in rendered


def test_every_enumerated_variable_is_laurent():
    rng = random.Random(34)
    for _ in range(10):
        q = random_acyclic_quiver(rng, rng.randint(2, 5), 6)
        vs = enumerate_cluster_variables(initial_seed(q), 3)
        assert all(laurent_form(e) is not None for e in vs)


def test_cluster_is_a_weak_transcendence_basis_proxy():
    rng = random.Random(35)
    for _ in range(15):
        q = random_acyclic_quiver(rng, rng.randint(2, 5), 6)
        s = initial_seed(q)
        for k in rng.choices(q.vertices, k=3):
            s = seed_mutate(s, k)
        exprs = [e for _, e in s.cluster]
        assert len(set(exprs)) == len(exprs)
        assert all(not e.is_constant() for e in exprs)
