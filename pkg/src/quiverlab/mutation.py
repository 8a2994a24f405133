"""Quiver and seed mutation, mutation classes, and Q ~ Q^op equivalence.

Mutation at k: (a) one new arrow i -> j per ordered pair of arrows
(i -> k, k -> j); (b) every arrow incident to k reversed; (c) 2-cycles
cancelled in pairs.  The exchange relation replaces the variable at k by

    x_k' = (prod over arrows out of k of x_target
            + prod over arrows into k of x_source) / x_k

with empty products equal to 1.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .algebra import RationalExpr, laurent_form
from .errors import InvariantViolation, MutationError
from .quiver import (
    Arrow,
    Quiver,
    QuiverMap,
    find_isomorphisms,
    is_isomorphic,
    opposite,
)

MutationSequence = tuple[str, ...]


def variable_names(q: Quiver) -> tuple[str, ...]:
    """One algebra variable per vertex, in canonical vertex order."""
    return tuple(f"x{v}" for v in q.vertices)


@dataclass(frozen=True)
class Seed:
    """A quiver together with one cluster variable per vertex.

    Cluster entries are expressed in the initial cluster's variables.
    ``history`` is the mutation sequence that produced this seed.
    """

    quiver: Quiver
    cluster: tuple[tuple[str, RationalExpr], ...]
    history: MutationSequence = ()

    def variable(self, v: str) -> RationalExpr:
        for u, expr in self.cluster:
            if u == v:
                return expr
        raise MutationError(f"no cluster variable at vertex {v!r}")

    def cluster_dict(self) -> dict[str, RationalExpr]:
        return dict(self.cluster)

    def rendered_cluster(self) -> dict[str, str]:
        return {v: expr.render() for v, expr in self.cluster}

    def key(self) -> tuple:
        """Dedup key: labeled quiver shape plus the exact cluster."""
        return (
            tuple(sorted(self.quiver.pair_counts().items())),
            tuple((v, e.num, e.den) for v, e in self.cluster),
        )


def initial_seed(q: Quiver) -> Seed:
    q.check_mutable()
    names = variable_names(q)
    cluster = tuple(
        (v, RationalExpr.variable(names, f"x{v}")) for v in q.vertices
    )
    return Seed(quiver=q, cluster=cluster, history=())


def seed_from_state(doc: dict) -> Seed:
    """Rebuild a seed from an exported state (quiver + history).

    Mutation is involutive, so undoing the recorded history recovers the
    initial quiver; replaying it forward restores the exact cluster.
    A cluster present in the document is checked against the replay.
    """
    q = Quiver.from_doc(doc["quiver"])
    history = [str(v) for v in doc.get("history", [])]
    for k in reversed(history):
        q = quiver_mutate(q, k)
    seed = initial_seed(q)
    for k in history:
        seed = seed_mutate(seed, k)
    expected = doc.get("cluster")
    if expected is not None and seed.rendered_cluster() != expected:
        raise MutationError("seed state does not replay to its recorded cluster")
    return seed


def quiver_mutate(q: Quiver, k: str) -> Quiver:
    if k not in q.vertices:
        raise MutationError(f"unknown vertex {k!r}")
    q.check_mutable()
    incoming = q.in_arrows(k)
    outgoing = q.out_arrows(k)
    used_ids = {a.id for a in q.arrows}
    new_arrows: list[Arrow] = []
    for a in incoming:
        for b in outgoing:
            idx = 0
            while f"{a.source}->{b.target}~m{idx}" in used_ids:
                idx += 1
            aid = f"{a.source}->{b.target}~m{idx}"
            used_ids.add(aid)
            new_arrows.append(Arrow(id=aid, source=a.source, target=b.target))
    reversed_arrows = [
        Arrow(id=a.id, source=a.target, target=a.source)
        if a.source == k or a.target == k
        else a
        for a in q.arrows
    ]
    all_arrows = reversed_arrows + new_arrows
    fresh = {a.id for a in new_arrows}

    # cancel 2-cycles pairwise; drop arrows created in this call first,
    # then by id, so surviving ids are deterministic
    counts = Counter((a.source, a.target) for a in all_arrows)
    drop: set[str] = set()
    for (s, t) in sorted(counts):
        if s >= t:
            continue
        m = min(counts[(s, t)], counts.get((t, s), 0))
        if m == 0:
            continue
        for (src, tgt) in ((s, t), (t, s)):
            cand = sorted(
                (a for a in all_arrows if a.source == src and a.target == tgt),
                key=lambda a: (a.id not in fresh, a.id),
            )
            drop.update(a.id for a in cand[:m])
    return Quiver(
        vertices=q.vertices,
        arrows=tuple(a for a in all_arrows if a.id not in drop),
    )


def exchange_terms(s: Seed, k: str) -> tuple[RationalExpr, RationalExpr]:
    """The two products of the exchange relation at k, before division."""
    names = variable_names(s.quiver)
    one = RationalExpr.constant(names, 1)
    cluster = s.cluster_dict()
    out_prod = one
    for a in s.quiver.out_arrows(k):
        out_prod = out_prod * cluster[a.target]
    in_prod = one
    for a in s.quiver.in_arrows(k):
        in_prod = in_prod * cluster[a.source]
    return out_prod, in_prod


def seed_mutate(s: Seed, k: str) -> Seed:
    if k not in s.quiver.vertices:
        raise MutationError(f"unknown vertex {k!r}")
    out_prod, in_prod = exchange_terms(s, k)
    new_var = (out_prod + in_prod) / s.variable(k)
    new_quiver = quiver_mutate(s.quiver, k)
    cluster = tuple(
        (v, new_var if v == k else expr) for v, expr in s.cluster
    )
    return Seed(quiver=new_quiver, cluster=cluster, history=s.history + (k,))


def _quiver_signature(q: Quiver) -> tuple:
    """Cheap isomorphism invariant used to bucket candidates."""
    degs = sorted(
        (len(q.out_arrows(v)), len(q.in_arrows(v))) for v in q.vertices
    )
    mult = sorted(q.pair_counts().values())
    return (len(q.vertices), len(q.arrows), tuple(degs), tuple(mult))


@dataclass(frozen=True)
class MutationClassResult:
    representatives: tuple[tuple[Quiver, MutationSequence], ...]
    complete: bool


def mutation_class(q: Quiver, max_depth: int) -> MutationClassResult:
    """BFS over mutations, deduplicating up to unlabeled isomorphism."""
    q.check_mutable()
    reps: list[tuple[Quiver, MutationSequence]] = [(q, ())]
    buckets: dict[tuple, list[int]] = {_quiver_signature(q): [0]}
    seen_labeled: set[tuple] = {tuple(sorted(q.pair_counts().items()))}
    frontier: list[tuple[Quiver, MutationSequence]] = [(q, ())]
    complete = True
    for _ in range(max_depth):
        if not frontier:
            break
        next_frontier: list[tuple[Quiver, MutationSequence]] = []
        for cur, seq in frontier:
            for k in cur.vertices:
                if seq and seq[-1] == k:
                    continue
                child = quiver_mutate(cur, k)
                label_key = tuple(sorted(child.pair_counts().items()))
                if label_key in seen_labeled:
                    continue
                seen_labeled.add(label_key)
                next_frontier.append((child, seq + (k,)))
                sig = _quiver_signature(child)
                known = any(
                    is_isomorphic(child, reps[i][0]) for i in buckets.get(sig, [])
                )
                if not known:
                    buckets.setdefault(sig, []).append(len(reps))
                    reps.append((child, seq + (k,)))
        frontier = next_frontier
    if frontier:
        complete = False
    return MutationClassResult(representatives=tuple(reps), complete=complete)


@dataclass(frozen=True)
class OpEquivalenceResult:
    sequence: Optional[MutationSequence]
    iso: Optional[QuiverMap]
    complete: bool

    @property
    def found(self) -> bool:
        return self.sequence is not None


def op_mutation_equivalent(q: Quiver, max_depth: int) -> OpEquivalenceResult:
    """Shortest mutation sequence w with opposite(q) isomorphic to mu_w(q)."""
    q.check_mutable()
    qop = opposite(q)
    frontier: list[tuple[Quiver, MutationSequence]] = [(q, ())]
    seen: set[tuple] = {tuple(sorted(q.pair_counts().items()))}
    depth = 0
    while True:
        for cur, seq in frontier:
            isos = find_isomorphisms(qop, cur, first_only=True)
            if isos:
                return OpEquivalenceResult(sequence=seq, iso=isos[0], complete=True)
        if depth == max_depth:
            return OpEquivalenceResult(sequence=None, iso=None, complete=not frontier)
        next_frontier = []
        for cur, seq in frontier:
            for k in cur.vertices:
                if seq and seq[-1] == k:
                    continue
                child = quiver_mutate(cur, k)
                key = tuple(sorted(child.pair_counts().items()))
                if key in seen:
                    continue
                seen.add(key)
                next_frontier.append((child, seq + (k,)))
        frontier = next_frontier
        depth += 1
        if not frontier:
            return OpEquivalenceResult(sequence=None, iso=None, complete=True)


def seed_bfs(s: Seed, max_depth: int):
    """Yield (seed, depth) over distinct seeds reachable within max_depth."""
    seen = {s.key()}
    frontier = [s]
    yield s, 0
    for depth in range(1, max_depth + 1):
        next_frontier = []
        for cur in frontier:
            for k in cur.quiver.vertices:
                if cur.history and cur.history[-1] == k:
                    continue
                child = seed_mutate(cur, k)
                key = child.key()
                if key in seen:
                    continue
                seen.add(key)
                next_frontier.append(child)
                yield child, depth
        frontier = next_frontier
        if not frontier:
            return


def enumerate_cluster_variables(s: Seed, max_depth: int) -> set[RationalExpr]:
    """All cluster variables reachable within max_depth mutations.

    Every new variable must admit a Laurent form; a failure is reported
    as an invariant violation (it signals a bug, not a user error).
    """
    out: set[RationalExpr] = set()
    for seed, _ in seed_bfs(s, max_depth):
        for v, expr in seed.cluster:
            if expr not in out:
                if laurent_form(expr) is None:
                    raise InvariantViolation(
                        f"cluster variable {expr.render()} at {v!r} is not Laurent"
                    )
                out.add(expr)
    return out
