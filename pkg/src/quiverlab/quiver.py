"""Quiver data model, (anti-)isomorphism search, walks and length predicates.

A quiver is a finite directed multigraph.  Vertices are opaque string
labels; parallel arrows are first-class and identified by arrow id, not
by their endpoint pair.  The vertex tuple order is the canonical order
used everywhere determinism matters.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import CyclicQuiverError, QuiverStructureError, WalkError

VertexId = str
ArrowId = str


@dataclass(frozen=True)
class Arrow:
    id: ArrowId
    source: VertexId
    target: VertexId


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[VertexId, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self) -> None:
        seen_v = set()
        for v in self.vertices:
            if v in seen_v:
                raise QuiverStructureError(f"duplicate vertex {v!r}")
            seen_v.add(v)
        seen_a = set()
        for a in self.arrows:
            if a.id in seen_a:
                raise QuiverStructureError(f"duplicate arrow id {a.id!r}")
            seen_a.add(a.id)
            if a.source not in seen_v or a.target not in seen_v:
                raise QuiverStructureError(
                    f"arrow {a.id!r} references unknown vertex"
                )

    # -- basic structure -------------------------------------------------

    def out_arrows(self, v: VertexId) -> tuple[Arrow, ...]:
        return tuple(a for a in self.arrows if a.source == v)

    def in_arrows(self, v: VertexId) -> tuple[Arrow, ...]:
        return tuple(a for a in self.arrows if a.target == v)

    def arrow(self, arrow_id: ArrowId) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise QuiverStructureError(f"unknown arrow {arrow_id!r}")

    def arrows_between(self, s: VertexId, t: VertexId) -> tuple[Arrow, ...]:
        return tuple(a for a in self.arrows if a.source == s and a.target == t)

    def pair_counts(self) -> Counter:
        return Counter((a.source, a.target) for a in self.arrows)

    def sinks(self) -> tuple[VertexId, ...]:
        return tuple(v for v in self.vertices if not self.out_arrows(v))

    def sources(self) -> tuple[VertexId, ...]:
        return tuple(v for v in self.vertices if not self.in_arrows(v))

    def has_loops(self) -> bool:
        return any(a.source == a.target for a in self.arrows)

    def has_two_cycles(self) -> bool:
        counts = self.pair_counts()
        return any(
            counts[(t, s)] > 0 for (s, t) in counts if s != t and counts[(s, t)] > 0
        )

    def check_mutable(self) -> None:
        """Mutation inputs must be loop- and 2-cycle-free."""
        if self.has_loops():
            raise QuiverStructureError("quiver has a loop")
        if self.has_two_cycles():
            raise QuiverStructureError("quiver has a 2-cycle")

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None

    def topological_order(self) -> Optional[tuple[VertexId, ...]]:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.target] += 1
        ready = [v for v in self.vertices if indeg[v] == 0]
        order: list[VertexId] = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for a in self.out_arrows(v):
                indeg[a.target] -= 1
                if indeg[a.target] == 0:
                    ready.append(a.target)
        if len(order) != len(self.vertices):
            return None
        return tuple(order)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        frontier = [self.vertices[0]]
        adj: dict[VertexId, set[VertexId]] = {v: set() for v in self.vertices}
        for a in self.arrows:
            adj[a.source].add(a.target)
            adj[a.target].add(a.source)
        while frontier:
            v = frontier.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return len(seen) == len(self.vertices)

    def same_labeled(self, other: "Quiver") -> bool:
        """Equality as labeled quivers: vertices and arrow-endpoint multisets.

        Arrow ids are bookkeeping identity only; mutation may cancel and
        recreate parallel arrows, so ids are not preserved by round trips.
        """
        return (
            self.vertices == other.vertices
            and self.pair_counts() == other.pair_counts()
        )

    def full_subquiver(self, vs: Iterator[VertexId] | tuple[VertexId, ...]) -> "Quiver":
        keep = set(vs)
        return Quiver(
            vertices=tuple(v for v in self.vertices if v in keep),
            arrows=tuple(
                a for a in self.arrows if a.source in keep and a.target in keep
            ),
        )

    # -- serialization ----------------------------------------------------

    def to_doc(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [
                {"id": a.id, "source": a.source, "target": a.target}
                for a in self.arrows
            ],
        }

    @staticmethod
    def from_doc(doc: dict) -> "Quiver":
        if not isinstance(doc, dict) or "vertices" not in doc:
            raise QuiverStructureError("quiver document must have a 'vertices' list")
        vertices = tuple(str(v) for v in doc["vertices"])
        arrows = []
        for i, a in enumerate(doc.get("arrows", [])):
            arrows.append(
                Arrow(
                    id=str(a.get("id", f"a{i}")),
                    source=str(a["source"]),
                    target=str(a["target"]),
                )
            )
        return Quiver(vertices=vertices, arrows=tuple(arrows))

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "Quiver":
        return Quiver.from_doc(json.loads(text))

    def to_dot(self, name: str = "Q") -> str:
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for a in self.arrows:
            lines.append(f'  "{a.source}" -> "{a.target}" [label="{a.id}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def make_quiver(vertices, arrow_pairs) -> Quiver:
    """Convenience constructor; arrow ids are generated as ``s->t~n``."""
    counts: Counter = Counter()
    arrows = []
    for s, t in arrow_pairs:
        s, t = str(s), str(t)
        idx = counts[(s, t)]
        counts[(s, t)] += 1
        arrows.append(Arrow(id=f"{s}->{t}~{idx}", source=s, target=t))
    return Quiver(vertices=tuple(str(v) for v in vertices), arrows=tuple(arrows))


def opposite(q: Quiver) -> Quiver:
    """Reverse every arrow, keeping vertex and arrow ids."""
    return Quiver(
        vertices=q.vertices,
        arrows=tuple(Arrow(id=a.id, source=a.target, target=a.source) for a in q.arrows),
    )


# -- quiver maps ---------------------------------------------------------


@dataclass(frozen=True)
class QuiverMap:
    """A pair of bijections between two quivers.

    ``iso`` maps an arrow a->b to an arrow phi(a)->phi(b); ``anti``
    maps it to an arrow phi(b)->phi(a).
    """

    vertex_map: tuple[tuple[VertexId, VertexId], ...]
    arrow_map: tuple[tuple[ArrowId, ArrowId], ...]
    kind: str  # "iso" | "anti"

    def vertex(self, v: VertexId) -> VertexId:
        for a, b in self.vertex_map:
            if a == v:
                return b
        raise KeyError(v)

    def vertex_dict(self) -> dict[VertexId, VertexId]:
        return dict(self.vertex_map)

    def arrow_dict(self) -> dict[ArrowId, ArrowId]:
        return dict(self.arrow_map)

    def to_doc(self) -> dict:
        return {
            "kind": self.kind,
            "vertex_map": {a: b for a, b in self.vertex_map},
            "arrow_map": {a: b for a, b in self.arrow_map},
        }


def _degree_key(q: Quiver, v: VertexId) -> tuple:
    outs = Counter()
    ins = Counter()
    for a in q.out_arrows(v):
        outs[a.target] += 1
    for a in q.in_arrows(v):
        ins[a.source] += 1
    return (
        sum(outs.values()),
        sum(ins.values()),
        tuple(sorted(outs.values(), reverse=True)),
        tuple(sorted(ins.values(), reverse=True)),
    )


def _iso_search(q: Quiver, r: Quiver, first_only: bool) -> list[dict[VertexId, VertexId]]:
    """Backtracking vertex-bijection search preserving arrow multiplicities.

    Assignment follows the canonical vertex order of ``q``; candidate
    images follow the canonical order of ``r``, so the result list is
    lexicographic.  Degree profiles prune; quivers here are small.
    """
    if len(q.vertices) != len(r.vertices) or len(q.arrows) != len(r.arrows):
        return []
    qkeys = {v: _degree_key(q, v) for v in q.vertices}
    rkeys = {v: _degree_key(r, v) for v in r.vertices}
    if sorted(qkeys.values()) != sorted(rkeys.values()):
        return []
    qc = q.pair_counts()
    rc = r.pair_counts()
    found: list[dict[VertexId, VertexId]] = []
    assignment: dict[VertexId, VertexId] = {}
    used: set[VertexId] = set()

    def extend(i: int) -> bool:
        if i == len(q.vertices):
            found.append(dict(assignment))
            return first_only
        v = q.vertices[i]
        for w in r.vertices:
            if w in used or qkeys[v] != rkeys[w]:
                continue
            ok = True
            for u, x in assignment.items():
                if qc.get((v, u), 0) != rc.get((w, x), 0) or qc.get((u, v), 0) != rc.get((x, w), 0):
                    ok = False
                    break
            if qc.get((v, v), 0) != rc.get((w, w), 0):
                ok = False
            if not ok:
                continue
            assignment[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del assignment[v]
            used.discard(w)
        return False

    extend(0)
    return found


def _arrow_bijection(q: Quiver, r: Quiver, vmap: dict[VertexId, VertexId]) -> tuple[tuple[ArrowId, ArrowId], ...]:
    """Pair parallel arrows by id order once the vertex bijection is fixed."""
    pairs: list[tuple[ArrowId, ArrowId]] = []
    for (s, t), _ in sorted(q.pair_counts().items()):
        qa = sorted(q.arrows_between(s, t), key=lambda a: a.id)
        ra = sorted(r.arrows_between(vmap[s], vmap[t]), key=lambda a: a.id)
        pairs.extend((x.id, y.id) for x, y in zip(qa, ra))
    return tuple(sorted(pairs))


def find_isomorphisms(q: Quiver, r: Quiver, first_only: bool = False) -> list[QuiverMap]:
    """All quiver isomorphisms q -> r in lexicographic vertex order."""
    maps = []
    for vmap in _iso_search(q, r, first_only):
        maps.append(
            QuiverMap(
                vertex_map=tuple((v, vmap[v]) for v in q.vertices),
                arrow_map=_arrow_bijection(q, r, vmap),
                kind="iso",
            )
        )
    return maps


def find_anti_isomorphisms(q: Quiver, r: Quiver, first_only: bool = False) -> list[QuiverMap]:
    """Anti-isomorphisms q -> r, i.e. isomorphisms opposite(q) -> r."""
    qop = opposite(q)
    maps = []
    for m in find_isomorphisms(qop, r, first_only):
        maps.append(QuiverMap(vertex_map=m.vertex_map, arrow_map=m.arrow_map, kind="anti"))
    return maps


def is_isomorphic(q: Quiver, r: Quiver) -> bool:
    return bool(find_isomorphisms(q, r, first_only=True))


def verify_quiver_map(q: Quiver, r: Quiver, m: QuiverMap) -> bool:
    """Replay a map against both quivers and check its incidence contract."""
    vmap = m.vertex_dict()
    amap = m.arrow_dict()
    if sorted(vmap) != sorted(q.vertices) or sorted(vmap.values()) != sorted(r.vertices):
        return False
    if sorted(amap) != sorted(a.id for a in q.arrows):
        return False
    if sorted(amap.values()) != sorted(a.id for a in r.arrows):
        return False
    for a in q.arrows:
        img = r.arrow(amap[a.id])
        if m.kind == "iso":
            if img.source != vmap[a.source] or img.target != vmap[a.target]:
                return False
        else:
            if img.source != vmap[a.target] or img.target != vmap[a.source]:
                return False
    return True


# -- walks and length ----------------------------------------------------


@dataclass(frozen=True)
class Walk:
    """An undirected walk: arrow ids with direction +1 (along) or -1 (against)."""

    steps: tuple[tuple[ArrowId, int], ...]


def _step_endpoints(q: Quiver, step: tuple[ArrowId, int]) -> tuple[VertexId, VertexId]:
    arrow_id, eps = step
    a = q.arrow(arrow_id)
    if eps == 1:
        return a.source, a.target
    if eps == -1:
        return a.target, a.source
    raise WalkError(f"step direction must be +1 or -1, got {eps}")


def walk_length(q: Quiver, w: Walk) -> int:
    """Sum of step directions (forward steps minus backward steps)."""
    if not w.steps:
        return 0
    prev_end = None
    total = 0
    for step in w.steps:
        start, end = _step_endpoints(q, step)
        if prev_end is not None and start != prev_end:
            raise WalkError(f"walk breaks at {start!r}: expected {prev_end!r}")
        prev_end = end
        total += step[1]
    return total


def _all_paths(q: Quiver) -> dict[tuple[VertexId, VertexId], dict[int, list[ArrowId]]]:
    """All directed paths per ordered vertex pair, keyed by length.

    Only one representative path per (pair, length) is kept; the quiver
    must be acyclic so the enumeration terminates.
    """
    table: dict[tuple[VertexId, VertexId], dict[int, list[ArrowId]]] = {}

    def dfs(start: VertexId, v: VertexId, path: list[ArrowId]) -> None:
        for a in q.out_arrows(v):
            new_path = path + [a.id]
            slot = table.setdefault((start, a.target), {})
            if len(new_path) not in slot:
                slot[len(new_path)] = new_path
            dfs(start, a.target, new_path)

    for v in q.vertices:
        dfs(v, v, [])
    return table


def is_quiver_with_length(q: Quiver) -> tuple[bool, Optional[tuple[Walk, Walk]]]:
    """Check that all parallel paths have equal length.

    Returns (True, None) or (False, (walk1, walk2)) with two parallel
    paths of unequal length, as forward walks.
    """
    if not q.is_acyclic():
        raise CyclicQuiverError("quiver-with-length check requires an acyclic quiver")
    for (_, _), by_len in sorted(_all_paths(q).items()):
        if len(by_len) > 1:
            lengths = sorted(by_len)
            w1 = Walk(tuple((aid, 1) for aid in by_len[lengths[0]]))
            w2 = Walk(tuple((aid, 1) for aid in by_len[lengths[1]]))
            return False, (w1, w2)
    return True, None


def path_length(q: Quiver, source: VertexId, target: VertexId) -> Optional[int]:
    """The common length of directed paths source -> target, if any exist.

    Meaningful on quivers with length; on others the minimum is returned.
    """
    by_len = _all_paths(q).get((source, target))
    if not by_len:
        return 0 if source == target else None
    return min(by_len)


# -- symmetric quivers ---------------------------------------------------


def _involutive_vertex_maps(q: Quiver) -> Iterator[dict[VertexId, VertexId]]:
    """Involutive vertex permutations in lexicographic image order."""
    verts = q.vertices

    def extend(i: int, m: dict[VertexId, VertexId]) -> Iterator[dict[VertexId, VertexId]]:
        if i == len(verts):
            yield dict(m)
            return
        v = verts[i]
        if v in m:
            yield from extend(i + 1, m)
            return
        for w in verts:
            if w in m:
                continue
            if w == v:
                m[v] = v
                yield from extend(i + 1, m)
                del m[v]
            else:
                m[v] = w
                m[w] = v
                yield from extend(i + 1, m)
                del m[v]
                del m[w]

    yield from extend(0, {})


def is_symmetric_quiver(q: Quiver) -> Optional[QuiverMap]:
    """First involutive anti-automorphism satisfying the arrow conditions.

    Conditions on sigma: it is an involution of vertices and arrows with
    s(sigma(a)) = sigma(t(a)) and t(sigma(a)) = sigma(s(a)), and
    sigma(a) = a whenever sigma(t(a)) = s(a).
    """
    for vmap in _involutive_vertex_maps(q):
        amap: dict[ArrowId, ArrowId] = {}
        ok = True
        done_pairs: set[tuple[VertexId, VertexId]] = set()
        for (s, t), _ in sorted(q.pair_counts().items()):
            if (s, t) in done_pairs:
                continue
            image_pair = (vmap[t], vmap[s])
            fwd = sorted(q.arrows_between(s, t), key=lambda a: a.id)
            img = sorted(q.arrows_between(*image_pair), key=lambda a: a.id)
            if len(fwd) != len(img):
                ok = False
                break
            if image_pair == (s, t):
                # sigma(t) = s here, so every such arrow is fixed
                for a in fwd:
                    amap[a.id] = a.id
                done_pairs.add((s, t))
            else:
                for a, b in zip(fwd, img):
                    amap[a.id] = b.id
                    amap[b.id] = a.id
                done_pairs.add((s, t))
                done_pairs.add(image_pair)
        if not ok:
            continue
        if sorted(amap) != sorted(a.id for a in q.arrows):
            continue
        m = QuiverMap(
            vertex_map=tuple((v, vmap[v]) for v in q.vertices),
            arrow_map=tuple(sorted(amap.items())),
            kind="anti",
        )
        if verify_quiver_map(q, q, m):
            return m
    return None
