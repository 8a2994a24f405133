"""Finite windows of the repetitive quiver ZQ, local slices, layer indexing.

Vertices of ZQ are pairs (m, v) with m an integer copy index.  For each
base arrow a: v -> w there are two arrow families:

    (m, a):  (m, v) -> (m, w)         within one copy
    (m, a'): (m, w) -> (m - 1, v)     connecting to the previous copy

The translation is tau(m, v) = (m - 1, v).

A local slice (= section) picks one copy index per vertex such that
every base edge a: v -> w satisfies m(w) - m(v) in {0, 1}, and the
induced subquiver is connected.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

from .errors import CyclicQuiverError, QuiverStructureError, WindowError
from .quiver import Arrow, Quiver, QuiverMap, find_isomorphisms, opposite


class ZVertex(NamedTuple):
    m: int
    v: str

    def key(self) -> str:
        return f"{self.m}:{self.v}"


class ZArrow(NamedTuple):
    id: str
    source: ZVertex
    target: ZVertex
    base_id: str
    connecting: bool


def tau(z: ZVertex, power: int = 1) -> ZVertex:
    return ZVertex(z.m - power, z.v)


def zq_out_arrows(q: Quiver, z: ZVertex) -> list[ZArrow]:
    out = []
    for a in q.out_arrows(z.v):
        out.append(
            ZArrow(f"{z.m}:{a.id}", z, ZVertex(z.m, a.target), a.id, False)
        )
    for a in q.in_arrows(z.v):
        # z.v is the target of a, so (m, a') starts here
        out.append(
            ZArrow(f"{z.m}:{a.id}'", z, ZVertex(z.m - 1, a.source), a.id, True)
        )
    return out


def zq_in_arrows(q: Quiver, z: ZVertex) -> list[ZArrow]:
    inn = []
    for a in q.in_arrows(z.v):
        inn.append(
            ZArrow(f"{z.m}:{a.id}", ZVertex(z.m, a.source), z, a.id, False)
        )
    for a in q.out_arrows(z.v):
        inn.append(
            ZArrow(
                f"{z.m + 1}:{a.id}'", ZVertex(z.m + 1, a.target), z, a.id, True
            )
        )
    return inn


@dataclass(frozen=True)
class ZWindow:
    """The full subquiver of ZQ on copies lo..hi (inclusive)."""

    base: Quiver
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise WindowError("window bounds must satisfy lo <= hi")

    def vertices(self) -> list[ZVertex]:
        return [
            ZVertex(m, v)
            for m in range(self.hi, self.lo - 1, -1)
            for v in self.base.vertices
        ]

    def contains(self, z: ZVertex) -> bool:
        return self.lo <= z.m <= self.hi and z.v in self.base.vertices

    def is_interior(self, z: ZVertex) -> bool:
        return self.lo < z.m < self.hi and z.v in self.base.vertices

    def arrows(self) -> list[ZArrow]:
        out: list[ZArrow] = []
        for m in range(self.hi, self.lo - 1, -1):
            for a in self.base.arrows:
                out.append(
                    ZArrow(
                        f"{m}:{a.id}",
                        ZVertex(m, a.source),
                        ZVertex(m, a.target),
                        a.id,
                        False,
                    )
                )
                if m - 1 >= self.lo:
                    out.append(
                        ZArrow(
                            f"{m}:{a.id}'",
                            ZVertex(m, a.target),
                            ZVertex(m - 1, a.source),
                            a.id,
                            True,
                        )
                    )
        return out

    def quiver(self) -> Quiver:
        """Materialize the window as a plain labeled quiver."""
        return Quiver(
            vertices=tuple(z.key() for z in self.vertices()),
            arrows=tuple(
                Arrow(id=a.id, source=a.source.key(), target=a.target.key())
                for a in self.arrows()
            ),
        )


def zq_window(q: Quiver, lo: int, hi: int) -> ZWindow:
    if not q.is_acyclic():
        raise CyclicQuiverError("ZQ requires an acyclic base quiver")
    if not q.is_connected():
        raise QuiverStructureError("ZQ requires a connected base quiver")
    return ZWindow(base=q, lo=lo, hi=hi)


# -- slices ----------------------------------------------------------------


@dataclass(frozen=True)
class Slice:
    """One ZQ vertex per tau-orbit, as a copy-index function on Q0."""

    base: Quiver
    copy_index: tuple[tuple[str, int], ...]

    @staticmethod
    def from_vertices(base: Quiver, vs) -> "Slice":
        pairs = {}
        for z in vs:
            z = ZVertex(*z)
            if z.v in pairs:
                raise QuiverStructureError(f"orbit of {z.v!r} hit twice")
            pairs[z.v] = z.m
        if set(pairs) != set(base.vertices):
            raise QuiverStructureError("slice must meet every tau-orbit")
        return Slice(base, tuple((v, pairs[v]) for v in base.vertices))

    def m_of(self, v: str) -> int:
        for u, m in self.copy_index:
            if u == v:
                return m
        raise KeyError(v)

    def vertices(self) -> tuple[ZVertex, ...]:
        return tuple(ZVertex(m, v) for v, m in self.copy_index)

    def zq_arrows(self) -> list[ZArrow]:
        """Arrows of the induced full subquiver, in ZQ coordinates."""
        out = []
        for a in self.base.arrows:
            ms, mt = self.m_of(a.source), self.m_of(a.target)
            if mt == ms:
                out.append(
                    ZArrow(
                        f"{ms}:{a.id}",
                        ZVertex(ms, a.source),
                        ZVertex(mt, a.target),
                        a.id,
                        False,
                    )
                )
            elif mt == ms + 1:
                out.append(
                    ZArrow(
                        f"{mt}:{a.id}'",
                        ZVertex(mt, a.target),
                        ZVertex(ms, a.source),
                        a.id,
                        True,
                    )
                )
        return out

    def quiver(self) -> Quiver:
        """The abstract quiver of the slice, on the base vertex labels."""
        arrows = []
        for za in self.zq_arrows():
            arrows.append(
                Arrow(
                    id=za.id if not za.connecting else f"{za.base_id}'",
                    source=za.source.v,
                    target=za.target.v,
                )
            )
        # ids may repeat across copies only if an arrow id carries m; strip m
        cleaned = []
        used = set()
        for a in arrows:
            aid = a.id.split(":", 1)[-1]
            while aid in used:
                aid += "+"
            used.add(aid)
            cleaned.append(Arrow(id=aid, source=a.source, target=a.target))
        return Quiver(vertices=self.base.vertices, arrows=tuple(cleaned))

    def to_doc(self) -> list[dict]:
        return [{"m": m, "vertex": v} for v, m in self.copy_index]


def is_local_slice(w: ZWindow, vs) -> bool:
    """Local-slice (section) test for a vertex set inside a window.

    Vertices must be window-interior so all neighbor arrows are in range;
    boundary vertices make the answer indeterminate.
    """
    zs = [ZVertex(*z) for z in vs]
    for z in zs:
        if not w.contains(z):
            raise WindowError(f"vertex {z} outside window [{w.lo},{w.hi}]")
        if not w.is_interior(z):
            raise WindowError(
                f"vertex {z} on window boundary; enlarge the window"
            )
    by_orbit: dict[str, list[int]] = {}
    for z in zs:
        by_orbit.setdefault(z.v, []).append(z.m)
    if set(by_orbit) != set(w.base.vertices):
        return False
    if any(len(ms) != 1 for ms in by_orbit.values()):
        return False
    m = {v: ms[0] for v, ms in by_orbit.items()}
    # section closure: each base edge spans adjacent copies only
    for a in w.base.arrows:
        if m[a.target] - m[a.source] not in (0, 1):
            return False
    # connectivity of the induced subquiver
    sl = Slice(w.base, tuple((v, m[v]) for v in w.base.vertices))
    adj: dict[str, set[str]] = {v: set() for v in w.base.vertices}
    for za in sl.zq_arrows():
        adj[za.source.v].add(za.target.v)
        adj[za.target.v].add(za.source.v)
    seen = {w.base.vertices[0]}
    stack = [w.base.vertices[0]]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(w.base.vertices)


# -- layer indexing and the opposite slice search ---------------------------


@dataclass(frozen=True)
class LayerIndexing:
    """Per-vertex depth j (copy -j holds the opposite-slice vertex),
    layer sizes s_0..s_k, and a 1-based index within each layer."""

    j: tuple[tuple[str, int], ...]
    s: tuple[int, ...]
    k: int
    layers: tuple[tuple[str, ...], ...]

    @staticmethod
    def from_slice(sl: Slice) -> "LayerIndexing":
        depth = {v: -m for v, m in sl.copy_index}
        if any(d < 0 for d in depth.values()):
            raise QuiverStructureError("opposite slice must sit at copies <= 0")
        k = max(depth.values())
        layers = tuple(
            tuple(v for v in sl.base.vertices if depth[v] == d)
            for d in range(k + 1)
        )
        if any(not layer for layer in layers):
            raise QuiverStructureError("layer depths must be contiguous")
        return LayerIndexing(
            j=tuple((v, depth[v]) for v in sl.base.vertices),
            s=tuple(len(layer) for layer in layers),
            k=k,
            layers=layers,
        )

    def depth(self, v: str) -> int:
        for u, d in self.j:
            if u == v:
                return d
        raise KeyError(v)

    def index(self, v: str) -> int:
        layer = self.layers[self.depth(v)]
        return layer.index(v) + 1

    def vertex_at(self, d: int, i: int) -> str:
        return self.layers[d][i - 1]

    def to_doc(self) -> dict:
        return {
            "j": {v: d for v, d in self.j},
            "s": list(self.s),
            "k": self.k,
            "layers": [list(layer) for layer in self.layers],
        }


@dataclass(frozen=True)
class OpSliceResult:
    slice: Slice
    iso: QuiverMap  # opposite(base) -> slice quiver
    indexing: LayerIndexing
    moves: int
    layer_perms: tuple[tuple[int, ...], ...]


def _slice_sources(base: Quiver, m: dict[str, int]) -> list[str]:
    """Vertices of the slice quiver with no incoming slice arrow."""
    has_in = set()
    for a in base.arrows:
        ms, mt = m[a.source], m[a.target]
        if mt == ms:
            has_in.add(a.target)
        elif mt == ms + 1:
            has_in.add(a.source)
    return [v for v in base.vertices if v not in has_in]


def _slice_pair_counts(sl: Slice) -> dict[tuple[ZVertex, ZVertex], int]:
    counts: dict[tuple[ZVertex, ZVertex], int] = {}
    for za in sl.zq_arrows():
        key = (za.source, za.target)
        counts[key] = counts.get(key, 0) + 1
    return counts


def _involutive_perms(size: int) -> Iterator[tuple[int, ...]]:
    """Involutions of {1..size} in lexicographic order, as image tuples."""
    from itertools import permutations

    for p in permutations(range(1, size + 1)):
        if all(p[p[i - 1] - 1] == i for i in range(1, size + 1)):
            yield p


def layer_anti_iso_perms(
    q: Quiver,
    sl: Slice,
    li: LayerIndexing,
    identity_only: bool = False,
) -> tuple[Optional[tuple[tuple[int, ...], ...]], int]:
    """First involutive layer permutations realizing an anti-isomorphism.

    The candidate map sends (0, v) at depth j, in-layer index i, to
    (-j, w) where w is the layer-j vertex at index sigma_j(i); layer 0
    (the slice intersection) is fixed pointwise.  A choice is valid when
    every zero-slice arrow has an image arrow with reversed orientation
    and matching multiplicity.  Returns (perms, candidates_tried).
    """
    zero = Slice.from_vertices(q, [(0, v) for v in q.vertices])
    zero_counts = _slice_pair_counts(zero)
    op_counts = _slice_pair_counts(sl)
    if sum(zero_counts.values()) != sum(op_counts.values()):
        return None, 0

    choices: list[list[tuple[int, ...]]] = []
    for j, size in enumerate(li.s):
        identity = tuple(range(1, size + 1))
        if j == 0 or identity_only:
            choices.append([identity])
        else:
            choices.append(list(_involutive_perms(size)))

    tried = 0

    def image(perms: list[tuple[int, ...]], v: str) -> ZVertex:
        j = li.depth(v)
        w = li.vertex_at(j, perms[j][li.index(v) - 1])
        return ZVertex(-j, w)

    def valid(perms: list[tuple[int, ...]]) -> bool:
        for (src, tgt), count in zero_counts.items():
            pair = (image(perms, tgt.v), image(perms, src.v))
            if op_counts.get(pair, 0) != count:
                return False
        return True

    def search(j: int, chosen: list[tuple[int, ...]]):
        nonlocal tried
        if j == len(choices):
            tried += 1
            return tuple(chosen) if valid(chosen) else None
        for p in choices[j]:
            chosen.append(p)
            found = search(j + 1, chosen)
            if found is not None:
                return found
            chosen.pop()
        return None

    return search(0, []), tried


def find_op_slice(
    q: Quiver,
    max_reflections: Optional[int] = None,
    identity_perms_only: bool = False,
) -> Optional[OpSliceResult]:
    """Search for a slice of ZQ whose quiver is isomorphic to opposite(q).

    Starting from the zero slice, sources of the current slice move down
    one copy at a time (the move that provably preserves sliceness), so
    the found slice sits at copies <= 0 and its copy-0 part is the
    intersection with the zero slice.  A candidate is accepted when its
    quiver is isomorphic to the opposite quiver and it admits a
    layer-compatible involutive anti-isomorphism fixing the intersection,
    which is what the downstream construction consumes.  With
    ``identity_perms_only`` the anti-isomorphism must use identity layer
    permutations (the reflection-induced case; forces discrete layers).
    """
    if not q.is_acyclic():
        raise CyclicQuiverError("op-slice search requires an acyclic quiver")
    if not q.is_connected():
        raise QuiverStructureError("op-slice search requires a connected quiver")
    if max_reflections is None:
        n = len(q.vertices)
        max_reflections = max(1, n * (n - 1))
    qop = opposite(q)

    def accept(m: dict[str, int], moves: int) -> Optional[OpSliceResult]:
        sl = Slice(q, tuple((v, m[v]) for v in q.vertices))
        cand = sl.quiver()
        isos = find_isomorphisms(qop, cand, first_only=True)
        if not isos:
            return None
        li = LayerIndexing.from_slice(sl)
        perms, _ = layer_anti_iso_perms(q, sl, li, identity_only=identity_perms_only)
        if perms is None:
            return None
        return OpSliceResult(
            slice=sl, iso=isos[0], indexing=li, moves=moves, layer_perms=perms
        )

    start = {v: 0 for v in q.vertices}
    frontier = [start]
    seen = {tuple(start[v] for v in q.vertices)}
    moves = 0
    while True:
        for m in frontier:
            res = accept(m, moves)
            if res is not None:
                return res
        if moves == max_reflections:
            return None
        next_frontier = []
        for m in frontier:
            for v in _slice_sources(q, m):
                child = dict(m)
                child[v] -= 1
                if max(child.values()) < 0:
                    continue  # keep the intersection with copy 0 nonempty
                key = tuple(child[u] for u in q.vertices)
                if key in seen:
                    continue
                seen.add(key)
                next_frontier.append(child)
        if not next_frontier:
            return None
        frontier = next_frontier
        moves += 1


# -- complete decompositions -------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    layers: tuple[Quiver, ...]
    c1: bool
    c2: bool
    c3: bool

    @property
    def ok(self) -> bool:
        return self.c1 and self.c2 and self.c3


def decompose(q: Quiver, li: LayerIndexing) -> Decomposition:
    """Split q into the full subquivers on each layer and check C1-C3.

    C1: layer vertex sets are disjoint.  C2: the closure of their union
    (the full subquiver on all their vertices) is q itself.  C3: arrows
    between distinct layers go from layer j to layer j-1 only.
    """
    layer_sets = [set(layer) for layer in li.layers]
    layers = tuple(q.full_subquiver(layer) for layer in li.layers)
    c1 = all(
        not (layer_sets[i] & layer_sets[jx])
        for i in range(len(layer_sets))
        for jx in range(i + 1, len(layer_sets))
    )
    union = set().union(*layer_sets) if layer_sets else set()
    c2 = union == set(q.vertices)
    c3 = True
    depth = dict(li.j)
    for a in q.arrows:
        ds, dt = depth[a.source], depth[a.target]
        if ds != dt and ds - dt != 1:
            c3 = False
    return Decomposition(layers=layers, c1=c1, c2=c2, c3=c3)


@dataclass(frozen=True)
class SymmetricDecompositionReport:
    decomposition: Decomposition
    involutions: tuple[Optional[QuiverMap], ...]

    @property
    def ok(self) -> bool:
        return self.decomposition.ok and all(
            m is not None for m in self.involutions
        )

    def to_doc(self) -> dict:
        return {
            "c1": self.decomposition.c1,
            "c2": self.decomposition.c2,
            "c3": self.decomposition.c3,
            "layers": [qq.to_doc() for qq in self.decomposition.layers],
            "involutions": [
                m.to_doc() if m is not None else None for m in self.involutions
            ],
            "ok": self.ok,
        }


def verify_symmetric_decomposition(q: Quiver, li: LayerIndexing) -> SymmetricDecompositionReport:
    """Decompose and search an involutive anti-automorphism per layer."""
    from .quiver import is_symmetric_quiver

    dec = decompose(q, li)
    invs = tuple(is_symmetric_quiver(layer) for layer in dec.layers)
    return SymmetricDecompositionReport(decomposition=dec, involutions=invs)
