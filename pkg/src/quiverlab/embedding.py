"""Exact rational embedding of ZQ windows in R^3 and its oblique reflection.

The zero slice is placed layer by layer: layer j lands in the plane
y = j, layer 0 in the strip z in [n-1, n] with pairwise distinct z, and
deeper layers by translating a chosen arrow-target's point by
v = (0, 1, -1), spreading same-target families along a line parallel to
the x-axis.  The whole window follows by translating copies by
u = (-1, -2, 0), and the oblique reflection

    S(x, y, z) = (x - y, -y, z)

exchanges the embedded slice with the embedded opposite slice.

All coordinates are exact fractions so collinearity and segment
intersection tests are decidable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .errors import EmbeddingError
from .quiver import Quiver
from .translation import LayerIndexing, Slice, ZArrow, ZVertex, ZWindow, zq_window

U_VEC = (Fraction(-1), Fraction(-2), Fraction(0))
V_VEC = (Fraction(0), Fraction(1), Fraction(-1))


@dataclass(frozen=True)
class Point3:
    x: Fraction
    y: Fraction
    z: Fraction

    @staticmethod
    def of(x, y, z) -> "Point3":
        return Point3(Fraction(x), Fraction(y), Fraction(z))

    def translate(self, vec: tuple[Fraction, Fraction, Fraction], times: int = 1) -> "Point3":
        return Point3(
            self.x + times * vec[0], self.y + times * vec[1], self.z + times * vec[2]
        )

    def to_doc(self) -> list[str]:
        return [str(self.x), str(self.y), str(self.z)]


def reflect(p: Point3) -> Point3:
    """Oblique reflection across the plane y = 0 in the direction (-1,-2,0)."""
    return Point3(p.x - p.y, -p.y, p.z)


def _parse_point(value) -> Point3:
    if isinstance(value, Point3):
        return value
    return Point3.of(*value)


def embed_slice(
    q: Quiver,
    sl: Slice,
    li: LayerIndexing,
    overrides: Optional[Mapping[str, object]] = None,
) -> dict[str, Point3]:
    """Place the zero-slice vertices; overridden points are taken verbatim.

    Construction constraints: layer j in plane y = j inside the box
    x in (-1, 0], z in [0, n]; layer-0 points at pairwise distinct z in
    [n-1, n].  Constructed coordinates carry a deterministic salt that is
    bumped if the non-crossing probe fails.
    """
    n = len(q.vertices)
    fixed: dict[str, Point3] = {}
    if overrides:
        for v, value in overrides.items():
            v = str(v)
            if v not in q.vertices:
                raise EmbeddingError(f"override for unknown vertex {v!r}")
            p = _parse_point(value)
            if p.y != li.depth(v):
                raise EmbeddingError(
                    f"override for {v!r} must lie in plane y={li.depth(v)}"
                )
            if not (-1 < p.x <= 0) or not (0 <= p.z <= n):
                raise EmbeddingError(
                    f"override for {v!r} must lie in the box x in (-1,0], z in [0,{n}]"
                )
            if li.depth(v) == 0 and not (n - 1 <= p.z <= n):
                raise EmbeddingError(
                    f"layer-0 override for {v!r} must have z in [{n-1},{n}]"
                )
            fixed[v] = p

    all_fixed = len(fixed) == len(q.vertices)
    last_error = "no placement attempted"
    for salt in range(16):
        pts = _place(q, sl, li, fixed, salt)
        problem = _probe(q, sl, li, pts)
        if problem is None:
            return pts
        last_error = problem
        if all_fixed:
            break
    raise EmbeddingError(f"could not produce a valid placement: {last_error}")


def _place(
    q: Quiver,
    sl: Slice,
    li: LayerIndexing,
    fixed: dict[str, Point3],
    salt: int,
) -> dict[str, Point3]:
    n = len(q.vertices)
    pts: dict[str, Point3] = {}
    half = Fraction(-1, 2)
    # layer 0: distinct z in [n-1, n], never on a common x-parallel line
    layer0 = li.layers[0]
    for i, v in enumerate(layer0, start=1):
        if v in fixed:
            pts[v] = fixed[v]
        else:
            z = n - 1 + Fraction(i, len(layer0) + 1 + salt)
            pts[v] = Point3(half, Fraction(0), z)
    depth = dict(li.j)
    for j in range(1, li.k + 1):
        prev = set(li.layers[j - 1])
        cur = li.layers[j]
        anchored: dict[str, list[str]] = {}
        loose: list[str] = []
        for v in cur:
            if v in fixed:
                pts[v] = fixed[v]
                continue
            targets = sorted(
                (a.target for a in q.out_arrows(v) if a.target in prev),
                key=lambda w: li.index(w),
            )
            if targets:
                anchored.setdefault(targets[0], []).append(v)
            else:
                loose.append(v)
        for w in sorted(anchored, key=lambda w: li.index(w)):
            family = anchored[w]
            base = pts[w].translate(V_VEC)
            for t, v in enumerate(family):
                dx = Fraction(t, 2 * (len(family) + 1 + salt))
                pts[v] = Point3(base.x + dx, base.y, base.z)
        for l, v in enumerate(loose, start=1):
            # strip for layer j is the layer-0 strip translated j times by V
            z = n - 1 - j + Fraction(l, len(loose) + 1 + salt)
            x = half - Fraction(1, 3 + salt)
            pts[v] = Point3(x, Fraction(j), z)
    return pts


def _probe(q: Quiver, sl: Slice, li: LayerIndexing, pts: dict[str, Point3]) -> Optional[str]:
    """Validate a slice placement; returns a violation description or None.

    Crossing patterns repeat with the copy translation, so probing a
    window a couple of copies wider than the slice depth covers every
    relative offset.
    """
    n = len(q.vertices)
    if len(set(pts.values())) != len(pts):
        return "placement not injective"
    for v, p in pts.items():
        if p.y != li.depth(v):
            return f"vertex {v!r} not in plane y={li.depth(v)}"
        if not (-1 < p.x <= 0) or not (0 <= p.z <= n):
            return f"vertex {v!r} outside the bounding box"
    layer0 = [pts[v] for v in li.layers[0]]
    for i in range(len(layer0)):
        for jx in range(i + 1, len(layer0)):
            if layer0[i].z == layer0[jx].z:
                return "two layer-0 points on a line parallel to the x-axis"
    window = zq_window(q, -(li.k + 3), 1)
    emb = _window_points(window, pts)
    return _crossing_violation(window, emb)


def _window_points(window: ZWindow, pts: dict[str, Point3]) -> dict[ZVertex, Point3]:
    out: dict[ZVertex, Point3] = {}
    for z in window.vertices():
        out[z] = pts[z.v].translate(U_VEC, -z.m)
    return out


@dataclass(frozen=True)
class EmbeddedQuiver:
    window: ZWindow
    points: tuple[tuple[ZVertex, Point3], ...]

    def point(self, z: ZVertex) -> Point3:
        for zz, p in self.points:
            if zz == z:
                return p
        raise KeyError(z)

    def point_dict(self) -> dict[ZVertex, Point3]:
        return dict(self.points)

    def segments(self) -> list[tuple[ZArrow, Point3, Point3]]:
        pd = self.point_dict()
        return [
            (a, pd[a.source], pd[a.target]) for a in self.window.arrows()
        ]

    def to_doc(self) -> dict:
        return {
            "points": [
                {"m": z.m, "vertex": z.v, "xyz": p.to_doc()}
                for z, p in self.points
            ],
            "arrows": [
                [a.source.key(), a.target.key()] for a in self.window.arrows()
            ],
        }


def embed_zq(
    q: Quiver,
    sl: Slice,
    li: LayerIndexing,
    window: tuple[int, int],
    overrides: Optional[Mapping[str, object]] = None,
) -> EmbeddedQuiver:
    """Embed a window of ZQ: copy m is the slice placement shifted m times."""
    pts = embed_slice(q, sl, li, overrides)
    w = zq_window(q, window[0], window[1])
    placed = _window_points(w, pts)
    return EmbeddedQuiver(
        window=w, points=tuple(sorted(placed.items(), key=lambda kv: (-kv[0].m, kv[0].v)))
    )


# -- exact segment intersection ------------------------------------------------


def _sub(a: Point3, b: Point3) -> tuple[Fraction, Fraction, Fraction]:
    return (a.x - b.x, a.y - b.y, a.z - b.z)


def _cross(u, v) -> tuple[Fraction, Fraction, Fraction]:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _dot(u, v) -> Fraction:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _is_zero(u) -> bool:
    return u[0] == 0 and u[1] == 0 and u[2] == 0


def segments_cross(p1: Point3, p2: Point3, q1: Point3, q2: Point3) -> bool:
    """True when closed segments p1p2 and q1q2 share at least one point.

    Exact: collinear overlaps, endpoint touches and proper crossings all
    count.  Degenerate (zero-length) segments are treated as points.
    """
    d1 = _sub(p2, p1)
    d2 = _sub(q2, q1)
    r = _sub(q1, p1)
    cr = _cross(d1, d2)
    if _is_zero(cr):
        if not _is_zero(_cross(r, d1 if not _is_zero(d1) else d2)):
            return False  # parallel, different lines
        # collinear: compare 1D parameter intervals along a nonzero axis
        axis = d1 if not _is_zero(d1) else d2
        if _is_zero(axis):
            return p1 == q1  # both degenerate
        def param(p: Point3) -> Fraction:
            w = _sub(p, p1)
            return _dot(w, axis)
        a0, a1 = sorted((param(p1), param(p2)))
        b0, b1 = sorted((param(q1), param(q2)))
        return max(a0, b0) <= min(a1, b1)
    if _dot(r, cr) != 0:
        return False  # skew lines
    denom = _dot(cr, cr)
    s = _dot(_cross(r, d2), cr) / denom
    t = _dot(_cross(r, d1), cr) / denom
    return 0 <= s <= 1 and 0 <= t <= 1


def _segments_cross_improperly(
    p1: Point3, p2: Point3, q1: Point3, q2: Point3, shared: set[Point3]
) -> bool:
    """Crossing test for segments that share endpoints.

    Two straight segments with a common endpoint can only meet elsewhere
    when they are collinear and overlap beyond that point.
    """
    d1 = _sub(p2, p1)
    d2 = _sub(q2, q1)
    if not _is_zero(_cross(d1, d2)):
        return False
    if not _is_zero(_cross(_sub(q1, p1), d1)):
        return False
    axis = d1

    def param(p: Point3) -> Fraction:
        return _dot(_sub(p, p1), axis)

    a0, a1 = sorted((param(p1), param(p2)))
    b0, b1 = sorted((param(q1), param(q2)))
    lo, hi = max(a0, b0), min(a1, b1)
    if lo > hi:
        return False
    if lo == hi:
        # single touching point; fine iff it is one of the shared endpoints
        return not any(param(p) == lo for p in shared)
    return True


def _crossing_violation(window: ZWindow, placed: dict[ZVertex, Point3]) -> Optional[str]:
    segs: list[tuple[str, Point3, Point3]] = []
    seen_pairs: set[tuple[Point3, Point3]] = set()
    for a in window.arrows():
        p, t = placed[a.source], placed[a.target]
        if (p, t) in seen_pairs:
            continue  # parallel arrows share one geometric segment
        seen_pairs.add((p, t))
        segs.append((a.id, p, t))
    for i in range(len(segs)):
        for jx in range(i + 1, len(segs)):
            _, p1, p2 = segs[i]
            _, q1, q2 = segs[jx]
            shared = {p1, p2} & {q1, q2}
            if shared:
                if _segments_cross_improperly(p1, p2, q1, q2, shared):
                    return f"segments {segs[i][0]} and {segs[jx][0]} overlap"
            elif segments_cross(p1, p2, q1, q2):
                return f"segments {segs[i][0]} and {segs[jx][0]} cross"
    return None


# -- verification ----------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingReport:
    injective: bool
    planes: bool
    layer0_general_position: bool
    non_crossing: bool
    reflection_matches: bool
    correspondence: bool
    details: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return (
            self.injective
            and self.planes
            and self.layer0_general_position
            and self.non_crossing
            and self.reflection_matches
            and self.correspondence
        )

    def to_doc(self) -> dict:
        return {
            "injective": self.injective,
            "planes": self.planes,
            "layer0_general_position": self.layer0_general_position,
            "non_crossing": self.non_crossing,
            "reflection_matches": self.reflection_matches,
            "correspondence": self.correspondence,
            "details": list(self.details),
            "ok": self.ok,
        }


def verify_embedding(e: EmbeddedQuiver, sl: Slice, op_slice: Slice) -> EmbeddingReport:
    """Check the geometric contract of an embedded window.

    (1) injective placement; (2) zero-slice layer j in plane y = j;
    (3) no segment crossings except shared endpoints; (4) the reflection
    maps the embedded zero slice onto the embedded opposite slice, vertex
    (0, v) landing on (-j(v), v).
    """
    details: list[str] = []
    placed = e.point_dict()
    li = LayerIndexing.from_slice(op_slice)

    injective = len(set(placed.values())) == len(placed)
    if not injective:
        details.append("placement is not injective")

    planes = True
    for v in e.window.base.vertices:
        z = ZVertex(0, v)
        if z in placed and placed[z].y != li.depth(v):
            planes = False
            details.append(f"eta(0,{v}) not in plane y={li.depth(v)}")

    layer0 = [placed[ZVertex(0, v)] for v in li.layers[0] if ZVertex(0, v) in placed]
    gp = True
    for i in range(len(layer0)):
        for jx in range(i + 1, len(layer0)):
            if layer0[i].y == layer0[jx].y and layer0[i].z == layer0[jx].z:
                gp = False
                details.append("two layer-0 points on an x-parallel line")

    violation = _crossing_violation(e.window, placed)
    non_crossing = violation is None
    if violation:
        details.append(violation)

    sigma_pts = {}
    op_pts = {}
    correspondence = True
    for v, m0 in sl.copy_index:
        z = ZVertex(m0, v)
        if z in placed:
            sigma_pts[v] = placed[z]
    for v, m1 in op_slice.copy_index:
        z = ZVertex(m1, v)
        if z in placed:
            op_pts[v] = placed[z]
    reflected = {v: reflect(p) for v, p in sigma_pts.items()}
    reflection_matches = set(reflected.values()) == set(op_pts.values()) and len(
        reflected
    ) == len(op_pts)
    if not reflection_matches:
        details.append("S(eta(slice)) differs from eta(opposite slice) as a point set")
    for v in reflected:
        if v in op_pts and reflected[v] != op_pts[v]:
            correspondence = False
            details.append(
                f"S(eta(0,{v})) != eta(-{li.depth(v)},{v})"
            )
    return EmbeddingReport(
        injective=injective,
        planes=planes,
        layer0_general_position=gp,
        non_crossing=non_crossing,
        reflection_matches=reflection_matches,
        correspondence=correspondence,
        details=tuple(details),
    )
