from __future__ import annotations

import random

import pytest

from quiverlab.embedding import embed_slice, reflect
from quiverlab.errors import DomainError
from quiverlab.sigma import (
    ZQAntiAutomorphism,
    extend_sigma,
    find_slice_anti_iso,
    reflection_induced_sigma,
    verify_sigma,
)
from quiverlab.translation import ZVertex, find_op_slice
from conftest import random_tree_quiver


def test_slice_anti_iso_qt_uses_the_transposition(qt):
    r = find_op_slice(qt)
    s = find_slice_anti_iso(qt, r.slice, r.indexing)
    assert s.result is not None
    assert s.result.layer_perms == ((1,), (2, 1))
    vmap = s.result.vertex_map()
    assert vmap[ZVertex(0, "1")] == ZVertex(-1, "2")
    assert vmap[ZVertex(0, "2")] == ZVertex(-1, "1")
    assert vmap[ZVertex(0, "3")] == ZVertex(0, "3")


def test_slice_anti_iso_a3_is_identity(a3):
    r = find_op_slice(a3)
    s = find_slice_anti_iso(a3, r.slice, r.indexing)
    assert s.result is not None
    assert s.result.layer_perms == ((1,), (1,), (1,))
    vmap = s.result.vertex_map()
    assert vmap[ZVertex(0, "1")] == ZVertex(-2, "1")
    assert vmap[ZVertex(0, "3")] == ZVertex(0, "3")


def test_slice_anti_iso_star_fixes_the_intersection(out_star):
    r = find_op_slice(out_star)
    s = find_slice_anti_iso(out_star, r.slice, r.indexing)
    vmap = s.result.vertex_map()
    assert vmap[ZVertex(0, "2")] == ZVertex(0, "2")
    assert vmap[ZVertex(0, "3")] == ZVertex(0, "3")
    assert vmap[ZVertex(0, "1")] == ZVertex(-1, "1")


def test_extend_sigma_closed_form(qt):
    r = find_op_slice(qt)
    sg = extend_sigma(find_slice_anti_iso(qt, r.slice, r.indexing).result)
    assert sg.vertex_image(ZVertex(0, "1")) == ZVertex(-1, "2")
    assert sg.vertex_image(ZVertex(-1, "2")) == ZVertex(0, "1")
    assert sg.vertex_image(ZVertex(0, "3")) == ZVertex(0, "3")
    # tau-equivariance on a range of copies
    for m in range(-4, 4):
        for v in qt.vertices:
            z = ZVertex(m, v)
            img = sg.vertex_image(z)
            assert sg.vertex_image(ZVertex(m - 1, v)) == ZVertex(img.m + 1, img.v)


def test_extend_sigma_a3_depth_two(a3):
    r = find_op_slice(a3)
    sg = extend_sigma(find_slice_anti_iso(a3, r.slice, r.indexing).result)
    assert sg.vertex_image(ZVertex(0, "1")) == ZVertex(-2, "1")


def test_verify_sigma_acceptance_window(qt, a3):
    for q in (qt, a3):
        r = find_op_slice(q)
        sg = extend_sigma(find_slice_anti_iso(q, r.slice, r.indexing).result)
        rep = verify_sigma(sg, (-4, 3))
        assert rep.ok, rep.details
        assert rep.vertices_checked == 8 * len(q.vertices)


def test_sigma_squared_equals_identity_iff_perms_involutive(qt):
    r = find_op_slice(qt)
    sg = extend_sigma(find_slice_anti_iso(qt, r.slice, r.indexing).result)
    for m in range(-3, 3):
        for v in qt.vertices:
            z = ZVertex(m, v)
            assert sg.vertex_image(sg.vertex_image(z)) == z


def test_identity_perms_fail_on_qt(qt):
    r = find_op_slice(qt)
    bad = ZQAntiAutomorphism(base=qt, indexing=r.indexing, layer_perms=((1,), (1, 2)))
    rep = verify_sigma(bad, (-3, 2))
    assert not rep.ok
    assert not rep.arrows_reversed


def test_sigma_flips_the_plane_coordinate(qt):
    r = find_op_slice(qt)
    sg = extend_sigma(find_slice_anti_iso(qt, r.slice, r.indexing).result)
    pts = embed_slice(qt, r.slice, r.indexing, {"3": (0, 0, 2), "2": (0, 1, 1), "1": (0, 1, 0)})
    for v in qt.vertices:
        img = sg.vertex_image(ZVertex(0, v))
        # image sits at copy -j, whose embedded y-coordinate is -j
        assert pts[v].y == r.indexing.depth(v)
        assert img.m == -r.indexing.depth(v)
        assert reflect(pts[v]).y == -pts[v].y


def test_reflection_induced_sigma_trees(a3, out_star):
    for q in (a3, out_star):
        sg = reflection_induced_sigma(q)
        assert all(p == tuple(range(1, len(p) + 1)) for p in sg.layer_perms)
        rep = verify_sigma(sg, (-4, 3))
        assert rep.ok, rep.details


def test_reflection_induced_sigma_rejects_qt(qt):
    with pytest.raises(DomainError):
        reflection_induced_sigma(qt)


def test_reflection_induced_sigma_random_trees():
    rng = random.Random(61)
    for _ in range(12):
        q = random_tree_quiver(rng, rng.randint(2, 6))
        sg = reflection_induced_sigma(q)
        k = sg.indexing.k
        rep = verify_sigma(sg, (-(k + 3), k + 2))
        assert rep.ok, rep.details
        # every layer is discrete under the identity-permutation slice
        depth = dict(sg.indexing.j)
        for a in q.arrows:
            assert depth[a.source] != depth[a.target]


def test_sigma_serialization_shape(a3):
    r = find_op_slice(a3)
    sg = extend_sigma(find_slice_anti_iso(a3, r.slice, r.indexing).result)
    doc = sg.to_doc()
    assert doc["layer_perms"] == [[1], [1], [1]]
    rule = {entry["vertex"]: entry for entry in doc["rule"]}
    assert rule["1"]["j"] == 2 and rule["1"]["image_vertex"] == "1"
