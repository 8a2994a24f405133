"""JSON document builders shared by the CLI and the HTTP service.

Both front ends must emit byte-identical JSON for the same analytical
query, so every document goes through ``to_json_bytes``.
"""
from __future__ import annotations

import json
from typing import Optional

from .automorphism import SemidirectCertificate, verify_cluster_automorphism
from .embedding import EmbeddedQuiver, verify_embedding
from .mutation import (
    MutationClassResult,
    OpEquivalenceResult,
    Seed,
)
from .quiver import Quiver
from .sigma import SigmaReport, ZQAntiAutomorphism
from .translation import (
    OpSliceResult,
    Slice,
    SymmetricDecompositionReport,
    ZWindow,
)


def to_json_bytes(doc) -> bytes:
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def quiver_doc(q: Quiver) -> dict:
    return q.to_doc()


def seed_doc(s: Seed) -> dict:
    return {
        "quiver": s.quiver.to_doc(),
        "cluster": s.rendered_cluster(),
        "history": list(s.history),
    }


def mutation_class_doc(r: MutationClassResult) -> dict:
    return {
        "count": len(r.representatives),
        "complete": r.complete,
        "classes": [
            {"quiver": q.to_doc(), "sequence": list(seq)}
            for q, seq in r.representatives
        ],
    }


def op_equivalence_doc(r: OpEquivalenceResult) -> dict:
    return {
        "found": r.found,
        "complete": r.complete,
        "sequence": list(r.sequence) if r.sequence is not None else None,
        "iso": r.iso.to_doc() if r.iso else None,
    }


def variables_doc(exprs) -> dict:
    return {"count": len(exprs), "variables": sorted(e.render() for e in exprs)}


def window_doc(w: ZWindow) -> dict:
    return {
        "lo": w.lo,
        "hi": w.hi,
        "quiver": w.quiver().to_doc(),
    }


def op_slice_doc(r: Optional[OpSliceResult]) -> dict:
    if r is None:
        return {"found": False}
    return {
        "found": True,
        "slice": r.slice.to_doc(),
        "iso": r.iso.to_doc(),
        "indexing": r.indexing.to_doc(),
        "moves": r.moves,
        "layer_perms": [list(p) for p in r.layer_perms],
    }


def decompose_doc(rep: SymmetricDecompositionReport) -> dict:
    return rep.to_doc()


def embedding_doc(e: EmbeddedQuiver, sl: Slice, op_slice: Slice) -> dict:
    rep = verify_embedding(e, sl, op_slice)
    return {"embedding": e.to_doc(), "verification": rep.to_doc()}


def sigma_doc(sg: ZQAntiAutomorphism, report: SigmaReport) -> dict:
    return {"sigma": sg.to_doc(), "verification": report.to_doc()}


def inverse_auto_doc(found, complete: bool, quiver: Quiver) -> dict:
    if found is None:
        return {"found": False, "complete": complete}
    report = verify_cluster_automorphism(quiver, found)
    return {
        "found": True,
        "complete": complete,
        "witness": found.to_doc(),
        "verification": report.to_doc(),
    }


def certificate_doc(c: SemidirectCertificate) -> dict:
    return c.to_doc()
