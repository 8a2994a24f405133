"""Command-line front end over the quiver JSON format."""
from __future__ import annotations

import json
import sys

import click

from . import reports
from .automorphism import build_inverse_automorphism, semidirect_certificate
from .embedding import Point3, embed_zq
from .errors import DomainError
from .mutation import (
    seed_from_state,
    enumerate_cluster_variables,
    initial_seed,
    mutation_class,
    op_mutation_equivalent,
    seed_mutate,
)
from .quiver import Quiver
from .sigma import extend_sigma, find_slice_anti_iso, verify_sigma
from .translation import Slice, find_op_slice, verify_symmetric_decomposition, zq_window


def _load_quiver(path: str) -> Quiver:
    with open(path, "r", encoding="utf-8") as fh:
        return Quiver.from_json(fh.read())


def _emit(doc, out: str | None) -> None:
    payload = reports.to_json_bytes(doc)
    if out:
        with open(out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)


def _fail(message: str) -> None:
    sys.stdout.buffer.write(
        reports.to_json_bytes({"error": {"code": "domain_error", "message": message}})
    )
    sys.exit(1)


quiver_option = click.option(
    "-q", "--quiver", "quiver_path", required=True, type=click.Path(exists=True)
)
out_option = click.option("--out", default=None, type=click.Path())


@click.group()
def main() -> None:
    """Exact quiver mutation, translation-quiver and symmetry toolkit."""


@main.command()
@click.option("-q", "--quiver", "quiver_path", default=None, type=click.Path(exists=True))
@click.option(
    "--seed-state",
    "state_path",
    default=None,
    type=click.Path(exists=True),
    help="resume from a previously emitted seed document",
)
@click.option("-k", "--vertex", "vertices_", multiple=True, required=True)
@out_option
def mutate(quiver_path, state_path, vertices_, out):
    """Mutate the quiver (and its seed) at one or more vertices in order.

    The output document round-trips through --seed-state, so a session
    can be resumed exactly where a previous run left off.
    """
    if (quiver_path is None) == (state_path is None):
        raise click.UsageError("provide exactly one of -q or --seed-state")
    try:
        if state_path is not None:
            with open(state_path, "r", encoding="utf-8") as fh:
                seed = seed_from_state(json.load(fh))
        else:
            seed = initial_seed(_load_quiver(quiver_path))
        for k in vertices_:
            seed = seed_mutate(seed, k)
        _emit(reports.seed_doc(seed), out)
    except DomainError as e:
        _fail(str(e))


@main.command("mutation-class")
@quiver_option
@click.option("--depth", default=None, type=int)
@out_option
def mutation_class_cmd(quiver_path, depth, out):
    """Enumerate the mutation class up to quiver isomorphism."""
    try:
        q = _load_quiver(quiver_path)
        if depth is None:
            depth = 8 if len(q.vertices) <= 4 else 5
        _emit(reports.mutation_class_doc(mutation_class(q, depth)), out)
    except DomainError as e:
        _fail(str(e))


@main.command("op-equiv")
@quiver_option
@click.option("--depth", default=6, type=int)
@out_option
def op_equiv(quiver_path, depth, out):
    """Shortest mutation sequence making the quiver match its opposite."""
    try:
        _emit(
            reports.op_equivalence_doc(
                op_mutation_equivalent(_load_quiver(quiver_path), depth)
            ),
            out,
        )
    except DomainError as e:
        _fail(str(e))


@main.command("variables")
@quiver_option
@click.option("--depth", default=4, type=int)
@out_option
def variables_cmd(quiver_path, depth, out):
    """All cluster variables reachable within the mutation depth."""
    try:
        exprs = enumerate_cluster_variables(
            initial_seed(_load_quiver(quiver_path)), depth
        )
        _emit(reports.variables_doc(exprs), out)
    except DomainError as e:
        _fail(str(e))


@main.command()
@quiver_option
@click.option("--lo", required=True, type=int)
@click.option("--hi", required=True, type=int)
@click.option("--dot", is_flag=True, default=False)
@out_option
def zq(quiver_path, lo, hi, dot, out):
    """A finite window of the repetitive quiver ZQ."""
    try:
        w = zq_window(_load_quiver(quiver_path), lo, hi)
        if dot:
            payload = w.quiver().to_dot("ZQ").encode()
            if out:
                with open(out, "wb") as fh:
                    fh.write(payload)
            else:
                sys.stdout.buffer.write(payload)
            return
        _emit(reports.window_doc(w), out)
    except DomainError as e:
        _fail(str(e))


@main.command("slice-op")
@quiver_option
@out_option
def slice_op(quiver_path, out):
    """Search ZQ for a local slice shaped like the opposite quiver."""
    try:
        _emit(reports.op_slice_doc(find_op_slice(_load_quiver(quiver_path))), out)
    except DomainError as e:
        _fail(str(e))


@main.command()
@quiver_option
@out_option
def decompose(quiver_path, out):
    """Layer decomposition with per-layer symmetric-quiver checks."""
    try:
        q = _load_quiver(quiver_path)
        op = find_op_slice(q)
        if op is None:
            _fail("no opposite slice found")
        _emit(reports.decompose_doc(verify_symmetric_decomposition(q, op.indexing)), out)
    except DomainError as e:
        _fail(str(e))


@main.command()
@quiver_option
@click.option(
    "--override",
    "overrides_",
    multiple=True,
    help="vertex=x,y,z with exact rational coordinates",
)
@click.option("--lo", default=None, type=int)
@click.option("--hi", default=1, type=int)
@out_option
def embed(quiver_path, overrides_, lo, hi, out):
    """Embed a ZQ window in R^3 and verify the geometric contract."""
    try:
        q = _load_quiver(quiver_path)
        op = find_op_slice(q)
        if op is None:
            _fail("no opposite slice found")
        overrides = {}
        for item in overrides_:
            vertex, _, coords = item.partition("=")
            xyz = coords.split(",")
            if len(xyz) != 3:
                raise click.UsageError(f"bad override {item!r}")
            overrides[vertex] = Point3.of(*xyz)
        if lo is None:
            lo = -(op.indexing.k + 2)
        emb = embed_zq(q, op.slice, op.indexing, (lo, hi), overrides or None)
        zero = Slice.from_vertices(q, [(0, v) for v in q.vertices])
        _emit(reports.embedding_doc(emb, zero, op.slice), out)
    except DomainError as e:
        _fail(str(e))


@main.command()
@quiver_option
@out_option
def sigma(quiver_path, out):
    """The involutive anti-automorphism of ZQ induced by the op-slice."""
    try:
        q = _load_quiver(quiver_path)
        op = find_op_slice(q)
        if op is None:
            _fail("no opposite slice found")
        search = find_slice_anti_iso(q, op.slice, op.indexing)
        if search.result is None:
            _fail("no slice anti-isomorphism found")
        sg = extend_sigma(search.result)
        k = op.indexing.k
        _emit(reports.sigma_doc(sg, verify_sigma(sg, (-(k + 3), k + 2))), out)
    except DomainError as e:
        _fail(str(e))


@main.command("inverse-auto")
@quiver_option
@click.option("--involutive/--no-involutive", default=True)
@click.option("--depth", default=8, type=int)
@out_option
def inverse_auto(quiver_path, involutive, depth, out):
    """Search for an inverse cluster automorphism witness."""
    try:
        q = _load_quiver(quiver_path)
        r = build_inverse_automorphism(q, depth, require_involutive=involutive)
        _emit(reports.inverse_auto_doc(r.witness, r.complete, q), out)
    except DomainError as e:
        _fail(str(e))


@main.command("certify-semidirect")
@quiver_option
@click.option("--depth", default=8, type=int)
@out_option
def certify_semidirect(quiver_path, depth, out):
    """Certificate for the semidirect-product structure of Aut(A)."""
    try:
        _emit(
            reports.certificate_doc(
                semidirect_certificate(_load_quiver(quiver_path), depth)
            ),
            out,
        )
    except DomainError as e:
        _fail(str(e))


@main.command()
@click.option("--port", default=8765, type=int, envvar="QUIVERLAB_PORT")
@click.option("--ui", "ui_dir", default=None, type=click.Path(exists=True))
def serve(port, ui_dir):
    """Run the local JSON-over-HTTP service (and optionally the web UI)."""
    from .service import serve as make_server

    server = make_server(port, ui_dir)
    click.echo(f"quiverlab service on http://127.0.0.1:{port}", err=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()


if __name__ == "__main__":
    main()
