"""Operational command line: serve, import/export, validate, search,
agreement, stats, render, and annotator management.

Exit codes: 0 success, 1 domain error (conflicts, parse errors, missing
ids), 2 usage error (click's default for bad arguments).
"""

from __future__ import annotations

import socket
import sys

import click

from .agreement import AGREEMENT_FIELDS, NoComparableSentences, compute_agreement
from .conllu import ConlluError, parse_document
from .layout import MODES, layout as compute_layout, render_svg
from .search import parse_query
from .store import BASE_LAYER, DEFAULT_DB_URL, Store, StoreError
from .transforms import TransformError
from .validation import validate_document

DOMAIN_ERRORS = (StoreError, ConlluError, TransformError, NoComparableSentences, ValueError)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


@click.group()
@click.option(
    "--db",
    "db_url",
    envvar="BOAT_DB_URL",
    default=DEFAULT_DB_URL,
    show_default=True,
    help="SQLAlchemy database URL.",
)
@click.pass_context
def main(ctx: click.Context, db_url: str):
    """Dependency-annotation platform for UD treebanks."""
    ctx.ensure_object(dict)
    ctx.obj["db_url"] = db_url


def _store(ctx: click.Context) -> Store:
    return Store(ctx.obj["db_url"])


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", envvar="BOAT_PORT", default=8000, show_default=True, type=int)
@click.pass_context
def serve(ctx: click.Context, host: str, port: int):
    """Run the HTTP API service."""
    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
        probe.close()
    except OSError as exc:
        _fail(f"cannot bind {host}:{port}: {exc}")
    import uvicorn

    from .api import create_app

    uvicorn.run(create_app(db_url=ctx.obj["db_url"]), host=host, port=port, log_level="warning")


@main.command("import")
@click.argument("treebank_id")
@click.argument("conllu_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--name", default="", help="Display name (defaults to the id).")
@click.option("--language", default="", help="Language code, e.g. tr.")
@click.pass_context
def import_cmd(ctx: click.Context, treebank_id: str, conllu_file: str, name: str, language: str):
    """Import a CoNLL-U file as a new treebank."""
    with open(conllu_file, encoding="utf-8") as f:
        text = f.read()
    try:
        tb = _store(ctx).import_treebank(treebank_id, name, language, text)
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))
    click.echo(f"imported {tb.id}: {tb.n_sentences} sentences")


@main.command()
@click.argument("treebank_id")
@click.option("--annotator", default=BASE_LAYER, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def export(ctx: click.Context, treebank_id: str, annotator: str, output: str | None):
    """Export a treebank layer as CoNLL-U."""
    try:
        text = _store(ctx).export_treebank(treebank_id, annotator)
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))
    if output:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


@main.command()
@click.argument("conllu_file", type=click.Path(exists=True, dir_okay=False))
def validate(conllu_file: str):
    """Validate a CoNLL-U file; one line per issue, exit 1 on errors."""
    with open(conllu_file, encoding="utf-8") as f:
        text = f.read()
    try:
        doc = parse_document(text)
    except ConlluError as exc:
        _fail(str(exc))
    has_errors = False
    for sent_id, issues in validate_document(doc).items():
        for issue in issues:
            token = str(issue.token_id) if issue.token_id is not None else "-"
            click.echo(
                f"{sent_id}\t{token}\t{issue.severity}\t{issue.code}\t{issue.message}"
            )
            has_errors = has_errors or issue.severity == "error"
    sys.exit(1 if has_errors else 0)


@main.command()
@click.argument("treebank_id")
@click.argument("query")
@click.option("--annotator", default=BASE_LAYER, show_default=True)
@click.pass_context
def search(ctx: click.Context, treebank_id: str, query: str, annotator: str):
    """Search a treebank layer with the query mini-language."""
    from .search import SearchEngine

    store = _store(ctx)
    try:
        bound = parse_query(query).bind(treebank_id, annotator)
        matches = SearchEngine(store).execute(bound)
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))
    for m in matches:
        token = str(m.token_id) if m.token_id is not None else "-"
        click.echo(f"{m.sent_id}\t{token}\t{m.snippet}")


@main.command()
@click.argument("treebank_id")
@click.option("-a", "annotator_a", required=True)
@click.option("-b", "annotator_b", required=True)
@click.option("--fields", default=",".join(AGREEMENT_FIELDS), show_default=True)
@click.pass_context
def agreement(ctx: click.Context, treebank_id: str, annotator_a: str, annotator_b: str, fields: str):
    """Pairwise inter-annotator agreement table."""
    wanted = tuple(f.strip().upper() for f in fields.split(",") if f.strip())
    try:
        report = compute_agreement(_store(ctx), treebank_id, annotator_a, annotator_b, wanted)
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))
    click.echo(f"annotators: {report.annotator_a} vs {report.annotator_b}")
    click.echo(
        f"sentences compared: {report.n_sentences_compared} "
        f"(skipped for tokenization: {report.n_sentences_skipped_tokenization})"
    )
    click.echo(f"tokens: {report.n_tokens}")
    click.echo("field\traw\tkappa")
    for field, fa in report.per_field.items():
        kappa = "undef" if fa.kappa is None else f"{fa.kappa:.4f}"
        click.echo(f"{field}\t{fa.raw_agreement:.4f}\t{kappa}")
    click.echo(f"UAS\t{report.uas:.4f}")
    click.echo(f"LAS\t{report.las:.4f}")


@main.command()
@click.pass_context
def stats(ctx: click.Context):
    """Sentence/token counts and per-annotator status tallies."""
    for info in _store(ctx).stats():
        click.echo(
            f"{info['treebank']}\t{info['language'] or '-'}\t"
            f"{info['sentences']} sentences\t{info['tokens']} tokens"
        )
        for annotator, statuses in sorted(info["annotators"].items()):
            tally = ", ".join(f"{s}={n}" for s, n in sorted(statuses.items()))
            click.echo(f"  {annotator}: {tally}")


@main.command()
@click.argument("conllu_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--sent-id", default=None, help="Sentence to render (default: first).")
@click.option("--mode", default="compact_horizontal", type=click.Choice(MODES), show_default=True)
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
def render(conllu_file: str, sent_id: str | None, mode: str, output: str):
    """Render one sentence's dependency graph to an SVG file."""
    with open(conllu_file, encoding="utf-8") as f:
        text = f.read()
    try:
        doc = parse_document(text)
        if not doc.sentences:
            _fail("file contains no sentences")
        if sent_id is None:
            sent = doc.sentences[0]
        else:
            matches = [s for s in doc.sentences if s.sent_id == sent_id]
            if not matches:
                _fail(f"no sentence with sent_id {sent_id!r}")
            sent = matches[0]
        svg = render_svg(compute_layout(sent, mode))
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))
    with open(output, "w", encoding="utf-8") as f:
        f.write(svg)
    click.echo(f"wrote {output}")


@main.group()
def annotator():
    """Manage annotator accounts."""


@annotator.command("add")
@click.argument("annotator_id")
@click.option("--name", default="", help="Display name (defaults to the id).")
@click.option("--password", prompt=True, hide_input=True, confirmation_prompt=True)
@click.pass_context
def annotator_add(ctx: click.Context, annotator_id: str, name: str, password: str):
    """Register a new annotator account."""
    try:
        ann = _store(ctx).register_annotator(annotator_id, name, password)
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))
    click.echo(f"registered {ann.id}")


@annotator.command("list")
@click.pass_context
def annotator_list(ctx: click.Context):
    for ann in _store(ctx).list_annotators():
        click.echo(f"{ann.id}\t{ann.display_name}\t{ann.created_at}")


if __name__ == "__main__":
    main()
