"""HTTP API binding the store, search, layout, agreement and vocabularies.

Every route except /auth/login requires a bearer session token (the store is
private to registered annotators).  All errors use one envelope:
{"code": ..., "message": ..., "details": {...}} with the HTTP status carrying
the class of failure (401 auth, 404 missing, 409 conflicts, 422 rejected
domain operations, 400 malformed requests).

The service holds no state beyond the store and the session table, both in
the database: restarting the process mid-scenario changes nothing.
"""

from __future__ import annotations

import re as _re

from fastapi import Depends, FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import agreement as agreement_mod
from .conllu import ConlluError
from .layout import MODES, CyclicGraph, layout
from .model import FeatureBag, MultiwordToken, Sentence, Token
from .search import BadRegex, QuerySyntaxError, SearchEngine, parse_query
from .store import (
    CompleteWithErrors,
    DuplicateAnnotator,
    DuplicateTreebank,
    NotFound,
    RevisionConflict,
    Store,
)
from .transforms import TransformError, join_tokens, split_token
from .validation import validate_sentence
from .vocab import build_vocabulary

__all__ = ["create_app", "sentence_to_json", "sentence_from_json"]

DEFAULT_PAGE_SIZE = 50
MAX_PAGE_SIZE = 500


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: dict | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details or {}


def _envelope(status: int, code: str, message: str, details: dict | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "details": details or {}},
    )


# --- wire formats -----------------------------------------------------------


def sentence_to_json(sent: Sentence) -> dict:
    return {
        "sent_id": sent.sent_id,
        "text": sent.text,
        "comments": list(sent.comments),
        "tokens": [
            {
                "id": t.id,
                "form": t.form,
                "lemma": t.lemma,
                "upos": t.upos,
                "xpos": t.xpos,
                "feats": {a: v for a, v in t.feats.entries},
                "head": t.head,
                "deprel": t.deprel,
                "deps": [[h, r] for h, r in t.deps],
                "misc": [[k, v] for k, v in t.misc],
            }
            for t in sent.tokens
        ],
        "mwts": [
            {
                "first_id": m.first_id,
                "last_id": m.last_id,
                "form": m.form,
                "misc": [[k, v] for k, v in m.misc],
            }
            for m in sent.mwts
        ],
    }


def sentence_from_json(payload: dict, expected_sent_id: str | None = None) -> Sentence:
    try:
        tokens = tuple(
            Token(
                id=int(t["id"]),
                form=t["form"],
                lemma=t.get("lemma"),
                upos=t.get("upos"),
                xpos=t.get("xpos"),
                feats=FeatureBag(tuple((a, v) for a, v in (t.get("feats") or {}).items())),
                head=None if t.get("head") is None else int(t["head"]),
                deprel=t.get("deprel"),
                deps=tuple((int(h), r) for h, r in t.get("deps") or ()),
                misc=tuple((k, v) for k, v in t.get("misc") or ()),
            )
            for t in payload.get("tokens", ())
        )
        mwts = tuple(
            MultiwordToken(
                first_id=int(m["first_id"]),
                last_id=int(m["last_id"]),
                form=m["form"],
                misc=tuple((k, v) for k, v in m.get("misc") or ()),
            )
            for m in payload.get("mwts", ())
        )
        sent_id = payload.get("sent_id") or expected_sent_id or ""
        return Sentence(
            sent_id=sent_id,
            text=payload.get("text", ""),
            comments=tuple(payload.get("comments", ())),
            tokens=tokens,
            mwts=mwts,
        )
    except ApiError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ApiError(400, "BAD_SENTENCE", f"malformed sentence payload: {exc}") from exc


def issue_to_json(issue) -> dict:
    return {
        "code": issue.code,
        "severity": issue.severity,
        "token_id": issue.token_id,
        "message": issue.message,
    }


def record_to_json(rec) -> dict:
    return {
        "treebank_id": rec.treebank_id,
        "sent_id": rec.sent_id,
        "annotator_id": rec.annotator_id,
        "status": rec.status,
        "note": rec.note,
        "revision": rec.revision,
        "updated_at": rec.updated_at,
        "sentence": sentence_to_json(rec.sentence),
        "issues": [issue_to_json(i) for i in validate_sentence(rec.sentence)],
    }


def treebank_to_json(tb) -> dict:
    return {
        "id": tb.id,
        "name": tb.name,
        "language": tb.language,
        "created_at": tb.created_at,
        "n_sentences": tb.n_sentences,
    }


def diagram_to_json(d) -> dict:
    return {
        "mode": d.mode,
        "width": d.width,
        "height": d.height,
        "nodes": [
            {"token_id": n.token_id, "x": n.x, "y": n.y, "label": n.label, "sublabel": n.sublabel}
            for n in d.nodes
        ],
        "edges": [
            {
                "head_id": e.head_id,
                "dep_id": e.dep_id,
                "deprel": e.deprel,
                "height": e.height,
                "anchors": [[x, y] for x, y in e.anchors],
            }
            for e in d.edges
        ],
    }


def report_to_json(r) -> dict:
    return {
        "annotator_a": r.annotator_a,
        "annotator_b": r.annotator_b,
        "n_sentences_compared": r.n_sentences_compared,
        "n_sentences_skipped_tokenization": r.n_sentences_skipped_tokenization,
        "n_tokens": r.n_tokens,
        "per_field": {
            f: {"raw_agreement": fa.raw_agreement, "kappa": fa.kappa}
            for f, fa in r.per_field.items()
        },
        "uas": r.uas,
        "las": r.las,
    }


# --- request bodies ----------------------------------------------------------


class LoginBody(BaseModel):
    annotator_id: str
    password: str


class ImportBody(BaseModel):
    id: str
    name: str = ""
    language: str = ""
    conllu: str


class PutSentenceBody(BaseModel):
    sentence: dict
    status: str
    note: str = ""
    expected_revision: int


class SplitBody(BaseModel):
    token_id: int
    parts: list[str]
    expected_revision: int | None = None


class JoinBody(BaseModel):
    first_id: int
    last_id: int
    form: str | None = None
    expected_revision: int | None = None


# --- application -------------------------------------------------------------


def _snake_code(exc: Exception) -> str:
    return _re.sub(r"(?<!^)(?=[A-Z])", "_", type(exc).__name__).upper()


def create_app(store: Store | None = None, db_url: str | None = None) -> FastAPI:
    app = FastAPI(title="depanno", version="0.1.0", docs_url=None, redoc_url=None)
    app.state.store = store if store is not None else Store(db_url)
    app.state.engine = SearchEngine(app.state.store)

    def current_annotator(request: Request) -> str:
        header = request.headers.get("authorization", "")
        if header.lower().startswith("bearer "):
            token = header[7:].strip()
            annotator = request.app.state.store.resolve_session(token)
            if annotator is not None:
                return annotator
        raise ApiError(401, "UNAUTHORIZED", "a valid session token is required")

    Caller = Depends(current_annotator)

    @app.exception_handler(ApiError)
    async def _api_error(request, exc: ApiError):
        return _envelope(exc.status, exc.code, exc.message, exc.details)

    @app.exception_handler(NotFound)
    async def _not_found(request, exc: NotFound):
        return _envelope(404, _snake_code(exc), str(exc))

    @app.exception_handler(DuplicateTreebank)
    async def _dup_tb(request, exc: DuplicateTreebank):
        return _envelope(409, "DUPLICATE_TREEBANK", str(exc))

    @app.exception_handler(DuplicateAnnotator)
    async def _dup_ann(request, exc: DuplicateAnnotator):
        return _envelope(409, "DUPLICATE_ANNOTATOR", str(exc))

    @app.exception_handler(RevisionConflict)
    async def _conflict(request, exc: RevisionConflict):
        return _envelope(
            409,
            "REVISION_CONFLICT",
            str(exc),
            {"expected_revision": exc.expected, "current_revision": exc.current},
        )

    @app.exception_handler(CompleteWithErrors)
    async def _complete_err(request, exc: CompleteWithErrors):
        return _envelope(
            422,
            "COMPLETE_WITH_ERRORS",
            str(exc),
            {"issues": [issue_to_json(i) for i in exc.issues]},
        )

    @app.exception_handler(TransformError)
    async def _transform_err(request, exc: TransformError):
        return _envelope(422, _snake_code(exc), str(exc))

    @app.exception_handler(CyclicGraph)
    async def _cyclic(request, exc: CyclicGraph):
        return _envelope(422, "CYCLIC_GRAPH", str(exc))

    @app.exception_handler(QuerySyntaxError)
    async def _query_err(request, exc: QuerySyntaxError):
        code = "BAD_REGEX" if isinstance(exc, BadRegex) else "QUERY_SYNTAX"
        return _envelope(400, code, str(exc), {"position": exc.position})

    @app.exception_handler(ConlluError)
    async def _parse_err(request, exc: ConlluError):
        return _envelope(400, "PARSE_ERROR", str(exc), {"line": exc.line})

    @app.exception_handler(agreement_mod.NoComparableSentences)
    async def _no_comparable(request, exc):
        return _envelope(422, "NO_COMPARABLE_SENTENCES", str(exc))

    @app.exception_handler(ValueError)
    async def _value_err(request, exc: ValueError):
        return _envelope(400, "INVALID_REQUEST", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _body_err(request, exc: RequestValidationError):
        return _envelope(400, "INVALID_BODY", "request body failed validation",
                         {"errors": exc.errors()})

    def clamp_page_size(page_size: int) -> int:
        return max(1, min(page_size, MAX_PAGE_SIZE))

    # --- auth ---------------------------------------------------------------

    @app.post("/auth/login")
    def login(body: LoginBody):
        store: Store = app.state.store
        if not store.verify_credentials(body.annotator_id, body.password):
            raise ApiError(401, "BAD_CREDENTIALS", "unknown annotator or wrong password")
        session = store.create_session(body.annotator_id)
        return {
            "token": session.token,
            "annotator_id": session.annotator_id,
            "expires_at": session.expires_at,
        }

    # --- treebanks ------------------------------------------------------------

    @app.get("/treebanks")
    def list_treebanks(caller: str = Caller):
        return {"items": [treebank_to_json(t) for t in app.state.store.list_treebanks()]}

    @app.post("/treebanks", status_code=201)
    def import_treebank(body: ImportBody, caller: str = Caller):
        tb = app.state.store.import_treebank(body.id, body.name, body.language, body.conllu)
        return treebank_to_json(tb)

    @app.get("/treebanks/{treebank_id}/sentences")
    def list_sentences(
        treebank_id: str,
        status: str | None = None,
        page: int = Query(1, ge=1),
        page_size: int = Query(DEFAULT_PAGE_SIZE, ge=1),
        annotator: str | None = None,
        caller: str = Caller,
    ):
        page_size = clamp_page_size(page_size)
        status_filter = set(status.split(",")) if status else None
        items, total = app.state.store.list_sentences(
            treebank_id, annotator or caller, status_filter, page, page_size
        )
        return {
            "page": page,
            "page_size": page_size,
            "total": total,
            "items": [
                {"sent_id": sid, "text": text, "status": st, "updated_at": up}
                for sid, text, st, up in items
            ],
        }

    @app.get("/treebanks/{treebank_id}/sentences/{sent_id}")
    def get_sentence(
        treebank_id: str, sent_id: str, annotator: str | None = None, caller: str = Caller
    ):
        rec = app.state.store.get_annotation(treebank_id, sent_id, annotator or caller)
        return record_to_json(rec)

    @app.put("/treebanks/{treebank_id}/sentences/{sent_id}")
    def put_sentence(
        treebank_id: str, sent_id: str, body: PutSentenceBody, caller: str = Caller
    ):
        sent = sentence_from_json(body.sentence, expected_sent_id=sent_id)
        rec = app.state.store.put_annotation(
            treebank_id, sent_id, caller, sent, body.status, body.note,
            body.expected_revision,
        )
        app.state.engine.notify(treebank_id, caller, sent_id, sent)
        return record_to_json(rec)

    @app.get("/treebanks/{treebank_id}/sentences/{sent_id}/layout")
    def sentence_layout(
        treebank_id: str,
        sent_id: str,
        mode: str = "compact_horizontal",
        annotator: str | None = None,
        caller: str = Caller,
    ):
        if mode not in MODES:
            raise ApiError(400, "UNKNOWN_MODE", f"mode must be one of {', '.join(MODES)}")
        rec = app.state.store.get_annotation(treebank_id, sent_id, annotator or caller)
        return diagram_to_json(layout(rec.sentence, mode))

    def _save_transform(treebank_id: str, sent_id: str, caller: str, expected, transform):
        store: Store = app.state.store
        rec = store.get_annotation(treebank_id, sent_id, caller)
        expected = rec.revision if expected is None else expected
        new_sent = transform(rec.sentence)
        saved = store.put_annotation(
            treebank_id, sent_id, caller, new_sent, "Draft", rec.note, expected
        )
        app.state.engine.notify(treebank_id, caller, sent_id, new_sent)
        return record_to_json(saved)

    @app.post("/treebanks/{treebank_id}/sentences/{sent_id}/split")
    def split(treebank_id: str, sent_id: str, body: SplitBody, caller: str = Caller):
        return _save_transform(
            treebank_id, sent_id, caller, body.expected_revision,
            lambda s: split_token(s, body.token_id, body.parts),
        )

    @app.post("/treebanks/{treebank_id}/sentences/{sent_id}/join")
    def join(treebank_id: str, sent_id: str, body: JoinBody, caller: str = Caller):
        return _save_transform(
            treebank_id, sent_id, caller, body.expected_revision,
            lambda s: join_tokens(s, body.first_id, body.last_id, body.form),
        )

    # --- search ----------------------------------------------------------------

    @app.get("/treebanks/{treebank_id}/search")
    def search(
        treebank_id: str,
        q: str,
        page: int = Query(1, ge=1),
        page_size: int = Query(DEFAULT_PAGE_SIZE, ge=1),
        annotator: str | None = None,
        status: str | None = None,
        caller: str = Caller,
    ):
        page_size = clamp_page_size(page_size)
        query = parse_query(q).bind(
            treebank_id, annotator or caller, status.split(",") if status else None
        )
        matches = app.state.engine.execute(query)
        start = (page - 1) * page_size
        return {
            "page": page,
            "page_size": page_size,
            "total": len(matches),
            "items": [
                {
                    "sent_id": m.sent_id,
                    "token_id": m.token_id,
                    "snippet": m.snippet,
                    "start": m.start,
                    "end": m.end,
                }
                for m in matches[start : start + page_size]
            ],
        }

    # --- agreement ---------------------------------------------------------------

    def _parse_fields(fields: str | None):
        if not fields:
            return agreement_mod.AGREEMENT_FIELDS
        return tuple(f.strip().upper() for f in fields.split(",") if f.strip())

    @app.get("/treebanks/{treebank_id}/agreement")
    def agreement(
        treebank_id: str, a: str, b: str, fields: str | None = None, caller: str = Caller
    ):
        report = agreement_mod.compute_agreement(
            app.state.store, treebank_id, a, b, _parse_fields(fields)
        )
        return report_to_json(report)

    @app.get("/treebanks/{treebank_id}/agreement-matrix")
    def agreement_matrix(treebank_id: str, fields: str | None = None, caller: str = Caller):
        matrix = agreement_mod.agreement_matrix(
            app.state.store, treebank_id, _parse_fields(fields)
        )
        return {
            "pairs": [
                {"a": a, "b": b, "report": report_to_json(r)}
                for (a, b), r in sorted(matrix.items())
            ]
        }

    # --- export / vocabulary ------------------------------------------------------

    @app.get("/treebanks/{treebank_id}/export")
    def export(treebank_id: str, annotator: str | None = None, caller: str = Caller):
        text = app.state.store.export_treebank(treebank_id, annotator or caller)
        return PlainTextResponse(text, media_type="text/plain; charset=utf-8")

    @app.get("/treebanks/{treebank_id}/vocabulary")
    def vocabulary(treebank_id: str, caller: str = Caller):
        app.state.store.get_treebank(treebank_id)
        bundle = build_vocabulary(app.state.store, treebank_id)
        return {
            "upos": list(bundle.upos),
            "deprel": list(bundle.deprel),
            "feats": {a: list(vs) for a, vs in bundle.feats.items()},
        }

    return app
