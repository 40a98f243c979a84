"""Persistent multi-treebank, multi-annotator annotation store.

One relational row per saved annotation record, holding the sentence as
canonical CoNLL-U text.  The imported base document is immutable; annotator
layers are copy-on-first-write (a sentence an annotator never saved reads as
a virtual record with the base sentence, status New, revision 0).  Writes
use optimistic concurrency: the caller passes the revision it read, and a
mismatch is a conflict, never a silent merge.

The backend is whatever SQLAlchemy URL is configured (BOAT_DB_URL);
the default is an embedded SQLite file, which is also what makes scenarios
survive a process restart.
"""

from __future__ import annotations

import hashlib
import os
import re
import secrets
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

import sqlalchemy as sa
from sqlalchemy.exc import IntegrityError
from sqlalchemy.pool import StaticPool

from .conllu import parse_document, serialize_document, serialize_sentence
from .model import Document, Sentence
from .validation import ValidationIssue, blocking_issues

__all__ = [
    "Store",
    "Treebank",
    "Annotator",
    "AnnotationRecord",
    "SessionToken",
    "StoreError",
    "NotFound",
    "UnknownTreebank",
    "UnknownAnnotator",
    "UnknownSentence",
    "DuplicateTreebank",
    "DuplicateAnnotator",
    "RevisionConflict",
    "CompleteWithErrors",
    "STATUS_NEW",
    "STATUS_DRAFT",
    "STATUS_COMPLETE",
    "BASE_LAYER",
    "DEFAULT_DB_URL",
]

STATUS_NEW = "New"
STATUS_DRAFT = "Draft"
STATUS_COMPLETE = "Complete"
SAVED_STATUSES = (STATUS_DRAFT, STATUS_COMPLETE)

BASE_LAYER = "base"  # reserved annotator selector for the imported original
DEFAULT_DB_URL = "sqlite:///boat.db"

_SLUG_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9_.-]*$")


class StoreError(Exception):
    pass


class NotFound(StoreError):
    pass


class UnknownTreebank(NotFound):
    pass


class UnknownAnnotator(NotFound):
    pass


class UnknownSentence(NotFound):
    pass


class DuplicateTreebank(StoreError):
    pass


class DuplicateAnnotator(StoreError):
    pass


class RevisionConflict(StoreError):
    def __init__(self, expected: int, current: int):
        super().__init__(
            f"expected revision {expected}, but the stored revision is {current}"
        )
        self.expected = expected
        self.current = current


class CompleteWithErrors(StoreError):
    def __init__(self, issues: list[ValidationIssue]):
        super().__init__(
            "cannot mark Complete; blocking issues: "
            + ", ".join(i.code for i in issues)
        )
        self.issues = issues


@dataclass(frozen=True)
class Treebank:
    id: str
    name: str
    language: str
    created_at: str
    n_sentences: int


@dataclass(frozen=True)
class Annotator:
    id: str
    display_name: str
    created_at: str


@dataclass(frozen=True)
class AnnotationRecord:
    treebank_id: str
    sent_id: str
    annotator_id: str
    sentence: Sentence
    status: str
    note: str
    revision: int
    updated_at: str | None


@dataclass(frozen=True)
class SessionToken:
    token: str
    annotator_id: str
    expires_at: str


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


def hash_credential(password: str, pepper: str = "", iterations: int = 120_000) -> str:
    salt = secrets.token_bytes(16)
    digest = hashlib.pbkdf2_hmac(
        "sha256", (password + pepper).encode("utf-8"), salt, iterations
    )
    return f"pbkdf2_sha256${iterations}${salt.hex()}${digest.hex()}"


def verify_credential(password: str, stored: str, pepper: str = "") -> bool:
    try:
        scheme, iterations, salt_hex, digest_hex = stored.split("$")
        if scheme != "pbkdf2_sha256":
            return False
        digest = hashlib.pbkdf2_hmac(
            "sha256",
            (password + pepper).encode("utf-8"),
            bytes.fromhex(salt_hex),
            int(iterations),
        )
        return secrets.compare_digest(digest.hex(), digest_hex)
    except (ValueError, TypeError):
        return False


_metadata = sa.MetaData()

_treebanks = sa.Table(
    "treebanks",
    _metadata,
    sa.Column("id", sa.String, primary_key=True),
    sa.Column("name", sa.String, nullable=False),
    sa.Column("language", sa.String, nullable=False),
    sa.Column("created_at", sa.String, nullable=False),
    sa.Column("base_conllu", sa.Text, nullable=False),
)

_annotators = sa.Table(
    "annotators",
    _metadata,
    sa.Column("id", sa.String, primary_key=True),
    sa.Column("display_name", sa.String, nullable=False),
    sa.Column("credential_hash", sa.String, nullable=False),
    sa.Column("created_at", sa.String, nullable=False),
)

_annotations = sa.Table(
    "annotations",
    _metadata,
    sa.Column("treebank_id", sa.String, primary_key=True),
    sa.Column("sent_id", sa.String, primary_key=True),
    sa.Column("annotator_id", sa.String, primary_key=True),
    sa.Column("conllu", sa.Text, nullable=False),
    sa.Column("status", sa.String, nullable=False),
    sa.Column("note", sa.Text, nullable=False, default=""),
    sa.Column("revision", sa.Integer, nullable=False),
    sa.Column("updated_at", sa.String, nullable=False),
)

_sessions = sa.Table(
    "sessions",
    _metadata,
    sa.Column("token", sa.String, primary_key=True),
    sa.Column("annotator_id", sa.String, nullable=False),
    sa.Column("expires_at", sa.String, nullable=False),
)


class Store:
    """Storage facade; safe for concurrent use from multiple threads."""

    def __init__(self, db_url: str | None = None, pepper: str | None = None):
        self.db_url = db_url or os.environ.get("BOAT_DB_URL", DEFAULT_DB_URL)
        self._pepper = pepper if pepper is not None else os.environ.get("BOAT_SECRET", "")
        kwargs = {}
        if self.db_url.startswith("sqlite"):
            kwargs["connect_args"] = {"check_same_thread": False}
            if self.db_url.endswith(":memory:"):
                kwargs["poolclass"] = StaticPool
        self._engine = sa.create_engine(self.db_url, **kwargs)
        _metadata.create_all(self._engine)
        self._base_cache: dict[str, tuple[Document, dict[str, int]]] = {}

    def close(self):
        self._engine.dispose()

    # --- annotators ----------------------------------------------------

    def register_annotator(self, annotator_id: str, display_name: str, password: str) -> Annotator:
        if annotator_id == BASE_LAYER or not _SLUG_RE.fullmatch(annotator_id):
            raise ValueError(f"invalid annotator id {annotator_id!r}")
        row = {
            "id": annotator_id,
            "display_name": display_name or annotator_id,
            "credential_hash": hash_credential(password, self._pepper),
            "created_at": _now(),
        }
        try:
            with self._engine.begin() as conn:
                conn.execute(_annotators.insert().values(**row))
        except IntegrityError:
            raise DuplicateAnnotator(f"annotator {annotator_id!r} already exists") from None
        return Annotator(row["id"], row["display_name"], row["created_at"])

    def list_annotators(self) -> list[Annotator]:
        with self._engine.connect() as conn:
            rows = conn.execute(
                sa.select(_annotators).order_by(_annotators.c.id)
            ).fetchall()
        return [Annotator(r.id, r.display_name, r.created_at) for r in rows]

    def _require_annotator(self, annotator_id: str, allow_base: bool = False):
        if annotator_id == BASE_LAYER:
            if allow_base:
                return
            raise UnknownAnnotator(f"{BASE_LAYER!r} is not a writable annotator")
        with self._engine.connect() as conn:
            found = conn.execute(
                sa.select(_annotators.c.id).where(_annotators.c.id == annotator_id)
            ).first()
        if found is None:
            raise UnknownAnnotator(f"unknown annotator {annotator_id!r}")

    def verify_credentials(self, annotator_id: str, password: str) -> bool:
        with self._engine.connect() as conn:
            row = conn.execute(
                sa.select(_annotators.c.credential_hash).where(
                    _annotators.c.id == annotator_id
                )
            ).first()
        if row is None:
            return False
        return verify_credential(password, row.credential_hash, self._pepper)

    # --- sessions --------------------------------------------------------

    def create_session(self, annotator_id: str, ttl_hours: float = 24.0) -> SessionToken:
        self._require_annotator(annotator_id)
        token = secrets.token_urlsafe(32)  # 256 bits
        expires = (
            datetime.now(timezone.utc) + timedelta(hours=ttl_hours)
        ).isoformat(timespec="microseconds")
        with self._engine.begin() as conn:
            conn.execute(
                _sessions.insert().values(
                    token=token, annotator_id=annotator_id, expires_at=expires
                )
            )
        return SessionToken(token, annotator_id, expires)

    def resolve_session(self, token: str) -> str | None:
        """The annotator id for a live token, or None."""
        with self._engine.connect() as conn:
            row = conn.execute(
                sa.select(_sessions).where(_sessions.c.token == token)
            ).first()
        if row is None or row.expires_at <= _now():
            return None
        return row.annotator_id

    # --- treebanks -------------------------------------------------------

    def import_treebank(self, treebank_id: str, name: str, language: str, conllu_text: str) -> Treebank:
        if not _SLUG_RE.fullmatch(treebank_id):
            raise ValueError(f"invalid treebank id {treebank_id!r}")
        doc = parse_document(conllu_text)  # ConlluError propagates with line numbers
        canonical = serialize_document(doc)
        row = {
            "id": treebank_id,
            "name": name or treebank_id,
            "language": language,
            "created_at": _now(),
            "base_conllu": canonical,
        }
        try:
            with self._engine.begin() as conn:
                conn.execute(_treebanks.insert().values(**row))
        except IntegrityError:
            raise DuplicateTreebank(f"treebank {treebank_id!r} already exists") from None
        self._base_cache[treebank_id] = (doc, {s.sent_id: i for i, s in enumerate(doc.sentences)})
        return Treebank(treebank_id, row["name"], language, row["created_at"], len(doc))

    def list_treebanks(self) -> list[Treebank]:
        with self._engine.connect() as conn:
            rows = conn.execute(
                sa.select(_treebanks).order_by(_treebanks.c.created_at, _treebanks.c.id)
            ).fetchall()
        return [
            Treebank(r.id, r.name, r.language, r.created_at, len(self._base(r.id)[0]))
            for r in rows
        ]

    def get_treebank(self, treebank_id: str) -> Treebank:
        with self._engine.connect() as conn:
            row = conn.execute(
                sa.select(_treebanks).where(_treebanks.c.id == treebank_id)
            ).first()
        if row is None:
            raise UnknownTreebank(f"unknown treebank {treebank_id!r}")
        return Treebank(
            row.id, row.name, row.language, row.created_at, len(self._base(row.id)[0])
        )

    def base_document(self, treebank_id: str) -> Document:
        return self._base(treebank_id)[0]

    def _base(self, treebank_id: str) -> tuple[Document, dict[str, int]]:
        cached = self._base_cache.get(treebank_id)
        if cached is not None:
            return cached
        with self._engine.connect() as conn:
            row = conn.execute(
                sa.select(_treebanks.c.base_conllu).where(
                    _treebanks.c.id == treebank_id
                )
            ).first()
        if row is None:
            raise UnknownTreebank(f"unknown treebank {treebank_id!r}")
        doc = parse_document(row.base_conllu)
        entry = (doc, {s.sent_id: i for i, s in enumerate(doc.sentences)})
        self._base_cache[treebank_id] = entry
        return entry

    def _base_sentence(self, treebank_id: str, sent_id: str) -> Sentence:
        doc, by_id = self._base(treebank_id)
        if sent_id not in by_id:
            raise UnknownSentence(
                f"treebank {treebank_id!r} has no sentence {sent_id!r}"
            )
        return doc.sentences[by_id[sent_id]]

    # --- annotation records ----------------------------------------------

    def get_annotation(self, treebank_id: str, sent_id: str, annotator_id: str) -> AnnotationRecord:
        base_sent = self._base_sentence(treebank_id, sent_id)
        self._require_annotator(annotator_id, allow_base=True)
        if annotator_id != BASE_LAYER:
            with self._engine.connect() as conn:
                row = conn.execute(
                    sa.select(_annotations).where(
                        (_annotations.c.treebank_id == treebank_id)
                        & (_annotations.c.sent_id == sent_id)
                        & (_annotations.c.annotator_id == annotator_id)
                    )
                ).first()
            if row is not None:
                return AnnotationRecord(
                    treebank_id,
                    sent_id,
                    annotator_id,
                    parse_document(row.conllu).sentences[0],
                    row.status,
                    row.note,
                    row.revision,
                    row.updated_at,
                )
        return AnnotationRecord(
            treebank_id, sent_id, annotator_id, base_sent, STATUS_NEW, "", 0, None
        )

    def put_annotation(
        self,
        treebank_id: str,
        sent_id: str,
        annotator_id: str,
        sentence: Sentence,
        status: str,
        note: str = "",
        expected_revision: int = 0,
    ) -> AnnotationRecord:
        self._base_sentence(treebank_id, sent_id)
        self._require_annotator(annotator_id)
        if status not in SAVED_STATUSES:
            raise ValueError(
                f"status must be one of {SAVED_STATUSES}, got {status!r}"
            )
        if sentence.sent_id != sent_id:
            raise ValueError(
                f"sentence carries sent_id {sentence.sent_id!r}, expected {sent_id!r}"
            )
        if status == STATUS_COMPLETE:
            blocking = blocking_issues(sentence)
            if blocking:
                raise CompleteWithErrors(blocking)

        block = serialize_sentence(sentence)
        now = _now()
        where = (
            (_annotations.c.treebank_id == treebank_id)
            & (_annotations.c.sent_id == sent_id)
            & (_annotations.c.annotator_id == annotator_id)
        )
        with self._engine.begin() as conn:
            row = conn.execute(
                sa.select(_annotations.c.revision).where(where)
            ).first()
            current = row.revision if row is not None else 0
            if expected_revision != current:
                raise RevisionConflict(expected_revision, current)
            if row is None:
                try:
                    conn.execute(
                        _annotations.insert().values(
                            treebank_id=treebank_id,
                            sent_id=sent_id,
                            annotator_id=annotator_id,
                            conllu=block,
                            status=status,
                            note=note,
                            revision=1,
                            updated_at=now,
                        )
                    )
                except IntegrityError:
                    raise RevisionConflict(expected_revision, 1) from None
            else:
                result = conn.execute(
                    _annotations.update()
                    .where(where & (_annotations.c.revision == expected_revision))
                    .values(
                        conllu=block,
                        status=status,
                        note=note,
                        revision=expected_revision + 1,
                        updated_at=now,
                    )
                )
                if result.rowcount != 1:
                    fresh = conn.execute(
                        sa.select(_annotations.c.revision).where(where)
                    ).first()
                    raise RevisionConflict(
                        expected_revision, fresh.revision if fresh else 0
                    )
        return AnnotationRecord(
            treebank_id, sent_id, annotator_id, sentence, status, note,
            expected_revision + 1, now,
        )

    def status_map(self, treebank_id: str, annotator_id: str) -> dict[str, str]:
        """sent_id -> status for one annotator layer (New where never saved)."""
        doc, _ = self._base(treebank_id)
        self._require_annotator(annotator_id, allow_base=True)
        statuses = {s.sent_id: STATUS_NEW for s in doc.sentences}
        if annotator_id != BASE_LAYER:
            with self._engine.connect() as conn:
                rows = conn.execute(
                    sa.select(_annotations.c.sent_id, _annotations.c.status).where(
                        (_annotations.c.treebank_id == treebank_id)
                        & (_annotations.c.annotator_id == annotator_id)
                    )
                ).fetchall()
            for r in rows:
                statuses[r.sent_id] = r.status
        return statuses

    def _record_map(self, treebank_id: str, annotator_id: str) -> dict[str, sa.Row]:
        with self._engine.connect() as conn:
            rows = conn.execute(
                sa.select(_annotations).where(
                    (_annotations.c.treebank_id == treebank_id)
                    & (_annotations.c.annotator_id == annotator_id)
                )
            ).fetchall()
        return {r.sent_id: r for r in rows}

    def view(self, treebank_id: str, annotator_id: str) -> list[tuple[str, Sentence, str]]:
        """The annotator's current version of every sentence, document order."""
        doc, _ = self._base(treebank_id)
        self._require_annotator(annotator_id, allow_base=True)
        records = (
            {} if annotator_id == BASE_LAYER else self._record_map(treebank_id, annotator_id)
        )
        out: list[tuple[str, Sentence, str]] = []
        for sent in doc.sentences:
            row = records.get(sent.sent_id)
            if row is None:
                out.append((sent.sent_id, sent, STATUS_NEW))
            else:
                out.append(
                    (sent.sent_id, parse_document(row.conllu).sentences[0], row.status)
                )
        return out

    def list_sentences(
        self,
        treebank_id: str,
        annotator_id: str,
        status_filter=None,
        page: int = 1,
        page_size: int = 50,
    ) -> tuple[list[tuple[str, str, str, str | None]], int]:
        """Page of (sent_id, text, status, updated_at) in document order."""
        if page < 1 or page_size < 1:
            raise ValueError("page and page_size must be >= 1")
        doc, _ = self._base(treebank_id)
        self._require_annotator(annotator_id, allow_base=True)
        records = (
            {} if annotator_id == BASE_LAYER else self._record_map(treebank_id, annotator_id)
        )
        wanted = set(status_filter) if status_filter else None
        items: list[tuple[str, str, str, str | None]] = []
        for sent in doc.sentences:
            row = records.get(sent.sent_id)
            status = row.status if row is not None else STATUS_NEW
            if wanted is not None and status not in wanted:
                continue
            items.append(
                (sent.sent_id, sent.text, status, row.updated_at if row else None)
            )
        total = len(items)
        start = (page - 1) * page_size
        return items[start : start + page_size], total

    def export_treebank(self, treebank_id: str, annotator_id: str) -> str:
        """Serialize the annotator's current version in document order."""
        return serialize_document(
            Document(tuple(sent for _, sent, _ in self.view(treebank_id, annotator_id)))
        )

    def completed_sentences(self, treebank_id: str, annotator_id: str) -> dict[str, Sentence]:
        self._require_annotator(annotator_id)
        with self._engine.connect() as conn:
            rows = conn.execute(
                sa.select(_annotations.c.sent_id, _annotations.c.conllu).where(
                    (_annotations.c.treebank_id == treebank_id)
                    & (_annotations.c.annotator_id == annotator_id)
                    & (_annotations.c.status == STATUS_COMPLETE)
                )
            ).fetchall()
        return {r.sent_id: parse_document(r.conllu).sentences[0] for r in rows}

    def all_layer_sentences(self, treebank_id: str):
        """Base sentences plus every saved record; for vocabulary mining."""
        doc, _ = self._base(treebank_id)
        yield from doc.sentences
        with self._engine.connect() as conn:
            rows = conn.execute(
                sa.select(_annotations.c.conllu).where(
                    _annotations.c.treebank_id == treebank_id
                )
            ).fetchall()
        for r in rows:
            yield parse_document(r.conllu).sentences[0]

    def stats(self) -> list[dict]:
        """Per-treebank sentence/token counts and per-annotator status tallies."""
        out = []
        for tb in self.list_treebanks():
            doc, _ = self._base(tb.id)
            with self._engine.connect() as conn:
                rows = conn.execute(
                    sa.select(
                        _annotations.c.annotator_id,
                        _annotations.c.status,
                        sa.func.count().label("n"),
                    )
                    .where(_annotations.c.treebank_id == tb.id)
                    .group_by(_annotations.c.annotator_id, _annotations.c.status)
                ).fetchall()
            per_annotator: dict[str, dict[str, int]] = {}
            for r in rows:
                per_annotator.setdefault(r.annotator_id, {})[r.status] = r.n
            out.append(
                {
                    "treebank": tb.id,
                    "language": tb.language,
                    "sentences": len(doc),
                    "tokens": sum(len(s.tokens) for s in doc.sentences),
                    "annotators": per_annotator,
                }
            )
        return out
