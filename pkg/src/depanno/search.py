"""Feature-level treebank search: conjunctions of token predicates.

A query is a conjunction of single-token predicates (exact, regex, exists)
over FORM / LEMMA / UPOS / XPOS / DEPREL / HEAD_DEPREL / individual FEATS
attributes, plus sentence-scoped TEXT predicates.  Exact matches are
whole-field and case-sensitive; a regex matches anywhere in the field value
unless anchored.  Execution is backed by an inverted index over exact field
values; regexes scan the candidate (or full) lists.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .model import Sentence, surface_units

__all__ = [
    "FieldPredicate",
    "SearchQuery",
    "Match",
    "QuerySyntaxError",
    "BadRegex",
    "parse_query",
    "Index",
    "build_index",
    "update_index",
    "find_matches",
    "token_spans",
    "SearchEngine",
]

TOKEN_FIELDS = ("FORM", "LEMMA", "UPOS", "XPOS", "DEPREL", "HEAD_DEPREL", "FEAT")
INDEXED_FIELDS = ("FORM", "LEMMA", "UPOS", "DEPREL", "FEAT")


class QuerySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"at {position}: {message}")
        self.position = position


class BadRegex(QuerySyntaxError):
    pass


@lru_cache(maxsize=512)
def _compile(pattern: str) -> re.Pattern:
    return re.compile(pattern)


@dataclass(frozen=True)
class FieldPredicate:
    field: str  # one of TOKEN_FIELDS or "TEXT"
    matcher: str  # "exact" | "regex" | "exists"
    value: str | None = None
    feat_name: str | None = None

    def __post_init__(self):
        if self.field not in TOKEN_FIELDS and self.field != "TEXT":
            raise ValueError(f"unknown field {self.field!r}")
        if self.field == "FEAT" and not self.feat_name:
            raise ValueError("FEAT predicate needs an attribute name")
        if self.matcher in ("exact", "regex") and self.value is None:
            raise ValueError(f"{self.matcher} matcher needs a value")
        if self.matcher == "regex":
            _compile(self.value)

    def field_value(self, sent: Sentence, token_id: int) -> str | None:
        tok = sent.tokens[token_id - 1]
        if self.field == "FORM":
            return tok.form
        if self.field == "LEMMA":
            return tok.lemma
        if self.field == "UPOS":
            return tok.upos
        if self.field == "XPOS":
            return tok.xpos
        if self.field == "DEPREL":
            return tok.deprel
        if self.field == "HEAD_DEPREL":
            if tok.head is None or not 1 <= tok.head <= len(sent.tokens):
                return None
            return sent.tokens[tok.head - 1].deprel
        if self.field == "FEAT":
            return tok.feats.get(self.feat_name)
        raise ValueError(f"{self.field} is not token-scoped")

    def matches_value(self, value: str | None) -> bool:
        if self.matcher == "exists":
            return value is not None
        if value is None:
            return False
        if self.matcher == "exact":
            return value == self.value
        return _compile(self.value).search(value) is not None

    def matches_token(self, sent: Sentence, token_id: int) -> bool:
        return self.matches_value(self.field_value(sent, token_id))


@dataclass(frozen=True)
class SearchQuery:
    predicates: tuple[FieldPredicate, ...]
    scope: str | None = None  # treebank id, bound by the caller
    annotator: str = "base"
    status_filter: frozenset[str] | None = None

    def __post_init__(self):
        if not self.predicates:
            raise ValueError("query needs at least one predicate")

    @property
    def token_predicates(self) -> tuple[FieldPredicate, ...]:
        return tuple(p for p in self.predicates if p.field != "TEXT")

    @property
    def text_predicates(self) -> tuple[FieldPredicate, ...]:
        return tuple(p for p in self.predicates if p.field == "TEXT")

    def bind(self, scope: str, annotator: str, status_filter=None) -> "SearchQuery":
        return replace(
            self,
            scope=scope,
            annotator=annotator,
            status_filter=frozenset(status_filter) if status_filter else None,
        )


@dataclass(frozen=True)
class Match:
    sent_id: str
    token_id: int | None
    snippet: str
    start: int  # byte offsets into the UTF-8 snippet
    end: int

    def __post_init__(self):
        if not 0 <= self.start <= self.end <= len(self.snippet.encode("utf-8")):
            raise ValueError("match offsets must lie within the snippet")


_FIELD_NAMES = {
    "form": "FORM",
    "lemma": "LEMMA",
    "upos": "UPOS",
    "xpos": "XPOS",
    "deprel": "DEPREL",
    "head_deprel": "HEAD_DEPREL",
    "text": "TEXT",
}


def _scan_terms(s: str):
    """Yield (position, term) honoring double quotes and /regex/ slashes."""
    i, n = 0, len(s)
    while i < n:
        if s[i].isspace():
            i += 1
            continue
        start = i
        buf = []
        while i < n and not s[i].isspace():
            ch = s[i]
            if ch == '"':
                end = s.find('"', i + 1)
                if end == -1:
                    raise QuerySyntaxError("unterminated quote", i)
                buf.append(s[i : end + 1])
                i = end + 1
            elif ch == "/":
                j = i + 1
                while j < n:
                    if s[j] == "\\":
                        j += 2
                        continue
                    if s[j] == "/":
                        break
                    j += 1
                if j >= n:
                    raise QuerySyntaxError("unterminated /regex/", i)
                buf.append(s[i : j + 1])
                i = j + 1
            else:
                buf.append(ch)
                i += 1
        yield start, "".join(buf)


def _unquote(value: str) -> str:
    if len(value) >= 2 and value[0] == '"' and value[-1] == '"':
        return value[1:-1]
    return value


def _make_predicate(field_part: str, op: str, value: str, pos: int) -> FieldPredicate:
    if field_part.startswith("feats."):
        field, feat_name = "FEAT", field_part[len("feats."):]
        if not feat_name:
            raise QuerySyntaxError("feats. needs an attribute name", pos)
    else:
        field = _FIELD_NAMES.get(field_part.lower())
        feat_name = None
        if field is None:
            raise QuerySyntaxError(f"unknown field {field_part!r}", pos)
    if op == "=":
        value = _unquote(value)
        if value == "":
            raise QuerySyntaxError("empty value", pos)
        return FieldPredicate(field, "exact", value, feat_name)
    if not (len(value) >= 2 and value[0] == "/" and value[-1] == "/"):
        raise QuerySyntaxError("regex value must be enclosed in slashes", pos)
    pattern = value[1:-1].replace("\\/", "/")
    if pattern == "":
        raise QuerySyntaxError("empty regex", pos)
    try:
        _compile(pattern)
    except re.error as exc:
        raise BadRegex(f"bad regex {pattern!r}: {exc}", pos) from None
    return FieldPredicate(field, "regex", pattern, feat_name)


_TERM_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*(?:\.[^=~\s]+)?)([=~])(.*)", re.DOTALL)


def parse_query(s: str) -> SearchQuery:
    """Parse the query mini-language.

    Terms are space-separated and conjoined: `field=value`, `field~/regex/`,
    `feats.Attr=value`, `feats.Attr~/regex/`, bare `feats.Attr` (attribute
    present), `text~/regex/` for the sentence text, and a bare word as
    shorthand for `form=word`.  Double quotes protect values with spaces.
    """
    predicates: list[FieldPredicate] = []
    for pos, term in _scan_terms(s):
        m = _TERM_RE.fullmatch(term)
        if m:
            predicates.append(_make_predicate(m.group(1), m.group(2), m.group(3), pos))
        elif term.startswith("feats."):
            name = term[len("feats."):]
            if not name:
                raise QuerySyntaxError("feats. needs an attribute name", pos)
            predicates.append(FieldPredicate("FEAT", "exists", None, name))
        else:
            word = _unquote(term)
            if word == "":
                raise QuerySyntaxError("empty term", pos)
            predicates.append(FieldPredicate("FORM", "exact", word))
    if not predicates:
        raise QuerySyntaxError("empty query", 0)
    return SearchQuery(tuple(predicates))


# --- index -----------------------------------------------------------------

PostingKey = tuple[str, str]  # (field or "FEAT", value or "name=value")


@dataclass
class Index:
    postings: dict[PostingKey, set[tuple[str, int]]] = field(default_factory=dict)
    keys_by_sentence: dict[str, set[PostingKey]] = field(default_factory=dict)
    sentences: dict[str, Sentence] = field(default_factory=dict)

    def posting(self, key: PostingKey) -> set[tuple[str, int]]:
        return self.postings.get(key, set())


def _token_keys(tok) -> set[PostingKey]:
    keys: set[PostingKey] = {("FORM", tok.form)}
    if tok.lemma is not None:
        keys.add(("LEMMA", tok.lemma))
    if tok.upos is not None:
        keys.add(("UPOS", tok.upos))
    if tok.deprel is not None:
        keys.add(("DEPREL", tok.deprel))
    for attr, value in tok.feats.entries:
        keys.add(("FEAT", f"{attr}={value}"))
    return keys


def build_index(view) -> Index:
    """Build the inverted index over (sent_id, Sentence) pairs."""
    index = Index()
    for sent_id, sent in view:
        update_index(index, sent_id, sent)
    return index


def update_index(index: Index, sent_id: str, sent: Sentence | None) -> Index:
    """Replace (or with sent=None remove) one sentence; returns the index."""
    for key in index.keys_by_sentence.pop(sent_id, ()):
        posting = index.postings.get(key)
        if posting is not None:
            posting.difference_update(
                {entry for entry in posting if entry[0] == sent_id}
            )
            if not posting:
                del index.postings[key]
    index.sentences.pop(sent_id, None)
    if sent is None:
        return index

    index.sentences[sent_id] = sent
    sent_keys: set[PostingKey] = set()
    for tok in sent.tokens:
        for key in _token_keys(tok):
            index.postings.setdefault(key, set()).add((sent_id, tok.id))
            sent_keys.add(key)
    index.keys_by_sentence[sent_id] = sent_keys
    return index


def _predicate_key(pred: FieldPredicate) -> PostingKey | None:
    if pred.matcher != "exact":
        return None
    if pred.field == "FEAT":
        return ("FEAT", f"{pred.feat_name}={pred.value}")
    if pred.field in INDEXED_FIELDS:
        return (pred.field, pred.value)
    return None


def token_spans(sent: Sentence) -> dict[int, tuple[int, int]]:
    """Character offsets of each token's surface unit within the text.

    MWT-covered tokens share the span of their surface word.  A unit that
    cannot be located yields the empty span (0, 0).
    """
    spans: dict[int, tuple[int, int]] = {}
    cursor = 0
    for form, ids in surface_units(sent):
        at = sent.text.find(form, cursor)
        if at == -1:
            span = (0, 0)
        else:
            span = (at, at + len(form))
            cursor = at + len(form)
        for tid in ids:
            spans[tid] = span
    return spans


def _byte_span(text: str, span: tuple[int, int]) -> tuple[int, int]:
    start = len(text[: span[0]].encode("utf-8"))
    end = start + len(text[span[0] : span[1]].encode("utf-8"))
    return start, end


def find_matches(index: Index, query: SearchQuery) -> list[Match]:
    """Evaluate a query against an indexed view; deterministic order."""
    token_preds = query.token_predicates
    text_preds = query.text_predicates

    def text_ok(sent: Sentence) -> bool:
        return all(p.matches_value(sent.text) for p in text_preds)

    matches: list[Match] = []
    if not token_preds:
        for sent_id, sent in index.sentences.items():
            span = (0, len(sent.text))
            hit = True
            for p in text_preds:
                if p.matcher == "regex":
                    m = _compile(p.value).search(sent.text)
                    if m is None:
                        hit = False
                        break
                    span = m.span()
                elif not p.matches_value(sent.text):
                    hit = False
                    break
            if hit:
                start, end = _byte_span(sent.text, span)
                matches.append(Match(sent_id, None, sent.text, start, end))
        matches.sort(key=lambda m: m.sent_id)
        return matches

    candidate_sets = [
        index.posting(key)
        for key in map(_predicate_key, token_preds)
        if key is not None
    ]
    if candidate_sets:
        candidates = set.intersection(*candidate_sets)
    else:
        candidates = {
            (sent_id, tok.id)
            for sent_id, sent in index.sentences.items()
            for tok in sent.tokens
        }

    spans_cache: dict[str, dict[int, tuple[int, int]]] = {}
    for sent_id, token_id in candidates:
        sent = index.sentences[sent_id]
        if not text_ok(sent):
            continue
        if not all(p.matches_token(sent, token_id) for p in token_preds):
            continue
        if sent_id not in spans_cache:
            spans_cache[sent_id] = token_spans(sent)
        start, end = _byte_span(sent.text, spans_cache[sent_id][token_id])
        matches.append(Match(sent_id, token_id, sent.text, start, end))
    matches.sort(key=lambda m: (m.sent_id, m.token_id))
    return matches


class SearchEngine:
    """Query execution over a store, with one cached index per view.

    A view is one annotator's version of one treebank ("base" selects the
    imported original).  Writes that go through this process must be
    reported via notify(); caches are per-process, so a fresh process simply
    rebuilds from the store.  One writer at a time; readers see a consistent
    snapshot (the cache is swapped under a lock).
    """

    def __init__(self, store):
        self._store = store
        self._indexes: dict[tuple[str, str], Index] = {}
        self._lock = threading.Lock()

    def _index_for(self, treebank_id: str, annotator: str) -> Index:
        key = (treebank_id, annotator)
        with self._lock:
            index = self._indexes.get(key)
            if index is None:
                view = self._store.view(treebank_id, annotator)
                index = build_index((sid, sent) for sid, sent, _ in view)
                self._indexes[key] = index
            return index

    def notify(self, treebank_id: str, annotator: str, sent_id: str, sent: Sentence):
        """Keep the cached index in sync after a saved edit."""
        with self._lock:
            index = self._indexes.get((treebank_id, annotator))
            if index is not None:
                update_index(index, sent_id, sent)

    def execute(self, query: SearchQuery) -> list[Match]:
        """All matches in the annotator's view; read-only on the store."""
        if query.scope is None:
            raise ValueError("query is not bound to a treebank")
        index = self._index_for(query.scope, query.annotator)
        matches = find_matches(index, query)
        if query.status_filter is not None:
            statuses = self._store.status_map(query.scope, query.annotator)
            matches = [
                m for m in matches if statuses.get(m.sent_id) in query.status_filter
            ]
        return matches
