"""CoNLL-U parsing and serialization.

Guarantees: parse(serialize(doc)) is structurally identical for any valid
document, and serialize(parse(text)) is byte-identical when the input is
canonical (LF endings, canonical FEATS order, trailing blank line).

Accepts LF and CRLF input; always emits LF.  Empty nodes (ids like "8.1")
are rejected with an error rather than silently dropped.
"""

from __future__ import annotations

import re

from .model import Document, FeatureBag, MiscItems, MultiwordToken, Sentence, Token

__all__ = [
    "ConlluError",
    "MalformedLine",
    "MalformedFeature",
    "NonContiguousIds",
    "DuplicateSentId",
    "parse_document",
    "serialize_document",
    "serialize_sentence",
    "parse_feats",
    "serialize_feats",
    "parse_misc",
    "serialize_misc",
]

N_COLUMNS = 10

_TOKEN_ID_RE = re.compile(r"[1-9][0-9]*$")
_MWT_ID_RE = re.compile(r"([1-9][0-9]*)-([1-9][0-9]*)$")
_EMPTY_NODE_ID_RE = re.compile(r"[0-9]+\.[0-9]+$")
_SENT_ID_RE = re.compile(r"#\s*sent_id\s*=\s*(.*)$")
_TEXT_RE = re.compile(r"#\s*text\s*=\s*(.*)$")


class ConlluError(ValueError):
    """Problem in CoNLL-U text; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedLine(ConlluError):
    pass


class MalformedFeature(ConlluError):
    pass


class NonContiguousIds(ConlluError):
    pass


class DuplicateSentId(ConlluError):
    pass


def parse_feats(s: str, line: int | None = None) -> FeatureBag:
    """Parse a FEATS value; "_" or "" gives the empty bag."""
    if s in ("_", ""):
        return FeatureBag()
    entries: list[tuple[str, str]] = []
    seen: set[str] = set()
    for item in s.split("|"):
        attr, eq, value = item.partition("=")
        if not eq or not attr:
            raise MalformedFeature(f"feature {item!r} is not of the form Attr=Val", line)
        if attr in seen:
            raise MalformedFeature(f"duplicate feature attribute {attr!r}", line)
        seen.add(attr)
        entries.append((attr, value))
    return FeatureBag(tuple(entries))


def serialize_feats(bag: FeatureBag) -> str:
    """Canonical FEATS form: attributes sorted alphabetically, case-insensitive."""
    if not bag:
        return "_"
    return "|".join(f"{a}={v}" for a, v in bag.canonical_items())


def parse_misc(s: str) -> MiscItems:
    if s in ("_", ""):
        return ()
    items: list[tuple[str, str | None]] = []
    for item in s.split("|"):
        key, eq, value = item.partition("=")
        items.append((key, value if eq else None))
    return tuple(items)


def serialize_misc(misc: MiscItems) -> str:
    if not misc:
        return "_"
    return "|".join(k if v is None else f"{k}={v}" for k, v in misc)


def _parse_deps(s: str, line: int) -> tuple[tuple[int, str], ...]:
    if s in ("_", ""):
        return ()
    pairs: list[tuple[int, str]] = []
    for item in s.split("|"):
        head_s, colon, rel = item.partition(":")
        if not colon or not rel:
            raise MalformedLine(f"DEPS item {item!r} is not of the form head:rel", line)
        if not _TOKEN_ID_RE.fullmatch(head_s) and head_s != "0":
            raise MalformedLine(
                f"DEPS head {head_s!r} is not a plain token id (empty nodes unsupported)",
                line,
            )
        pairs.append((int(head_s), rel))
    return tuple(pairs)


def _serialize_deps(deps: tuple[tuple[int, str], ...]) -> str:
    if not deps:
        return "_"
    return "|".join(f"{h}:{r}" for h, r in deps)


def _split_blocks(text: str) -> list[list[tuple[int, str]]]:
    """Group numbered lines into blank-line-separated blocks."""
    blocks: list[list[tuple[int, str]]] = []
    current: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw[:-1] if raw.endswith("\r") else raw
        if line.strip() == "":
            if current:
                blocks.append(current)
                current = []
        else:
            current.append((lineno, line))
    if current:
        blocks.append(current)
    return blocks


def _parse_block(lines: list[tuple[int, str]], position: int) -> Sentence:
    comments: list[str] = []
    row_lines: list[tuple[int, str]] = []
    for lineno, line in lines:
        if line.startswith("#"):
            if row_lines:
                raise MalformedLine("comment lines must precede all token lines", lineno)
            comments.append(line)
        else:
            row_lines.append((lineno, line))
    if not row_lines:
        raise MalformedLine("sentence block has no token lines", lines[0][0])

    # First pass: collect MWT ranges so that LEMMA "_" inside an MWT can be
    # read as literal text rather than as unset.
    mwts: list[tuple[int, MultiwordToken]] = []
    token_rows: list[tuple[int, list[str]]] = []
    for lineno, line in row_lines:
        cols = line.split("\t")
        if len(cols) != N_COLUMNS:
            raise MalformedLine(
                f"expected {N_COLUMNS} tab-separated columns, got {len(cols)}", lineno
            )
        token_id = cols[0]
        if _TOKEN_ID_RE.fullmatch(token_id):
            token_rows.append((lineno, cols))
        elif _MWT_ID_RE.fullmatch(token_id):
            first, last = (int(x) for x in token_id.split("-"))
            if first >= last:
                raise MalformedLine(f"MWT range {token_id} must have first < last", lineno)
            if cols[1] == "":
                raise MalformedLine("MWT form must be non-empty", lineno)
            for col, name in zip(cols[2:9], ("LEMMA", "UPOS", "XPOS", "FEATS", "HEAD", "DEPREL", "DEPS")):
                if col != "_":
                    raise MalformedLine(f"MWT rows must have _ in {name}", lineno)
            mwts.append(
                (lineno, MultiwordToken(first, last, cols[1], parse_misc(cols[9])))
            )
        elif _EMPTY_NODE_ID_RE.fullmatch(token_id):
            raise MalformedLine(
                f"empty node id {token_id!r} is unsupported", lineno
            )
        else:
            raise MalformedLine(f"invalid token id {token_id!r}", lineno)

    covered: set[int] = set()
    for _, mwt in mwts:
        covered.update(range(mwt.first_id, mwt.last_id + 1))

    tokens: list[Token] = []
    for expected, (lineno, cols) in enumerate(token_rows, start=1):
        token_id = int(cols[0])
        if token_id != expected:
            raise NonContiguousIds(
                f"token ids must be 1..n without gaps; expected {expected}, got {token_id}",
                lineno,
            )
        form = cols[1]
        if form == "":
            raise MalformedLine("FORM must be non-empty", lineno)
        if cols[2] == "_" and token_id not in covered:
            lemma = None
        else:
            lemma = cols[2]
        upos = None if cols[3] == "_" else cols[3]
        xpos = None if cols[4] == "_" else cols[4]
        feats = parse_feats(cols[5], lineno)
        if cols[6] == "_":
            head = None
        else:
            if not cols[6].isdigit():
                raise MalformedLine(f"HEAD {cols[6]!r} is not a non-negative integer", lineno)
            head = int(cols[6])
        deprel = None if cols[7] == "_" else cols[7]
        deps = _parse_deps(cols[8], lineno)
        misc = parse_misc(cols[9])
        tokens.append(
            Token(token_id, form, lemma, upos, xpos, feats, head, deprel, deps, misc)
        )

    n = len(tokens)
    prev_last = 0
    ordered_mwts: list[MultiwordToken] = []
    for lineno, mwt in mwts:
        if mwt.first_id <= prev_last:
            raise MalformedLine(
                f"MWT range {mwt.first_id}-{mwt.last_id} overlaps or is out of order", lineno
            )
        if mwt.last_id > n:
            raise MalformedLine(
                f"MWT range {mwt.first_id}-{mwt.last_id} refers to missing tokens", lineno
            )
        prev_last = mwt.last_id
        ordered_mwts.append(mwt)

    sent_id = ""
    text = ""
    for comment in comments:
        m = _SENT_ID_RE.fullmatch(comment)
        if m and not sent_id:
            sent_id = m.group(1).strip()
        m = _TEXT_RE.fullmatch(comment)
        if m and not text:
            text = m.group(1)
    if not sent_id:
        sent_id = f"s{position}"

    return Sentence(sent_id, text, tuple(comments), tuple(tokens), tuple(ordered_mwts))


def parse_document(text: str) -> Document:
    """Parse CoNLL-U text into a Document.

    Blank-line-separated blocks become sentences; comments are preserved
    verbatim.  Raises MalformedLine, NonContiguousIds or DuplicateSentId,
    each carrying the offending line number.
    """
    sentences: list[Sentence] = []
    seen_ids: dict[str, int] = {}
    for position, block in enumerate(_split_blocks(text), start=1):
        sent = _parse_block(block, position)
        if sent.sent_id in seen_ids:
            raise DuplicateSentId(
                f"sent_id {sent.sent_id!r} already used", block[0][0]
            )
        seen_ids[sent.sent_id] = position
        sentences.append(sent)
    return Document(tuple(sentences))


def _token_row(tok: Token) -> str:
    return "\t".join(
        (
            str(tok.id),
            tok.form,
            "_" if tok.lemma is None else tok.lemma,
            "_" if tok.upos is None else tok.upos,
            "_" if tok.xpos is None else tok.xpos,
            serialize_feats(tok.feats),
            "_" if tok.head is None else str(tok.head),
            "_" if tok.deprel is None else tok.deprel,
            _serialize_deps(tok.deps),
            serialize_misc(tok.misc),
        )
    )


def _mwt_row(mwt: MultiwordToken) -> str:
    return "\t".join(
        (
            f"{mwt.first_id}-{mwt.last_id}",
            mwt.form,
            "_", "_", "_", "_", "_", "_", "_",
            serialize_misc(mwt.misc),
        )
    )


def serialize_sentence(sent: Sentence) -> str:
    """One sentence block: comments, rows, and the trailing blank line."""
    lines: list[str] = list(sent.comments)
    by_first = {mwt.first_id: mwt for mwt in sent.mwts}
    for tok in sent.tokens:
        mwt = by_first.get(tok.id)
        if mwt is not None:
            lines.append(_mwt_row(mwt))
        lines.append(_token_row(tok))
    return "".join(f"{line}\n" for line in lines) + "\n"


def serialize_document(doc: Document) -> str:
    return "".join(serialize_sentence(s) for s in doc.sentences)
