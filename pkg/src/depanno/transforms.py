"""Token split and join for agglutinative annotation.

Both operations return a new Sentence with ids renumbered and every HEAD and
DEPS reference remapped.  Neither guesses annotation: split leaves the new
non-first parts unannotated, and join refuses ranges that outside tokens
depend on (other than the first token, which survives the join).
"""

from __future__ import annotations

import dataclasses

from .model import MultiwordToken, Sentence, Token

__all__ = [
    "TransformError",
    "TokenNotFound",
    "AlreadySplit",
    "TooFewParts",
    "InvalidRange",
    "DanglingHeads",
    "split_token",
    "join_tokens",
]


class TransformError(ValueError):
    pass


class TokenNotFound(TransformError):
    pass


class AlreadySplit(TransformError):
    pass


class TooFewParts(TransformError):
    pass


class InvalidRange(TransformError):
    pass


class DanglingHeads(TransformError):
    def __init__(self, message: str, offenders: list[tuple[int, int]]):
        super().__init__(message)
        self.offenders = offenders  # (referring token id, referenced id)


def _remap_refs(tok: Token, remap) -> Token:
    head = tok.head if tok.head is None else remap(tok.head)
    deps = tuple((remap(h), r) for h, r in tok.deps)
    if head == tok.head and deps == tok.deps:
        return tok
    return dataclasses.replace(tok, head=head, deps=deps)


def split_token(sent: Sentence, token_id: int, parts) -> Sentence:
    """Replace one token by len(parts) tokens under a new MWT.

    The first part keeps the original annotations; later parts start with
    only their FORM set.  Every id and reference at or beyond the split
    point shifts by len(parts) - 1; references to the split token point at
    its first part.
    """
    parts = list(parts)
    if len(parts) < 2:
        raise TooFewParts(f"need at least 2 parts, got {len(parts)}")
    if any(p == "" for p in parts):
        raise ValueError("split parts must be non-empty strings")
    if not 1 <= token_id <= len(sent.tokens):
        raise TokenNotFound(f"no token with id {token_id}")
    if sent.mwt_covering(token_id) is not None:
        raise AlreadySplit(f"token {token_id} is already covered by a multiword token")

    original = sent.token(token_id)
    delta = len(parts) - 1

    def remap(ref: int) -> int:
        return ref + delta if ref > token_id else ref

    tokens: list[Token] = []
    for tok in sent.tokens:
        if tok.id < token_id:
            tokens.append(_remap_refs(tok, remap))
        elif tok.id == token_id:
            tokens.append(
                _remap_refs(dataclasses.replace(tok, form=parts[0]), remap)
            )
            for offset, form in enumerate(parts[1:], start=1):
                tokens.append(Token(id=token_id + offset, form=form))
        else:
            tokens.append(
                _remap_refs(dataclasses.replace(tok, id=tok.id + delta), remap)
            )

    new_mwt = MultiwordToken(token_id, token_id + delta, original.form)
    mwts: list[MultiwordToken] = []
    for mwt in sent.mwts:
        if mwt.last_id < token_id:
            mwts.append(mwt)
        else:
            mwts.append(
                dataclasses.replace(
                    mwt, first_id=mwt.first_id + delta, last_id=mwt.last_id + delta
                )
            )
    mwts.append(new_mwt)
    mwts.sort(key=lambda m: m.first_id)

    return dataclasses.replace(sent, tokens=tuple(tokens), mwts=tuple(mwts))


def join_tokens(
    sent: Sentence, first_id: int, last_id: int, joined_form: str | None = None
) -> Sentence:
    """Collapse the token range [first_id, last_id] into one token.

    The first token's annotations are kept, the others are discarded.  When
    the range exactly matches an MWT, that MWT is removed and its form is
    the default FORM; otherwise the default is the concatenation of the part
    forms.  Outside references to a non-first token in the range are refused
    rather than silently rewired.
    """
    n = len(sent.tokens)
    if not (1 <= first_id < last_id <= n):
        raise InvalidRange(
            f"[{first_id}, {last_id}] is not a range of at least two existing tokens"
        )

    exact_mwt: MultiwordToken | None = None
    for mwt in sent.mwts:
        if mwt.first_id == first_id and mwt.last_id == last_id:
            exact_mwt = mwt
        elif mwt.last_id >= first_id and mwt.first_id <= last_id:
            raise InvalidRange(
                f"range [{first_id}, {last_id}] partially overlaps MWT "
                f"{mwt.first_id}-{mwt.last_id}"
            )

    offenders: list[tuple[int, int]] = []
    for tok in sent.tokens:
        if first_id <= tok.id <= last_id:
            continue
        refs = [tok.head] if tok.head is not None else []
        refs.extend(h for h, _ in tok.deps)
        for ref in refs:
            if first_id < ref <= last_id:
                offenders.append((tok.id, ref))
    if offenders:
        raise DanglingHeads(
            "outside tokens reference non-first tokens in the join range: "
            + ", ".join(f"{t}->{r}" for t, r in offenders),
            offenders,
        )

    if joined_form is None:
        if exact_mwt is not None:
            joined_form = exact_mwt.form
        else:
            joined_form = "".join(
                t.form for t in sent.tokens[first_id - 1 : last_id]
            )

    delta = last_id - first_id

    def remap(ref: int) -> int:
        return ref - delta if ref > last_id else ref

    base = sent.token(first_id)
    head = base.head
    deprel = base.deprel
    if head is not None:
        if first_id < head <= last_id:
            head = None  # pointed inside the collapsed range; do not guess
            deprel = None
        else:
            head = remap(head)
    deps = tuple(
        (remap(h), r) for h, r in base.deps if not (first_id < h <= last_id)
    )
    joined = dataclasses.replace(
        base, form=joined_form, head=head, deprel=deprel, deps=deps
    )

    tokens: list[Token] = []
    for tok in sent.tokens:
        if tok.id < first_id:
            tokens.append(_remap_refs(tok, remap))
        elif tok.id == first_id:
            tokens.append(joined)
        elif tok.id <= last_id:
            continue
        else:
            tokens.append(
                _remap_refs(dataclasses.replace(tok, id=tok.id - delta), remap)
            )

    mwts: list[MultiwordToken] = []
    for mwt in sent.mwts:
        if mwt is exact_mwt:
            continue
        if mwt.last_id < first_id:
            mwts.append(mwt)
        else:
            mwts.append(
                dataclasses.replace(
                    mwt, first_id=mwt.first_id - delta, last_id=mwt.last_id - delta
                )
            )

    return dataclasses.replace(sent, tokens=tuple(tokens), mwts=tuple(mwts))
