"""UD-style validation producing the error list shown beside the table.

A fixed, closed registry of format/syntax rules; language-specific feature
legality is out of scope.  Issue codes are stable API strings.  Warnings do
not block saving a Draft; errors (and UNSET_FIELD, which marks an incomplete
sentence) block the Complete status, enforced by the store.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import Document, Sentence, head_cycle

__all__ = [
    "ValidationIssue",
    "ISSUE_REGISTRY",
    "UPOS_TAGS",
    "UNIVERSAL_DEPRELS",
    "validate_sentence",
    "validate_document",
    "blocking_issues",
]

ERROR = "error"
WARNING = "warning"

UPOS_TAGS = frozenset(
    {
        "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
        "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
    }
)

UNIVERSAL_DEPRELS = frozenset(
    {
        "acl", "advcl", "advmod", "amod", "appos", "aux", "case", "cc",
        "ccomp", "clf", "compound", "conj", "cop", "csubj", "dep", "det",
        "discourse", "dislocated", "expl", "fixed", "flat", "goeswith",
        "iobj", "list", "mark", "nmod", "nsubj", "nummod", "obj", "obl",
        "orphan", "parataxis", "punct", "reparandum", "root", "vocative",
        "xcomp",
    }
)

ISSUE_REGISTRY = {
    "ROOT_COUNT": ERROR,
    "ROOT_LABEL": ERROR,
    "HEAD_OUT_OF_RANGE": ERROR,
    "SELF_HEAD": ERROR,
    "CYCLE": ERROR,
    "UPOS_UNKNOWN": ERROR,
    "DEPREL_UNKNOWN": ERROR,
    "DEPREL_SUBTYPE": WARNING,
    "FEATS_ORDER": WARNING,
    "FEATS_FORMAT": ERROR,
    "UNSET_FIELD": WARNING,
    "DUPLICATE_SENT_ID": ERROR,
}

_FEAT_ATTR_RE = re.compile(r"[A-Z][A-Za-z0-9]*(\[[a-z]+\])?$")
_FEAT_VAL_RE = re.compile(r"[A-Z0-9][A-Za-z0-9]*$")


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    severity: str
    token_id: int | None
    message: str

    def __post_init__(self):
        if self.code not in ISSUE_REGISTRY:
            raise ValueError(f"unknown issue code {self.code!r}")
        if not self.message:
            raise ValueError("issue message must be non-empty")


def _issue(code: str, token_id: int | None, message: str) -> ValidationIssue:
    return ValidationIssue(code, ISSUE_REGISTRY[code], token_id, message)


def validate_sentence(sent: Sentence) -> list[ValidationIssue]:
    """Run every registry rule; deterministic order (token_id, code)."""
    issues: list[ValidationIssue] = []
    n = len(sent.tokens)

    roots = [t.id for t in sent.tokens if t.head == 0]
    if len(roots) != 1:
        issues.append(
            _issue(
                "ROOT_COUNT",
                None,
                f"exactly one token must attach to the root, found {len(roots)}",
            )
        )

    cycle = head_cycle(sent.tokens)
    if cycle is not None:
        issues.append(
            _issue(
                "CYCLE",
                None,
                "head references form a cycle through tokens "
                + ", ".join(str(i) for i in sorted(cycle)),
            )
        )

    for tok in sent.tokens:
        if tok.head is not None and tok.head > n:
            issues.append(
                _issue(
                    "HEAD_OUT_OF_RANGE",
                    tok.id,
                    f"head {tok.head} is outside [0, {n}]",
                )
            )
        if tok.head is not None and tok.head == tok.id:
            issues.append(
                _issue("SELF_HEAD", tok.id, f"token {tok.id} is its own head")
            )
        if tok.head is not None and tok.deprel is not None:
            base = tok.deprel.split(":", 1)[0]
            if (tok.head == 0) != (base == "root"):
                issues.append(
                    _issue(
                        "ROOT_LABEL",
                        tok.id,
                        "head 0 must pair with deprel root "
                        f"(head={tok.head}, deprel={tok.deprel})",
                    )
                )
        if tok.upos is not None and tok.upos not in UPOS_TAGS:
            issues.append(
                _issue("UPOS_UNKNOWN", tok.id, f"{tok.upos!r} is not a universal POS tag")
            )
        if tok.deprel is not None:
            base, _, subtype = tok.deprel.partition(":")
            if base not in UNIVERSAL_DEPRELS:
                issues.append(
                    _issue(
                        "DEPREL_UNKNOWN",
                        tok.id,
                        f"{base!r} is not a universal dependency relation",
                    )
                )
            elif subtype:
                issues.append(
                    _issue(
                        "DEPREL_SUBTYPE",
                        tok.id,
                        f"subtype {subtype!r} of {base!r} is not in the universal set",
                    )
                )
        if tok.feats.entries != tok.feats.canonical_items():
            issues.append(
                _issue(
                    "FEATS_ORDER",
                    tok.id,
                    "features are not in canonical alphabetical order",
                )
            )
        for attr, value in tok.feats.entries:
            ok = bool(_FEAT_ATTR_RE.fullmatch(attr))
            # Multivalues are comma-joined; each part must be a valid value.
            ok = ok and value != "" and all(
                _FEAT_VAL_RE.fullmatch(part) for part in value.split(",")
            )
            if not ok:
                issues.append(
                    _issue(
                        "FEATS_FORMAT",
                        tok.id,
                        f"feature {attr}={value} violates Attr=Val format rules",
                    )
                )
        unset = [
            name
            for name, val in (("upos", tok.upos), ("head", tok.head), ("deprel", tok.deprel))
            if val is None
        ]
        if unset:
            issues.append(
                _issue(
                    "UNSET_FIELD",
                    tok.id,
                    "unannotated field(s): " + ", ".join(unset),
                )
            )

    issues.sort(key=lambda i: (i.token_id if i.token_id is not None else 0, i.code))
    return issues


def validate_document(doc: Document) -> dict[str, list[ValidationIssue]]:
    """Per-sentence issues plus document-level duplicate sent_id errors."""
    result: dict[str, list[ValidationIssue]] = {}
    counts: dict[str, int] = {}
    for sent in doc.sentences:
        counts[sent.sent_id] = counts.get(sent.sent_id, 0) + 1
        if sent.sent_id not in result:
            result[sent.sent_id] = validate_sentence(sent)
    for sent_id, count in counts.items():
        if count > 1:
            result[sent_id] = [
                _issue(
                    "DUPLICATE_SENT_ID",
                    None,
                    f"sent_id {sent_id!r} is used by {count} sentences",
                )
            ] + result[sent_id]
    return result


def blocking_issues(sent: Sentence) -> list[ValidationIssue]:
    """Issues that forbid the Complete status.

    All errors block, and so does UNSET_FIELD: a sentence with unannotated
    fields is by definition not complete, even though mid-annotation saves
    as Draft are fine.
    """
    return [
        i
        for i in validate_sentence(sent)
        if i.severity == ERROR or i.code == "UNSET_FIELD"
    ]
