"""Pairwise inter-annotator agreement statistics.

Only sentences both annotators marked Complete are compared; sentences the
two annotators tokenized differently are skipped and counted rather than
aligned.  Per-field raw agreement is chance-corrected with Cohen's kappa
(FEATS compared as one atomic canonical string), and attachment is scored
as UAS (HEAD matches) and LAS (HEAD and DEPREL both match).
"""

from __future__ import annotations

from dataclasses import dataclass

from .conllu import serialize_feats
from .model import Sentence, Token
from .store import Store

__all__ = [
    "AGREEMENT_FIELDS",
    "FieldAgreement",
    "AgreementReport",
    "NoComparableSentences",
    "compute_agreement",
    "agreement_matrix",
]

AGREEMENT_FIELDS = ("UPOS", "XPOS", "DEPREL", "FEATS", "LEMMA")


class NoComparableSentences(Exception):
    pass


@dataclass(frozen=True)
class FieldAgreement:
    raw_agreement: float  # in [0, 1]
    kappa: float | None  # in [-1, 1]; None when chance agreement is 1


@dataclass(frozen=True)
class AgreementReport:
    annotator_a: str
    annotator_b: str
    n_sentences_compared: int
    n_sentences_skipped_tokenization: int
    n_tokens: int
    per_field: dict[str, FieldAgreement]
    uas: float
    las: float


def _field_value(tok: Token, field: str) -> str:
    if field == "UPOS":
        return tok.upos if tok.upos is not None else "_"
    if field == "XPOS":
        return tok.xpos if tok.xpos is not None else "_"
    if field == "DEPREL":
        return tok.deprel if tok.deprel is not None else "_"
    if field == "LEMMA":
        return tok.lemma if tok.lemma is not None else "_"
    if field == "FEATS":
        return serialize_feats(tok.feats)
    raise ValueError(f"unknown agreement field {field!r}")


def cohen_kappa(pairs: list[tuple[str, str]]) -> tuple[float, float | None]:
    """(observed agreement, kappa) for two raters' label sequences."""
    n = len(pairs)
    observed = sum(1 for a, b in pairs if a == b) / n
    freq_a: dict[str, int] = {}
    freq_b: dict[str, int] = {}
    for a, b in pairs:
        freq_a[a] = freq_a.get(a, 0) + 1
        freq_b[b] = freq_b.get(b, 0) + 1
    expected = sum(
        (freq_a[label] / n) * (freq_b.get(label, 0) / n) for label in freq_a
    )
    if expected == 1.0:
        return observed, None
    return observed, (observed - expected) / (1.0 - expected)


def _token_forms(sent: Sentence) -> tuple[str, ...]:
    return tuple(t.form for t in sent.tokens)


def compute_agreement(
    store: Store,
    treebank_id: str,
    annotator_a: str,
    annotator_b: str,
    fields=AGREEMENT_FIELDS,
) -> AgreementReport:
    fields = tuple(fields)
    for f in fields:
        if f not in AGREEMENT_FIELDS:
            raise ValueError(f"unsupported agreement field {f!r}")
    store.get_treebank(treebank_id)
    done_a = store.completed_sentences(treebank_id, annotator_a)
    done_b = store.completed_sentences(treebank_id, annotator_b)

    both = sorted(set(done_a) & set(done_b))
    compared: list[tuple[Sentence, Sentence]] = []
    skipped = 0
    for sent_id in both:
        sa, sb = done_a[sent_id], done_b[sent_id]
        if _token_forms(sa) != _token_forms(sb):
            skipped += 1
        else:
            compared.append((sa, sb))
    if not compared:
        raise NoComparableSentences(
            f"no sentences are Complete for both {annotator_a!r} and {annotator_b!r} "
            "with matching tokenization"
        )

    field_pairs: dict[str, list[tuple[str, str]]] = {f: [] for f in fields}
    n_tokens = 0
    head_total = 0
    uas_hits = 0
    las_hits = 0
    for sa_sent, sb_sent in compared:
        for ta, tb in zip(sa_sent.tokens, sb_sent.tokens):
            n_tokens += 1
            for f in fields:
                field_pairs[f].append((_field_value(ta, f), _field_value(tb, f)))
            if ta.head is not None and tb.head is not None:
                head_total += 1
                if ta.head == tb.head:
                    uas_hits += 1
                    if (ta.deprel or "_") == (tb.deprel or "_"):
                        las_hits += 1

    per_field = {
        f: FieldAgreement(*cohen_kappa(pairs)) for f, pairs in field_pairs.items()
    }
    uas = uas_hits / head_total if head_total else 0.0
    las = las_hits / head_total if head_total else 0.0
    return AgreementReport(
        annotator_a=annotator_a,
        annotator_b=annotator_b,
        n_sentences_compared=len(compared),
        n_sentences_skipped_tokenization=skipped,
        n_tokens=n_tokens,
        per_field=per_field,
        uas=uas,
        las=las,
    )


def agreement_matrix(
    store: Store, treebank_id: str, fields=AGREEMENT_FIELDS
) -> dict[tuple[str, str], AgreementReport]:
    """Reports for every unordered annotator pair with comparable data."""
    store.get_treebank(treebank_id)
    ids = [a.id for a in store.list_annotators()]
    out: dict[tuple[str, str], AgreementReport] = {}
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            try:
                out[(a, b)] = compute_agreement(store, treebank_id, a, b, fields)
            except NoComparableSentences:
                continue
    return out
