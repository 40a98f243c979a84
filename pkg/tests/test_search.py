from __future__ import annotations

import random
import re

import pytest

from depanno.conllu import parse_document
from depanno.model import Sentence
from depanno.search import (
    BadRegex,
    FieldPredicate,
    Match,
    QuerySyntaxError,
    SearchQuery,
    build_index,
    find_matches,
    parse_query,
    token_spans,
    update_index,
)

from genutil import random_annotated_sentence


def brute_force_scan(view, query: SearchQuery) -> set[tuple[str, int | None]]:
    """Oracle: re-check every predicate on every token, no index involved."""

    def field_of(sent: Sentence, tok, pred: FieldPredicate):
        if pred.field == "FORM":
            return tok.form
        if pred.field == "LEMMA":
            return tok.lemma
        if pred.field == "UPOS":
            return tok.upos
        if pred.field == "XPOS":
            return tok.xpos
        if pred.field == "DEPREL":
            return tok.deprel
        if pred.field == "HEAD_DEPREL":
            if tok.head in (None, 0) or tok.head > len(sent.tokens):
                return None
            return sent.tokens[tok.head - 1].deprel
        if pred.field == "FEAT":
            for a, v in tok.feats.entries:
                if a == pred.feat_name:
                    return v
            return None
        raise AssertionError(pred.field)

    def check(value, pred: FieldPredicate) -> bool:
        if pred.matcher == "exists":
            return value is not None
        if value is None:
            return False
        if pred.matcher == "exact":
            return value == pred.value
        return re.search(pred.value, value) is not None

    hits: set[tuple[str, int | None]] = set()
    token_preds = [p for p in query.predicates if p.field != "TEXT"]
    text_preds = [p for p in query.predicates if p.field == "TEXT"]
    for sent_id, sent in view:
        if not all(check(sent.text, p) for p in text_preds):
            continue
        if not token_preds:
            hits.add((sent_id, None))
            continue
        for tok in sent.tokens:
            if all(check(field_of(sent, tok, p), p) for p in token_preds):
                hits.add((sent_id, tok.id))
    return hits


def as_set(matches: list[Match]) -> set[tuple[str, int | None]]:
    return {(m.sent_id, m.token_id) for m in matches}


# --- parse_query -------------------------------------------------------------


def test_parse_two_predicates():
    q = parse_query("feats.Case=Nom upos=NOUN")
    assert len(q.predicates) == 2
    feat, upos = q.predicates
    assert (feat.field, feat.feat_name, feat.matcher, feat.value) == (
        "FEAT", "Case", "exact", "Nom",
    )
    assert (upos.field, upos.matcher, upos.value) == ("UPOS", "exact", "NOUN")


def test_parse_regex_on_form():
    q = parse_query("form~/.*ki$/")
    (pred,) = q.predicates
    assert (pred.field, pred.matcher, pred.value) == ("FORM", "regex", ".*ki$")


def test_parse_bare_word_is_form_exact():
    q = parse_query("sularında")
    (pred,) = q.predicates
    assert (pred.field, pred.matcher, pred.value) == ("FORM", "exact", "sularında")


def test_parse_text_regex_and_quotes():
    q = parse_query('text~/yoktu/ form="New York"')
    text, form = q.predicates
    assert text.field == "TEXT" and text.matcher == "regex"
    assert form.value == "New York"


def test_parse_feats_exists():
    q = parse_query("feats.Case")
    (pred,) = q.predicates
    assert (pred.field, pred.matcher, pred.feat_name) == ("FEAT", "exists", "Case")


def test_parse_errors():
    with pytest.raises(QuerySyntaxError):
        parse_query("upos=")
    with pytest.raises(QuerySyntaxError):
        parse_query("")
    with pytest.raises(QuerySyntaxError):
        parse_query("nofield~notslashed")
    with pytest.raises(QuerySyntaxError):
        parse_query("unknownfield=x")
    with pytest.raises(BadRegex):
        parse_query("form~/[unclosed/")


# --- matching ----------------------------------------------------------------


def annotated_fig_view(fig_annotated):
    return [("fig1", fig_annotated)]


def test_form_exact_match_on_fig_sentence(fig_annotated):
    index = build_index(annotated_fig_view(fig_annotated))
    matches = find_matches(index, parse_query("form=sularında"))
    assert len(matches) == 1
    assert (matches[0].sent_id, matches[0].token_id) == ("fig1", 2)


def test_match_offsets_mark_the_token(fig_annotated):
    index = build_index(annotated_fig_view(fig_annotated))
    (match,) = find_matches(index, parse_query("form=sularında"))
    raw = match.snippet.encode("utf-8")
    assert raw[match.start : match.end].decode("utf-8") == "sularında"


def test_mwt_token_span_is_surface_word(fig_annotated):
    spans = token_spans(fig_annotated)
    start, end = spans[4]
    assert fig_annotated.text[start:end] == "yoktu"
    assert spans[4] == spans[5]


def test_unknown_feature_matches_nothing(fig_annotated):
    index = build_index(annotated_fig_view(fig_annotated))
    assert find_matches(index, parse_query("feats.NoSuchFeature=x")) == []


def test_regex_matches_anywhere_unless_anchored(fig_annotated):
    index = build_index(annotated_fig_view(fig_annotated))
    assert len(find_matches(index, parse_query("form~/lar/"))) == 1  # sularında
    assert find_matches(index, parse_query("form~/^lar$/")) == []


def test_exact_match_is_case_sensitive(fig_annotated):
    index = build_index(annotated_fig_view(fig_annotated))
    assert find_matches(index, parse_query("upos=noun")) == []
    assert len(find_matches(index, parse_query("upos=NOUN"))) == 2


def test_head_deprel_predicate(fig_annotated):
    index = build_index(annotated_fig_view(fig_annotated))
    matches = find_matches(index, parse_query("head_deprel=root"))
    # tokens whose head is the root token "yok" (id 4)
    assert {m.token_id for m in matches} == {2, 3, 5, 6, 7}


def test_pure_text_query_yields_sentence_match(fig_annotated):
    index = build_index(annotated_fig_view(fig_annotated))
    (match,) = find_matches(index, parse_query("text~/yoktu ki/"))
    assert match.token_id is None
    raw = match.snippet.encode("utf-8")
    assert raw[match.start : match.end].decode("utf-8") == "yoktu ki"


def test_empty_treebank_index():
    index = build_index([])
    assert find_matches(index, parse_query("form=x")) == []
    assert index.postings == {}


def random_query(rng: random.Random) -> SearchQuery:
    preds: list[FieldPredicate] = []
    for _ in range(rng.randint(1, 3)):
        kind = rng.random()
        if kind < 0.3:
            preds.append(FieldPredicate("FORM", "exact", rng.choice(
                ["sel", "su", "ev", "göz", "kuşlar", "selda", "yok"]
            )))
        elif kind < 0.45:
            preds.append(FieldPredicate("UPOS", "exact", rng.choice(
                ["NOUN", "VERB", "ADJ", "PRON", "AUX"]
            )))
        elif kind < 0.6:
            attr = rng.choice(["Case", "Number", "Person", "Tense"])
            value = rng.choice(["Nom", "Loc", "Sing", "Plur", "3", "Past"])
            if rng.random() < 0.3:
                preds.append(FieldPredicate("FEAT", "exists", None, attr))
            else:
                preds.append(FieldPredicate("FEAT", "exact", value, attr))
        elif kind < 0.75:
            preds.append(FieldPredicate("FORM", "regex", rng.choice(
                [r"lar", r"^se", r"ki$", r"[aeiou]{2}", r"^[sg]"]
            )))
        elif kind < 0.85:
            preds.append(FieldPredicate("DEPREL", "exact", rng.choice(
                ["root", "nsubj", "obj", "nmod", "case"]
            )))
        elif kind < 0.95:
            preds.append(FieldPredicate("HEAD_DEPREL", "exact", rng.choice(
                ["root", "nsubj", "obl"]
            )))
        else:
            preds.append(FieldPredicate("TEXT", "regex", rng.choice(
                [r"sel", r"lar", r"k[iu]"]
            )))
    return SearchQuery(tuple(preds))


def test_randomized_queries_match_bruteforce_and_survive_updates():
    rng = random.Random(2024)
    sentences = [
        (f"s{i:03d}", random_annotated_sentence(rng, f"s{i:03d}"))
        for i in range(150)
    ]
    index = build_index(sentences)
    view = dict(sentences)

    for round_no in range(100):
        query = random_query(rng)
        got = as_set(find_matches(index, query))
        want = brute_force_scan(view.items(), query)
        assert got == want, f"round {round_no}: {query}"

        # mutate one sentence and update the index incrementally
        sid = rng.choice(list(view))
        new_sent = random_annotated_sentence(rng, sid)
        view[sid] = new_sent
        update_index(index, sid, new_sent)

    # after all edits, incremental index equals a fresh rebuild
    rebuilt = build_index(view.items())
    for _ in range(20):
        query = random_query(rng)
        assert as_set(find_matches(index, query)) == as_set(
            find_matches(rebuilt, query)
        )


def test_postings_cardinality_matches_scan():
    rng = random.Random(7)
    sentences = [
        (f"s{i}", random_annotated_sentence(rng, f"s{i}")) for i in range(80)
    ]
    index = build_index(sentences)
    count_scan = sum(
        1 for _, sent in sentences for tok in sent.tokens if tok.upos == "NOUN"
    )
    assert len(index.posting(("UPOS", "NOUN"))) == count_scan


def test_update_index_removes_sentences():
    rng = random.Random(8)
    sent = random_annotated_sentence(rng, "gone")
    index = build_index([("gone", sent)])
    update_index(index, "gone", None)
    assert index.postings == {}
    assert index.sentences == {}
