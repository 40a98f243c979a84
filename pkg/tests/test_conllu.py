from __future__ import annotations

import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from depanno.conllu import (
    DuplicateSentId,
    MalformedFeature,
    MalformedLine,
    NonContiguousIds,
    parse_document,
    parse_feats,
    serialize_document,
    serialize_feats,
    serialize_sentence,
)
from depanno.model import Document, FeatureBag, Sentence, Token

from genutil import generate_treebank_text


def test_parse_fig_sentence(fig_raw):
    doc = parse_document(fig_raw)
    assert len(doc) == 1
    sent = doc.sentences[0]
    assert sent.sent_id == "fig1"
    assert sent.text == "Sel sularında neler yoktu ki..."
    assert [t.form for t in sent.tokens] == [
        "Sel", "sularında", "neler", "yok", "tu", "ki", "...",
    ]
    assert len(sent.mwts) == 1
    mwt = sent.mwts[0]
    assert (mwt.first_id, mwt.last_id, mwt.form) == (4, 5, "yoktu")


def test_parse_empty_string():
    assert len(parse_document("")) == 0


def test_serialize_empty_document():
    assert serialize_document(Document()) == ""


def test_serialize_contains_mwt_row(fig_raw):
    out = serialize_document(parse_document(fig_raw))
    assert "4-5\tyoktu\t_\t_\t_\t_\t_\t_\t_\t_" in out


def test_roundtrip_is_byte_identical_on_canonical_input(fig_raw):
    assert serialize_document(parse_document(fig_raw)) == fig_raw


def test_lemma_underscore_literal_only_inside_mwt(fig_raw):
    sent = parse_document(fig_raw).sentences[0]
    assert sent.tokens[0].lemma is None  # plain token: "_" means unset
    assert sent.tokens[3].lemma == "_"  # MWT part: "_" is literal text


def test_crlf_input_accepted_and_normalized(fig_raw):
    crlf = fig_raw.replace("\n", "\r\n")
    doc = parse_document(crlf)
    assert serialize_document(doc) == fig_raw


def test_wrong_column_count_reports_line():
    bad = "# sent_id = x\n1\tonly\tthree\n\n"
    with pytest.raises(MalformedLine) as err:
        parse_document(bad)
    assert err.value.line == 2


def test_non_integer_id_rejected():
    bad = "1a\tfoo\t_\t_\t_\t_\t_\t_\t_\t_\n\n"
    with pytest.raises(MalformedLine):
        parse_document(bad)


def test_empty_node_id_rejected():
    bad = (
        "1\tfoo\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1.1\tbar\t_\t_\t_\t_\t_\t_\t_\t_\n\n"
    )
    with pytest.raises(MalformedLine) as err:
        parse_document(bad)
    assert "empty node" in str(err.value)
    assert err.value.line == 2


def test_gap_in_ids_rejected():
    bad = (
        "1\tfoo\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "3\tbar\t_\t_\t_\t_\t_\t_\t_\t_\n\n"
    )
    with pytest.raises(NonContiguousIds):
        parse_document(bad)


def test_duplicate_sent_id_rejected():
    block = "# sent_id = a\n1\tfoo\t_\t_\t_\t_\t_\t_\t_\t_\n\n"
    with pytest.raises(DuplicateSentId):
        parse_document(block + block)


def test_mwt_range_outside_tokens_rejected():
    bad = (
        "1-3\tfoobar\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tfoo\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "2\tbar\t_\t_\t_\t_\t_\t_\t_\t_\n\n"
    )
    with pytest.raises(MalformedLine):
        parse_document(bad)


def test_parse_feats_example():
    bag = parse_feats("Case=Nom|Number=Sing|Person=3")
    assert bag.get("Case") == "Nom"
    assert bag.get("Number") == "Sing"
    assert bag.get("Person") == "3"
    assert len(bag) == 3


def test_parse_feats_underscore_is_empty():
    assert not parse_feats("_")


def test_feats_canonical_order_is_alphabetical():
    bag = parse_feats("Number=Sing|Case=Nom")
    assert serialize_feats(bag) == "Case=Nom|Number=Sing"


def test_serialize_feats_example():
    bag = FeatureBag((("Case", "Nom"), ("Number", "Sing"), ("Person", "3")))
    assert serialize_feats(bag) == "Case=Nom|Number=Sing|Person=3"
    assert serialize_feats(FeatureBag()) == "_"


def test_feats_without_equals_rejected():
    with pytest.raises(MalformedFeature):
        parse_feats("Nom")


def test_duplicate_feature_attribute_rejected():
    with pytest.raises(MalformedFeature):
        parse_feats("Case=Nom|Case=Acc")


_attr = st.from_regex(r"[A-Z][A-Za-z0-9]{0,6}", fullmatch=True)
_val = st.from_regex(r"[A-Z0-9][A-Za-z0-9]{0,6}", fullmatch=True)


@settings(max_examples=1000, deadline=None)
@given(
    st.dictionaries(_attr, _val, max_size=6).map(
        lambda d: FeatureBag(tuple(d.items()))
    )
)
def test_feats_roundtrip_property(bag):
    assert parse_feats(serialize_feats(bag)) == bag


@settings(max_examples=300, deadline=None)
@given(st.dictionaries(_attr, _val, max_size=6))
def test_feats_canonicalization_idempotent(d):
    s = serialize_feats(FeatureBag(tuple(d.items())))
    once = serialize_feats(parse_feats(s))
    twice = serialize_feats(parse_feats(serialize_feats(parse_feats(s))))
    assert once == twice == s


def test_misc_preserves_order_bare_items_and_values_with_equals():
    raw = "1\tfoo\t_\t_\t_\t_\t_\t_\t_\tZ=1|SpaceAfter=No|Bare|X=a=b\n\n"
    doc = parse_document(raw)
    tok = doc.sentences[0].tokens[0]
    assert tok.misc == (("Z", "1"), ("SpaceAfter", "No"), ("Bare", None), ("X", "a=b"))
    assert serialize_document(doc) == raw


def test_generated_corpus_roundtrip_and_token_counts():
    text = generate_treebank_text(n_sentences=120, seed=3)
    doc = parse_document(text)
    assert len(doc) == 120
    # Line-counting oracle: token rows are exactly the lines starting with
    # a plain integer id followed by a tab.
    expected = sum(1 for line in text.split("\n") if re.match(r"^[0-9]+\t", line))
    assert sum(len(s.tokens) for s in doc.sentences) == expected
    assert serialize_document(doc) == text


def test_structural_roundtrip_on_noncanonical_feats_order():
    raw = "1\tfoo\tfoo\tNOUN\t_\tNumber=Sing|Case=Nom\t0\troot\t_\t_\n\n"
    doc = parse_document(raw)
    again = parse_document(serialize_document(doc))
    assert again.sentences[0].tokens == doc.sentences[0].tokens
    assert again.sentences[0] == doc.sentences[0]


def test_comment_after_token_line_rejected():
    bad = (
        "1\tfoo\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "# text = late comment\n\n"
    )
    with pytest.raises(MalformedLine):
        parse_document(bad)


def test_sentence_without_sent_id_gets_positional_id():
    raw = (
        "1\tfoo\t_\t_\t_\t_\t_\t_\t_\t_\n\n"
        "1\tbar\t_\t_\t_\t_\t_\t_\t_\t_\n\n"
    )
    doc = parse_document(raw)
    assert [s.sent_id for s in doc.sentences] == ["s1", "s2"]


def test_serialize_sentence_emits_block_with_trailing_blank_line(fig_annotated):
    block = serialize_sentence(fig_annotated)
    assert block.endswith("\t_\tSpaceAfter=No\n\n")
    assert block.startswith("# sent_id = fig1\n")
