from __future__ import annotations

import dataclasses

import pytest

from depanno.conllu import parse_document
from depanno.store import (
    BASE_LAYER,
    CompleteWithErrors,
    DuplicateAnnotator,
    DuplicateTreebank,
    NotFound,
    RevisionConflict,
    Store,
    UnknownAnnotator,
    UnknownTreebank,
    hash_credential,
    verify_credential,
)

from genutil import generate_treebank_text

TWO_SENTENCES = (
    "# sent_id = a\n# text = iki ev\n"
    "1\tiki\tiki\tNUM\t_\t_\t2\tnummod\t_\t_\n"
    "2\tev\tev\tNOUN\t_\t_\t0\troot\t_\t_\n\n"
    "# sent_id = b\n# text = su aktı\n"
    "1\tsu\tsu\tNOUN\t_\t_\t2\tnsubj\t_\t_\n"
    "2\taktı\tak\tVERB\t_\t_\t0\troot\t_\t_\n\n"
)


@pytest.fixture
def store(tmp_path):
    s = Store(f"sqlite:///{tmp_path}/test.db")
    yield s
    s.close()


@pytest.fixture
def seeded(store):
    store.register_annotator("ayse", "Ayşe", "pw-one")
    store.register_annotator("mehmet", "Mehmet", "pw-two")
    store.import_treebank("tb", "Test Bank", "tr", TWO_SENTENCES)
    return store


def edited(sent, token_updates):
    tokens = list(sent.tokens)
    for tid, updates in token_updates.items():
        tokens[tid - 1] = dataclasses.replace(tokens[tid - 1], **updates)
    return dataclasses.replace(sent, tokens=tuple(tokens))


def test_import_creates_new_statuses(seeded):
    items, total = seeded.list_sentences("tb", "ayse")
    assert total == 2
    assert [(i[0], i[2]) for i in items] == [("a", "New"), ("b", "New")]


def test_import_duplicate_id_rejected(seeded):
    with pytest.raises(DuplicateTreebank):
        seeded.import_treebank("tb", "again", "tr", TWO_SENTENCES)


def test_import_then_export_is_byte_identical(store):
    text = generate_treebank_text(n_sentences=40, seed=11)
    store.register_annotator("a1", "A", "pw")
    store.import_treebank("rt", "Round Trip", "tr", text)
    assert store.export_treebank("rt", "a1") == text
    assert store.export_treebank("rt", BASE_LAYER) == text


def test_get_annotation_virtual_record(seeded):
    rec = seeded.get_annotation("tb", "a", "ayse")
    assert rec.status == "New"
    assert rec.revision == 0
    assert rec.sentence.tokens[0].form == "iki"
    assert rec.updated_at is None


def test_get_annotation_not_found(seeded):
    with pytest.raises(UnknownTreebank):
        seeded.get_annotation("nope", "a", "ayse")
    with pytest.raises(NotFound):
        seeded.get_annotation("tb", "zzz", "ayse")
    with pytest.raises(UnknownAnnotator):
        seeded.get_annotation("tb", "a", "nobody")


def test_put_and_get_roundtrip(seeded):
    rec = seeded.get_annotation("tb", "a", "ayse")
    new_sent = edited(rec.sentence, {1: {"lemma": "IKI"}})
    saved = seeded.put_annotation("tb", "a", "ayse", new_sent, "Draft", "check lemma", 0)
    assert saved.revision == 1
    got = seeded.get_annotation("tb", "a", "ayse")
    assert got.revision == 1
    assert got.status == "Draft"
    assert got.note == "check lemma"
    assert got.sentence.tokens[0].lemma == "IKI"


def test_put_complete_valid_sentence(seeded):
    rec = seeded.get_annotation("tb", "a", "ayse")
    saved = seeded.put_annotation("tb", "a", "ayse", rec.sentence, "Complete", "", 0)
    assert saved.status == "Complete"
    assert saved.revision == 1


def test_put_complete_with_cycle_rejected(seeded):
    rec = seeded.get_annotation("tb", "a", "ayse")
    cyclic = edited(rec.sentence, {1: {"head": 2}, 2: {"head": 1, "deprel": "dep"}})
    with pytest.raises(CompleteWithErrors) as err:
        seeded.put_annotation("tb", "a", "ayse", cyclic, "Complete", "", 0)
    assert any(i.code == "CYCLE" for i in err.value.issues)
    # ... but the same sentence is fine as a Draft
    saved = seeded.put_annotation("tb", "a", "ayse", cyclic, "Draft", "", 0)
    assert saved.revision == 1


def test_put_complete_with_unset_fields_rejected(seeded):
    rec = seeded.get_annotation("tb", "a", "ayse")
    partial = edited(rec.sentence, {1: {"upos": None}})
    with pytest.raises(CompleteWithErrors) as err:
        seeded.put_annotation("tb", "a", "ayse", partial, "Complete", "", 0)
    assert any(i.code == "UNSET_FIELD" for i in err.value.issues)


def test_revision_conflict_on_stale_write(seeded):
    rec = seeded.get_annotation("tb", "a", "ayse")
    seeded.put_annotation("tb", "a", "ayse", rec.sentence, "Draft", "first", 0)
    with pytest.raises(RevisionConflict) as err:
        seeded.put_annotation("tb", "a", "ayse", rec.sentence, "Draft", "second", 0)
    assert err.value.current == 1
    # the conflicting write did not clobber the first
    assert seeded.get_annotation("tb", "a", "ayse").note == "first"


def test_annotator_isolation(seeded):
    rec = seeded.get_annotation("tb", "a", "ayse")
    mine = edited(rec.sentence, {1: {"lemma": "AYSE"}})
    seeded.put_annotation("tb", "a", "ayse", mine, "Draft", "", 0)
    other = seeded.get_annotation("tb", "a", "mehmet")
    assert other.status == "New"
    assert other.sentence.tokens[0].lemma == "iki"
    theirs = edited(other.sentence, {1: {"lemma": "MEHMET"}})
    seeded.put_annotation("tb", "a", "mehmet", theirs, "Draft", "", 0)
    assert seeded.get_annotation("tb", "a", "ayse").sentence.tokens[0].lemma == "AYSE"
    assert seeded.get_annotation("tb", "a", "mehmet").sentence.tokens[0].lemma == "MEHMET"


def test_base_never_mutates(seeded):
    rec = seeded.get_annotation("tb", "a", "ayse")
    seeded.put_annotation(
        "tb", "a", "ayse", edited(rec.sentence, {1: {"lemma": "X"}}), "Draft", "", 0
    )
    assert seeded.export_treebank("tb", BASE_LAYER) == TWO_SENTENCES
    assert seeded.export_treebank("tb", "mehmet") == TWO_SENTENCES


def test_export_differs_only_in_edited_block(seeded):
    rec = seeded.get_annotation("tb", "b", "ayse")
    seeded.put_annotation(
        "tb", "b", "ayse", edited(rec.sentence, {1: {"lemma": "SU"}}), "Draft", "", 0
    )
    out = seeded.export_treebank("tb", "ayse")
    base_blocks = TWO_SENTENCES.split("\n\n")
    out_blocks = out.split("\n\n")
    assert out_blocks[0] == base_blocks[0]
    assert out_blocks[1] != base_blocks[1]
    parse_document(out)  # still parses cleanly


def test_status_filter_and_pagination(seeded):
    rec = seeded.get_annotation("tb", "b", "ayse")
    seeded.put_annotation("tb", "b", "ayse", rec.sentence, "Complete", "", 0)
    items, total = seeded.list_sentences("tb", "ayse", status_filter={"Complete"})
    assert total == 1
    assert items[0][0] == "b"
    items, total = seeded.list_sentences("tb", "ayse", status_filter={"Complete"}, page=2)
    assert items == [] and total == 1


def test_pagination_windows(store):
    text = generate_treebank_text(n_sentences=120, seed=5)
    store.register_annotator("p", "P", "pw")
    store.import_treebank("big", "Big", "tr", text)
    sizes = []
    for page in (1, 2, 3):
        items, total = store.list_sentences("big", "p", page=page, page_size=50)
        sizes.append(len(items))
        assert total == 120
    assert sizes == [50, 50, 20]


def test_status_never_back_to_new(seeded):
    rec = seeded.get_annotation("tb", "a", "ayse")
    seeded.put_annotation("tb", "a", "ayse", rec.sentence, "Draft", "", 0)
    with pytest.raises(ValueError):
        seeded.put_annotation("tb", "a", "ayse", rec.sentence, "New", "", 1)


def test_complete_to_draft_allowed(seeded):
    rec = seeded.get_annotation("tb", "a", "ayse")
    seeded.put_annotation("tb", "a", "ayse", rec.sentence, "Complete", "", 0)
    back = seeded.put_annotation("tb", "a", "ayse", rec.sentence, "Draft", "", 1)
    assert back.status == "Draft" and back.revision == 2


def test_persistence_across_reopen(tmp_path):
    url = f"sqlite:///{tmp_path}/persist.db"
    s1 = Store(url)
    s1.register_annotator("a1", "A", "pw")
    s1.import_treebank("tb", "T", "tr", TWO_SENTENCES)
    rec = s1.get_annotation("tb", "a", "a1")
    s1.put_annotation("tb", "a", "a1", rec.sentence, "Draft", "kept", 0)
    s1.close()

    s2 = Store(url)
    got = s2.get_annotation("tb", "a", "a1")
    assert got.status == "Draft" and got.note == "kept" and got.revision == 1
    assert s2.export_treebank("tb", BASE_LAYER) == TWO_SENTENCES
    s2.close()


def test_register_annotator_rules(store):
    store.register_annotator("ok_name", "OK", "pw")
    with pytest.raises(DuplicateAnnotator):
        store.register_annotator("ok_name", "OK", "pw")
    with pytest.raises(ValueError):
        store.register_annotator("base", "Reserved", "pw")
    with pytest.raises(ValueError):
        store.register_annotator("bad name", "Spaces", "pw")


def test_credentials(store):
    store.register_annotator("u", "U", "secret-pw")
    assert store.verify_credentials("u", "secret-pw")
    assert not store.verify_credentials("u", "wrong")
    assert not store.verify_credentials("ghost", "secret-pw")


def test_credential_hash_is_salted_and_iterated():
    h1 = hash_credential("pw")
    h2 = hash_credential("pw")
    assert h1 != h2  # fresh salt each time
    assert h1.startswith("pbkdf2_sha256$120000$")
    assert verify_credential("pw", h1) and verify_credential("pw", h2)
    assert not verify_credential("other", h1)


def test_sessions(store):
    store.register_annotator("u", "U", "pw")
    tok = store.create_session("u")
    assert store.resolve_session(tok.token) == "u"
    assert store.resolve_session("forged") is None
    expired = store.create_session("u", ttl_hours=-1)
    assert store.resolve_session(expired.token) is None


def test_put_rejects_wrong_sent_id(seeded):
    rec = seeded.get_annotation("tb", "a", "ayse")
    wrong = dataclasses.replace(rec.sentence, sent_id="b")
    with pytest.raises(ValueError):
        seeded.put_annotation("tb", "a", "ayse", wrong, "Draft", "", 0)


def test_put_to_base_layer_rejected(seeded):
    rec = seeded.get_annotation("tb", "a", "ayse")
    with pytest.raises(UnknownAnnotator):
        seeded.put_annotation("tb", "a", BASE_LAYER, rec.sentence, "Draft", "", 0)


def test_stats(seeded):
    rec = seeded.get_annotation("tb", "a", "ayse")
    seeded.put_annotation("tb", "a", "ayse", rec.sentence, "Complete", "", 0)
    (info,) = seeded.stats()
    assert info["treebank"] == "tb"
    assert info["sentences"] == 2
    assert info["tokens"] == 4
    assert info["annotators"]["ayse"]["Complete"] == 1
