from __future__ import annotations

import random

from depanno.conllu import parse_document, serialize_document
from depanno.model import Document, Sentence, Token
from depanno.validation import (
    UNIVERSAL_DEPRELS,
    UPOS_TAGS,
    blocking_issues,
    validate_document,
    validate_sentence,
)

from genutil import random_annotated_sentence


def cycle_oracle(heads: dict[int, int | None], n: int) -> bool:
    """Follow head links from every token up to n steps; re-visit => cycle."""
    for start in range(1, n + 1):
        visited = {start}
        cur = start
        for _ in range(n + 1):
            nxt = heads.get(cur)
            if nxt is None or nxt == 0 or not 1 <= nxt <= n:
                break
            if nxt in visited:
                return True
            visited.add(nxt)
            cur = nxt
    return False


def make_sentence(heads: list[int | None], deprels: list[str | None] = None) -> Sentence:
    tokens = []
    for i, head in enumerate(heads, start=1):
        deprel = None
        if deprels is not None:
            deprel = deprels[i - 1]
        elif head is not None:
            deprel = "root" if head == 0 else "dep"
        tokens.append(
            Token(i, f"w{i}", f"w{i}", "NOUN", None, (), head, deprel)
        )
    return Sentence("t", " ".join(t.form for t in tokens), (), tuple(tokens))


def codes(issues):
    return {i.code for i in issues}


def test_minimal_valid_sentence_is_clean():
    sent = make_sentence([0])
    assert validate_sentence(sent) == []


def test_two_token_cycle_reports_cycle_and_root_count():
    sent = make_sentence([2, 1], ["dep", "dep"])
    found = codes(validate_sentence(sent))
    assert "CYCLE" in found
    assert "ROOT_COUNT" in found
    heads = {1: 2, 2: 1}
    assert cycle_oracle(heads, 2)


def test_self_head_reported():
    sent = make_sentence([0, 2], ["root", "dep"])
    assert "SELF_HEAD" in codes(validate_sentence(sent))


def test_head_out_of_range():
    sent = make_sentence([0, 9], ["root", "dep"])
    assert "HEAD_OUT_OF_RANGE" in codes(validate_sentence(sent))


def test_root_label_both_directions():
    # head 0 without deprel root
    sent = make_sentence([0], ["nsubj"])
    assert "ROOT_LABEL" in codes(validate_sentence(sent))
    # deprel root without head 0
    sent = make_sentence([0, 1], ["root", "root"])
    assert "ROOT_LABEL" in codes(validate_sentence(sent))


def test_upos_unknown():
    tok = Token(1, "w", "w", "NOMEN", None, (), 0, "root")
    sent = Sentence("t", "w", (), (tok,))
    assert "UPOS_UNKNOWN" in codes(validate_sentence(sent))
    assert len(UPOS_TAGS) == 17


def test_deprel_unknown_and_subtype():
    assert len(UNIVERSAL_DEPRELS) == 37
    sent = make_sentence([0, 1], ["root", "frobnicate"])
    assert "DEPREL_UNKNOWN" in codes(validate_sentence(sent))
    sent = make_sentence([0, 1], ["root", "acl:relcl"])
    found = validate_sentence(sent)
    assert "DEPREL_SUBTYPE" in codes(found)
    assert all(i.severity == "warning" for i in found if i.code == "DEPREL_SUBTYPE")


def test_feats_order_warning_at_offending_token():
    raw = (
        "1\tw\tw\tNOUN\t_\tNumber=Sing|Case=Nom\t0\troot\t_\t_\n\n"
    )
    sent = parse_document(raw).sentences[0]
    issues = validate_sentence(sent)
    order = [i for i in issues if i.code == "FEATS_ORDER"]
    assert len(order) == 1
    assert order[0].token_id == 1
    assert order[0].severity == "warning"


def test_feats_format_violations():
    bad_attr = Token(1, "w", "w", "NOUN", None, (("case", "Nom"),), 0, "root")
    sent = Sentence("t", "w", (), (bad_attr,))
    assert "FEATS_FORMAT" in codes(validate_sentence(sent))

    bad_val = Token(1, "w", "w", "NOUN", None, (("Case", "nom"),), 0, "root")
    sent = Sentence("t", "w", (), (bad_val,))
    assert "FEATS_FORMAT" in codes(validate_sentence(sent))

    layered = Token(1, "w", "w", "NOUN", None, (("Number[psor]", "Sing"),), 0, "root")
    sent = Sentence("t", "w", (), (layered,))
    assert "FEATS_FORMAT" not in codes(validate_sentence(sent))

    multi = Token(1, "w", "w", "NOUN", None, (("Number", "Plur,Sing"),), 0, "root")
    sent = Sentence("t", "w", (), (multi,))
    assert "FEATS_FORMAT" not in codes(validate_sentence(sent))


def test_unset_field_warning():
    sent = Sentence("t", "w", (), (Token(1, "w"),))
    issues = validate_sentence(sent)
    unset = [i for i in issues if i.code == "UNSET_FIELD"]
    assert len(unset) == 1
    assert "upos" in unset[0].message
    assert "head" in unset[0].message
    assert "deprel" in unset[0].message


def test_issue_order_is_deterministic():
    sent = make_sentence([9, 1], ["dep", "root"])
    issues = validate_sentence(sent)
    assert issues == validate_sentence(sent)
    keys = [(i.token_id if i.token_id is not None else 0, i.code) for i in issues]
    assert keys == sorted(keys)


def test_validate_document_empty_and_valid():
    assert validate_document(Document()) == {}
    rng = random.Random(1)
    doc = Document(
        tuple(random_annotated_sentence(rng, f"v{i}") for i in range(2))
    )
    result = validate_document(doc)
    assert list(result.values()) == [[], []]


def test_validate_document_duplicate_sent_id():
    rng = random.Random(2)
    a = random_annotated_sentence(rng, "dup")
    b = random_annotated_sentence(rng, "dup")
    result = validate_document(Document((a, b)))
    assert any(i.code == "DUPLICATE_SENT_ID" for i in result["dup"])


def test_randomized_rules_match_bruteforce_oracles():
    rng = random.Random(99)
    for _ in range(1000):
        n = rng.randint(1, 12)
        heads: list[int | None] = []
        for i in range(1, n + 1):
            roll = rng.random()
            if roll < 0.1:
                heads.append(None)
            elif roll < 0.2:
                heads.append(rng.randint(0, n + 3))  # may be out of range
            elif roll < 0.25:
                heads.append(i)  # self head
            else:
                heads.append(rng.randint(0, n))
        sent = make_sentence(heads)
        found = codes(validate_sentence(sent))

        head_map = {i: h for i, h in enumerate(heads, start=1)}
        assert ("CYCLE" in found) == cycle_oracle(head_map, n)
        assert ("ROOT_COUNT" in found) == (sum(1 for h in heads if h == 0) != 1)
        assert ("HEAD_OUT_OF_RANGE" in found) == any(
            h is not None and h > n for h in heads
        )


def test_clean_sentence_survives_reserialization():
    rng = random.Random(5)
    for i in range(50):
        sent = random_annotated_sentence(rng, f"c{i}")
        assert validate_sentence(sent) == []
        text = serialize_document(Document((sent,)))
        again = parse_document(text).sentences[0]
        assert validate_sentence(again) == []


def test_blocking_issues_include_unset_field():
    sent = Sentence("t", "w", (), (Token(1, "w"),))
    blocked = blocking_issues(sent)
    assert any(i.code == "UNSET_FIELD" for i in blocked)
    assert any(i.code == "ROOT_COUNT" for i in blocked)
    warn_only = parse_document(
        "1\tw\tw\tNOUN\t_\tNumber=Sing|Case=Nom\t0\troot\t_\t_\n\n"
    ).sentences[0]
    assert blocking_issues(warn_only) == []  # FEATS_ORDER alone does not block
