from __future__ import annotations

import pytest

from depanno.model import MultiwordToken, Sentence, Token

# Unannotated form of the example sentence used throughout: seven tokens,
# one multiword token "yoktu" split as "yok" + "tu".
FIG_RAW = """\
# sent_id = fig1
# text = Sel sularında neler yoktu ki...
1\tSel\t_\t_\t_\t_\t_\t_\t_\t_
2\tsularında\t_\t_\t_\t_\t_\t_\t_\t_
3\tneler\t_\t_\t_\t_\t_\t_\t_\t_
4-5\tyoktu\t_\t_\t_\t_\t_\t_\t_\t_
4\tyok\t_\t_\t_\t_\t_\t_\t_\t_
5\ttu\t_\t_\t_\t_\t_\t_\t_\t_
6\tki\t_\t_\t_\t_\t_\t_\t_\t_
7\t...\t_\t_\t_\t_\t_\t_\t_\t_

"""


@pytest.fixture
def fig_raw() -> str:
    return FIG_RAW


@pytest.fixture
def fig_annotated() -> Sentence:
    """Fully annotated version of the example sentence; validation-clean."""
    text = "Sel sularında neler yoktu ki..."
    tokens = (
        Token(1, "Sel", "sel", "NOUN", None, (("Case", "Nom"), ("Number", "Sing")), 2, "nmod"),
        Token(
            2,
            "sularında",
            "su",
            "NOUN",
            None,
            (("Case", "Loc"), ("Number", "Plur"), ("Person", "3")),
            4,
            "obl",
        ),
        Token(3, "neler", "ne", "PRON", None, (("Number", "Plur"),), 4, "nsubj"),
        Token(4, "yok", "yok", "ADJ", None, (), 0, "root"),
        Token(5, "tu", "i", "AUX", None, (("Tense", "Past"),), 4, "cop"),
        Token(6, "ki", "ki", "PART", None, (), 4, "discourse"),
        Token(7, "...", "...", "PUNCT", None, (), 4, "punct", (), (("SpaceAfter", "No"),)),
    )
    return Sentence(
        "fig1",
        text,
        (f"# sent_id = fig1", f"# text = {text}"),
        tokens,
        (MultiwordToken(4, 5, "yoktu"),),
    )
