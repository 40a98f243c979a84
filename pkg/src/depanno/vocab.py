"""Autocomplete vocabularies: universal inventories plus observed values.

UPOS is the closed 17-tag set.  Dependency relations are the 37 universal
relations with any subtyped relations observed in the treebank appended.
Feature suggestions merge the universal feature inventory with every
attribute=value actually used in the treebank (base and all annotator
layers), so suggestions stay language-appropriate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .store import Store
from .validation import UNIVERSAL_DEPRELS, UPOS_TAGS

__all__ = ["VocabularyBundle", "UNIVERSAL_FEATURES", "build_vocabulary"]

UNIVERSAL_FEATURES: dict[str, tuple[str, ...]] = {
    "Abbr": ("Yes",),
    "Animacy": ("Anim", "Hum", "Inan", "Nhum"),
    "Aspect": ("Hab", "Imp", "Iter", "Perf", "Prog", "Prosp"),
    "Case": (
        "Abl", "Abs", "Acc", "Ben", "Cau", "Cmp", "Dat", "Equ", "Erg",
        "Gen", "Ins", "Loc", "Nom", "Tra", "Voc",
    ),
    "Clusivity": ("Ex", "In"),
    "Definite": ("Com", "Cons", "Def", "Ind", "Spec"),
    "Degree": ("Abs", "Aug", "Cmp", "Dim", "Equ", "Pos", "Sup"),
    "Evident": ("Fh", "Nfh"),
    "Foreign": ("Yes",),
    "Gender": ("Com", "Fem", "Masc", "Neut"),
    "Mood": (
        "Adm", "Cnd", "Des", "Imp", "Ind", "Irr", "Jus", "Nec", "Opt",
        "Pot", "Prp", "Qot", "Sub",
    ),
    "NounClass": (),
    "NumType": ("Card", "Dist", "Frac", "Mult", "Ord", "Range", "Sets"),
    "Number": ("Coll", "Count", "Dual", "Grpa", "Grpl", "Inv", "Pauc", "Plur", "Ptan", "Sing", "Tri"),
    "Person": ("0", "1", "2", "3", "4"),
    "Polarity": ("Neg", "Pos"),
    "Polite": ("Elev", "Form", "Humb", "Infm"),
    "Poss": ("Yes",),
    "PronType": (
        "Art", "Dem", "Emp", "Exc", "Ind", "Int", "Neg", "Prs", "Rcp",
        "Rel", "Tot",
    ),
    "Reflex": ("Yes",),
    "Tense": ("Fut", "Imp", "Past", "Pqp", "Pres"),
    "Typo": ("Yes",),
    "VerbForm": ("Conv", "Fin", "Gdv", "Ger", "Inf", "Part", "Sup", "Vnoun"),
    "Voice": ("Act", "Antip", "Cau", "Dir", "Inv", "Mid", "Pass", "Rcp"),
}


@dataclass(frozen=True)
class VocabularyBundle:
    upos: tuple[str, ...]
    deprel: tuple[str, ...]
    feats: dict[str, tuple[str, ...]]


def build_vocabulary(store: Store, treebank_id: str) -> VocabularyBundle:
    observed_deprels: set[str] = set()
    observed_feats: dict[str, set[str]] = {}
    for sent in store.all_layer_sentences(treebank_id):
        for tok in sent.tokens:
            if tok.deprel is not None and ":" in tok.deprel:
                observed_deprels.add(tok.deprel)
            for attr, value in tok.feats.entries:
                bucket = observed_feats.setdefault(attr, set())
                bucket.update(value.split(","))

    feats: dict[str, tuple[str, ...]] = {}
    for attr, values in UNIVERSAL_FEATURES.items():
        merged = set(values) | observed_feats.pop(attr, set())
        feats[attr] = tuple(sorted(merged))
    for attr, values in sorted(observed_feats.items()):
        feats[attr] = tuple(sorted(values))

    return VocabularyBundle(
        upos=tuple(sorted(UPOS_TAGS)),
        deprel=tuple(sorted(set(UNIVERSAL_DEPRELS) | observed_deprels)),
        feats=dict(sorted(feats.items())),
    )
