"""In-memory data model for UD sentences.

All types are immutable after construction; editing operations build new
values.  Structural invariants (contiguous ids, MWT ranges) are enforced at
construction time, while annotation-level problems (self-heads, cycles,
unknown tags) are deliberately representable so that imperfect annotations
can be loaded and shown with their validation issues.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "FeatureBag",
    "Token",
    "MultiwordToken",
    "Sentence",
    "Document",
    "MiscItems",
    "check_sentence",
    "head_cycle",
    "surface_units",
]

# MISC is kept as ordered (key, value) pairs; value None means a bare item
# without "=".  Order, duplicates and bare items survive round-trips.
MiscItems = tuple[tuple[str, "str | None"], ...]


def _misc_items(value) -> MiscItems:
    return tuple((str(k), None if v is None else str(v)) for k, v in value)


@dataclass(frozen=True, eq=False)
class FeatureBag:
    """Ordered attribute/value map for the FEATS column.

    Insertion order is preserved (it is what the source file had, which the
    validator compares against canonical order), but equality and the
    canonical serialization sort attributes alphabetically, case-insensitive.
    """

    entries: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        entries = tuple((str(a), str(v)) for a, v in self.entries)
        object.__setattr__(self, "entries", entries)
        seen = set()
        for attr, _ in entries:
            if not attr:
                raise ValueError("feature attribute name must be non-empty")
            if attr in seen:
                raise ValueError(f"duplicate feature attribute {attr!r}")
            seen.add(attr)

    @classmethod
    def of(cls, mapping_or_pairs=()) -> "FeatureBag":
        if isinstance(mapping_or_pairs, FeatureBag):
            return mapping_or_pairs
        if hasattr(mapping_or_pairs, "items"):
            return cls(tuple(mapping_or_pairs.items()))
        return cls(tuple(mapping_or_pairs))

    def canonical_items(self) -> tuple[tuple[str, str], ...]:
        return tuple(sorted(self.entries, key=lambda kv: (kv[0].lower(), kv[0])))

    def get(self, attr: str, default=None):
        for a, v in self.entries:
            if a == attr:
                return v
        return default

    def __contains__(self, attr: str) -> bool:
        return any(a == attr for a, _ in self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeatureBag):
            return NotImplemented
        return self.canonical_items() == other.canonical_items()

    def __hash__(self) -> int:
        return hash(self.canonical_items())


EMPTY_BAG = FeatureBag()


@dataclass(frozen=True)
class Token:
    """One syntactic token: a row with the ten UD tags.

    ``None`` means the field is unannotated (the CoNLL-U ``_``); a FORM or
    LEMMA may legitimately be the literal string ``"_"``.  ``head`` 0 means
    attachment to the root.  ``head == id`` is representable on purpose: the
    validator reports it, the constructor does not refuse it.
    """

    id: int
    form: str
    lemma: str | None = None
    upos: str | None = None
    xpos: str | None = None
    feats: FeatureBag = EMPTY_BAG
    head: int | None = None
    deprel: str | None = None
    deps: tuple[tuple[int, str], ...] = ()
    misc: MiscItems = ()

    def __post_init__(self):
        if self.id < 1:
            raise ValueError(f"token id must be >= 1, got {self.id}")
        if self.form == "":
            raise ValueError("token form must be non-empty")
        if self.head is not None and self.head < 0:
            raise ValueError(f"token head must be >= 0, got {self.head}")
        object.__setattr__(self, "feats", FeatureBag.of(self.feats))
        object.__setattr__(
            self, "deps", tuple((int(h), str(r)) for h, r in self.deps)
        )
        object.__setattr__(self, "misc", _misc_items(self.misc))


@dataclass(frozen=True)
class MultiwordToken:
    """Range row for a surface word spanning several syntactic tokens."""

    first_id: int
    last_id: int
    form: str
    misc: MiscItems = ()

    def __post_init__(self):
        if self.first_id < 1:
            raise ValueError(f"MWT first_id must be >= 1, got {self.first_id}")
        if self.first_id >= self.last_id:
            raise ValueError(
                f"MWT range must satisfy first < last, got {self.first_id}-{self.last_id}"
            )
        if self.form == "":
            raise ValueError("MWT form must be non-empty")
        object.__setattr__(self, "misc", _misc_items(self.misc))

    def covers(self, token_id: int) -> bool:
        return self.first_id <= token_id <= self.last_id


@dataclass(frozen=True)
class Sentence:
    """One sentence: comments kept verbatim, tokens ordered 1..n."""

    sent_id: str
    text: str
    comments: tuple[str, ...] = ()
    tokens: tuple[Token, ...] = ()
    mwts: tuple[MultiwordToken, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "comments", tuple(self.comments))
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "mwts", tuple(self.mwts))
        check_sentence(self)

    def __len__(self) -> int:
        return len(self.tokens)

    def token(self, token_id: int) -> Token:
        if not 1 <= token_id <= len(self.tokens):
            raise IndexError(f"no token with id {token_id}")
        return self.tokens[token_id - 1]

    def mwt_covering(self, token_id: int) -> MultiwordToken | None:
        for mwt in self.mwts:
            if mwt.covers(token_id):
                return mwt
        return None


@dataclass(frozen=True)
class Document:
    """Ordered collection of sentences, as stored in one CoNLL-U file."""

    sentences: tuple[Sentence, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)


def check_sentence(sent: Sentence) -> None:
    """Verify the structural Sentence invariants, raising ValueError.

    Reused by every transform property test: ids are exactly 1..n, MWT
    ranges lie inside the sentence, do not overlap, and are sorted.
    """
    for pos, tok in enumerate(sent.tokens, start=1):
        if tok.id != pos:
            raise ValueError(
                f"token ids must be contiguous 1..n; position {pos} has id {tok.id}"
            )
    n = len(sent.tokens)
    prev_last = 0
    for mwt in sent.mwts:
        if mwt.first_id <= prev_last:
            raise ValueError(
                f"MWT ranges must be sorted and non-overlapping; {mwt.first_id}-{mwt.last_id} "
                f"starts at or before token {prev_last}"
            )
        if mwt.last_id > n:
            raise ValueError(
                f"MWT range {mwt.first_id}-{mwt.last_id} exceeds sentence length {n}"
            )
        prev_last = mwt.last_id


def head_cycle(tokens) -> list[int] | None:
    """Find a cycle in the head graph restricted to in-range heads.

    Each token has at most one outgoing edge (to its head), so a single
    colored walk per token suffices.  Returns the token ids on one cycle,
    or None.  A self-head is a cycle of length one.
    """
    n = len(tokens)
    heads = {t.id: t.head for t in tokens}
    state: dict[int, int] = {}  # 1 = on current walk, 2 = known safe
    for start in heads:
        if state.get(start):
            continue
        path = []
        node = start
        while True:
            if node is None or node == 0 or not 1 <= node <= n:
                break  # reached the root or a dangling head
            mark = state.get(node)
            if mark == 2:
                break
            if mark == 1:
                return path[path.index(node):]
            state[node] = 1
            path.append(node)
            node = heads[node]
        for visited in path:
            state[visited] = 2
    return None


def surface_units(sent: Sentence) -> list[tuple[str, tuple[int, ...]]]:
    """Collapse MWT-covered tokens into their surface word.

    Returns (form, covered token ids) pairs in sentence order; tokens not
    under an MWT appear as singletons.  The concatenation of these forms is
    what split/join must preserve.
    """
    units: list[tuple[str, tuple[int, ...]]] = []
    by_first = {mwt.first_id: mwt for mwt in sent.mwts}
    i = 1
    n = len(sent.tokens)
    while i <= n:
        mwt = by_first.get(i)
        if mwt is not None:
            units.append((mwt.form, tuple(range(mwt.first_id, mwt.last_id + 1))))
            i = mwt.last_id + 1
        else:
            units.append((sent.tokens[i - 1].form, (i,)))
            i += 1
    return units
