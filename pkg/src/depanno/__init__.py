"""Multi-user web platform for Universal Dependencies treebank annotation."""

from .conllu import (
    ConlluError,
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
from .model import (
    Document,
    FeatureBag,
    MultiwordToken,
    Sentence,
    Token,
    check_sentence,
    surface_units,
)
from .transforms import (
    AlreadySplit,
    DanglingHeads,
    InvalidRange,
    TokenNotFound,
    TooFewParts,
    TransformError,
    join_tokens,
    split_token,
)
from .validation import (
    UNIVERSAL_DEPRELS,
    UPOS_TAGS,
    ValidationIssue,
    blocking_issues,
    validate_document,
    validate_sentence,
)
from .agreement import (
    AgreementReport,
    NoComparableSentences,
    agreement_matrix,
    compute_agreement,
)
from .layout import ArcDiagram, CyclicGraph, layout, render_svg
from .search import (
    BadRegex,
    Match,
    QuerySyntaxError,
    SearchEngine,
    SearchQuery,
    build_index,
    parse_query,
    update_index,
)
from .store import (
    AnnotationRecord,
    CompleteWithErrors,
    DuplicateTreebank,
    NotFound,
    RevisionConflict,
    Store,
    UnknownAnnotator,
    UnknownTreebank,
)
from .vocab import VocabularyBundle, build_vocabulary

__version__ = "0.1.0"
