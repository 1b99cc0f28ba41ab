"""Classify exam questions and learning outcomes into taxonomy levels.

The pipeline: a WordNet-backed lexicon (:mod:`bloomsim.wordnet`), verb
similarity (:mod:`bloomsim.similarity`), consensus verb lists
(:mod:`bloomsim.verbsets`), question chunking (:mod:`bloomsim.chunker`),
level selection (:mod:`bloomsim.classifier`), and an evaluation harness
(:mod:`bloomsim.evaluation`). The :mod:`bloomsim.cli` module exposes all
of it as the ``bloomsim`` command.
"""

from .wordnet import (
    LexicalStore,
    SynsetId,
    Synset,
    VIRTUAL_ROOT,
    WordNetError,
    bundled_database_path,
    load_database,
)
from .similarity import UnknownVerbError, WordSimilarity, wup_synsets, wup_word
from .verbsets import (
    ConsensusVerbSet,
    SourceVerbList,
    TaxonomyRegistry,
    build_consensus,
    bundled_consensus_path,
    load_consensus,
    parse_source_list,
    registry_from,
    save_consensus,
)
from .chunker import (
    ChunkResult,
    NoVerbFoundError,
    StarterPattern,
    bundled_grammar_path,
    extract_action_verb,
    parse_grammar,
    split_questions,
    tokenize,
)
from .classifier import (
    ClassificationReport,
    LevelScore,
    classify_question,
    classify_verb,
    level_similarities,
)
from .evaluation import (
    AuditReport,
    ConfusionMatrix,
    MetricRow,
    audit_verbset,
    build_confusion,
    macro_average,
    metric_row,
    metric_table,
)

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "ChunkResult",
    "ClassificationReport",
    "ConfusionMatrix",
    "ConsensusVerbSet",
    "LevelScore",
    "LexicalStore",
    "MetricRow",
    "NoVerbFoundError",
    "SourceVerbList",
    "StarterPattern",
    "Synset",
    "SynsetId",
    "TaxonomyRegistry",
    "UnknownVerbError",
    "VIRTUAL_ROOT",
    "WordNetError",
    "WordSimilarity",
    "audit_verbset",
    "build_confusion",
    "build_consensus",
    "bundled_consensus_path",
    "bundled_database_path",
    "bundled_grammar_path",
    "classify_question",
    "classify_verb",
    "extract_action_verb",
    "level_similarities",
    "load_consensus",
    "load_database",
    "macro_average",
    "metric_row",
    "metric_table",
    "parse_grammar",
    "parse_source_list",
    "registry_from",
    "save_consensus",
    "split_questions",
    "tokenize",
    "wup_synsets",
    "wup_word",
]
