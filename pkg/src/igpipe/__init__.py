"""Institutional-grammar annotation of dependency-parsed legal text and
hypergraph analysis of actor visibility and centrality."""

__version__ = "0.1.0"

from .classifier import (
    ClassifierModel,
    StatementType,
    evaluate_classifier,
    extract_ngrams,
    fit,
    predict,
)
from .conllu import Document, Statement, Token, parse_conllu, subtree, to_conllu
from .evaluation import EvalReport, GoldCorpus, evaluate_tagger
from .hypergraph import (
    GraphMode,
    Hyperedge,
    Hypergraph,
    build_hypergraph,
    edge_size_histogram,
)
from .lexicon import EntityKind, EntityLexicon, LexiconEntry, load_lexicon
from .mentions import Mention, MentionClass, extract_mentions
from .metrics import (
    MetricsRow,
    closeness,
    metrics_table,
    rank_comparison,
    two_section,
    visibility,
)
from .tagger import (
    AnnotatedStatement,
    AnnotationRecord,
    IGTag,
    collapse_tags_for_eval,
    tag_constitutive,
    tag_regulative,
)

__all__ = [
    "AnnotatedStatement",
    "AnnotationRecord",
    "ClassifierModel",
    "Document",
    "EntityKind",
    "EntityLexicon",
    "EvalReport",
    "GoldCorpus",
    "GraphMode",
    "Hyperedge",
    "Hypergraph",
    "IGTag",
    "LexiconEntry",
    "Mention",
    "MentionClass",
    "MetricsRow",
    "Statement",
    "StatementType",
    "Token",
    "build_hypergraph",
    "closeness",
    "collapse_tags_for_eval",
    "edge_size_histogram",
    "evaluate_classifier",
    "evaluate_tagger",
    "extract_mentions",
    "extract_ngrams",
    "fit",
    "load_lexicon",
    "metrics_table",
    "parse_conllu",
    "predict",
    "rank_comparison",
    "subtree",
    "tag_constitutive",
    "tag_regulative",
    "to_conllu",
    "two_section",
    "visibility",
]
