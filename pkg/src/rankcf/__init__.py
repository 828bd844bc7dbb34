"""Counterfactual explanations for document rankings.

A ranker-agnostic engine that explains why a document ranks where it does:
minimal sentence removals that demote it, minimal query augmentations that
promote it, similar-but-non-relevant instance documents, and interactive
edit-and-re-rank diffs.  Exposed as a library, CLI, and REST service.
"""

from .builder import BuilderResult, RankDelta, rerank_with_edit
from .cf_document import (
    DocumentCaps,
    DocumentCfRequest,
    DocumentCfResult,
    SentencePerturbation,
    apply_perturbation,
    enumerate_candidates,
    generate_document_counterfactuals,
    sentence_importance,
)
from .cf_instance import (
    BuiltinEmbeddingProvider,
    DocumentVector,
    ExternalEmbeddingProvider,
    InstanceCfRequest,
    InstanceExplanation,
    cosine_similarity,
    document_vector,
    embedding_counterfactual_instances,
    sampled_counterfactual_instances,
)
from .cf_query import (
    QueryAugmentation,
    QueryCaps,
    QueryCfRequest,
    QueryCfResult,
    augment_query,
    candidate_terms,
    generate_query_counterfactuals,
    tfidf_score,
)
from .corpus import (
    Corpus,
    Document,
    Query,
    Sentence,
    load_corpus,
    make_document,
    parse_query,
    split_sentences,
    tokenize,
)
from .errors import EngineError
from .ranking import (
    CollectionStats,
    InvertedIndex,
    RankedList,
    RankEntry,
    RankerBinding,
    RankingContext,
    bm25_term_weight,
    build_index,
    context_for,
    rank_of_substitute,
    rank_top_k,
    score_all,
    score_document,
    score_external,
)
from .topics import CollapsedGibbs, TopicModel, fit_lda, top_terms

__version__ = "0.1.0"

__all__ = [
    "BuilderResult",
    "BuiltinEmbeddingProvider",
    "CollapsedGibbs",
    "CollectionStats",
    "Corpus",
    "Document",
    "DocumentCaps",
    "DocumentCfRequest",
    "DocumentCfResult",
    "DocumentVector",
    "EngineError",
    "ExternalEmbeddingProvider",
    "InstanceCfRequest",
    "InstanceExplanation",
    "InvertedIndex",
    "Query",
    "QueryAugmentation",
    "QueryCaps",
    "QueryCfRequest",
    "QueryCfResult",
    "RankDelta",
    "RankEntry",
    "RankedList",
    "RankerBinding",
    "RankingContext",
    "Sentence",
    "SentencePerturbation",
    "TopicModel",
    "apply_perturbation",
    "augment_query",
    "bm25_term_weight",
    "build_index",
    "candidate_terms",
    "context_for",
    "cosine_similarity",
    "document_vector",
    "embedding_counterfactual_instances",
    "enumerate_candidates",
    "fit_lda",
    "generate_document_counterfactuals",
    "generate_query_counterfactuals",
    "load_corpus",
    "make_document",
    "parse_query",
    "rank_of_substitute",
    "rank_top_k",
    "rerank_with_edit",
    "sampled_counterfactual_instances",
    "score_all",
    "score_document",
    "score_external",
    "sentence_importance",
    "split_sentences",
    "tfidf_score",
    "tokenize",
    "top_terms",
]
