"""Instance-based counterfactuals: real non-relevant documents similar to the
instance being explained.

Two variants share a cosine-similarity core.  The sampled variant draws from
the non-relevant tail of the ranking and compares built-in BM25 term-weight
vectors; the embedding variant asks a provider (built-in lexical fallback or
an external service) for a vector per corpus document and scans every
non-relevant document.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from random import Random
from typing import Protocol, Sequence

import httpx

from .corpus import Corpus, Document, Query
from .errors import (
    DimensionMismatchError,
    DocumentNotInTopKError,
    EmbeddingProviderUnreachableError,
    InvalidRequestError,
    NoNonRelevantDocumentsError,
    ZeroVectorError,
)
from .ranking import CollectionStats, RankingContext, bm25_term_weight

DEFAULT_EMBED_TIMEOUT = 30.0

VARIANT_COSINE_SAMPLED = "cosine_sampled"
VARIANT_EMBEDDING_NEAREST = "embedding_nearest"


@dataclass(frozen=True)
class DocumentVector:
    """Sparse term-weight vector; every weight is a positive BM25 term weight."""

    doc_id: str
    weights: dict[str, float]


@dataclass(frozen=True)
class InstanceExplanation:
    doc_id: str
    similarity: float
    corpus_rank: int


@dataclass(frozen=True)
class InstanceCfRequest:
    doc_id: str
    query: Query
    k: int
    n: int = 1
    variant: str = VARIANT_COSINE_SAMPLED
    s: int | None = None  # sample size; None scans every non-relevant document
    seed: int = 0


def document_vector(stats: CollectionStats, doc: Document) -> DocumentVector:
    """One weight per distinct document term, under the frozen statistics."""
    counts = Counter(doc.tokens)
    doc_len = len(doc.tokens)
    weights = {
        term: bm25_term_weight(stats, term, tf, doc_len)
        for term, tf in sorted(counts.items())
    }
    return DocumentVector(doc_id=doc.id, weights=weights)


def cosine_similarity(u: DocumentVector, v: DocumentVector) -> float:
    return _sparse_cosine(u.weights, v.weights)


def _sparse_cosine(a: dict[str, float], b: dict[str, float]) -> float:
    if not a or not b:
        raise ZeroVectorError("cannot compute cosine of an empty vector")
    dot = sum(w * b[t] for t, w in a.items() if t in b)
    norm_a = math.sqrt(sum(w * w for w in a.values()))
    norm_b = math.sqrt(sum(w * w for w in b.values()))
    return _clamp(dot / (norm_a * norm_b))


def _dense_cosine(a: Sequence[float], b: Sequence[float]) -> float:
    if len(a) != len(b):
        raise DimensionMismatchError(f"vector dimensions differ: {len(a)} vs {len(b)}")
    norm_a = math.sqrt(sum(x * x for x in a))
    norm_b = math.sqrt(sum(x * x for x in b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVectorError("cannot compute cosine of a zero vector")
    return _clamp(sum(x * y for x, y in zip(a, b)) / (norm_a * norm_b))


def _clamp(value: float) -> float:
    return max(-1.0, min(1.0, value))


def _vector_cosine(a, b) -> float:
    if isinstance(a, dict) and isinstance(b, dict):
        return _sparse_cosine(a, b)
    if isinstance(a, dict) or isinstance(b, dict):
        raise DimensionMismatchError("cannot mix sparse and dense vectors")
    return _dense_cosine(a, b)


class EmbeddingProvider(Protocol):
    def embed(self, docs: Sequence[Document]) -> list:
        """One vector per document, order-aligned with the input."""


class BuiltinEmbeddingProvider:
    """Lexical fallback provider: BM25 term-weight vectors."""

    def __init__(self, stats: CollectionStats):
        self.stats = stats

    def embed(self, docs: Sequence[Document]) -> list[dict[str, float]]:
        return [document_vector(self.stats, doc).weights for doc in docs]


class ExternalEmbeddingProvider:
    """Client for the ``POST <endpoint>/embed`` wire protocol."""

    def __init__(self, endpoint: str, timeout: float = DEFAULT_EMBED_TIMEOUT):
        self.endpoint = endpoint
        self.timeout = timeout

    def embed(self, docs: Sequence[Document]) -> list[list[float]]:
        payload = {"docs": [{"id": d.id, "text": d.body} for d in docs]}
        try:
            response = httpx.post(
                f"{self.endpoint}/embed", json=payload, timeout=self.timeout
            )
        except httpx.HTTPError as exc:
            raise EmbeddingProviderUnreachableError(
                f"embedding provider at {self.endpoint} unreachable: {exc}"
            ) from None
        if response.status_code != 200:
            raise EmbeddingProviderUnreachableError(
                f"embedding provider at {self.endpoint} returned status {response.status_code}"
            )
        try:
            vectors = [[float(x) for x in vec] for vec in response.json()["vectors"]]
        except (ValueError, KeyError, TypeError) as exc:
            raise EmbeddingProviderUnreachableError(
                f"embedding provider at {self.endpoint} returned a malformed response: {exc}"
            ) from None
        if len(vectors) != len(docs):
            raise DimensionMismatchError(
                f"expected {len(docs)} vectors, got {len(vectors)}"
            )
        if vectors and any(len(v) != len(vectors[0]) for v in vectors):
            raise DimensionMismatchError("embedding vectors have non-uniform dimensions")
        return vectors


def _non_relevant_tail(request: InstanceCfRequest, ctx: RankingContext):
    ctx.corpus.get(request.doc_id)  # unknown ids fail before the ranking check
    full = ctx.rank_full(request.query)
    ranks = {e.doc_id: e.rank for e in full.entries}
    if ranks.get(request.doc_id, 0) > request.k or request.doc_id not in ranks:
        raise DocumentNotInTopKError(request.doc_id, request.k)
    tail = [e.doc_id for e in full.entries[request.k :]]
    if not tail:
        raise NoNonRelevantDocumentsError(
            f"every document ranks in the top-{request.k}"
        )
    return tail, ranks


def _top_n(similarities: list[tuple[str, float]], n: int, ranks: dict[str, int]):
    similarities.sort(key=lambda pair: (-pair[1], pair[0]))
    return [
        InstanceExplanation(doc_id=doc_id, similarity=sim, corpus_rank=ranks[doc_id])
        for doc_id, sim in similarities[:n]
    ]


def sampled_counterfactual_instances(
    request: InstanceCfRequest, ctx: RankingContext
) -> list[InstanceExplanation]:
    """Sample non-relevant documents and return the n most cosine-similar.

    Sampling is uniform without replacement over ranks k+1..N with the
    request's seed; s=None degenerates to a full scan of the tail.
    """
    _validate(request, VARIANT_COSINE_SAMPLED)
    tail, ranks = _non_relevant_tail(request, ctx)
    sample_size = len(tail) if request.s is None else min(request.s, len(tail))
    sample = Random(request.seed).sample(tail, sample_size)
    instance_vec = document_vector(ctx.stats, ctx.corpus.get(request.doc_id))
    similarities = []
    for doc_id in sample:
        vec = document_vector(ctx.stats, ctx.corpus.get(doc_id))
        if not vec.weights:
            continue  # token-free document; nothing to compare
        similarities.append((doc_id, cosine_similarity(instance_vec, vec)))
    return _top_n(similarities, request.n, ranks)


def embedding_counterfactual_instances(
    request: InstanceCfRequest,
    ctx: RankingContext,
    provider: EmbeddingProvider | None = None,
) -> list[InstanceExplanation]:
    """Return the n non-relevant documents nearest in embedding space.

    With the built-in fallback provider this matches the sampled variant under
    an exhaustive sample exactly.
    """
    _validate(request, VARIANT_EMBEDDING_NEAREST)
    if provider is None:
        provider = BuiltinEmbeddingProvider(ctx.stats)
    tail, ranks = _non_relevant_tail(request, ctx)
    docs = list(ctx.corpus)
    vectors = dict(zip((d.id for d in docs), provider.embed(docs)))
    instance_vec = vectors[request.doc_id]
    similarities = []
    for doc_id in tail:
        try:
            similarities.append((doc_id, _vector_cosine(instance_vec, vectors[doc_id])))
        except ZeroVectorError:
            if not _is_zero(instance_vec):
                continue  # skip degenerate candidates only
            raise
    return _top_n(similarities, request.n, ranks)


def _is_zero(vec) -> bool:
    if isinstance(vec, dict):
        return not vec
    return all(x == 0.0 for x in vec)


def _validate(request: InstanceCfRequest, expected_variant: str) -> None:
    if request.variant != expected_variant:
        raise InvalidRequestError(
            f"expected variant {expected_variant!r}, got {request.variant!r}"
        )
    if request.n < 1:
        raise InvalidRequestError(f"n must be >= 1, got {request.n}")
    if request.s is not None and request.s < request.n:
        raise InvalidRequestError(
            f"sample size s={request.s} must be >= n={request.n}"
        )
