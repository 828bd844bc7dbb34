"""Inverted index, BM25 scoring, black-box ranker bindings, and ranking.

The ranker is a pure scoring function of (query, document text) given
collection statistics frozen at index build time.  Substitute re-ranking of
perturbed documents never recomputes those statistics, which keeps every
perturbation evaluation cheap and exactly reproducible.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import httpx

from .corpus import Corpus, Query, tokenize
from .errors import (
    EmptyCorpusError,
    EmptyQueryError,
    ExternalRankerMalformedResponseError,
    ExternalRankerTimeoutError,
    ExternalRankerUnreachableError,
    InvalidRequestError,
    UnknownDocumentError,
)

K1 = 1.2
B = 0.75
DEFAULT_EXTERNAL_TIMEOUT = 30.0


@dataclass(frozen=True)
class CollectionStats:
    """Corpus statistics frozen at index build time."""

    N: int
    df: Mapping[str, int]
    avg_doc_length: float


class InvertedIndex:
    """Term postings plus the per-document and collection statistics."""

    def __init__(self, corpus: Corpus):
        if len(corpus) == 0:
            raise EmptyCorpusError("cannot index an empty corpus")
        postings: dict[str, list[tuple[str, int]]] = {}
        doc_length: dict[str, int] = {}
        for doc in corpus:
            doc_length[doc.id] = len(doc.tokens)
            for term, tf in sorted(Counter(doc.tokens).items()):
                postings.setdefault(term, []).append((doc.id, tf))
        self.postings = postings
        self.doc_length = doc_length
        self.N = len(corpus)
        self.df = {term: len(plist) for term, plist in postings.items()}
        self.avg_doc_length = sum(doc_length.values()) / len(doc_length)

    @property
    def stats(self) -> CollectionStats:
        return CollectionStats(N=self.N, df=self.df, avg_doc_length=self.avg_doc_length)


def build_index(corpus: Corpus) -> InvertedIndex:
    return InvertedIndex(corpus)


def bm25_term_weight(stats, term: str, tf: int, doc_len: int) -> float:
    """Okapi BM25 term weight with an always-positive idf.

    idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)); unknown terms use df = 0.
    """
    df = stats.df.get(term, 0)
    idf = math.log(1.0 + (stats.N - df + 0.5) / (df + 0.5))
    ratio = doc_len / stats.avg_doc_length if stats.avg_doc_length > 0 else 0.0
    return idf * tf * (K1 + 1.0) / (tf + K1 * (1.0 - B + B * ratio))


@dataclass(frozen=True)
class RankerBinding:
    """A pure query/document scoring function: the built-in BM25 ranker or an
    external service speaking the ``POST <endpoint>/score`` protocol."""

    kind: str = "builtin_bm25"
    endpoint: str | None = None
    timeout: float = DEFAULT_EXTERNAL_TIMEOUT

    def __post_init__(self):
        if self.kind not in ("builtin_bm25", "external"):
            raise InvalidRequestError(f"unknown ranker kind: {self.kind!r}")
        if self.kind == "external" and not self.endpoint:
            raise InvalidRequestError("external ranker binding requires an endpoint")


@dataclass(frozen=True)
class RankEntry:
    doc_id: str
    score: float
    rank: int


@dataclass(frozen=True)
class RankedList:
    """Top-k ranking: score descending, ties broken by doc_id ascending."""

    query: Query
    k: int
    entries: list[RankEntry]

    def entry(self, doc_id: str) -> RankEntry | None:
        for e in self.entries:
            if e.doc_id == doc_id:
                return e
        return None

    def doc_ids(self) -> list[str]:
        return [e.doc_id for e in self.entries]


def _score_tokens(stats: CollectionStats, query: Query, doc_tokens: Sequence[str]) -> float:
    # Query terms are deduplicated before summation (first-occurrence order).
    counts = Counter(doc_tokens)
    doc_len = len(doc_tokens)
    score = 0.0
    for term in dict.fromkeys(query.tokens):
        tf = counts[term]
        if tf:
            score += bm25_term_weight(stats, term, tf, doc_len)
    return score


def score_external(
    endpoint: str,
    query: Query,
    docs: Sequence[tuple[str, str]],
    timeout: float = DEFAULT_EXTERNAL_TIMEOUT,
) -> list[float]:
    """Score (id, text) pairs via the external-ranker wire protocol.

    One score per input document, order-aligned.  Any non-200 response is
    treated as unreachable.
    """
    if not docs:
        return []
    payload = {"query": query.raw, "docs": [{"id": i, "text": t} for i, t in docs]}
    try:
        response = httpx.post(f"{endpoint}/score", json=payload, timeout=timeout)
    except httpx.TimeoutException as exc:
        raise ExternalRankerTimeoutError(f"ranker at {endpoint} timed out: {exc}") from None
    except httpx.HTTPError as exc:
        raise ExternalRankerUnreachableError(f"ranker at {endpoint} unreachable: {exc}") from None
    if response.status_code != 200:
        raise ExternalRankerUnreachableError(
            f"ranker at {endpoint} returned status {response.status_code}"
        )
    try:
        body = response.json()
        scores = body["scores"]
        result = [float(s) for s in scores]
    except (ValueError, KeyError, TypeError) as exc:
        raise ExternalRankerMalformedResponseError(
            f"ranker at {endpoint} returned a malformed response: {exc}"
        ) from None
    if len(result) != len(docs):
        raise ExternalRankerMalformedResponseError(
            f"ranker at {endpoint} returned {len(result)} scores for {len(docs)} docs"
        )
    return result


def score_document(
    binding: RankerBinding, stats: CollectionStats, query: Query, doc_text: str
) -> float:
    """Score one document body; deterministic for identical inputs."""
    if not query.tokens:
        raise EmptyQueryError("query has no terms")
    if binding.kind == "builtin_bm25":
        return _score_tokens(stats, query, tokenize(doc_text))
    return score_external(binding.endpoint, query, [("doc", doc_text)], binding.timeout)[0]


def score_all(
    binding: RankerBinding, stats: CollectionStats, corpus: Corpus, query: Query
) -> dict[str, float]:
    """Score every corpus document; external bindings get one batched call."""
    if not query.tokens:
        raise EmptyQueryError("query has no terms")
    if binding.kind == "builtin_bm25":
        return {doc.id: _score_tokens(stats, query, doc.tokens) for doc in corpus}
    docs = [(doc.id, doc.body) for doc in corpus]
    scores = score_external(binding.endpoint, query, docs, binding.timeout)
    return {doc_id: score for (doc_id, _), score in zip(docs, scores)}


def rank_from_scores(scores: Mapping[str, float], doc_id: str) -> int:
    """Rank of doc_id in a full sort of the given scores (ties: id ascending)."""
    s = scores[doc_id]
    rank = 1
    for other, sc in scores.items():
        if other == doc_id:
            continue
        if sc > s or (sc == s and other < doc_id):
            rank += 1
    return rank


def rank_top_k(
    binding: RankerBinding, stats: CollectionStats, corpus: Corpus, query: Query, k: int
) -> RankedList:
    """Score the whole corpus and return the top min(k, N) entries."""
    if k < 1:
        raise InvalidRequestError(f"k must be >= 1, got {k}")
    scores = score_all(binding, stats, corpus, query)
    order = sorted(scores, key=lambda doc_id: (-scores[doc_id], doc_id))
    entries = [
        RankEntry(doc_id=doc_id, score=scores[doc_id], rank=rank)
        for rank, doc_id in enumerate(order[: min(k, len(order))], start=1)
    ]
    return RankedList(query=query, k=k, entries=entries)


def rank_of_substitute(
    binding: RankerBinding,
    stats: CollectionStats,
    corpus: Corpus,
    query: Query,
    substituted_id: str,
    substituted_text: str,
    base_scores: Mapping[str, float] | None = None,
) -> int:
    """Full-corpus rank of a document after substituting its body.

    Collection statistics stay frozen.  ``base_scores`` (scores of every
    document with its original body) may be passed to amortize repeated calls.
    """
    if substituted_id not in corpus:
        raise UnknownDocumentError(substituted_id)
    if base_scores is None:
        base_scores = score_all(binding, stats, corpus, query)
    substitute_score = score_document(binding, stats, query, substituted_text)
    rank = 1
    for doc_id, score in base_scores.items():
        if doc_id == substituted_id:
            continue
        if score > substitute_score or (score == substitute_score and doc_id < substituted_id):
            rank += 1
    return rank


@dataclass(frozen=True)
class RankingContext:
    """Everything a counterfactual search needs: corpus, frozen stats, ranker."""

    corpus: Corpus
    stats: CollectionStats
    binding: RankerBinding = field(default_factory=RankerBinding)

    def score_all(self, query: Query) -> dict[str, float]:
        return score_all(self.binding, self.stats, self.corpus, query)

    def rank_top_k(self, query: Query, k: int) -> RankedList:
        return rank_top_k(self.binding, self.stats, self.corpus, query, k)

    def rank_full(self, query: Query) -> RankedList:
        return rank_top_k(self.binding, self.stats, self.corpus, query, len(self.corpus))

    def rank_of_substitute(
        self,
        query: Query,
        substituted_id: str,
        substituted_text: str,
        base_scores: Mapping[str, float] | None = None,
    ) -> int:
        return rank_of_substitute(
            self.binding, self.stats, self.corpus, query, substituted_id,
            substituted_text, base_scores,
        )


def context_for(corpus: Corpus, binding: RankerBinding | None = None) -> RankingContext:
    """Index a corpus and bundle it with a ranker binding."""
    return RankingContext(
        corpus=corpus,
        stats=build_index(corpus).stats,
        binding=binding or RankerBinding(),
    )
