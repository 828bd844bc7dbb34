"""Query-augmentation counterfactuals that promote a document above a rank
threshold.

Candidate terms come from the instance document itself (minus query terms and
stopwords) and are prioritized by TF-IDF over the top-k ranked set: frequent
in the instance document, rare among its ranked peers.  Term combinations are
searched size-first, so the first valid augmentation is size-minimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

from .corpus import Document, Query
from .errors import (
    DocumentNotInTopKError,
    EmptyCandidatePoolError,
    InvalidRequestError,
    TermNotInDocumentError,
)
from .ranking import RankingContext, rank_from_scores
from .stopwords import DEFAULT_STOPWORDS


@dataclass(frozen=True)
class QueryCaps:
    """Enumeration budget: candidate terms, append size, ranker calls."""

    max_candidate_terms: int = 15
    max_append: int = 4
    max_evaluations: int = 10_000


@dataclass(frozen=True)
class QueryAugmentation:
    """Terms appended to the query; valid iff the new rank meets the threshold."""

    appended: tuple[str, ...]
    score: float
    augmented_query: Query
    new_rank: int
    valid: bool


@dataclass(frozen=True)
class QueryCfRequest:
    doc_id: str
    query: Query
    k: int
    threshold: int
    n: int = 1
    caps: QueryCaps = field(default_factory=QueryCaps)


@dataclass(frozen=True)
class QueryCfResult:
    explanations: list[QueryAugmentation]
    evaluations: int
    exhausted: bool


def tfidf_score(term: str, doc: Document, ranked_docs: Sequence[Document]) -> float:
    """tf(term, doc) * ln(k / df') with df' counted over the k ranked documents.

    Requires term to occur in doc and doc to be among ranked_docs, which
    guarantees df' >= 1.  Terms present in every ranked document score 0.
    """
    tf = doc.tokens.count(term)
    if tf == 0:
        raise TermNotInDocumentError(term, doc.id)
    df = sum(1 for d in ranked_docs if term in d.tokens)
    return tf * math.log(len(ranked_docs) / df)


def candidate_terms(
    doc: Document,
    query: Query,
    ranked_docs: Sequence[Document],
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
    max_terms: int = QueryCaps.max_candidate_terms,
) -> list[tuple[str, float]]:
    """Scored candidate pool: distinct document terms not already in the query
    and not stopwords, best TF-IDF first (ties: term ascending)."""
    pool = sorted(set(doc.tokens) - query.term_set - stopwords)
    scored = [(term, tfidf_score(term, doc, ranked_docs)) for term in pool]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:max_terms]


def augment_query(query: Query, terms: Sequence[str]) -> Query:
    """Original tokens followed by the appended terms, in the given order."""
    tokens = list(query.tokens) + list(terms)
    raw = query.raw + " " + " ".join(terms) if terms else query.raw
    return Query(raw=raw, tokens=tokens, term_set=frozenset(tokens))


def _combination_stream(
    candidates: Sequence[tuple[str, float]], caps: QueryCaps
) -> Iterator[tuple[tuple[str, ...], float]]:
    # Size ascending, then summed TF-IDF descending, ties by term tuple.
    emitted = 0
    for size in range(1, min(caps.max_append, len(candidates)) + 1):
        ordered = sorted(
            combinations(candidates, size),
            key=lambda combo: (-sum(s for _, s in combo), tuple(t for t, _ in combo)),
        )
        for combo in ordered:
            if emitted >= caps.max_evaluations:
                return
            yield tuple(t for t, _ in combo), sum(s for _, s in combo)
            emitted += 1


def generate_query_counterfactuals(
    request: QueryCfRequest, ctx: RankingContext
) -> QueryCfResult:
    """Find up to n minimal query augmentations that place the document at
    rank <= threshold under a full-corpus re-ranking."""
    _validate(request)
    doc = ctx.corpus.get(request.doc_id)
    ranked = ctx.rank_top_k(request.query, request.k)
    if request.doc_id not in ranked.doc_ids():
        raise DocumentNotInTopKError(request.doc_id, request.k)
    ranked_docs = [ctx.corpus.get(e.doc_id) for e in ranked.entries]
    candidates = candidate_terms(
        doc, request.query, ranked_docs, max_terms=request.caps.max_candidate_terms
    )
    if not candidates:
        raise EmptyCandidatePoolError(
            f"document {request.doc_id!r} has no candidate terms outside the query"
        )

    found: list[QueryAugmentation] = []
    evaluations = 0
    exhausted = True
    for terms, total in _combination_stream(candidates, request.caps):
        augmented = augment_query(request.query, terms)
        scores = ctx.score_all(augmented)
        evaluations += 1
        new_rank = rank_from_scores(scores, request.doc_id)
        if new_rank <= request.threshold:
            found.append(
                QueryAugmentation(
                    appended=terms,
                    score=total,
                    augmented_query=augmented,
                    new_rank=new_rank,
                    valid=True,
                )
            )
            if len(found) >= request.n:
                exhausted = False
                break
    return QueryCfResult(explanations=found, evaluations=evaluations, exhausted=exhausted)


def _validate(request: QueryCfRequest) -> None:
    if request.n < 1:
        raise InvalidRequestError(f"n must be >= 1, got {request.n}")
    if not 1 <= request.threshold <= request.k:
        raise InvalidRequestError(
            f"threshold must be in [1, k], got {request.threshold} with k={request.k}"
        )
    caps = request.caps
    if min(caps.max_candidate_terms, caps.max_append, caps.max_evaluations) < 1:
        raise InvalidRequestError("all caps must be >= 1")
