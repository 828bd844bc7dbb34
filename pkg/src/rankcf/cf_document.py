"""Sentence-removal counterfactuals that demote a document below rank k.

The search walks removal candidates in increasing size, and within each size
in decreasing total sentence importance, so the first valid perturbation
found is guaranteed minimal in size (within the enumeration caps).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

from .corpus import Document, Query, Sentence
from .errors import DocumentNotInTopKError, InvalidRequestError, SentenceIndexError
from .ranking import RankingContext


@dataclass(frozen=True)
class DocumentCaps:
    """Enumeration budget: candidate sentences, removal size, ranker calls."""

    max_candidate_sentences: int = 20
    max_removals: int = 5
    max_evaluations: int = 10_000


@dataclass(frozen=True)
class SentencePerturbation:
    """A removal set that was re-ranked; valid iff the new rank exceeds k."""

    removed: tuple[int, ...]
    importance: int
    new_rank: int
    valid: bool


@dataclass(frozen=True)
class DocumentCfRequest:
    doc_id: str
    query: Query
    k: int
    n: int = 1
    caps: DocumentCaps = field(default_factory=DocumentCaps)
    # Count distinct matching terms instead of occurrences when scoring
    # sentence importance.
    count_distinct_terms: bool = False
    # Skip candidates that contain an already-found valid removal set.
    prune_supersets: bool = False


@dataclass(frozen=True)
class DocumentCfResult:
    explanations: list[SentencePerturbation]
    evaluations: int
    exhausted: bool  # candidate stream ended before n explanations were found


def sentence_importance(
    sentence: Sentence, query: Query, count_distinct_terms: bool = False
) -> int:
    """Number of sentence tokens that are query terms (occurrences by default)."""
    if count_distinct_terms:
        return len(set(sentence.tokens) & query.term_set)
    return sum(1 for token in sentence.tokens if token in query.term_set)


def enumerate_candidates(
    m: int, importance: Sequence[int], caps: DocumentCaps
) -> Iterator[tuple[int, ...]]:
    """Yield removal candidates in search order.

    If the document has more than ``max_candidate_sentences`` sentences, only
    the highest-importance sentences (ties: lower index first) are considered.
    Subsets are emitted by size ascending, then total importance descending,
    then lexicographically smaller index tuple; the stream stops after
    ``max_evaluations`` emissions.
    """
    indices = list(range(m))
    if m > caps.max_candidate_sentences:
        indices = sorted(indices, key=lambda i: (-importance[i], i))
        indices = sorted(indices[: caps.max_candidate_sentences])
    emitted = 0
    for size in range(1, min(caps.max_removals, len(indices)) + 1):
        ordered = sorted(
            combinations(indices, size),
            key=lambda combo: (-sum(importance[i] for i in combo), combo),
        )
        for combo in ordered:
            if emitted >= caps.max_evaluations:
                return
            yield combo
            emitted += 1


def apply_perturbation(doc: Document, removed) -> str:
    """Join the retained sentences in order; removing all sentences yields ''."""
    removed_set = set(removed)
    for index in removed_set:
        if not 0 <= index < len(doc.sentences):
            raise SentenceIndexError(
                f"sentence index {index} out of range for document {doc.id!r}"
            )
    return " ".join(s.text for s in doc.sentences if s.index not in removed_set)


def generate_document_counterfactuals(
    request: DocumentCfRequest, ctx: RankingContext
) -> DocumentCfResult:
    """Find up to n minimal sentence-removal counterfactuals for a top-k doc.

    Returned explanations preserve discovery order, so sizes are nondecreasing
    and the first one is size-minimal among all valid perturbations reachable
    within the caps.  An exhausted stream with no valid perturbation yields an
    empty list with ``exhausted=True`` rather than an error.
    """
    _validate(request)
    doc = ctx.corpus.get(request.doc_id)
    ranked = ctx.rank_top_k(request.query, request.k)
    if request.doc_id not in ranked.doc_ids():
        raise DocumentNotInTopKError(request.doc_id, request.k)
    importance = [
        sentence_importance(s, request.query, request.count_distinct_terms)
        for s in doc.sentences
    ]
    base_scores = ctx.score_all(request.query)

    found: list[SentencePerturbation] = []
    evaluations = 0
    exhausted = True
    for removed in enumerate_candidates(len(doc.sentences), importance, request.caps):
        if request.prune_supersets and any(
            set(p.removed) <= set(removed) for p in found
        ):
            continue
        text = apply_perturbation(doc, removed)
        new_rank = ctx.rank_of_substitute(request.query, request.doc_id, text, base_scores)
        evaluations += 1
        if new_rank > request.k:
            found.append(
                SentencePerturbation(
                    removed=removed,
                    importance=sum(importance[i] for i in removed),
                    new_rank=new_rank,
                    valid=True,
                )
            )
            if len(found) >= request.n:
                exhausted = False
                break
    return DocumentCfResult(explanations=found, evaluations=evaluations, exhausted=exhausted)


def _validate(request: DocumentCfRequest) -> None:
    if request.n < 1:
        raise InvalidRequestError(f"n must be >= 1, got {request.n}")
    caps = request.caps
    if min(caps.max_candidate_sentences, caps.max_removals, caps.max_evaluations) < 1:
        raise InvalidRequestError("all caps must be >= 1")
