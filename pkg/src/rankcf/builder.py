"""Build-your-own counterfactuals: re-rank a user-edited document against the
original top k+1 and report per-document rank deltas.

The candidate pool is exactly the original top k+1 (the k visible documents
plus the hidden rank-k+1 entrant).  Unedited candidates keep their cached
scores; only the edited body is re-scored, under the frozen statistics.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Query
from .errors import DocumentNotInTopKError
from .ranking import CollectionStats, RankedList, RankerBinding, score_document

DIRECTION_RAISED = "raised"
DIRECTION_LOWERED = "lowered"
DIRECTION_UNCHANGED = "unchanged"


@dataclass(frozen=True)
class RankDelta:
    doc_id: str
    old_rank: int
    new_rank: int
    direction: str
    is_hidden_entrant: bool


@dataclass(frozen=True)
class BuilderResult:
    """Deltas in new-rank order; valid iff the edit demoted the document below
    every other candidate in the pool."""

    deltas: list[RankDelta]
    edited_doc_id: str
    valid: bool


def rerank_with_edit(
    extended: RankedList,
    k: int,
    edited_doc_id: str,
    edited_body: str,
    query: Query,
    binding: RankerBinding,
    stats: CollectionStats,
) -> BuilderResult:
    """Re-rank the original top k+1 with the edited body substituted.

    ``extended`` is the original ranking taken to depth k+1 (it holds k
    entries when the corpus has exactly k documents, in which case there is
    no hidden entrant and validity means rank k).  An empty edited body is
    legal and scores 0.
    """
    pool = extended.entries
    if not any(e.doc_id == edited_doc_id and e.rank <= k for e in pool):
        raise DocumentNotInTopKError(edited_doc_id, k)
    edited_score = score_document(binding, stats, query, edited_body)
    rescored = [
        (e.doc_id, edited_score if e.doc_id == edited_doc_id else e.score, e.rank)
        for e in pool
    ]
    rescored.sort(key=lambda item: (-item[1], item[0]))

    deltas = []
    for new_rank, (doc_id, _, old_rank) in enumerate(rescored, start=1):
        if new_rank < old_rank:
            direction = DIRECTION_RAISED
        elif new_rank > old_rank:
            direction = DIRECTION_LOWERED
        else:
            direction = DIRECTION_UNCHANGED
        deltas.append(
            RankDelta(
                doc_id=doc_id,
                old_rank=old_rank,
                new_rank=new_rank,
                direction=direction,
                is_hidden_entrant=old_rank == k + 1,
            )
        )
    edited_new_rank = next(d.new_rank for d in deltas if d.doc_id == edited_doc_id)
    return BuilderResult(
        deltas=deltas,
        edited_doc_id=edited_doc_id,
        valid=edited_new_rank == len(pool),
    )
