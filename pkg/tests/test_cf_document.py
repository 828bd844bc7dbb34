from itertools import combinations
from random import Random

import pytest

from rankcf.cf_document import (
    DocumentCaps,
    DocumentCfRequest,
    apply_perturbation,
    enumerate_candidates,
    generate_document_counterfactuals,
    sentence_importance,
)
from rankcf.corpus import Corpus, make_document, parse_query
from rankcf.errors import DocumentNotInTopKError, SentenceIndexError
from rankcf.ranking import RankerBinding, context_for, score_document

from helpers import random_corpus, random_query_text

BUILTIN = RankerBinding()


def exhaustive_valid_sizes(ctx, query, doc, k):
    """Oracle: for every non-empty sentence subset, re-rank the document with
    the subset removed via an independent full re-sort; return sizes of the
    valid (rank > k) subsets."""
    m = len(doc.sentences)
    sizes = []
    for size in range(1, m + 1):
        for combo in combinations(range(m), size):
            text = " ".join(s.text for i, s in enumerate(doc.sentences) if i not in combo)
            scores = {
                d.id: score_document(
                    BUILTIN, ctx.stats, query, text if d.id == doc.id else d.body
                )
                for d in ctx.corpus
            }
            order = sorted(scores, key=lambda i: (-scores[i], i))
            if order.index(doc.id) + 1 > k:
                sizes.append(size)
    return sizes


class TestSentenceImportance:
    def test_counts_occurrences(self):
        doc = make_document("d", "The covid outbreak began")
        q = parse_query("covid outbreak")
        assert sentence_importance(doc.sentences[0], q) == 2

    def test_no_overlap(self):
        doc = make_document("d", "Nothing relevant here")
        assert sentence_importance(doc.sentences[0], parse_query("covid outbreak")) == 0

    def test_multiplicity(self):
        doc = make_document("d", "covid covid")
        q = parse_query("covid outbreak")
        assert sentence_importance(doc.sentences[0], q) == 2
        assert sentence_importance(doc.sentences[0], q, count_distinct_terms=True) == 1


class TestEnumerateCandidates:
    def test_stated_order(self):
        order = list(enumerate_candidates(3, [2, 0, 2], DocumentCaps()))
        assert order == [(0,), (2,), (1,), (0, 2), (0, 1), (1, 2), (0, 1, 2)]

    def test_single_sentence(self):
        assert list(enumerate_candidates(1, [5], DocumentCaps())) == [(0,)]

    def test_matches_brute_force_sort(self):
        rng = Random(5)
        for _ in range(20):
            m = 6
            importance = [rng.randint(0, 4) for _ in range(m)]
            caps = DocumentCaps(max_candidate_sentences=m, max_removals=m, max_evaluations=10_000)
            got = list(enumerate_candidates(m, importance, caps))
            subsets = [
                combo
                for size in range(1, m + 1)
                for combo in combinations(range(m), size)
            ]
            expected = sorted(
                subsets, key=lambda c: (len(c), -sum(importance[i] for i in c), c)
            )
            assert got == expected

    def test_candidate_sentence_cap_keeps_highest_importance(self):
        caps = DocumentCaps(max_candidate_sentences=2, max_removals=2)
        got = list(enumerate_candidates(4, [1, 3, 3, 0], caps))
        # Sentences 1 and 2 survive the cap (importance 3, tie by index).
        assert got == [(1,), (2,), (1, 2)]

    def test_emission_budget(self):
        caps = DocumentCaps(max_evaluations=4)
        assert len(list(enumerate_candidates(5, [0] * 5, caps))) == 4

    def test_max_removals_cap(self):
        caps = DocumentCaps(max_removals=1)
        assert list(enumerate_candidates(3, [0, 0, 0], caps)) == [(0,), (1,), (2,)]


class TestApplyPerturbation:
    def test_identity(self):
        doc = make_document("d", "One. Two. Three.")
        assert apply_perturbation(doc, ()) == "One. Two. Three."

    def test_remove_all(self):
        doc = make_document("d", "One. Two.")
        assert apply_perturbation(doc, (0, 1)) == ""

    def test_remove_first(self):
        doc = make_document("d", "One. Two. Three.")
        assert apply_perturbation(doc, (0,)) == "Two. Three."

    def test_out_of_range(self):
        doc = make_document("d", "One. Two.")
        with pytest.raises(SentenceIndexError):
            apply_perturbation(doc, (5,))


class TestGenerate:
    def test_single_sentence_doc_forced_removal(self):
        corpus = Corpus(
            [
                make_document("a", "covid outbreak news"),
                make_document("b", "covid story"),
                make_document("c", "outbreak story"),
            ]
        )
        ctx = context_for(corpus)
        request = DocumentCfRequest(doc_id="a", query=parse_query("covid outbreak"), k=1)
        result = generate_document_counterfactuals(request, ctx)
        assert len(result.explanations) == 1
        assert result.explanations[0].removed == (0,)
        assert result.explanations[0].valid

    def test_not_in_top_k(self, articles_ctx):
        request = DocumentCfRequest(doc_id="d06", query=parse_query("covid outbreak"), k=3)
        with pytest.raises(DocumentNotInTopKError):
            generate_document_counterfactuals(request, articles_ctx)

    def test_no_valid_counterfactual_returns_empty_with_flag(self):
        # Single query-term doc vs. all-zero peers: even an empty body keeps
        # rank 1 by the doc-id tie-break, so no removal can demote it.
        corpus = Corpus(
            [
                make_document("a", "covid news"),
                make_document("b", "weather report"),
                make_document("c", "sports recap"),
            ]
        )
        ctx = context_for(corpus)
        request = DocumentCfRequest(doc_id="a", query=parse_query("covid"), k=1)
        result = generate_document_counterfactuals(request, ctx)
        assert result.explanations == []
        assert result.exhausted

    def test_first_explanation_is_minimal_against_exhaustive_oracle(self):
        rng = Random(13)
        checked = 0
        while checked < 15:
            corpus = random_corpus(rng, max_sentences=5)
            ctx = context_for(corpus)
            query = parse_query(random_query_text(rng, max_terms=2))
            k = rng.choice([2, 3])
            ranked = ctx.rank_top_k(query, k)
            if not ranked.entries:
                continue
            doc_id = rng.choice(ranked.doc_ids())
            doc = ctx.corpus.get(doc_id)
            caps = DocumentCaps(
                max_candidate_sentences=len(doc.sentences),
                max_removals=len(doc.sentences),
            )
            request = DocumentCfRequest(doc_id=doc_id, query=query, k=k, n=3, caps=caps)
            result = generate_document_counterfactuals(request, ctx)
            oracle_sizes = exhaustive_valid_sizes(ctx, query, doc, k)
            if oracle_sizes:
                assert result.explanations, f"oracle found sizes {oracle_sizes}"
                assert len(result.explanations[0].removed) == min(oracle_sizes)
            else:
                assert not result.explanations
            sizes = [len(p.removed) for p in result.explanations]
            assert sizes == sorted(sizes)
            checked += 1

    def test_explanations_reverify(self, articles_ctx):
        query = parse_query("covid outbreak")
        request = DocumentCfRequest(doc_id="d02", query=query, k=3, n=3)
        result = generate_document_counterfactuals(request, articles_ctx)
        assert result.explanations
        doc = articles_ctx.corpus.get("d02")
        for p in result.explanations:
            assert p.valid and p.new_rank > 3
            text = apply_perturbation(doc, p.removed)
            assert articles_ctx.rank_of_substitute(query, "d02", text) == p.new_rank

    def test_planted_misinformation_doc_demoted_by_its_two_query_sentences(self, articles_ctx):
        # d02 mentions both query terms in its first and last sentences
        # (importance 2 each); removing that pair is the smallest valid
        # perturbation, confirmed by the exhaustive oracle.
        query = parse_query("covid outbreak")
        doc = articles_ctx.corpus.get("d02")
        assert [sentence_importance(s, query) for s in doc.sentences] == [2, 0, 0, 2]
        request = DocumentCfRequest(doc_id="d02", query=query, k=3)
        result = generate_document_counterfactuals(request, articles_ctx)
        first = result.explanations[0]
        assert first.removed == (0, 3)
        assert first.importance == 4
        assert min(exhaustive_valid_sizes(articles_ctx, query, doc, 3)) == 2

    def test_determinism(self, articles_ctx):
        query = parse_query("covid outbreak")
        request = DocumentCfRequest(doc_id="d02", query=query, k=3, n=5)
        first = generate_document_counterfactuals(request, articles_ctx)
        second = generate_document_counterfactuals(request, articles_ctx)
        assert first == second

    def test_budget_bounds_evaluations(self, articles_ctx):
        query = parse_query("covid outbreak")
        caps = DocumentCaps(max_evaluations=3)
        request = DocumentCfRequest(doc_id="d02", query=query, k=3, n=50, caps=caps)
        result = generate_document_counterfactuals(request, articles_ctx)
        assert result.evaluations <= 3

    def test_prune_supersets(self, articles_ctx):
        query = parse_query("covid outbreak")
        request = DocumentCfRequest(
            doc_id="d02", query=query, k=3, n=10, prune_supersets=True
        )
        result = generate_document_counterfactuals(request, articles_ctx)
        found = [set(p.removed) for p in result.explanations]
        for i, later in enumerate(found):
            for earlier in found[:i]:
                assert not earlier <= later
