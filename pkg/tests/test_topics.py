from collections import Counter
from random import Random

import numpy as np
import pytest

from rankcf.corpus import make_document
from rankcf.errors import EmptyVocabularyError, InvalidHyperparameterError, TopicIndexError
from rankcf.stopwords import DEFAULT_STOPWORDS
from rankcf.topics import CollapsedGibbs, build_vocabulary, fit_lda, top_terms


def synthetic_two_topic_docs(n_docs=20, tokens_per_doc=50, seed=0):
    """Docs drawn from two disjoint 25-word vocabularies, alternating by parity."""
    rng = Random(seed)
    half_a = [f"alpha{i:02d}" for i in range(25)]
    half_b = [f"beta{i:02d}" for i in range(25)]
    docs, labels = [], []
    for i in range(n_docs):
        vocab = half_a if i % 2 == 0 else half_b
        words = [rng.choice(vocab) for _ in range(tokens_per_doc)]
        docs.append(make_document(f"s{i:02d}", " ".join(words)))
        labels.append(i % 2)
    return docs, labels, set(half_a), set(half_b)


def dominant_topic_purity(model, labels):
    dominant = [int(np.argmax(row)) for row in model.theta]
    direct = sum(1 for d, l in zip(dominant, labels) if d == l)
    flipped = sum(1 for d, l in zip(dominant, labels) if d == 1 - l)
    return max(direct, flipped) / len(labels)


class TestBuildVocabulary:
    def test_stopwords_and_rare_terms_removed(self):
        docs = [
            make_document("a", "the covid spread and covid grew"),
            make_document("b", "unique the word"),
        ]
        vocab, doc_words = build_vocabulary(docs)
        assert "the" not in vocab and "and" not in vocab
        assert "unique" not in vocab  # occurs once, below the min count
        assert "covid" in vocab

    def test_doc_word_ids_index_vocab(self):
        docs = [make_document("a", "covid covid outbreak outbreak")]
        vocab, doc_words = build_vocabulary(docs)
        assert [vocab[i] for i in doc_words[0]] == ["covid", "covid", "outbreak", "outbreak"]


class TestFitLda:
    def test_single_topic_degeneracy(self):
        docs = [
            make_document("a", "covid covid outbreak hospital hospital"),
            make_document("b", "covid outbreak outbreak clinic clinic"),
        ]
        model = fit_lda(docs, topic_count=1, iterations=5, seed=0)
        assert all(row[0] == 1.0 for row in model.theta)
        # Single topic: phi is just the smoothed corpus term frequencies.
        _, doc_words = build_vocabulary(docs)
        counts = Counter(w for words in doc_words for w in words)
        total = sum(counts.values())
        V = len(model.vocab)
        for w in range(V):
            expected = (counts[w] + 0.01) / (total + V * 0.01)
            assert model.phi[0][w] == pytest.approx(expected, abs=1e-12)

    def test_seeded_bit_determinism(self):
        docs, _, _, _ = synthetic_two_topic_docs()
        a = fit_lda(docs, topic_count=2, iterations=30, seed=9)
        b = fit_lda(docs, topic_count=2, iterations=30, seed=9)
        assert np.array_equal(a.phi, b.phi)
        assert np.array_equal(a.theta, b.theta)

    def test_rows_normalized(self):
        docs, _, _, _ = synthetic_two_topic_docs()
        model = fit_lda(docs, topic_count=3, iterations=20, seed=1)
        assert np.allclose(model.phi.sum(axis=1), 1.0, atol=1e-9)
        assert np.allclose(model.theta.sum(axis=1), 1.0, atol=1e-9)
        assert (model.phi >= 0).all() and (model.theta >= 0).all()

    def test_two_disjoint_topics_recovered(self):
        docs, labels, _, _ = synthetic_two_topic_docs()
        model = fit_lda(docs, topic_count=2, iterations=200, seed=0)
        assert dominant_topic_purity(model, labels) >= 0.9

    def test_assignment_conservation_after_every_sweep(self):
        docs, _, _, _ = synthetic_two_topic_docs(n_docs=6, tokens_per_doc=30)
        vocab, doc_words = build_vocabulary(docs)
        state = CollapsedGibbs(doc_words, 2, alpha=25.0, beta=0.01, vocab_size=len(vocab), seed=3)
        total = sum(len(words) for words in doc_words)
        assert state.assigned_total == total
        for _ in range(10):
            state.sweep()
            assert state.assigned_total == total
            assert sum(sum(row) for row in state.n_tw) == total
            assert sum(sum(row) for row in state.n_dt) == total

    def test_empty_vocabulary(self):
        docs = [make_document("a", "the and of"), make_document("b", "once only")]
        with pytest.raises(EmptyVocabularyError):
            fit_lda(docs, topic_count=2, iterations=5)

    def test_invalid_hyperparameters(self):
        docs = [make_document("a", "covid covid")]
        with pytest.raises(InvalidHyperparameterError):
            fit_lda(docs, topic_count=0)
        with pytest.raises(InvalidHyperparameterError):
            fit_lda(docs, topic_count=2, iterations=0)
        with pytest.raises(InvalidHyperparameterError):
            fit_lda(docs, topic_count=2, beta=-1.0)


class TestTopTerms:
    def test_m_beyond_vocab_returns_everything(self):
        docs = [make_document("a", "covid covid outbreak outbreak")]
        model = fit_lda(docs, topic_count=1, iterations=5)
        assert len(top_terms(model, 0, m=100)) == len(model.vocab)

    def test_single_topic_head_is_most_frequent_term(self):
        docs = [
            make_document("a", "covid covid covid outbreak the the the the"),
            make_document("b", "covid outbreak outbreak"),
        ]
        model = fit_lda(docs, topic_count=1, iterations=5)
        assert top_terms(model, 0, m=1)[0][0] == "covid"
        assert "the" not in [t for t, _ in top_terms(model, 0, m=10)]

    def test_descending_probability(self):
        docs, _, _, _ = synthetic_two_topic_docs()
        model = fit_lda(docs, topic_count=2, iterations=50, seed=2)
        probs = [p for _, p in top_terms(model, 0, m=10)]
        assert probs == sorted(probs, reverse=True)

    def test_synthetic_topics_draw_terms_from_their_half(self):
        docs, labels, half_a, half_b = synthetic_two_topic_docs()
        model = fit_lda(docs, topic_count=2, iterations=200, seed=0)
        for t in range(2):
            terms = [term for term, _ in top_terms(model, t, m=10)]
            from_a = sum(1 for term in terms if term in half_a)
            assert max(from_a, len(terms) - from_a) >= 9

    def test_index_out_of_range(self):
        docs = [make_document("a", "covid covid")]
        model = fit_lda(docs, topic_count=1, iterations=2)
        with pytest.raises(TopicIndexError):
            top_terms(model, 1)
