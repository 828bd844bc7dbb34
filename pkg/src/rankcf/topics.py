"""Topic modeling over the current top-k documents.

LDA estimated by collapsed Gibbs sampling: the simplest estimator with an
exact determinism story.  The sweep is single-threaded by contract so that a
fixed seed gives bit-identical models across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Sequence

import numpy as np

from .corpus import Document
from .errors import EmptyVocabularyError, InvalidHyperparameterError, TopicIndexError
from .stopwords import DEFAULT_STOPWORDS

DEFAULT_TOPIC_COUNT = 5
DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 500
DEFAULT_TOP_TERMS = 10
MIN_TERM_COUNT = 2


@dataclass(frozen=True)
class TopicModel:
    """Smoothed count estimates after the final sweep.

    phi is topics x vocab, theta is documents x topics; every row of each
    sums to 1.
    """

    T: int
    vocab: list[str]
    phi: np.ndarray
    theta: np.ndarray
    seed: int
    iterations: int


class CollapsedGibbs:
    """Token-topic assignment state; ``sweep()`` reassigns every token once.

    Reassignment draws topic t with probability proportional to
    (n_dt + alpha) * (n_tw + beta) / (n_t + V*beta), with the current token
    excluded from all counts.
    """

    def __init__(
        self,
        doc_words: list[list[int]],
        topic_count: int,
        alpha: float,
        beta: float,
        vocab_size: int,
        seed: int,
    ):
        self.doc_words = doc_words
        self.T = topic_count
        self.alpha = alpha
        self.beta = beta
        self.V = vocab_size
        self.rng = Random(seed)
        self.total_tokens = sum(len(words) for words in doc_words)

        self.n_dt = [[0] * topic_count for _ in doc_words]
        self.n_tw = [[0] * vocab_size for _ in range(topic_count)]
        self.n_t = [0] * topic_count
        self.assignments = []
        for d, words in enumerate(doc_words):
            z_doc = []
            for w in words:
                t = self.rng.randrange(topic_count)
                z_doc.append(t)
                self.n_dt[d][t] += 1
                self.n_tw[t][w] += 1
                self.n_t[t] += 1
            self.assignments.append(z_doc)

    def sweep(self) -> None:
        beta_total = self.V * self.beta
        for d, words in enumerate(self.doc_words):
            n_dt = self.n_dt[d]
            z_doc = self.assignments[d]
            for i, w in enumerate(words):
                old = z_doc[i]
                n_dt[old] -= 1
                self.n_tw[old][w] -= 1
                self.n_t[old] -= 1

                cumulative = []
                total = 0.0
                for t in range(self.T):
                    total += (
                        (n_dt[t] + self.alpha)
                        * (self.n_tw[t][w] + self.beta)
                        / (self.n_t[t] + beta_total)
                    )
                    cumulative.append(total)
                u = self.rng.random() * total
                new = 0
                while cumulative[new] < u:
                    new += 1

                z_doc[i] = new
                n_dt[new] += 1
                self.n_tw[new][w] += 1
                self.n_t[new] += 1

    @property
    def assigned_total(self) -> int:
        return sum(self.n_t)

    def phi(self) -> np.ndarray:
        beta_total = self.V * self.beta
        return np.array(
            [
                [(self.n_tw[t][w] + self.beta) / (self.n_t[t] + beta_total) for w in range(self.V)]
                for t in range(self.T)
            ]
        )

    def theta(self) -> np.ndarray:
        alpha_total = self.T * self.alpha
        return np.array(
            [
                [
                    (self.n_dt[d][t] + self.alpha) / (len(words) + alpha_total)
                    for t in range(self.T)
                ]
                for d, words in enumerate(self.doc_words)
            ]
        )


def build_vocabulary(
    docs: Sequence[Document],
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
    min_term_count: int = MIN_TERM_COUNT,
) -> tuple[list[str], list[list[int]]]:
    """Stopword-filtered vocabulary (terms occurring >= min_term_count across
    the docs, sorted) and each document as a sequence of vocabulary ids."""
    counts: dict[str, int] = {}
    filtered = []
    for doc in docs:
        kept = [t for t in doc.tokens if t not in stopwords]
        filtered.append(kept)
        for t in kept:
            counts[t] = counts.get(t, 0) + 1
    vocab = sorted(t for t, c in counts.items() if c >= min_term_count)
    term_ids = {t: i for i, t in enumerate(vocab)}
    doc_words = [[term_ids[t] for t in kept if t in term_ids] for kept in filtered]
    return vocab, doc_words


def fit_lda(
    docs: Sequence[Document],
    topic_count: int = DEFAULT_TOPIC_COUNT,
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
) -> TopicModel:
    """Fit LDA on the given documents; alpha defaults to 50 / topic_count."""
    if topic_count < 1:
        raise InvalidHyperparameterError(f"topic count must be >= 1, got {topic_count}")
    if iterations < 1:
        raise InvalidHyperparameterError(f"iterations must be >= 1, got {iterations}")
    if alpha is None:
        alpha = 50.0 / topic_count
    if alpha <= 0 or beta <= 0:
        raise InvalidHyperparameterError("alpha and beta must be positive")

    vocab, doc_words = build_vocabulary(docs, stopwords)
    if not vocab:
        raise EmptyVocabularyError(
            "no terms survive stopword removal and the minimum-count filter"
        )
    state = CollapsedGibbs(doc_words, topic_count, alpha, beta, len(vocab), seed)
    for _ in range(iterations):
        state.sweep()
    return TopicModel(
        T=topic_count,
        vocab=vocab,
        phi=state.phi(),
        theta=state.theta(),
        seed=seed,
        iterations=iterations,
    )


def top_terms(model: TopicModel, topic: int, m: int = DEFAULT_TOP_TERMS) -> list[tuple[str, float]]:
    """The m highest-probability terms for a topic (ties: term ascending)."""
    if not 0 <= topic < model.T:
        raise TopicIndexError(f"topic index {topic} out of range for T={model.T}")
    pairs = sorted(
        zip(model.vocab, model.phi[topic]), key=lambda pair: (-pair[1], pair[0])
    )
    return [(term, float(prob)) for term, prob in pairs[:m]]
