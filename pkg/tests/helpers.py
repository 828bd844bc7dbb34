"""Random fixture generators shared across test modules."""

from random import Random

from rankcf.corpus import Corpus, make_document

WORDS = [
    "apple", "breeze", "candle", "drift", "ember", "fable", "grove",
    "harbor", "inkwell", "jolt", "kernel", "lantern", "meadow", "nectar",
    "orchid",
]


def random_corpus(
    rng: Random,
    n_docs: int | None = None,
    max_sentences: int = 6,
    vocab: list[str] = WORDS,
) -> Corpus:
    if n_docs is None:
        n_docs = rng.randint(3, 10)
    docs = []
    for i in range(n_docs):
        sentences = []
        for _ in range(rng.randint(1, max_sentences)):
            words = [rng.choice(vocab) for _ in range(rng.randint(3, 8))]
            sentences.append(" ".join(words) + ".")
        docs.append(make_document(f"doc{i:02d}", " ".join(sentences)))
    return Corpus(docs)


def random_query_text(rng: Random, vocab: list[str] = WORDS, max_terms: int = 3) -> str:
    return " ".join(rng.choice(vocab) for _ in range(rng.randint(1, max_terms)))
