"""Corpus ingestion, tokenization, and sentence segmentation.

The shared text substrate for the whole engine.  Everything here is
immutable after load and safe to share across threads.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .errors import (
    DuplicateIdError,
    EmptyBodyError,
    MalformedLineError,
    MissingFileError,
    UnknownDocumentError,
)

# Maximal runs of Unicode alphanumerics; underscores and punctuation separate.
_TOKEN_RE = re.compile(r"[^\W_]+")

_TERMINATORS = ".!?"

# Terminators directly after these tokens (or after any single letter) do not
# end a sentence.
DEFAULT_ABBREVIATIONS: frozenset[str] = frozenset(
    {"mr", "mrs", "dr", "vs", "etc", "e.g", "i.e"}
)


def tokenize(text: str) -> list[str]:
    """Lowercase terms: maximal alphanumeric runs, everything else separates.

    No stopword removal and no stemming; consumers that need either apply it
    themselves so explanation terms stay verbatim-quotable.
    """
    return _TOKEN_RE.findall(text.lower())


def normalize_whitespace(text: str) -> str:
    return " ".join(text.split())


@dataclass(frozen=True)
class Sentence:
    """One sentence of a document body, with its 0-based position."""

    index: int
    text: str
    tokens: list[str]


@dataclass(frozen=True)
class Query:
    raw: str
    tokens: list[str]
    term_set: frozenset[str]


def parse_query(raw: str) -> Query:
    tokens = tokenize(raw)
    return Query(raw=raw, tokens=tokens, term_set=frozenset(tokens))


@dataclass(frozen=True)
class Document:
    id: str
    body: str
    title: str | None
    sentences: list[Sentence]
    tokens: list[str]


def _is_guarded(body: str, i: int, abbreviations: frozenset[str]) -> bool:
    # Word immediately preceding body[i], back to the previous whitespace.
    j = i
    while j > 0 and not body[j - 1].isspace():
        j -= 1
    word = body[j:i].lower()
    if not word:
        return False
    if len(word) == 1 and word.isalpha():
        return True
    return word in abbreviations


def split_sentences(
    body: str, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS
) -> list[Sentence]:
    """Split a body at '.', '!' or '?' followed by whitespace or end of text.

    A terminator preceded by a single letter ("J. Smith") or a known
    abbreviation ("Dr.") does not split.  A body with no terminator is one
    sentence.  Sentence texts are whitespace-normalized, so joining them with
    single spaces reproduces the body up to whitespace normalization.
    """
    spans: list[str] = []
    start = 0
    n = len(body)
    for i, ch in enumerate(body):
        if ch not in _TERMINATORS:
            continue
        if i + 1 < n and not body[i + 1].isspace():
            continue
        if _is_guarded(body, i, abbreviations):
            continue
        spans.append(body[start : i + 1])
        start = i + 1
    if start < n:
        spans.append(body[start:])

    sentences: list[Sentence] = []
    for span in spans:
        text = normalize_whitespace(span)
        if not text:
            continue
        sentences.append(Sentence(index=len(sentences), text=text, tokens=tokenize(text)))
    return sentences


def make_document(
    doc_id: str,
    body: str,
    title: str | None = None,
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
) -> Document:
    """Build a Document with sentences and tokens derived from the body."""
    if not body.strip():
        raise EmptyBodyError(doc_id)
    return Document(
        id=doc_id,
        body=body,
        title=title,
        sentences=split_sentences(body, abbreviations),
        tokens=tokenize(body),
    )


class Corpus:
    """Immutable id-keyed document collection; iteration follows load order."""

    def __init__(self, documents: Iterable[Document]):
        self._docs: dict[str, Document] = {}
        for doc in documents:
            if doc.id in self._docs:
                raise DuplicateIdError(doc.id)
            self._docs[doc.id] = doc

    def __len__(self) -> int:
        return len(self._docs)

    def __iter__(self) -> Iterator[Document]:
        return iter(self._docs.values())

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._docs

    def get(self, doc_id: str) -> Document:
        try:
            return self._docs[doc_id]
        except KeyError:
            raise UnknownDocumentError(doc_id) from None

    @property
    def ids(self) -> list[str]:
        return list(self._docs)


def load_corpus(path: str | Path) -> Corpus:
    """Load a JSON-lines corpus: one object per line with ``id`` and ``body``
    (required) and ``title`` (optional).  Blank lines are skipped."""
    p = Path(path)
    if not p.is_file():
        raise MissingFileError(f"corpus file not found: {p}")
    documents: list[Document] = []
    with open(p, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedLineError(lineno, f"invalid JSON ({exc.msg})") from None
            if not isinstance(obj, dict):
                raise MalformedLineError(lineno, "expected a JSON object")
            if not isinstance(obj.get("id"), str):
                raise MalformedLineError(lineno, "missing or non-string 'id'")
            if not isinstance(obj.get("body"), str):
                raise MalformedLineError(lineno, "missing or non-string 'body'")
            title = obj.get("title")
            if title is not None and not isinstance(title, str):
                raise MalformedLineError(lineno, "'title' must be a string when present")
            documents.append(make_document(obj["id"], obj["body"], title))
    return Corpus(documents)
