"""Engine error hierarchy.

Every failure the engine can raise is an :class:`EngineError` subclass with a
stable machine-readable ``code``.  The service layer maps codes to HTTP
statuses; the CLI maps any ``EngineError`` to exit code 2.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine failures."""

    code = "internal"


class MissingFileError(EngineError):
    code = "missing_file"


class MalformedLineError(EngineError):
    code = "malformed_line"

    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number


class DuplicateIdError(EngineError):
    code = "duplicate_id"

    def __init__(self, doc_id: str):
        super().__init__(f"duplicate document id: {doc_id!r}")
        self.doc_id = doc_id


class EmptyBodyError(EngineError):
    code = "empty_body"

    def __init__(self, doc_id: str):
        super().__init__(f"document {doc_id!r} has an empty body")
        self.doc_id = doc_id


class EmptyCorpusError(EngineError):
    code = "empty_corpus"


class UnknownCorpusError(EngineError):
    code = "unknown_corpus"


class UnknownDocumentError(EngineError):
    code = "unknown_document"

    def __init__(self, doc_id: str):
        super().__init__(f"unknown document id: {doc_id!r}")
        self.doc_id = doc_id


class EmptyQueryError(EngineError):
    code = "empty_query"


class InvalidRequestError(EngineError):
    code = "invalid_request"


class DocumentNotInTopKError(EngineError):
    code = "doc_not_in_top_k"

    def __init__(self, doc_id: str, k: int):
        super().__init__(f"document {doc_id!r} is not in the top-{k} ranking")
        self.doc_id = doc_id
        self.k = k


class SentenceIndexError(EngineError):
    code = "index_out_of_range"


class EmptyCandidatePoolError(EngineError):
    code = "empty_candidate_pool"


class TermNotInDocumentError(EngineError):
    code = "term_not_in_document"

    def __init__(self, term: str, doc_id: str):
        super().__init__(f"term {term!r} does not occur in document {doc_id!r}")
        self.term = term


class NoNonRelevantDocumentsError(EngineError):
    code = "no_non_relevant_documents"


class ZeroVectorError(EngineError):
    code = "zero_vector"


class DimensionMismatchError(EngineError):
    code = "dimension_mismatch"


class EmbeddingProviderUnreachableError(EngineError):
    code = "embedding_provider_unreachable"


class ExternalRankerUnreachableError(EngineError):
    code = "external_ranker_unreachable"


class ExternalRankerTimeoutError(EngineError):
    code = "external_ranker_timeout"


class ExternalRankerMalformedResponseError(EngineError):
    code = "external_ranker_malformed_response"


class EmptyVocabularyError(EngineError):
    code = "empty_vocabulary"


class InvalidHyperparameterError(EngineError):
    code = "invalid_hyperparameter"


class TopicIndexError(EngineError):
    code = "topic_index_out_of_range"
