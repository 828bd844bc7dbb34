"""Service endpoints: the boundary the CLI and web UI both consume.

Payload builders return plain dicts with a fixed key order; the FastAPI
routes and the CLI ``--json`` mode serialize the same dicts, so their bytes
are identical for equivalent requests.  Explanation endpoints re-run ranking
server-side from (corpus, query, k) so every response is re-verifiable and
the service stays stateless.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .builder import rerank_with_edit
from .cf_document import DocumentCaps, DocumentCfRequest, generate_document_counterfactuals
from .cf_instance import (
    VARIANT_COSINE_SAMPLED,
    VARIANT_EMBEDDING_NEAREST,
    ExternalEmbeddingProvider,
    InstanceCfRequest,
    embedding_counterfactual_instances,
    sampled_counterfactual_instances,
)
from .cf_query import QueryCaps, QueryCfRequest, generate_query_counterfactuals
from .corpus import load_corpus, parse_query
from .errors import EngineError, InvalidRequestError, UnknownCorpusError
from .ranking import CollectionStats, RankerBinding, RankingContext, context_for, score_document
from .topics import DEFAULT_TOP_TERMS, DEFAULT_TOPIC_COUNT, fit_lda, top_terms

# HTTP status per error code; anything not listed maps to 422.
ERROR_STATUS: dict[str, int] = {
    "missing_file": 404,
    "unknown_corpus": 404,
    "unknown_document": 404,
    "external_ranker_unreachable": 502,
    "external_ranker_timeout": 504,
    "external_ranker_malformed_response": 502,
    "embedding_provider_unreachable": 502,
    "internal": 500,
}


@dataclass(frozen=True)
class ApiError:
    code: str
    message: str
    http_status: int

    @classmethod
    def from_exception(cls, exc: Exception) -> "ApiError":
        if isinstance(exc, EngineError):
            return cls(exc.code, str(exc), ERROR_STATUS.get(exc.code, 422))
        return cls("internal", f"{type(exc).__name__}: {exc}", 500)

    def payload(self) -> dict:
        return {"code": self.code, "message": self.message}


@dataclass
class ServiceConfig:
    """Startup configuration; every registered corpus must load successfully."""

    corpora: dict[str, str | Path]
    ranker_endpoints: dict[str, str] = field(default_factory=dict)
    embedding_endpoints: dict[str, str] = field(default_factory=dict)
    host: str = "127.0.0.1"
    port: int = 8080
    document_caps: DocumentCaps = field(default_factory=DocumentCaps)
    query_caps: QueryCaps = field(default_factory=QueryCaps)
    request_timeout: float = 30.0
    ui_dir: str | Path | None = None


class ServiceState:
    """Per-corpus ranking contexts, built once at startup (fail fast)."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.contexts: dict[str, RankingContext] = {}
        for name, path in config.corpora.items():
            endpoint = config.ranker_endpoints.get(name)
            binding = (
                RankerBinding(kind="external", endpoint=endpoint, timeout=config.request_timeout)
                if endpoint
                else RankerBinding()
            )
            self.contexts[name] = context_for(load_corpus(path), binding)

    def context(self, name: str) -> RankingContext:
        try:
            return self.contexts[name]
        except KeyError:
            raise UnknownCorpusError(f"unknown corpus: {name!r}") from None

    def names(self) -> list[str]:
        return list(self.contexts)


# ---------------------------------------------------------------------------
# Payload builders (shared by the service routes and the CLI)
# ---------------------------------------------------------------------------


def corpora_payload(names: list[str]) -> dict:
    return {"corpora": names}


def index_payload(ctx: RankingContext) -> dict:
    return {
        "documents": ctx.stats.N,
        "terms": len(ctx.stats.df),
        "avg_doc_length": ctx.stats.avg_doc_length,
    }


def document_payload(ctx: RankingContext, doc_id: str) -> dict:
    doc = ctx.corpus.get(doc_id)
    return {
        "doc_id": doc.id,
        "title": doc.title,
        "body": doc.body,
        "sentences": [s.text for s in doc.sentences],
    }


def rank_payload(ctx: RankingContext, query_raw: str, k: int) -> dict:
    ranked = ctx.rank_top_k(parse_query(query_raw), k)
    return {
        "entries": [
            {
                "doc_id": e.doc_id,
                "title": ctx.corpus.get(e.doc_id).title,
                "score": e.score,
                "rank": e.rank,
            }
            for e in ranked.entries
        ]
    }


def document_explanations_payload(
    ctx: RankingContext,
    query_raw: str,
    k: int,
    doc_id: str,
    n: int,
    caps: DocumentCaps | None = None,
) -> dict:
    request = DocumentCfRequest(
        doc_id=doc_id, query=parse_query(query_raw), k=k, n=n, caps=caps or DocumentCaps()
    )
    result = generate_document_counterfactuals(request, ctx)
    sentences = ctx.corpus.get(doc_id).sentences
    return {
        "explanations": [
            {
                "removed_indices": list(p.removed),
                "removed_texts": [sentences[i].text for i in p.removed],
                "importance": p.importance,
                "new_rank": p.new_rank,
                "valid": p.valid,
            }
            for p in result.explanations
        ]
    }


def query_explanations_payload(
    ctx: RankingContext,
    query_raw: str,
    k: int,
    doc_id: str,
    n: int,
    threshold: int,
    caps: QueryCaps | None = None,
) -> dict:
    request = QueryCfRequest(
        doc_id=doc_id,
        query=parse_query(query_raw),
        k=k,
        threshold=threshold,
        n=n,
        caps=caps or QueryCaps(),
    )
    result = generate_query_counterfactuals(request, ctx)
    return {
        "explanations": [
            {
                "appended_terms": list(a.appended),
                "score": a.score,
                "augmented_query": a.augmented_query.raw,
                "new_rank": a.new_rank,
                "valid": a.valid,
            }
            for a in result.explanations
        ]
    }


def instance_explanations_payload(
    ctx: RankingContext,
    query_raw: str,
    k: int,
    doc_id: str,
    n: int,
    variant: str,
    s: int | None = None,
    seed: int = 0,
    embedding_endpoint: str | None = None,
) -> dict:
    request = InstanceCfRequest(
        doc_id=doc_id, query=parse_query(query_raw), k=k, n=n, variant=variant, s=s, seed=seed
    )
    if variant == VARIANT_COSINE_SAMPLED:
        explanations = sampled_counterfactual_instances(request, ctx)
    elif variant == VARIANT_EMBEDDING_NEAREST:
        provider = (
            ExternalEmbeddingProvider(embedding_endpoint) if embedding_endpoint else None
        )
        explanations = embedding_counterfactual_instances(request, ctx, provider)
    else:
        raise InvalidRequestError(f"unknown variant: {variant!r}")
    return {
        "explanations": [
            {
                "doc_id": e.doc_id,
                "title": ctx.corpus.get(e.doc_id).title,
                "body": ctx.corpus.get(e.doc_id).body,
                "similarity": e.similarity,
                "corpus_rank": e.corpus_rank,
            }
            for e in explanations
        ]
    }


def builder_payload(
    ctx: RankingContext, query_raw: str, k: int, doc_id: str, edited_body: str
) -> dict:
    ctx.corpus.get(doc_id)  # unknown ids fail before the ranking check
    query = parse_query(query_raw)
    extended = ctx.rank_top_k(query, k + 1)
    result = rerank_with_edit(extended, k, doc_id, edited_body, query, ctx.binding, ctx.stats)
    return {
        "deltas": [
            {
                "doc_id": d.doc_id,
                "old_rank": d.old_rank,
                "new_rank": d.new_rank,
                "direction": d.direction,
                "is_hidden_entrant": d.is_hidden_entrant,
            }
            for d in result.deltas
        ],
        "valid": result.valid,
    }


def topics_payload(
    ctx: RankingContext,
    query_raw: str,
    k: int,
    topic_count: int = DEFAULT_TOPIC_COUNT,
    seed: int = 0,
    term_count: int = DEFAULT_TOP_TERMS,
) -> dict:
    ranked = ctx.rank_top_k(parse_query(query_raw), k)
    docs = [ctx.corpus.get(doc_id) for doc_id in ranked.doc_ids()]
    model = fit_lda(docs, topic_count=topic_count, seed=seed)
    return {
        "topics": [
            {
                "index": t,
                "top_terms": [
                    {"term": term, "probability": prob}
                    for term, prob in top_terms(model, t, term_count)
                ],
            }
            for t in range(model.T)
        ]
    }


# ---------------------------------------------------------------------------
# Request bodies
# ---------------------------------------------------------------------------


class RankBody(BaseModel):
    corpus: str
    query: str
    k: int


class DocumentBody(BaseModel):
    corpus: str
    doc_id: str


class DocumentCapsBody(BaseModel):
    max_candidate_sentences: int | None = None
    max_removals: int | None = None
    max_evaluations: int | None = None


class QueryCapsBody(BaseModel):
    max_candidate_terms: int | None = None
    max_append: int | None = None
    max_evaluations: int | None = None


class ExplainDocumentBody(BaseModel):
    corpus: str
    query: str
    k: int
    doc_id: str
    n: int
    caps: DocumentCapsBody | None = None


class ExplainQueryBody(BaseModel):
    corpus: str
    query: str
    k: int
    doc_id: str
    n: int
    threshold: int
    caps: QueryCapsBody | None = None


class ExplainInstanceBody(BaseModel):
    corpus: str
    query: str
    k: int
    doc_id: str
    n: int
    variant: str
    s: int | None = None
    seed: int = 0


class BuilderBody(BaseModel):
    corpus: str
    query: str
    k: int
    doc_id: str
    edited_body: str


class TopicsBody(BaseModel):
    corpus: str
    query: str
    k: int
    T: int = DEFAULT_TOPIC_COUNT
    seed: int = 0


class ScoreDoc(BaseModel):
    id: str
    text: str


class ScoreBody(BaseModel):
    query: str
    docs: list[ScoreDoc]


def _merge_document_caps(defaults: DocumentCaps, body: DocumentCapsBody | None) -> DocumentCaps:
    if body is None:
        return defaults
    return DocumentCaps(
        max_candidate_sentences=body.max_candidate_sentences or defaults.max_candidate_sentences,
        max_removals=body.max_removals or defaults.max_removals,
        max_evaluations=body.max_evaluations or defaults.max_evaluations,
    )


def _merge_query_caps(defaults: QueryCaps, body: QueryCapsBody | None) -> QueryCaps:
    if body is None:
        return defaults
    return QueryCaps(
        max_candidate_terms=body.max_candidate_terms or defaults.max_candidate_terms,
        max_append=body.max_append or defaults.max_append,
        max_evaluations=body.max_evaluations or defaults.max_evaluations,
    )


# ---------------------------------------------------------------------------
# Applications
# ---------------------------------------------------------------------------


def create_app(config: ServiceConfig) -> FastAPI:
    """Build the explanation service; corpora load (and fail) at startup."""
    state = ServiceState(config)
    app = FastAPI(title="rankcf", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    _install_error_handlers(app)

    @app.get("/corpora")
    def corpora():
        return corpora_payload(state.names())

    @app.post("/rank")
    def rank(body: RankBody):
        return rank_payload(state.context(body.corpus), body.query, body.k)

    @app.post("/document")
    def document(body: DocumentBody):
        return document_payload(state.context(body.corpus), body.doc_id)

    @app.post("/explanations/document")
    def explain_document(body: ExplainDocumentBody):
        return document_explanations_payload(
            state.context(body.corpus),
            body.query,
            body.k,
            body.doc_id,
            body.n,
            _merge_document_caps(config.document_caps, body.caps),
        )

    @app.post("/explanations/query")
    def explain_query(body: ExplainQueryBody):
        return query_explanations_payload(
            state.context(body.corpus),
            body.query,
            body.k,
            body.doc_id,
            body.n,
            body.threshold,
            _merge_query_caps(config.query_caps, body.caps),
        )

    @app.post("/explanations/instance")
    def explain_instance(body: ExplainInstanceBody):
        return instance_explanations_payload(
            state.context(body.corpus),
            body.query,
            body.k,
            body.doc_id,
            body.n,
            body.variant,
            body.s,
            body.seed,
            config.embedding_endpoints.get(body.corpus),
        )

    @app.post("/builder/rerank")
    def builder_rerank(body: BuilderBody):
        return builder_payload(
            state.context(body.corpus), body.query, body.k, body.doc_id, body.edited_body
        )

    @app.post("/topics")
    def topics(body: TopicsBody):
        return topics_payload(state.context(body.corpus), body.query, body.k, body.T, body.seed)

    if config.ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(config.ui_dir), html=True), name="ui")

    return app


def create_score_app(stats: CollectionStats) -> FastAPI:
    """Expose the built-in BM25 ranker behind the external-ranker protocol."""
    app = FastAPI(title="rankcf-score", version="0.1.0")
    _install_error_handlers(app)
    binding = RankerBinding()

    @app.post("/score")
    def score(body: ScoreBody):
        query = parse_query(body.query)
        return {
            "scores": [score_document(binding, stats, query, d.text) for d in body.docs]
        }

    return app


def _install_error_handlers(app: FastAPI) -> None:
    @app.exception_handler(EngineError)
    def engine_error(_, exc: EngineError):
        err = ApiError.from_exception(exc)
        return JSONResponse(status_code=err.http_status, content=err.payload())

    @app.exception_handler(RequestValidationError)
    def validation_error(_, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"code": "invalid_request", "message": str(exc.errors())},
        )

    @app.exception_handler(Exception)
    def unexpected_error(_, exc: Exception):
        err = ApiError.from_exception(exc)
        return JSONResponse(status_code=err.http_status, content=err.payload())


def serve(config: ServiceConfig) -> None:
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port)
