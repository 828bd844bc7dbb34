"""Command-line interface mirroring the service endpoints.

``--json`` prints exactly the bytes the service would respond with for the
equivalent request.  Exit codes: 0 success, 1 usage error, 2 engine error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import api
from .cf_document import DocumentCaps
from .cf_query import QueryCaps
from .corpus import load_corpus
from .errors import EngineError
from .ranking import RankerBinding, RankingContext, context_for


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def dumps_payload(payload: dict) -> str:
    # Must match starlette's JSONResponse rendering byte for byte.
    return json.dumps(payload, ensure_ascii=False, allow_nan=False, separators=(",", ":"))


def _build_parser() -> _Parser:
    parser = _Parser(prog="rankcf", description="Counterfactual explanations for document rankings.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    corpus_flags = _Parser(add_help=False)
    corpus_flags.add_argument("--corpus", required=True, help="path to a JSON-lines corpus file")
    corpus_flags.add_argument("--ranker-endpoint", help="score documents via an external ranker")
    corpus_flags.add_argument("--json", action="store_true", help="emit the service payload")

    query_flags = _Parser(add_help=False)
    query_flags.add_argument("--query", required=True)
    query_flags.add_argument("--k", type=int, required=True)

    doc_flags = _Parser(add_help=False)
    doc_flags.add_argument("--doc-id", required=True)

    p = sub.add_parser("index", parents=[corpus_flags], help="build the index and report its statistics")

    p = sub.add_parser("rank", parents=[corpus_flags, query_flags], help="rank the top-k documents")

    p = sub.add_parser(
        "explain-doc", parents=[corpus_flags, query_flags, doc_flags],
        help="minimal sentence removals that demote the document below rank k",
    )
    p.add_argument("--n", type=int, default=1, help="number of explanations")
    p.add_argument("--max-candidate-sentences", type=int)
    p.add_argument("--max-removals", type=int)
    p.add_argument("--max-evaluations", type=int)

    p = sub.add_parser(
        "explain-query", parents=[corpus_flags, query_flags, doc_flags],
        help="minimal query augmentations that promote the document above a rank threshold",
    )
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--threshold", type=int, required=True)
    p.add_argument("--max-candidate-terms", type=int)
    p.add_argument("--max-append", type=int)
    p.add_argument("--max-evaluations", type=int)

    p = sub.add_parser(
        "explain-instance", parents=[corpus_flags, query_flags, doc_flags],
        help="similar but non-relevant corpus documents",
    )
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--variant", choices=["cosine_sampled", "embedding_nearest"],
                   default="cosine_sampled")
    p.add_argument("--samples", type=int, help="sample size for cosine_sampled (default: all non-relevant)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--embedding-endpoint", help="external embedding provider for embedding_nearest")

    p = sub.add_parser(
        "builder-rerank", parents=[corpus_flags, query_flags, doc_flags],
        help="re-rank an edited document body against the original top k+1",
    )
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--edited-body", help="replacement body text")
    group.add_argument("--edited-file", help="file containing the replacement body")

    p = sub.add_parser("topics", parents=[corpus_flags, query_flags],
                       help="LDA topics across the top-k documents")
    p.add_argument("--topic-count", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("serve", help="run the explanation service")
    p.add_argument("--corpus", action="append", required=True, metavar="NAME=PATH",
                   help="corpus to register (repeatable); bare PATH uses the file stem as name")
    p.add_argument("--ranker-endpoint", help="external ranker used for every corpus")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--ui-dir", help="directory of web UI static files to mount at /ui")

    return parser


def _context(args) -> RankingContext:
    binding = (
        RankerBinding(kind="external", endpoint=args.ranker_endpoint)
        if args.ranker_endpoint
        else RankerBinding()
    )
    return context_for(load_corpus(args.corpus), binding)


def _doc_caps(args) -> DocumentCaps:
    defaults = DocumentCaps()
    return DocumentCaps(
        max_candidate_sentences=args.max_candidate_sentences or defaults.max_candidate_sentences,
        max_removals=args.max_removals or defaults.max_removals,
        max_evaluations=args.max_evaluations or defaults.max_evaluations,
    )


def _query_caps(args) -> QueryCaps:
    defaults = QueryCaps()
    return QueryCaps(
        max_candidate_terms=args.max_candidate_terms or defaults.max_candidate_terms,
        max_append=args.max_append or defaults.max_append,
        max_evaluations=args.max_evaluations or defaults.max_evaluations,
    )


def _run_command(args) -> dict:
    if args.command == "index":
        return api.index_payload(_context(args))
    if args.command == "rank":
        return api.rank_payload(_context(args), args.query, args.k)
    if args.command == "explain-doc":
        return api.document_explanations_payload(
            _context(args), args.query, args.k, args.doc_id, args.n, _doc_caps(args)
        )
    if args.command == "explain-query":
        return api.query_explanations_payload(
            _context(args), args.query, args.k, args.doc_id, args.n, args.threshold,
            _query_caps(args),
        )
    if args.command == "explain-instance":
        return api.instance_explanations_payload(
            _context(args), args.query, args.k, args.doc_id, args.n, args.variant,
            args.samples, args.seed, args.embedding_endpoint,
        )
    if args.command == "builder-rerank":
        body = args.edited_body
        if body is None:
            body = Path(args.edited_file).read_text(encoding="utf-8")
        return api.builder_payload(_context(args), args.query, args.k, args.doc_id, body)
    if args.command == "topics":
        return api.topics_payload(_context(args), args.query, args.k, args.topic_count, args.seed)
    raise AssertionError(f"unhandled command: {args.command}")


def _render_table(command: str, payload: dict) -> str:
    lines: list[str] = []
    if command == "index":
        lines.append(f"documents       {payload['documents']}")
        lines.append(f"terms           {payload['terms']}")
        lines.append(f"avg doc length  {payload['avg_doc_length']:.3f}")
    elif command == "rank":
        lines.append(f"{'rank':>4}  {'score':>12}  {'doc_id':<12}  title")
        for e in payload["entries"]:
            lines.append(
                f"{e['rank']:>4}  {e['score']:>12.6f}  {e['doc_id']:<12}  {e['title'] or ''}"
            )
    elif command == "explain-doc":
        if not payload["explanations"]:
            lines.append("no valid counterfactual within the enumeration caps")
        for i, ex in enumerate(payload["explanations"], 1):
            indices = ",".join(str(j) for j in ex["removed_indices"])
            lines.append(
                f"#{i}: remove sentences [{indices}] "
                f"(importance {ex['importance']}) -> rank {ex['new_rank']}"
            )
            for text in ex["removed_texts"]:
                lines.append(f"    - {text}")
    elif command == "explain-query":
        if not payload["explanations"]:
            lines.append("no valid augmentation within the enumeration caps")
        for i, ex in enumerate(payload["explanations"], 1):
            terms = " ".join(ex["appended_terms"])
            lines.append(
                f"#{i}: append '{terms}' (tf-idf {ex['score']:.4f}) -> rank {ex['new_rank']}"
                f"  [{ex['augmented_query']}]"
            )
    elif command == "explain-instance":
        for i, ex in enumerate(payload["explanations"], 1):
            lines.append(
                f"#{i}: {ex['doc_id']} similarity {ex['similarity']:.4f} "
                f"(corpus rank {ex['corpus_rank']}) {ex['title'] or ''}"
            )
            lines.append(f"    {ex['body']}")
    elif command == "builder-rerank":
        for d in payload["deltas"]:
            marker = {"raised": "^", "lowered": "v", "unchanged": "="}[d["direction"]]
            entrant = " [+]" if d["is_hidden_entrant"] else ""
            lines.append(f"{d['old_rank']:>3} -> {d['new_rank']:>3} {marker} {d['doc_id']}{entrant}")
        lines.append("valid counterfactual" if payload["valid"] else "not a valid counterfactual")
    elif command == "topics":
        for topic in payload["topics"]:
            terms = "  ".join(
                f"{t['term']}({t['probability']:.3f})" for t in topic["top_terms"]
            )
            lines.append(f"topic {topic['index']}: {terms}")
    return "\n".join(lines)


def _parse_corpus_registry(specs: list[str]) -> dict[str, str]:
    corpora = {}
    for spec in specs:
        if "=" in spec:
            name, path = spec.split("=", 1)
        else:
            name, path = Path(spec).stem, spec
        corpora[name] = path
    return corpora


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1

    try:
        if args.command == "serve":
            config = api.ServiceConfig(
                corpora=_parse_corpus_registry(args.corpus),
                ranker_endpoints=(
                    {name: args.ranker_endpoint for name in _parse_corpus_registry(args.corpus)}
                    if args.ranker_endpoint
                    else {}
                ),
                host=args.host,
                port=args.port,
                ui_dir=args.ui_dir,
            )
            api.serve(config)
            return 0
        payload = _run_command(args)
    except EngineError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 2

    if args.json:
        print(dumps_payload(payload))
    else:
        print(_render_table(args.command, payload))
    return 0


if __name__ == "__main__":
    sys.exit(main())
