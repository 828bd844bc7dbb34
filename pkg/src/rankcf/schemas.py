"""Published JSON Schemas for every service response payload.

CLI ``--json`` output is byte-identical to the corresponding service payload,
so both validate against the same schema.
"""

from __future__ import annotations

_SCHEMA_DIALECT = "https://json-schema.org/draft/2020-12/schema"


def _obj(properties: dict, required: list[str]) -> dict:
    return {
        "type": "object",
        "properties": properties,
        "required": required,
        "additionalProperties": False,
    }


CORPORA_SCHEMA = {
    "$schema": _SCHEMA_DIALECT,
    **_obj({"corpora": {"type": "array", "items": {"type": "string"}}}, ["corpora"]),
}

RANK_SCHEMA = {
    "$schema": _SCHEMA_DIALECT,
    **_obj(
        {
            "entries": {
                "type": "array",
                "items": _obj(
                    {
                        "doc_id": {"type": "string"},
                        "title": {"type": ["string", "null"]},
                        "score": {"type": "number"},
                        "rank": {"type": "integer", "minimum": 1},
                    },
                    ["doc_id", "title", "score", "rank"],
                ),
            }
        },
        ["entries"],
    ),
}

DOCUMENT_EXPLANATIONS_SCHEMA = {
    "$schema": _SCHEMA_DIALECT,
    **_obj(
        {
            "explanations": {
                "type": "array",
                "items": _obj(
                    {
                        "removed_indices": {
                            "type": "array",
                            "items": {"type": "integer", "minimum": 0},
                        },
                        "removed_texts": {"type": "array", "items": {"type": "string"}},
                        "importance": {"type": "integer", "minimum": 0},
                        "new_rank": {"type": "integer", "minimum": 1},
                        "valid": {"type": "boolean"},
                    },
                    ["removed_indices", "removed_texts", "importance", "new_rank", "valid"],
                ),
            }
        },
        ["explanations"],
    ),
}

QUERY_EXPLANATIONS_SCHEMA = {
    "$schema": _SCHEMA_DIALECT,
    **_obj(
        {
            "explanations": {
                "type": "array",
                "items": _obj(
                    {
                        "appended_terms": {"type": "array", "items": {"type": "string"}},
                        "score": {"type": "number"},
                        "augmented_query": {"type": "string"},
                        "new_rank": {"type": "integer", "minimum": 1},
                        "valid": {"type": "boolean"},
                    },
                    ["appended_terms", "score", "augmented_query", "new_rank", "valid"],
                ),
            }
        },
        ["explanations"],
    ),
}

INSTANCE_EXPLANATIONS_SCHEMA = {
    "$schema": _SCHEMA_DIALECT,
    **_obj(
        {
            "explanations": {
                "type": "array",
                "items": _obj(
                    {
                        "doc_id": {"type": "string"},
                        "title": {"type": ["string", "null"]},
                        "body": {"type": "string"},
                        "similarity": {"type": "number", "minimum": -1, "maximum": 1},
                        "corpus_rank": {"type": "integer", "minimum": 1},
                    },
                    ["doc_id", "title", "body", "similarity", "corpus_rank"],
                ),
            }
        },
        ["explanations"],
    ),
}

BUILDER_SCHEMA = {
    "$schema": _SCHEMA_DIALECT,
    **_obj(
        {
            "deltas": {
                "type": "array",
                "items": _obj(
                    {
                        "doc_id": {"type": "string"},
                        "old_rank": {"type": "integer", "minimum": 1},
                        "new_rank": {"type": "integer", "minimum": 1},
                        "direction": {"enum": ["raised", "lowered", "unchanged"]},
                        "is_hidden_entrant": {"type": "boolean"},
                    },
                    ["doc_id", "old_rank", "new_rank", "direction", "is_hidden_entrant"],
                ),
            },
            "valid": {"type": "boolean"},
        },
        ["deltas", "valid"],
    ),
}

TOPICS_SCHEMA = {
    "$schema": _SCHEMA_DIALECT,
    **_obj(
        {
            "topics": {
                "type": "array",
                "items": _obj(
                    {
                        "index": {"type": "integer", "minimum": 0},
                        "top_terms": {
                            "type": "array",
                            "items": _obj(
                                {
                                    "term": {"type": "string"},
                                    "probability": {
                                        "type": "number",
                                        "minimum": 0,
                                        "maximum": 1,
                                    },
                                },
                                ["term", "probability"],
                            ),
                        },
                    },
                    ["index", "top_terms"],
                ),
            }
        },
        ["topics"],
    ),
}

DOCUMENT_SCHEMA = {
    "$schema": _SCHEMA_DIALECT,
    **_obj(
        {
            "doc_id": {"type": "string"},
            "title": {"type": ["string", "null"]},
            "body": {"type": "string"},
            "sentences": {"type": "array", "items": {"type": "string"}},
        },
        ["doc_id", "title", "body", "sentences"],
    ),
}

INDEX_SCHEMA = {
    "$schema": _SCHEMA_DIALECT,
    **_obj(
        {
            "documents": {"type": "integer", "minimum": 0},
            "terms": {"type": "integer", "minimum": 0},
            "avg_doc_length": {"type": "number", "minimum": 0},
        },
        ["documents", "terms", "avg_doc_length"],
    ),
}

ERROR_SCHEMA = {
    "$schema": _SCHEMA_DIALECT,
    **_obj(
        {"code": {"type": "string"}, "message": {"type": "string"}},
        ["code", "message"],
    ),
}

RESPONSE_SCHEMAS: dict[str, dict] = {
    "corpora": CORPORA_SCHEMA,
    "rank": RANK_SCHEMA,
    "document": DOCUMENT_SCHEMA,
    "document_explanations": DOCUMENT_EXPLANATIONS_SCHEMA,
    "query_explanations": QUERY_EXPLANATIONS_SCHEMA,
    "instance_explanations": INSTANCE_EXPLANATIONS_SCHEMA,
    "builder": BUILDER_SCHEMA,
    "topics": TOPICS_SCHEMA,
    "index": INDEX_SCHEMA,
    "error": ERROR_SCHEMA,
}
