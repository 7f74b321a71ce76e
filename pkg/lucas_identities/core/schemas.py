"""
JSON 输出的 Schema

恒等式模板、验证结论、待定系数方程组与求解报告各有一份 Schema，
命令的 JSON 输出由这些 Schema 组合而成，用 jsonschema 校验。
"""

from typing import Any, Dict

import jsonschema

_STRING = {"type": "string"}
_STRING_LIST = {"type": "array", "items": _STRING}
_STRING_MAP = {"type": "object", "additionalProperties": _STRING}

INDEX_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["coeffs", "const"],
    "properties": {
        "coeffs": {"type": "object", "additionalProperties": {"type": "integer"}},
        "const": {"type": "integer"},
    },
    "additionalProperties": False,
}

TEMPLATE_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["index_vars", "terms"],
    "properties": {
        "name": {"type": ["string", "null"]},
        "index_vars": _STRING_LIST,
        "params": _STRING_MAP,
        "horadam": {
            "type": "object",
            "required": ["a0", "a1", "p0", "p1"],
            "additionalProperties": _STRING,
        },
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coeff", "qexp", "factors"],
                "properties": {
                    "coeff": {
                        "oneOf": [
                            {
                                "type": "object",
                                "required": ["kind", "value"],
                                "properties": {"kind": {"const": "known"}, "value": _STRING},
                                "additionalProperties": False,
                            },
                            {
                                "type": "object",
                                "required": ["kind", "name"],
                                "properties": {"kind": {"const": "unknown"}, "name": _STRING, "value": _STRING},
                                "additionalProperties": False,
                            },
                        ],
                    },
                    "qexp": INDEX_SCHEMA,
                    "factors": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["kind", "index", "exp"],
                            "properties": {
                                "kind": {"enum": ["U", "V", "W"]},
                                "index": INDEX_SCHEMA,
                                "exp": {"type": "integer", "not": {"const": 0}},
                            },
                            "additionalProperties": False,
                        },
                    },
                    "side": {"enum": [0, 1]},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

VERDICT_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["name", "status", "guards"],
    "properties": {
        "name": {"type": ["string", "null"]},
        "status": {"enum": ["Verified", "Refuted"]},
        "guards": _STRING_LIST,
        "witness": {
            "type": "object",
            "required": ["monomial", "coefficient"],
            "properties": {"monomial": _STRING, "coefficient": _STRING},
            "additionalProperties": False,
        },
        "counterexample": {
            "type": "object",
            "required": ["indices", "lhs", "rhs", "value"],
            "properties": {
                "indices": {"type": "object", "additionalProperties": {"type": "integer"}},
            },
            # 其余键为参数名，值为有理数文本
            "additionalProperties": _STRING,
        },
    },
    "additionalProperties": False,
    # Refuted 必带见证单项式，Verified 不带
    "if": {"properties": {"status": {"const": "Refuted"}}},
    "then": {"required": ["witness"]},
    "else": {"not": {"anyOf": [{"required": ["witness"]}, {"required": ["counterexample"]}]}},
}

SYSTEM_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["unknowns", "samples", "matrix", "rhs"],
    "properties": {
        "unknowns": _STRING_LIST,
        "samples": {"type": "array", "items": {"type": "object", "additionalProperties": {"type": "integer"}}},
        "matrix": {"type": "array", "items": _STRING_LIST},
        "rhs": _STRING_LIST,
    },
    "additionalProperties": False,
}

REPORT_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["rank", "nullity", "consistent", "nullspace", "parameter_conditions"],
    "properties": {
        "rank": {"type": "integer", "minimum": 0},
        "nullity": {"type": "integer", "minimum": 0},
        "consistent": {"type": "boolean"},
        "nullspace": {"type": "array", "items": _STRING_MAP},
        "parameter_conditions": _STRING_LIST,
        "determinant": _STRING,
        "determinant_factored": _STRING,
        "particular": _STRING_MAP,
    },
    "additionalProperties": False,
}

# ===== 命令输出 =====

IDENTITY_OUTPUT_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["identity", "text", "verdict"],
    "properties": {"identity": TEMPLATE_SCHEMA, "text": _STRING, "verdict": VERDICT_SCHEMA},
    "additionalProperties": False,
}

CATALOG_VERDICTS_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["verdicts", "verified", "total"],
    "properties": {
        "verdicts": {"type": "array", "items": VERDICT_SCHEMA},
        "verified": {"type": "integer", "minimum": 0},
        "total": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

DISCOVER_OUTPUT_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["text", "system", "report", "candidates"],
    "properties": {
        "text": _STRING,
        "system": SYSTEM_SCHEMA,
        "report": REPORT_SCHEMA,
        "candidates": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["text", "solution", "verdict"],
                "properties": {"text": _STRING, "solution": _STRING_MAP, "verdict": VERDICT_SCHEMA},
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


def validate_document(document: Any, schema: Dict[str, Any]) -> None:
    """
    按 Schema 校验 JSON 文档

    Raises:
        jsonschema.ValidationError: 文档不符合 Schema
    """
    jsonschema.validate(instance=document, schema=schema)
