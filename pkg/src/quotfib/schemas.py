"""JSON schemas for every file the CLI reads or writes (format_version 1)."""
from __future__ import annotations

import json

import jsonschema

from .errors import ParseError

FORMAT_VERSION = 1

_RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+/[0-9]+$"}


def _obj(props: dict, required=None) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": sorted(props if required is None else required),
        "additionalProperties": False,
    }


CYCNUM = _obj({"conductor": {"type": "integer", "minimum": 1},
               "coeffs": {"type": "array", "items": _RATIONAL}})

MATRIX = _obj({"dim": {"type": "integer", "minimum": 1},
               "entries": {"type": "array", "items": {"type": "array", "items": {"$ref": "#/$defs/cycnum"}}}})

POINT = _obj({"coords": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/cycnum"}}})

TORSION_POINT = _obj({"a": _RATIONAL, "b": _RATIONAL})

CURVE = {"enum": ["gauss", "eisenstein", "generic"]}

PAIR_SPEC = {
    "oneOf": [
        _obj({"kind": {"const": "alpha"}, "n": {"type": "integer", "minimum": 1},
              "c_order": {"enum": [2, 3, 4, 6]}, "curve": CURVE}, ["kind", "n", "c_order"]),
        _obj({"kind": {"const": "beta"}, "n": {"type": "integer", "minimum": 1}, "curve": CURVE},
             ["kind", "n"]),
        _obj({"kind": {"const": "gamma"}}),
    ]
}

DELTA_SUBGROUP = _obj({"generators": {
    "type": "array",
    "items": {"type": "array", "minItems": 1, "maxItems": 2, "items": {"$ref": "#/$defs/torsion_point"}},
}})

FIBRATION_CLASS = _obj({
    "case": {"enum": [1, 2, 3, 4, 5]},
    "n": {"type": "integer", "minimum": 1},
    "params": {"oneOf": [{"type": "null"},
                         _obj({"a": {"type": "integer", "minimum": 1}, "b": {"type": "integer", "minimum": 1}})]},
    "generators": {"type": "array", "items": {"$ref": "#/$defs/matrix"}},
})

DELTA_GENERATOR = _obj({
    "base": {"type": "array", "items": _RATIONAL},
    "actions": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
})

FINITE_MODEL = _obj({
    "format_version": {"const": FORMAT_VERSION},
    "rank": {"type": "integer", "minimum": 1},
    "factors": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/fibration_class"}},
    "delta0": {"type": "array", "items": {"$ref": "#/$defs/delta_generator"}},
})

DEFS = {
    "cycnum": CYCNUM,
    "matrix": MATRIX,
    "point": POINT,
    "torsion_point": TORSION_POINT,
    "pair_spec": PAIR_SPEC,
    "delta_subgroup": DELTA_SUBGROUP,
    "fibration_class": FIBRATION_CLASS,
    "delta_generator": DELTA_GENERATOR,
}

CANONICALIZE_INPUT = _obj({
    "format_version": {"const": FORMAT_VERSION},
    "kind": {"enum": ["commuting_pair", "cyclic_pgl2", "klein_pgl2", "involutions_pgl3"]},
    "maps": {"type": "array", "minItems": 1, "maxItems": 2, "items": {"$ref": "#/$defs/matrix"}},
})

CLASSIFY_INPUT = _obj({
    "format_version": {"const": FORMAT_VERSION},
    "pair": {"$ref": "#/$defs/pair_spec"},
    "delta": {"$ref": "#/$defs/delta_subgroup"},
    "class": {"$ref": "#/$defs/fibration_class"},
}, ["format_version", "pair", "delta"])

FIX_DIVISORS_INPUT = _obj({
    "format_version": {"const": FORMAT_VERSION},
    "n": {"type": "integer", "minimum": 1},
    "x": {"$ref": "#/$defs/torsion_point"},
    "y": {"$ref": "#/$defs/torsion_point"},
})

ENTRY = _obj({
    "check_id": {"type": "string"},
    "status": {"enum": ["pass", "fail", "error"]},
    "detail": {"type": "string"},
})

REPORT = _obj({
    "format_version": {"const": FORMAT_VERSION},
    "tool_version": {"type": "string"},
    "config": _obj({
        "command": {"enum": ["canonicalize", "classify", "verify-case", "fix-divisors",
                             "fiber-product-check", "suite"]},
        "seed": {"type": "integer", "minimum": 0},
        "samples": {"type": "integer", "minimum": 1},
        "input": {"type": ["string", "null"]},
        "level": {"type": ["integer", "null"]},
    }),
    "entries": {"type": "array", "items": ENTRY},
    "summary": _obj({k: {"type": "integer", "minimum": 0} for k in ("pass", "fail", "error", "total")}),
    "result": {},
})

SCHEMAS = {
    "pair_spec": PAIR_SPEC,
    "delta_subgroup": DELTA_SUBGROUP,
    "fibration_class": FIBRATION_CLASS,
    "finite_model": FINITE_MODEL,
    "canonicalize_input": CANONICALIZE_INPUT,
    "classify_input": CLASSIFY_INPUT,
    "fix_divisors_input": FIX_DIVISORS_INPUT,
    "report": REPORT,
}


def schema(name: str) -> dict:
    """The named schema, self-contained with its definitions."""
    out = {"$schema": "https://json-schema.org/draft/2020-12/schema", "title": name}
    out.update(SCHEMAS[name])
    out["$defs"] = DEFS
    return out


def validate(obj, name: str):
    try:
        jsonschema.validate(obj, schema(name), cls=jsonschema.Draft202012Validator)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise ParseError(f"{name}: {exc.message} at /{path}") from None


def load_json(path: str, name: str):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    validate(obj, name)
    return obj
