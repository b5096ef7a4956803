"""Versioned scenario files for the command-line front end.

A scenario is ``{"version": 1, "kind": ..., "parameters": {...}}``. Every
kind has its own JSON schema with ``additionalProperties: false`` so unknown
fields are rejected before any computation. Complex numbers are written as
``[re, im]`` pairs: a state is a list of pairs, an operator a list of rows of
pairs. Defaults are applied by the runners, never written back, so
``parse -> serialize -> parse`` is the identity.
"""
import json
from dataclasses import dataclass, field

import jsonschema
import numpy as np

from .errors import InvalidScenarioError

SCHEMA_VERSION = 1
KINDS = ("fig1", "fig2", "obs2", "purity-demo", "verify", "search", "eval")

MATRIX_KEYS = ("A", "B", "U", "V", "W_t", "rho")
VECTOR_KEYS = ("psi", "phi", "psi_perp", "phi_a", "phi_b", "phi_b_prime")
LIST_VECTOR_KEYS = ("phis", "basis")

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_VECTOR = {"type": "array", "items": _PAIR, "minItems": 1}
_MATRIX = {"type": "array", "items": _VECTOR, "minItems": 1}
_NUM = {"type": "number"}
_ANGLE_PAIR = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}
_GRID = {
    "oneOf": [
        {"type": "array", "items": _NUM, "minItems": 1},
        {"type": "object", "additionalProperties": False, "required": ["n"],
         "properties": {"n": {"type": "integer", "minimum": 1}, "lo": _NUM, "hi": _NUM}},
    ]
}
_OUT = {"type": "string"}
_SEED = {"type": "integer", "minimum": 0}
_POS = {"type": "number", "exclusiveMinimum": 0}

RELATIONS = ("std_standard", "std_pps", "weak_value", "rhur", "pps_ur", "pps_ur_mixed",
             "stronger_ur", "combined_stronger", "mpur_bounds", "tighter_sum_ur",
             "unitary_pps_ur", "otoc_bounds", "equality_product", "equality_sum",
             "intelligent_residual", "classical_uncertainty", "purity")
PURITY_CASES = ("qubit", "qutrit", "qubit_qubit", "qubit_qutrit", "counterexample")

_OPERANDS = {k: _MATRIX for k in MATRIX_KEYS}
_OPERANDS.update({k: _VECTOR for k in VECTOR_KEYS})
_OPERANDS.update({k: {"type": "array", "items": _VECTOR} for k in LIST_VECTOR_KEYS})


def _params(props, required=()):
    return {"type": "object", "additionalProperties": False, "properties": props,
            "required": list(required)}


PARAMETER_SCHEMAS = {
    "fig1": _params({"grid": _GRID, "omega": _NUM, "eta": _NUM, "xi": _NUM,
                     "tolerance": _POS, "out": _OUT}),
    "fig2": _params({"grid": _GRID, "psi_phase": _NUM, "phi1": _ANGLE_PAIR, "phi2": _ANGLE_PAIR,
                     "identity_w": {"type": "boolean"}, "tolerance": _POS, "out": _OUT}),
    "obs2": _params({"A": _MATRIX, "B": _MATRIX, "psi": _VECTOR, "tolerance": _POS, "out": _OUT}),
    "purity-demo": _params({"cases": {"type": "array", "items": {"enum": list(PURITY_CASES)}},
                            "seed": _SEED, "threshold": _POS, "out": _OUT}),
    "verify": _params({"seed": _SEED, "samples": {"type": "integer", "minimum": 1},
                       "dims": {"type": "array", "items": {"type": "integer", "minimum": 2},
                                "minItems": 1},
                       "inject_bug": {"type": "boolean"}, "out": _OUT}),
    "search": _params({
        "objective": {"enum": ["stronger-ur-rhs-max", "otoc-pps-bound-min",
                               "intelligent-residual-min"]},
        "A": _MATRIX, "B": _MATRIX, "psi": _VECTOR, "V": _MATRIX, "W_t": _MATRIX, "rho": _MATRIX,
        "include_schrodinger": {"type": "boolean"},
        "restarts": {"type": "integer", "minimum": 1},
        "max_iters": {"type": "integer", "minimum": 1},
        "step_init": _POS, "step_min": _POS, "seed": _SEED, "out": _OUT,
    }, required=["objective"]),
    "eval": _params(dict(_OPERANDS, relation={"enum": list(RELATIONS)},
                         include_schrodinger={"type": "boolean"},
                         weak_deviations={"type": "boolean"},
                         sign={"enum": [-1, 1]}, seed=_SEED, tolerance=_POS, out=_OUT),
                    required=["relation"]),
}

SCENARIO_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["version", "kind", "parameters"],
    "properties": {
        "version": {"const": SCHEMA_VERSION},
        "kind": {"enum": list(KINDS)},
        "parameters": {"type": "object"},
    },
}


def encode_complex(x):
    """Nested ``[re, im]`` lists for a complex scalar, vector or matrix."""
    a = np.asarray(x, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [encode_complex(v) for v in a]


def decode_complex(obj):
    """Inverse of :func:`encode_complex`; the innermost lists must be pairs."""
    a = np.asarray(obj, dtype=float)
    if a.ndim == 0 or a.shape[-1] != 2:
        raise InvalidScenarioError("complex literals must be [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def _decode_params(params):
    out = {}
    for k, v in params.items():
        if k in MATRIX_KEYS:
            m = decode_complex(v)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise InvalidScenarioError(f"{k} must be a square matrix literal")
            out[k] = m
        elif k in VECTOR_KEYS:
            out[k] = decode_complex(v)
        elif k in LIST_VECTOR_KEYS:
            out[k] = [decode_complex(x) for x in v]
        else:
            out[k] = v
    return out


def _encode_params(params):
    out = {}
    for k, v in params.items():
        if k in MATRIX_KEYS or k in VECTOR_KEYS:
            out[k] = encode_complex(v)
        elif k in LIST_VECTOR_KEYS:
            out[k] = [encode_complex(x) for x in v]
        elif isinstance(v, tuple):
            out[k] = list(v)
        else:
            out[k] = v
    return out


@dataclass
class Scenario:
    kind: str
    parameters: dict = field(default_factory=dict)
    version: int = SCHEMA_VERSION

    def to_dict(self):
        return {"version": self.version, "kind": self.kind,
                "parameters": _encode_params(self.parameters)}

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    def __eq__(self, other):
        return isinstance(other, Scenario) and self.to_dict() == other.to_dict()


def _check(doc, schema, prefix):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in (prefix, *exc.absolute_path) if p) or "<root>"
        raise InvalidScenarioError(f"invalid scenario at {where}: {exc.message}") from None


def validate(doc):
    """Validate a decoded JSON document; raises :class:`InvalidScenarioError`."""
    _check(doc, SCENARIO_SCHEMA, "")
    _check(doc["parameters"], PARAMETER_SCHEMAS[doc["kind"]], "parameters")


def from_dict(doc):
    validate(doc)
    return Scenario(doc["kind"], _decode_params(doc["parameters"]), doc["version"])


def parse(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidScenarioError(f"scenario is not valid JSON: {exc}") from None
    return from_dict(doc)


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse(fh.read())
    except OSError as exc:
        raise InvalidScenarioError(f"cannot read scenario {path}: {exc}") from None


def serialize(scenario):
    return scenario.to_json()
