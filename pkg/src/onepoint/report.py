"""Verification records and their JSON encoding."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = 1


@dataclass
class TransformReport:
    """One two-sided check: ``lhs`` and ``rhs`` of an identity at one parameter set."""

    gamma: Any
    params: dict
    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    depth_doubled_err: float | None = None
    tail_bound: float | None = None
    aux: dict = field(default_factory=dict)

    @classmethod
    def build(cls, gamma, params, lhs, rhs, depth_doubled_err=None, tail_bound=None, aux=None):
        lhs, rhs = complex(lhs), complex(rhs)
        abs_err = abs(lhs - rhs)
        scale = max(abs(lhs), abs(rhs))
        rel_err = abs_err / scale if scale > 0 else 0.0
        return cls(gamma, dict(params), lhs, rhs, abs_err, rel_err,
                   depth_doubled_err, tail_bound, dict(aux or {}))

    def passed(self, tol: float) -> bool:
        return self.abs_err < tol

    def to_dict(self) -> dict:
        return {
            "gamma": _encode(self.gamma),
            "params": _encode(self.params),
            "lhs": _encode(self.lhs),
            "rhs": _encode(self.rhs),
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "depth_doubled_err": self.depth_doubled_err,
            "tail_bound": self.tail_bound,
            "aux": _encode(self.aux),
        }


def _encode(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return obj


def decode_complex(obj) -> complex:
    return complex(obj["re"], obj["im"])


def report_document(command: str, parameters: dict, records: list, tolerances: dict,
                    passed: bool) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "parameters": _encode(parameters),
        "tolerances": tolerances,
        "records": [r.to_dict() if hasattr(r, "to_dict") else _encode(r) for r in records],
        "pass": bool(passed),
    }


def dump_report(doc: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)


def load_report(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
