"""Recursive conversion of result objects to JSON-safe values."""

from __future__ import annotations

import math
from fractions import Fraction

from .rational import fraction_to_json


def jsonify(value):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return fraction_to_json(value)
    if isinstance(value, dict):
        return {(k if isinstance(k, str) else str(k)): jsonify(v) for k, v in value.items()}
    if isinstance(value, (frozenset, set)):
        return sorted(jsonify(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [jsonify(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    raise TypeError(f"cannot serialize {type(value).__name__}")
