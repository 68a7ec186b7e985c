"""Canonical JSON: sorted keys, integers as JSON numbers, other rationals as "p/q"."""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from typing import Any

from .errors import LatticeError
from .linalg import Matrix


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        raise TypeError("floating point values are not serializable")
    if isinstance(obj, Matrix):
        return [to_jsonable(r) for r in obj.rows]
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_rational(x: Any) -> int | Fraction:
    """Accept JSON integers and canonical "p/q" strings (lowest terms, q > 1)."""
    if isinstance(x, bool) or isinstance(x, float):
        raise LatticeError(f"entry {x!r} is not an integer or exact rational string")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            f = Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise LatticeError(f"entry {x!r} is not a rational number") from None
        canonical = str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
        if x != canonical:
            raise LatticeError(f"entry {x!r} is not in canonical form (expected {canonical!r})")
        return f.numerator if f.denominator == 1 else f
    raise LatticeError(f"entry {x!r} is not an integer or exact rational string")
