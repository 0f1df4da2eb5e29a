"""Plain-text ``key = value`` configuration with exact rational values.

Values are a rational (``0.866``, ``1/21``), a comma list of rationals, or a
range ``start:stop:step`` (stop included). ``#`` starts a comment.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Union

from .exact import DomainError, rational

Value = Union[Fraction, List[Fraction]]


def parse_value(text: str) -> Value:
    text = text.strip()
    if not text:
        raise DomainError("empty value")
    if ":" in text:
        parts = [p.strip() for p in text.split(":")]
        if len(parts) != 3:
            raise DomainError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (rational(p) for p in parts)
        if step <= 0 or stop < start:
            raise DomainError(f"bad range {text!r}")
        out, v = [], start
        while v <= stop:
            out.append(v)
            v += step
        return out
    if "," in text:
        return [rational(p.strip()) for p in text.split(",") if p.strip()]
    return rational(text)


def parse_config(text: str) -> Dict[str, Value]:
    out: Dict[str, Value] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise DomainError(f"line {lineno}: missing key")
        try:
            out[key] = parse_value(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"line {lineno}: {exc}") from exc
    return out


def load_config(path) -> Dict[str, Value]:
    return parse_config(Path(path).read_text())


def as_list(value: Value) -> List[Fraction]:
    return list(value) if isinstance(value, list) else [value]


def as_scalar(value: Value, key: str) -> Fraction:
    if isinstance(value, list):
        raise DomainError(f"{key} must be a single value")
    return value
