"""Deterministic report records and their structured and human renderings."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .exterior import Multivector
from .linalg import Subspace

STATUS_EXIT = {"ok": 0, "input_error": 1, "property_violation": 2, "internal_error": 3}


def digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def format_multivector(xi: Multivector, names) -> str:
    sep = "*^" if xi.kind == "form" else "^"
    tail = "*" if xi.kind == "form" else ""
    parts = []
    for c, idx in xi.terms():
        mono = sep.join(names[i] for i in idx) + tail
        mag = abs(c)
        term = mono if mag == 1 else f"{la.format_q(mag)} {mono}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts) or "0"


def format_vector(v, names) -> str:
    from .fileformat import format_linear

    return format_linear({k: c for k, c in enumerate(v) if c}, names)


def format_subspace(S: Subspace, names) -> list[str]:
    return [format_vector(b, names) for b in S.basis]


def canonical(value):
    """Plain JSON data with rationals as ``"p/q"`` strings."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return la.format_q(value)
    if isinstance(value, dict):
        return {str(k): canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [canonical(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__} in a report")


@dataclass
class StructureReport:
    command: str
    name: str
    digest: str
    status: str = "ok"
    result: dict = field(default_factory=dict)
    messages: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return STATUS_EXIT[self.status]

    def to_data(self) -> dict:
        return canonical({"command": self.command, "input": {"name": self.name, "digest": self.digest},
                          "status": self.status, "result": self.result, "messages": self.messages})

    def to_json(self) -> str:
        return json.dumps(self.to_data(), sort_keys=True, indent=2, ensure_ascii=True) + "\n"

    def to_human(self) -> str:
        out = [f"{self.command} {self.name or '<unnamed>'}: {self.status}",
               f"  input {self.digest}"]
        for key in sorted(self.result):
            out.extend(_human_lines(key, canonical(self.result[key]), 1))
        out.extend(f"  ! {m}" for m in self.messages)
        return "\n".join(out) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "structured" else self.to_human()


def _human_lines(key, value, depth):
    pad = "  " * depth
    if isinstance(value, dict):
        if not value:
            return [f"{pad}{key}: {{}}"]
        lines = [f"{pad}{key}:"]
        for k in sorted(value):
            lines.extend(_human_lines(k, value[k], depth + 1))
        return lines
    if isinstance(value, list) and value and any(isinstance(v, (dict, list)) for v in value):
        lines = [f"{pad}{key}:"]
        for i, v in enumerate(value):
            lines.extend(_human_lines(f"[{i}]", v, depth + 1))
        return lines
    if isinstance(value, list):
        return [f"{pad}{key}: [" + ", ".join(str(v) for v in value) + "]"]
    if isinstance(value, str) and "\n" in value:
        return [f"{pad}{key}: |"] + [f"{pad}  {ln}" for ln in value.rstrip("\n").split("\n")]
    if value is None:
        value = "-"
    elif isinstance(value, bool):
        value = "yes" if value else "no"
    return [f"{pad}{key}: {value}"]
