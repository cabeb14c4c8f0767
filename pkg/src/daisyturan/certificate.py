"""Machine-readable verification outcomes."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass
class Certificate:
    kind: str
    passed: bool
    fields: dict[str, Any] = field(default_factory=dict)
    mode: str = "exhaustive"
    seed: int | None = None
    witness: dict | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind}
        for k, v in self.fields.items():
            out[k] = fraction_str(v) if isinstance(v, Fraction) else v
        out["mode"] = self.mode
        if self.mode == "sampled" or self.seed is not None:
            out["seed"] = self.seed
        out["witness"] = self.witness
        out["pass"] = self.passed
        out["tool_version"] = __version__
        out.update(self.meta)
        return out

    def to_json(self, **kw) -> str:
        kw.setdefault("indent", 2)
        return json.dumps(self.to_dict(), **kw)
