"""Check records and report documents shared by every verifier and the CLI."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Optional


class Tri(Enum):
    TRUE = "true"
    FALSE = "false"
    UNDETERMINED = "undetermined"

    @classmethod
    def of(cls, flag: bool) -> "Tri":
        return cls.TRUE if flag else cls.FALSE


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    UNDETERMINED = "undetermined"


@dataclass
class Record:
    claim: str
    anchor: str
    status: Status
    checked: int = 0
    witness: Any = None
    bound: Any = None
    detail: dict = field(default_factory=dict)
    hypothesis: bool = False

    @classmethod
    def tally(cls, claim, anchor, checked, failures, bound=None, detail=None, hypothesis=False):
        """Build a record from a check count and a list of counterexamples.

        A record with nothing checked is never a pass.
        """
        if failures:
            status = Status.FAIL
            witness = failures[0]
        elif checked == 0:
            status = Status.UNDETERMINED
            witness = "no instances checked"
        else:
            status = Status.PASS
            witness = None
        d = dict(detail or {})
        if failures:
            d.setdefault("failures", len(failures))
        return cls(claim, anchor, status, checked, witness, bound, d, hypothesis)

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    def as_dict(self) -> dict:
        out = {
            "claim": self.claim,
            "anchor": self.anchor,
            "status": self.status.value,
            "checked": self.checked,
        }
        if self.hypothesis:
            out["role"] = "hypothesis"
        if self.witness is not None:
            out["witness"] = _plain(self.witness)
        if self.bound is not None:
            out["bound"] = _plain(self.bound)
        if self.detail:
            out["detail"] = _plain(self.detail)
        return out


@dataclass
class Report:
    command: str
    records: list = field(default_factory=list)
    inputs_digest: Optional[str] = None

    def add(self, record: Record) -> Record:
        self.records.append(record)
        return record

    def extend(self, other: "Report"):
        self.records.extend(other.records)

    def find(self, claim: str) -> Record:
        for r in self.records:
            if r.claim == claim:
                return r
        raise KeyError(claim)

    def _claims(self):
        # failed hypotheses are reported but do not fail the run
        return [r for r in self.records if not r.hypothesis]

    @property
    def failed(self) -> list:
        return [r for r in self._claims() if r.status is Status.FAIL]

    @property
    def undetermined(self) -> list:
        return [r for r in self._claims() if r.status is Status.UNDETERMINED]

    @property
    def ok(self) -> bool:
        return not self.failed and not self.undetermined and bool(self._claims())

    @property
    def exit_code(self) -> int:
        if self.failed:
            return 1
        if self.undetermined or not self._claims():
            return 2
        return 0

    @property
    def status(self) -> Status:
        return {0: Status.PASS, 1: Status.FAIL, 2: Status.UNDETERMINED}[self.exit_code]

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "status": self.status.value,
            "records": [r.as_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self) -> str:
        return "\n".join(_tree(self.as_dict(), 0))


def digest(*chunks: bytes) -> str:
    h = hashlib.sha256()
    for c in chunks:
        h.update(len(c).to_bytes(8, "big"))
        h.update(c)
    return h.hexdigest()[:16]


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in obj]
        return sorted(items, key=str) if isinstance(obj, (set, frozenset)) else items
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Enum):
        return obj.value
    return str(obj)


def _tree(obj, depth):
    pad = "  " * depth
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                yield f"{pad}{k}:"
                yield from _tree(v, depth + 1)
            else:
                yield f"{pad}{k}: {_scalar(v)}"
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)):
                yield f"{pad}-"
                yield from _tree(item, depth + 1)
            else:
                yield f"{pad}- {_scalar(item)}"
    else:
        yield f"{pad}{_scalar(obj)}"


def _scalar(v):
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)
