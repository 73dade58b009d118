"""
Certificates: versioned, canonical JSON with a sha256 digest over every
other field. Primes, seeds, ranks and kernel dimensions of every check are
kept inline.
"""
from __future__ import annotations

import json
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from services.bounds.exceptions import EXCEPTIONS_TABLE_VERSION, ExceptionMatch
from services.exactlin.rng import ALGORITHM
from services.planner.execute import LeafResult
from services.shared.canon import canon_json, digest_without

SCHEMA_VERSION = 1

CertVerdict = Literal["PASS", "FAIL", "KNOWN-EXCEPTION", "INCOMPLETE"]
Route = Literal["k-max", "known-exception", "cache", "direct", "kruskal", "plan", "none"]

EXIT_CODES: Dict[str, int] = {"PASS": 0, "FAIL": 1, "KNOWN-EXCEPTION": 1, "INCOMPLETE": 2}


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    prime: int
    seed: int
    prng: str = ALGORITHM
    trials: int
    mode: str
    budget: int
    workers: int = 1
    cache: str = ""
    emit: str = ""
    exceptions_table_version: int = EXCEPTIONS_TABLE_VERSION


class TreeRecord(BaseModel):
    """The reduction tree in script form plus the verdict of every node."""

    model_config = ConfigDict(frozen=True)

    strategy: str
    script: str
    node_verdicts: Dict[str, str]


class Certificate(BaseModel):
    model_config = ConfigDict(frozen=True)

    schema_version: int = SCHEMA_VERSION
    command: str
    format: Tuple[int, ...]
    k: int
    p: Tuple[int, ...]
    mode: str
    verdict: CertVerdict
    route: Route
    reason: str
    config: RunConfig
    reports: Tuple[LeafResult, ...] = ()
    tree: Optional[TreeRecord] = None
    exceptions: Tuple[ExceptionMatch, ...] = ()
    caveats: Tuple[str, ...] = ()
    cited: Tuple[str, ...] = ()
    digest: str = ""

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def payload(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")

    def sealed(self) -> "Certificate":
        return self.model_copy(update={"digest": digest_without(self.payload())})

    def verify(self) -> bool:
        return bool(self.digest) and self.digest == digest_without(self.payload())

    def to_json(self) -> str:
        return canon_json(self.payload())

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.model_validate(json.loads(text))


def certificate_schema() -> Dict[str, Any]:
    schema = Certificate.model_json_schema()
    schema["$id"] = f"identcert/certificate/v{SCHEMA_VERSION}"
    return schema


def caveats_for(reports: List[LeafResult]) -> List[str]:
    notes = []
    for leaf in reports:
        for report in (leaf.first_order, leaf.contact):
            if report is not None and report.note and report.note not in notes:
                notes.append(report.note)
    return notes
