from __future__ import annotations

from typing import Annotated, Dict, Iterator, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from services.segre.model import Problem

LemmaTag = Literal["Start", "Zero", "Uno", "ZeroStep", "Premain", "Pren"]
CheckMode = Literal["first-order", "groebner", "both"]


class Split(BaseModel):
    """
    Split factor `factor` (0-based) into `parts`. Child t gets parts[t] at the
    factor, k_parts[t] points, p_factor + (k - k_parts[t]) aux blocks there and
    aux_parts[j][t] at every other factor j (aux_parts[factor] is empty).
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["split"] = "split"
    factor: int
    parts: Tuple[int, ...]
    k_parts: Tuple[int, ...]
    aux_parts: Tuple[Tuple[int, ...], ...]


class MonotoneDims(BaseModel):
    """Parent dims >= child dims componentwise, same (k, p)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["dims"] = "dims"
    dims: Tuple[int, ...]


class MonotoneParams(BaseModel):
    """Same dims; the child claim (k, p) dominates the parent's."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["params"] = "params"
    k: int
    p: Tuple[int, ...]


class Permute(BaseModel):
    """Child factor t is parent factor perm[t] (0-based)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["permute"] = "permute"
    perm: Tuple[int, ...]


class BaseLemma(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["lemma"] = "lemma"
    tag: LemmaTag
    u: Optional[Tuple[int, ...]] = None


class DirectCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["check"] = "check"
    mode: CheckMode = "first-order"


Rule = Annotated[
    Union[Split, MonotoneDims, MonotoneParams, Permute, BaseLemma, DirectCheck],
    Field(discriminator="kind"),
]

LEAF_KINDS = ("lemma", "check")


class LemmaCert(BaseModel):
    model_config = ConfigDict(frozen=True)

    tag: LemmaTag
    u: Optional[Tuple[int, ...]] = None
    conditions: Tuple[str, ...] = ()


class Node(BaseModel):
    model_config = ConfigDict(frozen=True)

    problem: Problem
    rule: Rule
    children: Tuple[str, ...] = ()

    @property
    def key(self) -> str:
        return self.problem.key

    @property
    def is_leaf(self) -> bool:
        return self.rule.kind in LEAF_KINDS


class ReductionTree(BaseModel):
    """Rule-labelled DAG keyed by Problem.key; identical sub-problems share a node."""

    model_config = ConfigDict(frozen=True)

    root: str
    nodes: Dict[str, Node]

    @property
    def root_problem(self) -> Problem:
        return self.nodes[self.root].problem

    def walk(self) -> Iterator[Node]:
        """Depth-first, each node once, children in rule order. Assumes a valid tree."""
        seen = set()
        stack = [self.root]
        while stack:
            key = stack.pop()
            if key in seen or key not in self.nodes:
                continue
            seen.add(key)
            node = self.nodes[key]
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> List[Node]:
        return [node for node in self.walk() if node.is_leaf]

    def depth(self) -> int:
        def down(key: str) -> int:
            node = self.nodes[key]
            return 1 + max((down(c) for c in set(node.children)), default=0)

        return down(self.root)


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    path: Tuple[str, ...]
    node: str
    message: str

    def __str__(self) -> str:
        return f"{' > '.join(self.path) or self.node}: {self.message}"


class ValidationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None
