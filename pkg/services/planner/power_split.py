"""
Automatic reduction trees by repeated base-splitting.

The first attempt cites lemmas only. When that runs dry the tree is rebuilt
splitting only while k >= base and every child stays sub-abundant, with direct
checks at the bottom. Pren is never cited here; its reduction is replayed.
"""
from __future__ import annotations

import logging
from typing import Dict, Literal, Optional, Set

from pydantic import BaseModel, ConfigDict, Field

from services.planner.errors import NoPlan
from services.planner.lemmas import match_lemma, round_to_lemma
from services.planner.models import DirectCheck, MonotoneDims, Node, ReductionTree, Split
from services.planner.rules import balanced, split_children
from services.segre.model import Problem, is_subabundant
from services.shared.config import settings

log = logging.getLogger(__name__)


class PowerSplit(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["power-split"] = "power-split"
    base: int = Field(default=2, ge=2)
    threshold: int = settings.direct_check_max_ambient
    groebner_max_vars: int = settings.groebner_max_vars


def largest_power(a: int, base: int) -> int:
    power = 1
    while power * base <= a:
        power *= base
    return power if power >= 2 else a


def choose_split(problem: Problem, base: int) -> Optional[Split]:
    """Split the largest splittable factor (leftmost on ties) into `base` equal parts."""
    candidates = [i for i, a in enumerate(problem.dims) if a % base == 0 and a // base >= 2]
    if not candidates:
        return None
    i = max(candidates, key=lambda j: (problem.dims[j], -j))
    a = problem.dims[i]
    return Split(
        factor=i,
        parts=(a // base,) * base,
        k_parts=balanced(problem.k, base),
        aux_parts=tuple(() if j == i else balanced(problem.p[j], base) for j in range(problem.n)),
    )


class _Builder:
    def __init__(self, strategy: PowerSplit, checks: bool):
        self.strategy = strategy
        self.checks = checks
        self.nodes: Dict[str, Node] = {}
        self.failed: Set[str] = set()

    def _leaf_check(self, problem: Problem) -> Optional[DirectCheck]:
        if problem.format.ambient_dim > self.strategy.threshold or not is_subabundant(problem):
            return None
        if problem.k >= 1:
            return DirectCheck(mode="first-order")
        if problem.format.variables <= self.strategy.groebner_max_vars:
            return DirectCheck(mode="groebner")
        return None

    def build(self, problem: Problem) -> bool:
        key = problem.key
        if key in self.nodes:
            return True
        if key in self.failed:
            return False

        lemma = match_lemma(problem)
        if lemma is not None:
            self.nodes[key] = Node(problem=problem, rule=lemma)
            return True
        rounded = round_to_lemma(problem)
        if rounded is not None:
            rule, target, lemma = rounded
            self.nodes.setdefault(target.key, Node(problem=target, rule=lemma))
            self.nodes[key] = Node(problem=problem, rule=rule, children=(target.key,))
            return True

        split = choose_split(problem, self.strategy.base)
        if split is not None:
            children = split_children(problem, split)
            allowed = not self.checks or (
                problem.k >= self.strategy.base and all(is_subabundant(c) for c in children)
            )
            if allowed:
                snapshot = dict(self.nodes)
                if all(self.build(child) for child in children):
                    self.nodes[key] = Node(problem=problem, rule=split, children=tuple(c.key for c in children))
                    return True
                self.nodes = snapshot

        if self.checks:
            check = self._leaf_check(problem)
            if check is not None:
                self.nodes[key] = Node(problem=problem, rule=check)
                return True
        self.failed.add(key)
        return False


def power_split(problem: Problem, strategy: PowerSplit) -> ReductionTree:
    nodes: Dict[str, Node] = {}
    start = problem
    powers = tuple(largest_power(a, strategy.base) for a in problem.dims)
    if powers != problem.dims:
        start = Problem.of(powers, problem.k, problem.p)
        nodes[problem.key] = Node(problem=problem, rule=MonotoneDims(dims=powers), children=(start.key,))

    for checks in (False, True):
        builder = _Builder(strategy, checks)
        if builder.build(start):
            nodes.update(builder.nodes)
            tree = ReductionTree(root=problem.key, nodes=nodes)
            log.info(
                "power-split base %d for %s: %d nodes, %d leaves (%s)",
                strategy.base, problem, len(tree.nodes), len(tree.leaves()),
                "checks" if checks else "citations only",
            )
            return tree
    raise NoPlan(problem, f"base {strategy.base} splitting reaches no lemma or checkable leaf")
