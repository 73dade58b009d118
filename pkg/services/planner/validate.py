from __future__ import annotations

import logging
from typing import List, Set, Tuple

from services.planner.errors import PlannerError
from services.planner.lemmas import lemma_violations
from services.planner.models import BaseLemma, DirectCheck, ReductionTree, ValidationReport, Violation
from services.planner.rules import apply_rule
from services.segre.model import is_subabundant

log = logging.getLogger(__name__)


def _leaf_violations(node) -> List[str]:
    rule = node.rule
    if node.children:
        return [f"{rule.kind} leaf has children"]
    if isinstance(rule, BaseLemma):
        errors, _ = lemma_violations(node.problem, rule.tag, rule.u)
        return errors
    if isinstance(rule, DirectCheck):
        errors = []
        if not is_subabundant(node.problem):
            errors.append("expected span fills the ambient space; the criterion does not apply")
        if rule.mode == "first-order" and node.problem.k < 1:
            errors.append("first-order check needs k >= 1")
        return errors
    return [f"unknown leaf rule {rule!r}"]


def validate(tree: ReductionTree) -> ValidationReport:
    """
    Check every edge's arithmetic and every lemma leaf's side conditions.
    Reports violations with the node path from the root; never raises on
    malformed trees.
    """
    violations: List[Violation] = []

    def flag(path: Tuple[str, ...], key: str, message: str) -> None:
        violations.append(Violation(path=path, node=key, message=message))

    if tree.root not in tree.nodes:
        flag((), tree.root, "root node missing")
        return ValidationReport(violations=tuple(violations))

    done: Set[str] = set()

    def visit(key: str, path: Tuple[str, ...]) -> None:
        path = path + (key,)
        if key in path[:-1]:
            flag(path, key, "cycle")
            return
        if key in done:
            return
        node = tree.nodes.get(key)
        if node is None:
            flag(path, key, "child node missing")
            return
        done.add(key)
        try:
            if node.problem.key != key:
                flag(path, key, f"node is filed under {key} but holds {node.problem.key}")
            if node.is_leaf:
                for message in _leaf_violations(node):
                    flag(path, key, message)
                return
            expected = tuple(child.key for child in apply_rule(node.problem, node.rule))
        except (PlannerError, ValueError, TypeError, AttributeError) as exc:
            flag(path, key, str(exc))
            return
        if expected != tuple(node.children):
            flag(path, key, f"{node.rule.kind} children should be {list(expected)}, tree has {list(node.children)}")
            return
        for child in node.children:
            visit(child, path)

    visit(tree.root, ())
    for key in tree.nodes:
        if key not in done:
            flag((), key, "unreachable from the root")
    if violations:
        log.info("reduction tree rooted at %s: %d violations, first: %s", tree.root, len(violations), violations[0])
    return ValidationReport(violations=tuple(violations))
