"""Child problems of each reduction rule, with the rule arithmetic checked exactly."""
from __future__ import annotations

from typing import List

from services.planner.errors import RuleError
from services.planner.models import LEAF_KINDS, MonotoneDims, MonotoneParams, Permute, Split
from services.segre.model import Problem


def split_children(problem: Problem, rule: Split) -> List[Problem]:
    i, m = rule.factor, len(rule.parts)
    if not 0 <= i < problem.n:
        raise RuleError(f"split factor {i + 1} out of range for {problem.n} factors")
    if m < 2:
        raise RuleError("a split needs at least two parts")
    if sum(rule.parts) != problem.dims[i]:
        raise RuleError(f"parts {'+'.join(map(str, rule.parts))} do not sum to a_{i + 1} = {problem.dims[i]}")
    if len(rule.k_parts) != m or sum(rule.k_parts) != problem.k or min(rule.k_parts) < 0:
        raise RuleError(f"k parts {'+'.join(map(str, rule.k_parts))} do not split k = {problem.k} in {m}")
    if len(rule.aux_parts) != problem.n:
        raise RuleError(f"aux parts given for {len(rule.aux_parts)} factors, need {problem.n}")
    for j, parts in enumerate(rule.aux_parts):
        if j == i:
            if parts:
                raise RuleError(f"aux parts given for the split factor {i + 1}")
            continue
        if len(parts) != m or sum(parts) != problem.p[j] or min(parts) < 0:
            raise RuleError(f"aux parts {'+'.join(map(str, parts))} do not split p_{j + 1} = {problem.p[j]} in {m}")

    children = []
    for t in range(m):
        dims = list(problem.dims)
        dims[i] = rule.parts[t]
        p = [rule.aux_parts[j][t] if j != i else problem.p[i] + problem.k - rule.k_parts[t] for j in range(problem.n)]
        children.append(Problem.of(dims, rule.k_parts[t], p))
    return children


def apply_rule(problem: Problem, rule) -> List[Problem]:
    """
    Children in rule order; raises RuleError when the arithmetic is off.
    Leaf rules have no children.
    """
    try:
        if rule.kind in LEAF_KINDS:
            return []
        if isinstance(rule, Split):
            return split_children(problem, rule)
        if isinstance(rule, MonotoneDims):
            if len(rule.dims) != problem.n or any(c > a for c, a in zip(rule.dims, problem.dims)):
                raise RuleError(f"dims {rule.dims} are not componentwise <= {problem.dims}")
            return [Problem.of(rule.dims, problem.k, problem.p)]
        if isinstance(rule, MonotoneParams):
            child = Problem(format=problem.format, k=rule.k, p=tuple(rule.p))
            if not child.dominates(problem):
                raise RuleError(f"claim ({rule.k}; {tuple(rule.p)}) does not dominate ({problem.k}; {problem.p})")
            return [child]
        if isinstance(rule, Permute):
            return [problem.permuted(rule.perm)]
    except ValueError as exc:
        raise RuleError(str(exc)) from exc
    raise RuleError(f"unknown rule {rule!r}")


def balanced(total: int, m: int) -> tuple:
    """total in m parts, the remainder one each to the first parts."""
    q, r = divmod(total, m)
    return tuple(q + 1 if t < r else q for t in range(m))
