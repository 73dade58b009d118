from __future__ import annotations

from typing import Optional


class PlannerError(Exception):
    pass


class RuleError(PlannerError):
    """A rule's arithmetic does not apply to the node it labels."""


class LemmaError(RuleError):
    pass


class NoPlan(PlannerError):
    def __init__(self, problem, reason: str):
        super().__init__(f"no reduction for {problem}: {reason}")
        self.problem = problem
        self.reason = reason


class ScriptError(PlannerError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class InvalidReductionTree(PlannerError):
    def __init__(self, report):
        first = report.first
        super().__init__(f"invalid reduction tree: {first}" if first else "invalid reduction tree")
        self.report = report
