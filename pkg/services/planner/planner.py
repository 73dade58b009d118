from __future__ import annotations

import logging
from typing import Optional, Union

from services.planner.errors import InvalidReductionTree, ScriptError
from services.planner.models import ReductionTree
from services.planner.power_split import PowerSplit, power_split
from services.planner.script import Script, script_tree
from services.planner.validate import validate
from services.segre.model import Problem

log = logging.getLogger(__name__)

Strategy = Union[PowerSplit, Script]


def plan(problem: Optional[Problem], strategy: Strategy = PowerSplit()) -> ReductionTree:
    """
    Build a validated reduction tree. A script's first line must be the
    problem when one is given; with no problem the script's root is used.
    Raises NoPlan, ScriptError or InvalidReductionTree; never returns an
    invalid tree.
    """
    if isinstance(strategy, Script):
        tree = script_tree(strategy.source())
        if problem is not None and tree.root != problem.key:
            raise ScriptError(f"script is rooted at {tree.root_problem}, not {problem}")
    else:
        if problem is None:
            raise ValueError("power-split planning needs a problem")
        tree = power_split(problem, strategy)
    report = validate(tree)
    if not report.ok:
        raise InvalidReductionTree(report)
    log.debug("planned %s: %d nodes, depth %d", tree.root_problem, len(tree.nodes), tree.depth())
    return tree
