"""
Run the leaves of a validated reduction tree and fold the verdicts up.

Lemma leaves pass by citation. Direct checks run on a thread pool with a
seed derived from the leaf's index in depth-first order, so the result does
not depend on completion order. A node fails when any child fails and is
incomplete when any child aborted.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from services.contact.groebner import Budget
from services.contact.report import ContactReport, check_contact_locus
from services.exactlin.field import PrimeField
from services.exactlin.rng import RngState
from services.planner.errors import InvalidReductionTree
from services.planner.lemmas import cite
from services.planner.models import BaseLemma, LemmaCert, Node, ReductionTree
from services.planner.validate import validate
from services.segre.model import Problem
from services.shared.config import settings
from services.wdcheck.checker import check_not_wdef
from services.wdcheck.models import FirstOrderReport

log = logging.getLogger(__name__)

LeafVerdict = Literal["PASS", "FAIL", "ABORTED"]
TreeVerdict = Literal["PASS", "FAIL", "INCOMPLETE"]


class LeafResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    key: str
    path: Tuple[str, ...]
    problem: Problem
    rule: str
    verdict: LeafVerdict
    seed: Optional[int] = None
    lemma: Optional[LemmaCert] = None
    first_order: Optional[FirstOrderReport] = None
    contact: Optional[ContactReport] = None


class ExecutionResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    root: str
    verdict: TreeVerdict
    prime: int
    seed: int
    trials: int
    node_verdicts: Dict[str, str]
    leaves: Tuple[LeafResult, ...]

    @property
    def failures(self) -> List[LeafResult]:
        return [leaf for leaf in self.leaves if leaf.verdict != "PASS"]


def _first_paths(tree: ReductionTree) -> Dict[str, Tuple[str, ...]]:
    paths = {tree.root: (tree.root,)}
    for node in tree.walk():
        for child in node.children:
            paths.setdefault(child, paths[node.key] + (child,))
    return paths


def run_leaf(node: Node, path: Tuple[str, ...], rng: RngState, field: PrimeField,
             budget: Optional[Budget], trials: int) -> LeafResult:
    common = dict(key=node.key, path=path, problem=node.problem, rule=node.rule.kind)
    if isinstance(node.rule, BaseLemma):
        cert = cite(node.problem, node.rule.tag, node.rule.u)
        return LeafResult(**common, verdict="PASS", lemma=cert)

    mode = node.rule.mode
    first_order = contact = None
    verdicts = []
    if mode != "groebner" and node.problem.k >= 1:
        first_order = check_not_wdef(node.problem, trials, rng, field)
        verdicts.append(first_order.verdict)
    if mode != "first-order":
        contact = check_contact_locus(node.problem, rng, field, budget)
        verdicts.append(contact.verdict)
    if "FAIL" in verdicts:
        verdict = "FAIL"
    elif all(v == "PASS" for v in verdicts):
        verdict = "PASS"
    else:
        verdict = "ABORTED"
    log.info("leaf %s (%s): %s", node.problem, mode, verdict)
    return LeafResult(**common, verdict=verdict, seed=rng.seed, first_order=first_order, contact=contact)


def _fold(tree: ReductionTree, leaf_verdicts: Dict[str, str]) -> Dict[str, str]:
    verdicts: Dict[str, str] = dict(leaf_verdicts)

    def down(key: str) -> str:
        if key not in verdicts:
            kids = [down(child) for child in tree.nodes[key].children]
            if "FAIL" in kids:
                verdicts[key] = "FAIL"
            elif all(v == "PASS" for v in kids):
                verdicts[key] = "PASS"
            else:
                verdicts[key] = "INCOMPLETE"
        return verdicts[key]

    down(tree.root)
    return verdicts


def execute(
    tree: ReductionTree,
    rng: RngState,
    field: PrimeField,
    budget: Optional[Budget] = None,
    trials: int = settings.trials,
    workers: int = settings.workers,
) -> ExecutionResult:
    report = validate(tree)
    if not report.ok:
        raise InvalidReductionTree(report)

    paths = _first_paths(tree)
    leaves = tree.leaves()
    jobs = [(node, paths[node.key], rng.child(index)) for index, node in enumerate(leaves)]

    def run(job):
        node, path, leaf_rng = job
        return run_leaf(node, path, leaf_rng, field, budget, trials)

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]

    verdicts = _fold(tree, {leaf.key: leaf.verdict for leaf in results})
    root = verdicts[tree.root]
    result = ExecutionResult(
        root=tree.root,
        verdict="INCOMPLETE" if root == "ABORTED" else root,
        prime=field.p,
        seed=rng.seed,
        trials=trials,
        node_verdicts=verdicts,
        leaves=tuple(results),
    )
    log.info("executed tree at %s: %s (%d leaves, %d not passing)", tree.root, result.verdict, len(results), len(result.failures))
    return result
