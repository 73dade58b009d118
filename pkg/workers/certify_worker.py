from __future__ import annotations

from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from services.bounds.exceptions import known_exceptions
from services.bounds.formulas import k_max, kruskal_holds
from services.certvault.certificate import Certificate, RunConfig, TreeRecord, caveats_for
from services.certvault.store import CACHEABLE_ROUTES, CertStore
from services.contact.groebner import Budget
from services.exactlin.field import PrimeField
from services.exactlin.rng import RngState
from services.planner.errors import NoPlan
from services.planner.execute import ExecutionResult, execute, run_leaf
from services.planner.models import DirectCheck, Node, ReductionTree
from services.planner.planner import plan
from services.planner.power_split import PowerSplit
from services.planner.script import format_script
from services.segre.model import Problem, is_subabundant
from services.shared.config import settings
from services.shared.ids import new_id
from services.shared.logging import get_trace_logger

KRUSKAL_CITATION = "Kruskal: 2k + n - 1 <= sum_i min(k, a_i)"
K_MAX_REASON = "proved impossible: k > k_max = {k_max}, the generic rank-k tensor has infinitely many decompositions"


class CertifyRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    dims: Tuple[int, ...]
    k: int
    p: Optional[Tuple[int, ...]] = None
    prime: int = settings.prime
    seed: int = settings.seed
    trials: int = settings.trials
    mode: Literal["first-order", "groebner", "both"] = settings.mode
    budget: int = settings.budget
    workers: int = settings.workers
    cache: str = settings.cache
    emit: str = ""
    threshold: int = settings.direct_check_max_ambient

    def problem(self) -> Problem:
        return Problem.of(self.dims, self.k, self.p)

    def run_config(self) -> RunConfig:
        return RunConfig(
            prime=self.prime,
            seed=self.seed,
            trials=self.trials,
            mode=self.mode,
            budget=self.budget,
            workers=self.workers,
            cache=self.cache,
            emit=self.emit,
        )


def _certificate(command: str, problem: Problem, config: RunConfig, **fields) -> Certificate:
    return Certificate(
        command=command,
        format=problem.dims,
        k=problem.k,
        p=problem.p,
        mode=config.mode,
        config=config,
        **fields,
    ).sealed()


def certificate_for_tree(
    command: str,
    tree: ReductionTree,
    result: ExecutionResult,
    config: RunConfig,
    strategy: str,
) -> Certificate:
    reports = list(result.leaves)
    cited = sorted({leaf.lemma.tag for leaf in reports if leaf.lemma is not None})
    failed = result.failures
    if result.verdict == "PASS":
        reason = f"every leaf of the {strategy} reduction passed ({len(reports)} leaves)"
    else:
        first = failed[0]
        reason = f"leaf {' > '.join(first.path)}: {first.verdict}"
        if result.verdict == "FAIL":
            reason = "probable failure (randomized evidence) at " + reason
    return _certificate(
        command,
        tree.root_problem,
        config,
        verdict=result.verdict,
        route="plan",
        reason=reason,
        reports=tuple(reports),
        tree=TreeRecord(strategy=strategy, script=format_script(tree), node_verdicts=result.node_verdicts),
        caveats=tuple(caveats_for(reports)),
        cited=tuple(cited),
    )


def emit_certificate(cert: Certificate, path: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(cert.to_json() + "\n", encoding="utf-8")


def certify(request: CertifyRequest, trace_id: Optional[str] = None) -> Certificate:
    """
    Fixed pipeline: k_max guard, known exceptions, cache, direct check below
    the ambient threshold, planner above it. Writes the certificate when
    `emit` is set and caches PASS results.
    """
    trace_id = trace_id or new_id("run")
    tlog = get_trace_logger(trace_id, "certify_worker")
    problem = request.problem()
    config = request.run_config()
    plain = not any(problem.p)
    tlog.info("certify %s", problem)

    cert = _run_pipeline(problem, request, config, plain, tlog)

    # ---------- Certificate ----------
    if request.emit:
        emit_certificate(cert, request.emit)
    if request.cache and cert.verdict == "PASS" and cert.route in CACHEABLE_ROUTES:
        CertStore(request.cache).append(cert)
    tlog.info("%s: %s via %s", problem, cert.verdict, cert.route)
    return cert


def _run_pipeline(problem: Problem, request: CertifyRequest, config: RunConfig, plain: bool, tlog) -> Certificate:
    # ---------- k_max guard ----------
    if plain:
        limit = k_max(problem.dims)
        if problem.k > limit:
            return _certificate("certify", problem, config, verdict="FAIL", route="k-max",
                                reason=K_MAX_REASON.format(k_max=limit))

    # ---------- Known exceptions ----------
    if plain and problem.n == 3:
        matches = known_exceptions(problem.dims, problem.k)
        blocking = [m for m in matches if not m.identifiable]
        if blocking:
            return _certificate("certify", problem, config, verdict="KNOWN-EXCEPTION",
                                route="known-exception",
                                reason="known exception (cited): " + "; ".join(m.citation for m in blocking),
                                exceptions=tuple(matches), cited=tuple(m.row for m in blocking))
        if matches:
            return _certificate("certify", problem, config, verdict="PASS", route="known-exception",
                                reason="identifiable by citation: " + "; ".join(m.citation for m in matches),
                                exceptions=tuple(matches), cited=tuple(m.row for m in matches))

    # ---------- Cache (monotone closure) ----------
    if request.cache:
        hit = CertStore(request.cache).lookup(problem, request.mode)
        if hit is not None:
            return _certificate("certify", problem, config, verdict="PASS", route="cache",
                                reason=f"answered by the cached PASS for {hit.format} k={hit.k} p={hit.p}",
                                cited=(hit.digest,))

    field = PrimeField(request.prime)
    rng = RngState(request.seed)
    budget = Budget.from_steps(request.budget)

    # ---------- Direct check ----------
    if problem.format.ambient_dim <= request.threshold:
        if not is_subabundant(problem):
            if plain and kruskal_holds(problem.dims, problem.k):
                return _certificate("certify", problem, config, verdict="PASS", route="kruskal",
                                    reason="criterion not applicable; Kruskal's inequality holds",
                                    cited=(KRUSKAL_CITATION,))
            return _certificate("certify", problem, config, verdict="INCOMPLETE", route="none",
                                reason="criterion not applicable: the expected span fills the ambient space")
        mode = request.mode if problem.k >= 1 else "groebner"
        node = Node(problem=problem, rule=DirectCheck(mode=mode))
        leaf = run_leaf(node, (problem.key,), rng.child(0), field, budget, request.trials)
        verdict = {"PASS": "PASS", "FAIL": "FAIL"}.get(leaf.verdict, "INCOMPLETE")
        reasons = {
            "PASS": f"{mode} check passed at p = {field.p}",
            "FAIL": f"probable failure (randomized evidence) in the {mode} check at p = {field.p}",
            "INCOMPLETE": f"{mode} check aborted on its budget",
        }
        return _certificate("certify", problem, config, verdict=verdict, route="direct",
                            reason=reasons[verdict], reports=(leaf,), caveats=tuple(caveats_for([leaf])))

    # ---------- Planner ----------
    tried: List[str] = []
    for base in (2, 3):
        strategy = PowerSplit(base=base, threshold=request.threshold)
        try:
            tree = plan(problem, strategy)
        except NoPlan as exc:
            tried.append(exc.reason)
            continue
        tlog.info("planned %s with base %d: %d nodes", problem, base, len(tree.nodes))
        result = execute(tree, rng, field, budget, request.trials, request.workers)
        return certificate_for_tree("certify", tree, result, config, f"power-split base {base}")
    return _certificate("certify", problem, config, verdict="INCOMPLETE", route="none",
                        reason="no reduction plan: " + "; ".join(tried))

