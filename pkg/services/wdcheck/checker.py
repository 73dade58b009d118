"""
Randomized first-order checker for (k, p_1, .., p_n)-not weak defectivity.

Soundness is one-sided. Sample data are integers; reducing mod p can only
lower the rank of the span and raise the kernel dimension of the
linearization, so a PASS at any prime holds over the rationals for the same
integer points, and by semicontinuity for general complex points. A FAIL is
evidence only.
"""
from __future__ import annotations

import logging
from typing import List, Tuple

from services.exactlin.field import PrimeField
from services.exactlin.rng import RngState
from services.segre.model import Format, Problem, expected_span_dim
from services.segre.span import sample_problem_span
from services.wdcheck.errors import InvalidProblem
from services.wdcheck.linearization import kernel_dimension
from services.wdcheck.models import FAIL_NOTE, PASS_NOTE, FirstOrderReport

log = logging.getLogger(__name__)


def _run_trial(problem: Problem, rng: RngState, field: PrimeField) -> Tuple[int, Tuple[int, ...]]:
    span = sample_problem_span(problem, rng, field)
    if span.fills_ambient:
        return span.rank, ()
    functionals = span.functionals
    kernels = tuple(kernel_dimension(span, x, functionals) for x in span.points)
    return span.rank, kernels


def check_not_wdef(
    problem: Problem,
    trials: int,
    rng: RngState,
    field: PrimeField,
) -> FirstOrderReport:
    if problem.k == 0:
        raise InvalidProblem("the first-order check needs k >= 1; k = 0 claims go to the contact module")
    if trials < 1:
        raise InvalidProblem("trials must be >= 1")
    fmt = problem.format
    expected = expected_span_dim(problem)
    if expected >= fmt.ambient_dim:
        log.info("%s: expected span %d fills the ambient %d", problem, expected, fmt.ambient_dim)
        return FirstOrderReport.vacuous(problem, field.p, rng.seed, trials)

    seen: List[Tuple[int, int, Tuple[int, ...]]] = []
    for t in range(trials):
        span_rank, kernels = _run_trial(problem, rng.child(t), field)
        log.debug("trial %d of %s: span %d/%d kernels %s", t, problem, span_rank, expected, kernels)
        if span_rank == expected and all(d == fmt.n for d in kernels):
            log.info("%s PASS at trial %d (p=%d)", problem, t, field.p)
            return FirstOrderReport(
                problem=problem,
                prime=field.p,
                seed=rng.seed,
                trials=trials,
                trial=t,
                span_rank=span_rank,
                expected_rank=expected,
                ambient=fmt.ambient_dim,
                kernel_dims=kernels,
                verdict="PASS",
                note=PASS_NOTE,
            )
        seen.append((t, span_rank, kernels))

    best = max(seen, key=lambda item: (item[1], -item[0]))
    log.warning("%s probable FAIL after %d trials: span %d/%d kernels %s", problem, trials, best[1], expected, best[2])
    return FirstOrderReport(
        problem=problem,
        prime=field.p,
        seed=rng.seed,
        trials=trials,
        trial=best[0],
        span_rank=best[1],
        expected_rank=expected,
        ambient=fmt.ambient_dim,
        kernel_dims=best[2],
        verdict="FAIL",
        note=FAIL_NOTE,
    )


def secant_dimension(fmt: Format, k: int, rng: RngState, field: PrimeField, trials: int = 1) -> Tuple[int, int]:
    """(actual, expected) affine dimension of the k-th secant's tangent span."""
    if k < 1:
        raise InvalidProblem("k must be >= 1")
    problem = Problem.of(fmt.dims, k)
    expected = min(fmt.ambient_dim, k * fmt.tangent_dim)
    actual = max(sample_problem_span(problem, rng.child(t), field).rank for t in range(max(1, trials)))
    return actual, expected


def is_defective(fmt: Format, k: int, rng: RngState, field: PrimeField, trials: int = 3) -> bool:
    actual, expected = secant_dimension(fmt, k, rng, field, trials)
    return actual < expected
