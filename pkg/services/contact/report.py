"""Exact contact-locus verdicts for one problem (groebner check mode)."""
from __future__ import annotations

import logging
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

from services.contact.errors import ComputationAborted
from services.contact.groebner import Budget
from services.contact.hilbert import CONVENTION, dim_degree
from services.contact.ideal import tangency_ideal
from services.contact.saturation import saturate
from services.exactlin.field import PrimeField
from services.exactlin.rng import ALGORITHM, RngState
from services.segre.model import Problem, expected_span_dim
from services.segre.span import sample_problem_span

log = logging.getLogger(__name__)

ContactVerdict = Literal["PASS", "FAIL", "VACUOUS", "ABORTED"]


class ContactReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    problem: Problem
    prime: int
    seed: int
    prng: str = ALGORITHM
    span_rank: int
    expected_rank: int
    ambient: int
    dim: Optional[int] = None
    degree: Optional[int] = None
    reduced_degree: Optional[int] = None
    convention: str = CONVENTION
    verdict: ContactVerdict
    stage: Optional[str] = None
    note: str = ""


def expected_locus(problem: Problem) -> tuple:
    """(dim, degree) of the contact locus when the claim holds."""
    return (-1, 0) if problem.k == 0 else (0, problem.k)


def check_contact_locus(
    problem: Problem,
    rng: RngState,
    field: PrimeField,
    budget: Optional[Budget] = None,
) -> ContactReport:
    """
    Samples the span the same way the first-order check does (child seed 0),
    then saturates the tangency ideal and compares its dimension and degree
    with the k sample points.
    """
    expected = expected_span_dim(problem)
    span = sample_problem_span(problem, rng.child(0), field)
    common = dict(
        problem=problem,
        prime=field.p,
        seed=rng.seed,
        span_rank=span.rank,
        expected_rank=expected,
        ambient=problem.format.ambient_dim,
    )
    if expected >= problem.format.ambient_dim or span.fills_ambient:
        return ContactReport(**common, verdict="VACUOUS", note="span fills the ambient space")
    try:
        ideal = saturate(tangency_ideal(span, seed=rng.seed), rng.child(1), budget)
        locus = dim_degree(ideal, budget, rng.child(2))
    except ComputationAborted as exc:
        log.warning("%s: %s", problem, exc)
        return ContactReport(**common, verdict="ABORTED", stage=exc.stage, note=str(exc))
    for x in span.points:
        if not ideal.ring.vanishes_at(ideal.generators, x.vectors):
            raise RuntimeError("a contact point is not on its own saturated contact locus")
    holds = span.rank == expected and (locus.dim, locus.degree) == expected_locus(problem)
    return ContactReport(
        **common,
        dim=locus.dim,
        degree=locus.degree,
        reduced_degree=locus.reduced_degree,
        verdict="PASS" if holds else "FAIL",
        note="exact contact locus at one prime" if holds else "contact locus larger than the sample points",
    )
