from __future__ import annotations

from typing import Literal, Tuple

from pydantic import BaseModel, ConfigDict

from services.exactlin.rng import ALGORITHM
from services.segre.model import Problem, expected_span_dim

FirstOrderVerdict = Literal["PASS", "FAIL", "VACUOUS"]

PASS_NOTE = (
    "first-order isolation at the sample points: the contact locus is zero-dimensional "
    "there; isolated tangency points elsewhere are excluded only by the groebner mode"
)
FAIL_NOTE = (
    "probable failure: randomized evidence at one prime, not a proof; "
    "special points or an unlucky prime can only lower the rank"
)
VACUOUS_NOTE = "criterion not applicable: the expected span fills the ambient space"


class FirstOrderReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    problem: Problem
    prime: int
    seed: int
    prng: str = ALGORITHM
    trials: int
    trial: int
    span_rank: int
    expected_rank: int
    ambient: int
    kernel_dims: Tuple[int, ...]
    verdict: FirstOrderVerdict
    note: str

    @classmethod
    def vacuous(cls, problem: Problem, prime: int, seed: int, trials: int = 0) -> "FirstOrderReport":
        return cls(
            problem=problem,
            prime=prime,
            seed=seed,
            trials=trials,
            trial=-1,
            span_rank=0,
            expected_rank=expected_span_dim(problem),
            ambient=problem.format.ambient_dim,
            kernel_dims=(),
            verdict="VACUOUS",
            note=VACUOUS_NOTE,
        )
