from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple

import numpy as np

from services.exactlin.field import PrimeField
from services.exactlin.matrix import Matrix, left_null_basis, mulmod, rank
from services.exactlin.rng import RngState
from services.segre.model import Format, FormatError, Problem, expected_span_dim
from services.segre.points import (
    AuxPoint,
    DecomposablePoint,
    aux_block,
    sample_aux,
    sample_point,
    tangent_block,
)


@dataclass(frozen=True)
class SpanBlock:
    kind: str          # "tangent" | "aux"
    factor: int        # omitted factor for aux blocks, -1 for tangent blocks
    index: int
    start: int
    stop: int


@dataclass(frozen=True, eq=False)
class SpanMatrix:
    """Row space is the Terracini span T of the contact points plus aux blocks."""

    format: Format
    field: PrimeField
    matrix: Matrix
    blocks: Tuple[SpanBlock, ...]
    rank: int
    points: Tuple[DecomposablePoint, ...]
    aux: Tuple[AuxPoint, ...]

    @property
    def ambient(self) -> int:
        return self.format.ambient_dim

    @property
    def fills_ambient(self) -> bool:
        return self.rank >= self.ambient

    @cached_property
    def functionals(self) -> Matrix:
        """Linear forms cutting out T; D - rank of them."""
        if self.matrix.rows == 0:
            return Matrix.identity(self.field, self.ambient)
        return left_null_basis(self.matrix)


def terracini_span(
    points: Sequence[DecomposablePoint],
    aux: Sequence[AuxPoint],
    fmt: Format,
    field: PrimeField,
) -> SpanMatrix:
    blocks = []
    parts = []
    row = 0
    for j, x in enumerate(points):
        x.check(fmt)
        block = tangent_block(x, field)
        blocks.append(SpanBlock("tangent", -1, j, row, row + block.rows))
        parts.append(block)
        row += block.rows
    per_factor = [0] * fmt.n
    for w in aux:
        w.check(fmt)
        block = aux_block(w, fmt, field)
        blocks.append(SpanBlock("aux", w.omitted, per_factor[w.omitted], row, row + block.rows))
        per_factor[w.omitted] += 1
        parts.append(block)
        row += block.rows
    matrix = Matrix.vstack(field, parts, fmt.ambient_dim)
    return SpanMatrix(
        format=fmt,
        field=field,
        matrix=matrix,
        blocks=tuple(blocks),
        rank=rank(matrix),
        points=tuple(points),
        aux=tuple(aux),
    )


def sample_problem_span(problem: Problem, rng: RngState, field: PrimeField) -> SpanMatrix:
    """Contact points first, then aux points factor by factor."""
    fmt = problem.format
    points = [sample_point(fmt, rng, field) for _ in range(problem.k)]
    aux = [sample_aux(fmt, i, rng, field) for i in range(fmt.n) for _ in range(problem.p[i])]
    return terracini_span(points, aux, fmt, field)


def contains_vector(span: SpanMatrix, vector: np.ndarray) -> bool:
    """Membership of a coordinate vector in the row space of T."""
    if vector.shape != (span.ambient,):
        raise FormatError("vector does not live in the ambient space")
    column = np.mod(vector.astype(np.int64), span.field.p).reshape(-1, 1)
    return not np.any(mulmod(span.functionals.entries, column, span.field))


__all__ = [
    "SpanBlock",
    "SpanMatrix",
    "terracini_span",
    "sample_problem_span",
    "contains_vector",
    "expected_span_dim",
]
