from __future__ import annotations

from math import prod
from typing import Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from services.shared.ids import problem_key


class FormatError(ValueError):
    pass


class Format(BaseModel):
    """Factor dimensions (a_1, ..., a_n) of the Segre product, n >= 3."""

    model_config = ConfigDict(frozen=True)

    dims: Tuple[int, ...]

    @field_validator("dims")
    @classmethod
    def _check_dims(cls, dims):
        if len(dims) < 3:
            raise FormatError(f"need at least three factors, got {len(dims)}")
        if any(a < 2 for a in dims):
            raise FormatError(f"every factor dimension must be >= 2, got {dims}")
        return tuple(int(a) for a in dims)

    @classmethod
    def of(cls, *dims: int) -> "Format":
        if len(dims) == 1 and not isinstance(dims[0], int):
            dims = tuple(dims[0])
        return cls(dims=tuple(dims))

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def ambient_dim(self) -> int:
        return prod(self.dims)

    @property
    def tangent_dim(self) -> int:
        """Affine tangent dimension, sum(a_i) - (n - 1) = dim X + 1."""
        return sum(self.dims) - (self.n - 1)

    @property
    def variables(self) -> int:
        return sum(self.dims)

    @property
    def label(self) -> str:
        return "x".join(str(a) for a in self.dims)

    def sorted(self) -> "Format":
        return Format(dims=tuple(sorted(self.dims)))

    def replace(self, index: int, dim: int) -> "Format":
        dims = list(self.dims)
        dims[index] = dim
        return Format(dims=tuple(dims))


class Problem(BaseModel):
    """The claim "(k, p_1, ..., p_n)-not weakly defective" on a format."""

    model_config = ConfigDict(frozen=True)

    format: Format
    k: int
    p: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_counts(self):
        if self.k < 0:
            raise FormatError(f"k must be >= 0, got {self.k}")
        if len(self.p) != self.format.n:
            raise FormatError(f"aux vector has {len(self.p)} entries for {self.format.n} factors")
        if any(x < 0 for x in self.p):
            raise FormatError(f"aux counts must be >= 0, got {self.p}")
        return self

    @classmethod
    def of(cls, dims: Sequence[int], k: int, p: Optional[Sequence[int]] = None) -> "Problem":
        fmt = Format(dims=tuple(dims))
        return cls(format=fmt, k=k, p=tuple(p) if p is not None else (0,) * fmt.n)

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.format.dims

    @property
    def n(self) -> int:
        return self.format.n

    @property
    def key(self) -> str:
        return problem_key(self.dims, self.k, self.p)

    def permuted(self, perm: Sequence[int]) -> "Problem":
        """Child factor t is parent factor perm[t] (0-based)."""
        if sorted(perm) != list(range(self.n)):
            raise FormatError(f"not a permutation of {self.n} factors: {tuple(perm)}")
        return Problem.of([self.dims[i] for i in perm], self.k, [self.p[i] for i in perm])

    def dominates(self, other: "Problem") -> bool:
        """Same dims, (k, p) >= other's componentwise."""
        return (
            self.dims == other.dims
            and self.k >= other.k
            and all(a >= b for a, b in zip(self.p, other.p))
        )

    def __str__(self) -> str:
        return f"<{self.format.label}; k={self.k}; p={','.join(map(str, self.p))}>"


def expected_span_dim(problem: Problem) -> int:
    fmt = problem.format
    count = problem.k * fmt.tangent_dim + sum(pi * ai for pi, ai in zip(problem.p, fmt.dims))
    return min(fmt.ambient_dim, count)


def is_subabundant(problem: Problem) -> bool:
    """Expected span strictly inside the ambient space."""
    fmt = problem.format
    count = problem.k * fmt.tangent_dim + sum(pi * ai for pi, ai in zip(problem.p, fmt.dims))
    return count < fmt.ambient_dim
