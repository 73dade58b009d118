from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from services.exactlin.field import PrimeField
from services.exactlin.matrix import Matrix
from services.exactlin.rng import RngState, random_vector
from services.segre.model import Format, FormatError


@dataclass(frozen=True, eq=False)
class DecomposablePoint:
    """x = v_1 ⊗ ... ⊗ v_n, kept as an affine representative."""

    vectors: Tuple[np.ndarray, ...]

    def check(self, fmt: Format) -> None:
        if len(self.vectors) != fmt.n:
            raise FormatError("point has the wrong number of factors")
        for v, a in zip(self.vectors, fmt.dims):
            if v.shape != (a,) or not np.any(v):
                raise FormatError("point vectors must be nonzero and match the format")

    def coordinates(self, field: PrimeField) -> np.ndarray:
        return outer(self.vectors, field)


@dataclass(frozen=True, eq=False)
class AuxPoint:
    """A point w of the product of all factors except ``omitted``; its block is A_i ⊗ w."""

    omitted: int
    vectors: Tuple[np.ndarray, ...]

    def check(self, fmt: Format) -> None:
        others = [a for i, a in enumerate(fmt.dims) if i != self.omitted]
        if not 0 <= self.omitted < fmt.n or len(self.vectors) != len(others):
            raise FormatError("aux point does not match the format")
        for v, a in zip(self.vectors, others):
            if v.shape != (a,) or not np.any(v):
                raise FormatError("aux vectors must be nonzero and match the format")

    def slots(self) -> list:
        vs: list = list(self.vectors)
        vs.insert(self.omitted, None)
        return vs


def outer(vectors: Sequence[np.ndarray], field: PrimeField) -> np.ndarray:
    """Row-major outer product, factor 1 slowest."""
    out = np.ones(1, dtype=np.int64)
    for v in vectors:
        out = np.mod(np.kron(out, np.asarray(v, dtype=np.int64)), field.p)
    return out


def slot_rows(vectors: Sequence[Optional[np.ndarray]], slot: int, dim: int, field: PrimeField) -> np.ndarray:
    """Rows left ⊗ e_c ⊗ right for c < dim, with ``vectors[slot]`` ignored."""
    left = outer(vectors[:slot], field)
    right = outer(vectors[slot + 1:], field)
    rows = np.kron(left[None, :], np.eye(dim, dtype=np.int64))
    return np.mod(np.kron(rows, right[None, :]), field.p)


def tangent_block(x: DecomposablePoint, field: PrimeField) -> Matrix:
    """Rows span sum_i v_1 ⊗ .. ⊗ A_i ⊗ .. ⊗ v_n."""
    blocks = [slot_rows(x.vectors, i, len(v), field) for i, v in enumerate(x.vectors)]
    return Matrix(field, np.vstack(blocks))


def aux_block(w: AuxPoint, fmt: Format, field: PrimeField) -> Matrix:
    return Matrix(field, slot_rows(w.slots(), w.omitted, fmt.dims[w.omitted], field))


def sample_point(fmt: Format, rng: RngState, field: PrimeField) -> DecomposablePoint:
    return DecomposablePoint(tuple(random_vector(a, rng, field) for a in fmt.dims))


def sample_aux(fmt: Format, omitted: int, rng: RngState, field: PrimeField) -> AuxPoint:
    vectors = tuple(random_vector(a, rng, field) for i, a in enumerate(fmt.dims) if i != omitted)
    return AuxPoint(omitted, vectors)
