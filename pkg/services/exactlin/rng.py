from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from services.exactlin.field import PrimeField
from services.exactlin.matrix import Matrix, rank

ALGORITHM = "PCG64"


def derive_seed(seed: int, index: int) -> int:
    """Child seed for task/trial ``index``; the only split rule used anywhere."""
    state = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return int(state.generate_state(1, dtype=np.uint64)[0])


@dataclass
class RngState:
    """Single-owner sample stream. Parallel work calls ``child`` instead of sharing."""

    seed: int
    algorithm: str = ALGORITHM
    _generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.algorithm != ALGORITHM:
            raise ValueError(f"unsupported PRNG: {self.algorithm}")
        self._generator = np.random.Generator(np.random.PCG64(self.seed))

    def child(self, index: int) -> "RngState":
        return RngState(derive_seed(self.seed, index))

    def integers(self, high: int, size) -> np.ndarray:
        return self._generator.integers(0, high, size=size, dtype=np.int64)


def random_vector(dim: int, rng: RngState, field: PrimeField) -> np.ndarray:
    """Uniform vector over Z_p, redrawn while it is zero."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    while True:
        v = rng.integers(field.p, dim)
        if np.any(v):
            return v


def random_invertible(dim: int, rng: RngState, field: PrimeField) -> np.ndarray:
    while True:
        m = rng.integers(field.p, (dim, dim))
        if rank(Matrix(field, m)) == dim:
            return m
