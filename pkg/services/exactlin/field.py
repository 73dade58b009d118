from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sympy import isprime

DEFAULT_PRIME = 32003

# residues are held in int64; a product of two must not overflow
MAX_PRIME = 2**31


class FieldError(ValueError):
    pass


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class PrimeField:
    """Z_p with 2 < p < 2^31."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p <= 2 or self.p >= MAX_PRIME:
            raise FieldError(f"modulus out of range: {self.p!r}")
        if not isprime(self.p):
            raise FieldError(f"modulus is not prime: {self.p}")

    def reduce(self, values) -> np.ndarray:
        return np.mod(np.asarray(values, dtype=np.int64), self.p)

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, self.p - 2, self.p)

    def safe_inner(self) -> int:
        """Largest inner dimension whose dot products fit in int64 before reduction."""
        worst = (self.p - 1) ** 2
        return max(1, (2**63 - 1) // worst)
