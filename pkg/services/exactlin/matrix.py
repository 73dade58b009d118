"""
Dense matrices over Z_p backed by read-only numpy int64 arrays.

Elimination is modular Gauss-Jordan with pivot-row normalisation; every
update is reduced mod p immediately so intermediate values stay below p^2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from services.exactlin.field import PrimeField, ShapeError


@dataclass(frozen=True, eq=False)
class Matrix:
    field: PrimeField
    entries: np.ndarray

    def __post_init__(self):
        arr = np.mod(np.array(self.entries, dtype=np.int64, copy=True), self.field.p)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ShapeError(f"matrix must be 2-dimensional, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    # -------------------------
    # constructors
    # -------------------------

    @classmethod
    def from_rows(cls, field: PrimeField, rows: Iterable[Sequence[int]], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        width = {len(r) for r in rows}
        if len(width) != 1:
            raise ShapeError("ragged rows")
        return cls(field, np.array(rows, dtype=np.int64))

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def vstack(cls, field: PrimeField, blocks: Sequence["Matrix"], cols: int) -> "Matrix":
        arrays = [b.entries for b in blocks if b.rows]
        if not arrays:
            return cls.zeros(field, 0, cols)
        if any(a.shape[1] != cols for a in arrays):
            raise ShapeError("blocks disagree on column count")
        return cls(field, np.vstack(arrays))

    # -------------------------
    # shape / access
    # -------------------------

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    def row(self, i: int) -> np.ndarray:
        return self.entries[i]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.entries.T)

    def tolist(self) -> List[List[int]]:
        return self.entries.tolist()

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return matmul(self, other)

    def is_zero(self) -> bool:
        return not np.any(self.entries)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    return Matrix(a.field, mulmod(a.entries, b.entries, a.field))


def mulmod(x: np.ndarray, y: np.ndarray, field: PrimeField) -> np.ndarray:
    """x @ y mod p, chunking the inner dimension so int64 sums cannot overflow."""
    p = field.p
    inner = x.shape[-1]
    step = field.safe_inner()
    if inner <= step:
        return np.mod(x @ y, p)
    out = np.zeros((x.shape[0], y.shape[1]), dtype=np.int64)
    for start in range(0, inner, step):
        stop = min(inner, start + step)
        out = np.mod(out + np.mod(x[:, start:stop] @ y[start:stop], p), p)
    return out


def rref(m: Matrix) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form and pivot columns."""
    p = m.field.p
    a = np.array(m.entries, dtype=np.int64, copy=True)
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = np.mod(a[r, c:] * inv, p)
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            # rows left of c are already zero in the pivot row
            a[hit, c:] = np.mod(a[hit, c:] - np.outer(col[hit], a[r, c:]), p)
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(rref(m)[1])


def kernel(m: Matrix) -> Matrix:
    """Rows form a basis of {v : M v^T = 0}."""
    p = m.field.p
    cols = m.cols
    if m.rows == 0:
        return Matrix.identity(m.field, cols)
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    if free:
        basis[np.arange(len(free)), free] = 1
        if pivots:
            basis[:, pivots] = np.mod(-reduced[: len(pivots)][:, free].T, p)
    return Matrix(m.field, basis)


def left_null_basis(m: Matrix) -> Matrix:
    """
    Functionals on the ambient space (length cols(M)) vanishing on every row
    of M: the annihilator of the row space. Count is cols(M) - rank(M).
    """
    return kernel(m)


def nullity(m: Matrix) -> int:
    return m.cols - rank(m)
