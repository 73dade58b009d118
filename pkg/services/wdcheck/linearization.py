"""
First-order form of the containment T_y X ⊆ T near a contact point.

For y = v_1 ⊗ ... ⊗ v_n, the conditions ℓ(v_1 ⊗ .. b (slot j) .. ⊗ v_n) = 0
(ℓ a functional cutting T, b a basis vector of A_j) are differentiated in the
directions (e_1, ..., e_n) ∈ ⊕ A_i. Rows are indexed by (ℓ, j, b) and columns
by (i, c); the kernel always contains the n rescalings e_i = λ_i v_i.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from services.exactlin.field import PrimeField
from services.exactlin.matrix import Matrix, nullity
from services.segre.points import DecomposablePoint
from services.segre.span import SpanMatrix
from services.wdcheck.errors import SpanFillsAmbient


def _contract(tensor: np.ndarray, axis: int, v: np.ndarray, field: PrimeField) -> np.ndarray:
    p = field.p
    if v.shape[0] <= field.safe_inner():
        return np.mod(np.tensordot(tensor, v, axes=([axis], [0])), p)
    acc = np.zeros(tensor.shape[:axis] + tensor.shape[axis + 1:], dtype=np.int64)
    for c in range(v.shape[0]):
        acc = np.mod(acc + np.mod(np.take(tensor, c, axis=axis) * int(v[c]), p), p)
    return acc


def pair_forms(functionals: np.ndarray, x: DecomposablePoint, i: int, j: int, field: PrimeField) -> np.ndarray:
    """ℓ contracted with v_m for every m ∉ {i, j}; shape (r, a_i, a_j)."""
    n = len(x.vectors)
    dims = tuple(len(v) for v in x.vectors)
    t = functionals.reshape((functionals.shape[0],) + dims)
    for m in reversed(range(n)):
        if m in (i, j):
            continue
        t = _contract(t, m + 1, x.vectors[m], field)
    # remaining axes are (r, min(i,j), max(i,j))
    return t if i < j else np.swapaxes(t, 1, 2)


def contact_linearization(
    span: SpanMatrix,
    x: DecomposablePoint,
    functionals: Optional[Matrix] = None,
) -> Matrix:
    if span.fills_ambient:
        raise SpanFillsAmbient(f"span rank {span.rank} equals the ambient dimension {span.ambient}")
    field = span.field
    fmt = span.format
    x.check(fmt)
    ell = (functionals if functionals is not None else span.functionals).entries
    r = ell.shape[0]
    dims = fmt.dims
    offsets = np.concatenate(([0], np.cumsum(dims)))
    total = int(offsets[-1])
    system = np.zeros((r, total, total), dtype=np.int64)
    for i in range(fmt.n):
        for j in range(fmt.n):
            if i == j:
                continue
            forms = pair_forms(ell, x, i, j, field)  # (r, a_i, a_j) indexed [ℓ, c, b]
            system[:, offsets[j]:offsets[j + 1], offsets[i]:offsets[i + 1]] = np.swapaxes(forms, 1, 2)
    return Matrix(field, system.reshape(r * total, total))


def kernel_dimension(span: SpanMatrix, x: DecomposablePoint, functionals: Optional[Matrix] = None) -> int:
    return nullity(contact_linearization(span, x, functionals))
