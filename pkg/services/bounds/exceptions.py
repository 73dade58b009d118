"""
Known non-identifiable (or weakly defective) cases for three factors.

The table is data: each row names a matcher rule and its parameters, so new
rows extend it without code. Rows are matched on sorted dims a <= b <= c and
k >= 1; the (3,b,b) row sits just above k_max. The list is complete for c <= 7.
"""
from __future__ import annotations

from math import comb
from typing import Callable, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

EXCEPTIONS_TABLE_VERSION = 1

Classification = Literal["Defective", "WeaklyDefective", "TwoDecompositions"]


class ExceptionRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    row: str
    rule: str
    classification: Classification
    dims: Optional[Tuple[int, int, int]] = None
    k: Optional[int] = None
    decompositions: Optional[int] = None
    citation: str


class ExceptionMatch(BaseModel):
    model_config = ConfigDict(frozen=True)

    row: str
    classification: Classification
    decompositions: Optional[int] = None
    identifiable: bool
    citation: str


EXCEPTIONS_TABLE: Tuple[ExceptionRow, ...] = (
    ExceptionRow(
        row="unbalanced-defective",
        rule="unbalanced_defective",
        classification="Defective",
        citation="defective for c >= (a-1)(b-1)+3 and (a-1)(b-1)+2 <= k < min(c, ab)",
    ),
    ExceptionRow(
        row="3x4x4-5",
        rule="point",
        classification="Defective",
        dims=(3, 4, 4),
        k=5,
        citation="defective (3,4,4), k = 5",
    ),
    ExceptionRow(
        row="3xbxb-odd",
        rule="three_b_b_odd",
        classification="Defective",
        citation="defective (3,b,b), b odd, k = (3b-1)/2",
    ),
    ExceptionRow(
        row="unbalanced-weakly-defective",
        rule="unbalanced_weak",
        classification="WeaklyDefective",
        citation="weakly defective for c >= (a-1)(b-1)+2, k = (a-1)(b-1)+1; "
                 "C(d, k) decompositions with d = C(a+b-2, a-1)",
    ),
    ExceptionRow(
        row="4x4x4-6",
        rule="point",
        classification="TwoDecompositions",
        dims=(4, 4, 4),
        k=6,
        decompositions=2,
        citation="exactly two decompositions: the contact locus is an elliptic normal curve of degree 12",
    ),
    ExceptionRow(
        row="3x6x6-8",
        rule="point",
        classification="WeaklyDefective",
        dims=(3, 6, 6),
        k=8,
        citation="weakly defective (3,6,6), k = 8: contact locus a 4-fold of degree 108 in P^39",
    ),
)


def _unbalanced_defective(row, a, b, c, k) -> Optional[int]:
    border = (a - 1) * (b - 1)
    if c >= border + 3 and border + 2 <= k < min(c, a * b):
        return 0
    return None


def _point(row, a, b, c, k) -> Optional[int]:
    if row.dims == (a, b, c) and row.k == k:
        return row.decompositions if row.decompositions is not None else 0
    return None


def _three_b_b_odd(row, a, b, c, k) -> Optional[int]:
    if a == 3 and b == c and b % 2 == 1 and k == (3 * b - 1) // 2:
        return 0
    return None


def _unbalanced_weak(row, a, b, c, k) -> Optional[int]:
    border = (a - 1) * (b - 1)
    if c >= border + 2 and k == border + 1:
        return comb(comb(a + b - 2, a - 1), border + 1)
    return None


_MATCHERS: Dict[str, Callable] = {
    "unbalanced_defective": _unbalanced_defective,
    "point": _point,
    "three_b_b_odd": _three_b_b_odd,
    "unbalanced_weak": _unbalanced_weak,
}


def known_exceptions(dims: Sequence[int], k: int) -> List[ExceptionMatch]:
    """
    Matching rows; a decomposition count of 0 means "not stated" (defective
    rows have infinitely many). A weakly defective match with exactly one
    decomposition is still identifiable.
    """
    if len(dims) != 3:
        return []
    a, b, c = sorted(int(x) for x in dims)
    if k < 1:
        return []
    matches = []
    for row in EXCEPTIONS_TABLE:
        count = _MATCHERS[row.rule](row, a, b, c, k)
        if count is None:
            continue
        decompositions = count or None
        matches.append(ExceptionMatch(
            row=row.row,
            classification=row.classification,
            decompositions=decompositions,
            identifiable=decompositions == 1,
            citation=row.citation,
        ))
    return matches


def blocking_exceptions(dims: Sequence[int], k: int) -> List[ExceptionMatch]:
    return [m for m in known_exceptions(dims, k) if not m.identifiable]
