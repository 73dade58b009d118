from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict

from services.bounds.exceptions import ExceptionMatch, known_exceptions
from services.bounds.formulas import (
    co_bound,
    criterion_applicable,
    generic_rank,
    is_unbalanced,
    k_max,
    kruskal_holds,
    kruskal_max,
)
from services.bounds.unbalanced import UnbalancedReport, unbalanced_report


class BoundReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    dims: Tuple[int, ...]
    k_max: int
    kruskal_bound: int
    co_bound: Dict[int, int]
    generic_rank: Union[int, str]
    k: Optional[int] = None
    within_k_max: Optional[bool] = None
    kruskal_holds: Optional[bool] = None
    within_co_bound: Optional[bool] = None
    criterion_applicable: Optional[bool] = None
    unbalanced: Optional[UnbalancedReport] = None
    exceptions: List[ExceptionMatch] = []


def bound_report(dims: Sequence[int], k: Optional[int] = None, bases: Sequence[int] = (2, 3)) -> BoundReport:
    dims = tuple(sorted(int(a) for a in dims))
    report = dict(
        dims=dims,
        k_max=k_max(dims),
        kruskal_bound=kruskal_max(dims),
        co_bound={b: co_bound(dims, b) for b in bases},
        generic_rank=generic_rank(dims),
    )
    if k is not None:
        report.update(
            k=k,
            within_k_max=k <= report["k_max"],
            kruskal_holds=kruskal_holds(dims, k),
            within_co_bound=any(k <= v for v in report["co_bound"].values()),
            criterion_applicable=criterion_applicable(dims, k),
            exceptions=known_exceptions(dims, k),
        )
        if is_unbalanced(dims):
            report["unbalanced"] = unbalanced_report(*dims, k)
    return BoundReport(**report)
