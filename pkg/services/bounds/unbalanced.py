from __future__ import annotations

from math import comb
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

from services.bounds.formulas import OutOfRegime

UnbalancedVerdict = Literal["IDENTIFIABLE", "NOT-IDENTIFIABLE"]


class UnbalancedReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: int
    b: int
    c: int
    k: int
    verdict: UnbalancedVerdict
    decompositions: Optional[int] = None
    reason: str


def decomposition_count(a: int, b: int) -> int:
    """C(d, (a-1)(b-1)+1) with d = C(a+b-2, a-1)."""
    return comb(comb(a + b - 2, a - 1), (a - 1) * (b - 1) + 1)


def unbalanced_report(a: int, b: int, c: int, k: int) -> UnbalancedReport:
    """
    Identifiable iff k <= (a-1)(b-1) when c >= (a-1)(b-1)+2. At
    k = (a-1)(b-1)+1 the count of decompositions is exact; the border
    c = (a-1)(b-1)+1 is accepted for that k only (there k = k_max).
    """
    a, b = sorted((a, b))
    if k < 1:
        raise ValueError("k must be >= 1")
    border = (a - 1) * (b - 1)
    if c < border + 1 or (c == border + 1 and k != border + 1):
        raise OutOfRegime(f"c = {c} is below the unbalanced threshold {border + 2} for a={a}, b={b}")
    if k <= border:
        return UnbalancedReport(
            a=a, b=b, c=c, k=k, verdict="IDENTIFIABLE", decompositions=1,
            reason=f"k <= (a-1)(b-1) = {border}",
        )
    if k == border + 1:
        count = decomposition_count(a, b)
        return UnbalancedReport(
            a=a, b=b, c=c, k=k,
            verdict="IDENTIFIABLE" if count == 1 else "NOT-IDENTIFIABLE",
            decompositions=count,
            reason=f"k = (a-1)(b-1)+1: {count} decompositions",
        )
    return UnbalancedReport(
        a=a, b=b, c=c, k=k, verdict="NOT-IDENTIFIABLE",
        reason=f"k > (a-1)(b-1)+1 = {border + 1}",
    )
