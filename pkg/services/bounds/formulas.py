"""
Closed-form bounds for tensor formats. Factors are sorted ascending on entry.
"""
from __future__ import annotations

from fractions import Fraction
from math import prod
from typing import Dict, Optional, Sequence, Tuple, Union

UNKNOWN = "UNKNOWN"

# largest k certified for the cubic format a x a x a (a = 2..10)
CUBIC_K_TABLE: Dict[int, int] = {2: 2, 3: 3, 4: 5, 5: 9, 6: 13, 7: 18, 8: 22, 9: 27, 10: 32}


class OutOfRegime(ValueError):
    pass


def _sorted(dims: Sequence[int]) -> Tuple[int, ...]:
    dims = tuple(sorted(int(a) for a in dims))
    if len(dims) < 3 or dims[0] < 2:
        raise ValueError(f"need at least three factors of dimension >= 2, got {dims}")
    return dims


def k_max(dims: Sequence[int]) -> int:
    """
    Largest k with k (dim X + 1) <= N + 1; beyond it the generic rank-k tensor
    has infinitely many decompositions. Three factors: floor(abc / (a+b+c-2)).
    """
    dims = _sorted(dims)
    return prod(dims) // (sum(dims) - len(dims) + 1)


def criterion_applicable(dims: Sequence[int], k: int) -> bool:
    """False exactly when k tangent spaces are expected to fill the ambient space."""
    dims = _sorted(dims)
    return k * (sum(dims) - len(dims) + 1) < prod(dims)


def kruskal_holds(dims: Sequence[int], k: int) -> bool:
    """2k + n - 1 <= sum_i min(k, a_i); for n = 3 this is k <= (sum min(a_i, k) - 2) / 2."""
    dims = _sorted(dims)
    if k < 1:
        raise ValueError("k must be >= 1")
    return 2 * k + len(dims) - 1 <= sum(min(k, a) for a in dims)


def kruskal_max(dims: Sequence[int]) -> int:
    """Largest k the inequality certifies (0 if none)."""
    dims = _sorted(dims)
    best = 0
    for k in range(1, sum(dims) + 1):
        if kruskal_holds(dims, k):
            best = k
    return best


def kruskal_cubic(a: int) -> int:
    return (3 * a - 2) // 2


def kruskal_hypercubic(n: int, a: int) -> int:
    return (n * (a - 1) + 1) // 2


def kruskal_bound(dims: Sequence[int], k: Optional[int] = None) -> Union[int, bool]:
    """With k: whether the inequality holds. Without: the largest k it certifies."""
    return kruskal_max(dims) if k is None else kruskal_holds(dims, k)


def _exponent(a: int, base: int) -> int:
    alpha = 0
    while base ** (alpha + 1) <= a:
        alpha += 1
    return alpha


def co_bound(dims: Sequence[int], base: int = 2) -> int:
    """base^(alpha_1 + .. + alpha_{n-1} - (n-1)) over the n-1 smallest factors."""
    if base < 2:
        raise ValueError("base must be >= 2")
    dims = _sorted(dims)
    exponent = sum(_exponent(a, base) for a in dims[:-1]) - (len(dims) - 1)
    return base ** exponent if exponent >= 0 else 0


def co_bound_real(dims: Sequence[int]) -> Fraction:
    """prod_{i<n} (a_i + 1) / 2^(2n - 2): the power-of-two bound never drops below it."""
    dims = _sorted(dims)
    return Fraction(prod(a + 1 for a in dims[:-1]), 2 ** (2 * len(dims) - 2))


def handy_bound(n: int, a: int) -> Fraction:
    """((a + 1) / 4)^(n - 1) for the hypercubic format, a >= 4."""
    if a < 4:
        raise OutOfRegime("the handy bound needs a >= 4")
    return Fraction(a + 1, 4) ** (n - 1)


def cubic_formula_rank(a: int) -> int:
    """ceil(a^3 / (3a - 2)); the generic rank of a x a x a for every a except 3."""
    return -(-a ** 3 // (3 * a - 2))


def generic_rank(dims: Sequence[int]) -> Union[int, str]:
    dims = _sorted(dims)
    if len(dims) != 3:
        return UNKNOWN
    a, b, c = dims
    if a == b == c:
        if a == 3:
            return 5
        return cubic_formula_rank(a)
    border = (a - 1) * (b - 1)
    if c in (border, border + 1):
        return a * b - a - b + 2
    if c >= border + 1:
        return min(c, a * b)
    return UNKNOWN


def is_unbalanced(dims: Sequence[int]) -> bool:
    dims = _sorted(dims)
    return len(dims) == 3 and dims[2] >= (dims[0] - 1) * (dims[1] - 1) + 2


def rankab_identifiable(dims: Sequence[int], k: int) -> bool:
    """c >= (a-1)(b-1) and k = (a-1)(b-1): a unique decomposition."""
    dims = _sorted(dims)
    if len(dims) != 3:
        return False
    a, b, c = dims
    border = (a - 1) * (b - 1)
    return c >= border and k == border
