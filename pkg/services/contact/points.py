"""Z_p-rational points of a zero-dimensional multiprojective locus."""
from __future__ import annotations

import itertools
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from services.contact.errors import NotZeroDimensional
from services.contact.groebner import Budget, groebner, is_unit_ideal
from services.contact.polyring import BlockRing, MultiPoly, specialize

log = logging.getLogger(__name__)

Point = Tuple[Tuple[int, ...], ...]


def univariate_roots(f: MultiPoly, var: int, prime: int) -> np.ndarray:
    """All x in Z_p with f(x) = 0, f involving ``var`` only."""
    degree = max(m[var] for m in f.keys())
    coeffs = [0] * (degree + 1)
    for m, c in f.items():
        coeffs[m[var]] = int(c) % prime
    xs = np.arange(prime, dtype=np.int64)
    acc = np.zeros(prime, dtype=np.int64)
    for c in reversed(coeffs):
        acc = np.mod(acc * xs + c, prime)
    return np.flatnonzero(acc == 0)


def _solve(polys: List[MultiPoly], order: Sequence[int], prime: int, assigned: dict) -> List[dict]:
    polys = [f for f in polys if f]
    if any(f.LM == f.ring.zero_monom for f in polys):
        return []
    if not order:
        return [dict(assigned)]
    var, rest = order[0], order[1:]
    remaining = set(rest)
    local = [f for f in polys if not any(m[v] for m in f.keys() for v in remaining)]
    univariate = [f for f in local if any(m[var] for m in f.keys())]
    if not univariate:
        raise NotZeroDimensional("a coordinate is unconstrained")
    candidates = None
    for f in univariate:
        roots = set(univariate_roots(f, var, prime).tolist())
        candidates = roots if candidates is None else candidates & roots
    solutions = []
    for x in sorted(candidates):
        nxt = [specialize(f, var, x, prime) for f in polys]
        solutions.extend(_solve(nxt, rest, prime, {**assigned, var: x}))
    return solutions


def rational_points(
    ring: BlockRing,
    generators: Sequence[MultiPoly],
    budget: Optional[Budget] = None,
) -> List[Point]:
    """
    Points with each block vector normalised so its first nonzero entry is 1.
    Each point lives in exactly one chart (choice of pivot per block).
    """
    lex = ring.with_order("lex")
    prime = ring.prime
    base = [lex.from_terms(ring.int_terms(g)) for g in generators if g]
    found: List[Point] = []
    for pivots in itertools.product(*(range(a) for a in ring.dims)):
        chart = list(base)
        for b, c in enumerate(pivots):
            chart.append(lex.gen(b, c) - 1)
            chart.extend(lex.gen(b, j) for j in range(c))
        basis = groebner(chart, budget=budget, stage="points")
        if is_unit_ideal(basis):
            continue
        # lex: eliminate from the last variable upwards
        order = list(reversed(range(lex.ngens)))
        for sol in _solve(basis, order, prime, {}):
            values = [sol[v] for v in range(lex.ngens)]
            found.append(tuple(
                tuple(values[i] for i in lex.block(b)) for b in range(len(ring.dims))
            ))
    log.debug("%d rational points over %d charts", len(found), int(np.prod(ring.dims)))
    return sorted(found)
