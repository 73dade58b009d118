"""
Buchberger's algorithm over GF(p).

Pair selection is by sugar degree, ties broken by the ring order of the
lcm; pairs are pruned with the Gebauer-Moller criteria. The output is the
reduced basis, monic, sorted by leading monomial. A Budget bounds the number
of S-pair reductions and the basis size; exceeding it raises
ComputationAborted.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Set, Tuple

from sympy.polys.rings import PolyRing

from services.contact.errors import ComputationAborted
from services.contact.polyring import MultiPoly, transport
from services.shared.config import settings

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Budget:
    max_pairs: int = 20000
    max_basis: int = 5000
    max_monomials: int = 2_000_000

    @classmethod
    def from_steps(cls, steps: int) -> "Budget":
        steps = max(1, int(steps))
        return cls(max_pairs=steps, max_basis=max(256, steps // 2), max_monomials=steps * 100)


DEFAULT_BUDGET = Budget.from_steps(settings.budget)


def spoly(f: MultiPoly, g: MultiPoly, lmf=None, lmg=None) -> MultiPoly:
    """S-polynomial of monic f and g."""
    lmf = f.LM if lmf is None else lmf
    lmg = g.LM if lmg is None else lmg
    R = f.ring
    lcm = R.monomial_lcm(lmf, lmg)
    s1 = f.mul_monom(R.monomial_div(lcm, lmf))
    s2 = g.mul_monom(R.monomial_div(lcm, lmg))
    return s1 - s2


def _pair_sugar(i: int, j: int, lmG, sugar) -> int:
    lcm = tuple(max(a, b) for a, b in zip(lmG[i], lmG[j]))
    d = sum(lcm)
    return max(sugar[i] + d - sum(lmG[i]), sugar[j] + d - sum(lmG[j]))


def _select(P: Set[Tuple[int, int]], lmG, sugar, R: PolyRing) -> Tuple[int, int]:
    def key(pair):
        i, j = pair
        lcm = R.monomial_lcm(lmG[i], lmG[j])
        return _pair_sugar(i, j, lmG, sugar), R.order(lcm), j, i

    return min(P, key=key)


def _update(G: List[MultiPoly], P: Set[Tuple[int, int]], f: MultiPoly, lmG) -> Set[Tuple[int, int]]:
    """Gebauer-Moller update of the pair set for a new basis element f."""
    lmf = f.LM
    R = f.ring
    lcm = R.monomial_lcm
    mul = R.monomial_mul
    div = R.monomial_div

    P = {
        p for p in P
        if (not div(lcm(lmG[p[0]], lmG[p[1]]), lmf)
            or lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[0]], lmf)
            or lcm(lmG[p[1]], lmG[p[0]]) == lcm(lmG[p[1]], lmf))
    }
    lcm_groups = {}
    for i in range(len(G)):
        lcm_groups.setdefault(lcm(lmG[i], lmf), []).append(i)
    minimal = []
    for L in sorted(lcm_groups, key=R.order):
        if all(not div(L, L_) for L_ in minimal):
            minimal.append(L)
    new = set()
    for L in minimal:
        if not any(lcm(lmG[i], lmf) == mul(lmG[i], lmf) for i in lcm_groups[L]):
            new.add((min(lcm_groups[L]), len(G)))
    return P | new


def minimalize(G: Sequence[MultiPoly]) -> List[MultiPoly]:
    if not G:
        return []
    R = G[0].ring
    out: List[MultiPoly] = []
    for f in sorted(G, key=lambda h: R.order(h.LM)):
        if all(not R.monomial_div(f.LM, g.LM) for g in out):
            out.append(f)
    return out


def interreduce(G: Sequence[MultiPoly]) -> List[MultiPoly]:
    G = list(G)
    out = []
    for i in range(len(G)):
        out.append(G[i].rem(G[:i] + G[i + 1:]).monic())
    return out


def _is_unit(f: MultiPoly) -> bool:
    return bool(f) and f.LM == f.ring.zero_monom


def groebner(
    gens: Sequence[MultiPoly],
    order: Optional[str] = None,
    budget: Optional[Budget] = None,
    stage: str = "groebner",
) -> List[MultiPoly]:
    """Reduced Groebner basis of ``gens``; ``[1]`` for the unit ideal, ``[]`` for zero."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    budget = budget or DEFAULT_BUDGET
    R = gens[0].ring
    if order is not None and str(R.order) != order:
        R2 = R.clone(order=order)
        p = R.domain.mod
        ident = list(range(R.ngens))
        gens = [transport(g, R2, ident, p) for g in gens]
        R = R2

    G: List[MultiPoly] = []
    lmG: List[tuple] = []
    sugar: List[int] = []
    P: Set[Tuple[int, int]] = set()
    for f in gens:
        f = f.monic()
        if _is_unit(f):
            return [R.one]
        P = _update(G, P, f, lmG)
        G.append(f)
        lmG.append(f.LM)
        sugar.append(max(sum(m) for m in f.keys()))

    steps = 0
    while P:
        i, j = _select(P, lmG, sugar, R)
        P.remove((i, j))
        steps += 1
        if steps > budget.max_pairs:
            log.warning("%s: pair budget %d exhausted with basis size %d", stage, budget.max_pairs, len(G))
            raise ComputationAborted(stage, f"more than {budget.max_pairs} S-pair reductions")
        s = spoly(G[i], G[j], lmG[i], lmG[j])
        r = s.rem(G)
        if not r:
            continue
        r = r.monic()
        if _is_unit(r):
            return [R.one]
        s_sugar = _pair_sugar(i, j, lmG, sugar)
        P = _update(G, P, r, lmG)
        G.append(r)
        lmG.append(r.LM)
        sugar.append(s_sugar)
        if len(G) > budget.max_basis:
            raise ComputationAborted(stage, f"basis grew past {budget.max_basis} elements")

    basis = interreduce(minimalize(G))
    log.debug("%s: %d pairs reduced, reduced basis of %d", stage, steps, len(basis))
    return sorted(basis, key=lambda h: R.order(h.LM))


def reduce(f: MultiPoly, G: Sequence[MultiPoly]) -> MultiPoly:
    if not G or not f:
        return f
    return f.rem(list(G))


def contains(G: Sequence[MultiPoly], f: MultiPoly) -> bool:
    """Ideal membership against a Groebner basis."""
    return not reduce(f, G)


def is_groebner(G: Sequence[MultiPoly]) -> bool:
    """Every S-polynomial reduces to zero."""
    G = [g.monic() for g in G if g]
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if reduce(spoly(G[i], G[j]), G):
                return False
    return True


def is_unit_ideal(G: Sequence[MultiPoly]) -> bool:
    return any(_is_unit(g) for g in G)
