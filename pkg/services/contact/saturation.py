"""
Saturation by the irrelevant ideals m_i = <v_{i,0}, .., v_{i,a_i-1}>.

For each block the colon by m_i^∞ is taken as the colon by a random linear
form g_i of that block (equal for generic g_i). After the block-local change
of coordinates that turns g_i into the last variable of a grevlex ring, the
colon by g_i^∞ is read off a Groebner basis by dividing every element by the
largest power of that variable it contains. That division gives I : g_i^∞ in
one step, the value where the chain I : g_i, I : g_i^2, .. stops growing, so
a second pass returns the same basis. The ideal is homogeneous in each block,
which that division needs.
"""
from __future__ import annotations

import logging
from typing import List, Optional

from sympy.polys.rings import PolyRing

from services.contact.groebner import Budget, groebner, is_unit_ideal
from services.contact.ideal import ContactIdeal
from services.contact.polyring import BlockRing, MultiPoly, transport
from services.exactlin.field import PrimeField
from services.exactlin.rng import RngState, random_vector

log = logging.getLogger(__name__)

SATURATION_SEED = 0x5A7


def _last_variable_ring(ring: BlockRing, var: int):
    """Ring with ``var`` moved to the end (grevlex) and the index maps both ways."""
    n = ring.ngens
    to_src = [i for i in range(n) if i != var] + [var]
    names = [str(ring.ring.symbols[i]) for i in to_src]
    moved = PolyRing(names, ring.ring.domain, "grevlex")
    back = [0] * n
    for t, s in enumerate(to_src):
        back[s] = t
    return moved, to_src, back


def _strip_last(f: MultiPoly) -> MultiPoly:
    """f divided by the largest power of the last variable dividing it."""
    power = min(m[-1] for m in f.keys())
    if power == 0:
        return f
    return f.ring.from_dict({m[:-1] + (m[-1] - power,): c for m, c in f.items()})


def saturate_block(
    basis: List[MultiPoly],
    ring: BlockRing,
    block: int,
    rng: RngState,
    budget: Optional[Budget] = None,
) -> List[MultiPoly]:
    p = ring.prime
    field = PrimeField(p)
    coords = list(ring.block(block))
    last = coords[-1]
    coeffs = random_vector(len(coords), rng, field)
    while coeffs[-1] == 0:
        coeffs = random_vector(len(coords), rng, field)
    coeffs = [int(c) for c in coeffs]
    inv_last = field.inv(coeffs[-1])

    moved, to_src, back = _last_variable_ring(ring, last)
    y = moved.gens
    Y = y[-1]
    # v_last = (Y - sum_{j<last} c_j y_j) / c_last
    forward = Y
    for c, var in zip(coeffs[:-1], coords[:-1]):
        forward = forward - y[back[var]] * c
    forward = forward * inv_last
    moved_gens = [transport(f, moved, to_src, p).compose(Y, forward) for f in basis]

    moved_basis = groebner(moved_gens, budget=budget, stage=f"saturate block {block + 1}")
    stripped = [_strip_last(g) for g in moved_basis]

    # Y = c_last * v_last + sum_{j<last} c_j y_j
    inverse = Y * coeffs[-1]
    for c, var in zip(coeffs[:-1], coords[:-1]):
        inverse = inverse + y[back[var]] * c
    restored = [transport(g.compose(Y, inverse), ring.ring, back, p) for g in stripped]
    return groebner(restored, budget=budget, stage=f"saturate block {block + 1}")


def saturate(
    ideal: ContactIdeal,
    rng: Optional[RngState] = None,
    budget: Optional[Budget] = None,
) -> ContactIdeal:
    """I : (m_1 ... m_n)^∞ as a reduced grevlex basis."""
    ring = ideal.ring
    if ring.order != "grevlex":
        raise ValueError("saturation works in the grevlex block ring")
    rng = rng or RngState(SATURATION_SEED if ideal.fingerprint.seed is None else ideal.fingerprint.seed)
    basis = groebner(list(ideal.generators), budget=budget, stage="saturate")
    for b in range(len(ring.dims)):
        if not basis or is_unit_ideal(basis):
            break
        basis = saturate_block(basis, ring, b, rng.child(b), budget)
        log.debug("saturated block %d: basis of %d", b + 1, len(basis))
    return ideal.with_generators(basis, saturated=True)
