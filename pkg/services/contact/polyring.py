"""
Polynomial rings over GF(p) with one variable block per tensor factor.

Variables are ``v{i}_{c}`` (factor i counted from 1, coordinate c from 0),
blocks concatenated in factor order. Ring elements are sympy PolyElements;
the block layout lives on the BlockRing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np
from sympy.polys.domains import GF
from sympy.polys.rings import PolyElement, PolyRing

MultiPoly = PolyElement


def var_name(block: int, coord: int) -> str:
    return f"v{block + 1}_{coord}"


@dataclass(frozen=True, eq=False)
class BlockRing:
    dims: Tuple[int, ...]
    prime: int
    order: str = "grevlex"
    ring: PolyRing = field(init=False, repr=False)

    def __post_init__(self):
        names = [var_name(b, c) for b, a in enumerate(self.dims) for c in range(a)]
        object.__setattr__(self, "dims", tuple(int(a) for a in self.dims))
        object.__setattr__(self, "ring", PolyRing(names, GF(self.prime), self.order))

    @property
    def ngens(self) -> int:
        return self.ring.ngens

    @property
    def offsets(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in np.concatenate(([0], np.cumsum(self.dims))))

    def block(self, b: int) -> range:
        off = self.offsets
        return range(off[b], off[b + 1])

    def block_of(self, var: int) -> int:
        off = self.offsets
        for b in range(len(self.dims)):
            if off[b] <= var < off[b + 1]:
                return b
        raise IndexError(var)

    def gen(self, b: int, c: int) -> MultiPoly:
        return self.ring.gens[self.offsets[b] + c]

    def with_order(self, order: str) -> "BlockRing":
        return BlockRing(self.dims, self.prime, order)

    # -------------------------
    # construction / conversion
    # -------------------------

    def from_terms(self, terms: Mapping[Tuple[int, ...], int]) -> MultiPoly:
        p = self.prime
        return self.ring.from_dict({m: int(c) % p for m, c in terms.items() if int(c) % p})

    def monomial(self, coords: Sequence[Tuple[int, int]]) -> Tuple[int, ...]:
        """Exponent vector of prod v_{b,c} over the given (block, coord) pairs."""
        exps = [0] * self.ngens
        off = self.offsets
        for b, c in coords:
            exps[off[b] + c] += 1
        return tuple(exps)

    def int_terms(self, f: MultiPoly) -> Dict[Tuple[int, ...], int]:
        p = self.prime
        return {m: int(c) % p for m, c in f.items()}

    def linear_form(self, b: int, coeffs: Sequence[int]) -> MultiPoly:
        terms = {}
        for c, value in enumerate(coeffs):
            exps = [0] * self.ngens
            exps[self.offsets[b] + c] = 1
            terms[tuple(exps)] = int(value)
        return self.from_terms(terms)

    # -------------------------
    # evaluation
    # -------------------------

    def evaluate(self, f: MultiPoly, vectors: Sequence[np.ndarray]) -> int:
        """Value at the point with block vectors ``vectors`` (one per block)."""
        p = self.prime
        values = [int(x) % p for v in vectors for x in v]
        if len(values) != self.ngens:
            raise ValueError("point does not match the block layout")
        total = 0
        for m, c in f.items():
            term = int(c) % p
            for x, e in zip(values, m):
                if e:
                    term = term * pow(x, e, p) % p
            total = (total + term) % p
        return total

    def vanishes_at(self, polys: Iterable[MultiPoly], vectors: Sequence[np.ndarray]) -> bool:
        return all(self.evaluate(f, vectors) == 0 for f in polys)

    def is_multilinear(self, f: MultiPoly, omitted: int | None = None) -> bool:
        for m in f.keys():
            if any(e > 1 for e in m):
                return False
            if omitted is not None and any(m[v] for v in self.block(omitted)):
                return False
        return True


def transport(f: MultiPoly, target: PolyRing, source_index: Sequence[int], prime: int) -> MultiPoly:
    """Move f into ``target`` where target variable t is source variable source_index[t]."""
    return target.from_dict(
        {tuple(m[s] for s in source_index): int(c) % prime for m, c in f.items()}
    )


def specialize(f: MultiPoly, var: int, value: int, prime: int) -> MultiPoly:
    """Substitute a field value for one variable, keeping the ring."""
    out: Dict[Tuple[int, ...], int] = {}
    for m, c in f.items():
        e = m[var]
        coeff = int(c) % prime
        if e:
            coeff = coeff * pow(int(value), e, prime) % prime
            m = m[:var] + (0,) + m[var + 1:]
        out[m] = (out.get(m, 0) + coeff) % prime
    return f.ring.from_dict({m: c for m, c in out.items() if c})


def support(m: Tuple[int, ...]) -> List[int]:
    return [i for i, e in enumerate(m) if e]
