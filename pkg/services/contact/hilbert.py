"""
Dimension and degree of a saturated multihomogeneous ideal.

* dim: Krull dimension of the lead-term ideal (largest variable set carrying
  no lead monomial) minus the number of blocks.
* degree: scheme degree in the Segre embedding, the leading term of the
  diagonal Hilbert function t -> #standard monomials of multidegree (t,..,t).
* reduced_degree: distinct points cut by dim generic Segre hyperplanes, the
  squarefree degree of the minimal polynomial of a generic linear form on the
  slice.
"""
from __future__ import annotations

import logging
from itertools import combinations_with_replacement
from math import comb, prod
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from sympy.polys.domains import GF
from sympy.polys.rings import PolyRing

from services.contact.errors import ComputationAborted, NotZeroDimensional
from services.contact.groebner import DEFAULT_BUDGET, Budget, groebner, is_unit_ideal, reduce
from services.contact.ideal import ContactIdeal
from services.contact.polyring import BlockRing, MultiPoly
from services.exactlin.field import PrimeField
from services.exactlin.matrix import Matrix, kernel, rank
from services.exactlin.rng import RngState, random_vector

log = logging.getLogger(__name__)

CONVENTION = "segre-embedding"
SLICE_SEED = 0xD3


class ContactDimension(BaseModel):
    model_config = ConfigDict(frozen=True)

    dim: int
    degree: int
    reduced_degree: Optional[int] = None
    convention: str = CONVENTION


# ---------- dimension ----------

def _min_cover(supports: List[FrozenSet[int]], limit: int) -> int:
    """Size of the smallest variable set meeting every support, or anything > limit."""
    if not supports:
        return 0
    if limit <= 0:
        return limit + 1
    best = limit + 1
    for v in sorted(min(supports, key=len)):
        rest = [s for s in supports if v not in s]
        best = min(best, 1 + _min_cover(rest, best - 2))
    return best


def affine_dimension(lms: Sequence[Tuple[int, ...]], ngens: int) -> int:
    supports = {frozenset(i for i, e in enumerate(m) if e) for m in lms}
    if frozenset() in supports:
        return -1
    minimal = [s for s in supports if not any(t < s for t in supports)]
    return ngens - _min_cover(minimal, ngens)


def projective_dimension(basis: Sequence[MultiPoly], ring: BlockRing) -> int:
    if is_unit_ideal(basis):
        return -1
    d = affine_dimension([g.LM for g in basis], ring.ngens) - len(ring.dims)
    return max(d, -1)


# ---------- Hilbert function ----------

def block_monomials(a: int, t: int) -> np.ndarray:
    rows = [np.bincount(c, minlength=a) for c in combinations_with_replacement(range(a), t)]
    if not rows:
        return np.zeros((1, a), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def _covered(divs: List[np.ndarray], mask: np.ndarray, depth: int) -> int:
    """Tuples (m_depth, .., m_last) divisible by some lead monomial still in ``mask``."""
    if not mask.any():
        return 0
    rest = divs[depth:]
    if len(rest) == 1:
        return int(np.any(rest[0][mask], axis=0).sum())
    if len(rest) == 2:
        left = rest[0][mask].T.astype(np.int32)
        right = rest[1][mask].astype(np.int32)
        return int(np.count_nonzero(left @ right))
    total = 0
    head = divs[depth]
    for col in range(head.shape[1]):
        total += _covered(divs, mask & head[:, col], depth + 1)
    return total


def segre_hilbert(lms: np.ndarray, ring: BlockRing, t: int) -> int:
    """Number of standard monomials of multidegree (t, .., t)."""
    off = ring.offsets
    monomials = [block_monomials(a, t) for a in ring.dims]
    total = prod(m.shape[0] for m in monomials)
    if lms.shape[0] == 0:
        return total
    divs = []
    for b, mons in enumerate(monomials):
        lead = lms[:, off[b]:off[b + 1]]
        divs.append(np.all(lead[:, None, :] <= mons[None, :, :], axis=2))
    return total - _covered(divs, np.ones(lms.shape[0], dtype=bool), 0)


def _hilbert_degree(lms: np.ndarray, ring: BlockRing, dim: int, budget: Budget) -> int:
    off = ring.offsets
    t0 = 1
    if lms.shape[0]:
        t0 = max(1, max(int(lms[:, off[b]:off[b + 1]].sum(axis=1).max()) for b in range(len(ring.dims))))
    cache: Dict[int, int] = {}

    def value(t: int) -> int:
        if t not in cache:
            size = prod(comb(a + t - 1, t) for a in ring.dims)
            if size > budget.max_monomials:
                raise ComputationAborted("hilbert", f"{size} monomials in degree {t}")
            cache[t] = segre_hilbert(lms, ring, t)
        return cache[t]

    window = dim + 4
    for start in range(t0, t0 + 64):
        values = np.array([value(t) for t in range(start, start + window)], dtype=object)
        if not any(np.diff(values, n=dim + 1)):
            return int(np.diff(values, n=dim)[0]) if dim > 0 else int(values[0])
    raise ComputationAborted("hilbert", "Hilbert function did not stabilise")


# ---------- generic slice ----------

def segre_hyperplane(ring: BlockRing, rng: RngState) -> MultiPoly:
    p = ring.prime
    coeffs = rng.integers(p, ring.dims)
    terms = {}
    for idx in np.ndindex(*ring.dims):
        terms[ring.monomial(list(enumerate(idx)))] = int(coeffs[idx])
    return ring.from_terms(terms)


def standard_monomials(lms: Sequence[Tuple[int, ...]], ngens: int, limit: int) -> List[Tuple[int, ...]]:
    pure = set()
    for m in lms:
        nz = [i for i, e in enumerate(m) if e]
        if len(nz) == 1:
            pure.add(nz[0])
    if len(pure) < ngens:
        raise NotZeroDimensional("slice is not zero-dimensional")

    def divisible(m):
        return any(all(a >= b for a, b in zip(m, lm)) for lm in lms)

    start = (0,) * ngens
    if divisible(start):
        return []
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(ngens):
                up = m[:i] + (m[i] + 1,) + m[i + 1:]
                if up not in seen and not divisible(up):
                    seen.add(up)
                    nxt.append(up)
        if len(seen) > limit:
            raise ComputationAborted("slice", f"more than {limit} standard monomials")
        frontier = nxt
    return sorted(seen)


def squarefree_degree(coeffs: Sequence[int], prime: int) -> int:
    """Number of distinct roots (over the closure) of sum coeffs[i] t^i."""
    uni = PolyRing("t", GF(prime), "lex")
    t = uni.gens[0]
    mu = uni.from_dict({(i,): int(c) % prime for i, c in enumerate(coeffs) if int(c) % prime})
    if mu.degree() <= 0:
        return 0
    g = mu.gcd(mu.diff(t))
    return int(mu.degree() - g.degree())


def minimal_polynomial(form: MultiPoly, basis: List[MultiPoly], std: List[Tuple[int, ...]], prime: int) -> List[int]:
    field = PrimeField(prime)
    index = {m: i for i, m in enumerate(std)}
    vectors: List[np.ndarray] = []
    power = form.ring.one
    for _ in range(len(std) + 1):
        vec = np.zeros(len(std), dtype=np.int64)
        for m, c in power.items():
            vec[index[m]] = int(c) % prime
        vectors.append(vec)
        stacked = Matrix(field, np.array(vectors))
        if rank(stacked) < len(vectors):
            relation = kernel(stacked.transpose()).entries[0]
            lead = int(relation[-1])
            scale = field.inv(lead)
            return [int(c) * scale % prime for c in relation]
        power = reduce(power * form, basis)
    raise RuntimeError("no linear dependency among len(std)+1 powers")


def slice_degrees(
    basis: List[MultiPoly],
    ring: BlockRing,
    dim: int,
    rng: RngState,
    budget: Budget,
) -> Tuple[int, int]:
    """(scheme, reduced) point counts of a generic dim-codimensional Segre slice."""
    p = ring.prime
    field = PrimeField(p)
    extra = [segre_hyperplane(ring, rng) for _ in range(dim)]
    for b, a in enumerate(ring.dims):
        extra.append(ring.linear_form(b, random_vector(a, rng, field)) - 1)
    sliced = groebner(list(basis) + extra, budget=budget, stage="slice")
    if is_unit_ideal(sliced):
        return 0, 0
    std = standard_monomials([g.LM for g in sliced], ring.ngens, budget.max_monomials)
    form = ring.from_terms({ring.monomial([(b, c)]): int(x) for b, a in enumerate(ring.dims)
                            for c, x in zip(range(a), random_vector(a, rng, field))})
    mu = minimal_polynomial(form, sliced, std, p)
    return len(std), squarefree_degree(mu, p)


def dim_degree(
    ideal: ContactIdeal,
    budget: Optional[Budget] = None,
    rng: Optional[RngState] = None,
    reduced: bool = True,
) -> ContactDimension:
    if not ideal.saturated:
        raise ValueError("dim_degree expects a saturated ideal")
    budget = budget or DEFAULT_BUDGET
    ring = ideal.ring
    basis = groebner(list(ideal.generators), budget=budget, stage="dim_degree")
    dim = projective_dimension(basis, ring) if basis else ring.ngens - len(ring.dims)
    if dim < 0:
        return ContactDimension(dim=-1, degree=0, reduced_degree=0)
    lms = np.array([g.LM for g in basis], dtype=np.int64).reshape(len(basis), ring.ngens)
    degree = _hilbert_degree(lms, ring, dim, budget)
    reduced_degree = None
    if reduced:
        rng = rng or RngState(SLICE_SEED if ideal.fingerprint.seed is None else ideal.fingerprint.seed)
        scheme, reduced_degree = slice_degrees(basis, ring, dim, rng.child(1), budget)
        if scheme != degree:
            log.warning("slice count %d disagrees with Hilbert degree %d", scheme, degree)
    log.info("%s locus: dim %d, degree %d, reduced %s", ideal.kind, dim, degree, reduced_degree)
    return ContactDimension(dim=dim, degree=degree, reduced_degree=reduced_degree)
