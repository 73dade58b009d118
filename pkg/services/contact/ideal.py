from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from services.contact.errors import SpanFillsAmbient
from services.contact.polyring import BlockRing, MultiPoly
from services.segre.span import SpanMatrix


class Fingerprint(BaseModel):
    """Which span an ideal was cut from."""

    model_config = ConfigDict(frozen=True)

    prime: int
    seed: Optional[int] = None
    rank: int
    ambient: int


@dataclass(frozen=True, eq=False)
class ContactIdeal:
    ring: BlockRing
    generators: Tuple[MultiPoly, ...]
    fingerprint: Fingerprint
    kind: str = "tangency"
    saturated: bool = False

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.ring.dims

    def with_generators(self, generators, saturated: Optional[bool] = None) -> "ContactIdeal":
        return replace(
            self,
            generators=tuple(generators),
            saturated=self.saturated if saturated is None else saturated,
        )


def _functional_tensors(span: SpanMatrix) -> np.ndarray:
    ell = span.functionals.entries
    return ell.reshape((ell.shape[0],) + span.format.dims)


def _terms_of(tensor: np.ndarray, ring: BlockRing, blocks: List[int]) -> Dict[Tuple[int, ...], int]:
    """Multilinear terms sum tensor[idx] * prod_b v_{blocks[b], idx[b]}."""
    terms: Dict[Tuple[int, ...], int] = {}
    for idx in zip(*np.nonzero(tensor)):
        m = ring.monomial([(b, int(c)) for b, c in zip(blocks, idx)])
        terms[m] = int(tensor[idx])
    return terms


def tangency_ideal(span: SpanMatrix, seed: Optional[int] = None) -> ContactIdeal:
    """Generators ℓ(v_1 ⊗ .. b (slot j) .. ⊗ v_n) for every functional ℓ, slot j and basis b of A_j."""
    if span.fills_ambient:
        raise SpanFillsAmbient(f"span rank {span.rank} equals the ambient dimension {span.ambient}")
    fmt = span.format
    ring = BlockRing(fmt.dims, span.field.p)
    tensors = _functional_tensors(span)
    gens: List[MultiPoly] = []
    for ell in tensors:
        for j in range(fmt.n):
            others = [m for m in range(fmt.n) if m != j]
            for c in range(fmt.dims[j]):
                gens.append(ring.from_terms(_terms_of(np.take(ell, c, axis=j), ring, others)))
    return ContactIdeal(
        ring=ring,
        generators=tuple(gens),
        fingerprint=Fingerprint(prime=span.field.p, seed=seed, rank=span.rank, ambient=span.ambient),
        kind="tangency",
    )


def span_section_ideal(span: SpanMatrix, seed: Optional[int] = None) -> ContactIdeal:
    """Ideal of X ∩ P(T): ℓ(v_1 ⊗ .. ⊗ v_n) for every functional ℓ."""
    if span.fills_ambient:
        raise SpanFillsAmbient(f"span rank {span.rank} equals the ambient dimension {span.ambient}")
    fmt = span.format
    ring = BlockRing(fmt.dims, span.field.p)
    blocks = list(range(fmt.n))
    gens = [ring.from_terms(_terms_of(ell, ring, blocks)) for ell in _functional_tensors(span)]
    return ContactIdeal(
        ring=ring,
        generators=tuple(gens),
        fingerprint=Fingerprint(prime=span.field.p, seed=seed, rank=span.rank, ambient=span.ambient),
        kind="section",
    )


def ruling_ideal(span: SpanMatrix, direction: int, seed: Optional[int] = None) -> ContactIdeal:
    """Points w of the other factors with A_direction ⊗ w ⊆ T."""
    if span.fills_ambient:
        raise SpanFillsAmbient(f"span rank {span.rank} equals the ambient dimension {span.ambient}")
    fmt = span.format
    others = [m for m in range(fmt.n) if m != direction]
    ring = BlockRing(tuple(fmt.dims[m] for m in others), span.field.p)
    local = list(range(len(others)))
    gens = []
    for ell in _functional_tensors(span):
        for c in range(fmt.dims[direction]):
            gens.append(ring.from_terms(_terms_of(np.take(ell, c, axis=direction), ring, local)))
    return ContactIdeal(
        ring=ring,
        generators=tuple(g for g in gens if g),
        fingerprint=Fingerprint(prime=span.field.p, seed=seed, rank=span.rank, ambient=span.ambient),
        kind=f"ruling-{direction + 1}",
    )


def dump_ideal(ideal: ContactIdeal) -> str:
    """One generator per line, terms ``coeff*[e0,e1,...]`` joined by `` + ``."""
    ring = ideal.ring
    names = ",".join(str(s) for s in ring.ring.symbols)
    lines = [
        f"# kind={ideal.kind} prime={ring.prime} blocks={','.join(map(str, ring.dims))} "
        f"saturated={str(ideal.saturated).lower()}",
        f"# variables {names}",
    ]
    for g in ideal.generators:
        terms = sorted(ring.int_terms(g).items(), key=lambda t: ring.ring.order(t[0]), reverse=True)
        lines.append(" + ".join(f"{c}*[{','.join(map(str, m))}]" for m, c in terms) or "0")
    return "\n".join(lines) + "\n"
