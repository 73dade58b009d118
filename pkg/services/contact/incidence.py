"""Lines of the Segre variety inside P(T) and how they meet."""
from __future__ import annotations

from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from services.contact.groebner import Budget
from services.contact.ideal import ruling_ideal
from services.contact.points import rational_points
from services.segre.span import SpanMatrix


class RulingLine(BaseModel):
    """{x : x_m = w_m for m != direction}, x_direction free."""

    model_config = ConfigDict(frozen=True)

    direction: int
    point: Tuple[Tuple[int, ...], ...]   # normalised vectors of the other factors, in factor order

    def fixed(self) -> dict:
        others = [m for m in range(len(self.point) + 1) if m != self.direction]
        return dict(zip(others, self.point))


class IncidenceReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    lines: Tuple[RulingLine, ...]
    edges: Tuple[Tuple[int, int], ...]
    is_cycle: bool
    cycle: Tuple[int, ...] = ()

    @property
    def per_direction(self) -> List[int]:
        n = len(self.lines[0].point) + 1 if self.lines else 0
        return [sum(1 for line in self.lines if line.direction == d) for d in range(n)]


def ruling_lines(span: SpanMatrix, seed: Optional[int] = None, budget: Optional[Budget] = None) -> List[RulingLine]:
    lines = []
    for direction in range(span.format.n):
        ideal = ruling_ideal(span, direction, seed)
        for point in rational_points(ideal.ring, ideal.generators, budget):
            lines.append(RulingLine(direction=direction, point=point))
    return lines


def lines_meet(a: RulingLine, b: RulingLine) -> bool:
    """Distinct directions meet iff they agree on every factor neither leaves free."""
    if a.direction == b.direction:
        return a == b
    fa, fb = a.fixed(), b.fixed()
    shared = set(fa) & set(fb)
    return all(fa[m] == fb[m] for m in shared)


def _single_cycle(count: int, edges: List[Tuple[int, int]]) -> Tuple[int, ...]:
    adjacency = {i: [] for i in range(count)}
    for i, j in edges:
        adjacency[i].append(j)
        adjacency[j].append(i)
    if count < 3 or any(len(v) != 2 for v in adjacency.values()):
        return ()
    order = [0]
    prev, cur = None, 0
    while True:
        nxt = [v for v in adjacency[cur] if v != prev][0]
        if nxt == 0:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return tuple(order) if len(order) == count else ()


def incidence_report(span: SpanMatrix, seed: Optional[int] = None, budget: Optional[Budget] = None) -> IncidenceReport:
    lines = ruling_lines(span, seed, budget)
    edges = [
        (i, j)
        for i in range(len(lines))
        for j in range(i + 1, len(lines))
        if lines_meet(lines[i], lines[j])
    ]
    cycle = _single_cycle(len(lines), edges)
    return IncidenceReport(lines=tuple(lines), edges=tuple(edges), is_cycle=bool(cycle), cycle=cycle)
