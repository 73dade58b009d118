"""
Base lemmas cited as axioms. Only their side conditions are checked here; the
claims themselves are not recomputed.

ZeroStep is read with n aux entries (one per factor) and covers both the k = 0
shape p_i = 2^u_i and the k = 1 shape p_i = 2^u_i - 1.
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from services.planner.errors import LemmaError
from services.planner.models import BaseLemma, LemmaCert, LemmaTag, MonotoneParams
from services.segre.model import Problem

LEMMA_TAGS: Tuple[str, ...] = ("Start", "Zero", "Uno", "ZeroStep", "Premain", "Pren")


def log2_exact(x: int) -> Optional[int]:
    if x < 1 or x & (x - 1):
        return None
    return x.bit_length() - 1


def power_exponents(dims: Sequence[int]) -> Optional[Tuple[int, ...]]:
    alphas = tuple(log2_exact(a) for a in dims)
    return None if None in alphas else alphas


def _shape_exponents(k: int, p: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """u with p_i = 2^u_i (k = 0) or p_i = 2^u_i - 1 (k = 1)."""
    if k == 0:
        us = tuple(log2_exact(x) for x in p)
    elif k == 1:
        us = tuple(log2_exact(x + 1) for x in p)
    else:
        return None
    return None if None in us else us


def _step_violations(problem: Problem, u: Optional[Sequence[int]], slack: int) -> Tuple[List[str], List[str], Tuple[int, ...]]:
    errors: List[str] = []
    conditions: List[str] = []
    alphas = power_exponents(problem.dims)
    if alphas is None:
        return [f"dims {problem.dims} are not all powers of two"], conditions, ()
    shape = _shape_exponents(problem.k, problem.p)
    if shape is None:
        return [f"(k; p) = ({problem.k}; {problem.p}) is not (0; 2^u) or (1; 2^u - 1)"], conditions, ()
    if u is not None and tuple(u) != shape:
        errors.append(f"u = {tuple(u)} does not match the aux counts (u = {shape})")
    total = sum(alphas)
    for i, ui in enumerate(shape):
        bound = total - alphas[i] - slack
        if ui > bound:
            errors.append(f"u_{i + 1} = {ui} exceeds {bound}")
        else:
            conditions.append(f"u_{i + 1} = {ui} <= {bound}")
    return errors, conditions, shape


def _bound_violations(problem: Problem, n_required: Optional[int]) -> Tuple[List[str], List[str]]:
    if n_required is not None and problem.n != n_required:
        return [f"needs {n_required} factors, got {problem.n}"], []
    alphas = power_exponents(problem.dims)
    if alphas is None:
        return [f"dims {problem.dims} are not all powers of two"], []
    if any(problem.p):
        return [f"aux counts must be zero, got {problem.p}"], []
    small = sorted(alphas)[:-1]
    exponent = sum(small) - (problem.n - 1)
    limit = 2 ** exponent if exponent >= 0 else 0
    if problem.k > limit:
        return [f"k = {problem.k} exceeds 2^{exponent} = {limit}"], []
    return [], [f"k = {problem.k} <= 2^{exponent} = {limit}"]


def lemma_violations(problem: Problem, tag: str, u: Optional[Sequence[int]] = None) -> Tuple[List[str], LemmaCert]:
    """Violated side conditions (empty when the citation holds) and the certificate record."""
    if tag not in LEMMA_TAGS:
        raise LemmaError(f"unknown lemma {tag!r}")
    conditions: List[str] = []
    shape: Optional[Tuple[int, ...]] = None
    if tag == "Start":
        ok = problem.dims == (2, 2, 2) and (problem.k, problem.p) in ((1, (0, 0, 0)), (0, (1, 1, 1)))
        errors = [] if ok else [f"{problem} is not (2,2,2) with (1;0,0,0) or (0;1,1,1)"]
    elif tag in ("Zero", "Uno"):
        want_k = 0 if tag == "Zero" else 1
        if problem.n != 3:
            errors = [f"{tag} needs 3 factors, got {problem.n}"]
        elif problem.k != want_k:
            errors = [f"{tag} needs k = {want_k}, got {problem.k}"]
        else:
            errors, conditions, shape = _step_violations(problem, u, 2)
    elif tag == "ZeroStep":
        errors, conditions, shape = _step_violations(problem, u, problem.n - 1)
    else:
        errors, conditions = _bound_violations(problem, 3 if tag == "Premain" else None)
    cert = LemmaCert(tag=tag, u=shape or (tuple(u) if u is not None else None), conditions=tuple(conditions))
    return errors, cert


def cite(problem: Problem, tag: str, u: Optional[Sequence[int]] = None) -> LemmaCert:
    errors, cert = lemma_violations(problem, tag, u)
    if errors:
        raise LemmaError(f"{tag} does not apply to {problem}: {'; '.join(errors)}")
    return cert


def match_lemma(problem: Problem, allow_pren: bool = False) -> Optional[BaseLemma]:
    """First lemma whose side conditions hold, in LEMMA_TAGS order."""
    for tag in LEMMA_TAGS:
        if tag == "Pren" and not allow_pren:
            continue
        if tag in ("Zero", "Uno") and problem.n != 3:
            continue
        errors, cert = lemma_violations(problem, tag)
        if not errors:
            return BaseLemma(tag=tag, u=cert.u)
    return None


def _ceil_log2(x: int) -> int:
    return max(x - 1, 0).bit_length()


def round_to_lemma(problem: Problem) -> Optional[Tuple[MonotoneParams, Problem, BaseLemma]]:
    """
    For k in {0, 1}: the smallest lemma-shaped claim dominating the problem,
    with the lemma it satisfies. k = 0 tries the zero shape before the k = 1 one.
    """
    if problem.k > 1 or power_exponents(problem.dims) is None:
        return None
    shapes = []
    if problem.k == 0:
        shapes.append((0, tuple(2 ** _ceil_log2(max(x, 1)) for x in problem.p)))
    shapes.append((1, tuple(2 ** _ceil_log2(x + 1) - 1 for x in problem.p)))
    for k, p in shapes:
        if (k, p) == (problem.k, problem.p):
            continue
        target = Problem(format=problem.format, k=k, p=p)
        lemma = match_lemma(target)
        if lemma is not None:
            return MonotoneParams(k=k, p=p), target, lemma
    return None
