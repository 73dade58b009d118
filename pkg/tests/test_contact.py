# tests/test_contact.py
import numpy as np
import pytest

from services.contact.groebner import Budget, contains, groebner, is_groebner, is_unit_ideal
from services.contact.hilbert import dim_degree, segre_hilbert
from services.contact.ideal import (
    ContactIdeal,
    Fingerprint,
    dump_ideal,
    span_section_ideal,
    tangency_ideal,
)
from services.contact.incidence import incidence_report
from services.contact.points import rational_points
from services.contact.polyring import BlockRing
from services.contact.report import check_contact_locus, expected_locus
from services.contact.saturation import saturate
from services.exactlin.rng import RngState
from services.segre.model import Problem
from services.segre.span import sample_problem_span
from services.wdcheck.checker import check_not_wdef
from services.wdcheck.errors import SpanFillsAmbient

PRIME = 32003


def _ring(*dims):
    return BlockRing(dims, PRIME)


def test_block_ring_names_variables_by_block():
    ring = _ring(2, 3)
    assert ring.ngens == 5
    assert ring.offsets == (0, 2, 5)
    assert list(ring.block(1)) == [2, 3, 4]
    assert ring.block_of(3) == 1
    assert [str(s) for s in ring.ring.symbols] == ["v1_0", "v1_1", "v2_0", "v2_1", "v2_2"]


def test_evaluate_multilinear_form():
    ring = _ring(2, 2)
    f = ring.gen(0, 0) * ring.gen(1, 1) - ring.gen(0, 1) * ring.gen(1, 0)
    assert ring.is_multilinear(f)
    assert ring.evaluate(f, [np.array([1, 2]), np.array([3, 4])]) == (4 - 6) % PRIME
    assert ring.vanishes_at([f], [np.array([1, 2]), np.array([2, 4])])
    with pytest.raises(ValueError):
        ring.evaluate(f, [np.array([1, 2])])


def test_groebner_detects_unit_ideal():
    ring = _ring(2)
    x, y = ring.gen(0, 0), ring.gen(0, 1)
    assert is_unit_ideal(groebner([x * y - 1, x]))
    assert groebner([]) == []


def test_groebner_basis_is_closed_under_s_pairs():
    ring = _ring(3)
    x, y, z = (ring.gen(0, c) for c in range(3))
    basis = groebner([x * y - z ** 2, y * z - x ** 2, x * z - y ** 2])
    assert is_groebner(basis)
    assert contains(basis, x * (y * z - x ** 2))
    assert not contains(basis, x)


def test_groebner_of_a_reduced_basis_is_itself(field):
    ring = _ring(3)
    x, y, z = (ring.gen(0, c) for c in range(3))
    basis = groebner([x * y - z ** 2, y * z - x ** 2, x * z - y ** 2])
    assert groebner(basis) == basis

    span = sample_problem_span(Problem.of((2, 2, 2), 1), RngState(0), field)
    tangency = groebner(list(tangency_ideal(span).generators))
    assert groebner(tangency) == tangency


def _ideal(ring, generators):
    return ContactIdeal(
        ring=ring,
        generators=tuple(generators),
        fingerprint=Fingerprint(prime=PRIME, rank=0, ambient=4),
    )


def test_saturation_removes_irrelevant_components():
    ring = _ring(2, 2)
    a0, a1 = ring.gen(0, 0), ring.gen(0, 1)
    b0 = ring.gen(1, 0)
    # <a0 b0, a1 b0> = b0 * m_1
    once = saturate(_ideal(ring, [a0 * b0, a1 * b0]), RngState(3))
    assert once.saturated
    assert list(once.generators) == groebner([b0])


def test_saturation_is_stable(field):
    ring = _ring(2, 2)
    a0, b0 = ring.gen(0, 0), ring.gen(1, 0)
    product = saturate(_ideal(ring, [a0 * b0]), RngState(1))
    assert list(product.generators) == groebner([a0 * b0])
    assert saturate(product, RngState(2)).generators == product.generators

    span = sample_problem_span(Problem.of((2, 2, 2), 1), RngState(0), field)
    once = saturate(tangency_ideal(span, seed=0), RngState(1))
    assert saturate(once, RngState(5)).generators == once.generators


def test_rational_points_normalise_each_block():
    ring = _ring(2, 2)
    points = rational_points(ring, [ring.gen(0, 0), ring.gen(1, 1)])
    assert points == [((0, 1), (1, 0))]


def test_hilbert_function_of_the_empty_ideal():
    ring = _ring(2, 2)
    lms = np.zeros((0, ring.ngens), dtype=np.int64)
    assert segre_hilbert(lms, ring, 3) == 16


def test_dim_degree_of_the_whole_segre_product():
    ring = _ring(2, 2)
    ideal = ContactIdeal(
        ring=ring,
        generators=(),
        fingerprint=Fingerprint(prime=PRIME, rank=0, ambient=4),
        saturated=True,
    )
    locus = dim_degree(ideal, reduced=False)
    assert (locus.dim, locus.degree) == (2, 2)


def test_dim_degree_requires_saturation(field):
    span = sample_problem_span(Problem.of((2, 2, 2), 1), RngState(0), field)
    with pytest.raises(ValueError):
        dim_degree(tangency_ideal(span))


def test_tangency_generators_vanish_at_the_sample_point(field):
    span = sample_problem_span(Problem.of((2, 2, 2), 1), RngState(0), field)
    ideal = tangency_ideal(span, seed=0)
    assert ideal.kind == "tangency"
    assert all(ideal.ring.is_multilinear(g) for g in ideal.generators)
    for x in span.points:
        assert ideal.ring.vanishes_at(ideal.generators, x.vectors)


def test_ideal_of_a_filling_span_is_rejected(field):
    span = sample_problem_span(Problem.of((2, 2, 2), 2), RngState(0), field)
    assert span.fills_ambient
    with pytest.raises(SpanFillsAmbient):
        tangency_ideal(span)


def test_single_point_contact_locus_is_the_point(field):
    report = check_contact_locus(Problem.of((2, 2, 2), 1), RngState(0), field)
    assert report.verdict == "PASS"
    assert (report.dim, report.degree) == (0, 1)
    assert expected_locus(report.problem) == (0, 1)


def test_aux_only_tangency_locus_is_empty(field):
    problem = Problem.of((2, 2, 2), 0, (1, 1, 1))
    report = check_contact_locus(problem, RngState(0), field)
    assert report.span_rank == 6
    assert report.verdict == "PASS"
    assert report.dim == -1


def test_aux_only_span_meets_the_segre_in_a_cycle_of_lines(field):
    problem = Problem.of((2, 2, 2), 0, (1, 1, 1))
    rng = RngState(0)
    span = sample_problem_span(problem, rng.child(0), field)
    section = saturate(span_section_ideal(span, seed=0), rng.child(3))
    locus = dim_degree(section, rng=rng.child(4))
    assert (locus.dim, locus.degree) == (1, 6)

    incidence = incidence_report(span, seed=0)
    assert len(incidence.lines) == 6
    assert incidence.per_direction == [2, 2, 2]
    assert incidence.is_cycle
    assert sorted(incidence.cycle) == list(range(6))


def test_dump_ideal_header_and_terms(field):
    span = sample_problem_span(Problem.of((2, 2, 2), 1), RngState(0), field)
    ideal = saturate(tangency_ideal(span, seed=0), RngState(1))
    text = dump_ideal(ideal)
    lines = text.splitlines()
    assert lines[0].startswith(f"# kind=tangency prime={field.p} blocks=2,2,2")
    assert lines[0].endswith("saturated=true")
    assert lines[1] == "# variables v1_0,v1_1,v2_0,v2_1,v3_0,v3_1"
    assert len(lines) == 2 + len(ideal.generators)
    assert all("*[" in line for line in lines[2:])


def test_exhausted_budget_reports_aborted(field):
    report = check_contact_locus(Problem.of((3, 3, 3), 1), RngState(0), field, Budget.from_steps(1))
    assert report.verdict == "ABORTED"
    assert report.stage == "saturate"
    assert report.dim is None


@pytest.mark.slow
def test_four_cubed_rank_six_contact_locus_is_a_curve(field):
    report = check_contact_locus(Problem.of((4, 4, 4), 6), RngState(0), field)
    assert report.verdict == "FAIL"
    assert (report.dim, report.degree) == (1, 12)


@pytest.mark.slow
@pytest.mark.parametrize("dims,k", [
    ((2, 2, 2), 1),
    ((2, 2, 3), 1),
    ((2, 3, 4), 1),
    ((3, 3, 3), 2),
    ((3, 3, 3), 3),
    ((3, 3, 4), 2),
    ((3, 3, 4), 3),
    ((2, 2, 2, 2), 1),
    ((2, 2, 2, 2), 2),
])
def test_contact_locus_agrees_with_the_first_order_check(field, dims, k):
    problem = Problem.of(dims, k)
    first_order = check_not_wdef(problem, 3, RngState(0), field)
    contact = check_contact_locus(problem, RngState(0), field)
    assert first_order.verdict == contact.verdict == "PASS"
    assert (contact.dim, contact.degree) == expected_locus(problem) == (0, k)
