# tests/test_wdcheck.py
import numpy as np
import pytest

from services.exactlin.field import PrimeField
from services.exactlin.rng import RngState
from services.segre.model import Format, Problem, is_subabundant
from services.segre.span import sample_problem_span
from services.wdcheck.checker import check_not_wdef, is_defective, secant_dimension
from services.wdcheck.errors import InvalidProblem, SpanFillsAmbient
from services.wdcheck.linearization import kernel_dimension


def test_kernel_dimension_at_a_generic_point_is_n(field):
    problem = Problem.of((3, 3, 3), 2)
    span = sample_problem_span(problem, RngState(0), field)
    for x in span.points:
        assert kernel_dimension(span, x) == 3


@pytest.mark.parametrize("dims,k", [((4, 4, 4), 5), ((3, 3, 3), 3), ((3, 4, 5), 3), ((5, 5, 5), 9)])
def test_identifiable_cases_pass(field, dims, k):
    report = check_not_wdef(Problem.of(dims, k), 3, RngState(0), field)
    assert report.verdict == "PASS"
    assert report.span_rank == report.expected_rank
    assert report.kernel_dims == (3,) * k


@pytest.mark.parametrize("prime", [32003, 65537, 104729])
@pytest.mark.parametrize("seed", [0, 1])
def test_four_cubed_rank_six_fails_at_every_prime(prime, seed):
    report = check_not_wdef(Problem.of((4, 4, 4), 6), 2, RngState(seed), PrimeField(prime))
    assert report.verdict == "FAIL"
    assert report.span_rank == report.expected_rank == 60
    assert all(d == 4 for d in report.kernel_dims)
    assert report.note.startswith("probable failure")


@pytest.mark.parametrize("dims", [(2, 2, 3), (2, 3, 4), (3, 3, 6)])
def test_unbalanced_boundary(field, dims):
    a, b, _ = dims
    border = (a - 1) * (b - 1)
    assert check_not_wdef(Problem.of(dims, border), 3, RngState(0), field).verdict == "PASS"
    assert check_not_wdef(Problem.of(dims, border + 1), 3, RngState(0), field).verdict == "FAIL"


def test_schedule_leaves_pass(field):
    for dims, k, p in [
        ((4, 4, 4), 3, (3, 3, 2)),
        ((4, 4, 4), 2, (4, 3, 3)),
        ((3, 3, 3), 1, (2, 2, 2)),
        ((2, 5, 5), 1, (7, 2, 2)),
        ((3, 5, 5), 3, (5, 2, 2)),
    ]:
        report = check_not_wdef(Problem.of(dims, k, p), 3, RngState(0), field)
        assert report.verdict == "PASS", report


def test_report_records_replay_data(field):
    report = check_not_wdef(Problem.of((3, 3, 3), 2), 3, RngState(17), field)
    assert (report.prime, report.seed, report.prng) == (32003, 17, "PCG64")
    again = check_not_wdef(Problem.of((3, 3, 3), 2), 3, RngState(17), field)
    assert again == report


def test_k_zero_is_rejected(field):
    with pytest.raises(InvalidProblem):
        check_not_wdef(Problem.of((3, 3, 3), 0, (1, 1, 1)), 1, RngState(0), field)


def test_filling_span_is_vacuous(field):
    report = check_not_wdef(Problem.of((2, 2, 2), 2), 1, RngState(0), field)
    assert report.verdict == "VACUOUS"
    assert report.expected_rank == report.ambient == 8
    assert report.kernel_dims == ()


def test_linearization_rejects_a_filling_span(field):
    span = sample_problem_span(Problem.of((2, 2, 2), 2), RngState(0), field)
    assert span.rank == 8
    with pytest.raises(SpanFillsAmbient):
        kernel_dimension(span, span.points[0])


@pytest.mark.parametrize(
    "dims,k,expected",
    [((3, 3, 3), 4, 27), ((3, 4, 4), 5, 45), ((3, 5, 5), 7, 75)],
)
def test_defective_secants(field, dims, k, expected):
    actual, want = secant_dimension(Format.of(*dims), k, RngState(0), field, trials=2)
    assert want == expected
    assert actual < expected
    assert is_defective(Format.of(*dims), k, RngState(0), field)


def test_nondefective_secant(field):
    assert secant_dimension(Format.of(3, 3, 3), 3, RngState(0), field) == (21, 21)
    assert not is_defective(Format.of(4, 4, 4), 6, RngState(0), field)


def test_three_cubed_rank_four_falls_one_short(field):
    assert secant_dimension(Format.of(3, 3, 3), 4, RngState(0), field, trials=2) == (26, 27)


@pytest.mark.parametrize("prime", [32003, 65537, 104729])
@pytest.mark.parametrize("dims,k,p", [
    ((3, 3, 3), 2, None),
    ((4, 4, 4), 5, None),
    ((3, 4, 5), 3, None),
    ((3, 3, 3), 1, (2, 2, 2)),
])
def test_pass_is_stable_across_primes(prime, dims, k, p):
    report = check_not_wdef(Problem.of(dims, k, p), 3, RngState(0), PrimeField(prime))
    assert report.verdict == "PASS"
    assert report.prime == prime
    assert report.kernel_dims == (3,) * k


def _random_subabundant(gen):
    while True:
        dims = tuple(int(a) for a in gen.integers(2, 5, size=int(gen.integers(3, 5))))
        if Format.of(*dims).ambient_dim > 81:
            continue
        ks = [k for k in range(1, 12) if is_subabundant(Problem.of(dims, k))]
        if ks:
            return Problem.of(dims, int(gen.choice(ks)))


def test_kernel_dimension_never_drops_below_n(field):
    gen = np.random.default_rng(2024)
    for i in range(200):
        problem = _random_subabundant(gen)
        span = sample_problem_span(problem, RngState(i), field)
        for x in span.points:
            assert kernel_dimension(span, x) >= problem.n, (problem, i)
