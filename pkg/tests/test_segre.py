# tests/test_segre.py
import pytest

from services.exactlin.matrix import rank
from services.exactlin.rng import RngState
from services.segre.model import Format, Problem, expected_span_dim, is_subabundant
from services.segre.points import aux_block, sample_aux, sample_point, tangent_block
from services.segre.span import contains_vector, sample_problem_span, terracini_span


def test_format_rejects_small_inputs():
    with pytest.raises(ValueError):
        Format.of(2, 2)
    with pytest.raises(ValueError):
        Format.of(1, 2, 2)


def test_format_dimensions():
    fmt = Format.of(4, 4, 8)
    assert fmt.ambient_dim == 128
    assert fmt.tangent_dim == 14
    assert fmt.label == "4x4x8"
    assert Format.of(8, 4, 4).sorted() == Format.of(4, 4, 8)


def test_problem_key_and_defaults():
    assert Problem.of((4, 4, 8), 5, (7, 6, 0)).key == "4x4x8/5/7,6,0"
    assert Problem.of((3, 3, 3), 2).p == (0, 0, 0)
    with pytest.raises(ValueError):
        Problem.of((3, 3, 3), 2, (1, 1))
    with pytest.raises(ValueError):
        Problem.of((3, 3, 3), -1)


def test_permuted_moves_dims_and_aux_together():
    parent = Problem.of((2, 4, 8), 3, (2, 3, 3))
    child = parent.permuted((1, 2, 0))
    assert child.dims == (4, 8, 2)
    assert child.p == (3, 3, 2)


def test_dominates():
    big = Problem.of((4, 4, 4), 3, (2, 3, 3))
    small = Problem.of((4, 4, 4), 3, (2, 2, 3))
    assert big.dominates(small)
    assert not small.dominates(big)


@pytest.mark.parametrize(
    "dims,k,p,expected",
    [
        ((4, 4, 4), 3, (3, 3, 2), 62),
        ((4, 4, 4), 2, (4, 3, 3), 60),
        ((3, 3, 3), 1, (2, 2, 2), 25),
        ((2, 5, 5), 1, (7, 2, 2), 44),
        ((3, 5, 5), 3, (5, 2, 2), 68),
    ],
)
def test_expected_span_of_schedule_leaves(dims, k, p, expected):
    problem = Problem.of(dims, k, p)
    assert expected_span_dim(problem) == expected
    assert is_subabundant(problem)


def test_expected_span_is_capped_by_ambient():
    problem = Problem.of((2, 2, 2), 2)
    assert expected_span_dim(problem) == 8
    assert not is_subabundant(problem)


def test_tangent_block_has_rank_dim_x_plus_one(field):
    fmt = Format.of(3, 4, 5)
    x = sample_point(fmt, RngState(1), field)
    assert rank(tangent_block(x, field)) == fmt.tangent_dim


@pytest.mark.parametrize("dims", [(2, 2, 2), (3, 4, 5), (4, 4, 4), (2, 3, 3, 2)])
def test_tangent_block_rank_holds_across_seeds(field, dims):
    fmt = Format.of(*dims)
    for seed in range(50):
        x = sample_point(fmt, RngState(seed), field)
        assert rank(tangent_block(x, field)) == fmt.tangent_dim, seed


def test_aux_block_has_rank_of_its_factor(field):
    fmt = Format.of(3, 4, 5)
    w = sample_aux(fmt, 1, RngState(2), field)
    assert rank(aux_block(w, fmt, field)) == 4


@pytest.mark.parametrize("dims,k", [((2, 2, 2), 1), ((4, 4, 4), 5), ((3, 4, 5), 3)])
def test_span_of_generic_points_has_expected_rank(field, dims, k):
    problem = Problem.of(dims, k)
    span = sample_problem_span(problem, RngState(0), field)
    assert span.rank == expected_span_dim(problem)
    assert span.functionals.rows == span.ambient - span.rank


def test_contact_points_lie_in_their_span(field):
    problem = Problem.of((3, 3, 4), 2, (1, 0, 1))
    span = sample_problem_span(problem, RngState(9), field)
    assert len(span.points) == 2
    assert [w.omitted for w in span.aux] == [0, 2]
    for x in span.points:
        assert contains_vector(span, x.coordinates(field))
    other = sample_point(problem.format, RngState(99), field)
    assert not contains_vector(span, other.coordinates(field))


def test_sampling_is_reproducible(field):
    problem = Problem.of((3, 3, 3), 2, (1, 1, 0))
    a = sample_problem_span(problem, RngState(4), field)
    b = sample_problem_span(problem, RngState(4), field)
    assert a.matrix.tolist() == b.matrix.tolist()


def test_terracini_span_rejects_mismatched_points(field):
    point = sample_point(Format.of(2, 2, 2), RngState(0), field)
    with pytest.raises(ValueError):
        terracini_span([point], [], Format.of(3, 3, 3), field)
