# tests/test_exactlin.py
import numpy as np
import pytest

from services.exactlin.field import FieldError, PrimeField
from services.exactlin.matrix import Matrix, kernel, left_null_basis, mulmod, nullity, rank
from services.exactlin.rng import RngState, derive_seed, random_invertible, random_vector


def test_identity_and_zero_rank():
    f = PrimeField(101)
    assert rank(Matrix.identity(f, 4)) == 4
    assert rank(Matrix.zeros(f, 3, 5)) == 0
    assert rank(Matrix.zeros(f, 0, 5)) == 0


def test_kernel_of_identity_is_empty_and_of_zero_is_everything():
    f = PrimeField(101)
    assert kernel(Matrix.identity(f, 4)).rows == 0
    k = kernel(Matrix.zeros(f, 3, 3))
    assert k.rows == 3
    assert rank(k) == 3


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_rank_nullity_and_kernel_annihilates(field, seed):
    rng = RngState(seed)
    # rank-deficient by construction: 6 rows built from 3
    base = rng.integers(field.p, (3, 8))
    mix = rng.integers(field.p, (6, 3))
    m = Matrix(field, mulmod(mix, base, field))
    k = kernel(m)
    assert rank(m) + k.rows == m.cols
    assert (m @ k.transpose()).is_zero()
    assert nullity(m) == k.rows


def test_left_null_basis_of_single_row():
    f = PrimeField(101)
    m = Matrix.from_rows(f, [[1, 0, 0, 0, 0]])
    ell = left_null_basis(m)
    assert ell.rows == 4
    assert (m @ ell.transpose()).is_zero()


def test_left_null_basis_of_full_square_is_empty(field):
    m = Matrix(field, random_invertible(5, RngState(3), field))
    assert left_null_basis(m).rows == 0


def test_rank_invariant_under_row_permutation_and_scaling(field):
    rng = RngState(11)
    m = Matrix(field, rng.integers(field.p, (5, 7)))
    permuted = Matrix(field, m.entries[[3, 0, 4, 1, 2]])
    scales = np.array([[2], [5], [7], [field.p - 1], [12345]], dtype=np.int64)
    scaled = Matrix(field, mulmod(np.diagflat(scales), m.entries, field))
    assert rank(permuted) == rank(m) == rank(scaled)


def test_flattening_of_a_generic_point_has_rank_two(field):
    rng = RngState(5)
    x000, x001, x100, x011, x110, x111 = (int(v) for v in rng.integers(field.p, 6))
    m = Matrix.from_rows(field, [[x000, x001, x100, 0], [0, x011, x110, x111]])
    assert rank(m) == 2


def test_mulmod_does_not_overflow():
    f = PrimeField(2**31 - 1)
    x = np.full((2, 50), f.p - 1, dtype=np.int64)
    y = np.full((50, 2), f.p - 1, dtype=np.int64)
    # (p-1)^2 = 1 mod p, fifty times
    assert mulmod(x, y, f).tolist() == [[50, 50], [50, 50]]


def test_random_vector_is_reproducible():
    f = PrimeField(101)
    a = random_vector(4, RngState(42), f)
    b = random_vector(4, RngState(42), f)
    assert a.tolist() == b.tolist()
    assert all(0 <= int(v) < 101 for v in a)


def test_random_vector_never_zero():
    f = PrimeField(3)
    rng = RngState(0)
    for _ in range(2000):
        assert np.any(random_vector(1, rng, f))


def test_random_vector_rejects_bad_dim(field):
    with pytest.raises(ValueError):
        random_vector(0, RngState(0), field)


def test_child_seeds_are_deterministic_and_distinct():
    assert derive_seed(7, 0) == derive_seed(7, 0)
    assert len({derive_seed(7, i) for i in range(16)}) == 16
    assert RngState(7).child(3).seed == derive_seed(7, 3)


@pytest.mark.parametrize("p", [2, 4, 32004, 2**31 + 11])
def test_bad_moduli_are_rejected(p):
    with pytest.raises(FieldError):
        PrimeField(p)


def test_inverse():
    f = PrimeField(101)
    assert (7 * f.inv(7)) % 101 == 1
    with pytest.raises(ZeroDivisionError):
        f.inv(0)
