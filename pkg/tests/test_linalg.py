from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evengc.linalg import (
    SparseRationalMatrix,
    bareiss_det,
    bareiss_rank,
    kernel_basis,
    rank,
    rank_mod_p,
    read_sms,
    reduce_mod_image,
    rref,
    write_sms,
)

small_ints = st.integers(min_value=-3, max_value=3)


@st.composite
def dense_matrices(draw, max_dim=6):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    return [[draw(small_ints) for _ in range(c)] for _ in range(r)], r, c


def test_rank_examples():
    assert rank(SparseRationalMatrix.identity(3)) == 3
    assert rank(SparseRationalMatrix.zeros(3, 4)) == 0
    m = SparseRationalMatrix.from_dense([[1, 1], [1, 1]])
    assert rank(m) == 1
    assert rank(SparseRationalMatrix.from_dense([[1, 2], [3, 4]])) == 2


def test_no_stored_zeros_and_range_check():
    m = SparseRationalMatrix(2, 2, {(0, 0): 0, (1, 1): Fraction(1, 2)})
    assert m.nnz() == 1
    with pytest.raises((ValueError, IndexError)):
        SparseRationalMatrix(2, 2, {(2, 0): 1})


def test_reduce_mod_image_example():
    m = SparseRationalMatrix.from_dense([[1], [1]])
    assert reduce_mod_image([1, 0], m) == [0, -1]
    assert reduce_mod_image([1, 1], m) == [0, 0]
    with pytest.raises(ValueError):
        reduce_mod_image([1, 0, 0], m)


@given(dense_matrices())
@settings(max_examples=150, deadline=None)
def test_rank_routes_agree(data):
    dense, r, c = data
    m = SparseRationalMatrix(r, c, {(i, j): x for i, row in enumerate(dense) for j, x in enumerate(row)})
    sparse = rank(m, method="sparse")
    assert sparse == bareiss_rank(dense) if r and c else sparse == 0
    assert sparse == rank(m.transpose(), method="sparse")
    # mod a large prime agrees for these small entries
    assert rank_mod_p(m, 1_000_003) == sparse


@given(dense_matrices())
@settings(max_examples=100, deadline=None)
def test_rref_shape(data):
    dense, r, c = data
    m = SparseRationalMatrix(r, c, {(i, j): x for i, row in enumerate(dense) for j, x in enumerate(row)})
    red = rref(m)
    assert red.rank == len(red.pivots) <= min(r, c)
    assert list(red.pivots) == sorted(red.pivots)
    for row, p in zip(red.rows, red.pivots):
        assert row[p] == 1
        assert min(row) == p
        for other, q in zip(red.rows, red.pivots):
            if other is not row:
                assert p not in other


@given(dense_matrices())
@settings(max_examples=100, deadline=None)
def test_kernel_basis(data):
    dense, r, c = data
    m = SparseRationalMatrix(r, c, {(i, j): x for i, row in enumerate(dense) for j, x in enumerate(row)})
    ker = kernel_basis(m)
    assert len(ker) == c - rank(m)
    for vec in ker:
        assert all(x == 0 for x in m.apply(vec))
    if ker:
        basis = SparseRationalMatrix.from_dense(ker)
        assert rank(basis) == len(ker)


@given(dense_matrices(), st.lists(small_ints, min_size=6, max_size=6))
@settings(max_examples=100, deadline=None)
def test_reduce_mod_image_properties(data, coeffs):
    dense, r, c = data
    m = SparseRationalMatrix(r, c, {(i, j): x for i, row in enumerate(dense) for j, x in enumerate(row)})
    # an image vector reduces to zero
    image = m.apply(coeffs[:c])
    assert all(x == 0 for x in reduce_mod_image(image, m))
    # reduction is idempotent and shifts by an image vector only
    vec = [Fraction(x) for x in (coeffs * 2)[:r]]
    red = reduce_mod_image(vec, m)
    assert reduce_mod_image(red, m) == red
    diff = [a - b for a, b in zip(vec, red)]
    assert all(x == 0 for x in reduce_mod_image(diff, m))


def test_bareiss_det():
    assert bareiss_det([[2, 0], [0, 3]]) == 6
    assert bareiss_det([[0, 1], [1, 0]]) == -1
    assert bareiss_det([[Fraction(1, 2), 1], [1, 2]]) == 0
    assert bareiss_det([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3


def test_matmul_and_transpose():
    a = SparseRationalMatrix.from_dense([[1, 2], [0, 1]])
    b = SparseRationalMatrix.from_dense([[1, -2], [0, 1]])
    assert (a @ b).to_dense() == SparseRationalMatrix.identity(2).to_dense()
    assert a.T.to_dense() == [[1, 0], [2, 1]]


def test_sms_round_trip():
    m = SparseRationalMatrix(3, 4, {(0, 1): -1, (2, 3): Fraction(5, 2), (1, 0): 7})
    text = write_sms(m)
    assert text.splitlines()[0] == "3 4 M"
    assert text.splitlines()[-1] == "0 0 0"
    assert read_sms(text) == m


def test_sms_errors():
    with pytest.raises(ValueError):
        read_sms("2 2 M\n1 1 1\n")
    with pytest.raises(ValueError):
        read_sms("2 2 X\n0 0 0\n")
    with pytest.raises(ValueError):
        read_sms("2 2 M\n3 1 1\n0 0 0\n")
