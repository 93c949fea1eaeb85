from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from invshapiro.errors import DimensionMismatch
from invshapiro.f2 import F2Matrix, F2Vector, rank, solve, solve_certified


def vec(*bits):
    return F2Vector.from_list(list(bits))


def test_solve_examples():
    assert solve(F2Matrix.identity(3), vec(1, 0, 1)) == vec(1, 0, 1)
    assert solve(F2Matrix.zero(2, 2), vec(1, 0)) is None
    assert solve(F2Matrix.from_rows([[1, 1], [0, 0]]), vec(1, 0)) == vec(1, 0)


def test_rank_examples():
    assert rank(F2Matrix.zero(3, 4)) == 0
    assert rank(F2Matrix.identity(5)) == 5
    assert rank(F2Matrix.from_rows([[1, 1], [1, 1]])) == 1


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve(F2Matrix.identity(3), vec(1, 0))
    with pytest.raises(DimensionMismatch):
        vec(1, 0) + vec(1, 0, 0)


def test_vector_basics():
    v = vec(1, 0, 1, 1)
    assert v + v == F2Vector.zero(4)
    assert v.weight() == 3 and v.support() == [0, 2, 3]
    assert F2Vector.from_array(v.to_array()) == v
    assert v[2] == 1 and v[1] == 0


def test_matrix_conventions():
    A = F2Matrix.from_rows([[1, 1, 0], [0, 1, 1]])
    x = vec(1, 1, 1)
    assert A @ x == vec(0, 0)
    assert A.left_apply(vec(1, 0)) == vec(1, 1, 0)
    assert np.array_equal(A.T.to_array(), A.to_array().T)
    assert np.array_equal((A @ A.T).to_array(), (A.to_array().astype(int) @ A.to_array().T) % 2)


matrices = st.integers(1, 7).flatmap(lambda r: st.integers(1, 9).flatmap(
    lambda c: st.tuples(st.just(c), st.lists(st.integers(0, (1 << c) - 1), min_size=r,
                                             max_size=r))))


@settings(max_examples=200, deadline=None)
@given(matrices, st.integers(0, 127))
def test_solve_against_brute_force(shape, bseed):
    ncols, rows = shape
    A = F2Matrix(len(rows), ncols, tuple(rows))
    b = F2Vector(A.nrows, bseed % (1 << A.nrows))
    x, y = solve_certified(A, b)
    brute = [F2Vector(ncols, xb) for xb in range(1 << ncols) if A @ F2Vector(ncols, xb) == b]
    if x is None:
        assert not brute
        # y selects equations summing to 0 = 1
        assert A.left_apply(y).bits == 0
        assert bin(y.bits & b.bits).count("1") % 2 == 1
    else:
        assert A @ x == b
        assert brute


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_rank_against_brute_force(shape):
    ncols, rows = shape
    A = F2Matrix(len(rows), ncols, tuple(rows))
    image = {(A @ F2Vector(ncols, xb)).bits for xb in range(1 << ncols)}
    assert len(image) == 1 << rank(A)


def test_solve_is_deterministic():
    A = F2Matrix.from_rows([[1, 1, 0], [0, 1, 1]])
    b = vec(1, 0)
    assert {solve(A, b).bits for _ in range(5)} == {solve(A, b).bits}


def test_large_sparse_system():
    n = 16000
    # cyclic differences x_i + x_{i+1}: rank n - 1, consistent iff b has even weight
    rows = tuple((1 << i) | (1 << ((i + 1) % n)) for i in range(n))
    A = F2Matrix(n, n, rows)
    b = F2Vector(n, 0b101)
    x = solve(A, b)
    assert x is not None and A @ x == b
    assert solve(A, F2Vector(n, 1)) is None
