from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from decic.field import GF, QQ, QQi, ReconstructionError
from decic.linalg import LinalgError, LinalgOptions, SparseMatrix, identity, kernel, rank, solve
from oracles import fraction_rank

MODULAR = LinalgOptions(dense_threshold=0)
DENSE = LinalgOptions(dense_threshold=10**6)

small_ints = st.integers(-4, 4)


@st.composite
def matrices(draw, max_dim=7):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r))
    # sometimes force dependencies
    if r > 2 and draw(st.booleans()):
        rows[-1] = [a + 2 * b for a, b in zip(rows[0], rows[1])]
    return rows


def test_kernel_example():
    M = SparseMatrix.from_rows([[1, 1], [1, 1]])
    for opts in (MODULAR, DENSE):
        cert = kernel(M, opts)
        assert cert.rank == 1
        assert len(cert.basis) == 1
        v = cert.basis[0]
        assert v[0] == -v[1] != 0


def test_zero_matrix_and_identity():
    Z = SparseMatrix(1, 1)
    cert = kernel(Z, MODULAR)
    assert cert.rank == 0 and cert.nullity == 1
    for n in (1, 5, 70):
        assert rank(identity(n), MODULAR) == n
        assert kernel(identity(n), MODULAR).nullity == 0


def test_solve_examples():
    I3 = identity(3)
    sol = solve(I3, [1, 2, 3], MODULAR)
    assert list(sol.x) == [1, 2, 3]
    M = SparseMatrix.from_rows([[1, 1], [1, 1]])
    assert solve(M, [1, 2], MODULAR) is None
    assert solve(M, [1, 2], DENSE) is None


@given(matrices())
def test_rank_matches_fraction_oracle(rows):
    expected = fraction_rank(rows)
    M = SparseMatrix.from_rows(rows)
    assert rank(M, MODULAR) == expected
    assert rank(M, DENSE) == expected


@given(matrices())
def test_kernel_is_certified(rows):
    M = SparseMatrix.from_rows(rows)
    for opts in (MODULAR, DENSE):
        cert = kernel(M, opts)
        assert cert.rank + cert.nullity == M.ncols
        for v in cert.basis:
            assert all(x == 0 for x in M.mul_vec(v))


@given(matrices(), st.lists(small_ints, min_size=7, max_size=7))
def test_solve_agrees_with_rank_criterion(rows, rhs):
    b = rhs[: len(rows)]
    M = SparseMatrix.from_rows(rows)
    consistent = fraction_rank(rows) == fraction_rank([r + [x] for r, x in zip(rows, b)])
    sol = solve(M, b, MODULAR)
    assert (sol is not None) == consistent
    if sol is not None:
        assert M.mul_vec(sol.x) == [mpq(x) for x in b]


def test_large_entries_need_several_primes():
    big = 2**200 + 1
    rows = [[big, 1, 0], [0, big, 1], [big, big + 1, 1]]
    M = SparseMatrix.from_rows(rows)
    with pytest.raises(ReconstructionError):
        kernel(M, MODULAR)
    roomy = LinalgOptions(dense_threshold=0, primes=40)
    assert rank(M, roomy) == fraction_rank(rows) == 2
    v = kernel(M, roomy).basis[0]
    assert all(x == 0 for x in M.mul_vec(v))


def test_rational_entries():
    rows = [[Fraction(1, 3), Fraction(2, 7)], [Fraction(2, 3), Fraction(4, 7)]]
    M = SparseMatrix.from_rows(rows)
    cert = kernel(M, MODULAR)
    assert cert.rank == 1
    assert all(x == 0 for x in M.mul_vec(cert.basis[0]))


def test_thread_count_does_not_change_result():
    rows = [[(i * j + i + 2 * j) % 11 - 5 for j in range(30)] for i in range(25)]
    M = SparseMatrix.from_rows(rows)
    a = kernel(M, LinalgOptions(dense_threshold=0, threads=1))
    b = kernel(M, LinalgOptions(dense_threshold=0, threads=4))
    assert a.basis == b.basis and a.rank == b.rank == fraction_rank(rows)


def test_seed_does_not_change_result():
    rows = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 0, 1]]
    M = SparseMatrix.from_rows(rows)
    assert kernel(M, LinalgOptions(dense_threshold=0, seed=1)).basis == kernel(M, LinalgOptions(dense_threshold=0, seed=99)).basis


def test_other_fields():
    K = GF(7)
    M = SparseMatrix.from_rows([[1, 2], [3, 6]], K)
    assert rank(M, MODULAR) == 1
    Ki = QQi()
    i = Ki((0, 1)).value
    M = SparseMatrix.from_rows([[Ki(1).value, i], [i, Ki(-1).value]], Ki)
    cert = kernel(M)
    assert cert.rank == 1
    assert all(Ki.is_zero(x) for x in M.mul_vec(cert.basis[0]))


def test_option_validation():
    with pytest.raises(LinalgError):
        LinalgOptions(primes=1)
    with pytest.raises(LinalgError):
        LinalgOptions(threads=0)
    with pytest.raises(LinalgError):
        SparseMatrix(2, 2, {(2, 0): 1})
    with pytest.raises(LinalgError):
        SparseMatrix.from_rows([[1, 2], [3]])
    assert QQ().from_rational(0) == 0
