from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.matrices import DomainMatrix

from sullivan import linalg
from sullivan.errors import InconsistentComplexError, SingularMatrixError

F = Fraction


def test_rank_of_dependent_rows():
    assert linalg.rank(linalg.rational_matrix([[1, 2], [2, 4]])) == 1
    assert linalg.rank(linalg.rational_matrix([], ncols=3)) == 0
    assert linalg.rank(linalg.rational_matrix([[0, 0], [0, 0]])) == 0


def test_kernel_basis_is_canonical():
    M = linalg.rational_matrix([[1, 2, 3]])
    assert linalg.kernel_basis(M) == [[-2, 1, 0], [-3, 0, 1]]
    assert linalg.kernel_basis(M, sparse=True) == [{0: -2, 1: 1}, {0: -3, 2: 1}]


def test_solve_and_no_solution():
    M = linalg.rational_matrix([[1, 1], [0, 1]])
    assert linalg.solve(M, [3, 1]) == [2, 1]
    assert linalg.solve(linalg.rational_matrix([[1], [1]]), [0, 1]) is None
    with pytest.raises(ValueError):
        linalg.solve(M, [1, 2, 3])


def test_solve_sets_free_variables_to_zero():
    M = linalg.rational_matrix([[1, 1]])
    assert linalg.solve(M, [F(1, 2)]) == [F(1, 2), 0]


def test_inverse():
    inv = linalg.inverse(linalg.rational_matrix([[2, 0], [0, 4]]))
    assert linalg.to_rows(inv) == [[F(1, 2), 0], [0, F(1, 4)]]
    with pytest.raises(SingularMatrixError):
        linalg.inverse(linalg.rational_matrix([[1, 2], [2, 4]]))
    with pytest.raises(SingularMatrixError):
        linalg.inverse(linalg.rational_matrix([[1, 2, 3]]))


def test_quotient_dimension_picks_earliest_extension():
    sub = [[1, 0, 0]]
    ambient = [[1, 0, 0], [0, 1, 0], [1, 1, 0]]
    q = linalg.quotient_dimension(sub, ambient, 3)
    assert (q.dimension, q.sub_rank, q.ambient_rank) == (1, 1, 2)
    assert q.representatives == (1,)
    assert q.pick(ambient) == [[0, 1, 0]]


def test_quotient_dimension_rejects_sub_outside_ambient():
    with pytest.raises(InconsistentComplexError):
        linalg.quotient_dimension([[0, 0, 1]], [[1, 0, 0]], 3)


# -------------------------------------------------- #
# Smith normal form
# -------------------------------------------------- #
def test_snf_textbook_example():
    A = linalg.integer_matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    res = linalg.smith_normal_form(A, transforms=True)
    assert res.diagonal == (2, 6, 12)
    L, R = res.left_transform, res.right_transform
    assert linalg.to_rows(L * A * R) == linalg.to_rows(linalg.diagonal_matrix(res.diagonal, (3, 3)))


def test_snf_of_zero_and_empty_matrices():
    assert linalg.smith_normal_form(linalg.integer_matrix([[0, 0], [0, 0]])).diagonal == ()
    assert linalg.smith_normal_form(linalg.integer_matrix([], ncols=3)).rank == 0


def _minor_gcd_factors(rows):
    """Invariant factors from gcds of k×k minors."""
    m, n = len(rows), len(rows[0])
    M = DomainMatrix([[ZZ(x) for x in row] for row in rows], (m, n), ZZ)
    prev, out = 1, []
    for k in range(1, min(m, n) + 1):
        g = 0
        for r in combinations(range(m), k):
            for c in combinations(range(n), k):
                g = gcd(g, int(M.extract(list(r), list(c)).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return tuple(out)


small_int_matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(derandomize=True, max_examples=500, deadline=None)
@given(small_int_matrices)
def test_snf_divisibility_and_minor_gcd_oracle(rows):
    res = linalg.smith_normal_form(linalg.integer_matrix(rows), transforms=True)
    d = res.diagonal
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    assert d == _minor_gcd_factors(rows)

    sympy_factors = invariant_factors(Matrix(rows), domain=ZZ)
    assert d == tuple(sorted(abs(int(x)) for x in sympy_factors if x != 0))

    A = linalg.integer_matrix(rows)
    assert linalg.to_rows(res.left_transform * A * res.right_transform) == \
        linalg.to_rows(linalg.diagonal_matrix(d, (len(rows), len(rows[0]))))


rational_matrices = st.integers(1, 8).flatmap(
    lambda m: st.integers(1, 8).flatmap(
        lambda n: st.lists(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=4),
                                    min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(derandomize=True, max_examples=500, deadline=None)
@given(rational_matrices)
def test_rank_nullity(rows):
    M = linalg.rational_matrix(rows)
    kernel = linalg.kernel_basis(M)
    assert linalg.rank(M) + len(kernel) == len(rows[0])
    for v in kernel:
        assert all(sum(r[j] * v[j] for j in range(len(v))) == 0 for r in rows)
    assert linalg.rank(M) == Matrix(rows).rank()


@settings(derandomize=True, max_examples=500, deadline=None)
@given(rational_matrices.flatmap(
    lambda rows: st.tuples(st.just(rows), st.lists(st.integers(-9, 9), min_size=len(rows), max_size=len(rows)))))
def test_solve_matches_rank_criterion(case):
    rows, b = case
    M = linalg.rational_matrix(rows)
    augmented = linalg.rational_matrix([row + [b_i] for row, b_i in zip(rows, b)])
    x = linalg.solve(M, b)
    if x is None:
        assert linalg.rank(M) < linalg.rank(augmented)
    else:
        assert linalg.rank(M) == linalg.rank(augmented)
        assert [sum(r[j] * x[j] for j in range(len(x))) for r in rows] == b
