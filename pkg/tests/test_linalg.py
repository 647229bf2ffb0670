from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from legendrian235.errors import DomainError
from legendrian235.exact import RatFunc, parse, var
from legendrian235.linalg import (MatF, PolyInS, charpoly, charpoly_minpoly, minpoly,
                                  rank_nullspace, solve_linear)

from conftest import small_ints

r = var("r")


def matrices(n=4, m=None):
    m = n if m is None else m
    return st.lists(st.lists(small_ints, min_size=m, max_size=m), min_size=n, max_size=n).map(
        MatF.from_rows)


def test_rank_examples():
    assert rank_nullspace(MatF.identity(4)) == (4, [])
    rank, basis = rank_nullspace(MatF.zeros(3))
    assert rank == 0 and len(basis) == 3


def test_osculating_matrix_generic_r():
    A = MatF.diag([r, 1, -1, -r])
    z = [1, 1, 1, 1]
    cols = [z]
    for _ in range(3):
        cols.append(A.apply(cols[-1]))
    assert MatF.from_columns(cols).rank() == 4


@pytest.mark.parametrize("diag, char, mini", [
    ([3, 1, -1, -3], "s^4-10s^2+9", "s^4-10s^2+9"),
    ([1, 1, -1, -1], "(s^2-1)^2", "s^2-1"),
])
def test_charpoly_minpoly_examples(diag, char, mini):
    f, m = charpoly_minpoly(MatF.diag(diag))
    assert f.as_ratfunc() == parse(char)
    assert m.as_ratfunc() == parse(mini)


def test_charpoly_n7c_matrix():
    c = var("c")
    A = MatF.from_rows([[0, -3 * c, 0, -1], [-1, 0, -2 * c, 0], [0, -2, 0, c], [0, 0, 3, 0]])
    f, m = charpoly_minpoly(A)
    assert f == m
    assert f.as_ratfunc() == parse("s^4 - 10c s^2 + 9c^2 + 6")


def test_solve_linear_examples():
    sol = solve_linear(MatF.identity(3), [1, 2, 3])
    assert sol.kind == "unique" and sol.particular == [1, 2, 3]
    sol = solve_linear(MatF.zeros(3), [0, 0, 0])
    assert sol.kind == "family" and sol.dim == 3
    assert solve_linear(MatF.zeros(2), [1, 0]).kind == "none"


def test_skew_forms_preserved_by_diagonal_generic_r():
    # A^T S + S A = 0 with S skew, 6 unknowns s_ij (i < j)
    A = MatF.diag([r, 1, -1, -r])
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    rows = []
    for i in range(4):
        for j in range(4):
            row = []
            for a, b in pairs:
                E = [[0] * 4 for _ in range(4)]
                E[a][b], E[b][a] = 1, -1
                S = MatF.from_rows(E)
                row.append((A.T @ S + S @ A)[i, j])
            rows.append(row)
    rank, basis = rank_nullspace(rows)
    assert len(basis) == 2
    # every solution is antidiagonal: only s_14 and s_23 survive
    for v in basis:
        assert all(v[k] == 0 for k in (0, 1, 4, 5))


def test_inverse_and_det():
    A = MatF.from_rows([[1, 2], [3, 4]])
    assert A.det() == -2
    assert A @ A.inverse() == MatF.identity(2)
    with pytest.raises(DomainError):
        MatF.from_rows([[1, 2], [2, 4]]).inverse()


def test_symbolic_inverse():
    A = MatF.from_rows([[r, 1], [1, r]])
    assert A @ A.inverse() == MatF.identity(2)


def test_polyins_helpers():
    p = PolyInS.from_coeffs([-1, 0, 1])
    assert p.degree == 2 and p.is_monic
    assert str(p) == "s^2-1"
    assert p.divides(PolyInS.from_coeffs([1, 0, -2, 0, 1]))
    assert p(RatFunc(3)) == 8


# -- properties ----------------------------------------------------------------

@given(matrices())
def test_cayley_hamilton_random(A):
    assert charpoly(A).at_matrix(A).is_zero()
    assert minpoly(A).divides(charpoly(A))


def test_cayley_hamilton_model_matrices():
    from legendrian235.models235 import MODEL_NAMES, e_action_matrix, lift_model
    for name in MODEL_NAMES:
        A, f = e_action_matrix(lift_model(name))
        assert f.at_matrix(A).is_zero()


@given(matrices(3, 5))
def test_rank_of_transpose(M):
    assert M.rank() == M.T.rank()


@given(matrices(3, 5))
def test_nullspace_independent(M):
    rank, basis = rank_nullspace(M)
    assert rank + len(basis) == 5
    if basis:
        assert MatF.from_rows(basis).rank() == len(basis)
        for v in basis:
            assert all(x == 0 for x in M.apply(v))


@given(matrices(3), matrices(3))
def test_det_multiplicative(A, B):
    assert (A @ B).det() == A.det() * B.det()


@given(matrices(4))
def test_charpoly_trace_and_det(A):
    f = charpoly(A)
    assert f.coeff(3) == -A.trace()
    assert f.coeff(0) == A.det()


@given(matrices(3), st.lists(small_ints, min_size=3, max_size=3))
def test_solve_linear_solutions_satisfy(M, b):
    sol = solve_linear(M, b)
    if sol.kind != "none":
        assert M.apply(sol.particular) == [RatFunc(x) for x in b]
        for v in sol.basis:
            assert all(x == 0 for x in M.apply(v))


@given(st.lists(st.sampled_from(["0", "1", "-1", "3", "-1/2", "c", "-c^2/6", "r^2+1", "1/(r-1)"]),
                min_size=1, max_size=5).filter(lambda cs: cs[-1] != "0"))
def test_polyins_print_round_trip(cs):
    p = PolyInS.from_coeffs([parse(c) for c in cs])
    assert parse(str(p)) == p.as_ratfunc()
