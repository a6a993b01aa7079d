import itertools

import pytest
from hypothesis import given, strategies as st

from mcg4.linalg import (
    DimensionError,
    F2Matrix,
    IntMatrix,
    cokernel_presentation,
    complete_to_basis,
    f2_in_row_space,
    f2_kernel_basis,
    f2_rank,
    kernel_basis,
    smith_normal_form,
    solve_linear,
    unimodular_inverse,
)

from oracles import determinantal_divisors, f2_rank_brute, rational_rank


def matrices(max_dim=6, lo=-5, hi=5, min_dim=0):
    return st.integers(min_dim, max_dim).flatmap(
        lambda r: st.integers(min_dim, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r
            ).map(lambda rows, r=r, c=c: IntMatrix(rows, shape=(r, c)))
        )
    )


# --- IntMatrix basics -------------------------------------------------------


def test_empty_shapes():
    e = IntMatrix([], shape=(0, 3))
    assert e.shape == (0, 3)
    assert e.T.shape == (3, 0)
    assert (e.T @ e).shape == (3, 3)
    assert (e @ e.T).shape == (0, 0)
    assert IntMatrix.identity(0).det() == 1


def test_ragged_rejected():
    with pytest.raises(DimensionError):
        IntMatrix([[1, 2], [3]])


def test_multiply_mismatch():
    with pytest.raises(DimensionError):
        IntMatrix([[1, 2]]) @ IntMatrix([[1, 2]])


def test_no_overflow():
    big = IntMatrix([[2**70, 1], [1, 0]])
    assert (big @ big)[0, 0] == 2**140 + 1


# --- Smith normal form ------------------------------------------------------


def test_snf_examples():
    s = smith_normal_form([[2, 0], [0, 3]])
    assert s.d == (1, 6)
    assert s.left @ IntMatrix([[2, 0], [0, 3]]) @ s.right == IntMatrix.diag([1, 6])
    assert smith_normal_form(IntMatrix([], shape=(0, 0))).d == ()
    assert smith_normal_form([[0, 1], [1, 0]]).d == (1, 1)


def test_snf_deterministic():
    m = IntMatrix([[4, 6, 2], [6, 9, 3], [2, 3, 5]])
    a, b = smith_normal_form(m), smith_normal_form(m)
    assert (a.d, a.left, a.right) == (b.d, b.left, b.right)


@given(matrices())
def test_snf_invariants(m):
    s = smith_normal_form(m)
    assert s.left @ m @ s.right == s.diagonal_matrix()
    assert all(x >= 0 for x in s.d)
    nz = [x for x in s.d if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert s.d[len(nz):] == (0,) * (len(s.d) - len(nz))
    assert abs(s.left.det()) == 1 and abs(s.right.det()) == 1


@given(matrices(max_dim=4, lo=-4, hi=4))
def test_snf_matches_determinantal_divisors(m):
    # d_1 ... d_k equals the gcd of the k x k minors
    s = smith_normal_form(m)
    dk = determinantal_divisors(m.tolist())
    prod = 1
    for k, g in enumerate(dk):
        prod *= s.d[k]
        assert prod == g


# --- kernels, cokernels -----------------------------------------------------


def test_kernel_examples():
    assert kernel_basis([[0]]).tolist() == [[1]]
    assert kernel_basis([[1]]).shape == (1, 0)
    k = kernel_basis([[1, 1], [1, 1]])
    assert k.columns() in ([(1, -1)], [(-1, 1)])


@given(matrices())
def test_kernel_properties(m):
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    assert rational_rank(m.tolist()) + k.cols == m.cols
    # saturated: the columns extend to a basis
    if k.cols:
        assert all(x == 1 for x in smith_normal_form(k).d)
        u = complete_to_basis(k)
        assert abs(u.det()) == 1


def test_cokernel_examples():
    assert cokernel_presentation([[2]]) == (0, (2,))
    assert cokernel_presentation([[0]]) == (1, ())
    assert cokernel_presentation(IntMatrix([], shape=(0, 0))) == (0, ())


@given(matrices())
def test_cokernel_against_snf(m):
    free, torsion = cokernel_presentation(m)
    d = smith_normal_form(m).d
    assert torsion == tuple(x for x in d if x > 1)
    assert free == m.rows - sum(1 for x in d if x)


# --- linear systems ---------------------------------------------------------


def test_solve_examples():
    assert solve_linear([[2]], [[4]]).tolist() == [[2]]
    assert solve_linear([[2]], [[3]]) is None
    assert solve_linear([[1]], [[0]]).tolist() == [[0]]
    with pytest.raises(DimensionError):
        solve_linear([[1, 0]], [[1], [2]])


@given(matrices(max_dim=3, lo=-3, hi=3, min_dim=1), st.data())
def test_solve_against_box_search(m, data):
    b = IntMatrix([[data.draw(st.integers(-4, 4))] for _ in range(m.rows)])
    x = solve_linear(m, b)
    if x is not None:
        assert m @ x == b
        return
    # no solution claimed: a box search must also fail
    for cand in itertools.product(range(-6, 7), repeat=m.cols):
        assert m @ IntMatrix([[c] for c in cand], shape=(m.cols, 1)) != b


def test_unimodular_inverse():
    u = IntMatrix([[2, 1], [1, 1]])
    assert u @ unimodular_inverse(u) == IntMatrix.identity(2)
    with pytest.raises(ValueError):
        unimodular_inverse([[2]])


# --- GF(2) ------------------------------------------------------------------


def test_f2_examples():
    assert f2_rank(F2Matrix([[1, 0], [0, 1]])) == 2
    assert f2_kernel_basis(F2Matrix([[1, 0], [0, 1]])).rows == 0
    assert f2_rank(F2Matrix([[0, 0], [0, 0]])) == 0
    assert f2_kernel_basis(F2Matrix([[0, 0], [0, 0]])).rows == 2
    assert f2_rank(F2Matrix([[1, 1], [1, 1]])) == 1
    assert f2_kernel_basis(F2Matrix([[1, 1], [1, 1]])).tolist() == [[1, 1]]


@given(matrices(max_dim=6, lo=0, hi=1, min_dim=1))
def test_f2_rank_nullity(m):
    f = F2Matrix.from_int(m)
    r = f2_rank(f)
    assert r == f2_rank_brute(m.tolist())
    ker = f2_kernel_basis(f)
    assert r + ker.rows == m.cols
    assert (f @ ker.T).is_zero()
    assert f2_rank(ker) == ker.rows


def test_f2_row_space():
    m = F2Matrix([[1, 1, 0], [0, 1, 1]])
    assert f2_in_row_space(m, 0b101)
    assert not f2_in_row_space(m, 0b001)
