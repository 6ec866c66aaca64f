from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszul.linalg import (
    Matrix,
    RowReduction,
    ShapeError,
    SpanError,
    complement_basis,
    express_in_span,
    image_rank,
    independent_subset,
    kernel_basis,
    qparse,
    qstr,
    rank,
    solve_affine,
    vec,
)

Q = Fraction


def test_kernel_of_identity_is_empty():
    assert kernel_basis(Matrix.identity(2)) == []


def test_kernel_of_zero_map():
    assert kernel_basis(Matrix.zero(1, 2)) == [vec([1, 0]), vec([0, 1])]


def test_kernel_rank_one_matrix():
    # hand row-reduction: [[1,2],[2,4]] ~ [[1,2],[0,0]], null space (-2, 1)
    A = Matrix.from_rows([[1, 2], [2, 4]])
    assert kernel_basis(A) == [vec([-2, 1])]


def test_image_rank_examples():
    assert image_rank(Matrix.identity(3))[0] == 3
    assert image_rank(Matrix.zero(3, 3)) == (0, [])
    r, basis = image_rank(Matrix.from_rows([[1, 2], [2, 4]]))
    assert r == 1
    assert basis == [vec([1, 2])]


def test_solve_identity():
    b = vec([3, Q(-1, 2), 7])
    assert solve_affine(Matrix.identity(3), b) == b


def test_solve_inconsistent():
    assert solve_affine(Matrix.zero(2, 2), vec([1, 0])) is None


def test_solve_free_variable_convention():
    # x + y = 2 with y free -> (2, 0)
    assert solve_affine(Matrix.from_rows([[1, 1]]), vec([2])) == vec([2, 0])


def test_solve_shape_mismatch():
    with pytest.raises(ShapeError):
        solve_affine(Matrix.identity(2), vec([1, 2, 3]))


def test_complement_trivial_cases():
    e = [vec([1, 0]), vec([0, 1])]
    assert complement_basis([], e) == e
    assert complement_basis(e, e) == []


def test_complement_greedy_choice():
    got = complement_basis([vec([1, 1])], [vec([1, 0]), vec([0, 1])])
    assert got == [vec([1, 0])]


def test_complement_rejects_bad_U():
    e = [vec([1, 0, 0]), vec([0, 1, 0])]
    with pytest.raises(SpanError):
        complement_basis([vec([1, 0, 0]), vec([2, 0, 0])], e)
    with pytest.raises(SpanError):
        complement_basis([vec([0, 0, 1])], e)


def test_qstr_roundtrip():
    assert qstr(Q(3, 2)) == "3/2"
    assert qstr(Q(5)) == "5"
    assert qparse("3/2") == Q(3, 2)
    assert qparse("-7") == Q(-7)


def test_matrix_product_and_apply():
    A = Matrix.from_rows([[1, 2], [0, 1]])
    B = Matrix.from_rows([[1, 0], [3, 1]])
    assert (A @ B).dense() == [[7, 2], [3, 1]]
    assert A @ vec([1, 1]) == vec([3, 1])


def test_express_in_span():
    basis = [vec([1, 0, 1]), vec([0, 1, 0])]
    assert express_in_span(basis, vec([2, 3, 2])) == vec([2, 3])
    assert express_in_span(basis, vec([0, 0, 1])) is None
    assert express_in_span([], vec([0, 0])) == ()
    assert express_in_span([], vec([1, 0])) is None


def test_independent_subset_keeps_order():
    fam = [vec([1, 0]), vec([2, 0]), vec([1, 1])]
    assert independent_subset(fam) == [vec([1, 0]), vec([1, 1])]


small_fracs = st.builds(Q, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def small_matrix(draw, max_dim=5):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    rows = draw(
        st.lists(st.lists(small_fracs, min_size=c, max_size=c), min_size=r, max_size=r)
    )
    return Matrix.from_rows(rows)


@given(small_matrix())
@settings(max_examples=60, deadline=None)
def test_rank_nullity(A):
    assert rank(A) + len(kernel_basis(A)) == A.cols


@given(small_matrix(), st.lists(small_fracs, min_size=5, max_size=5))
@settings(max_examples=60, deadline=None)
def test_solve_of_consistent_system(A, xs):
    x = vec(xs[: A.cols])
    b = A @ x
    y = solve_affine(A, b)
    assert y is not None
    assert A @ y == b


@given(small_matrix())
@settings(max_examples=40, deadline=None)
def test_kernel_vectors_annihilated(A):
    for v in kernel_basis(A):
        assert all(e == 0 for e in A @ v)


@given(small_matrix())
@settings(max_examples=40, deadline=None)
def test_reduction_deterministic(A):
    r1 = RowReduction(A)
    r2 = RowReduction(A)
    assert r1.pivots == r2.pivots
    assert r1.R == r2.R
