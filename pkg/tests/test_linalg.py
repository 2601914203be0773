import numpy as np
from hypothesis import given, settings, strategies as st
from plugins.split_ring.linalg import (
    in_span,
    nullspace_mod,
    rank_mod,
    row_basis,
    rref_mod,
    same_span,
    solve_mod,
)

matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(0, 4), min_size=n, max_size=n), min_size=m, max_size=m
        )
    )
).map(lambda rows: np.array(rows, dtype=np.int64))


def test_rref_of_identity_block():
    a = np.array([[2, 4], [1, 1]])
    r, pivots = rref_mod(a, 5)
    assert pivots == [0, 1]
    assert np.array_equal(r, np.eye(2, dtype=np.int64))


def test_rank_drops_mod_p():
    # rows are independent over Q but equal mod 3
    a = np.array([[1, 2], [4, 5]])
    assert rank_mod(a, 3) == 1
    assert rank_mod(a, 5) == 2


def test_solve_returns_none_when_inconsistent():
    a = np.array([[1, 1], [2, 2]])
    assert solve_mod(a, np.array([1, 0]), 3) is None
    x = solve_mod(a, np.array([1, 2]), 3)
    assert np.array_equal((a @ x) % 3, [1, 2])


def test_in_span_of_empty():
    empty = np.zeros((0, 3), dtype=np.int64)
    assert in_span(empty, np.array([0, 3, 0]), 3)
    assert not in_span(empty, np.array([0, 1, 0]), 3)


@given(matrices)
@settings(max_examples=100, deadline=None)
def test_nullspace_is_kernel(a):
    p = 5
    kernel = nullspace_mod(a, p)
    assert kernel.shape[0] == a.shape[1] - rank_mod(a, p)
    for v in kernel:
        assert not np.any((a @ v) % p)


@given(matrices)
@settings(max_examples=100, deadline=None)
def test_row_basis_spans_the_same_space(a):
    p = 5
    assert same_span(a, row_basis(a, p), p)
    for row in a:
        assert in_span(row_basis(a, p), row, p)
