"""Exact linear algebra over Z_p: echelon forms, parity checks, syndromes."""

import numpy as np
import pytest

from lqn import (
    DimensionMismatchError,
    RankDeficientError,
    ensure_prime,
    is_prime,
    mat_vec_mul,
    mod_reduce,
    parity_check,
    rref,
    syndromes,
)


def enumerate_rowspace(m, p):
    """All p**k combinations of the rows, as a set of tuples. Test-local oracle."""
    m = np.atleast_2d(np.asarray(m, dtype=np.int64)) % p
    k = m.shape[0]
    out = set()
    for idx in range(p**k):
        coeffs = [(idx // p**j) % p for j in range(k)]
        v = np.zeros(m.shape[1], dtype=np.int64)
        for c, row in zip(coeffs, m):
            v = (v + c * row) % p
        out.add(tuple(int(x) for x in v))
    return out


def test_is_prime_small_values():
    assert [q for q in range(20) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert is_prime(37)
    assert not is_prime(1)
    assert not is_prime(-7)
    assert not is_prime(91)  # 7 * 13


def test_ensure_prime_rejects_composites():
    assert ensure_prime(13) == 13
    with pytest.raises(ValueError):
        ensure_prime(12)
    with pytest.raises(ValueError):
        ensure_prime(1)


def test_mod_reduce_wraps_negatives():
    out = mod_reduce([-1, 0, 7, -6], 5)
    assert out.tolist() == [4, 0, 2, 4]
    assert out.dtype == np.int64


def test_rref_fixed_cases():
    r = rref([[1, 1]], 3)
    assert r.matrix.tolist() == [[1, 1]]
    assert r.rank == 1
    assert r.pivot_cols == (0,)

    # dependent rows collapse, pivot scaled to 1
    r = rref([[2, 2], [1, 1]], 3)
    assert r.matrix.tolist() == [[1, 1], [0, 0]]
    assert r.rank == 1

    # row swap to bring a pivot up, then clear above
    r = rref([[0, 1, 1], [1, 0, 2]], 3)
    assert r.matrix.tolist() == [[1, 0, 2], [0, 1, 1]]
    assert r.pivot_cols == (0, 1)


def test_rref_is_idempotent_and_preserves_rowspace():
    rng = np.random.default_rng(2024)
    for p in (2, 3, 5):
        for _ in range(20):
            m = rng.integers(0, p, size=(2, 4))
            r = rref(m, p)
            again = rref(r.matrix, p)
            assert np.array_equal(again.matrix, r.matrix)
            assert again.pivot_cols == r.pivot_cols
            assert enumerate_rowspace(m, p) == enumerate_rowspace(r.matrix, p)
            assert r.rank == len(r.pivot_cols)


def test_rref_pivot_columns_are_unit_vectors():
    rng = np.random.default_rng(7)
    for _ in range(20):
        m = rng.integers(0, 5, size=(3, 5))
        r = rref(m, 5)
        for i, c in enumerate(r.pivot_cols):
            col = r.matrix[:, c]
            assert col[i] == 1
            assert np.count_nonzero(col) == 1


def test_rref_output_read_only():
    r = rref([[1, 2], [3, 4]], 5)
    with pytest.raises(ValueError):
        r.matrix[0, 0] = 9


def test_parity_check_fixture():
    # G = [1 1] over Z_3: single free column, H = [[2 1]]
    h = parity_check([[1, 1]], 3)
    assert h.tolist() == [[2, 1]]

    h = parity_check([[1, 0, 2], [0, 1, 1]], 3)
    assert h.tolist() == [[1, 2, 1]]


def test_parity_check_annihilates_rowspace():
    rng = np.random.default_rng(11)
    for p in (2, 3, 5, 7):
        for _ in range(10):
            g = rng.integers(0, p, size=(2, 5))
            if rref(g, p).rank < 2:
                continue
            h = parity_check(g, p)
            assert h.shape == (3, 5)
            assert not (g @ h.T % p).any()


def test_parity_check_kernel_is_exactly_the_code():
    # over the whole of Z_p^n, zero syndrome <-> rowspace membership
    for g, p in (([[1, 1]], 3), ([[1, 2, 4]], 5), ([[1, 0, 1], [0, 1, 2]], 3)):
        h = parity_check(g, p)
        n = np.atleast_2d(g).shape[1]
        space = enumerate_rowspace(g, p)
        grid = np.stack(
            np.unravel_index(np.arange(p**n), (p,) * n), axis=1
        ).astype(np.int64)
        zero = ~(grid @ h.T % p).any(axis=1)
        kernel = {tuple(int(x) for x in v) for v in grid[zero]}
        assert kernel == space


def test_parity_check_syndromes_split_space_evenly():
    g, p = [[1, 2, 0, 1]], 3
    h = parity_check(g, p)
    grid = np.stack(np.unravel_index(np.arange(3**4), (3,) * 4), axis=1)
    s = syndromes(h, grid, p)
    # each of the p**(n-k) syndrome patterns hits exactly p**k vectors
    _, counts = np.unique(s, axis=0, return_counts=True)
    assert counts.shape[0] == 27
    assert (counts == 3).all()


def test_parity_check_rejects_rank_deficient():
    with pytest.raises(RankDeficientError):
        parity_check([[1, 1], [2, 2]], 3)


def test_mat_vec_mul_is_message_map():
    g = [[1, 0, 2], [0, 1, 1]]
    assert mat_vec_mul(g, [1, 2], 3).tolist() == [1, 2, 1]
    assert mat_vec_mul(g, [0, 0], 3).tolist() == [0, 0, 0]
    with pytest.raises(DimensionMismatchError):
        mat_vec_mul(g, [1, 2, 3], 3)


def test_syndromes_single_and_batch_agree():
    h = parity_check([[1, 1]], 3)
    batch = np.array([[0, 1], [2, 1], [1, 1]])
    s = syndromes(h, batch, 3)
    for row, expect in zip(batch, s):
        assert syndromes(h, row, 3).tolist() == expect.tolist()
