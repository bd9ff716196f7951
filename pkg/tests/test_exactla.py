"""Exact linear algebra substrate: frozen examples plus randomized laws."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smonkit.exactla import (
    AmbientMismatch,
    FpMatrix,
    PrimeMismatch,
    QuotientSpace,
    Subspace,
    column_space,
    null_space,
    solve,
)


def fp(p, rows):
    return FpMatrix(p, np.array(rows, dtype=np.int64).reshape(len(rows), -1) if rows else np.zeros((0, 0)))


# -- rref ------------------------------------------------------------------


def test_rref_duplicate_rows_f2():
    m = FpMatrix(2, [[1, 1], [1, 1]])
    red, piv = m.rref()
    assert red == FpMatrix(2, [[1, 1], [0, 0]])
    assert len(piv) == 1


def test_rref_identity_fixed_point():
    m = FpMatrix(5, np.eye(4, dtype=np.int64))
    red, piv = m.rref()
    assert red == m and len(piv) == 4


def test_rank_f3_by_determinant_oracle():
    # oracle: 2x2 determinant mod 3 is 1*1 - 2*2 = -3 = 0, and the matrix is
    # nonzero, so the rank is exactly 1
    a, b, c, d = 1, 2, 2, 1
    det = (a * d - b * c) % 3
    assert det == 0
    m = FpMatrix(3, [[a, b], [c, d]])
    assert m.rank() == 1


def test_rref_idempotent():
    m = FpMatrix(3, [[1, 2, 0], [2, 1, 1]])
    red, _ = m.rref()
    again, _ = red.rref()
    assert red == again


# -- kernels and images -------------------------------------------------------


def _enumerate_kernel(m: FpMatrix):
    """Brute-force kernel by enumerating all vectors (oracle)."""
    vecs = []
    for coords in itertools.product(range(m.p), repeat=m.cols):
        v = np.array(coords, dtype=np.int64)
        if not ((m.data @ v) % m.p).any():
            vecs.append(v)
    return vecs


def test_kernel_zero_matrix_full_space():
    k = null_space(FpMatrix.zeros(2, 2, 2))
    assert k.dim == 2 and k == Subspace.full(2, 2)


def test_kernel_identity_zero():
    assert null_space(FpMatrix.identity(2, 3)).dim == 0


def test_kernel_single_row_f2_by_enumeration():
    m = FpMatrix(2, [[1, 1]])
    oracle = _enumerate_kernel(m)
    assert len(oracle) == 2  # zero and (1, 1)
    k = null_space(m)
    assert k.dim == 1
    assert k.contains_vector([1, 1])


def test_image_identity_and_zero():
    assert column_space(FpMatrix.identity(3, 2)) == Subspace.full(3, 2)
    assert column_space(FpMatrix.zeros(3, 2, 2)).dim == 0


def test_image_single_column():
    im = column_space(FpMatrix(2, [[1], [1]]))
    assert im.dim == 1 and im.contains_vector([1, 1])


# -- subspace lattice ---------------------------------------------------------


def test_sum_and_intersection_of_axes():
    u = Subspace.from_spanning(2, 2, [[1, 0]])
    w = Subspace.from_spanning(2, 2, [[0, 1]])
    assert Subspace.sum_of([u, w]) == Subspace.full(2, 2)
    assert u.intersect(w).dim == 0


def test_sum_idempotent():
    u = Subspace.from_spanning(3, 3, [[1, 2, 0], [0, 0, 1]])
    assert Subspace.sum_of([u, u]) == u


def test_intersection_by_enumeration_oracle():
    u = Subspace.from_spanning(2, 2, [[1, 1]])
    w = Subspace.from_spanning(2, 2, [[1, 0]])
    both = [
        v
        for v in itertools.product(range(2), repeat=2)
        if u.contains_vector(list(v)) and w.contains_vector(list(v))
    ]
    assert both == [(0, 0)]
    assert u.intersect(w).dim == 0


def test_ambient_mismatch():
    u = Subspace.from_spanning(2, 2, [[1, 0]])
    w = Subspace.from_spanning(2, 3, [[1, 0, 0]])
    with pytest.raises(AmbientMismatch):
        Subspace.sum_of([u, w])
    with pytest.raises(AmbientMismatch):
        u.intersect(w)


# -- solving --------------------------------------------------------------------


def test_solve_identity():
    x = solve(FpMatrix.identity(5, 3), [1, 2, 3])
    assert list(x) == [1, 2, 3]


def test_solve_inconsistent():
    assert solve(FpMatrix.zeros(2, 2, 2), [1, 0]) is None


def test_solve_underdetermined_any_valid():
    m = FpMatrix(2, [[1, 1]])
    x = solve(m, [1])
    assert ((m.data @ x) % 2 == [1]).all()


# -- kron --------------------------------------------------------------------------


def test_kron_identity_blocks():
    m = FpMatrix(2, [[1, 1], [0, 1]])
    out = FpMatrix.identity(2, 2).kron(m)
    assert out == FpMatrix.block_diag(2, [m, m])


def test_kron_with_scalar_identity():
    m = FpMatrix(3, [[1, 2], [0, 1]])
    assert m.kron(FpMatrix.identity(3, 1)) == m


def test_kron_rank_multiplicative_fixed():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a = FpMatrix(2, rng.integers(0, 2, size=(3, 3)))
        b = FpMatrix(2, rng.integers(0, 2, size=(3, 3)))
        assert a.kron(b).rank() == a.rank() * b.rank()


def test_prime_mismatch():
    with pytest.raises(PrimeMismatch):
        FpMatrix.identity(2, 2) @ FpMatrix.identity(3, 2)
    with pytest.raises(PrimeMismatch):
        FpMatrix.identity(2, 2).kron(FpMatrix.identity(5, 1))


def test_empty_matrices_compose():
    a = FpMatrix.zeros(2, 0, 3)
    b = FpMatrix.zeros(2, 3, 0)
    assert (a @ b).shape == (0, 0)
    assert (b @ a).shape == (3, 3)
    assert null_space(a).dim == 3


def test_bad_prime_rejected():
    with pytest.raises(ValueError):
        FpMatrix(4, [[1]])
    with pytest.raises(ValueError):
        FpMatrix(1, [[0]])


# -- randomized laws (hypothesis) ---------------------------------------------------


primes = st.sampled_from([2, 3, 5])
dims = st.integers(min_value=0, max_value=4)


@st.composite
def matrices(draw, p=None):
    prime = p if p is not None else draw(primes)
    r, c = draw(dims), draw(dims)
    data = draw(
        st.lists(
            st.lists(st.integers(0, prime - 1), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
    return FpMatrix(prime, np.array(data, dtype=np.int64).reshape(r, c))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_transpose_invariant(m):
    assert m.rank() == m.T.rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert null_space(m).dim + m.rank() == m.cols


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_grassmann_identity(data):
    p = data.draw(primes)
    n = data.draw(st.integers(1, 4))
    rows = st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=0, max_size=4)
    u = Subspace.from_spanning(p, n, np.array(data.draw(rows), dtype=np.int64).reshape(-1, n))
    w = Subspace.from_spanning(p, n, np.array(data.draw(rows), dtype=np.int64).reshape(-1, n))
    total = Subspace.sum_of([u, w])
    meet = u.intersect(w)
    assert u.dim + w.dim == total.dim + meet.dim


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_canonical_form_is_shuffle_invariant(data):
    p = data.draw(primes)
    n = data.draw(st.integers(1, 4))
    rows = data.draw(
        st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=1, max_size=4)
    )
    perm = data.draw(st.permutations(range(len(rows))))
    scale = data.draw(st.integers(1, p - 1))
    shuffled = [[(scale * e) % p for e in rows[i]] for i in perm]
    a = Subspace.from_spanning(p, n, np.array(rows, dtype=np.int64))
    b = Subspace.from_spanning(p, n, np.array(shuffled, dtype=np.int64))
    assert a == b


@settings(max_examples=40, deadline=None)
@given(matrices(p=2), matrices(p=2))
def test_kron_rank_multiplicative(a, b):
    assert a.kron(b).rank() == a.rank() * b.rank()


@settings(max_examples=40, deadline=None)
@given(matrices(p=3), matrices(p=3), matrices(p=3))
def test_kron_associative(a, b, c):
    assert a.kron(b).kron(c) == a.kron(b.kron(c))


def test_quotient_space_coordinates():
    big = Subspace.from_spanning(2, 3, [[1, 0, 0], [0, 1, 0]])
    small = Subspace.from_spanning(2, 3, [[1, 1, 0]])
    q = QuotientSpace(big, small)
    assert q.dim == 1
    assert list(q.coords([1, 0, 0])) == list(q.coords([0, 1, 0]))
    assert q.coords([1, 1, 0]).sum() == 0


def test_large_prime_rejected():
    from smonkit.exactla import MAX_PRIME

    with pytest.raises(ValueError):
        FpMatrix(2**31 - 1, [[1]])  # prime, but past the overflow-safe bound
    big_ok = 1048573  # largest prime under the bound
    assert big_ok < MAX_PRIME
    m = FpMatrix(big_ok, [[big_ok - 1, 1], [1, 1]])
    assert (m @ m).data[0, 0] == ((big_ok - 1) ** 2 + 1) % big_ok
