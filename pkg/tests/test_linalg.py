import itertools
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dofkit import ChannelMatrix, RatMatrix, Subspace
from dofkit.errors import InputError, UserCountMismatch
from dofkit.linalg import (
    column_space,
    find_derangement,
    mat_det,
    mat_inverse,
    mat_rank,
    null_space,
    projected_dim,
    subspace_sum_dim,
)

from conftest import rand_channel, rand_full_rank, rand_matrix, rand_nonsingular

fractions_st = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def square_st(n):
    return st.lists(fractions_st, min_size=n * n, max_size=n * n).map(
        lambda ent: RatMatrix(n, n, tuple(ent)))


def det_by_permutations(A: RatMatrix) -> Q:
    """Leibniz-formula determinant; an oracle independent of the
    fraction-free elimination used by mat_det."""
    n = A.rows
    total = Q(0)
    for perm in itertools.permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        term = Q(sign)
        for i in range(n):
            term *= A.at(i, perm[i])
        total += term
    return total


# ---------------------------------------------------------------- matrices


def test_matrix_shape_validation():
    with pytest.raises(InputError):
        RatMatrix(2, 2, (Q(1), Q(2), Q(3)))
    with pytest.raises(InputError):
        RatMatrix.from_rows([[1, 2], [3]])


def test_matrix_ops_smoke():
    A = RatMatrix.from_rows([[1, 2], [3, 4]])
    B = RatMatrix.from_rows([[0, 1], [1, 0]])
    assert (A * B).to_rows() == [[Q(2), Q(1)], [Q(4), Q(3)]]
    assert (A + B).to_rows() == [[Q(1), Q(3)], [Q(4), Q(4)]]
    assert (-A).at(1, 1) == Q(-4)
    assert A.transpose().to_rows() == [[Q(1), Q(3)], [Q(2), Q(4)]]
    assert RatMatrix.hstack([A, B]).cols == 4
    assert A.scale(Q(1, 2)).at(0, 1) == 1
    with pytest.raises(InputError):
        A * RatMatrix.identity(3)


def test_det_frozen_values():
    # alternating-sign 3x3 used by the block-diagonal fixture
    A = RatMatrix.from_rows([[1, 1, -1], [-1, 1, 1], [1, -1, 1]])
    assert mat_det(A) == 4
    assert mat_det(RatMatrix.identity(4)) == 1
    assert mat_det(RatMatrix.from_rows([[1, 2], [2, 4]])) == 0
    assert mat_det(RatMatrix.from_rows([[Q(1, 2), Q(1, 3)],
                                        [Q(1, 5), Q(1, 7)]])) == Q(1, 210)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(square_st))
def test_det_matches_permutation_expansion(A):
    assert mat_det(A) == det_by_permutations(A)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(square_st(n), square_st(n))))
def test_det_multiplicative(pair):
    A, B = pair
    assert mat_det(A * B) == mat_det(A) * mat_det(B)


def test_det_requires_square():
    with pytest.raises(InputError):
        mat_det(RatMatrix.zeros(2, 3))


def test_rank_basics():
    assert mat_rank(RatMatrix.zeros(3, 2)) == 0
    assert mat_rank(RatMatrix.identity(5)) == 5
    A = RatMatrix.from_rows([[1, 2, 3], [2, 4, 6], [0, 0, 1]])
    assert mat_rank(A) == 2


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10))
def test_rank_permutation_invariant(seed):
    rng = random.Random(seed)
    A = rand_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
    r = mat_rank(A)
    rows = A.to_rows()
    rng.shuffle(rows)
    cols = list(zip(*rows))
    rng.shuffle(cols)
    B = RatMatrix.from_rows([list(r) for r in zip(*cols)])
    assert mat_rank(B) == r
    assert r <= min(A.rows, A.cols)


def test_inverse():
    rng = random.Random(3)
    for _ in range(25):
        n = rng.randint(1, 4)
        A = rand_nonsingular(rng, n)
        assert A * mat_inverse(A) == RatMatrix.identity(n)
        assert mat_inverse(A) * A == RatMatrix.identity(n)
    with pytest.raises(InputError):
        mat_inverse(RatMatrix.from_rows([[1, 2], [2, 4]]))


def test_null_space():
    rng = random.Random(11)
    for _ in range(30):
        A = rand_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        N = null_space(A)
        assert N.cols == A.cols - mat_rank(A)
        assert (A * N).is_zero()
        assert mat_rank(N) == N.cols
    assert null_space(RatMatrix.identity(3)).cols == 0


def test_column_space():
    A = RatMatrix.from_rows([[1, 2, 3], [2, 4, 6], [0, 0, 1]])
    S = column_space(A)
    assert S.dim == 2
    for c in range(A.cols):
        assert S.contains(tuple(A.at(r, c) for r in range(A.rows)))


# ---------------------------------------------------------------- subspaces


def test_subspace_basics():
    S = Subspace.from_columns(2, [(1, 2)])
    assert S.dim == 1 and S.ambient_dim == 2
    assert S.contains((Q(1, 2), Q(1)))
    assert not S.contains((1, 1))
    Z = Subspace.zero(3)
    assert Z.dim == 0
    assert Z.contains((0, 0, 0))
    with pytest.raises(InputError):
        Subspace.from_columns(2, [(1, 2), (2, 4)])  # dependent columns


def test_projected_dim_frozen():
    T = Subspace.from_columns(2, [(3, -1)])
    S = Subspace.from_columns(2, [(1, 2)])
    assert projected_dim(T, S) == 1
    # projecting a line onto its own orthogonal complement kills it
    C = S.orthogonal_complement()
    assert projected_dim(C, S) == 0
    assert projected_dim(S, S) == S.dim
    assert projected_dim(Subspace.zero(2), S) == 0
    assert projected_dim(S, Subspace.zero(2)) == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000))
def test_projected_dim_bounds(seed):
    rng = random.Random(seed)
    M = rng.randint(1, 4)
    dt, ds = rng.randint(0, M), rng.randint(0, M)
    T = (Subspace.from_columns(M, rand_full_rank(rng, M, dt).transpose().to_rows())
         if dt else Subspace.zero(M))
    S = (Subspace.from_columns(M, rand_full_rank(rng, M, ds).transpose().to_rows())
         if ds else Subspace.zero(M))
    assert projected_dim(T, S) <= min(T.dim, S.dim)
    assert projected_dim(T, T) == T.dim


def test_orthogonal_complement():
    rng = random.Random(5)
    for _ in range(20):
        M = rng.randint(1, 4)
        d = rng.randint(0, M)
        S = (Subspace.from_columns(M, rand_full_rank(rng, M, d).transpose().to_rows())
             if d else Subspace.zero(M))
        C = S.orthogonal_complement()
        assert S.dim + C.dim == M
        if S.dim and C.dim:
            # bases are mutually orthogonal, so the sum is direct
            assert subspace_sum_dim([S, C]) == M


def test_subspace_sum_dim():
    a = Subspace.from_columns(3, [(1, 0, 0)])
    b = Subspace.from_columns(3, [(1, 1, 0)])
    assert subspace_sum_dim([a, b]) == 2
    assert subspace_sum_dim([a, a]) == 1
    with pytest.raises(InputError):
        subspace_sum_dim([])  # no ambient dimension to report against


# ----------------------------------------------------------- channel grids


def test_channel_matrix_slicing():
    rows = [[1, 0, 1, 0], [0, 1, 0, 1], [2, 0, 3, 0], [0, 2, 0, 3]]
    H = ChannelMatrix.from_rows(2, 2, rows)
    assert H.block(1, 0).to_rows() == [[Q(2), Q(0)], [Q(0), Q(2)]]
    assert H.full_matrix().to_rows() == RatMatrix.from_rows(rows).to_rows()
    H2 = ChannelMatrix.from_blocks([[H.block(i, j) for j in range(2)]
                                    for i in range(2)])
    assert H2 == H
    assert H.is_parallel()
    rows[0][1] = 5
    assert not ChannelMatrix.from_rows(2, 2, rows).is_parallel()


def test_channel_matrix_validation():
    with pytest.raises(UserCountMismatch):
        ChannelMatrix.from_rows(1, 2, [[1, 1], [1, 1]])
    with pytest.raises(InputError):
        ChannelMatrix.from_rows(2, 2, [[1] * 4] * 3)


# ------------------------------------------------------------ derangements


def brute_derangement(H: ChannelMatrix):
    """Smallest valid assignment by exhaustive search (test oracle)."""
    K = H.K
    best = None
    for perm in itertools.permutations(range(1, K + 1)):
        if any(perm[i] == i + 1 for i in range(K)):
            continue
        if any(mat_det(H.block(i, perm[i] - 1)) == 0 for i in range(K)):
            continue
        if best is None or perm < best:
            best = perm
    return best


def test_derangement_all_nonsingular():
    rng = random.Random(2)
    # K=3, every off-diagonal block invertible: lexicographic minimum is
    # receiver i listening to transmitter i+1 cyclically
    H = rand_channel(rng, 3, 2, derangeable=True)
    cert = find_derangement(H)
    assert cert is not None and cert.sigma == (2, 3, 1)
    assert cert.verified


def test_derangement_forced_cycle():
    z = RatMatrix.zeros(1, 1)
    o = RatMatrix.identity(1)
    # only links 1->3, 2->1, 3->2 usable: unique derangement (3, 1, 2)
    H = ChannelMatrix.from_blocks([[o, z, o], [o, o, z], [z, o, o]])
    cert = find_derangement(H)
    assert cert.sigma == (3, 1, 2)


def test_derangement_none_when_impossible():
    z = RatMatrix.zeros(1, 1)
    o = RatMatrix.identity(1)
    H = ChannelMatrix.from_blocks([[o, z], [z, o]])  # no cross links at all
    assert find_derangement(H) is None


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10_000))
def test_derangement_matches_bruteforce(seed):
    rng = random.Random(seed)
    K = rng.randint(2, 4)
    blocks = [[RatMatrix.from_rows([[rng.choice([0, 0, 1, 2])]])
               for _ in range(K)] for _ in range(K)]
    H = ChannelMatrix.from_blocks(blocks)
    cert = find_derangement(H)
    expect = brute_derangement(H)
    if expect is None:
        assert cert is None
    else:
        assert cert is not None and cert.sigma == expect
