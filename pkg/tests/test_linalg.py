import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistcodes.gf import make_field
from twistcodes.linalg import (
    batched_full_rank,
    distinguishing_rows,
    gram,
    matrix_hash,
    nullspace,
    rank,
    row_space_contains,
    row_space_equal,
    rref,
    solve_affine,
)

from reference import ref_field_for, ref_rank

FIELDS = [(2, 1), (2, 3), (3, 2), (5, 1), (13, 1)]


def matrices(max_rows=6, max_cols=7):
    @st.composite
    def build(draw):
        F = make_field(*draw(st.sampled_from(FIELDS)))
        r = draw(st.integers(1, max_rows))
        c = draw(st.integers(1, max_cols))
        # bias toward rank deficiency by sometimes repeating rows
        rows = draw(st.lists(st.lists(st.integers(0, F.q - 1), min_size=c, max_size=c), min_size=r, max_size=r))
        M = np.array(rows, dtype=np.int64)
        if draw(st.booleans()) and r > 1:
            M[-1] = F.add(M[0], F.mul(M[1 % r], draw(st.integers(0, F.q - 1))))
        return F, M

    return build()


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_reference(FM):
    F, M = FM
    assert rank(F, M) == ref_rank(ref_field_for(F), M.tolist())


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_shape_and_idempotence(FM):
    F, M = FM
    R, piv = rref(F, M)
    assert R.shape[0] == len(piv)
    for i, c in enumerate(piv):
        assert R[i, c] == 1
        assert np.count_nonzero(R[:, c]) == 1
        assert not R[i, :c].any()
    R2, piv2 = rref(F, R)
    assert np.array_equal(R, R2) and piv == piv2
    assert row_space_equal(F, M, R)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_nullspace_property(FM):
    F, M = FM
    N = nullspace(F, M)
    assert N.shape == (M.shape[1] - rank(F, M), M.shape[1])
    if N.size:
        assert not F.matmul(M, N.T).any()
        assert rank(F, N) == N.shape[0]


@settings(max_examples=150, deadline=None)
@given(matrices(), st.data())
def test_solve_affine(FM, data):
    F, M = FM
    x_true = np.array(data.draw(st.lists(st.integers(0, F.q - 1), min_size=M.shape[1], max_size=M.shape[1])))
    b = F.matmul(M, x_true[:, None])[:, 0]
    sol = solve_affine(F, M, b)
    assert sol.feasible
    assert np.array_equal(F.matmul(M, sol.particular[:, None])[:, 0], b)
    if sol.kernel.size:
        assert not F.matmul(M, sol.kernel.T).any()


def test_solve_affine_infeasible_certificate():
    F = make_field(5)
    A = np.array([[1, 2], [2, 4]])
    sol = solve_affine(F, A, [1, 1])
    assert not sol.feasible and sol.particular is None
    cert = sol.certificate
    assert cert[:2] == [0, 0] and cert[2] != 0


def test_solve_affine_with_no_unknowns():
    F = make_field(7)
    A = np.zeros((3, 0), dtype=np.int64)
    assert not solve_affine(F, A, [0, 1, 0]).feasible
    assert solve_affine(F, A, [0, 0, 0]).feasible


def test_row_space_helpers():
    F = make_field(3)
    A = np.array([[1, 0, 1], [0, 1, 1]])
    B = np.array([[1, 1, 2]])
    assert row_space_contains(F, A, B)
    assert not row_space_contains(F, B, A)
    assert not row_space_equal(F, A, B)
    diff = distinguishing_rows(F, A, B)
    assert diff["only_right"] == [] and len(diff["only_left"]) >= 1


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10_000))
def test_batched_full_rank_matches_rank(pm, seed):
    F = make_field(*pm)
    rng = np.random.default_rng(seed)
    r, c = int(rng.integers(1, 5)), int(rng.integers(1, 6))
    r = min(r, c)
    blocks = rng.integers(0, F.q, size=(30, r, c))
    blocks[::3, -1] = blocks[::3, 0]  # force some dependent stacks
    expected = [rank(F, B) == r for B in blocks]
    assert batched_full_rank(F, blocks).tolist() == expected


def test_gram_and_hash():
    F = make_field(2, 2)
    G = np.array([[1, 1, 0], [0, 1, 1]])
    assert np.array_equal(gram(F, G), F.matmul(G, G.T))
    assert matrix_hash(G) == matrix_hash(G.copy())
    assert matrix_hash(G) != matrix_hash(G.T)
    with pytest.raises(ValueError):
        row_space_equal(F, G, G.T)
