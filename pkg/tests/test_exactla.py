import random

import pytest
from fractions import Fraction

from instanton_ext2.exactla import (
    DimensionMismatchError, ExactMatrix,
    rank, kernel_basis, compose, kron, in_column_space,
)
from instanton_ext2 import rep
from instanton_ext2.instanton_maps import phi_dual_explicit


def random_sparse(rng, rows, cols, nnz, lo=-9, hi=9):
    entries = {}
    for _ in range(nnz):
        r = rng.randrange(rows)
        c = rng.randrange(cols)
        entries[(r, c)] = rng.randint(lo, hi)
    return ExactMatrix(rows, cols, entries)


def test_rank_identity_and_zero():
    assert rank(ExactMatrix.identity(3)) == 3
    assert rank(ExactMatrix.zeros(4, 7)) == 0


def test_rank_of_clebsch_gordan_injection():
    # 9x4 injection at k = n = 2; the naive eliminator is the oracle
    b = rep.cg_beta(2, 2)
    assert (b.rows, b.cols) == (9, 4)
    assert b.rank("naive") == 4
    assert b.rank() == 4


def test_rank_handles_fractional_entries():
    m = ExactMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3)],
                               [Fraction(3, 2), Fraction(1)],
                               [Fraction(2), Fraction(4, 3)]])
    assert m.rank() == 1
    assert m.rank("naive") == 1


def test_kernel_of_identity_is_empty():
    assert kernel_basis(ExactMatrix.identity(5)) == []


def test_kernel_of_row_matrix():
    m = ExactMatrix.from_rows([[1, 1]])
    kb = kernel_basis(m)
    assert kb == [(Fraction(-1), Fraction(1))]  # spans (1, -1)


def test_kernel_dimension_of_dual_operator_cell():
    kb = kernel_basis(phi_dual_explicit(3, 2))
    assert len(kb) == 3


def test_kernel_vectors_annihilate_exactly():
    rng = random.Random(1)
    for _ in range(20):
        m = random_sparse(rng, rng.randint(1, 12), rng.randint(1, 12), 18)
        for v in m.kernel_basis():
            assert all(x == 0 for x in m.apply(v))


def test_kernel_normalization_is_reduced_and_deterministic():
    m = ExactMatrix.from_rows([[1, 2, 0, 3],
                               [0, 0, 1, 4]])
    kb = m.kernel_basis()
    # free columns 1 and 3 carry the unit pivots, in column order
    assert kb == [(Fraction(-2), Fraction(1), Fraction(0), Fraction(0)),
                  (Fraction(-3), Fraction(0), Fraction(-4), Fraction(1))]


def test_rank_nullity():
    rng = random.Random(2)
    for _ in range(30):
        m = random_sparse(rng, rng.randint(1, 15), rng.randint(1, 15), 25)
        assert m.rank() + len(m.kernel_basis()) == m.cols


def test_rank_invariant_under_permutations():
    rng = random.Random(3)
    for _ in range(10):
        m = random_sparse(rng, 8, 11, 30)
        rperm = list(range(8))
        cperm = list(range(11))
        rng.shuffle(rperm)
        rng.shuffle(cperm)
        p = ExactMatrix(8, 11, {(rperm[r], cperm[c]): v
                                for (r, c), v in m.entries.items()})
        assert p.rank() == m.rank()


def test_compose_with_identity():
    m = rep.cg_beta(2, 3)
    assert compose(ExactMatrix.identity(m.rows), m).entries == m.entries
    assert compose(m, ExactMatrix.identity(m.cols)).entries == m.entries


@pytest.mark.parametrize("k", range(1, 7))
@pytest.mark.parametrize("n", range(1, 7))
def test_multiplication_annihilates_injection(k, n):
    assert compose(rep.cg_mu(k, n), rep.cg_beta(k, n)).is_zero


def test_compose_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        compose(ExactMatrix.identity(3), ExactMatrix.identity(4))


def test_compose_space_mismatch():
    a = rep.cg_beta(2, 2)                        # codomain S_2⊗S_2
    b = ExactMatrix.identity(rep.build_space([rep.S(8)]))  # same dim 9
    with pytest.raises(DimensionMismatchError):
        compose(b, a)


def test_kron_identities():
    assert kron(ExactMatrix.identity(2), ExactMatrix.identity(3)) == ExactMatrix.identity(6)
    m = rep.cg_mu(1, 1)
    assert kron(m, ExactMatrix.zeros(2, 2)).is_zero


def test_kron_rank_multiplicative():
    rng = random.Random(4)
    for _ in range(15):
        f = random_sparse(rng, 3, 3, 5)
        g = random_sparse(rng, 3, 3, 5)
        assert kron(f, g).rank() == f.rank() * g.rank()


def test_kron_index_order_is_row_major():
    f = ExactMatrix.from_rows([[2, 0], [0, 3]])
    g = ExactMatrix.from_rows([[5, 7]])
    got = kron(f, g)
    assert got.to_rows() == [[10, 14, 0, 0], [0, 0, 15, 21]]


def test_in_column_space_trivial():
    m = rep.cg_beta(2, 2)
    ok, pre = in_column_space(m, [0] * m.rows)
    assert ok and all(x == 0 for x in pre)
    ident = ExactMatrix.identity(4)
    ok, pre = in_column_space(ident, [1, 2, 3, 4])
    assert ok and pre == (1, 2, 3, 4)


def test_in_column_space_detects_nonmembers():
    m = ExactMatrix.from_rows([[1, 0], [0, 0]])
    ok, pre = in_column_space(m, [0, 5])
    assert not ok and pre is None
    ok, pre = in_column_space(m, [7, 0])
    assert ok and m.apply(pre) == (7, 0)


def test_in_column_space_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        in_column_space(ExactMatrix.identity(3), [1, 2])


def test_preimage_is_exact():
    rng = random.Random(5)
    for _ in range(15):
        m = random_sparse(rng, rng.randint(2, 10), rng.randint(2, 10), 16)
        x = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(m.cols)]
        v = m.apply(x)
        ok, pre = m.in_column_space(v)
        assert ok
        assert m.apply(pre) == v


def test_eliminators_agree_randomized():
    rng = random.Random(6)
    for _ in range(40):
        r = rng.randint(1, 25)
        c = rng.randint(1, 25)
        m = random_sparse(rng, r, c, rng.randint(1, 3 * max(r, c)))
        assert m.rank() == m.rank("naive")


def test_transpose_rank_and_spaces():
    b = rep.cg_beta(3, 2)
    bt = b.transpose()
    assert bt.rank() == b.rank()
    assert bt.domain == b.codomain.dual()
    assert bt.codomain == b.domain.dual()


def test_entries_stay_canonical():
    m = ExactMatrix(2, 2, {(0, 0): Fraction(0), (1, 1): Fraction(2, 4)})
    assert (0, 0) not in m.entries
    assert m.entry(1, 1) == Fraction(1, 2)
    assert m.entry(0, 1) == 0
