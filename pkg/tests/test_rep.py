import pytest
from fractions import Fraction

from instanton_ext2.exactla import ExactMatrix, compose
from instanton_ext2 import rep
from instanton_ext2.rep import (
    S, V, Wedge2V, Sym2V, Dual, build_space,
    Character, character, decompose_character, CharacterDecompositionError,
    cg_beta, cg_mu, cg_beta_v, cg_mu_v, desym_sigma, sym_iota,
    swap_factors, on_dual_spaces, is_weight_homogeneous,
    blockwise_kernel_character, blockwise_image_character, blockwise_rank,
)


def test_space_dimensions():
    assert build_space([S(0)]).dim == 1
    assert build_space([S(2), V(2)]).dim == 18
    assert build_space([S(1), S(1), Wedge2V(1)]).dim == 24
    assert build_space([Sym2V(1)]).dim == 10
    assert build_space([S(-1)]).dim == 0
    assert build_space([V(-1), S(3)]).dim == 0


def test_index_roundtrip():
    sp = build_space([S(2), V(1), S(1)])
    for i in range(sp.dim):
        assert sp.index(sp.multi(i)) == i
    assert sp.index((0, 0, 0)) == 0
    assert sp.index((2, 3, 1)) == sp.dim - 1


def test_weights():
    sp = build_space([S(2)])
    assert sp.weights() == [2, 0, -2]
    v1 = build_space([V(1)])
    assert v1.weights() == [2, 0, 0, -2]  # x0, x1, xb0, xb1
    assert build_space([Dual(S(2))]).weights() == [-2, 0, 2]


def test_dual_is_involutive():
    sp = build_space([S(2), Dual(V(1))])
    assert sp.dual().dual() == sp


def test_beta_smallest_case():
    b = cg_beta(1, 1)
    assert [row[0] for row in b.to_rows()] == [0, 1, -1, 0]
    assert b.rank() == 1


def test_beta_entries_and_rank():
    b = cg_beta(2, 2)
    assert set(b.entries.values()) <= {Fraction(1), Fraction(-1)}
    assert b.rank() == 4


def test_mu_identity_at_k_zero():
    m = cg_mu(0, 3)
    assert m == ExactMatrix.identity(4)


def test_mu_rank():
    m = cg_mu(1, 1)
    assert set(m.entries.values()) == {Fraction(1)}
    assert m.rank() == 3


@pytest.mark.parametrize("k", range(1, 7))
@pytest.mark.parametrize("n", range(1, 7))
def test_clebsch_gordan_exactness(k, n):
    b = cg_beta(k, n)
    m = cg_mu(k, n)
    assert compose(m, b).is_zero
    assert b.rank() == b.cols                 # injective
    assert m.rank() == m.rows                 # surjective
    assert b.rank() + m.rank() == (k + 1) * (n + 1)


@pytest.mark.parametrize("k,n", [(1, 1), (2, 2), (3, 2), (2, 4)])
def test_twisted_sequence_exactness(k, n):
    b = cg_beta_v(k, n)
    m = cg_mu_v(k, n)
    assert compose(m, b).is_zero
    assert b.rank() == b.cols
    assert m.rank() == m.rows
    assert b.rank() + m.rank() == b.rows


def test_desym_first_basis_pair():
    sg = desym_sigma(1)
    col = {r: v for (r, c), v in sg.entries.items() if c == 0}  # x0 ∧ x1
    d = 4
    assert col == {0 * d + 1: Fraction(1), 1 * d + 0: Fraction(-1)}


@pytest.mark.parametrize("m", range(0, 5))
def test_desym_injective(m):
    sg = desym_sigma(m)
    assert sg.rank() == sg.cols == (2 * m + 2) * (2 * m + 1) // 2


@pytest.mark.parametrize("m", range(0, 4))
def test_desym_followed_by_projection_is_twice_identity(m):
    sg = desym_sigma(m)
    proj = on_dual_spaces(sg.transpose())   # v⊗w ↦ v∧w on the original spaces
    assert compose(proj, sg) == ExactMatrix.identity(sg.cols).scaled(2)


def test_sym_diagonal_doubles():
    it = sym_iota(0)
    pairs = rep.sym_pairs(0)
    col = {r: v for (r, c), v in it.entries.items() if c == pairs.index((0, 0))}
    assert col == {0: Fraction(2)}
    col01 = {r: v for (r, c), v in it.entries.items() if c == pairs.index((0, 1))}
    assert col01 == {1: Fraction(1), 2: Fraction(1)}


@pytest.mark.parametrize("m", range(0, 5))
def test_sym_injective(m):
    it = sym_iota(m)
    assert it.rank() == it.cols == (2 * m + 2) * (2 * m + 3) // 2


def test_character_basics():
    assert character(build_space([S(1)])).coeffs == {1: 1, -1: 1}
    c = character(build_space([S(1), S(1)]))
    assert c.coeffs == {2: 1, 0: 2, -2: 1}
    assert c.is_palindromic()
    assert c.dimension() == 4


@pytest.mark.parametrize("m", range(0, 4))
def test_square_split_of_characters(m):
    wedge = character(build_space([Wedge2V(m)]))
    sym = character(build_space([Sym2V(m)]))
    square = character(build_space([V(m), V(m)]))
    assert wedge + sym == square


def test_decompose_examples():
    assert decompose_character(character(build_space([S(1), S(1)]))) == {2: 1, 0: 1}
    assert decompose_character(character(build_space([S(0)]))) == {0: 1}
    assert decompose_character(character(build_space([V(2)]))) == {3: 1, 1: 1}


def test_decompose_rejects_non_characters():
    with pytest.raises(CharacterDecompositionError):
        Character({1: 1}).decompose()          # not palindromic
    with pytest.raises(CharacterDecompositionError):
        Character({0: -1}).decompose()


def test_decompose_preserves_dimension():
    for factors in ([S(3), S(2)], [V(2), S(1)], [Wedge2V(2)], [Sym2V(1), S(1)]):
        sp = build_space(factors)
        parts = decompose_character(character(sp))
        assert sum((m + 1) * mult for m, mult in parts.items()) == sp.dim


@pytest.mark.parametrize("make", [lambda: cg_beta(3, 2), lambda: cg_mu(3, 2),
                                  lambda: cg_beta_v(2, 2), lambda: cg_mu_v(2, 2),
                                  lambda: desym_sigma(2), lambda: sym_iota(2)])
def test_weight_homogeneity(make):
    assert is_weight_homogeneous(make())


@pytest.mark.parametrize("make", [lambda: cg_beta(3, 2), lambda: cg_mu(3, 2),
                                  lambda: desym_sigma(1), lambda: sym_iota(1)])
def test_blockwise_character_bookkeeping(make):
    m = make()
    dom = character(m.domain)
    ker = blockwise_kernel_character(m)
    img = blockwise_image_character(m)
    assert dom == ker + img
    assert blockwise_rank(m) == m.rank()


def test_swap_factors():
    sp = build_space([S(1), S(2), V(1)])
    p = swap_factors(sp, (2, 0, 1))
    assert p.codomain.factors == (V(1), S(1), S(2))
    i = sp.index((1, 2, 3))
    j = p.codomain.index((3, 1, 2))
    assert p.entry(j, i) == 1
    # permutation matrices are invertible
    assert compose(p.transpose(), on_dual_spaces(p)) == ExactMatrix.identity(sp.dual())


def test_swap_factors_rejects_non_permutations():
    sp = build_space([S(1), S(2)])
    with pytest.raises(ValueError):
        swap_factors(sp, (0, 0))


def test_labels_are_printable():
    sp = build_space([S(2), V(1), Wedge2V(0)])
    for i in range(sp.dim):
        assert sp.label(i)
