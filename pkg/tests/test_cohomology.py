import random

import pytest
from fractions import Fraction

from instanton_ext2 import instanton_maps as im
from instanton_ext2.cohomology import (
    TruncatedSeries, DimensionReport,
    ext2_dim_formula, ext1_dim_formula, euler_formula,
    chern_check, full_verification,
)


def test_ext2_formula_values():
    assert ext2_dim_formula(2, 3) == 3
    assert ext2_dim_formula(3, 4) == 40
    assert ext2_dim_formula(2, 4) == 12
    assert all(ext2_dim_formula(1, k) == 0 for k in range(2, 10))
    assert all(ext2_dim_formula(n, 2) == 0 for n in range(1, 6))


def test_ext1_formula_values():
    assert ext1_dim_formula(2, 3) == 57
    assert ext1_dim_formula(2, 4) == 77
    assert ext1_dim_formula(3, 2) == 69
    for k in range(2, 10):
        assert ext1_dim_formula(1, k) == 8 * k - 3


def test_euler_formula_values():
    assert euler_formula(2, 3) == 54
    for k in range(1, 10):
        assert euler_formula(1, k) == 8 * k - 3


def test_formula_triangle():
    for n in range(1, 11):
        for k in range(2, 21):
            assert (ext1_dim_formula(n, k) - ext2_dim_formula(n, k)
                    == euler_formula(n, k))


def test_formula_preconditions():
    with pytest.raises(ValueError):
        ext2_dim_formula(0, 3)
    with pytest.raises(ValueError):
        ext1_dim_formula(2, 1)


def test_series_inverse_roundtrip():
    s = TruncatedSeries.from_list([1, 1], 6)
    assert (s * s.inverse()) == TruncatedSeries.one(6)
    geom = TruncatedSeries.from_list([1, -1], 5).inverse()
    assert geom.coeffs == (1, 1, 1, 1, 1)


def test_series_power_and_truncation():
    s = TruncatedSeries.from_list([1, 2, 1], 4)
    assert (s ** 2).coeffs == (1, 4, 6, 4)
    assert (s ** 0) == TruncatedSeries.one(4)
    assert (s ** -1) * s == TruncatedSeries.one(4)


def test_series_requires_unit_for_inverse():
    with pytest.raises(ZeroDivisionError):
        TruncatedSeries.from_list([0, 1], 3).inverse()


def test_chern_smallest_case():
    # degree-truncated total class is 1 + h^2 at n = k = 1
    order = 4
    one_plus = TruncatedSeries.from_list([1, 1], order)
    one_minus = TruncatedSeries.from_list([1, -1], order)
    series = one_plus.inverse() * one_minus.inverse()
    assert series.coeffs == (1, 0, 1, 0)
    assert chern_check(1, 1)


@pytest.mark.parametrize("n", (1, 2, 3))
@pytest.mark.parametrize("k", range(1, 7))
def test_chern_grid(n, k):
    assert chern_check(n, k)


def test_monad_rank_bookkeeping():
    for n in (1, 2, 3):
        for k in range(1, 7):
            assert k * (2 * n + 1) - k - 2 * n * (k - 1) == 2 * n


def test_full_verification_main_cell():
    spec = im.MonadSpec(2, 3, im.random_alpha(2, 3, random.Random(5)))
    rpt = full_verification(spec, seed=7, samples=20, curve_samples=5)
    assert rpt.passed
    assert rpt.ext2_computed == rpt.ext2_formula == 3
    assert rpt.ext1_formula == 57
    assert rpt.euler_formula == 54
    assert rpt.phi_rank == 61
    assert rpt.phi_kernel_dim == 74
    assert rpt.epsilon_rank == 3
    assert rpt.character_match and rpt.cross_construction_match
    assert rpt.monad_dims == (3, 3, 8)
    assert rpt.samples == 25


def test_full_verification_p3_vanishing():
    spec = im.MonadSpec(1, 5, im.random_alpha(1, 5, random.Random(5)))
    rpt = full_verification(spec, seed=7, samples=10, curve_samples=5)
    assert rpt.passed and rpt.ext2_computed == 0


def test_full_verification_degenerate_epsilon_domain():
    spec = im.MonadSpec(3, 2, im.random_alpha(3, 2, random.Random(5)))
    rpt = full_verification(spec, seed=7, samples=10, curve_samples=5)
    assert rpt.passed
    assert rpt.ext2_computed == 0
    assert rpt.epsilon_rank == 0 and rpt.epsilon_injective


def test_full_verification_flags_degenerate_alpha():
    spec = im.MonadSpec(2, 3, tuple([1] + [0] * 8))
    rpt = full_verification(spec, seed=7, samples=10, curve_samples=5)
    assert not rpt.passed
    assert not rpt.fiber_a_full
    assert rpt.monad_complex_zero          # still a complex, just not a monad
    assert rpt.ext2_computed == 3          # kernel is independent of alpha


def test_dimension_report_rejects_inconsistent_formulas():
    kwargs = dict(
        n=2, k=3, ext2_formula=3, ext2_computed=3, ext1_formula=57,
        euler_formula=54, character_match=True, monad_dims=(3, 3, 8),
        cross_construction_match=True, phi_rank=61, phi_kernel_dim=74,
        epsilon_rank=3, epsilon_injective=True, composite_zero=True,
        reduction_ok=True, coefficient_recurrence_match=True,
        monad_complex_zero=True, fiber_a_full=True, fiber_b_full=True,
        samples=10, chern_ok=True, passed=True, elapsed_ms=1,
    )
    DimensionReport(**kwargs)
    with pytest.raises(ValueError):
        DimensionReport(**{**kwargs, "euler_formula": 53})
    with pytest.raises(ValueError):
        DimensionReport(**{**kwargs, "ext2_computed": 2})
    with pytest.raises(ValueError):
        DimensionReport(**{**kwargs, "monad_dims": (3, 3, 9)})
