"""Besov norms, smoothness estimation, and the convergence probes."""

import math
from fractions import Fraction

import numpy as np
import pytest

from imra.besov import (
    BesovParams,
    coeff_norm,
    equivalence_probe,
    holder_estimate,
    modulus_of_continuity,
    projection_error_check,
    pyramid_point_terms,
    unconditionality_probe,
    wavelet_norm,
)
from imra.errors import ParameterError
from imra.filters import dd_bank
from imra.scaling import refine_wavelet, tensor_sup_norm
from imra.transform import (
    GridFunction,
    WaveletPyramid,
    box_shape,
    decompose,
    reconstruct,
    sample_grid,
)

INF = math.inf


def zero_pyramid(bank, n=1, J=4, j0=1, extent=97):
    box = tuple((-(extent // 2), extent // 2) for _ in range(n))
    grid = GridFunction(n, J, box, np.zeros(box_shape(box)))
    return decompose(grid, bank, j0)


def with_single_detail(pyr, j, s, value=1.0):
    target = pyr.detail(j, s)
    arr = np.zeros(target.values.shape)
    arr[tuple(e // 2 for e in arr.shape)] = value
    details = dict(pyr.details)
    details[(j, tuple(s))] = GridFunction(target.dim, j, target.box, arr)
    return WaveletPyramid(pyr.bank, pyr.j0, pyr.levels, pyr.coarse, details,
                          dict(pyr.box_table))


def random_pyramid(bank, rng, n=1, J=3, j0=0, extent=33):
    box = tuple((-(extent // 2), extent // 2) for _ in range(n))
    grid = GridFunction(n, J, box, rng.standard_normal(box_shape(box)))
    return decompose(grid, bank, j0)


def test_params_validate():
    with pytest.raises(ParameterError):
        BesovParams(sigma=0.0, p=2, q=2, j0=0)
    with pytest.raises(ParameterError):
        BesovParams(sigma=1.0, p=0.5, q=2, j0=0)


def test_params_regime_flags():
    params = BesovParams(sigma=0.4, p=2.0, q=2.0, j0=0)
    assert params.regime_flags(1)  # sigma below n/p
    params = BesovParams(sigma=1.5, p=INF, q=INF, j0=0, regularity=1.0)
    assert any("regularity" in f for f in params.regime_flags(1))
    params = BesovParams(sigma=1.2, p=INF, q=INF, j0=0, regularity=2.0)
    assert not params.regime_flags(1)


def test_coeff_norm_zero_pyramid():
    bank = dd_bank(2)
    pyr = zero_pyramid(bank)
    params = BesovParams(sigma=1.5, p=2.0, q=1.0, j0=pyr.j0)
    assert coeff_norm(pyr, params).total == 0.0


def test_coeff_norm_single_detail_weight():
    bank = dd_bank(2)
    pyr = with_single_detail(zero_pyramid(bank, j0=1), 2, (1,))
    params = BesovParams(sigma=1.5, p=2.0, q=1.0, j0=1)
    report = coeff_norm(pyr, params)
    assert abs(report.total - 2.0 ** ((1.5 - 0.5) * 2)) < 1e-12
    assert report.coarse_term == 0.0


def test_coeff_norm_single_coarse():
    bank = dd_bank(1)
    pyr = zero_pyramid(bank, j0=0)
    arr = np.zeros(pyr.coarse.values.shape)
    arr[3] = 1.0
    coarse = GridFunction(1, 0, pyr.coarse.box, arr)
    pyr = WaveletPyramid(bank, 0, pyr.levels, coarse, pyr.details, dict(pyr.box_table))
    for sigma in (0.7, 1.5, 3.0):
        params = BesovParams(sigma=sigma, p=2.0, q=2.0, j0=0)
        assert coeff_norm(pyr, params).total == 1.0


def test_coeff_norm_sup_formula_p_inf():
    bank = dd_bank(1)
    rng = np.random.default_rng(2)
    pyr = random_pyramid(bank, rng)
    sigma = 1.1
    params = BesovParams(sigma=sigma, p=INF, q=INF, j0=pyr.j0)
    report = coeff_norm(pyr, params)
    coarse_sup = float(np.abs(pyr.coarse.values).max())
    level_sups = [2.0 ** (sigma * j) * max(
        float(np.abs(pyr.details[(j, s)].values).max())
        for (jj, s) in pyr.details if jj == j)
        for j in pyr.detail_levels()]
    assert report.total == coarse_sup + max(level_sups)


def test_coeff_norm_homogeneous_and_subadditive():
    bank = dd_bank(2)
    rng = np.random.default_rng(11)
    params = BesovParams(sigma=0.9, p=3.0, q=2.0, j0=0)
    for _ in range(20):
        a = random_pyramid(bank, rng)
        f = GridFunction(1, 3, a.box_table[3],
                         rng.standard_normal(box_shape(a.box_table[3])))
        b = decompose(f, bank, 0)
        c = rng.uniform(-3, 3)
        scaled = a.map_details(lambda arr: c * arr)
        scaled = WaveletPyramid(bank, 0, a.levels,
                                GridFunction(1, 0, a.coarse.box, c * a.coarse.values),
                                scaled.details, dict(a.box_table))
        na = coeff_norm(a, params).total
        assert abs(coeff_norm(scaled, params).total - abs(c) * na) < 1e-9 * (1 + na)
        summed = WaveletPyramid(
            bank, 0, a.levels,
            GridFunction(1, 0, a.coarse.box, a.coarse.values + b.coarse.values),
            {k: GridFunction(1, k[0], g.box, g.values + b.details[k].values)
             for k, g in a.details.items()},
            dict(a.box_table))
        assert coeff_norm(summed, params).total <= \
            na + coeff_norm(b, params).total + 1e-9


def test_coeff_norm_monotone_under_domination():
    bank = dd_bank(1)
    rng = np.random.default_rng(13)
    a = random_pyramid(bank, rng)
    params = BesovParams(sigma=1.3, p=2.0, q=3.0, j0=0)
    shrunk = a.map_details(lambda arr: 0.5 * np.abs(arr))
    grown = a.map_details(np.abs)
    assert coeff_norm(shrunk, params).total <= coeff_norm(grown, params).total


def test_wavelet_norm_zero():
    bank = dd_bank(2)
    pyr = zero_pyramid(bank)
    params = BesovParams(sigma=1.0, p=INF, q=INF, j0=pyr.j0)
    assert wavelet_norm(pyr, params).total == 0.0


@pytest.mark.parametrize("oversample", [0, 1, 3])
def test_wavelet_norm_single_detail_table_oracle(oversample):
    """One detail coefficient: the norm is 2**(j sigma) times the wavelet
    table sup at the quadrature resolution."""
    bank = dd_bank(2)
    j = 2
    pyr = with_single_detail(zero_pyramid(bank, j0=1), j, (1,))
    sigma = 1.5
    params = BesovParams(sigma=sigma, p=INF, q=INF, j0=1)
    got = wavelet_norm(pyr, params, oversample=oversample).total
    table_sup = float(refine_wavelet(bank, 1 + oversample).sup())
    assert got == pytest.approx(2.0 ** (j * sigma) * table_sup, rel=1e-12)


def test_wavelet_norm_constant_reduces_to_projection_term():
    """A whole-lattice constant has zero details; its pyramid realization is
    a constant coarse channel with all detail channels zero."""
    bank = dd_bank(1)
    pyr = zero_pyramid(bank, j0=1)
    coarse = GridFunction(1, 1, pyr.coarse.box,
                          np.full(pyr.coarse.values.shape, 2.0))
    pyr = WaveletPyramid(bank, 1, pyr.levels, coarse, pyr.details,
                         dict(pyr.box_table))
    params = BesovParams(sigma=1.0, p=INF, q=INF, j0=1)
    report = wavelet_norm(pyr, params)
    assert report.coarse_term == pytest.approx(2.0)
    assert all(v < 1e-13 for v in report.level_terms.values())
    assert report.total == pytest.approx(report.coarse_term)
    # finite data behave differently: a truncated constant picks up
    # boundary details under zero extension
    grid = sample_grid(lambda x: 2.0, 4, ((-64, 64),))
    truncated = decompose(grid, bank, 1)
    assert wavelet_norm(truncated, params).total > report.total


def test_equivalence_probe_amplitude_invariant():
    bank = dd_bank(2)
    params = BesovParams(sigma=1.2, p=INF, q=INF, j0=0)
    base = ((-3, 3),)
    f1 = lambda x: max(0.0, 1.0 - abs(x)) ** 2
    f2 = lambda x: 5.0 * f1(x)
    r1 = equivalence_probe(f1, bank, params, [3, 4], base)
    r2 = equivalence_probe(f2, bank, params, [3, 4], base)
    for a, b in zip(r1.rows, r2.rows):
        assert a.ratio == pytest.approx(b.ratio, rel=1e-12)


def test_equivalence_probe_zero_function_flagged():
    bank = dd_bank(1)
    params = BesovParams(sigma=1.2, p=INF, q=INF, j0=0)
    rep = equivalence_probe(lambda x: 0.0, bank, params, [2, 3], ((-2, 2),))
    assert rep.spread is None
    assert rep.flags


def test_holder_estimate_linear_flags_smooth():
    bank = dd_bank(2)
    grid = sample_grid(lambda x: 3.0 * x - 1.0, 8, ((-2 << 8, 2 << 8),))
    est = holder_estimate(grid, bank, 4)
    assert est.sigma == INF
    assert est.flag


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_holder_estimate_recovers_cusp_exponent(alpha):
    bank = dd_bank(2)
    c = 5.0 / 16.0
    grid = sample_grid(lambda x: abs(x - c) ** alpha, 9, ((-2 << 9, 2 << 9),))
    est = holder_estimate(grid, bank, 4)  # 5 detail levels
    assert est.sigma == pytest.approx(alpha, abs=0.1)


def test_holder_requires_three_levels():
    bank = dd_bank(1)
    grid = sample_grid(lambda x: x * x, 3, ((-16, 16),))
    with pytest.raises(ParameterError):
        holder_estimate(grid, bank, 2)


def test_modulus_constant_zero():
    grid = sample_grid(lambda x, y: 3.0, 2, ((-4, 4), (-4, 4)))
    assert modulus_of_continuity(grid, 0.5) == 0.0


def test_modulus_linear_quarter():
    grid = sample_grid(lambda x: x, 3, ((-16, 16),))
    assert modulus_of_continuity(grid, 0.25) == pytest.approx(0.25)


def test_modulus_monotone_in_t():
    rng = np.random.default_rng(17)
    grid = GridFunction(1, 3, ((-16, 16),), rng.standard_normal(33))
    values = [modulus_of_continuity(grid, t) for t in (0.125, 0.25, 0.5, 1.0)]
    assert values == sorted(values)


def test_modulus_requires_reachable_t():
    grid = sample_grid(lambda x: x, 3, ((-8, 8),))
    with pytest.raises(ParameterError):
        modulus_of_continuity(grid, 0.01)


def test_projection_error_constant_is_zero():
    rep = projection_error_check(lambda x: 4.0, dd_bank(1), 1, range(0, 4))
    assert all(r.measured == 0.0 for r in rep.rows)
    assert rep.passed


def test_projection_error_fixes_v0_element():
    """f = phi itself: P_0 f = f, so the error vanishes at dyadic points."""
    bank = dd_bank(2)
    from imra.scaling import phi_at

    # reference lattice points are exact dyadic binary64 values
    f = lambda x: float(phi_at(bank, Fraction(x)))
    rep = projection_error_check(f, bank, 1, [0], window=(-2.0, 2.0), ref_level=8)
    assert rep.rows[0].measured < 1e-14


def test_projection_error_bound_and_decay():
    f = lambda x: math.sin(x) * math.exp(-((x / 6.0) ** 2))
    rep = projection_error_check(f, dd_bank(1), 1, range(0, 6))
    assert rep.passed
    # roughly fourfold decay per level for smooth data under the hat bank
    for a, b in zip(rep.rows, rep.rows[1:]):
        assert b.measured < 0.5 * a.measured
    assert rep.rows[-1].measured < 1e-3


def test_point_terms_sum_matches_reconstruction():
    bank = dd_bank(2)
    rng = np.random.default_rng(23)
    pyr = random_pyramid(bank, rng, J=3, j0=0, extent=33)
    back = reconstruct(pyr)
    for lam in (-8, -1, 0, 5, 12):
        val = math.fsum(pyramid_point_terms(pyr, (Fraction(lam, 8),)))
        assert val == pytest.approx(back.value_at((lam,)), abs=1e-11)


def test_unconditionality_probe_permutation_stable():
    bank = dd_bank(1)
    rng = np.random.default_rng(29)
    pyr = random_pyramid(bank, rng, n=2, J=2, j0=0, extent=17)
    points = [(Fraction(a, 4), Fraction(b, 4))
              for a in (-6, 0, 7) for b in (-3, 2)]
    rep = unconditionality_probe(pyr, trials=10, points=points, seed=3)
    assert rep.max_permutation_deviation < 1e-9
    assert rep.absolute_dominates


def test_unconditionality_geometric_tail_cauchy():
    """Synthetic geometric coefficients: level partial sums are Cauchy with
    the geometric-series rate."""
    bank = dd_bank(2)
    sigma = 1.3
    pyr = zero_pyramid(bank, n=1, J=7, j0=1, extent=513)
    for j in pyr.detail_levels():
        pyr = with_single_detail(pyr, j, (1,), value=2.0 ** (-j * sigma))
    x = (Fraction(85, 256),)  # dyadic point near 1/3
    psi_sup = float(tensor_sup_norm(bank, (1,)))
    # partial sums over levels j0..k
    def partial(k):
        total = 0.0
        sub = {key: grid for key, grid in pyr.details.items() if key[0] <= k}
        p = WaveletPyramid(bank, pyr.j0, pyr.levels, pyr.coarse, sub,
                           dict(pyr.box_table))
        return math.fsum(pyramid_point_terms(p, x))

    full = partial(max(pyr.detail_levels()))
    for k in pyr.detail_levels()[:-1]:
        tail_bound = psi_sup * sum(2.0 ** (-j * sigma)
                                   for j in pyr.detail_levels() if j > k)
        assert abs(full - partial(k)) <= tail_bound * (1 + 1e-12)


def test_norm_report_json_round_structure():
    bank = dd_bank(1)
    rng = np.random.default_rng(31)
    pyr = random_pyramid(bank, rng)
    params = BesovParams(sigma=1.0, p=2.0, q=2.0, j0=0)
    report = coeff_norm(pyr, params)
    d = report.to_json_dict()
    assert set(d) == {"kind", "coarse_term", "level_terms", "total", "flags"}
    assert report.total == pytest.approx(report.recomputed_total(2.0), abs=1e-12)
