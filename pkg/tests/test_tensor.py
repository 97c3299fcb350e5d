"""Orientation bookkeeping and the n-dimensional duality identity."""

import random
from fractions import Fraction

import pytest

from imra.errors import ParameterError
from imra.filters import FilterBank, IndexedFilter, dd_bank
from imra.tensor import (
    TensorFilterView,
    axis_filter,
    filter_duality_bruteforce,
    filter_duality_check,
    orientations,
    tensor_coeff,
)


def test_orientations_order():
    assert orientations(1) == [(0,), (1,)]
    assert orientations(2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(orientations(3)) == 8


def test_orientations_dimension_range():
    with pytest.raises(ParameterError):
        orientations(0)
    with pytest.raises(ParameterError):
        orientations(5)


def test_tensor_coeff_examples():
    bank = dd_bank(1)
    assert tensor_coeff(TensorFilterView(bank, (0, 0)), (0, 0)) == 1
    assert tensor_coeff(TensorFilterView(bank, (1, 1)), (1, 1)) == 1
    # dual: hd(1) * gd(0) = 0 * (-1/2) = 0
    assert tensor_coeff(TensorFilterView(bank, (0, 1)), (1, 0), dual=True) == 0
    assert bank.gdual[0] == Fraction(-1, 2)


def test_tensor_coeff_is_axis_product():
    rng = random.Random(7)
    bank = dd_bank(2)
    for _ in range(1000):
        n = rng.choice((1, 2, 3))
        s = tuple(rng.randint(0, 1) for _ in range(n))
        t = tuple(rng.randint(-6, 6) for _ in range(n))
        dual = rng.random() < 0.5
        view = TensorFilterView(bank, s)
        expected = Fraction(1)
        for bit, idx in zip(s, t):
            expected *= axis_filter(bank, bit, dual)[idx]
        assert view.coeff(t, dual) == expected


def test_axis_ranges():
    bank = dd_bank(2)
    view = TensorFilterView(bank, (0, 1))
    assert view.axis_ranges() == ((-3, 3), (1, 1))
    assert view.axis_ranges(dual=True) == ((0, 0), (-2, 4))


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_duality_exact_zero(n, order):
    assert filter_duality_check(dd_bank(order), n, 4) == 0


def test_duality_factorized_matches_bruteforce():
    for order, n, window in ((1, 1, 3), (2, 1, 3), (1, 2, 2)):
        bank = dd_bank(order)
        assert filter_duality_check(bank, n, window) == \
            filter_duality_bruteforce(bank, n, window)


def test_duality_detects_corruption():
    """Fault injection: a wrong dual detail filter must break the identity
    identically through both evaluation paths."""
    good = dd_bank(1)
    bad_gdual = IndexedFilter.from_entries(
        {0: Fraction(-1, 2), 1: Fraction(1), 2: Fraction(1, 2)})
    bad = FilterBank(0, good.h, good.g, good.hdual, bad_gdual, good.support_radius)
    direct = filter_duality_bruteforce(bad, 1, 3)
    fast = filter_duality_check(bad, 1, 3)
    assert direct == fast > 0
    assert filter_duality_bruteforce(bad, 2, 2) == filter_duality_check(bad, 2, 2) > 0
