"""Evaluation of the scaling function, the wavelet, and tensor products.

The scaling function of an interpolating bank is only ever needed at
dyadic rationals, where the refinement relation

    phi(x) = sum_k h(k) phi(2x - k)

pins its values exactly: integer values are the unit impulse, and each
halving of the grid spacing fills the new points from the coarser ones
through the mask.  Tables are stored densely over the support interval;
single points are evaluated by a memoized recursion so that fine
resolutions stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ParameterError, ResolutionError, ResourceError
from .filters import FilterBank

MAX_POINT_RESOLUTION = 24
MAX_TABLE_RESOLUTION = 24
MAX_TABLE_ENTRIES = 1 << 24


@dataclass(frozen=True)
class DyadicFunctionTable:
    """Dense values of a function on its support at spacing 2**-resolution.

    Entry ``values[i]`` is the value at ``(lo + i) / 2**resolution``;
    everything outside ``[lo, hi]`` is identically zero.
    """

    resolution: int
    lo: int
    hi: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.hi - self.lo + 1:
            raise ParameterError("table length does not match its index range")

    def value_at(self, t: int) -> Fraction:
        """Value at t / 2**resolution (zero outside the stored range)."""
        if self.lo <= t <= self.hi:
            return self.values[t - self.lo]
        return Fraction(0)

    @property
    def floats(self) -> list[float]:
        return [float(v) for v in self.values]

    def sup(self) -> Fraction:
        return max(abs(v) for v in self.values)

    def points(self):
        """Yield (abscissa, value) pairs with exact dyadic abscissae."""
        scale = 1 << self.resolution
        for i, v in enumerate(self.values):
            yield Fraction(self.lo + i, scale), v


@lru_cache(maxsize=None)
def refine_scaling(bank: FilterBank, r: int) -> DyadicFunctionTable:
    """Table of phi(k / 2**r) built by r applications of the refinement relation.

    Level 0 is the unit impulse on the mask support interval; each level
    fills the finer grid through the mask.  Values are exact rationals.
    """
    if r < 0:
        raise ParameterError("resolution must be nonnegative")
    if r > MAX_TABLE_RESOLUTION:
        raise ResourceError(f"table resolution {r} exceeds the budget {MAX_TABLE_RESOLUTION}")
    n0, n1 = bank.mask_interval
    if (n1 - n0) << r > MAX_TABLE_ENTRIES:
        raise ResourceError("scaling table would exceed the entry budget")
    if r == 0:
        values = tuple(Fraction(1 if k == 0 else 0) for k in range(n0, n1 + 1))
        return DyadicFunctionTable(0, n0, n1, values)
    prev = refine_scaling(bank, r - 1)
    lo, hi = n0 << r, n1 << r
    half = 1 << (r - 1)
    taps = list(bank.h.items())
    values = []
    for t in range(lo, hi + 1):
        if t % 2 == 0:
            # phi(t/2^r) = phi((t/2)/2^(r-1)); the even-index copy is
            # forced by the refinement relation and checked in tests.
            values.append(prev.value_at(t // 2))
        else:
            acc = Fraction(0)
            for k, c in taps:
                acc += c * prev.value_at(t - k * half)
            values.append(acc)
    return DyadicFunctionTable(r, lo, hi, tuple(values))


def refine_wavelet(bank: FilterBank, r: int) -> DyadicFunctionTable:
    """Table of psi(k / 2**r), obtained by reindexing phi at resolution r-1.

    psi(x) = phi(2x - 1), so psi(k/2**r) = phi((k - 2**(r-1)) / 2**(r-1)).
    Resolution 0 is not representable: psi at the integers needs phi at
    half-integers.
    """
    if r < 1:
        raise ResolutionError("the wavelet table needs resolution >= 1")
    prev = refine_scaling(bank, r - 1)
    half = 1 << (r - 1)
    lo, hi = prev.lo + half, prev.hi + half
    return DyadicFunctionTable(r, lo, hi, prev.values)


def dyadic_resolution(x: Fraction) -> int:
    """Resolution of an exact dyadic rational (log2 of its denominator)."""
    d = x.denominator
    if d & (d - 1) != 0:
        raise ResolutionError(f"{x} is not a dyadic rational")
    return d.bit_length() - 1


def round_to_resolution(x, r: int) -> Fraction:
    """Nearest point of the 2**-r grid (ties toward +inf)."""
    scaled = Fraction(x) * (1 << r)
    t = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    return Fraction(t, 1 << r)


@lru_cache(maxsize=1 << 20)
def _phi_point(bank: FilterBank, num: int, r: int) -> Fraction:
    """phi(num / 2**r) by refinement recursion, num odd or r = 0."""
    n0, n1 = bank.mask_interval
    if r == 0:
        return Fraction(1 if num == 0 else 0)
    if not (n0 << r) < num < (n1 << r):
        return Fraction(0)
    half = 1 << (r - 1)
    acc = Fraction(0)
    for k, c in bank.h.items():
        acc += c * phi_at(bank, Fraction(num - k * half, half))
    return acc


def phi_at(bank: FilterBank, x, max_resolution: int = MAX_POINT_RESOLUTION) -> Fraction:
    """Exact value of the scaling function at a dyadic rational."""
    x = Fraction(x)
    r = dyadic_resolution(x)
    if r > max_resolution:
        raise ResolutionError(f"resolution {r} of {x} exceeds the budget {max_resolution}")
    return _phi_point(bank, x.numerator, r)


def psi_at(bank: FilterBank, x, max_resolution: int = MAX_POINT_RESOLUTION) -> Fraction:
    """Exact value of the mother wavelet psi(x) = phi(2x - 1)."""
    return phi_at(bank, 2 * Fraction(x) - 1, max_resolution)


def tensor_point_eval(bank: FilterBank, s: tuple[int, ...], j: int,
                      lam: tuple[int, ...], x, max_resolution: int = MAX_POINT_RESOLUTION) -> float:
    """Value of the tensor wavelet with orientation s at a dyadic point.

    Returns the product over axes of phi (orientation bit 0) or psi
    (bit 1) evaluated at 2**j x_l - lam_l; exactly zero outside the
    tensor support box.
    """
    if len(s) != len(lam) or len(s) != len(x):
        raise ParameterError("orientation, shift, and point dimensions differ")
    return float(tensor_point_eval_exact(bank, s, j, lam, x, max_resolution))


def tensor_point_eval_exact(bank: FilterBank, s, j, lam, x,
                            max_resolution: int = MAX_POINT_RESOLUTION) -> Fraction:
    scale = Fraction(1 << j) if j >= 0 else Fraction(1, 1 << -j)
    out = Fraction(1)
    for bit, shift, coord in zip(s, lam, x):
        y = scale * Fraction(coord) - shift
        value = psi_at(bank, y, max_resolution) if bit else phi_at(bank, y, max_resolution)
        if value == 0:
            return Fraction(0)
        out *= value
    return out


def sup_norm_1d(bank: FilterBank, resolution: int = 8) -> Fraction:
    """max |phi| over the dyadic grid at the given resolution."""
    return refine_scaling(bank, resolution).sup()


def tensor_sup_norm(bank: FilterBank, s: tuple[int, ...], resolution: int = 8) -> Fraction:
    """max of the tensor wavelet's absolute value over its dyadic table.

    The tensor factorizes, so the grid supremum is the product of the
    per-axis suprema.
    """
    phi_sup = sup_norm_1d(bank, resolution)
    psi_sup = refine_wavelet(bank, max(resolution, 1)).sup()
    out = Fraction(1)
    for bit in s:
        out *= psi_sup if bit else phi_sup
    return out


def cover_number(bank: FilterBank, n: int, resolution: int = 8) -> int:
    """Maximum number of lattice translates of the tensor scaling function
    that are simultaneously nonzero at a point.

    The 1-D maximum is sampled over one period at the given resolution
    and confirmed against the support-interval count (the number of
    integer translates whose open support interval can contain a common
    point); the n-dimensional value is its n-th power.
    """
    if not 1 <= n <= 4:
        raise ParameterError("dimension must be in 1..4")
    if resolution < 8:
        raise ParameterError("cover sampling needs resolution >= 8")
    table = refine_scaling(bank, resolution)
    n0, n1 = bank.mask_interval
    period = 1 << resolution
    best = 1  # at integer x exactly one translate survives (cardinality)
    for t in range(1, period):
        count = 0
        # x - lam must land inside (n0, n1) for a nonzero contribution
        for lam in range(-n1, -n0 + 1):
            if table.value_at(t - lam * period) != 0:
                count += 1
        best = max(best, count)
    # Interval confirmation: an open interval of length n1 - n0 with
    # non-integer endpoints contains exactly n1 - n0 integers, so the
    # sampled maximum can never exceed it.
    bound = n1 - n0
    if best > bound:
        raise ResourceError("sampled cover exceeded the support bound; table corrupt")
    return best ** n


def polynomial_reproduction_check(bank: FilterBank, degree: int,
                                  window: tuple[int, int], resolution: int = 6) -> float:
    """Largest residual of monomial reproduction on a dyadic window.

    For each monomial p of degree at most ``degree`` the residual
    |sum_lam p(lam) phi(x - lam) - p(x)| is evaluated exactly at every
    grid point of the window and the maximum is returned as binary64.
    Degree 0 comes out exactly zero for any interpolating bank
    (partition of unity); a Deslauriers-Dubuc bank of order L annihilates
    all degrees below 2L.
    """
    if degree < 0:
        raise ParameterError("degree must be nonnegative")
    lo, hi = window
    if lo > hi:
        raise ParameterError("window is empty")
    table = refine_scaling(bank, resolution)
    n0, n1 = bank.mask_interval
    scale = 1 << resolution
    worst = Fraction(0)
    for d in range(degree + 1):
        for t in range(lo * scale, hi * scale + 1):
            x = Fraction(t, scale)
            acc = Fraction(0)
            for lam in range(t // scale - n1, t // scale - n0 + 2):
                weight = table.value_at(t - lam * scale)
                if weight != 0:
                    acc += Fraction(lam) ** d * weight
            worst = max(worst, abs(acc - x ** d))
    return float(worst)
