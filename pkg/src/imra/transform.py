"""Multilevel interpolating wavelet transforms on finite dyadic grids.

A grid holds binary64 samples f(lam / 2**j) on an integer box and is
treated as identically zero outside it (the vanishing-at-infinity
boundary model).  One analysis step keeps the even samples as the coarse
channel (the dual low-pass is a unit impulse) and correlates with the
dual detail filter for each nonzero orientation; one synthesis step is
the adjoint: even sites copy h-predictions from the coarse channel and
odd-per-axis sites add the detail coefficients.  Both are applied
separably, axis 0 first.

Coefficient conventions: the detail coefficient stored at (j, s, mu)
multiplies the tensor wavelet with orientation s at scale 2**j and shift
mu, with no 2**(j/2) renormalization; the coarse coefficients are plain
point samples.  Under zero extension the coefficient boxes produced by
one analysis step capture every nonzero coefficient of the whole-lattice
transform, so analyze/synthesize round-trips are exact up to binary64
rounding; agreement with the transform of the *underlying* function is
only guaranteed on the interior (see interior_box).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    GridEvaluationError,
    LevelTooDeepError,
    ParameterError,
    ShapeError,
)
from .filters import FilterBank, IndexedFilter
from .scaling import phi_at
from .tensor import Orientation, detail_orientations

MAX_LEVEL = 20

Box = tuple[tuple[int, int], ...]


def box_shape(box: Box) -> tuple[int, ...]:
    return tuple(hi - lo + 1 for lo, hi in box)


def box_is_empty(box: Box) -> bool:
    return any(lo > hi for lo, hi in box)


def _ceil_half(v: int) -> int:
    return -((-v) // 2)


@dataclass(frozen=True)
class GridFunction:
    """Samples of a function on an integer box of the lattice 2**-level * Z^n."""

    dim: int
    level: int
    box: Box
    values: np.ndarray

    def __post_init__(self):
        if self.dim != len(self.box):
            raise ShapeError(f"box has {len(self.box)} axes for dimension {self.dim}")
        if box_is_empty(self.box):
            raise ShapeError(f"box {self.box} is empty")
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values is self.values:
            values = values.copy()  # do not freeze the caller's array
        if values.shape != box_shape(self.box):
            for axis, (extent, (lo, hi)) in enumerate(zip(values.shape, self.box)):
                if extent != hi - lo + 1:
                    raise ShapeError(
                        f"axis {axis}: array extent {extent} does not match box [{lo}, {hi}]"
                    )
            raise ShapeError("array rank does not match the box")
        if not np.all(np.isfinite(values)):
            raise ShapeError("grid values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def value_at(self, lam: tuple[int, ...]) -> float:
        """Sample at a lattice point, zero outside the box."""
        idx = []
        for (lo, hi), coord in zip(self.box, lam):
            if not lo <= coord <= hi:
                return 0.0
            idx.append(coord - lo)
        return float(self.values[tuple(idx)])

    def lattice_points(self):
        """Iterate (lam, value) over the box."""
        it = np.nditer(self.values, flags=["multi_index"])
        offsets = tuple(lo for lo, _ in self.box)
        for v in it:
            lam = tuple(o + i for o, i in zip(offsets, it.multi_index))
            yield lam, float(v)


def sample_grid(source, j: int, box: Box) -> GridFunction:
    """Point samples of a callable, or a downsample of a finer grid.

    For a callable the values are f(lam / 2**j); evaluation failures
    propagate with the offending lattice point.  For a finer grid the
    coarse value at lam is the fine value at lam * 2**(fine.level - j)
    (the dual low-pass is a unit impulse), zero-extended.
    """
    if not -MAX_LEVEL <= j <= MAX_LEVEL:
        raise ParameterError(f"level must satisfy |j| <= {MAX_LEVEL}")
    box = tuple((int(lo), int(hi)) for lo, hi in box)
    if box_is_empty(box):
        raise ParameterError(f"box {box} is empty")
    n = len(box)
    if isinstance(source, GridFunction):
        if source.dim != n:
            raise ShapeError(f"source grid has dimension {source.dim}, box has {n}")
        if j > source.level:
            raise ParameterError("can only downsample toward coarser levels")
        step = 1 << (source.level - j)
        values = np.zeros(box_shape(box))
        for idx in np.ndindex(*box_shape(box)):
            lam = tuple(lo + i for (lo, _), i in zip(box, idx))
            values[idx] = source.value_at(tuple(c * step for c in lam))
        return GridFunction(n, j, box, values)
    scale = float(2.0 ** -j)
    values = np.empty(box_shape(box))
    for idx in np.ndindex(*values.shape):
        lam = tuple(lo + i for (lo, _), i in zip(box, idx))
        point = tuple(c * scale for c in lam)
        try:
            values[idx] = source(*point) if n > 1 else source(point[0])
        except Exception as exc:
            raise GridEvaluationError(point, exc) from exc
    return GridFunction(n, j, box, values)


def _analysis_range(lo: int, hi: int, filt: IndexedFilter | None) -> tuple[int, int]:
    """Coefficient index range whose stencil touches [lo, hi]."""
    if filt is None:  # unit-impulse dual low-pass: even samples only
        return _ceil_half(lo), hi // 2
    return _ceil_half(lo - filt.max_index), (hi - filt.min_index) // 2


def _analyze_axis(values: np.ndarray, lo: int, hi: int, axis: int,
                  filt: IndexedFilter | None) -> tuple[np.ndarray, tuple[int, int]]:
    """Correlate-and-downsample along one axis under zero extension."""
    mlo, mhi = _analysis_range(lo, hi, filt)
    if mlo > mhi:
        raise LevelTooDeepError(f"axis {axis}: coefficient box is empty")
    shape = list(values.shape)
    shape[axis] = mhi - mlo + 1
    if filt is None:
        sel = [slice(None)] * values.ndim
        sel[axis] = slice(2 * mlo - lo, 2 * mhi - lo + 1, 2)
        return values[tuple(sel)], (mlo, mhi)
    out = np.zeros(shape)
    for t, c in filt.items():
        # mu with lo <= 2 mu + t <= hi contribute through this tap
        m0 = max(mlo, _ceil_half(lo - t))
        m1 = min(mhi, (hi - t) // 2)
        if m0 > m1:
            continue
        src = [slice(None)] * values.ndim
        src[axis] = slice(2 * m0 + t - lo, 2 * m1 + t - lo + 1, 2)
        dst = [slice(None)] * values.ndim
        dst[axis] = slice(m0 - mlo, m1 - mlo + 1)
        out[tuple(dst)] += float(c) * values[tuple(src)]
    return out, (mlo, mhi)


def analyze_level(fine: GridFunction, bank: FilterBank):
    """One analysis step: (coarse grid, detail grids keyed by orientation).

    The coarse value at lam is the fine sample at 2 lam; the detail
    coefficient for orientation s at mu is the dual-filter correlation
    sum_nu gd[s](nu - 2 mu) fine(nu), evaluated axis by axis with zero
    extension.
    """
    n = fine.dim
    j = fine.level - 1
    # channel tree: axis 0 first, branching into low (0) / high (1)
    channels = {(): (fine.values, list(fine.box))}
    for axis in range(n):
        grown = {}
        lo, hi = fine.box[axis]
        for bits, (arr, box) in channels.items():
            for bit, filt in ((0, None), (1, bank.gdual)):
                out, rng = _analyze_axis(arr, lo, hi, axis, filt)
                newbox = list(box)
                newbox[axis] = rng
                grown[bits + (bit,)] = (out, newbox)
        channels = grown
    coarse_arr, coarse_box = channels[(0,) * n]
    coarse = GridFunction(n, j, tuple(coarse_box), coarse_arr)
    details = {}
    for s in detail_orientations(n):
        arr, box = channels[s]
        details[s] = GridFunction(n, j, tuple(box), arr)
    return coarse, details


def _synthesize_axis(values: np.ndarray, clo: int, chi: int, axis: int,
                     filt: IndexedFilter, frange: tuple[int, int]) -> np.ndarray:
    """Upsample-and-filter along one axis onto the target fine range."""
    flo, fhi = frange
    shape = list(values.shape)
    shape[axis] = fhi - flo + 1
    out = np.zeros(shape)
    for t, c in filt.items():
        m0 = max(clo, _ceil_half(flo - t))
        m1 = min(chi, (fhi - t) // 2)
        if m0 > m1:
            continue
        dst = [slice(None)] * values.ndim
        dst[axis] = slice(2 * m0 + t - flo, 2 * m1 + t - flo + 1, 2)
        src = [slice(None)] * values.ndim
        src[axis] = slice(m0 - clo, m1 - clo + 1)
        out[tuple(dst)] += float(c) * values[tuple(src)]
    return out


def default_fine_box(coarse: GridFunction, details: dict[Orientation, GridFunction],
                     bank: FilterBank) -> Box:
    """Smallest box reached by every channel's synthesis stencil."""
    n = coarse.dim
    axes = []
    for axis in range(n):
        los, his = [], []
        for s, grid in [((0,) * n, coarse)] + list(details.items()):
            filt = bank.g if s[axis] else bank.h
            lo, hi = grid.box[axis]
            los.append(2 * lo + filt.min_index)
            his.append(2 * hi + filt.max_index)
        axes.append((min(los), max(his)))
    return tuple(axes)


def synthesize_level(coarse: GridFunction, details: dict[Orientation, GridFunction],
                     bank: FilterBank, fine_box: Box | None = None) -> GridFunction:
    """One synthesis step onto the fine grid.

    fine(nu) = sum_s sum_mu c[s](mu) g[s](nu - 2 mu), with the coarse
    channel as orientation zero.  Because g is a unit impulse at 1, even
    sites receive the h-prediction from the coarse channel and odd-per-
    axis sites additionally receive detail coefficients.
    """
    n = coarse.dim
    j = coarse.level
    for s, grid in details.items():
        if len(s) != n or grid.dim != n:
            raise ShapeError(f"detail channel {s} has mismatched dimension")
        if grid.level != j:
            raise ShapeError(f"detail channel {s} is at level {grid.level}, coarse at {j}")
    if fine_box is None:
        fine_box = default_fine_box(coarse, details, bank)
    fine_box = tuple((int(lo), int(hi)) for lo, hi in fine_box)
    if len(fine_box) != n:
        raise ShapeError(f"fine box has {len(fine_box)} axes for dimension {n}")
    total = np.zeros(box_shape(fine_box))
    for s, grid in [((0,) * n, coarse)] + sorted(details.items()):
        arr = grid.values
        box = list(grid.box)
        for axis in range(n):
            filt = bank.g if s[axis] else bank.h
            clo, chi = box[axis]
            arr = _synthesize_axis(arr, clo, chi, axis, filt, fine_box[axis])
            box[axis] = fine_box[axis]
        total += arr
    return GridFunction(n, j + 1, fine_box, total)


@dataclass(frozen=True)
class WaveletPyramid:
    """Coarse samples at j0 plus detail coefficients per level and orientation.

    ``details[(j, s)]`` multiplies the orientation-s tensor wavelet at
    scale 2**j; ``box_table[j]`` records the grid box the transform saw
    at level j, which reconstruction replays.
    """

    bank: FilterBank
    j0: int
    levels: int
    coarse: GridFunction
    details: dict[tuple[int, Orientation], GridFunction] = field(repr=False)
    box_table: dict[int, Box] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.coarse.dim

    @property
    def finest_level(self) -> int:
        return self.j0 + self.levels

    def detail(self, j: int, s: Orientation) -> GridFunction:
        return self.details[(j, tuple(s))]

    def detail_levels(self) -> list[int]:
        return list(range(self.j0, self.finest_level))

    def channels(self):
        """Iterate (level, orientation, grid) over detail channels, sorted."""
        for (j, s) in sorted(self.details):
            yield j, s, self.details[(j, s)]

    def coefficient_count(self) -> int:
        return self.coarse.values.size + sum(g.values.size for g in self.details.values())

    def map_details(self, func) -> "WaveletPyramid":
        """New pyramid with func applied to every detail array."""
        new = {}
        for key, grid in self.details.items():
            arr = func(np.array(grid.values))
            new[key] = GridFunction(grid.dim, grid.level, grid.box, arr)
        return WaveletPyramid(self.bank, self.j0, self.levels, self.coarse,
                              new, dict(self.box_table))


def decompose(fine: GridFunction, bank: FilterBank, j0: int) -> WaveletPyramid:
    """Full decomposition of a fine grid down to coarse level j0."""
    if j0 >= fine.level:
        raise ParameterError(f"j0 = {j0} must be below the grid level {fine.level}")
    details: dict[tuple[int, Orientation], GridFunction] = {}
    box_table = {fine.level: fine.box}
    cur = fine
    for j in range(fine.level - 1, j0 - 1, -1):
        cur, level_details = analyze_level(cur, bank)
        box_table[j] = cur.box
        for s, grid in level_details.items():
            details[(j, s)] = grid
    return WaveletPyramid(bank, j0, fine.level - j0, cur, details, box_table)


def reconstruct(pyr: WaveletPyramid) -> GridFunction:
    """Inverse of decompose: repeated synthesis up to the finest level."""
    cur = pyr.coarse
    for j in range(pyr.j0, pyr.finest_level):
        level_details = {s: pyr.details[(j, s)]
                         for (jj, s) in pyr.details if jj == j}
        cur = synthesize_level(cur, level_details, pyr.bank,
                               fine_box=pyr.box_table[j + 1])
    return cur


def subdivide(grid: GridFunction, bank: FilterBank, levels: int) -> GridFunction:
    """Interpolating refinement of a sample grid (synthesis with no details).

    Produces the exact samples of P_j f on the 2**levels-times finer
    lattice over the natural synthesis box.
    """
    cur = grid
    for _ in range(levels):
        cur = synthesize_level(cur, {}, bank)
    return cur


def project_eval(bank: FilterBank, source, j: int, x) -> float:
    """Value of the level-j projection at a dyadic point.

    (P_j f)(x) = sum_lam f(lam / 2**j) phi[n](2**j x - lam), a finite sum
    over the translates covering x.  ``source`` is a grid at level >= j
    (downsampled as needed) or a pyramid (reconstructed first).
    """
    if isinstance(source, WaveletPyramid):
        source = reconstruct(source)
    if not isinstance(source, GridFunction):
        raise ParameterError("source must be a GridFunction or WaveletPyramid")
    n = source.dim
    if np.isscalar(x):
        x = (x,)
    if len(x) != n:
        raise ShapeError(f"point has {len(x)} coordinates for dimension {n}")
    if source.level < j:
        raise ParameterError(
            f"projection level {j} is finer than the source grid level {source.level}"
        )
    if source.level > j:
        k = source.level - j
        down = tuple((-((-lo) >> k), hi >> k) for lo, hi in source.box)
        if box_is_empty(down):
            raise LevelTooDeepError(f"no level-{j} lattice points inside the grid box")
        source = sample_grid(source, j, down)
    n0, n1 = bank.mask_interval
    scale = Fraction(1 << j) if j >= 0 else Fraction(1, 1 << -j)
    axis_weights = []
    for l in range(n):
        y = scale * Fraction(x[l])
        lo, hi = source.box[l]
        lam_lo = max(lo, math.ceil(y - n1))
        lam_hi = min(hi, math.floor(y - n0))
        weights = []
        for lam in range(lam_lo, lam_hi + 1):
            w = phi_at(bank, y - lam)
            if w != 0:
                weights.append((lam, float(w)))
        axis_weights.append(weights)
    return _tensor_sum(source, axis_weights)


def _tensor_sum(grid: GridFunction, axis_weights) -> float:
    # reduce one axis at a time; the leading axis of arr always
    # corresponds to the next entry of axis_weights
    arr = grid.values
    for axis, weights in enumerate(axis_weights):
        if not weights:
            return 0.0
        lo = grid.box[axis][0]
        acc = None
        for lam, w in weights:
            piece = w * arr[lam - lo]
            acc = piece if acc is None else acc + piece
        arr = np.asarray(acc)
    return float(arr)


def combined_radius(bank: FilterBank) -> int:
    """Largest stencil reach among the low-pass mask and the dual detail filter."""
    return max(abs(bank.h.min_index), abs(bank.h.max_index),
               abs(bank.gdual.min_index), abs(bank.gdual.max_index))


def interior_box(box: Box, levels: int, bank: FilterBank) -> Box:
    """Sub-box that zero-extension artifacts cannot reach after `levels` steps.

    Each analysis/synthesis stage reaches at most the combined support
    radius of h and gd around a site, i.e. 2R fine cells per stage; a
    stage at depth i acts on a lattice 2**(i-1) times coarser, so its
    reach scaled to the finest lattice is 2R * 2**(i-1).  The interior
    may come out empty; callers check with box_is_empty.
    """
    if levels < 0:
        raise ParameterError("levels must be nonnegative")
    if levels == 0:
        return tuple(box)
    margin = 2 * combined_radius(bank) * ((1 << levels) - 1)
    return tuple((lo + margin, hi - margin) for lo, hi in box)


def detail_interior_box(pyr: WaveletPyramid, j: int, s: Orientation) -> Box:
    """Coefficient sub-box whose analysis stencils stayed inside the data.

    Because the coarse channel is a pure downsample, the detail stencil
    at level j reads true samples exactly when it lies inside the
    level-(j+1) box; coefficients there equal the whole-lattice transform
    of the underlying function.
    """
    parent = pyr.box_table[j + 1]
    out = []
    for axis, bit in enumerate(s):
        lo, hi = parent[axis]
        filt = pyr.bank.gdual if bit else pyr.bank.hdual
        out.append((_ceil_half(lo - filt.min_index), (hi - filt.max_index) // 2))
    return tuple(out)


def restrict_to_box(grid: GridFunction, box: Box) -> np.ndarray:
    """View of the grid values over a sub-box (clipped), for interior checks."""
    sel = []
    for (lo, hi), (blo, bhi) in zip(grid.box, box):
        s0, s1 = max(lo, blo), min(hi, bhi)
        if s0 > s1:
            return np.zeros((0,) * grid.dim)
        sel.append(slice(s0 - lo, s1 - lo + 1))
    return grid.values[tuple(sel)]


def threshold(pyr: WaveletPyramid, tau: float):
    """Zero every detail coefficient with |c| <= tau; the coarse channel stays.

    Returns (pyramid, kept count, dropped l1 mass).  The sup-norm
    reconstruction error is bounded by the dropped mass times the wavelet
    sup norms (triangle inequality), which threshold_error_bound computes.
    """
    if not (tau >= 0 or math.isinf(tau)):
        raise ParameterError("tau must be nonnegative")
    kept = 0
    dropped = 0.0
    new_details = {}
    for key, grid in pyr.details.items():
        arr = np.array(grid.values)
        mask = np.abs(arr) <= tau
        dropped += float(np.abs(arr[mask]).sum())
        arr[mask] = 0.0
        kept += int(np.count_nonzero(~mask))
        new_details[key] = GridFunction(grid.dim, grid.level, grid.box, arr)
    out = WaveletPyramid(pyr.bank, pyr.j0, pyr.levels, pyr.coarse,
                         new_details, dict(pyr.box_table))
    return out, kept, dropped


def threshold_error_bound(pyr: WaveletPyramid, tau: float) -> float:
    """Triangle-inequality bound on the sup reconstruction error of threshold."""
    from .scaling import tensor_sup_norm

    bound = 0.0
    for (j, s), grid in pyr.details.items():
        arr = np.abs(grid.values)
        mass = float(arr[arr <= tau].sum())
        bound += mass * float(tensor_sup_norm(pyr.bank, s))
    return bound
