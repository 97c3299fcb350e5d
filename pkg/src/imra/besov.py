"""Besov sequence norms and smoothness probes built on wavelet pyramids.

Two norms are computed from a pyramid.  The coefficient norm is fully
discrete: the lp norm of the coarse samples plus the lq aggregate over
levels of 2**((sigma - n/p) j) times the lp norm of that level's detail
coefficients, pooled over orientations and positions.  The wavelet norm
replaces the inner quantity with a lattice quadrature of the Lp norm of
the synthesized level contribution, weighted by 2**(j sigma).  Both are
restrictions to finite data: the lq tail beyond the finest level is
truncated and reported.

The remaining operations estimate Hoelder exponents from coefficient
decay (the p = q = infinity norms match the Hoelder-Zygmund scale),
bound projection errors through the modulus of continuity, and probe
unconditionality: permutation-invariant partial sums and absolute
pointwise convergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParameterError
from .filters import FilterBank
from .scaling import cover_number, phi_at, psi_at, sup_norm_1d
from .transform import (
    GridFunction,
    WaveletPyramid,
    box_is_empty,
    box_shape,
    decompose,
    detail_interior_box,
    restrict_to_box,
    sample_grid,
    subdivide,
    synthesize_level,
)

INF = math.inf


@dataclass(frozen=True)
class BesovParams:
    """Smoothness sigma, integrability p, summability q, coarsest level j0.

    ``regularity`` optionally carries the Hoelder exponent of the scaling
    function; when given, the norm-equivalence regime n/p < sigma <
    regularity is checked and violations are flagged (the package never
    estimates the exponent itself).
    """

    sigma: float
    p: float
    q: float
    j0: int
    regularity: float | None = None

    def __post_init__(self):
        if not self.sigma > 0:
            raise ParameterError("sigma must be positive")
        for name, value in (("p", self.p), ("q", self.q)):
            if not (value >= 1):
                raise ParameterError(f"{name} must be in [1, inf], got {value}")

    def regime_flags(self, n: int) -> tuple[str, ...]:
        flags = []
        lower = 0.0 if math.isinf(self.p) else n / self.p
        if self.sigma <= lower:
            flags.append(f"sigma = {self.sigma} is not above n/p = {lower}")
        if self.regularity is not None and self.sigma >= self.regularity:
            flags.append(
                f"sigma = {self.sigma} is not below the scaling-function regularity "
                f"{self.regularity}"
            )
        return tuple(flags)


def _lp(values, p: float) -> float:
    flat = np.abs(np.asarray(values, dtype=np.float64)).ravel()
    if flat.size == 0:
        return 0.0
    if math.isinf(p):
        return float(flat.max())
    return float((flat ** p).sum() ** (1.0 / p))


def _lq(terms: list[float], q: float) -> float:
    if not terms:
        return 0.0
    arr = np.asarray(terms, dtype=np.float64)
    if math.isinf(q):
        return float(arr.max())
    return float((arr ** q).sum() ** (1.0 / q))


@dataclass(frozen=True)
class NormReport:
    """Decomposition of a Besov norm value into its level terms."""

    kind: str
    coarse_term: float
    level_terms: dict[int, float]
    total: float
    flags: tuple[str, ...]

    def recomputed_total(self, q: float) -> float:
        return self.coarse_term + _lq(list(self.level_terms.values()), q)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "coarse_term": self.coarse_term,
            "level_terms": {str(j): v for j, v in sorted(self.level_terms.items())},
            "total": self.total,
            "flags": list(self.flags),
        }


def coeff_norm(pyr: WaveletPyramid, params: BesovParams) -> NormReport:
    """Besov sequence norm read directly off the pyramid coefficients.

    The coarse term is the lp norm of the dual-scaling coefficients (the
    level-j0 samples); each level contributes 2**((sigma - n/p) j) times
    the lp norm of all its detail coefficients, aggregated in lq.
    """
    if params.j0 != pyr.j0:
        raise ParameterError(f"params.j0 = {params.j0} but the pyramid stores j0 = {pyr.j0}")
    n = pyr.dim
    coarse_term = _lp(pyr.coarse.values, params.p)
    np_over_p = 0.0 if math.isinf(params.p) else n / params.p
    level_terms = {}
    for j in pyr.detail_levels():
        pooled = np.concatenate([
            pyr.details[(j, s)].values.ravel()
            for (jj, s) in sorted(pyr.details) if jj == j
        ])
        level_terms[j] = 2.0 ** ((params.sigma - np_over_p) * j) * _lp(pooled, params.p)
    total = coarse_term + _lq(list(level_terms.values()), params.q)
    flags = params.regime_flags(n) + (
        f"lq tail truncated at level {pyr.finest_level - 1}",
    )
    return NormReport("coefficient", coarse_term, level_terms, total, flags)


def _quadrature(grid: GridFunction, p: float) -> float:
    if math.isinf(p):
        return _lp(grid.values, p)
    n = grid.dim
    weight = 2.0 ** (-n * grid.level / p)
    return weight * _lp(grid.values, p)


def wavelet_norm(pyr: WaveletPyramid, params: BesovParams, oversample: int = 0) -> NormReport:
    """Besov norm through Lp norms of the projection and level contributions.

    Lp norms are approximated by scaled lattice sums at each level's
    natural resolution (level j0 for the projection, level j+1 for the
    level-j contribution), refined ``oversample`` extra dyadic steps.
    """
    if params.j0 != pyr.j0:
        raise ParameterError(f"params.j0 = {params.j0} but the pyramid stores j0 = {pyr.j0}")
    if oversample < 0:
        raise ParameterError("oversample must be nonnegative")
    n = pyr.dim
    coarse = pyr.coarse if oversample == 0 else subdivide(pyr.coarse, pyr.bank, oversample)
    coarse_term = _quadrature(coarse, params.p)
    level_terms = {}
    for j in pyr.detail_levels():
        level_details = {s: pyr.details[(j, s)]
                         for (jj, s) in pyr.details if jj == j}
        zero_coarse = GridFunction(n, j, pyr.box_table[j],
                                   np.zeros(box_shape(pyr.box_table[j])))
        contribution = synthesize_level(zero_coarse, level_details, pyr.bank)
        if oversample:
            contribution = subdivide(contribution, pyr.bank, oversample)
        level_terms[j] = 2.0 ** (j * params.sigma) * _quadrature(contribution, params.p)
    total = coarse_term + _lq(list(level_terms.values()), params.q)
    flags = params.regime_flags(n) + (
        f"lq tail truncated at level {pyr.finest_level - 1}",
        f"Lp norms are lattice quadratures (oversample = {oversample})",
    )
    return NormReport("wavelet", coarse_term, level_terms, total, flags)


@dataclass(frozen=True)
class EquivalenceRow:
    finest_level: int
    coefficient_norm: float
    wavelet_norm: float
    ratio: float | None


@dataclass(frozen=True)
class EquivalenceReport:
    rows: tuple[EquivalenceRow, ...]
    spread: float | None
    flags: tuple[str, ...]


def equivalence_probe(f, bank: FilterBank, params: BesovParams,
                      resolutions: list[int], base_box,
                      oversample: int = 2) -> EquivalenceReport:
    """Ratio of the two norms across increasing sampling resolutions.

    ``base_box`` is the domain box on the integer lattice (level 0); at
    finest level J the function is sampled on the 2**J-times refined
    box.  Stabilizing ratios evidence the norm equivalence; the
    constants themselves are not claimed.  The wavelet-norm quadrature
    is oversampled: at the natural lattice and p = inf the cardinal
    interpolation property collapses the two norms into one another, so
    the comparison only carries information between the nodes.
    """
    if list(resolutions) != sorted(set(resolutions)):
        raise ParameterError("resolutions must be strictly increasing")
    rows = []
    flags: list[str] = []
    for J in resolutions:
        if J <= params.j0:
            raise ParameterError(f"resolution {J} does not exceed j0 = {params.j0}")
        box = tuple((lo << J, hi << J) for lo, hi in base_box)
        grid = sample_grid(f, J, box)
        pyr = decompose(grid, bank, params.j0)
        cn = coeff_norm(pyr, params).total
        wn = wavelet_norm(pyr, params, oversample=oversample).total
        ratio = wn / cn if cn > 0 else None
        if ratio is None:
            flags.append(f"ratio undefined at level {J}: coefficient norm is zero")
        rows.append(EquivalenceRow(J, cn, wn, ratio))
    ratios = [r.ratio for r in rows if r.ratio is not None]
    spread = max(ratios) / min(ratios) if ratios else None
    return EquivalenceReport(tuple(rows), spread, tuple(flags))


@dataclass(frozen=True)
class HolderEstimate:
    sigma: float
    points: tuple[tuple[int, float], ...]
    flag: str | None


def holder_estimate(samples: GridFunction, bank: FilterBank, j0: int,
                    zero_floor: float = 1e-13) -> HolderEstimate:
    """Smoothness exponent from the decay of sup-norm detail coefficients.

    Fits -log2 of the per-level interior coefficient maxima against the
    level by least squares; a slope of alpha matches membership in the
    Hoelder-Zygmund class of order alpha.  All-vanishing details flag
    infinite smoothness relative to this filter instead of a number.
    """
    pyr = decompose(samples, bank, j0)
    if pyr.levels < 3:
        raise ParameterError("at least 3 detail levels are needed")
    points = []
    for j in pyr.detail_levels():
        level_max = 0.0
        for (jj, s) in sorted(pyr.details):
            if jj != j:
                continue
            interior = detail_interior_box(pyr, j, s)
            if box_is_empty(interior):
                continue
            block = restrict_to_box(pyr.details[(j, s)], interior)
            if block.size:
                level_max = max(level_max, float(np.abs(block).max()))
        if level_max > zero_floor:
            points.append((j, -math.log2(level_max)))
    if len(points) < 2:
        return HolderEstimate(INF, tuple(points),
                              "details vanish: f lies in the filter's polynomial class")
    js = np.array([j for j, _ in points], dtype=np.float64)
    logs = np.array([v for _, v in points], dtype=np.float64)
    slope = float(np.polyfit(js, logs, 1)[0])
    return HolderEstimate(slope, tuple(points), None)


def modulus_of_continuity(grid: GridFunction, t: float) -> float:
    """Largest |g(x+h) - g(x)| over lattice shifts with Euclidean norm <= t.

    A lower bound of the true modulus, monotone in t; t must be at least
    the lattice spacing so that at least one shift exists.
    """
    spacing = 2.0 ** (-grid.level)
    if t < spacing:
        raise ParameterError(f"t = {t} is below the lattice spacing {spacing}")
    reach = int(math.floor(t / spacing))
    n = grid.dim
    best = 0.0
    limit = t / spacing
    for z in np.ndindex(*((2 * reach + 1,) * n)):
        shift = tuple(c - reach for c in z)
        if all(c == 0 for c in shift):
            continue
        if math.sqrt(sum(c * c for c in shift)) > limit + 1e-12:
            continue
        src = []
        dst = []
        ok = True
        for (lo, hi), c in zip(grid.box, shift):
            extent = hi - lo + 1
            if abs(c) >= extent:
                ok = False
                break
            src.append(slice(max(0, c), extent + min(0, c)))
            dst.append(slice(max(0, -c), extent + min(0, -c)))
        if not ok:
            continue
        diff = np.abs(grid.values[tuple(src)] - grid.values[tuple(dst)])
        if diff.size:
            best = max(best, float(diff.max()))
    return best


@dataclass(frozen=True)
class ProjectionErrorRow:
    level: int
    measured: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class ProjectionErrorReport:
    rows: tuple[ProjectionErrorRow, ...]
    c1: float
    c2: float
    monotone: bool

    @property
    def passed(self) -> bool:
        return self.monotone and all(r.passed for r in self.rows)


def projection_error_check(f, bank: FilterBank, n: int, levels,
                           window: tuple[float, float] = (-2.0, 2.0),
                           ref_level: int = 9) -> ProjectionErrorReport:
    """Measured sup |f - P_j f| against c1 * omega(f; 2**-j c2) per level.

    c1 is the cover number times the sup norm of the tensor scaling
    function, c2 the Euclidean support radius, both computed from the
    bank (the bound holds with these constants; a failure indicates an
    implementation bug, not a sharpness issue).  Currently implemented
    for n = 1, where the acceptance checks live.
    """
    if n != 1:
        raise ParameterError("projection error check is implemented for n = 1")
    levels = list(levels)
    if not levels or levels != sorted(levels):
        raise ParameterError("levels must be a nondecreasing nonempty list")
    radius = float(bank.support_radius)
    c1 = cover_number(bank, n) * float(sup_norm_1d(bank)) ** n
    c2 = radius * math.sqrt(n)
    lo, hi = window
    pad = radius * 2.0 ** (-min(levels)) + 1.0
    ref_box = ((int(math.floor((lo - pad) * 2 ** ref_level)),
                int(math.ceil((hi + pad) * 2 ** ref_level))),)
    f_ref = sample_grid(f, ref_level, ref_box)
    win_box = ((int(math.ceil(lo * 2 ** ref_level)),
                int(math.floor(hi * 2 ** ref_level))),)
    f_win = restrict_to_box(f_ref, win_box)
    rows = []
    for j in levels:
        if j >= ref_level:
            raise ParameterError(f"level {j} must stay below the reference level {ref_level}")
        coarse_box = ((int(math.floor((lo - pad) * 2 ** j)),
                       int(math.ceil((hi + pad) * 2 ** j))),)
        coarse = sample_grid(f, j, coarse_box)
        projected = subdivide(coarse, bank, ref_level - j)
        p_win = restrict_to_box(projected, win_box)
        measured = float(np.abs(p_win - f_win).max())
        omega = modulus_of_continuity(f_ref, c2 * 2.0 ** (-j))
        bound = c1 * omega
        rows.append(ProjectionErrorRow(j, measured, bound,
                                       measured <= bound * (1.0 + 1e-9)))
    monotone = all(rows[i + 1].measured <= rows[i].measured + 1e-12
                   for i in range(len(rows) - 1))
    return ProjectionErrorReport(tuple(rows), c1, c2, monotone)


def pyramid_point_terms(pyr: WaveletPyramid, x) -> list[float]:
    """Every nonzero expansion term of the pyramid at a dyadic point.

    Terms come out in a fixed deterministic order: coarse channel first,
    then detail channels sorted by (level, orientation); within a
    channel, lattice order.
    """
    n = pyr.dim
    if np.isscalar(x):
        x = (x,)
    if len(x) != n:
        raise ParameterError(f"point has {len(x)} coordinates for dimension {n}")
    terms: list[float] = []
    channels = [(pyr.j0, (0,) * n, pyr.coarse)] + \
               [(j, s, pyr.details[(j, s)]) for (j, s) in sorted(pyr.details)]
    n0, n1 = pyr.bank.mask_interval
    for j, s, grid in channels:
        scale = Fraction(1 << j) if j >= 0 else Fraction(1, 1 << -j)
        axis_weights = []
        for l in range(n):
            y = scale * Fraction(x[l])
            lo, hi = grid.box[l]
            if s[l] == 0:
                lam_lo, lam_hi = math.ceil(y - n1), math.floor(y - n0)
            else:
                lam_lo = math.ceil(y - Fraction(n1 + 1, 2))
                lam_hi = math.floor(y - Fraction(n0 + 1, 2))
            weights = []
            for lam in range(max(lo, lam_lo), min(hi, lam_hi) + 1):
                w = psi_at(pyr.bank, y - lam) if s[l] else phi_at(pyr.bank, y - lam)
                if w != 0:
                    weights.append((lam, float(w)))
            axis_weights.append(weights)
        if any(not w for w in axis_weights):
            continue
        for combo in _weight_product(axis_weights):
            lam = tuple(lam for lam, _ in combo)
            weight = math.prod(w for _, w in combo)
            coeff = grid.value_at(lam)
            if coeff != 0.0 and weight != 0.0:
                terms.append(coeff * weight)
    return terms


def _weight_product(axis_weights):
    if len(axis_weights) == 1:
        for item in axis_weights[0]:
            yield (item,)
        return
    for item in axis_weights[0]:
        for rest in _weight_product(axis_weights[1:]):
            yield (item,) + rest


@dataclass(frozen=True)
class UnconditionalityReport:
    point_rows: tuple[tuple[tuple[float, ...], float, float], ...]
    max_permutation_deviation: float
    trials: int

    @property
    def absolute_dominates(self) -> bool:
        return all(abs_sum >= abs(value) - 1e-12
                   for _, value, abs_sum in self.point_rows)


def unconditionality_probe(pyr: WaveletPyramid, trials: int, points,
                           seed: int = 0) -> UnconditionalityReport:
    """Absolute convergence and permutation stability of the expansion.

    At each probe point the absolute sum of all expansion terms is
    reported next to the pointwise value; for each trial a random
    permutation with a random sign pattern (applied, then removed) is
    summed and compared against the reference evaluation.
    """
    if trials < 1:
        raise ParameterError("at least one trial is required")
    rng = np.random.default_rng(seed)
    rows = []
    max_dev = 0.0
    for x in points:
        xt = (x,) if np.isscalar(x) else tuple(x)
        terms = np.asarray(pyramid_point_terms(pyr, xt), dtype=np.float64)
        value = float(terms.sum())
        abs_sum = float(np.abs(terms).sum())
        rows.append((tuple(float(c) for c in xt), value, abs_sum))
        for _ in range(trials):
            perm = rng.permutation(terms.size)
            signs = rng.choice((-1.0, 1.0), size=terms.size)
            # apply the sign, accumulate partial sums in permuted order,
            # remove the sign again term by term
            acc = 0.0
            for i in perm:
                acc += signs[i] * (signs[i] * terms[i])
            max_dev = max(max_dev, abs(acc - value))
    return UnconditionalityReport(tuple(rows), max_dev, trials)
