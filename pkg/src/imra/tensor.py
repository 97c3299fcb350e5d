"""Orientations and separable n-dimensional filter coefficients.

A tensor filter never materializes as a dense n-D array: its coefficient
at a multi-index is the product of per-axis 1-D coefficients, and the
transform applies it one axis at a time.  The duality check below
exploits the same product structure: the n-dimensional biorthogonality
sum factorizes exactly into per-axis sums, which keeps the exhaustive
rational-arithmetic check cheap at any dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product

from .errors import ParameterError
from .filters import FilterBank, IndexedFilter, duality_gram

MAX_DIMENSION = 4

Orientation = tuple[int, ...]


def orientations(n: int) -> list[Orientation]:
    """All 2**n orientation tuples in lexicographic order, all-zero first."""
    if not 1 <= n <= MAX_DIMENSION:
        raise ParameterError(f"dimension must be in 1..{MAX_DIMENSION}, got {n}")
    return [bits for bits in product((0, 1), repeat=n)]


def detail_orientations(n: int) -> list[Orientation]:
    """The 2**n - 1 orientations that carry detail coefficients."""
    return orientations(n)[1:]


def axis_filter(bank: FilterBank, bit: int, dual: bool) -> IndexedFilter:
    """The 1-D filter selected by one orientation bit."""
    if dual:
        return bank.gdual if bit else bank.hdual
    return bank.g if bit else bank.h


@dataclass(frozen=True)
class TensorFilterView:
    """Lazy view of one n-dimensional filter g[s] or its dual."""

    bank: FilterBank
    s: Orientation

    def __post_init__(self):
        if not 1 <= len(self.s) <= MAX_DIMENSION or any(b not in (0, 1) for b in self.s):
            raise ParameterError(f"invalid orientation {self.s}")

    def axis_ranges(self, dual: bool = False) -> tuple[tuple[int, int], ...]:
        """Per-axis support intervals of the selected filter."""
        out = []
        for bit in self.s:
            f = axis_filter(self.bank, bit, dual)
            out.append((f.min_index, f.max_index))
        return tuple(out)

    def coeff(self, t: tuple[int, ...], dual: bool = False) -> Fraction:
        if len(t) != len(self.s):
            raise ParameterError("lattice point dimension does not match the orientation")
        out = Fraction(1)
        for bit, idx in zip(self.s, t):
            c = axis_filter(self.bank, bit, dual)[idx]
            if c == 0:
                return Fraction(0)
            out *= c
        return out


def tensor_coeff(view: TensorFilterView, t: tuple[int, ...], dual: bool = False) -> Fraction:
    """Coefficient of the tensor filter at a lattice point, exact."""
    return view.coeff(t, dual)


def filter_duality_check(bank: FilterBank, n: int, window: int) -> Fraction:
    """Exact max deviation of the n-dimensional filter-duality identity.

    Checks max over lam, mu in [-window, window]^n of

        | sum_s sum_z gd[s](lam - 2z) g[s](mu - 2z) - delta(lam, mu) |

    in rational arithmetic.  The inner double sum factorizes into the
    per-axis matrix B(a, b) = sum_{t, w} gd_t(a - 2w) g_t(b - 2w), so the
    deviation over the full window is the maximum of |prod_l B(lam_l,
    mu_l) - delta| taken over all products of window entries, which is
    computed from the axis matrix without enumerating pairs.
    """
    if not 1 <= n <= MAX_DIMENSION:
        raise ParameterError(f"dimension must be in 1..{MAX_DIMENSION}, got {n}")
    if window < 1:
        raise ParameterError("window must be positive")
    gram = duality_gram(bank, window)
    diag = [gram[(k, k)] for k in range(-window, window + 1)]
    off = [v for (a, b), v in gram.items() if a != b]

    # Pairs with lam == mu: deviation |prod diag - 1| over all index tuples.
    # Only the multiset of diagonal values matters, so deduplicate first.
    worst = Fraction(0)
    distinct = sorted(set(diag))
    for combo in combinations_with_replacement(distinct, n):
        p = Fraction(1)
        for v in combo:
            p *= v
        worst = max(worst, abs(p - 1))

    # Pairs with lam != mu: at least one axis picks an off-diagonal entry,
    # the rest pick anything; the largest |product| uses per-axis maxima.
    max_off = max((abs(v) for v in off), default=Fraction(0))
    max_diag = max(abs(v) for v in diag)
    if max_off > 0 and n >= 1:
        worst = max(worst, max_off * max(max_off, max_diag) ** (n - 1))
    return worst


def filter_duality_bruteforce(bank: FilterBank, n: int, window: int) -> Fraction:
    """Literal enumeration of the duality sum over all pairs (test oracle).

    Exponential in n; intended only for small windows to cross-check the
    factorized path in :func:`filter_duality_check`.
    """
    views = {s: TensorFilterView(bank, s) for s in orientations(n)}
    zmax = max(abs(bank.h.min_index), abs(bank.h.max_index),
               abs(bank.gdual.min_index), abs(bank.gdual.max_index)) + window
    worst = Fraction(0)
    grid = list(product(range(-window, window + 1), repeat=n))
    zs = list(product(range(-zmax, zmax + 1), repeat=n))
    for lam in grid:
        for mu in grid:
            acc = Fraction(0)
            for s, view in views.items():
                for z in zs:
                    a = view.coeff(tuple(l - 2 * w for l, w in zip(lam, z)), dual=True)
                    if a == 0:
                        continue
                    b = view.coeff(tuple(m - 2 * w for m, w in zip(mu, z)))
                    acc += a * b
            target = 1 if lam == mu else 0
            worst = max(worst, abs(acc - target))
    return worst
