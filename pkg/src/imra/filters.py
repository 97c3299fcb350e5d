"""Interpolating wavelet filter banks.

All four 1-D filters of an interpolating multiresolution analysis derive
from a single refinement mask h with h(2k) = delta(k) and sum 2: the
detail filter g is a unit impulse at index 1, the dual low-pass is a unit
impulse at index 0, and the dual detail filter is the sign-alternating
reflection gd(k) = (-1)^(k-1) h(1-k).  Coefficients are kept as exact
dyadic rationals so that every filter identity can be checked without
rounding; binary64 views are provided at the edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidFilterError, OrderUnsupportedError

MAX_DD_ORDER = 16


def _is_dyadic(value: Fraction) -> bool:
    d = value.denominator
    return d & (d - 1) == 0


@dataclass(frozen=True)
class IndexedFilter:
    """Finitely supported sequence of dyadic rationals.

    ``coeffs[i]`` is the coefficient at index ``offset + i``.  The first
    and last stored coefficients must be nonzero and every denominator a
    power of two.
    """

    offset: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise InvalidFilterError("filter has empty support")
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if coeffs[0] == 0 or coeffs[-1] == 0:
            raise InvalidFilterError("stored support must start and end on nonzero coefficients")
        for i, c in enumerate(coeffs):
            if not _is_dyadic(c):
                raise InvalidFilterError(
                    f"coefficient at index {self.offset + i} is not a dyadic rational: {c}"
                )

    @classmethod
    def from_entries(cls, entries: dict[int, Fraction]) -> "IndexedFilter":
        """Build from an index -> value map, trimming zero ends."""
        nonzero = {k: Fraction(v) for k, v in entries.items() if v != 0}
        if not nonzero:
            raise InvalidFilterError("filter has empty support")
        lo, hi = min(nonzero), max(nonzero)
        return cls(lo, tuple(nonzero.get(k, Fraction(0)) for k in range(lo, hi + 1)))

    @property
    def min_index(self) -> int:
        return self.offset

    @property
    def max_index(self) -> int:
        return self.offset + len(self.coeffs) - 1

    @property
    def support(self) -> tuple[int, ...]:
        """Indices carrying a nonzero coefficient."""
        return tuple(self.offset + i for i, c in enumerate(self.coeffs) if c != 0)

    @property
    def floats(self) -> tuple[float, ...]:
        """binary64 view of the stored coefficients."""
        return tuple(float(c) for c in self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        i = k - self.offset
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def items(self):
        for i, c in enumerate(self.coeffs):
            if c != 0:
                yield self.offset + i, c


@dataclass(frozen=True)
class FilterBank:
    """The four 1-D filters of one interpolating MRA.

    ``order`` is the Deslauriers-Dubuc order, or 0 for a user-supplied
    mask.  ``support_radius`` is the radius of the support interval of
    the scaling function (2L-1 for order L).
    """

    order: int
    h: IndexedFilter
    g: IndexedFilter
    hdual: IndexedFilter
    gdual: IndexedFilter
    support_radius: Fraction

    @property
    def bank_id(self) -> str:
        return f"dd{self.order}" if self.order > 0 else "custom"

    @property
    def mask_interval(self) -> tuple[int, int]:
        """Support interval [N0, N1] of the refinement mask (= supp phi)."""
        return self.h.min_index, self.h.max_index


def dd_scaling_filter(order: int) -> IndexedFilter:
    """Refinement mask of the Deslauriers-Dubuc family of the given order.

    Even entries are the unit impulse; the entry at odd index 2j-1 is the
    weight of node 2j-1 in the Lagrange interpolant through the 2L odd
    nodes +-1, +-3, ..., +-(2L-1), evaluated at 0.  All weights come out
    as exact dyadic rationals.
    """
    if not 1 <= order <= MAX_DD_ORDER:
        raise OrderUnsupportedError(
            f"Deslauriers-Dubuc order must be in 1..{MAX_DD_ORDER}, got {order}"
        )
    nodes = [k for k in range(-(2 * order - 1), 2 * order, 2)]
    entries: dict[int, Fraction] = {0: Fraction(1)}
    for node in nodes:
        weight = Fraction(1)
        for other in nodes:
            if other != node:
                weight *= Fraction(0 - other, node - other)
        entries[node] = weight
    return IndexedFilter.from_entries(entries)


def _check_interpolating(h: IndexedFilter):
    """Raise unless h(2k) = delta(k) and sum(h) = 2."""
    for k in range(h.min_index, h.max_index + 1):
        if k % 2 == 0 and h[k] != (1 if k == 0 else 0):
            raise InvalidFilterError(
                f"mask is not interpolating: even-index coefficient at k={k} is {h[k]}"
            )
    total = sum(h.coeffs)
    if total != 2:
        raise InvalidFilterError(f"mask coefficients must sum to 2, got {total}")


def derive_bank(h: IndexedFilter) -> FilterBank:
    """Derive the full filter bank from an interpolating refinement mask."""
    _check_interpolating(h)
    g = IndexedFilter(1, (Fraction(1),))
    hdual = IndexedFilter(0, (Fraction(1),))
    gdual = IndexedFilter.from_entries(
        {k: (1 if (k - 1) % 2 == 0 else -1) * h[1 - k]
         for k in range(1 - h.max_index, 1 - h.min_index + 1)}
    )
    radius = Fraction(max(abs(h.min_index), abs(h.max_index)))
    order = 0
    if h.min_index == -h.max_index and h.max_index % 2 == 1:
        candidate = (h.max_index + 1) // 2
        if candidate <= MAX_DD_ORDER and h == dd_scaling_filter(candidate):
            order = candidate
    return FilterBank(order, h, g, hdual, gdual, radius)


def dd_bank(order: int) -> FilterBank:
    """Convenience constructor: full Deslauriers-Dubuc bank of the given order."""
    return derive_bank(dd_scaling_filter(order))


@dataclass(frozen=True)
class ValidationReport:
    """Pass/fail record for the user-supplied mask checks."""

    checks: tuple[tuple[str, bool, str], ...]
    warnings: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)


def custom_bank_validate(h: IndexedFilter) -> ValidationReport:
    """Check a user-supplied mask against the interpolating-MRA conditions.

    Symmetry is reported as a warning only; the remaining checks gate
    ``derive_bank``.
    """
    checks = []
    bad_even = [k for k in range(h.min_index, h.max_index + 1)
                if k % 2 == 0 and h[k] != (1 if k == 0 else 0)]
    checks.append((
        "even-index cardinality",
        not bad_even,
        "h(2k) = delta(k)" if not bad_even else f"fails at k={bad_even[0]}",
    ))
    total = sum(h.coeffs)
    checks.append(("coefficient sum", total == 2, f"sum = {total}"))
    finite = bool(h.coeffs) and h.coeffs[0] != 0 and h.coeffs[-1] != 0
    checks.append(("finite support", finite, f"support [{h.min_index}, {h.max_index}]"))
    warnings = []
    if any(h[k] != h[-k] for k in range(1, h.max_index + 1)):
        warnings.append("mask is not symmetric about 0")
    return ValidationReport(tuple(checks), tuple(warnings))


def duality_defect_1d(bank: FilterBank, window: int) -> Fraction:
    """Exact max deviation of the 1-D filter-duality identity on the window.

    Computes max over |lam|, |mu| <= window of
    |sum_{t in {0,1}} sum_z gd_t(lam - 2z) g_t(mu - 2z) - delta(lam, mu)|
    in rational arithmetic.  Zero for every interpolating bank.
    """
    defect = Fraction(0)
    gram = duality_gram(bank, window)
    for (lam, mu), value in gram.items():
        target = 1 if lam == mu else 0
        defect = max(defect, abs(value - target))
    return defect


def duality_gram(bank: FilterBank, window: int) -> dict[tuple[int, int], Fraction]:
    """The matrix sum_{t,z} gd_t(lam - 2z) g_t(mu - 2z) on [-window, window]^2."""
    primal = (bank.h, bank.g)
    dual = (bank.hdual, bank.gdual)
    out: dict[tuple[int, int], Fraction] = {}
    for lam in range(-window, window + 1):
        for mu in range(-window, window + 1):
            acc = Fraction(0)
            for t in (0, 1):
                gd, g = dual[t], primal[t]
                # z constrained by both supports
                zlo = (lam - gd.max_index + 1) // 2
                zhi = (lam - gd.min_index) // 2
                for z in range(zlo, zhi + 1):
                    acc += gd[lam - 2 * z] * g[mu - 2 * z]
            out[(lam, mu)] = acc
    return out


def bank_to_text(bank: FilterBank) -> str:
    """Serialize a bank to the line format ``name index:num/den ...``."""
    lines = []
    for name, filt in (("h", bank.h), ("g", bank.g), ("hd", bank.hdual), ("gd", bank.gdual)):
        parts = [name]
        for k, c in filt.items():
            text = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            parts.append(f"{k}:{text}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def bank_from_text(text: str) -> FilterBank:
    """Parse the line format written by :func:`bank_to_text`.

    The bank is re-derived from the h line and required to match the
    remaining lines exactly; round-trips are bit-exact on the rationals.
    """
    filters: dict[str, IndexedFilter] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, *entries = line.split()
        parsed = {}
        for entry in entries:
            idx, _, val = entry.partition(":")
            parsed[int(idx)] = Fraction(val)
        filters[name] = IndexedFilter.from_entries(parsed)
    missing = {"h", "g", "hd", "gd"} - set(filters)
    if missing:
        raise InvalidFilterError(f"bank text is missing filters: {sorted(missing)}")
    bank = derive_bank(filters["h"])
    for name, derived in (("g", bank.g), ("hd", bank.hdual), ("gd", bank.gdual)):
        if filters[name] != derived:
            raise InvalidFilterError(f"filter {name!r} does not match the bank derived from h")
    return bank


def bank_from_id(bank_id: str) -> FilterBank:
    """Resolve identifiers like ``dd2`` to a filter bank."""
    if bank_id.startswith("dd"):
        try:
            order = int(bank_id[2:])
        except ValueError:
            raise OrderUnsupportedError(f"malformed bank id {bank_id!r}") from None
        return dd_bank(order)
    raise OrderUnsupportedError(f"unknown bank id {bank_id!r} (expected ddL)")
