"""The `verify` umbrella: every module invariant at desk scale.

Each suite returns (name, passed, detail) rows; the CLI prints one line
per row and fails if any row fails.  Randomized suites take an explicit
seed so runs are reproducible.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import besov, ordering, scaling, tensor, transform
from .filters import bank_from_text, bank_to_text, dd_bank, duality_defect_1d

Row = tuple[str, bool, str]


def _box_for(n: int, extent: int) -> transform.Box:
    half = extent // 2
    return tuple((-half, extent - half - 1) for _ in range(n))


def filter_suite(max_order: int = 8) -> list[Row]:
    rows = []
    for order in range(1, max_order + 1):
        bank = dd_bank(order)
        ok = (all(bank.h[2 * k] == (1 if k == 0 else 0)
                  for k in range(bank.h.min_index, bank.h.max_index + 1))
              and sum(bank.h.coeffs) == 2
              and all(bank.g[k] == (1 if k == 1 else 0) for k in range(-2, 4))
              and all(bank.gdual[k] == (1 if (k - 1) % 2 == 0 else -1) * bank.h[1 - k]
                      for k in range(bank.gdual.min_index, bank.gdual.max_index + 1))
              and len(bank.gdual.support) == len(bank.h.support))
        rows.append((f"filters/dd{order} bank invariants", ok, "exact in rationals"))
        roundtrip = bank_from_text(bank_to_text(bank)) == bank
        rows.append((f"filters/dd{order} text round-trip", roundtrip, "bit-exact"))
    return rows


def duality_suite(dims=(1, 2, 3), orders=(1, 2, 3, 4)) -> list[Row]:
    rows = []
    for order in orders:
        bank = dd_bank(order)
        window = 4 * order
        defect_1d = duality_defect_1d(bank, window)
        rows.append((f"duality/1-D order {order} window {window}",
                     defect_1d == 0, f"defect {defect_1d}"))
        for n in dims:
            defect = tensor.filter_duality_check(bank, n, window)
            rows.append((f"duality/{n}-D order {order} window {window}",
                         defect == 0, f"defect {defect}"))
    return rows


def biorthogonality_suite(order: int = 2, window: int = 8) -> list[Row]:
    """The four dual pairings at one level, via exact filter evaluation."""
    bank = dd_bank(order)
    phi = scaling.refine_scaling(bank, 1)
    ok_pp = all(scaling.phi_at(bank, k - l) == (1 if k == l else 0)
                for k in range(-window, window + 1) for l in range(-window, window + 1))
    ok_pw = all(scaling.psi_at(bank, Fraction(k - l)) == 0
                for k in range(-window, window + 1) for l in range(-window, window + 1))
    ok_wp = True
    ok_ww = True
    for k in range(-window, window + 1):
        for l in range(-window, window + 1):
            pairing_wp = sum(c * phi.value_at(2 * (k - l) + nu)
                             for nu, c in bank.gdual.items())
            if pairing_wp != 0:
                ok_wp = False
            pairing_ww = sum(c * scaling.phi_at(bank, Fraction(2 * (k - l) + nu - 1))
                             for nu, c in bank.gdual.items())
            if pairing_ww != (1 if k == l else 0):
                ok_ww = False
    return [
        (f"biorthogonality/<phid,phi> order {order}", ok_pp, "delta(k,l) exactly"),
        (f"biorthogonality/<phid,psi> order {order}", ok_pw, "0 exactly"),
        (f"biorthogonality/<psid,phi> order {order}", ok_wp, "0 exactly"),
        (f"biorthogonality/<psid,psi> order {order}", ok_ww, "delta(k,l) exactly"),
    ]


def scaling_suite(orders=(1, 2, 3, 4), resolution: int = 5) -> list[Row]:
    rows = []
    for order in orders:
        bank = dd_bank(order)
        table = scaling.refine_scaling(bank, resolution)
        prev = scaling.refine_scaling(bank, resolution - 1)
        interp = all(table.value_at(k << resolution) == (1 if k == 0 else 0)
                     for k in range(bank.h.min_index - 1, bank.h.max_index + 2))
        rows.append((f"scaling/dd{order} cardinal interpolation", interp, "phi(k) = delta"))
        refine_ok = True
        half = 1 << (resolution - 1)
        for t in range(table.lo, table.hi + 1):
            acc = sum(c * prev.value_at(t - k * half) for k, c in bank.h.items())
            if acc != table.value_at(t):
                refine_ok = False
                break
        rows.append((f"scaling/dd{order} refinement identity at resolution {resolution}",
                     refine_ok, "exact in rationals"))
        partition = scaling.polynomial_reproduction_check(bank, 0, (-2, 2), resolution)
        rows.append((f"scaling/dd{order} partition of unity", partition == 0.0,
                     f"residual {partition}"))
    return rows


def transform_suite(dims=(1, 2), order: int = 2, seed: int = 7) -> list[Row]:
    rows = []
    rng = np.random.default_rng(seed)
    bank = dd_bank(order)
    for n in dims:
        extent = {1: 65, 2: 33, 3: 17}.get(n, 17)
        box = _box_for(n, extent)
        values = rng.standard_normal(transform.box_shape(box))
        grid = transform.GridFunction(n, 3, box, values)
        pyr = transform.decompose(grid, bank, 0)
        back = transform.reconstruct(pyr)
        err = float(np.abs(back.values - grid.values).max())
        rows.append((f"transform/{n}-D round-trip order {order}",
                     err < 1e-10, f"max abs err {err:.2e}"))
        g2 = transform.GridFunction(n, 3, box, rng.standard_normal(grid.values.shape))
        lhs = transform.decompose(
            transform.GridFunction(n, 3, box, 2.0 * grid.values - 3.0 * g2.values),
            bank, 0)
        rhs_c = 2.0 * pyr.coarse.values - 3.0 * transform.decompose(g2, bank, 0).coarse.values
        lin_err = float(np.abs(lhs.coarse.values - rhs_c).max())
        rows.append((f"transform/{n}-D linearity", lin_err < 1e-12,
                     f"coarse channel deviation {lin_err:.2e}"))
    return rows


def besov_suite(order: int = 2) -> list[Row]:
    rows = []
    bank = dd_bank(order)
    n, J, j0 = 1, 4, 1
    box = _box_for(n, 97)
    grid = transform.GridFunction(n, J, box, np.zeros(transform.box_shape(box)))
    pyr = transform.decompose(grid, bank, j0)
    s = (1,)
    target = pyr.detail(2, s)
    arr = np.zeros(target.values.shape)
    arr[arr.shape[0] // 2] = 1.0
    details = dict(pyr.details)
    details[(2, s)] = transform.GridFunction(n, 2, target.box, arr)
    pyr1 = transform.WaveletPyramid(bank, j0, pyr.levels, pyr.coarse, details,
                                    dict(pyr.box_table))
    params = besov.BesovParams(sigma=1.5, p=2.0, q=1.0, j0=j0)
    got = besov.coeff_norm(pyr1, params).total
    want = 2.0 ** ((1.5 - 0.5) * 2)
    rows.append(("besov/single-coefficient weight", abs(got - want) < 1e-12,
                 f"got {got}, expected {want}"))
    zero = besov.coeff_norm(pyr, params).total
    rows.append(("besov/zero pyramid", zero == 0.0, f"norm {zero}"))
    return rows


def ordering_suite(cases=((1, 40), (2, 12), (3, 4), (4, 2))) -> list[Row]:
    rows = []
    for n, shells in cases:
        report = ordering.verify_ordering(n, shells)
        detail = "; ".join(f"{name}: {'ok' if ok else msg}"
                           for name, ok, msg in report.checks)
        rows.append((f"ordering/n={n} shells={shells}", report.passed, detail))
    return rows


def io_suite(seed: int = 11, tmpdir=None) -> list[Row]:
    import hashlib
    import tempfile
    from pathlib import Path

    from . import gridio

    rows = []
    rng = np.random.default_rng(seed)
    with tempfile.TemporaryDirectory(dir=tmpdir) as work:
        work = Path(work)
        grid = transform.GridFunction(2, 1, ((0, 16), (-4, 4)),
                                      rng.standard_normal((17, 9)))
        p1, p2 = work / "a.imra", work / "b.imra"
        gridio.write_grid(p1, grid)
        gridio.write_grid(p2, gridio.read_grid(p1))
        same = hashlib.sha256(p1.read_bytes()).hexdigest() == \
            hashlib.sha256(p2.read_bytes()).hexdigest()
        rows.append(("io/grid write-read byte identity", same, "sha256 match"))
        pyr = transform.decompose(grid, dd_bank(1), -1)
        d1, d2 = work / "pyr1", work / "pyr2"
        gridio.write_pyramid(d1, pyr)
        gridio.write_pyramid(d2, gridio.read_pyramid(d1))
        files1 = sorted(f.name for f in d1.iterdir())
        files2 = sorted(f.name for f in d2.iterdir())
        same_pyr = files1 == files2 and all(
            (d1 / name).read_bytes() == (d2 / name).read_bytes() for name in files1)
        rows.append(("io/pyramid write-read byte identity", same_pyr,
                     f"{len(files1)} files compared"))
    return rows


def run_all(dim: int | None = None, order: int | None = None,
            seed: int = 0) -> list[Row]:
    dims = (dim,) if dim else (1, 2)
    orders = (order,) if order else (1, 2, 3, 4)
    rows = []
    rows += filter_suite(max_order=max(orders))
    rows += duality_suite(dims=dims, orders=orders)
    rows += biorthogonality_suite(order=orders[-1])
    rows += scaling_suite(orders=orders)
    rows += transform_suite(dims=dims, order=min(2, max(orders)), seed=seed + 7)
    rows += besov_suite(order=min(2, max(orders)))
    rows += ordering_suite()
    rows += io_suite(seed=seed + 11)
    return rows
