"""Figure rendering for the CLI report paths.

Figures are written straight to files through the Agg backend; nothing
here opens a window.  Each renderer takes the same data the CLI already
printed in delimited form.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_function_table(path, xs, ys, label: str) -> None:
    """Line plot of a dyadic function table."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(xs, ys, lw=1.2)
    ax.axhline(0.0, color="0.7", lw=0.6)
    ax.set_xlabel("x")
    ax.set_ylabel(label)
    ax.set_title(label)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_norm_report(path, report) -> None:
    """Bar chart of the per-level terms of a Besov norm report."""
    fig, ax = plt.subplots(figsize=(7, 4))
    levels = sorted(report.level_terms)
    ax.bar([str(j) for j in levels], [report.level_terms[j] for j in levels],
           color="#4878a8")
    ax.axhline(report.coarse_term, color="#a84848", lw=1.0,
               label=f"coarse term {report.coarse_term:.3g}")
    ax.set_xlabel("level")
    ax.set_ylabel("weighted term")
    ax.set_title(f"{report.kind} norm, total {report.total:.6g}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_holder_fit(path, estimate) -> None:
    """Regression points and fitted slope of a smoothness estimate."""
    fig, ax = plt.subplots(figsize=(7, 4))
    js = [j for j, _ in estimate.points]
    vals = [v for _, v in estimate.points]
    ax.plot(js, vals, "o", label="-log2 max |d_j|")
    if len(js) >= 2 and estimate.sigma not in (float("inf"),):
        import numpy as np

        coeffs = np.polyfit(js, vals, 1)
        xs = np.linspace(min(js), max(js), 50)
        ax.plot(xs, np.polyval(coeffs, xs), "-",
                label=f"slope {estimate.sigma:.3f}")
    ax.set_xlabel("level j")
    ax.set_ylabel("-log2 of interior coefficient max")
    ax.set_title("smoothness exponent fit")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
