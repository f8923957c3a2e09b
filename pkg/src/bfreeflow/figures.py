"""Matplotlib figures for the report-emitting CLI paths.

Figures are rendered straight to files (Agg backend, no display) next to the
delimited output they illustrate.
"""

from __future__ import annotations

import numpy as np


def _axes():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def entropy_sweep_figure(rows: list[dict], path: str) -> None:
    """Rate-vs-length plot for an entropy sweep.

    Plots log(count)/L against L where the exact count is available, with the
    closed-form entropy and the upper sandwich envelope for context.
    """
    plt = _axes()
    lengths = np.array([r["length"] for r in rows], dtype=float)
    formula = rows[0]["formula_nats"]
    upper = np.array([r["rate_upper"] for r in rows], dtype=float)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    exact = [(r["length"], r["exact_rate"]) for r in rows if r["exact_rate"] is not None]
    if exact:
        xs, ys = zip(*exact)
        ax.plot(xs, ys, "o-", label="log(count)/L")
    ax.plot(lengths, upper, "--", color="gray", label="sandwich upper")
    ax.axhline(formula, color="black", lw=1, label="closed form")
    ax.set_xlabel("word length L")
    ax.set_ylabel("nats per symbol")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def density_figure(
    bits: np.ndarray, expected: float, path: str, min_prefix: int = 64
) -> None:
    """Running ones-density of a sample against its expected value.

    The shaded band is three binomial standard errors at each prefix length
    (a guide, not a bound: inserted zeros correlate positions negatively).
    """
    plt = _axes()
    n = len(bits)
    prefix = np.arange(1, n + 1, dtype=float)
    running = np.cumsum(bits, dtype=float) / prefix

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    sel = prefix >= min(min_prefix, n)
    ax.plot(prefix[sel], running[sel], lw=0.8, label="running density")
    se = 3.0 * np.sqrt(expected * (1.0 - expected) / prefix[sel])
    ax.fill_between(prefix[sel], expected - se, expected + se, alpha=0.2, color="gray")
    ax.axhline(expected, color="black", lw=1, label=f"expected {expected:.4f}")
    ax.set_xscale("log")
    ax.set_xlabel("prefix length")
    ax.set_ylabel("ones density")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
