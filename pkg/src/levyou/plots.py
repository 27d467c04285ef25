"""Figure rendering for the command-line report path.

Every function writes a PNG next to the delimited output it illustrates.
matplotlib is imported lazily with the Agg backend so the library core
works headless and without matplotlib on the import path.
"""

from __future__ import annotations

import numpy as np


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_series_figure(y, outfile, t=None, xlabel="t", ylabel="y", title=None) -> None:
    """Line plot of a series against time (or index)."""
    plt = _plt()
    y = np.asarray(y, dtype=float)
    t = np.arange(len(y)) if t is None else np.asarray(t)
    fig, ax = plt.subplots(figsize=(8.0, 4.0))
    ax.plot(t, y, lw=0.8)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(outfile, dpi=150)
    plt.close(fig)


def save_points_figure(y, outfile, ylabel="value", title=None) -> None:
    """Scatter of values against their index, with a zero reference line."""
    plt = _plt()
    y = np.asarray(y, dtype=float)
    fig, ax = plt.subplots(figsize=(8.0, 4.0))
    ax.scatter(np.arange(1, len(y) + 1), y, s=12, alpha=0.8)
    ax.axhline(0.0, color="grey", lw=0.8)
    ax.set_xlabel("n")
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(outfile, dpi=150)
    plt.close(fig)


def save_acf_figure(acf_values, n, outfile, title=None) -> None:
    """Stem plot of sample autocorrelations with the +-1.96/sqrt(N) band."""
    plt = _plt()
    acf_values = np.asarray(acf_values, dtype=float)
    lags = np.arange(len(acf_values))
    band = 1.96 / np.sqrt(n)
    fig, ax = plt.subplots(figsize=(8.0, 4.0))
    ax.vlines(lags, 0.0, acf_values, lw=1.5)
    ax.scatter(lags, acf_values, s=10)
    ax.axhline(0.0, color="black", lw=0.8)
    ax.axhline(band, color="C3", lw=0.8, ls="--")
    ax.axhline(-band, color="C3", lw=0.8, ls="--")
    ax.set_xlabel("lag")
    ax.set_ylabel("autocorrelation")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(outfile, dpi=150)
    plt.close(fig)
