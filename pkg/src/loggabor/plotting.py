"""Matplotlib renderings of filters, banks and coverage images.

Everything here draws onto the Agg backend and writes PNG files; nothing is
shown interactively.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import bank_grid  # noqa: E402

_PNG_META = {"Software": None}


def _symmetric_imshow(ax, t, title=None):
    m = float(np.max(np.abs(t))) or 1.0
    ax.imshow(t, cmap="gray", vmin=-m, vmax=m, interpolation="nearest")
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title, fontsize=9)


def _gray_imshow(ax, t, title=None):
    ax.imshow(t, cmap="gray", interpolation="nearest")
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title, fontsize=9)


def log_axis_gaussian(spec, shape):
    """The Gaussian drawn directly on the log-axis coordinate plane (no folding)."""
    k = shape.points().astype(float)
    return np.exp(-np.sum((k - np.asarray(spec.mu)) ** 2, axis=-1) / spec.sigma)


def plot_filter_panels(weights, filt, path):
    """Four panels: log-axis Gaussian, folded weights on regular axes, real part, imaginary part."""
    fig, axes = plt.subplots(1, 4, figsize=(10, 2.8))
    if weights.spec is not None:
        _gray_imshow(axes[0], log_axis_gaussian(weights.spec, weights.shape), "log axes")
    else:
        axes[0].axis("off")
    _gray_imshow(axes[1], weights.values, "regular axes")
    _symmetric_imshow(axes[2], filt.re, "real part")
    _symmetric_imshow(axes[3], filt.im, "imaginary part")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)


def plot_bank(bank, path, coverage=None):
    """Real parts on a (angle x radius) grid with the low-pass at top-left.

    If ``coverage`` is given it is drawn in the bottom-left cell.
    """
    grid = bank_grid(bank)
    rows, cols = len(grid), len(grid[0])
    fig, axes = plt.subplots(rows, cols, figsize=(cols * 0.9, rows * 0.9), squeeze=False)
    for i, row in enumerate(grid):
        for j, f in enumerate(row):
            ax = axes[i][j]
            if f is not None:
                _symmetric_imshow(ax, f.re)
            elif coverage is not None and i == rows - 1 and j == 0:
                _gray_imshow(ax, coverage.values)
            else:
                ax.axis("off")
    fig.subplots_adjust(wspace=0.05, hspace=0.05, left=0.01, right=0.99, top=0.99, bottom=0.01)
    fig.savefig(path, dpi=100, metadata=_PNG_META)
    plt.close(fig)


def plot_coverage(coverage, identity, path, residual=None):
    """Coverage sum beside its normalized real inverse transform."""
    fig, axes = plt.subplots(1, 2, figsize=(6, 3.2))
    _gray_imshow(axes[0], coverage.values, "coverage")
    title = "inverse transform" if residual is None else f"residual {residual:.4g}"
    _symmetric_imshow(axes[1], identity, title)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)


def plot_energies(energies, path, labels=None):
    fig, ax = plt.subplots(figsize=(7, 3))
    x = np.arange(len(energies))
    ax.bar(x, energies, color="0.3")
    ax.set_xlabel("filter")
    ax.set_ylabel("response energy")
    if labels is not None and len(labels) <= 30:
        ax.set_xticks(x)
        ax.set_xticklabels(labels, rotation=90, fontsize=6)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)
