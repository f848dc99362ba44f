"""Centered integer grids and the logarithmic frequency-axis mapping."""

from dataclasses import dataclass
import math

import numpy as np

# Upper bound on N**D for any dense tensor this package allocates.
MAX_ELEMENTS = 2**25


class MemoryBudgetError(ValueError):
    """Raised when a grid would exceed the configured element budget."""


def _check_odd(N):
    if isinstance(N, bool) or int(N) != N:
        raise ValueError(f"N must be an integer, got {N!r}")
    N = int(N)
    if N < 3 or N % 2 == 0:
        raise ValueError(f"N must be odd and >= 3, got {N}")
    return N


@dataclass(frozen=True)
class GridShape:
    """A D-dimensional centered grid with N points per axis (N odd)."""

    D: int
    N: int

    def __post_init__(self):
        if isinstance(self.D, bool) or int(self.D) != self.D or self.D < 1:
            raise ValueError(f"D must be a positive integer, got {self.D!r}")
        object.__setattr__(self, "D", int(self.D))
        object.__setattr__(self, "N", _check_odd(self.N))

    @property
    def half(self) -> int:
        return (self.N - 1) // 2

    @property
    def size(self) -> int:
        return self.N**self.D

    @property
    def dims(self) -> tuple:
        return (self.N,) * self.D

    def axis(self) -> np.ndarray:
        """Centered indices ``-(N-1)/2 .. (N-1)/2`` for one axis."""
        return np.arange(-self.half, self.half + 1)

    def points(self) -> np.ndarray:
        """All grid points as an integer array of shape ``(N,)*D + (D,)``.

        Row-major over the centered index tuple, so ``points()[i, j]`` is
        ``(i - half, j - half)``.
        """
        check_budget(self)
        axes = np.meshgrid(*([self.axis()] * self.D), indexing="ij")
        return np.stack(axes, axis=-1)

    def origin(self) -> tuple:
        """Array index of the grid origin."""
        return (self.half,) * self.D


def check_budget(shape: GridShape, max_elements=None):
    limit = MAX_ELEMENTS if max_elements is None else max_elements
    if shape.size > limit:
        raise MemoryBudgetError(
            f"grid N={shape.N}, D={shape.D} has {shape.size} elements; "
            f"budget is {limit}"
        )


def axis_scale(N) -> float:
    """Scale that makes the log axis reach the same maximum as the regular axis.

    ``s(N) = (N - 1) / (2 ln((N + 1) / 2))`` so that
    ``s(N) * ln((N - 1)/2 + 1) == (N - 1)/2``.
    """
    N = _check_odd(N)
    return (N - 1) / (2.0 * math.log((N + 1) / 2))


def log_freq_map(k, N) -> np.ndarray:
    """Map integer frequencies onto logarithmic frequency axes.

    Parameters
    ----------
    k : array_like
        Frequency vector(s) with the dimension on the last axis. Shifted
        points outside the centered grid (``k + l`` with ``l`` a multiple
        of ``N``) are accepted.
    N : int
        Points per axis of the grid the frequencies belong to.

    Returns
    -------
    numpy.ndarray
        ``s(N) * k / |k| * ln(|k| + 1)``, with the origin mapped to zero.
        Same shape as ``k``.
    """
    s = axis_scale(N)
    k = np.asarray(k, dtype=np.float64)
    r = np.sqrt(np.sum(k * k, axis=-1, keepdims=True))
    scale = np.zeros_like(r)
    np.divide(s * np.log1p(r), r, out=scale, where=r > 0)
    return k * scale


def inverse_log_freq_map(m, N) -> np.ndarray:
    """Regular-axis frequency whose log-axis image is ``m``."""
    s = axis_scale(N)
    m = np.asarray(m, dtype=np.float64)
    rho = np.sqrt(np.sum(m * m, axis=-1, keepdims=True))
    scale = np.zeros_like(rho)
    np.divide(np.expm1(rho / s), rho, out=scale, where=rho > 0)
    return m * scale
