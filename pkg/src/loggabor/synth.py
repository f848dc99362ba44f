"""Gaussian weights on logarithmic frequency axes, with wrap-around folding."""

from dataclasses import dataclass, field
import itertools

import numpy as np

from .grid import GridShape, check_budget, log_freq_map


@dataclass(frozen=True)
class GaussianSpec:
    """Center ``mu`` (in log-axis coordinates) and width ``sigma``.

    ``sigma`` divides the squared distance directly, i.e. the Gaussian is
    ``exp(-|m - mu|^2 / sigma)``. Any real ``mu`` is accepted; centers far
    outside the mapped grid give weights that underflow to zero.
    """

    mu: tuple
    sigma: float

    def __post_init__(self):
        mu = tuple(float(v) for v in np.atleast_1d(np.asarray(self.mu, dtype=float)))
        if not mu:
            raise ValueError("mu must have at least one component")
        if not all(np.isfinite(mu)):
            raise ValueError(f"mu must be finite, got {mu}")
        sigma = float(self.sigma)
        if not (sigma > 0 and np.isfinite(sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)

    @property
    def D(self) -> int:
        return len(self.mu)

    @property
    def is_lowpass(self) -> bool:
        return all(v == 0.0 for v in self.mu)


@dataclass(frozen=True)
class FreqWeights:
    """Real weights over the centered frequency grid (origin at ``shape.origin()``)."""

    shape: GridShape
    values: np.ndarray = field(repr=False)
    spec: GaussianSpec = None

    def __post_init__(self):
        if self.values.shape != self.shape.dims:
            raise ValueError(
                f"values shape {self.values.shape} does not match grid {self.shape.dims}"
            )

    def at(self, k) -> float:
        """Weight at centered frequency ``k``."""
        idx = tuple(int(v) + self.shape.half for v in k)
        return float(self.values[idx])


def wrap_offsets(shape: GridShape) -> np.ndarray:
    """All ``l`` in ``{-N, 0, N}^D``, shape ``(3**D, D)``."""
    N = shape.N
    return np.array(list(itertools.product((-N, 0, N), repeat=shape.D)), dtype=np.int64)


def _check_dims(spec, shape):
    if spec.D != shape.D:
        raise ValueError(f"mu has {spec.D} components but the grid has D={shape.D}")


def gaussian_weight(k, spec: GaussianSpec, N) -> float:
    """Folded Gaussian weight at a single grid frequency ``k``.

    Sums ``exp(-|m(k + l) - mu|^2 / sigma)`` over the ``3**D`` wrap offsets
    ``l``, so tails that leave the grid re-enter from the opposite side.
    """
    k = np.asarray(k, dtype=np.int64)
    shape = GridShape(len(k), N)
    _check_dims(spec, shape)
    if np.any(np.abs(k) > shape.half):
        raise ValueError(f"k={tuple(k)} lies outside the centered grid for N={N}")
    mapped = log_freq_map(k[None, :] + wrap_offsets(shape), N)
    d2 = np.sum((mapped - np.asarray(spec.mu)) ** 2, axis=-1)
    return float(np.sum(np.exp(-d2 / spec.sigma)))


def build_weights(spec: GaussianSpec, shape: GridShape, max_elements=None) -> FreqWeights:
    """Evaluate :func:`gaussian_weight` at every point of ``shape``.

    The budget check runs before anything is allocated.
    """
    check_budget(shape, max_elements)
    _check_dims(spec, shape)
    k = shape.points()
    mu = np.asarray(spec.mu)
    total = np.zeros(shape.dims)
    for l in wrap_offsets(shape):
        mapped = log_freq_map(k + l, shape.N)
        d2 = np.sum((mapped - mu) ** 2, axis=-1)
        total += np.exp(-d2 / spec.sigma)
    return FreqWeights(shape, total, spec)
