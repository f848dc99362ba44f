"""Centered inverse DFT of frequency weights into spatial complex filters.

Both paths compute the unnormalized sum

    Psi(n) = sum_k w(k) exp(2 pi i n.k / N)

with ``n`` and ``k`` on the centered grid. There is no ``1/N**D`` factor.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .grid import GridShape
from .synth import FreqWeights, GaussianSpec


@dataclass(frozen=True)
class ComplexFilter:
    """Spatial filter on the centered grid: even real part, odd imaginary part."""

    shape: GridShape
    re: np.ndarray = field(repr=False)
    im: np.ndarray = field(repr=False)
    spec: GaussianSpec = None

    @property
    def values(self) -> np.ndarray:
        return self.re + 1j * self.im

    @classmethod
    def from_complex(cls, shape, values, spec=None):
        values = np.asarray(values)
        return cls(shape, np.ascontiguousarray(values.real, dtype=np.float64),
                   np.ascontiguousarray(values.imag, dtype=np.float64), spec)

    def scaled(self, re_scale, im_scale):
        return replace(self, re=self.re * re_scale, im=self.im * im_scale)


# Rows of the naive kernel are produced in blocks to bound memory.
_NAIVE_BLOCK = 1 << 22


def idft_naive(w: FreqWeights) -> ComplexFilter:
    """Direct O(N^(2D)) evaluation of the centered inverse DFT.

    Used as the reference for :func:`idft_fast`. Phases are reduced with
    exact integer arithmetic (``n.k mod N``) before scaling by ``2 pi / N``.
    """
    shape = w.shape
    N = shape.N
    pts = shape.points().reshape(-1, shape.D)
    wk = w.values.reshape(-1)
    rows = max(1, _NAIVE_BLOCK // len(pts))
    out = np.empty(len(pts), dtype=np.complex128)
    for start in range(0, len(pts), rows):
        n = pts[start:start + rows]
        phase = np.mod(n @ pts.T, N) * (2.0 * np.pi / N)
        out[start:start + rows] = np.exp(1j * phase) @ wk
    return ComplexFilter.from_complex(shape, out.reshape(shape.dims), w.spec)


def idft_fast(w: FreqWeights) -> ComplexFilter:
    """FFT evaluation of the same sum as :func:`idft_naive`.

    ``ifftshift`` moves the centered origin to index 0 (exact for odd N),
    and ``fftshift`` moves it back after the transform.
    """
    vals = np.fft.ifftshift(w.values)
    out = np.fft.ifftn(vals) * w.shape.size
    return ComplexFilter.from_complex(w.shape, np.fft.fftshift(out), w.spec)


def sum_check(f: ComplexFilter, w: FreqWeights):
    """Residuals of ``sum_n Psi(n) = N**D * w(0)`` as ``(real, imag)``."""
    w0 = w.values[w.shape.origin()]
    return float(np.sum(f.re) - w.shape.size * w0), float(np.sum(f.im))


def mirror(a: np.ndarray) -> np.ndarray:
    """``a(-n)`` for a tensor stored on a centered odd grid."""
    return a[(slice(None, None, -1),) * a.ndim]
