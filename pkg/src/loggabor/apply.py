"""Apply filters and banks to real signals via frequency-domain products.

Convention: responses are true convolutions with the filter as stored,
``out(x) = sum_n f(n) s(x - n)``. An impulse at the signal center therefore
reproduces the filter centered there, imaginary sign included.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .transform import ComplexFilter

CIRCULAR = "circular"
PADDED = "padded"


@dataclass(frozen=True)
class ResponseSet:
    responses: list = field(repr=False)
    energies: np.ndarray

    def __len__(self):
        return len(self.responses)


def _as_signal(signal, f: ComplexFilter):
    signal = np.asarray(signal, dtype=np.float64)
    if signal.ndim != f.shape.D:
        raise ValueError(f"signal has {signal.ndim} axes but the filter has D={f.shape.D}")
    if any(n < 1 for n in signal.shape):
        raise ValueError("signal axes must be non-empty")
    return signal


def embed_filter(f: ComplexFilter, size) -> np.ndarray:
    """Place the filter on a periodic grid of ``size`` with its origin at index 0."""
    h = f.shape.half
    if any(n < f.shape.N for n in size):
        raise ValueError(
            f"filter of width {f.shape.N} does not fit a signal of shape {tuple(size)}"
        )
    out = np.zeros(size, dtype=np.complex128)
    out[(slice(0, f.shape.N),) * len(size)] = f.values
    return np.roll(out, (-h,) * len(size), axis=tuple(range(len(size))))


def _padded(signal, h):
    return np.pad(signal, h, mode="constant")


def _spectra(signal, f, mode):
    if mode == CIRCULAR:
        work = signal
    elif mode == PADDED:
        work = _padded(signal, f.shape.half)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    kernel = embed_filter(f, work.shape)
    return np.fft.fftn(work) * np.fft.fftn(kernel)


def convolve(signal, f: ComplexFilter, mode=CIRCULAR) -> np.ndarray:
    """Complex response of ``signal`` to ``f``.

    ``circular`` wraps at the borders and needs every signal axis to be at
    least ``N`` long. ``padded`` zero-pads by ``(N-1)/2`` per side, so the
    result equals the linear convolution cropped to the signal extent.
    """
    signal = _as_signal(signal, f)
    out = np.fft.ifftn(_spectra(signal, f, mode))
    if mode == PADDED:
        h = f.shape.half
        out = out[tuple(slice(h, h + n) for n in signal.shape)]
    return out


def response_energy(response) -> float:
    return float(np.sqrt(np.sum(np.abs(response) ** 2)))


def spectral_energy(signal, f: ComplexFilter, mode=CIRCULAR) -> float:
    """Response energy computed from the product spectrum (Parseval).

    Only meaningful for circular mode, where no cropping happens.
    """
    if mode != CIRCULAR:
        raise ValueError("spectral energy is only defined for circular mode")
    spec = _spectra(_as_signal(signal, f), f, mode)
    return float(np.sqrt(np.sum(np.abs(spec) ** 2) / spec.size))


def apply_bank(signal, bank, mode=CIRCULAR, workers=None) -> ResponseSet:
    filters = bank.filters if hasattr(bank, "filters") else list(bank)
    signal = np.asarray(signal, dtype=np.float64)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            responses = list(pool.map(lambda f: convolve(signal, f, mode), filters))
    else:
        responses = [convolve(signal, f, mode) for f in filters]
    energies = np.array([response_energy(r) for r in responses])
    return ResponseSet(responses, energies)


def impulse(shape) -> np.ndarray:
    """Unit impulse at index ``n // 2`` of every axis."""
    out = np.zeros(shape)
    out[tuple(n // 2 for n in shape)] = 1.0
    return out
