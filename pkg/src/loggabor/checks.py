"""Self-contained invariant suite run by ``loggabor check``."""

import math
import tempfile
from pathlib import Path

import numpy as np

from .apply import convolve, impulse, response_energy, spectral_energy
from .bank import BankSpec, build_bank, identity_residual, theta_from_chord
from .grid import GridShape, axis_scale
from .io import read_tensor, write_tensor
from .synth import FreqWeights, GaussianSpec, build_weights
from .transform import idft_fast, idft_naive, mirror


def _axis_scale():
    worst = max(abs(axis_scale(N) * math.log((N + 1) / 2) - (N - 1) / 2) / ((N - 1) / 2)
                for N in (3, 9, 101, 1001))
    return worst < 1e-12, f"max rel err {worst:.2e}"


def _oracle(rng):
    worst = 0.0
    for D, N in ((1, 9), (1, 101), (2, 9), (2, 25), (3, 9)):
        shape = GridShape(D, N)
        w = FreqWeights(shape, rng.uniform(0.1, 1.0, shape.dims))
        a, b = idft_naive(w).values, idft_fast(w).values
        worst = max(worst, np.max(np.abs(a - b)) / np.max(np.abs(a)))
    return worst < 1e-9, f"max rel diff {worst:.2e}"


def _hermitian(rng):
    shape = GridShape(2, 9)
    worst = 0.0
    for _ in range(20):
        f = idft_fast(FreqWeights(shape, rng.uniform(0.1, 1.0, shape.dims)))
        worst = max(worst, np.max(np.abs(f.re - mirror(f.re))), np.max(np.abs(f.im + mirror(f.im))))
    return worst < 1e-10, f"max asymmetry {worst:.2e}"


def _energy():
    spec = BankSpec(GridShape(2, 51), 50.0, radii=(5, 10, 15), theta_step=math.pi / 8)
    bank = build_bank(spec)
    worst = 0.0
    for f in bank.filters:
        target = 0.0 if f.spec.is_lowpass else 1.0
        worst = max(worst, abs(np.sum(f.re**2) - 1), abs(np.sum(f.im**2) - target))
    return worst < 1e-12, f"{len(bank)} filters, max dev {worst:.2e}"


def _chord():
    t = theta_from_chord(42, 6)
    chord = math.hypot(42 * math.cos(t) - 42, 42 * math.sin(t))
    ok = abs(chord - 6) < 1e-12 and abs(t - math.pi / 22) < 1e-3
    return ok, f"theta={t:.6f}"


def _identity():
    shape = GridShape(2, 9)
    r = identity_residual(FreqWeights(shape, np.ones(shape.dims)))
    return r == 0.0, f"flat residual {r}"


def _impulse():
    shape = GridShape(2, 15)
    f = idft_fast(build_weights(GaussianSpec((4.0, 3.0), 10.0), shape))
    sig = impulse((15, 15))
    resp = convolve(sig, f)
    err = np.max(np.abs(resp - f.values)) / np.max(np.abs(f.values))
    sig = np.random.default_rng(1).standard_normal((20, 17))
    e1, e2 = response_energy(convolve(sig, f)), spectral_energy(sig, f)
    ok = err < 1e-9 and abs(e1 - e2) / e1 < 1e-9
    return ok, f"impulse err {err:.2e}, parseval err {abs(e1 - e2) / e1:.2e}"


def _roundtrip(rng):
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "t.lgfb"
        for i in range(50):
            shape = tuple(rng.integers(1, 6, size=rng.integers(0, 4)))
            data = rng.standard_normal(shape)
            if i % 2:
                data = data + 1j * rng.standard_normal(shape)
            write_tensor(path, data)
            back = read_tensor(path).data
            if back.shape != data.shape or back.tobytes() != data.tobytes():
                return False, f"mismatch at tensor {i}"
    return True, "50 tensors"


def run_checks():
    """Return a list of ``(name, ok, detail)`` tuples."""
    rng = np.random.default_rng(0)
    suite = [
        ("axis-scale identity", _axis_scale),
        ("fast/naive transform agreement", lambda: _oracle(rng)),
        ("hermitian symmetry", lambda: _hermitian(rng)),
        ("energy identities", _energy),
        ("chord angle", _chord),
        ("flat coverage identity", _identity),
        ("impulse and parseval", _impulse),
        ("tensor file round trip", lambda: _roundtrip(rng)),
    ]
    results = []
    for name, fn in suite:
        try:
            ok, detail = fn()
        except Exception as exc:  # reported, not raised: check must always finish
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
