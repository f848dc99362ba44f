"""Ring-layout filter banks built from log-frequency Gaussians (2-D)."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
import math

import numpy as np

from .grid import GridShape
from .synth import FreqWeights, GaussianSpec, build_weights
from .transform import ComplexFilter, idft_fast

# Relative level below which an imaginary part counts as numerically zero.
IM_ZERO_RTOL = 1e-9
_ANGLE_EPS = 1e-9


class DegenerateFilterError(ValueError):
    """A filter whose real part carries no energy and cannot be normalized."""

    def __init__(self, mu, message="real part has zero energy"):
        self.mu = tuple(mu) if mu is not None else None
        super().__init__(f"{message} (mu={self.mu})")


def theta_from_chord(r_max, delta_r) -> float:
    """Angle whose chord on the circle of radius ``r_max`` has length ``delta_r``.

    Solves ``|(r cos t, r sin t) - (r, 0)| = delta_r`` for ``t`` in ``(0, pi]``.
    """
    if not (r_max > 0 and delta_r > 0):
        raise ValueError("r_max and delta_r must be positive")
    if delta_r > 2 * r_max:
        raise ValueError(f"no chord of length {delta_r} on a circle of radius {r_max}")
    return 2.0 * math.asin(delta_r / (2.0 * r_max))


def default_prune_limit(N, sigma) -> float:
    """Nyquist minus the Gaussian's full width at half maximum on the log axes."""
    return (N - 1) / 2 - 2.0 * math.sqrt(sigma * math.log(2.0))


@dataclass(frozen=True)
class BankSpec:
    """Declarative bank geometry.

    ``theta_step`` may be ``"auto"`` (chord rule on the outermost ring with
    the ring spacing as chord length). ``theta_range`` is closed; an angle
    coinciding with an earlier one modulo ``2 pi`` is dropped, so
    ``(0, 2 pi)`` gives a half-open full circle. ``prune_limit`` is ``None``
    (keep every center), ``"auto"`` (:func:`default_prune_limit`) or a number.
    """

    shape: GridShape
    sigma: float
    radii: tuple = ()
    theta_step: object = math.pi / 22
    theta_range: tuple = (0.0, math.pi / 2)
    prune_limit: object = None

    def __post_init__(self):
        if self.shape.D != 2:
            raise ValueError("ring layouts are defined for D=2 only")
        sigma = float(self.sigma)
        if not (sigma > 0 and math.isfinite(sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        object.__setattr__(self, "sigma", sigma)
        radii = tuple(float(r) for r in self.radii)
        if any(r <= 0 for r in radii):
            raise ValueError("radii must be positive")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("radii must be strictly ascending")
        if radii and radii[-1] >= self.shape.half:
            raise ValueError(f"radii must stay below (N-1)/2 = {self.shape.half}")
        object.__setattr__(self, "radii", radii)
        if self.theta_step != "auto":
            step = float(self.theta_step)
            if not (0 < step <= math.pi):
                raise ValueError("theta_step must lie in (0, pi]")
            object.__setattr__(self, "theta_step", step)
        lo, hi = (float(v) for v in self.theta_range)
        if hi < lo:
            raise ValueError("theta_range must be ascending")
        object.__setattr__(self, "theta_range", (lo, hi))
        if self.prune_limit not in (None, "auto"):
            limit = float(self.prune_limit)
            if not limit > 0:
                raise ValueError("prune_limit must be positive")
            object.__setattr__(self, "prune_limit", limit)

    @property
    def radial_step(self) -> float:
        if len(self.radii) >= 2:
            return self.radii[1] - self.radii[0]
        return self.radii[0] if self.radii else 0.0

    def resolved_theta_step(self) -> float:
        if self.theta_step != "auto":
            return self.theta_step
        if not self.radii:
            return math.pi
        return theta_from_chord(self.radii[-1], self.radial_step)

    def resolved_prune_limit(self):
        if self.prune_limit == "auto":
            return default_prune_limit(self.shape.N, self.sigma)
        return self.prune_limit

    def angles(self) -> list:
        step = self.resolved_theta_step()
        lo, hi = self.theta_range
        out = []
        i = 0
        while True:
            t = lo + i * step
            if t > hi + _ANGLE_EPS or t - lo >= 2 * math.pi - _ANGLE_EPS:
                break
            out.append(t)
            i += 1
        return out


def standard_layout(N=101, sigma=100.0, **kw) -> BankSpec:
    """Radii 6..42 in steps of 6, angles 0..pi/2 in steps of pi/22."""
    return BankSpec(GridShape(2, N), sigma, radii=tuple(range(6, 43, 6)),
                    theta_step=math.pi / 22, theta_range=(0.0, math.pi / 2), **kw)


def full_circle_spec(spec: BankSpec) -> BankSpec:
    """Coverage variant: angles over ``[0, 2 pi)`` and one extra outer ring."""
    radii = spec.radii
    if radii:
        outer = radii[-1] + spec.radial_step
        if outer < spec.shape.half:
            radii = radii + (outer,)
    return replace(spec, radii=radii, theta_step=spec.resolved_theta_step(),
                   theta_range=(0.0, 2 * math.pi))


@dataclass(frozen=True)
class Center:
    r: float
    theta: float
    mu: tuple


def ring_centers(spec: BankSpec):
    """Gaussian centers of the bank, low-pass first then ordered by ``(r, theta)``.

    Returns ``(kept, pruned)``, both lists of :class:`Center`. A center is
    pruned when any of its coordinates exceeds the prune limit in magnitude.
    """
    limit = spec.resolved_prune_limit()
    kept = [Center(0.0, 0.0, (0.0, 0.0))]
    pruned = []
    angles = spec.angles()
    for r in spec.radii:
        for t in angles:
            c = Center(r, t, (r * math.cos(t), r * math.sin(t)))
            if limit is not None and max(abs(v) for v in c.mu) > limit:
                pruned.append(c)
            else:
                kept.append(c)
    return kept, pruned


def normalize(f: ComplexFilter) -> ComplexFilter:
    """Scale real and imaginary parts to unit L2 norm over the grid.

    The imaginary part of a low-pass filter (``mu = 0``), or one that is
    numerically zero, is set to exact zeros.
    """
    mu = f.spec.mu if f.spec is not None else None
    re_norm = float(np.sqrt(np.sum(f.re**2)))
    if not (re_norm > 0 and math.isfinite(re_norm)):
        raise DegenerateFilterError(mu)
    im_norm = float(np.sqrt(np.sum(f.im**2)))
    lowpass = f.spec is not None and f.spec.is_lowpass
    if lowpass or im_norm <= IM_ZERO_RTOL * re_norm:
        return replace(f, re=f.re / re_norm, im=np.zeros_like(f.im))
    return f.scaled(1.0 / re_norm, 1.0 / im_norm)


@dataclass(frozen=True)
class FilterBank:
    spec: BankSpec
    filters: tuple = field(repr=False)
    centers: tuple
    pruned: tuple = ()
    lowpass_index: int = 0

    def __len__(self):
        return len(self.filters)

    def report(self) -> dict:
        return {
            "N": self.spec.shape.N,
            "D": self.spec.shape.D,
            "sigma": self.spec.sigma,
            "radii": list(self.spec.radii),
            "theta_step": self.spec.resolved_theta_step(),
            "theta_range": list(self.spec.theta_range),
            "prune_limit": self.spec.resolved_prune_limit(),
            "filter_count": len(self.filters),
            "lowpass_index": self.lowpass_index,
            "centers": [{"r": c.r, "theta": c.theta, "mu": list(c.mu)} for c in self.centers],
            "pruned": [{"r": c.r, "theta": c.theta, "mu": list(c.mu)} for c in self.pruned],
        }


def _synthesize(center, spec):
    g = GaussianSpec(center.mu, spec.sigma)
    try:
        return normalize(idft_fast(build_weights(g, spec.shape)))
    except DegenerateFilterError:
        raise
    except ValueError as exc:
        raise ValueError(f"{exc} (mu={center.mu})") from exc


def build_bank(spec: BankSpec, workers=None) -> FilterBank:
    """Synthesize and normalize one filter per kept center.

    With ``workers > 1`` the centers are processed on a thread pool; the
    output order is the same either way.
    """
    kept, pruned = ring_centers(spec)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            filters = list(pool.map(lambda c: _synthesize(c, spec), kept))
    else:
        filters = [_synthesize(c, spec) for c in kept]
    return FilterBank(spec, tuple(filters), tuple(kept), tuple(pruned))


def coverage_sum(spec: BankSpec, full_circle=False) -> FreqWeights:
    """Elementwise sum of the weight fields of every kept center."""
    if full_circle:
        spec = full_circle_spec(spec)
    kept, _ = ring_centers(spec)
    total = np.zeros(spec.shape.dims)
    for c in kept:
        total += build_weights(GaussianSpec(c.mu, spec.sigma), spec.shape).values
    return FreqWeights(spec.shape, total)


def identity_residual(w: FreqWeights) -> float:
    """Largest off-origin magnitude of the real inverse transform, scaled to 1 at the origin."""
    re = idft_fast(w).re
    origin = w.shape.origin()
    re = re / re[origin]
    re[origin] = 0.0
    return float(np.max(np.abs(re)))


def identity_check(spec: BankSpec, full_circle=True) -> float:
    """How far the bank's summed coverage is from an identity filter (0 is perfect)."""
    return identity_residual(coverage_sum(spec, full_circle=full_circle))
