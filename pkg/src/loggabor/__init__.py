"""Gabor-like filters from Gaussians on logarithmic frequency axes."""

__version__ = "0.1.0"

from .grid import (GridShape, MemoryBudgetError, axis_scale,  # noqa: E402
                   inverse_log_freq_map, log_freq_map)
from .synth import FreqWeights, GaussianSpec, build_weights, gaussian_weight  # noqa: E402
from .transform import ComplexFilter, idft_fast, idft_naive, sum_check  # noqa: E402
from .bank import (BankSpec, DegenerateFilterError, FilterBank, build_bank,  # noqa: E402
                   coverage_sum, default_prune_limit, full_circle_spec,
                   identity_check, normalize, standard_layout, ring_centers,
                   theta_from_chord)
from .apply import ResponseSet, apply_bank, convolve  # noqa: E402
