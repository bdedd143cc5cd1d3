"""Optimal squeezing and entanglement from noisy Gaussian operations.

A noisy Gaussian device is used together with free, noiseless passive
optics (beam splitters and phase shifters). The package computes the best
achievable squeezing for one use, for repeated use with freely chosen or
fixed passive operations, the asymptotic optimum, and the resulting
two-mode entanglement. Brute-force oracles are provided to check each
analytic optimum.
"""

from .channel import (
    GaussianChannel,
    RingSolution,
    apply,
    brute_force_single,
    compose,
    f_opt,
    fixed_point,
    identity_channel,
    is_valid_channel,
    loss_channel,
    optimal_passive,
    ring_passive,
    ring_solution,
    squeezer_channel,
)
from .dynamics import (
    LindbladModel,
    channel_at_time,
    drift_and_diffusion,
    example_model,
    matrix_exponential,
    ode_oracle,
)
from .entanglement import (
    beam_splitter_50_50,
    canonical_entanglement,
    entangle_canonical,
    entanglement_bound,
    log_negativity,
    partial_transpose,
)
from .exceptions import (
    DegenerateContraction,
    DimensionError,
    GSOError,
    NoFiniteFixedPoint,
    SingularDenominator,
    SingularNoise,
)
from .general import (
    GeneralGaussianChannel,
    apply_general,
    f_opt_general,
    is_valid_general,
    optimal_passive_general,
)
from .phasespace import (
    angle_of,
    apply_passive,
    is_passive,
    is_valid_cm,
    min_eigvec,
    passive_mapping,
    rotation_single_mode,
    squeezing,
    symplectic_eigenvalues,
    symplectic_form,
)
from .protocols import (
    Trajectory,
    convergence_report,
    iterate_fixed_k,
    iterate_optimal,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateContraction",
    "DimensionError",
    "GSOError",
    "GaussianChannel",
    "GeneralGaussianChannel",
    "LindbladModel",
    "NoFiniteFixedPoint",
    "RingSolution",
    "SingularDenominator",
    "SingularNoise",
    "Trajectory",
    "angle_of",
    "apply",
    "apply_general",
    "apply_passive",
    "beam_splitter_50_50",
    "brute_force_single",
    "canonical_entanglement",
    "channel_at_time",
    "compose",
    "convergence_report",
    "drift_and_diffusion",
    "entangle_canonical",
    "entanglement_bound",
    "example_model",
    "f_opt",
    "f_opt_general",
    "fixed_point",
    "identity_channel",
    "is_passive",
    "is_valid_channel",
    "is_valid_cm",
    "is_valid_general",
    "iterate_fixed_k",
    "iterate_optimal",
    "log_negativity",
    "loss_channel",
    "matrix_exponential",
    "min_eigvec",
    "ode_oracle",
    "optimal_passive",
    "optimal_passive_general",
    "partial_transpose",
    "passive_mapping",
    "ring_passive",
    "ring_solution",
    "rotation_single_mode",
    "squeezer_channel",
    "squeezing",
    "sweep",
    "symplectic_eigenvalues",
    "symplectic_form",
]
