"""Geometric phases of cyclic squeezing loops, coherent-state revivals, and
the three-gap statistics of near-revival times under the induced circle
rotation.

The pipeline: loop areas (`geometry`) fix the per-cycle phases; those give
closed-form and series correlations and revival times (`coherent`); cycle
to cycle the coherent label follows a rigid circle rotation (`rotation`);
the waiting times between near revivals then take at most three values
with exactly computable weights (`gaps`). `pipeline`/`cli` wire the stages
into a deterministic experiment harness.
"""

from ._backend import BACKEND as kernel_backend
from .coherent import (CoherentConfig, correlation_closed, correlation_fock,
                       fock_coefficients, fock_cutoff, near_revival_bound,
                       phase_factorization_check, revival_times,
                       static_correlation)
from .errors import (ConfigError, ContractViolation, NoHitsError,
                     SearchBoundExceeded, ValidationError)
from .gaps import (GapDistribution, RecurrenceRecord, empirical_gaps,
                   first_return_indices, gap_distribution, identity_residual,
                   mean_recurrence)
from .geometry import (ParametricLoop, PhaseData, areas_from_phases,
                       berry_phase, circle_loop, ellipse_loop, euclidean_area,
                       hyperbolic_area, loop_from_descriptor,
                       weyl_composition_phase)
from .pipeline import (ExperimentConfig, ExperimentReport, emit_plot_data,
                       run_experiment)
from .rotation import (RotationClass, RotationParams, arc_fraction,
                       classify_rotation, iterate, orbit, orbit_angles,
                       rotation_params, window_hits)

__version__ = "0.1.0"

__all__ = [
    "kernel_backend",
    "__version__",
    # errors
    "ValidationError", "ConfigError", "SearchBoundExceeded", "NoHitsError",
    "ContractViolation",
    # geometry
    "ParametricLoop", "PhaseData", "circle_loop", "ellipse_loop",
    "loop_from_descriptor", "euclidean_area", "hyperbolic_area",
    "berry_phase", "areas_from_phases", "weyl_composition_phase",
    # coherent dynamics
    "CoherentConfig", "fock_cutoff", "fock_coefficients",
    "static_correlation", "correlation_closed", "correlation_fock",
    "phase_factorization_check", "revival_times", "near_revival_bound",
    # rotation map
    "RotationParams", "RotationClass", "rotation_params", "iterate", "orbit",
    "orbit_angles", "window_hits", "arc_fraction", "classify_rotation",
    # gap statistics
    "GapDistribution", "RecurrenceRecord", "first_return_indices",
    "gap_distribution", "identity_residual", "mean_recurrence",
    "empirical_gaps",
    # harness
    "ExperimentConfig", "ExperimentReport", "run_experiment",
    "emit_plot_data",
]
