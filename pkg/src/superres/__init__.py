"""Sparse super-resolution from contiguous Fourier measurements.

Superset selection and pruning solver, a matrix pencil baseline, and a
seeded phase-transition experiment harness.
"""

from .errors import (
    DegenerateGapError,
    EmptyEstimateError,
    OvercompleteSupportError,
    RecoveryError,
)
from .experiments import (
    PhaseDiagram,
    SignalFamily,
    TrialOutcome,
    family_from_name,
    five_cluster_family,
    k_sparse_family,
    make_signal,
    phase_diagram,
    run_trial,
    well_separated_family,
)
from .fourier import (
    Measurement,
    MeasurementModel,
    NoiseSpec,
    SparseSignal,
    atom,
    atom_matrix,
    coherence,
    default_hankel_rows,
    grid_coherence,
    measure,
)
from .pencil import (
    PencilConfig,
    denoise,
    pencil_frequencies,
    pencil_pair,
    pencil_recover,
)
from .pruning import (
    RecoveryResult,
    least_squares,
    noiseless_recover,
    projection_gap,
    projection_gaps,
    prune,
    superset_recover,
)
from .subspace import (
    HankelSpectrum,
    SupersetSelection,
    atom_angle,
    build_hankel,
    epsilon1,
    estimate_rank,
    hankel_spectrum,
    range_basis,
    select_superset,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateGapError",
    "EmptyEstimateError",
    "HankelSpectrum",
    "Measurement",
    "MeasurementModel",
    "NoiseSpec",
    "OvercompleteSupportError",
    "PencilConfig",
    "PhaseDiagram",
    "RecoveryError",
    "RecoveryResult",
    "SignalFamily",
    "SparseSignal",
    "SupersetSelection",
    "TrialOutcome",
    "atom",
    "atom_angle",
    "atom_matrix",
    "build_hankel",
    "coherence",
    "default_hankel_rows",
    "denoise",
    "epsilon1",
    "estimate_rank",
    "family_from_name",
    "five_cluster_family",
    "grid_coherence",
    "hankel_spectrum",
    "k_sparse_family",
    "least_squares",
    "make_signal",
    "measure",
    "noiseless_recover",
    "pencil_frequencies",
    "pencil_pair",
    "pencil_recover",
    "phase_diagram",
    "projection_gap",
    "projection_gaps",
    "prune",
    "range_basis",
    "run_trial",
    "select_superset",
    "superset_recover",
    "well_separated_family",
]
