"""Accelerated randomized row-projection solvers for ill-conditioned
overdetermined linear systems: pairwise-difference feasibility augmentation,
coreset and cluster row reduction, and spectrally weighted sampling."""

__version__ = "0.1.0"

from .clustering import (
    ClusterPartition,
    ReductionSchedule,
    best_cluster,
    build_schedule,
    cluster_guided_sampler,
    choose_epsilon,
    epsilon_cover,
    extract_coreset,
    score_rows,
    select_best_rows,
)
from .feasibility import (
    FeasibilitySystem,
    PairIndexMap,
    augment_with_pairs,
    binarize_rhs,
    combined_system,
    count_violated_pairs,
    hadamard_transform,
    pairwise_differences,
)
from .matgen import (
    GeneratedSystem,
    LinearSystem,
    Relation,
    SpectrumSpec,
    generate_ill_conditioned,
    generate_orthogonal,
    least_squares,
    make_system,
    save_matrix_csv,
    smallest_right_singular_vector,
)
from .metrics import (
    ChebyshevResult,
    IterationTrace,
    TraceRecorder,
    approximation_error,
    chebyshev_center,
    chebyshev_error,
    classification_accuracy,
    mean_traces,
    singular_errors,
)
from .sampling import (
    RowDistribution,
    SamplingStrategy,
    build_distribution,
    sample_rows,
    spectral_weights,
)
from .solvers import SolveResult, SolverConfig, rk_bound, rk_step, run_solver, skm_step

__all__ = [name for name in dir() if not name.startswith("_")]
