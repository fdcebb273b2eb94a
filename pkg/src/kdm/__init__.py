"""Kernelized diffusion maps with adaptive kernel selection.

The estimator solves the generalized eigenproblem Sigma a = mu L_lambda a
for the operator pair built from a kernel's feature or landmark
coordinates, and the package's contribution is choosing that kernel:
cross-validated search over families and bandwidths, variational mixture
weights, and bounded per-coordinate bandwidth refinement.
"""

from .kernels import FAMILIES, KernelSpec, gram, softmax_mixture
from .rff import RffBasis, sample_basis, features, feature_derivs, mixture_basis
from .operators import (
    KernelParts,
    NystromMatrices,
    OperatorPair,
    aggregate_mixture,
    build_nystrom,
    center_columns,
    kmeans_landmarks,
    operator_pair_nystrom,
    operator_pair_rff,
)
from .eigsolve import (
    EigenSolution,
    GaugeRankWarning,
    gauge_fix,
    lift,
    procrustes_align,
    sign_anchor,
    solve_gevp,
)
from .cv import (
    RULES,
    CandidateScore,
    CvConfig,
    CvResult,
    candidate_grid,
    fold_indices,
    median_pairwise_distance,
    run_cv,
    select,
)
from .outer import (
    ABLATIONS,
    AdamState,
    VarRffConfig,
    VarRffResult,
    VmklConfig,
    VmklResult,
    adam_step,
    run_varrff,
    run_vmkl,
)
from .bench import BenchmarkDataset, PROBLEMS, apply_generator, make_benchmark
from .metrics import AlignmentReport, align_and_corr, subspace_r2
from .pipeline import (
    METHODS,
    FitReport,
    evaluate,
    fit_cv_rff,
    fit_rff,
    fit_uniform_nystrom,
    fit_uniform_rff,
    fit_varrff,
    fit_vmkl,
)
from .seeding import rng_for, stable_seed

__version__ = "0.1.0"

__all__ = [
    "ABLATIONS",
    "AdamState",
    "AlignmentReport",
    "BenchmarkDataset",
    "CandidateScore",
    "CvConfig",
    "CvResult",
    "EigenSolution",
    "FAMILIES",
    "FitReport",
    "GaugeRankWarning",
    "KernelParts",
    "KernelSpec",
    "METHODS",
    "NystromMatrices",
    "OperatorPair",
    "PROBLEMS",
    "RULES",
    "RffBasis",
    "VarRffConfig",
    "VarRffResult",
    "VmklConfig",
    "VmklResult",
    "adam_step",
    "aggregate_mixture",
    "align_and_corr",
    "apply_generator",
    "build_nystrom",
    "candidate_grid",
    "center_columns",
    "evaluate",
    "feature_derivs",
    "features",
    "fit_cv_rff",
    "fit_rff",
    "fit_uniform_nystrom",
    "fit_uniform_rff",
    "fit_varrff",
    "fit_vmkl",
    "fold_indices",
    "gauge_fix",
    "gram",
    "kmeans_landmarks",
    "lift",
    "make_benchmark",
    "median_pairwise_distance",
    "mixture_basis",
    "operator_pair_nystrom",
    "operator_pair_rff",
    "procrustes_align",
    "rng_for",
    "run_cv",
    "run_varrff",
    "run_vmkl",
    "sample_basis",
    "select",
    "sign_anchor",
    "softmax_mixture",
    "solve_gevp",
    "stable_seed",
    "subspace_r2",
    "__version__",
]
