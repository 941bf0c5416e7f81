"""Block-level dependence graphs from repeated network observations.

Pipeline: sample networks whose within-block connection log-odds are jointly
Gaussian (models), turn repeated networks into a truncated log-odds panel
(estimation), run per-node lasso / Dantzig-type / mu-corrected neighborhood
selection (selectors), tune the penalties by cross-validation and BIC
(tuning), and score the recovered edge set against the true precision
pattern (evaluation).
"""

from .estimation import (
    EtaPanel,
    MeanEstimate,
    assemble_panel,
    center_panel,
    count_within_edges,
    default_truncation,
    estimate_eta_row,
    estimate_mean_and_beta,
)
from .evaluation import (
    DiagnosticsConfig,
    DiagnosticsReport,
    ErrorReport,
    ExperimentConfig,
    ResultRow,
    error_rates,
    roc_auc,
    roc_points,
    run_diagnostics,
    run_experiment,
    shared_lambda_grid,
)
from .models import (
    BlockPartition,
    CovarianceSpec,
    LatentBlockModel,
    NetworkSample,
    OffDiagSpec,
    TrueGraph,
    build_covariance,
    default_design,
    make_model,
    make_partition,
    partial_correlations,
    sample_eta_panel,
    sample_networks,
)
from .seeding import derive_seed, stream
from .selectors import (
    EdgeSet,
    SelectorProblem,
    SelectorSolution,
    assemble_edge_set,
    kkt_residual,
    lasso_path,
    make_problem,
    neighborhoods,
    solve_dantzig_type,
    solve_lasso,
    solve_method,
    threshold_absolute,
    threshold_relative,
)
from .tuning import (
    PrecisionFit,
    TuningConfig,
    cv_select_lambda,
    default_tau_grid,
    gaussian_bic,
    lambda_grid,
    refit_precision,
    sample_covariance,
    select_tau,
)

__version__ = "0.1.0"

__all__ = [
    "BlockPartition",
    "CovarianceSpec",
    "DiagnosticsConfig",
    "DiagnosticsReport",
    "EdgeSet",
    "ErrorReport",
    "EtaPanel",
    "ExperimentConfig",
    "LatentBlockModel",
    "MeanEstimate",
    "NetworkSample",
    "OffDiagSpec",
    "PrecisionFit",
    "ResultRow",
    "SelectorProblem",
    "SelectorSolution",
    "TrueGraph",
    "TuningConfig",
    "assemble_edge_set",
    "assemble_panel",
    "build_covariance",
    "center_panel",
    "count_within_edges",
    "cv_select_lambda",
    "default_design",
    "default_tau_grid",
    "default_truncation",
    "derive_seed",
    "error_rates",
    "estimate_eta_row",
    "estimate_mean_and_beta",
    "gaussian_bic",
    "kkt_residual",
    "lambda_grid",
    "lasso_path",
    "make_model",
    "make_partition",
    "make_problem",
    "neighborhoods",
    "partial_correlations",
    "refit_precision",
    "roc_auc",
    "roc_points",
    "run_diagnostics",
    "run_experiment",
    "sample_covariance",
    "sample_eta_panel",
    "sample_networks",
    "select_tau",
    "shared_lambda_grid",
    "solve_dantzig_type",
    "solve_lasso",
    "solve_method",
    "stream",
    "threshold_absolute",
    "threshold_relative",
]
