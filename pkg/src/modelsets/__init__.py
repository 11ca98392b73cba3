"""Confidence sets of low-dimensional regression models.

The toolkit screens a large set of candidate explanatory variables by
arranging their indices in a hypercube and regressing the response on
each axis-parallel line, scans the survivors for squared and
interaction terms, and then reports every low-dimensional submodel of
the resulting comprehensive model that a likelihood-ratio test cannot
distinguish from it.
"""

__version__ = "0.1.0"

from .datasets import Dataset, load_csv_dataset, save_csv_dataset
from .dgp import DgpConfig, GeneratedData, dgp
from .exploratory import (
    AutoKeepAll,
    PlotData,
    ScriptedDecisionSource,
    TermCandidate,
    TerminalDecisionSource,
    exploratory_phase,
    interaction_plot_data,
    interaction_scan,
    squared_term_scan,
)
from .fitters import (
    BINOMIAL,
    COX,
    GAUSSIAN,
    Family,
    FitResult,
    fit_cox,
    fit_least_squares,
    fit_logistic,
    lrt_pvalue,
)
from .distributions import tail_probability
from .harness import Cell, StudyConfig, StudyReport, run_replication, run_study
from .lasso import LassoPath, lasso_path, undertuned_select
from .models import (
    ConfidenceSet,
    ModelSpec,
    close_under_main_effects,
    enumerate_candidate_models,
    model_selection_phase,
    substitution_table,
    variable_frequencies,
)
from .reduction import (
    DecisionRule,
    HypercubeArrangement,
    ReductionTrace,
    arrange_hypercube,
    initial_dimension,
    reduction_phase,
    run_stage,
    traversal_lines,
)

__all__ = [
    "__version__",
    "Dataset", "load_csv_dataset", "save_csv_dataset",
    "DgpConfig", "GeneratedData", "dgp",
    "AutoKeepAll", "PlotData", "ScriptedDecisionSource", "TermCandidate",
    "TerminalDecisionSource", "exploratory_phase", "interaction_plot_data",
    "interaction_scan", "squared_term_scan",
    "BINOMIAL", "COX", "GAUSSIAN", "Family", "FitResult",
    "fit_cox", "fit_least_squares", "fit_logistic", "lrt_pvalue",
    "tail_probability",
    "Cell", "StudyConfig", "StudyReport", "run_replication", "run_study",
    "LassoPath", "lasso_path", "undertuned_select",
    "ConfidenceSet", "ModelSpec", "close_under_main_effects",
    "enumerate_candidate_models", "model_selection_phase",
    "substitution_table", "variable_frequencies",
    "DecisionRule", "HypercubeArrangement", "ReductionTrace",
    "arrange_hypercube", "initial_dimension", "reduction_phase",
    "run_stage", "traversal_lines",
]
