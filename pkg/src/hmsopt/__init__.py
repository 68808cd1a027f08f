"""hmsopt: Human Mental Search optimizers (HMS and the multi-cluster
selection variant MCS-HMS), a PSO baseline, a classical benchmark suite
with shift/rotation wrappers, and the statistical comparison pipeline
(rankings, pairwise counts, Wilcoxon signed-rank test) with a CLI harness.
"""

from .baselines import PsoConfig, run_pso
from .benchmarks import base_function, make_objective, make_suite, random_rotation
from .clustering import ClusterAssignment, cluster_mean_values, full_kmeans, one_step_kmeans
from .core import (
    Bid,
    BudgetExhausted,
    EvalBudget,
    Objective,
    RngStream,
    RunConfig,
    RunResult,
    clamp,
    derive_seed,
    derive_stream,
    evaluate_counted,
    stream_from_seed,
)
from .hms import HmsState, run_hms
from .levy import LevyParams, gamma_fn, levy_vector, mental_step, sigma_u
from .mcs import ClusterMemory, build_memory, run_mcs_hms, select_target
from .stats import (
    RankSummary,
    ResultTable,
    WilcoxonResult,
    mean_error,
    pairwise_compare,
    rank_row,
    rank_summary,
    wilcoxon_signed_rank,
)

__version__ = "0.1.0"

__all__ = [
    "Bid",
    "BudgetExhausted",
    "ClusterAssignment",
    "ClusterMemory",
    "EvalBudget",
    "HmsState",
    "LevyParams",
    "Objective",
    "PsoConfig",
    "RankSummary",
    "ResultTable",
    "RngStream",
    "RunConfig",
    "RunResult",
    "WilcoxonResult",
    "base_function",
    "build_memory",
    "clamp",
    "cluster_mean_values",
    "derive_seed",
    "derive_stream",
    "evaluate_counted",
    "full_kmeans",
    "gamma_fn",
    "levy_vector",
    "make_objective",
    "make_suite",
    "mean_error",
    "mental_step",
    "one_step_kmeans",
    "pairwise_compare",
    "random_rotation",
    "rank_row",
    "rank_summary",
    "run_hms",
    "run_mcs_hms",
    "run_pso",
    "select_target",
    "sigma_u",
    "stream_from_seed",
    "wilcoxon_signed_rank",
]
