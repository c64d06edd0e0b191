"""Seldonian classification with high-confidence delayed-impact
fairness guarantees.

Given logged decisions of a deployed stochastic classifier and the
delayed impact each decision later had, the trainer returns either a
new classifier certified (with probability at least 1 - delta per
constraint) to satisfy user-specified delayed-impact constraints, or
the explicit answer "No Solution Found".
"""

from .bounds import (BoundRequest, Hoeffding, TTest, hoeffding_upper,
                     inflated_upper, t_quantile, ttest_upper, upper_bound)
from .candidate import (CostConfig, SearchConfig, cost, select_candidate)
from .classifier import (StochasticLinearClassifier, accuracy, expected_loss,
                         fit_behavior_model, fit_softmax, nll_loss,
                         predict_proba, predict_proba_batch, sample_prediction)
from .data import (Always, And, ConditionalPredicate, Dataset, GroupEquals,
                   LabelEquals, LabeledExample, PartitionError,
                   evaluate_predicate, read_csv, stratified_partition,
                   write_csv)
from .driver import ElfConfig, run_elf
from .estimation import (ACCURACY, DIConstraint, GEstimateVector, IMPACT,
                         accuracy_estimates, g_estimates, importance_weight,
                         true_g_oracle)
from .harness import (SweepConfig, SweepRecord, aggregate, run_sweep,
                      run_trial, trial_seed)
from .safety import ConstraintReport, ElfOutcome, fairness_test
from .world import (WorldConfig, compute_tolerances, draw_delayed_impact,
                    generate_behavior_dataset)

__all__ = [
    "ACCURACY", "Always", "And", "BoundRequest", "ConditionalPredicate",
    "ConstraintReport", "CostConfig", "DIConstraint", "Dataset", "ElfConfig",
    "ElfOutcome", "GEstimateVector", "GroupEquals", "Hoeffding", "IMPACT",
    "LabelEquals", "LabeledExample", "PartitionError", "SearchConfig",
    "StochasticLinearClassifier", "SweepConfig", "SweepRecord", "TTest",
    "WorldConfig", "accuracy", "accuracy_estimates", "aggregate",
    "compute_tolerances", "cost", "draw_delayed_impact", "evaluate_predicate",
    "expected_loss", "fairness_test", "fit_behavior_model", "fit_softmax",
    "g_estimates", "generate_behavior_dataset", "hoeffding_upper",
    "importance_weight", "inflated_upper", "nll_loss", "predict_proba",
    "predict_proba_batch", "read_csv", "run_elf", "run_sweep", "run_trial",
    "sample_prediction", "select_candidate", "stratified_partition",
    "t_quantile", "trial_seed", "true_g_oracle", "ttest_upper",
    "upper_bound", "write_csv",
]
