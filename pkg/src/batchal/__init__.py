"""Batch-mode active learning for regression surrogates.

A student network learns an expensive design-evaluation function from a
sampled pool; a teacher network learns where the student currently fails and
steers which pool points get labeled next.  Closed-form engineering oracles
(pressure-vessel wall stress, hull-of-revolution volume) are bundled so full
experiments run without external solvers.
"""

from .config import ConfigError, ExperimentConfig, parse_config, parse_config_text
from .harness import ResultRow, read_trace, run_experiment, write_csv
from .learner import ALConfig, Pool, RunTrace, Surrogate, al_run, evaluate_on_leftover
from .metrics import accuracy, aggregate_curves, failure_labels, fractional_error
from .nn import (MlpBinaryClassifier, MlpConfig, MlpParams, MlpRegressor,
                 TrainConfig, backward, bce_loss, forward, grad_check, init_mlp,
                 mae_loss, train)
from .oracles import (DesignSpace, Dimension, Oracle, VesselConstants,
                      crush_pressure, hull_volume, lame_stresses, make_oracle,
                      max_vessel_stress, myring_radius, sample_pool, von_mises)
from .strategies import (Strategy, WeightedKMeans, eps_schedule, select_dbal,
                         select_eps_hqs, select_random, select_top_b,
                         weighted_kmeans)

__version__ = "0.1.0"

__all__ = [
    "ALConfig", "ConfigError", "DesignSpace", "Dimension", "ExperimentConfig",
    "MlpBinaryClassifier", "MlpConfig", "MlpParams", "MlpRegressor", "Oracle",
    "Pool", "ResultRow", "RunTrace", "Strategy", "Surrogate", "TrainConfig",
    "VesselConstants", "WeightedKMeans", "accuracy", "aggregate_curves",
    "al_run", "backward", "bce_loss", "crush_pressure", "eps_schedule",
    "evaluate_on_leftover", "failure_labels", "forward", "fractional_error",
    "grad_check", "hull_volume", "init_mlp", "lame_stresses", "mae_loss",
    "make_oracle", "max_vessel_stress", "myring_radius", "parse_config",
    "parse_config_text", "read_trace", "run_experiment", "sample_pool",
    "select_dbal", "select_eps_hqs", "select_random", "select_top_b", "train",
    "von_mises", "weighted_kmeans", "write_csv",
]
