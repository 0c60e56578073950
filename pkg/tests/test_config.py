"""Experiment configuration parsing and validation."""

import pytest

from batchal.config import (ConfigError, ExperimentConfig, parse_config,
                            parse_config_text, with_overrides)
from batchal.strategies import Strategy

FULL = """
[experiment]
oracle = myring_volume
pool_size = 500
repetitions = 2
base_seed = 99
out_dir = out/run1
workers = 2

[al]
M = 30
T = 4
b = 6
aa = 0.1
warm_start = false
inner_split = 0.8

[student]
hidden = 32, 32
activation = tanh
learning_rate = 0.01
epochs = 50
batch_size = 16
optimizer = sgd

[teacher]
hidden = 8
epochs = 40

[space]
diameter = 60mm, 180mm
nose_index = 1.5, 4.0

[strategy.baseline]
strategy = random

[strategy.cluster]
strategy = dbal
beta = 5

[strategy.guided]
strategy = eps_hqs
eps = 0.25
threshold = 0.6
"""


class TestDefaults:
    def test_empty_text_gives_full_defaults(self):
        cfg = parse_config_text("")
        assert cfg.oracle == "vessel_max_stress"
        assert cfg.pool_size == 3000
        assert cfg.repetitions == 3
        assert cfg.base_seed == 0
        assert cfg.al.warmup == 100
        assert cfg.al.iterations == 25
        assert cfg.al.batch == 10
        assert cfg.al.aa == 0.05
        assert cfg.al.warm_start is True
        assert [s.label for s in cfg.strategies] == ["random", "eps_hqs_greedy"]
        assert Strategy("eps_hqs", eps="greedy").threshold == 0.5

    def test_whitespace_only_is_empty(self):
        assert parse_config_text("\n\n") == parse_config_text("")


class TestFullConfig:
    def test_every_section_lands(self):
        cfg = parse_config_text(FULL)
        assert cfg.oracle == "myring_volume"
        assert cfg.pool_size == 500
        assert cfg.repetitions == 2
        assert cfg.base_seed == 99
        assert cfg.out_dir == "out/run1"
        assert cfg.workers == 2
        assert cfg.al.warmup == 30
        assert cfg.al.iterations == 4
        assert cfg.al.batch == 6
        assert cfg.al.aa == 0.1
        assert cfg.al.warm_start is False
        assert cfg.al.inner_split == 0.8
        assert cfg.student == {"hidden_layer_sizes": (32, 32), "activation": "tanh",
                               "learning_rate": 0.01, "epochs": 50,
                               "batch_size": 16, "optimizer": "sgd"}
        assert cfg.teacher == {"hidden_layer_sizes": (8,), "epochs": 40}
        assert ("diameter", 0.060, 0.180) in cfg.space_overrides
        assert ("nose_index", 1.5, 4.0) in cfg.space_overrides
        labels = [s.label for s in cfg.strategies]
        assert labels == ["random", "dbal5", "eps_hqs_0.25"]
        assert cfg.strategies[2].threshold == 0.6

    def test_parse_config_reads_files(self, tmp_path):
        path = tmp_path / "exp.ini"
        path.write_text(FULL)
        assert parse_config(str(path)) == parse_config_text(FULL)

    def test_missing_file_is_io_error(self, tmp_path):
        with pytest.raises(OSError):
            parse_config(str(tmp_path / "nope.ini"))


class TestRejections:
    def test_unknown_key_names_the_token(self):
        with pytest.raises(ConfigError, match="pool_sz"):
            parse_config_text("[experiment]\npool_sz = 10\n")

    def test_unknown_section_names_the_token(self):
        with pytest.raises(ConfigError, match="mystery"):
            parse_config_text("[mystery]\nx = 1\n")

    def test_unknown_oracle_names_the_token(self):
        with pytest.raises(ConfigError, match="warp_drive"):
            parse_config_text("[experiment]\noracle = warp_drive\n")

    def test_unknown_strategy_names_the_token(self):
        with pytest.raises(ConfigError, match="gradient_hunt"):
            parse_config_text("[strategy.x]\nstrategy = gradient_hunt\n")

    def test_over_budget_batch_names_the_invariant(self):
        with pytest.raises(ConfigError, match="pool_size"):
            parse_config_text("[al]\nb = 5000\n")

    def test_non_numeric_value(self):
        with pytest.raises(ConfigError, match="pool_size"):
            parse_config_text("[experiment]\npool_size = many\n")

    def test_eps_out_of_range(self):
        with pytest.raises(ConfigError):
            parse_config_text("[strategy.x]\nstrategy = eps_hqs\neps = 1.5\n")

    def test_eps_unknown_schedule_word(self):
        with pytest.raises(ConfigError):
            parse_config_text("[strategy.x]\nstrategy = eps_hqs\neps = linear\n")

    def test_threshold_out_of_range(self):
        with pytest.raises(ConfigError):
            parse_config_text("[strategy.x]\nstrategy = eps_hqs\nthreshold = 0\n")

    def test_beta_below_one(self):
        with pytest.raises(ConfigError):
            parse_config_text("[strategy.x]\nstrategy = dbal\nbeta = 0.5\n")

    def test_strategy_section_needs_kind(self):
        with pytest.raises(ConfigError, match="strategy"):
            parse_config_text("[strategy.x]\nbeta = 5\n")

    def test_colliding_strategy_labels(self):
        text = ("[strategy.a]\nstrategy = random\n"
                "[strategy.b]\nstrategy = random\n")
        with pytest.raises(ConfigError, match="collide"):
            parse_config_text(text)

    def test_bad_space_override_shape(self):
        with pytest.raises(ConfigError):
            parse_config_text("[space]\ndepth = 100\n")

    def test_zero_repetitions(self):
        with pytest.raises(ConfigError):
            parse_config_text("[experiment]\nrepetitions = 0\n")

    def test_direct_construction_checks_budget(self):
        with pytest.raises(ConfigError, match="pool_size"):
            ExperimentConfig(pool_size=300)


class TestOverrides:
    def test_cli_overrides_apply(self):
        cfg = parse_config_text("")
        out = with_overrides(cfg, out_dir="elsewhere", base_seed=5)
        assert out.out_dir == "elsewhere"
        assert out.base_seed == 5
        assert with_overrides(cfg) == cfg

    def test_millimeter_conversion(self):
        cfg = parse_config_text("[space]\ndepth = 150, 4000\n"
                                "[experiment]\noracle = vessel_max_stress\n")
        assert ("depth", 150.0, 4000.0) in cfg.space_overrides
        cfg = parse_config_text("[space]\nthickness = 5mm, 50mm\n")
        assert ("thickness", 0.005, 0.050) in cfg.space_overrides
