"""Experiment configuration: INI-style text with strict key checking.

An empty file is a valid experiment (every knob has a default); unknown
sections or keys are rejected with the offending token so typos cannot
silently fall back to defaults.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace

from .learner import ALConfig
from .oracles import ORACLE_NAMES
from .strategies import STRATEGY_NAMES, Strategy


class ConfigError(ValueError):
    """Raised for malformed or inconsistent experiment configuration."""


_EXPERIMENT_KEYS = ("oracle", "pool_size", "repetitions", "base_seed",
                    "out_dir", "workers")
_AL_KEYS = ("m", "t", "b", "aa", "warm_start", "inner_split")
_NET_KEYS = ("hidden", "activation", "learning_rate", "epochs", "batch_size",
             "optimizer")
_STRATEGY_KEYS = ("strategy", "beta", "eps", "threshold")

_DEFAULT_STRATEGIES = (Strategy("random"), Strategy("eps_hqs", eps="greedy"))


@dataclass(frozen=True)
class ExperimentConfig:
    oracle: str = "vessel_max_stress"
    pool_size: int = 3000
    repetitions: int = 3
    base_seed: int = 0
    out_dir: str = "results"
    workers: int | None = None
    al: ALConfig = field(default_factory=ALConfig)
    strategies: tuple[Strategy, ...] = _DEFAULT_STRATEGIES
    student: dict = field(default_factory=dict)
    teacher: dict = field(default_factory=dict)
    space_overrides: tuple[tuple[str, float, float], ...] = ()

    def __post_init__(self):
        if self.oracle not in ORACLE_NAMES:
            raise ConfigError("unknown oracle %r (have %r)"
                              % (self.oracle, list(ORACLE_NAMES)))
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if self.workers is not None and self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not self.strategies:
            raise ConfigError("at least one strategy is required")
        if self.pool_size < self.al.total_budget + 1:
            raise ConfigError(
                "pool_size %d cannot fund the label budget M + T*b = %d plus "
                "a nonempty test leftover" % (self.pool_size, self.al.total_budget))


def _int(raw: str, key: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError("key %r needs an integer, got %r" % (key, raw)) from None


def _float(raw: str, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError("key %r needs a number, got %r" % (key, raw)) from None


def _bool(raw: str, key: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ConfigError("key %r needs a boolean, got %r" % (key, raw))


def _length(raw: str, key: str) -> float:
    """Parse a length; a trailing mm/m unit is converted to meters."""
    token = raw.strip().lower()
    scale = 1.0
    if token.endswith("mm"):
        token, scale = token[:-2], 1e-3
    elif token.endswith("m"):
        token = token[:-1]
    return _float(token.strip(), key) * scale


def _check_keys(section: str, got, allowed) -> None:
    for key in got:
        if key not in allowed:
            raise ConfigError("unknown key %r in section [%s]" % (key, section))


def _parse_strategy(section: str, items: dict) -> Strategy:
    _check_keys(section, items, _STRATEGY_KEYS)
    name = items.get("strategy")
    if name is None:
        raise ConfigError("section [%s] is missing the 'strategy' key" % section)
    name = name.strip()
    if name not in STRATEGY_NAMES:
        raise ConfigError("unknown strategy %r in section [%s] (have %r)"
                          % (name, section, list(STRATEGY_NAMES)))
    kwargs = {}
    if "beta" in items:
        kwargs["beta"] = _float(items["beta"], "beta")
        if kwargs["beta"] < 1:
            raise ConfigError("beta must be >= 1, got %g" % kwargs["beta"])
    if "eps" in items:
        raw = items["eps"].strip().lower()
        if raw == "greedy":
            kwargs["eps"] = "greedy"
        else:
            val = _float(raw, "eps")
            if not (0 <= val <= 1):
                raise ConfigError("eps must lie in [0, 1] or be 'greedy', got %r"
                                  % items["eps"])
            kwargs["eps"] = val
    if "threshold" in items:
        kwargs["threshold"] = _float(items["threshold"], "threshold")
        if not (0 < kwargs["threshold"] < 1):
            raise ConfigError("threshold must lie in (0, 1)")
    return Strategy(name, **kwargs)


def _parse_net(section: str, items: dict) -> dict:
    _check_keys(section, items, _NET_KEYS)
    out = {}
    if "hidden" in items:
        sizes = [s for s in items["hidden"].replace(",", " ").split() if s]
        out["hidden_layer_sizes"] = tuple(_int(s, "hidden") for s in sizes)
    if "activation" in items:
        out["activation"] = items["activation"].strip()
    if "learning_rate" in items:
        out["learning_rate"] = _float(items["learning_rate"], "learning_rate")
    if "epochs" in items:
        out["epochs"] = _int(items["epochs"], "epochs")
    if "batch_size" in items:
        out["batch_size"] = _int(items["batch_size"], "batch_size")
    if "optimizer" in items:
        out["optimizer"] = items["optimizer"].strip()
    return out


def parse_config_text(text: str) -> ExperimentConfig:
    """Build an ExperimentConfig from configuration text."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("cannot parse configuration: %s" % exc) from None

    kwargs: dict = {}
    al_kwargs: dict = {}
    strategies: list[Strategy] = []
    overrides: list[tuple[str, float, float]] = []

    for section in parser.sections():
        items = dict(parser.items(section))
        if section == "experiment":
            _check_keys(section, items, _EXPERIMENT_KEYS)
            if "oracle" in items:
                kwargs["oracle"] = items["oracle"].strip()
            if "pool_size" in items:
                kwargs["pool_size"] = _int(items["pool_size"], "pool_size")
            if "repetitions" in items:
                kwargs["repetitions"] = _int(items["repetitions"], "repetitions")
            if "base_seed" in items:
                kwargs["base_seed"] = _int(items["base_seed"], "base_seed")
            if "out_dir" in items:
                kwargs["out_dir"] = items["out_dir"].strip()
            if "workers" in items:
                kwargs["workers"] = _int(items["workers"], "workers")
        elif section == "al":
            _check_keys(section, items, _AL_KEYS)
            if "m" in items:
                al_kwargs["warmup"] = _int(items["m"], "M")
            if "t" in items:
                al_kwargs["iterations"] = _int(items["t"], "T")
            if "b" in items:
                al_kwargs["batch"] = _int(items["b"], "b")
            if "aa" in items:
                al_kwargs["aa"] = _float(items["aa"], "aa")
            if "warm_start" in items:
                al_kwargs["warm_start"] = _bool(items["warm_start"], "warm_start")
            if "inner_split" in items:
                al_kwargs["inner_split"] = _float(items["inner_split"], "inner_split")
        elif section == "student":
            kwargs["student"] = _parse_net(section, items)
        elif section == "teacher":
            kwargs["teacher"] = _parse_net(section, items)
        elif section == "space":
            for name, raw in items.items():
                parts = raw.split(",")
                if len(parts) != 2:
                    raise ConfigError("space override %r needs 'lo, hi', got %r"
                                      % (name, raw))
                overrides.append((name, _length(parts[0], name),
                                  _length(parts[1], name)))
        elif section == "strategy" or section.startswith("strategy."):
            strategies.append(_parse_strategy(section, items))
        else:
            raise ConfigError("unknown section [%s]" % section)

    try:
        al = ALConfig(**al_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if strategies:
        kwargs["strategies"] = tuple(strategies)
    labels = [s.label for s in kwargs.get("strategies", _DEFAULT_STRATEGIES)]
    if len(set(labels)) != len(labels):
        raise ConfigError("strategy labels collide: %r" % labels)
    if overrides:
        kwargs["space_overrides"] = tuple(overrides)
    return ExperimentConfig(al=al, **kwargs)


def parse_config(path: str) -> ExperimentConfig:
    """Read and validate the configuration file at ``path``."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def with_overrides(cfg: ExperimentConfig, out_dir: str | None = None,
                   base_seed: int | None = None) -> ExperimentConfig:
    """Apply command line overrides on top of a parsed configuration."""
    if out_dir is not None:
        cfg = replace(cfg, out_dir=out_dir)
    if base_seed is not None:
        cfg = replace(cfg, base_seed=base_seed)
    return cfg
