"""Python bindings for the bobw C++ core."""

import json

from ._bobw import (
    ConfigError,
    __version__,
    config_hash,
    entropy,
    ftrl_argmin_numeric,
    gibbs,
    mgr,
    mgr_expectation,
    next_beta,
    plotdata,
    run_config,
    simulate,
    verify,
)
from ._bobw import canonical_config as _canonical_config


def load_config(path):
    """Validated config with defaults applied, as a dict."""
    return json.loads(_canonical_config(str(path)))


__all__ = [
    "ConfigError",
    "__version__",
    "config_hash",
    "entropy",
    "ftrl_argmin_numeric",
    "gibbs",
    "load_config",
    "mgr",
    "mgr_expectation",
    "next_beta",
    "plotdata",
    "run_config",
    "simulate",
    "verify",
]
