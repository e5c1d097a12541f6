"""Python access to the fairsim core.

Configs are plain dicts using the same keys as the CLI's JSON files; results
come back as dicts.
"""

import json

from . import _fairsim
from ._fairsim import ConfigError, fairness_indicator, tau1

__version__ = _fairsim.__version__
__all__ = ["ConfigError", "bandit", "default_config", "fairness_indicator", "simulate", "sweep", "tau1"]


def default_config():
    return json.loads(_fairsim.default_config())


def simulate(config=None, **overrides):
    cfg = dict(config or {})
    cfg.update(overrides)
    return json.loads(_fairsim.simulate(json.dumps(cfg)))


def sweep(config, workers=1):
    return json.loads(_fairsim.sweep(json.dumps(config), workers))


def bandit(config=None, workers=1):
    return json.loads(_fairsim.bandit(json.dumps(config or {}), workers))
