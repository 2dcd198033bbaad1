"""Python access to the mocsim simulator core."""

import json as _json
from pathlib import Path as _Path

from ._mocsim import (  # noqa: F401
    ConfigError,
    ContractViolation,
    DomainError,
    Error,
    ParseError,
    SchemaError,
    __version__,
    harmonic,
    jitter_from_window,
    mttf,
    parallel_reliability,
    plt_model_ms,
    roundtrip_csv,
    synthetic_csv,
)
from . import _mocsim


def redundancy_curves(lambda_grid, n_max=4):
    """Rows of (lambda, n, reliability, mttf_times_lambda)."""
    table = _json.loads(_mocsim.redundancy_curves(list(lambda_grid), n_max))
    return [dict(zip(table["columns"], row)) for row in table["rows"]]


def _config_text(config):
    if isinstance(config, dict):
        return _json.dumps(config), ""
    path = _Path(config)
    return path.read_text(), str(path.parent)


def simulate(config):
    """Runs a scenario given as a dict or a path to a JSON config."""
    text, base = _config_text(config)
    return _json.loads(_mocsim.simulate_json(text, base))


def reactive_table(config):
    """Reactive switching table only."""
    text, base = _config_text(config)
    return _json.loads(_mocsim.oracle_json(text, base))
