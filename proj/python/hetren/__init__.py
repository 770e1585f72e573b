"""Renormalisation laboratory for a heterodimensional tangency between saddle-foci.

The heavy lifting lives in the compiled ``_hetren`` module; this wrapper adds
dict-based convenience around the JSON-string interfaces.
"""

import json as _json

from _hetren import (  # noqa: F401
    HetrenError,
    adapted_arguments,
    bump1,
    bump3,
    check_quasi_transverse,
    check_spectral,
    check_tangency,
    derived_limit_params,
    eval_e,
    eval_g,
    find_sojourn,
    in_blender_region,
    iterate_e,
    iterate_g,
    renorm_point,
    sigma_interval,
    theta_conjugacy,
    trig_sequences,
    validate_config,
)
import _hetren as _core

__all__ = [
    "HetrenError",
    "adapted_arguments",
    "build_schedule",
    "bump1",
    "bump3",
    "certify",
    "check_quasi_transverse",
    "check_spectral",
    "check_tangency",
    "convergence_report",
    "default_config",
    "derived_limit_params",
    "eval_e",
    "eval_g",
    "find_sojourn",
    "gamma_xi",
    "in_blender_region",
    "iterate_e",
    "iterate_g",
    "load_config",
    "renorm_point",
    "sigma_interval",
    "sigma_vector",
    "solve_targets",
    "tau_of",
    "theta_conjugacy",
    "trig_sequences",
    "validate_config",
]


def default_config():
    """The worked model configuration as a dict."""
    return _json.loads(_core.default_config())


def load_config(path):
    return _json.loads(_core.load_config(str(path)))


def _as_json(config):
    return config if isinstance(config, str) else _json.dumps(config)


def tau_of(config):
    return _core.tau_of(_as_json(config))


def sigma_vector(config, xi):
    return _core.sigma_vector(_as_json(config), xi)


def gamma_xi(config, xi):
    return _core.gamma_xi(_as_json(config), xi)


def solve_targets(xi, kappa0, eta0, config, allow_nudge=False):
    solved, nudged = _core.solve_targets(xi, kappa0, eta0, _as_json(config), allow_nudge)
    return _json.loads(solved), nudged


def build_schedule(config, xi, count, **kwargs):
    return _json.loads(_core.build_schedule(_as_json(config), xi, count, **kwargs))


def convergence_report(config, xi, mu, **kwargs):
    return _json.loads(_core.convergence_report(_as_json(config), xi, mu, **kwargs))


def certify(config, xi, mu, eps, **kwargs):
    report, exit_code = _core.certify(_as_json(config), xi, mu, eps, **kwargs)
    return _json.loads(report), exit_code
