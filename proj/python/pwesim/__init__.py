"""Python bindings for the pwesim RIS wavefront routing simulator."""

import json

from . import _core
from ._core import (
    ConfigError,
    DegenerateData,
    Graph,
    Scene,
    SceneError,
    deviation_angle,
    digamma,
    fit_gamma,
    fit_rayleigh,
    gamma_pdf,
    histogram,
    kld,
    rayleigh_pdf,
    sample_wavefront,
)

__all__ = [
    "ConfigError",
    "DegenerateData",
    "Graph",
    "Scene",
    "SceneError",
    "deviation_angle",
    "digamma",
    "fit_gamma",
    "fit_rayleigh",
    "fit_report",
    "gamma_pdf",
    "get_routes",
    "histogram",
    "kld",
    "make_scene",
    "rayleigh_pdf",
    "run_cell",
    "run_sweep",
    "sample_wavefront",
]


def make_scene(d_r, m_side, config=None):
    return _core.make_scene(d_r, m_side, json.dumps(config or {}))


def get_routes(scene, graph, doas):
    """Route one wavefront; returns {"routes": [...], "failures": [...]}."""
    return json.loads(_core.get_routes(scene, graph, [tuple(d) for d in doas]))


def fit_report(samples, bins=10):
    return json.loads(_core.fit_report(list(samples), bins))


def run_cell(d_r, m_side, config=None, threads=1):
    """Pooled deviations (degrees) and the fit report for one sweep cell."""
    samples, report = _core.run_cell(json.dumps(config or {}), d_r, m_side, threads)
    return samples, json.loads(report)


def run_sweep(config=None, threads=1):
    """CSV documents keyed by file name, byte-identical to `pwesim sweep`."""
    return _core.run_sweep(json.dumps(config or {}), threads)
