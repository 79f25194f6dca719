"""Shadow curves of segments on implicit hypersurfaces."""

import json

from ._core import (
    CylinderScenario,
    ShadowgeoError,
    Surface,
    build_shadow,
    clairaut_invariants,
    closest_point,
    contraction_audit,
    integrate_geodesic,
    theorem1_audit,
)
from . import _core

__all__ = [
    "CylinderScenario",
    "ShadowgeoError",
    "Surface",
    "build_shadow",
    "clairaut_invariants",
    "closest_point",
    "contraction_audit",
    "generate_suite",
    "integrate_geodesic",
    "make_surface",
    "run_scenario",
    "theorem1_audit",
]


def make_surface(spec):
    """Surface from a dict (or JSON text) in the scenario surface format."""
    return _core.make_surface(spec if isinstance(spec, str) else json.dumps(spec))


def run_scenario(path, out=""):
    """Runs a scenario file; returns (exit_code, summary dict)."""
    code, summary = _core.run_scenario(str(path), str(out))
    return code, json.loads(summary)


def generate_suite(kind, count, seed, dim=3):
    """Deterministic scenario documents as dicts."""
    return [json.loads(d) for d in _core.generate_suite(kind, count, seed, dim)]
