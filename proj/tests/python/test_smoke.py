import json
import math
import pathlib

import numpy as np
import pytest

import shadowgeo

ROOT = pathlib.Path(__file__).resolve().parents[2]


def sphere():
    return shadowgeo.make_surface({"kind": "sphere", "center": [0, 0, 0], "radius": 1.0})


def test_surface_evaluation():
    s = sphere()
    assert s.dimension == 3
    assert abs(s.value(np.array([1.0, 0.0, 0.0]))) < 1e-15
    assert s.on_surface(np.array([0.0, 0.0, 1.0]))
    assert s.gradient(np.array([0.0, 1.0, 0.0])).shape == (3,)


def test_closest_point_on_sphere():
    foot, dist, margin, clusters = shadowgeo.closest_point(sphere(), np.array([0.3, 0.4, 0.0]))
    assert np.allclose(foot, [0.6, 0.8, 0.0], atol=1e-10)
    assert abs(dist - 0.5) < 1e-12


def test_sphere_chord_is_geodesic():
    a = np.array([1.0, 0.0, 0.0])
    b = np.array([0.0, 1.0, 0.0])
    r = shadowgeo.theorem1_audit(sphere(), a, b, nodes=128)
    assert r["geodesic_verdict"] == "geodesic"
    assert r["coplanar_verdict"] == "coplanar"
    assert r["consistent"]
    pts = r["curve"]["points"]
    assert pts.shape == (129, 3)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-9)


def test_cylinder_counterexample_not_geodesic():
    cyl = shadowgeo.make_surface({"kind": "cylinder", "radius": 1.0, "axis": [0, 0, 1]})
    a = np.array([1.0, 0.0, 0.0])
    b = np.array([0.0, 1.0, 1.0])
    r = shadowgeo.theorem1_audit(cyl, a, b, nodes=128)
    assert r["geodesic_verdict"] == "not-geodesic"
    assert r["coplanar_verdict"] == "not-coplanar"


def test_cylinder_oracle():
    sc = shadowgeo.CylinderScenario(1.0, 1.0, 0.0, 1.0)
    assert np.allclose(sc.point_T(0.0), [-1.0, 0.0, 0.0])
    assert np.allclose(sc.point_T(1.0), [0.0, 1.0, 1.0], atol=1e-12)
    assert not sc.is_trivial_geodesic_case()
    assert math.isfinite(sc.alpha_prime(0.5))


def test_geodesic_integrator_equator():
    p0 = np.array([1.0, 0.0, 0.0])
    v0 = np.array([0.0, 1.0, 0.0])
    c = shadowgeo.integrate_geodesic(sphere(), p0, v0, math.pi / 2, 1e-2)
    assert np.allclose(c["points"][-1], [0.0, 1.0, 0.0], atol=1e-8)


def test_errors_carry_kind():
    with pytest.raises(shadowgeo.ShadowgeoError) as info:
        shadowgeo.theorem1_audit(sphere(), np.array([2.0, 0, 0]), np.array([0, 1.0, 0]))
    assert info.value.args[0] == "off-surface"


def test_run_scenario_file(tmp_path):
    code, summary = shadowgeo.run_scenario(ROOT / "scenarios" / "sphere-chord.json", tmp_path)
    assert code == 0
    assert summary["geodesic"]["verdict"] == "geodesic"
    assert (tmp_path / "sphere-chord" / "summary.json").exists()


def test_suite_is_deterministic():
    a = shadowgeo.generate_suite("sphere", 5, 11)
    b = shadowgeo.generate_suite("sphere", 5, 11)
    assert json.dumps(a) == json.dumps(b)
    assert a[4]["expected_inconclusive"]
