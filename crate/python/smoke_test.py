"""Smoke test for the emcurve Python module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`
or `pip install crates/python`, then run `python python/smoke_test.py`.
"""

import math
import os
import tempfile

import emcurve


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    t = emcurve.Triangle.equilateral()
    centre = (0.0, math.sqrt(3) / 3)
    assert close(t.gap(*centre), 0.0, 1e-12)
    assert close(t.gap(0.0, math.sqrt(3)), 4 - 2 * math.sqrt(3), 1e-12)
    d = t.distances(*centre)
    assert close(d["R_A"], 2 * math.sqrt(3) / 3, 1e-12)
    assert t.corner_membership(0.0, math.sqrt(3))["E"]

    labels = dict((label, (x, y)) for label, x, y in t.intersections())
    assert close(labels["P1"][0], -1.61966, 1e-5)
    assert close(labels["P5"][1], 2.26869, 1e-5)

    coeffs = t.octic("+,+,+")
    assert max(i + j for i, j in coeffs) == 8
    _, rel = t.octic_eval(*centre)
    assert rel < 1e-9

    (branch,) = t.trace(0.02, domain=(-3.0, 3.0, -3.0, 3.0))
    assert branch.closed and len(branch) > 100

    eps = t.epsilon(tol=1e-6)
    assert close(eps, emcurve.EPSILON_0, 1e-6), eps
    assert close(emcurve.epsilon0(1e-6), emcurve.EPSILON_0, 1e-6)
    assert close(t.epsilon_pixel(0.005, domain=(-3.0, 3.0, -3.0, 3.0)), eps, 0.02)

    flat = emcurve.Triangle(0, 1, -100, 0, 100, 0)
    try:
        flat.epsilon(domain=(-1000.0, 1000.0, -1000.0, 1000.0))
    except emcurve.OpenCurveError:
        pass
    else:
        raise AssertionError("flat triangle should have an open curve")

    try:
        emcurve.Triangle(0, 3, 0, 0, 0, 5)
    except ValueError:
        pass
    else:
        raise AssertionError("collinear vertices must be rejected")

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "field.csv")
        rows = emcurve.sweep_field("-50:50:50", "150:200:50", pixel_step=4.0, out=path)
        assert len(rows) == 6
        assert emcurve.read_field(path) == rows
        assert emcurve.violations(rows) == []

    print("emcurve smoke test passed")


if __name__ == "__main__":
    main()
