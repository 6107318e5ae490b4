import math

import numpy as np
import pytest

import cchlab


def test_roots_on_axis():
    c2 = -0.1
    s = 2 * math.sqrt(-c2)
    expect = [-math.sqrt(1 + s), -math.sqrt(1 - s), math.sqrt(1 - s), math.sqrt(1 + s)]
    assert np.allclose(cchlab.quartic_roots(0.0, c2), expect, atol=1e-12)
    assert cchlab.classify_admissible(0.0, c2) == "Admissible"


def test_field_roundtrip_and_derivative():
    g = cchlab.Grid(6.0, 64)
    q = 2 * math.pi / 6.0
    f = cchlab.Field(g, np.sin(q * g.x))
    d2 = cchlab.derivative(f, 2)
    assert np.allclose(d2.values, -q * q * np.sin(q * g.x), atol=1e-12)
    with pytest.raises(ValueError):
        cchlab.Field(g, np.zeros(10))


def test_families_and_spectrum():
    fams = cchlab.enumerate_families(10.0)
    assert [p.family_id for p in fams] == [0, 1]
    u = fams[1].field
    assert cchlab.steady_residual(u) < 1e-10
    rep = cchlab.spectrum(u)
    assert rep.kernel_dim == 1
    assert np.all(np.isfinite(rep.eigenvalues))


def test_short_evolution_conserves_mean():
    g = cchlab.Grid(10.0, 64)
    u0 = cchlab.random_initial_state(g, 3)
    rec = cchlab.evolve(u0, 0.05, 0.5, 1e-3, 50)
    assert rec.times[-1] == pytest.approx(0.5)
    assert rec.mean_drift < 1e-12
    assert len(rec.F) == len(rec.times)


def test_boundary_criterion():
    passed, line = cchlab.run_criterion(1)
    assert passed and line.startswith("PASS")
