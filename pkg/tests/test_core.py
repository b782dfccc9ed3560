"""Units, ramp, dispersion and bracket basics."""

import numpy as np
import pytest

from becback.core import (NambuSpinor, PhysicalParams, chemical_potential,
                          coupling_fraction, dispersion, symplectic_bracket)


def test_coupling_fraction_branches():
    assert coupling_fraction(-1.0, 2.0) == 0.0
    assert coupling_fraction(1.0, 2.0) == 0.5
    assert coupling_fraction(3.0, 2.0) == 1.0
    assert coupling_fraction(2.0, 2.0) == 1.0


def test_coupling_fraction_sudden_limit():
    assert coupling_fraction(-1e-9, 0.0) == 0.0
    assert coupling_fraction(0.0, 0.0) == 1.0
    assert coupling_fraction(0.5, 0.0) == 1.0


def test_coupling_fraction_monotone_continuous():
    ts = np.linspace(-1.0, 4.0, 400)
    vals = [coupling_fraction(t, 2.5) for t in ts]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert max(abs(vals[i + 1] - vals[i]) for i in range(len(ts) - 1)) < 0.01
    assert all(coupling_fraction(t, 2.5) == 1.0 for t in (2.5, 3.0, 100.0))


def test_coupling_fraction_rejects_negative_tau():
    with pytest.raises(ValueError):
        coupling_fraction(0.0, -1.0)


def test_dispersion_values():
    assert dispersion(0, 7.3) == (0.0, 0.0, 0.0)
    k, omega, big = dispersion(1, 2 * np.pi)
    assert k == pytest.approx(1.0, rel=1e-15)
    assert omega == pytest.approx(0.5, rel=1e-15)
    assert big == pytest.approx(1.118033988749895, rel=1e-15)


def test_dispersion_parity_and_identity():
    for n in (1, 2, 17, 300):
        kp, wp, bp = dispersion(n, 13.0)
        km, wm, bm = dispersion(-n, 13.0)
        assert km == -kp and wm == wp and bm == bp
        # Omega^2 = omega^2 + 2 omega at machine precision
        assert bp**2 == pytest.approx(wp**2 + 2 * wp, rel=4e-16)
    with pytest.raises(ValueError):
        dispersion(1, 0.0)


def test_chemical_potential():
    p = PhysicalParams(ell=10.0, tau_s=2.0)
    assert chemical_potential(-3.0, p) == 0.0
    assert chemical_potential(5.0, p) == 1.0
    p2 = PhysicalParams(ell=10.0, tau_s=2.0, v_ext=0.3)
    assert chemical_potential(1.0, p2) == pytest.approx(0.8, abs=1e-15)


def test_symplectic_bracket_examples():
    assert symplectic_bracket(NambuSpinor(1, 0), NambuSpinor(0, 1)) == 1
    a = NambuSpinor(0.3 + 0.1j, -0.7j)
    assert symplectic_bracket(a, a) == 0
    assert symplectic_bracket(NambuSpinor(1, 1), NambuSpinor(1, -1)) == -2


def test_symplectic_bracket_antisymmetry():
    rng = np.random.default_rng(7)
    for _ in range(50):
        a = NambuSpinor(*(rng.normal(size=2) + 1j * rng.normal(size=2)))
        b = NambuSpinor(*(rng.normal(size=2) + 1j * rng.normal(size=2)))
        assert symplectic_bracket(a, b) == -symplectic_bracket(b, a)


def test_params_validation():
    with pytest.raises(ValueError):
        PhysicalParams(ell=0.0)
    with pytest.raises(ValueError):
        PhysicalParams(ell=10.0, tau_s=-0.1)
    with pytest.raises(ValueError):
        PhysicalParams(ell=10.0, n_max=0)
    with pytest.raises(ValueError):
        PhysicalParams(ell=10.0, rel_tol=0.0)


def test_mode_index_derived():
    from becback.core import ModeIndex
    m = ModeIndex(n=-3, ell=6.0)
    assert m.k == pytest.approx(-np.pi, rel=1e-15)
    assert m.omega == pytest.approx(np.pi**2 / 2, rel=1e-15)
    assert m.big_omega > 0
    assert ModeIndex(n=0, ell=6.0).big_omega == 0.0
