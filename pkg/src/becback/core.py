"""Dimensionless parameterization of the ring condensate and its quench.

Conventions used throughout the package:

- reduced units with xi_0 = 1 (healing length of the fully interacting
  condensate), Delta_mu = g_0 rho_0 = 1 (interaction energy per particle),
  hbar = 1 and m = 1.  All lengths are in units of xi_0, all times in units
  of 1/Delta_mu.
- the coupling is ramped linearly from 0 to g_0 over the switching window
  [0, tau_s]; tau_s = 0 is the sudden quench.
- the ring has circumference ell, periodic boundary conditions, and the
  condensate is homogeneous and at rest, so every observable is a function
  of time alone.  Spatial plane-wave factors exp(i k_n x) are never stored.

Everything in this module is a pure function of its arguments; the dataclasses
are immutable and safe to share between workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PhysicalParams",
    "NambuSpinor",
    "ModeIndex",
    "coupling_fraction",
    "dispersion",
    "chemical_potential",
    "symplectic_bracket",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Quench configuration in reduced units.

    ell     : ring circumference (units of xi_0), > 0
    tau_s   : switching duration (units of 1/Delta_mu), >= 0; 0 = sudden
    v_ext   : constant external potential V/Delta_mu
    n_max   : cutoff for the positive mode index of mode sums, >= 1
    rel_tol : relative tolerance target for adaptively truncated mode sums
    """

    ell: float
    tau_s: float = 0.0
    v_ext: float = 0.0
    n_max: int = 2000
    rel_tol: float = 1e-8

    def __post_init__(self):
        if not (self.ell > 0):
            raise ValueError(f"ring circumference must be positive, got {self.ell}")
        if not (self.tau_s >= 0):
            raise ValueError(f"switching time must be >= 0, got {self.tau_s}")
        if self.n_max < 1:
            raise ValueError(f"mode cutoff must be >= 1, got {self.n_max}")
        if not (self.rel_tol > 0):
            raise ValueError(f"relative tolerance must be positive, got {self.rel_tol}")


@dataclass(frozen=True)
class NambuSpinor:
    """Time part (u, v) of a doublet (psi, psi*) mode.

    For a normalized positive-norm mode of a ring of size ell the invariant
    |u|^2 - |v|^2 = 1/ell holds at all times.
    """

    u: complex
    v: complex

    def norm_density(self) -> float:
        """|u|^2 - |v|^2, the conserved norm density of the mode."""
        return abs(self.u) ** 2 - abs(self.v) ** 2


@dataclass(frozen=True)
class ModeIndex:
    """Ring mode label n with its derived kinematics.

    k = 2 pi n / ell, omega = k^2/2 (free dispersion) and
    Omega = sqrt(omega^2 + 2 omega) (Bogoliubov dispersion at full coupling).
    Both omega and Omega are even in n; Omega = 0 only for n = 0.
    """

    n: int
    ell: float

    @property
    def k(self) -> float:
        return 2.0 * np.pi * self.n / self.ell

    @property
    def omega(self) -> float:
        return self.k**2 / 2.0

    @property
    def big_omega(self) -> float:
        w = self.omega
        return np.sqrt(w * (w + 2.0))


def coupling_fraction(t: float, tau_s: float) -> float:
    """Ramp profile g(t)/g_0: 0 before the quench, linear on [0, tau_s], then 1.

    The sudden limit tau_s = 0 returns 1 for every t >= 0.
    """
    if tau_s < 0:
        raise ValueError(f"switching time must be >= 0, got {tau_s}")
    if t < 0:
        return 0.0
    if t >= tau_s:
        return 1.0
    return t / tau_s


def dispersion(n: int, ell: float) -> tuple[float, float, float]:
    """Return (k, omega, Omega) for ring mode n.

    Omega = sqrt(omega^2 + 2 omega) is algebraically the same as
    sqrt(2 omega) (1 + omega/2)^(1/2).
    """
    if not (ell > 0):
        raise ValueError(f"ring circumference must be positive, got {ell}")
    k = 2.0 * np.pi * n / ell
    omega = k * k / 2.0
    return k, omega, np.sqrt(omega * (omega + 2.0))


def chemical_potential(t: float, params: PhysicalParams) -> float:
    """Instantaneous chemical potential mu(t) = v_ext + g(t)/g_0 in units of Delta_mu."""
    return params.v_ext + coupling_fraction(t, params.tau_s)


def symplectic_bracket(a: NambuSpinor, b: NambuSpinor) -> complex:
    """Antisymmetric bilinear a^T (i sigma_2) b = a.u b.v - a.v b.u.

    This is the time-independent bracket of any two solutions of the mode
    equation; mode-matching coefficients are ratios of such brackets.
    """
    return a.u * b.v - a.v * b.u
