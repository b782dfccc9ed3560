"""Quantum backreaction of a 1D ring condensate under a linear interaction quench.

Exact Bogoliubov mode functions across the free, switching and interacting
regimes, mode-sum observables (depletion, density variance, energies, power,
stresses), conservation-law verification against independent integration
oracles, and a CLI emitting the standard figure data.
"""

__version__ = "0.1.0"

from .core import (ModeIndex, NambuSpinor, PhysicalParams, chemical_potential,
                   coupling_fraction, dispersion, symplectic_bracket)
from .airy import AiryValues, airy_all, airy_grid
from .modes import (HISTORY, HistoryVacuum, MatchingCoefficients,
                    QuasiparticleVacuum, VacuumChoice, evaluate_mode,
                    match_coefficients, minimal_depletion_vacuum, post_basis,
                    qp_zero_mode, sigma_arg, sigma_dot, switching_basis,
                    zero_mode_history)
from .oracle import IntegrationError, Trajectory, integrate_bdg, integrate_zeta
from .observables import (CorrelatorSet, EnergyBreakdown, FluxStress,
                          ObservableSeries, correlators, density_variance,
                          depletion, energies, fluxes_and_stress,
                          observable_series, power_zeta)
from .conservation import LAWS, ResidualReport, verify

__all__ = [
    "__version__",
    "PhysicalParams", "NambuSpinor", "ModeIndex",
    "coupling_fraction", "dispersion", "chemical_potential", "symplectic_bracket",
    "AiryValues", "airy_all", "airy_grid",
    "HISTORY", "HistoryVacuum", "QuasiparticleVacuum", "VacuumChoice",
    "MatchingCoefficients", "sigma_arg", "sigma_dot", "switching_basis",
    "post_basis", "zero_mode_history", "qp_zero_mode",
    "minimal_depletion_vacuum", "match_coefficients", "evaluate_mode",
    "Trajectory", "IntegrationError", "integrate_bdg", "integrate_zeta",
    "CorrelatorSet", "EnergyBreakdown", "FluxStress", "ObservableSeries",
    "correlators", "depletion", "density_variance", "energies", "power_zeta",
    "fluxes_and_stress", "observable_series",
    "LAWS", "ResidualReport", "verify",
]
