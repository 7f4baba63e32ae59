"""Thermal Casimir and Casimir-Polder interactions within the Lifshitz theory.

Units throughout: energies in eV, lengths in µm, temperatures in K.
Plate-plate energies are per unit area (eV/µm²), atom-plate energies in eV.

Main entry points
-----------------
* :mod:`casimir_lab.response` - dielectric, magnetic and atomic response models
* :mod:`casimir_lab.tensor` - graphene polarization tensor
* :mod:`casimir_lab.reflection` - reflection coefficients and providers
* :mod:`casimir_lab.energy` - free energies and the thermal-correction breakdown
* :mod:`casimir_lab.thermo` - entropies, low-temperature scans, Nernst verdicts
* :mod:`casimir_lab.cli` - command-line front end (``casimir-lab``)
"""
from .constants import FERMI_VELOCITY_RATIO, FINE_STRUCTURE, HBAR_C, K_B
from .energy import (AtomPlateSystem, FreeEnergyBreakdown, PlatePlateSystem,
                     casimir_energy_T0, casimir_free_energy, casimir_polder_energy_T0,
                     casimir_polder_free_energy, pfa_sphere_force, thermal_correction_breakdown)
from .errors import (CaseError, CasimirError, ConfigError, DegenerateData, DomainError,
                     NonConvergence, SeriesOutOfRange, StepUnderflow, UnsupportedProvider,
                     WindowViolation)
from .reflection import (FresnelProvider, GrapheneConductivityProvider,
                         GrapheneCorrelationProvider, GraphenePTProvider, HydrodynamicProvider,
                         IdealMetalProvider, VacuumProvider)
from .response import (AtomModel, ConstantEps, ConstantEpsWithDC, Drude, HydrodynamicSheet,
                       IdealMetal, Plasma)
from .tensor import GrapheneParams
from .thermo import CaseLabel, Verdict, classify_case, entropy, low_T_scan, nernst_verdict

__version__ = "0.1.0"

__all__ = [
    "HBAR_C", "K_B", "FINE_STRUCTURE", "FERMI_VELOCITY_RATIO",
    "PlatePlateSystem", "AtomPlateSystem", "FreeEnergyBreakdown",
    "casimir_free_energy", "casimir_energy_T0", "casimir_polder_free_energy",
    "casimir_polder_energy_T0", "thermal_correction_breakdown", "pfa_sphere_force",
    "CasimirError", "NonConvergence", "DomainError", "CaseError", "StepUnderflow",
    "DegenerateData", "SeriesOutOfRange", "UnsupportedProvider", "ConfigError",
    "WindowViolation",
    "IdealMetalProvider", "VacuumProvider", "FresnelProvider", "HydrodynamicProvider",
    "GraphenePTProvider", "GrapheneCorrelationProvider", "GrapheneConductivityProvider",
    "IdealMetal", "Plasma", "Drude", "ConstantEps", "ConstantEpsWithDC", "AtomModel",
    "HydrodynamicSheet", "GrapheneParams",
    "CaseLabel", "Verdict", "classify_case", "entropy", "low_T_scan", "nernst_verdict",
]
