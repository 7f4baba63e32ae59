"""Material response along the imaginary frequency axis.

Frequencies are given as energies ħξ in eV.  Functions accept scalars or
numpy arrays, and complex arguments are allowed (the Abel-Plana contour
samples the analytic continuation off the imaginary axis).
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError


def _positive(name, value, strict=True):
    ok = value > 0 if strict else value >= 0
    if not (ok and math.isfinite(value)):
        raise DomainError(f"{name} must be {'>' if strict else '>='} 0, got {value}")


@dataclass(frozen=True)
class IdealMetal:
    """Perfect conductor: r_TM = 1, r_TE = -1 at every frequency."""
    mu0: float = 1.0


@dataclass(frozen=True)
class Plasma:
    """Lossless free-electron gas, eps = 1 + wp^2/xi^2."""
    wp: float
    mu0: float = 1.0

    def __post_init__(self):
        _positive("plasma frequency", self.wp)
        _positive("mu0", self.mu0)


@dataclass(frozen=True)
class Drude:
    """Free electrons with relaxation, eps = 1 + wp^2/(xi (xi + gamma)).

    ``relaxation`` selects how the relaxation energy depends on temperature:
    ``"constant"`` keeps ``gamma`` fixed; ``"perfect_lattice"`` scales it as
    ``gamma * (T/T_ref)**gamma_power`` so that it vanishes at T -> 0, which is
    what a defect-free crystal does.
    """
    wp: float
    gamma: float
    mu0: float = 1.0
    relaxation: str = "constant"
    T_ref: float = 295.0
    gamma_power: float = 2.0

    def __post_init__(self):
        _positive("plasma frequency", self.wp)
        _positive("gamma", self.gamma, strict=False)
        _positive("mu0", self.mu0)
        if self.relaxation not in ("constant", "perfect_lattice"):
            raise DomainError(f"unknown relaxation law {self.relaxation!r}")

    def gamma_at(self, T=None):
        if self.relaxation == "constant" or T is None:
            return self.gamma
        return self.gamma * (T / self.T_ref) ** self.gamma_power

    @property
    def temperature_dependent(self):
        return self.relaxation != "constant" and self.gamma > 0


@dataclass(frozen=True)
class ConstantEps:
    """Nondispersive dielectric."""
    eps0: float
    mu0: float = 1.0

    def __post_init__(self):
        if not self.eps0 >= 1:
            raise DomainError("eps0 must be >= 1")
        _positive("mu0", self.mu0)


@dataclass(frozen=True)
class ConstantEpsWithDC:
    """Dielectric plus dc conductivity, eps = eps0 + sigma/xi.

    ``sigma`` is the Gaussian-unit combination ħ·4πσ0 expressed in eV.
    """
    eps0: float
    sigma: float
    mu0: float = 1.0

    def __post_init__(self):
        if not self.eps0 >= 1:
            raise DomainError("eps0 must be >= 1")
        _positive("sigma", self.sigma, strict=False)
        _positive("mu0", self.mu0)


DielectricModel = (IdealMetal, Plasma, Drude, ConstantEps, ConstantEpsWithDC)


def _check_xi(xi, divergent):
    xi_arr = np.asarray(xi)
    if np.iscomplexobj(xi_arr):
        if divergent and np.any(xi_arr == 0):
            raise DomainError("permittivity diverges at zero frequency")
        return
    if np.any(xi_arr < 0):
        raise DomainError("imaginary-axis frequency must be non-negative")
    if divergent and np.any(xi_arr == 0):
        raise DomainError("permittivity diverges at zero frequency; use the l=0 reflection limit")


def permittivity_at(model, xi, T=None):
    """Dielectric permittivity eps(i xi) with ``xi`` in eV.

    ``T`` only matters for a temperature-dependent Drude relaxation.
    """
    if isinstance(model, IdealMetal):
        raise DomainError("ideal metal has no finite permittivity")
    if isinstance(model, Plasma):
        _check_xi(xi, divergent=True)
        return 1.0 + model.wp**2 / np.square(xi)
    if isinstance(model, Drude):
        g = model.gamma_at(T)
        _check_xi(xi, divergent=True)
        return 1.0 + model.wp**2 / (xi * (xi + g))
    if isinstance(model, ConstantEps):
        _check_xi(xi, divergent=False)
        return model.eps0 + 0.0 * np.asarray(xi)
    if isinstance(model, ConstantEpsWithDC):
        _check_xi(xi, divergent=model.sigma > 0)
        if model.sigma == 0:
            return model.eps0 + 0.0 * np.asarray(xi)
        return model.eps0 + model.sigma / xi
    raise TypeError(f"not a dielectric model: {model!r}")


def permeability_at(model, xi=None):
    return getattr(model, "mu0", 1.0)


@dataclass(frozen=True)
class AtomModel:
    """Single-oscillator atom; ``omega0 = inf`` means frequency-independent."""
    alpha0: float
    omega0: float = math.inf

    def __post_init__(self):
        _positive("alpha0", self.alpha0, strict=False)
        if not self.omega0 > 0:
            raise DomainError("omega0 must be > 0")


def polarizability_at(atom, xi):
    """Dynamic polarizability alpha(i xi) in µm³."""
    if math.isinf(atom.omega0):
        return atom.alpha0 + 0.0 * np.asarray(xi)
    return atom.alpha0 / (1.0 + np.square(xi) / atom.omega0**2)


@dataclass(frozen=True)
class HydrodynamicSheet:
    """Two-dimensional free-electron gas; ``K`` in 1/µm (default 6.75e5 1/m)."""
    K: float = 0.675

    def __post_init__(self):
        _positive("K", self.K)
