"""Reflection coefficients on the imaginary frequency axis.

Every provider maps ``(w, k, T)`` to a :class:`ReflectionPair`, with
``w = ħξ`` in eV (``w = 0`` is the static Matsubara term) and ``k`` in 1/µm.

Besides the physical coefficients at temperature ``T``, providers expose

* ``coefficients_T0(w, k)`` - the zero-temperature material response,
  which must accept complex ``w`` because the zero-temperature spectrum is
  sampled off-axis by the Abel-Plana contour;
* ``excess(w, k, T)`` - the difference ``r(T) - r(T=0)``, computed without
  subtracting two nearly equal numbers where that matters.

The static (``w = 0``) coefficients of models whose permittivity diverges are
fixed analytically rather than approached numerically.
"""
from dataclasses import dataclass

import numpy as np

from .constants import FINE_STRUCTURE, HBAR_C
from .errors import DomainError, UnsupportedProvider
from . import response as rsp
from .tensor import (GrapheneParams, TensorPair, tensor_components, tensor_thermal_excess,
                     tensor_zeroT)


@dataclass
class ReflectionPair:
    r_tm: np.ndarray
    r_te: np.ndarray

    def check(self, atol=1e-12):
        """Raise if |r| > 1 anywhere (only meaningful on the imaginary axis)."""
        for name, r in (("r_tm", self.r_tm), ("r_te", self.r_te)):
            if np.any(np.abs(r) > 1 + atol):
                raise DomainError(f"|{name}| exceeds 1")
        return self


def vacuum_q(w, k):
    """q = sqrt(k² + (w/ħc)²) in 1/µm (principal branch for complex w)."""
    return np.sqrt(np.square(k) + np.square(np.asarray(w) / HBAR_C))


def _broadcast(w, k):
    w = np.asarray(w)
    k = np.asarray(k, dtype=float)
    w, k = np.broadcast_arrays(w, k)
    if np.any((w == 0) & (k == 0)):
        raise DomainError("reflection undefined at the origin node (w, k) = (0, 0)")
    return w, k


def _static_mask(w):
    return np.real(w) == 0 if not np.iscomplexobj(w) else w == 0


def fresnel(model, w, k, T=None):
    """Fresnel coefficients of a semispace described by ``model``.

    Static limits are hard-coded: Drude and dielectric-with-dc give
    ``r_TM = 1`` and ``r_TE = (mu-1)/(mu+1)``; the plasma model keeps a
    nonzero TE reflection ``(mu k - k_p)/(mu k + k_p)`` with
    ``k_p = sqrt(k² + mu wp²/(ħc)²)``.
    """
    w, k = _broadcast(w, k)
    mu = rsp.permeability_at(model)
    if isinstance(model, rsp.IdealMetal):
        return ReflectionPair(np.ones(w.shape), -np.ones(w.shape))
    static = _static_mask(w)
    dtype = complex if np.iscomplexobj(w) else float
    r_tm = np.empty(w.shape, dtype=dtype)
    r_te = np.empty(w.shape, dtype=dtype)
    dyn = ~static
    if np.any(dyn):
        wd, kd = w[dyn], k[dyn]
        eps = rsp.permittivity_at(model, wd, T)
        q = vacuum_q(wd, kd)
        kl = np.sqrt(kd * kd + eps * mu * np.square(wd / HBAR_C))
        r_tm[dyn] = (eps * q - kl) / (eps * q + kl)
        r_te[dyn] = (mu * q - kl) / (mu * q + kl)
    if np.any(static):
        ks = k[static]
        m = model
        if isinstance(m, rsp.Drude) and m.gamma_at(T) == 0:
            m = rsp.Plasma(m.wp, m.mu0)
        if isinstance(m, rsp.ConstantEpsWithDC) and m.sigma == 0:
            m = rsp.ConstantEps(m.eps0, m.mu0)
        if isinstance(m, (rsp.Drude, rsp.ConstantEpsWithDC)):
            r_tm[static] = 1.0
            r_te[static] = (mu - 1) / (mu + 1)
        elif isinstance(m, rsp.Plasma):
            kp = np.sqrt(ks * ks + mu * (m.wp / HBAR_C) ** 2)
            r_tm[static] = 1.0
            r_te[static] = (mu * ks - kp) / (mu * ks + kp)
        else:
            r_tm[static] = (m.eps0 - 1) / (m.eps0 + 1)
            r_te[static] = (mu - 1) / (mu + 1)
    return ReflectionPair(r_tm, r_te)


def hydrodynamic(sheet, w, k):
    """Two-dimensional free-electron gas: r_TM = qK/(qK + (w/ħc)²), r_TE = -K/(K+q)."""
    w, k = _broadcast(w, k)
    q = vacuum_q(w, k)
    K = sheet.K
    return ReflectionPair(q * K / (q * K + np.square(w / HBAR_C)), -K / (K + q))


def _from_tensor(tp, w, k):
    q = vacuum_q(w, k)
    k2 = np.square(k)
    return ReflectionPair(q * tp.pi00 / (q * tp.pi00 + 2 * k2), -tp.pi / (tp.pi + 2 * k2 * q))


def graphene_pt(params, w, k, T, rtol=1e-10):
    """Graphene sheet coefficients from the polarization tensor."""
    w, k = _broadcast(w, k)
    return _from_tensor(tensor_components(params, w, k, T, rtol), w, k)


# --- equivalent representations ------------------------------------------------

_E2 = FINE_STRUCTURE * HBAR_C  # e² in eV·µm (Gaussian units)


def correlation_functions(tp, w):
    """Longitudinal and transverse density-density correlation functions.

    Units 1/(eV µm²).  The transverse one needs ``w != 0``.
    """
    w = np.asarray(w)
    if np.any(w == 0):
        raise DomainError("transverse correlation function is undefined at w = 0")
    chi_par = -tp.pi00 / (4 * np.pi * _E2)
    chi_perp = -HBAR_C**2 * tp.pi / (4 * np.pi * _E2 * np.square(w))
    return chi_par, chi_perp


def reflection_from_correlation(chi_par, chi_perp, w, k):
    q = vacuum_q(w, k)
    k2 = np.square(k)
    x_par = 2 * np.pi * _E2 * q * chi_par
    x_perp = 2 * np.pi * _E2 * np.square(w) * chi_perp
    return ReflectionPair(x_par / (x_par - k2), -x_perp / (x_perp - HBAR_C**2 * k2 * q))


def conductivities(chi_par, chi_perp, w, k):
    """In-plane and out-of-plane sheet conductivities divided by c (dimensionless)."""
    w = np.asarray(w)
    k2 = np.square(k)
    return -FINE_STRUCTURE * w * chi_par / k2, -FINE_STRUCTURE * w * chi_perp / k2


def reflection_from_conductivity(s_par, s_perp, w, k):
    q = vacuum_q(w, k)
    x = np.asarray(w) / HBAR_C
    return ReflectionPair(2 * np.pi * q * s_par / (2 * np.pi * q * s_par + x),
                          -2 * np.pi * x * s_perp / (2 * np.pi * x * s_perp + q))


def graphene_correlation(params, w, k, T, rtol=1e-10):
    """Same coefficients routed through the correlation functions (w > 0 only)."""
    w, k = _broadcast(w, k)
    tp = tensor_components(params, w, k, T, rtol)
    chi = correlation_functions(tp, w)
    return reflection_from_correlation(*chi, w, k)


def graphene_conductivity(params, w, k, T, rtol=1e-10):
    """Same coefficients routed through the conductivities (w > 0 only)."""
    w, k = _broadcast(w, k)
    tp = tensor_components(params, w, k, T, rtol)
    chi = correlation_functions(tp, w)
    return reflection_from_conductivity(*conductivities(*chi, w, k), w, k)


# --- providers -----------------------------------------------------------------

class ReflectionProvider:
    """Base class.  Subclasses implement :meth:`coefficients`."""

    #: True when the coefficients change with temperature
    temperature_dependent = False
    #: True when a zero-temperature reference spectrum exists
    has_T0 = True
    #: wave numbers (1/µm) where the static coefficients have kinks
    kinks = ()

    def coefficients(self, w, k, T):
        raise NotImplementedError

    def coefficients_T0(self, w, k):
        return self.coefficients(w, k, None)

    def excess(self, w, k, T):
        """r(T) - r(T=0); zero for temperature-independent materials."""
        w, k = _broadcast(w, k)
        if not self.temperature_dependent:
            z = np.zeros(w.shape)
            return ReflectionPair(z, z.copy())
        a = self.coefficients(w, k, T)
        b = self.coefficients_T0(w, k)
        return ReflectionPair(a.r_tm - b.r_tm, a.r_te - b.r_te)

    def describe(self):
        return type(self).__name__


class IdealMetalProvider(ReflectionProvider):
    def coefficients(self, w, k, T=None):
        w, k = _broadcast(w, k)
        return ReflectionPair(np.ones(w.shape), -np.ones(w.shape))


class VacuumProvider(ReflectionProvider):
    def coefficients(self, w, k, T=None):
        w, k = _broadcast(w, k)
        return ReflectionPair(np.zeros(w.shape), np.zeros(w.shape))


class FresnelProvider(ReflectionProvider):
    """Semispace with a dielectric model.

    The zero-temperature reference differs from the finite-temperature
    material in two cases: a Drude metal with ``relaxation="perfect_lattice"``
    (its relaxation vanishes at T = 0, leaving the plasma model) and a
    dielectric with dc conductivity (the conductivity of a dielectric vanishes
    at T = 0, leaving the pure dielectric).
    """

    def __init__(self, model):
        if not isinstance(model, rsp.DielectricModel):
            raise TypeError(f"not a dielectric model: {model!r}")
        self.model = model
        m = model
        if isinstance(m, rsp.Drude) and m.temperature_dependent:
            self.reference = rsp.Plasma(m.wp, m.mu0)
        elif isinstance(m, rsp.ConstantEpsWithDC) and m.sigma > 0:
            self.reference = rsp.ConstantEps(m.eps0, m.mu0)
        else:
            self.reference = m
        self.temperature_dependent = self.reference is not m

    def coefficients(self, w, k, T=None):
        if T is None:
            return fresnel(self.reference, w, k)
        return fresnel(self.model, w, k, T)

    def coefficients_T0(self, w, k):
        return fresnel(self.reference, w, k)

    def describe(self):
        return repr(self.model)


class HydrodynamicProvider(ReflectionProvider):
    def __init__(self, sheet=None):
        self.sheet = sheet or rsp.HydrodynamicSheet()

    def coefficients(self, w, k, T=None):
        return hydrodynamic(self.sheet, w, k)


class GraphenePTProvider(ReflectionProvider):
    """Graphene sheet described by its polarization tensor."""
    temperature_dependent = True

    def __init__(self, params=None, rtol=1e-10):
        self.params = params or GrapheneParams()
        self.rtol = rtol

    @property
    def kinks(self):
        from .tensor import fermi_wave_number
        kf = fermi_wave_number(self.params)
        return (kf,) if kf > 0 else ()

    def coefficients(self, w, k, T=None):
        w, k = _broadcast(w, k)
        if T is None or T == 0:
            return self.coefficients_T0(w, k)
        return self._convert(tensor_components(self.params, w, k, T, self.rtol), w, k)

    def coefficients_T0(self, w, k):
        w, k = _broadcast(w, k)
        return self._convert(tensor_zeroT(self.params, w, k), w, k)

    def _convert(self, tp, w, k):
        return _from_tensor(tp, w, k)

    def tensor_T0(self, w, k):
        return tensor_zeroT(self.params, w, k)

    def excess(self, w, k, T):
        """Exact r(T) - r(0) from the tensor excess, free of cancellation."""
        w, k = _broadcast(w, k)
        t0 = tensor_zeroT(self.params, w, k)
        d = tensor_thermal_excess(self.params, w, k, T, self.rtol)
        q = vacuum_q(w, k)
        k2 = np.square(k)
        a0 = q * t0.pi00 + 2 * k2
        d_tm = 2 * k2 * q * d.pi00 / (a0 * (a0 + q * d.pi00))
        b0 = t0.pi + 2 * k2 * q
        d_te = -2 * k2 * q * d.pi / (b0 * (b0 + d.pi))
        return ReflectionPair(d_tm, d_te)

    def describe(self):
        p = self.params
        return f"graphene(gap={p.gap}, mu={p.mu})"


class GrapheneCorrelationProvider(GraphenePTProvider):
    """Graphene via density-density correlation functions (TE needs w > 0)."""

    def _convert(self, tp, w, k):
        if np.any(np.asarray(w) == 0):
            raise DomainError("TE correlation form is undefined for the static term")
        return reflection_from_correlation(*correlation_functions(tp, w), w, k)


class GrapheneConductivityProvider(GraphenePTProvider):
    """Graphene via sheet conductivities (needs w > 0)."""

    def _convert(self, tp, w, k):
        chi = correlation_functions(tp, w)
        return reflection_from_conductivity(*conductivities(*chi, w, k), w, k)


def require_T0(provider):
    if not getattr(provider, "has_T0", False):
        raise UnsupportedProvider(f"{provider.describe()} has no zero-temperature branch")
    return provider
