"""Casimir (plate-plate) and Casimir-Polder (atom-plate) free energies.

Internally everything is expressed through dimensionless spectra.  With
``kappa = 2 a k``, ``zeta = 2 a w/ħc`` and ``Y = sqrt(kappa² + zeta²)``:

plate-plate, per unit area::

    Phi(zeta) = int kappa dkappa  sum_pol ln(1 - r1 r2 e^{-Y})
    F(T) = k_B T/(8 pi a²) sum'_l Phi(l zeta_1),   E(0) = ħc/(32 pi² a³) int Phi dzeta

atom-plate::

    Omega(zeta) = alpha(w) int kappa dkappa Y e^{-Y} [(2 - zeta²/Y²) r_TM - zeta²/Y² r_TE]
    F(T) = -k_B T/(8 a³) sum'_l Omega(l zeta_1),  E(0) = -ħc/(32 pi a⁴) int Omega dzeta

where ``zeta_1 = 4 pi a k_B T/ħc`` is the first Matsubara frequency.

The thermal correction ``F(T) - E(0)`` is never obtained by subtracting the
two (at low temperature they agree to many digits).  Instead it is split as

* *implicit*: the Abel-Plana difference ``sum' - integral`` of the
  zero-temperature spectrum, evaluated as a contour integral;
* *explicit*: the Matsubara sum of the spectrum *difference* caused by the
  temperature dependence of the reflection coefficients, split into the
  static term (l = 0) and the rest.  For sheets the difference of logarithms
  is formed exactly, ``ln(1 - (r1₀δ2 + δ1r2₀ + δ1δ2) e^{-Y}/(1 - r1₀r2₀ e^{-Y}))``,
  from the cancellation-free excesses ``δ = r(T) - r(0)``.
"""
from dataclasses import dataclass
import math
import warnings

import numpy as np

from .constants import HBAR_C, K_B
from .errors import DomainError, UnsupportedProvider
from .numerics.quadrature import integrate_batch_semi_infinite
from .numerics.summation import abel_plana_difference, matsubara_sum
from .reflection import ReflectionProvider
from .response import AtomModel, polarizability_at


@dataclass(frozen=True)
class PlatePlateSystem:
    provider1: ReflectionProvider
    provider2: ReflectionProvider = None
    a: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("separation must be positive")

    @property
    def providers(self):
        return self.provider1, (self.provider2 if self.provider2 is not None else self.provider1)


@dataclass(frozen=True)
class AtomPlateSystem:
    atom: AtomModel
    provider: ReflectionProvider
    a: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("separation must be positive")


@dataclass(frozen=True)
class FreeEnergyBreakdown:
    """Thermal correction ``F(T) - E(0)`` and its parts (eV/µm² or eV)."""
    total_correction: float
    implicit: float
    explicit_l0: float
    explicit_lge1: float

    def as_dict(self):
        return {"total_correction": self.total_correction, "implicit": self.implicit,
                "explicit_l0": self.explicit_l0, "explicit_lge1": self.explicit_lge1}


def first_matsubara(a, T):
    """zeta_1 = 4 pi a k_B T/ħc."""
    return 4 * np.pi * a * K_B * T / HBAR_C


def _log1p(x):
    """log(1 + x), accurate for small complex ``x`` as well.

    numpy's complex log1p forms 1 + x first, which wipes out the real part
    when ``|x|`` is small.
    """
    if not np.iscomplexobj(x):
        return np.log1p(x)
    u, v = x.real, x.imag
    return 0.5 * np.log1p(u * (2 + u) + v * v) + 1j * np.arctan2(v, 1 + u)


def _kappa_scale(zeta):
    return np.maximum(1.0, np.sqrt(np.abs(zeta)))


def _is_atom(system):
    return isinstance(system, AtomPlateSystem)


def _kink_breaks(providers, a, n):
    ks = sorted({2 * a * kf for p in providers for kf in p.kinks if kf > 0})
    if not ks:
        return None
    return np.tile(np.array(ks), (n, 1))


def spectrum(system, zeta, kind="T", T=None, rtol=1e-10, atol=0.0):
    """Phi (plates) or Omega (atom) at dimensionless frequencies ``zeta``.

    kind:

    * ``"T"`` - coefficients at temperature ``T``;
    * ``"T0"`` - the zero-temperature reference (``zeta`` may be complex);
    * ``"T0diff"`` - ``spectrum_T0(zeta) - spectrum_T0(0)`` as one integral,
      so that small differences keep their relative accuracy;
    * ``"excess"`` - ``spectrum_T(zeta) - spectrum_T0(zeta)`` formed without
      cancellation.
    """
    zeta = np.atleast_1d(np.asarray(zeta))
    n = len(zeta)
    a = system.a
    atom = _is_atom(system)
    providers = (system.provider,) if atom else system.providers
    if kind not in ("T", "T0", "T0diff", "excess"):
        raise ValueError(f"unknown spectrum kind {kind!r}")
    if kind == "excess" and not any(p.temperature_dependent for p in providers):
        return np.zeros(n)
    if atom and system.atom.alpha0 == 0:
        return np.zeros(n, dtype=zeta.dtype if np.iscomplexobj(zeta) else float)
    if kind in ("T", "excess") and not T > 0:
        raise DomainError("temperature must be positive")
    same = atom or providers[0] is providers[1]
    p1, p2 = providers[0], providers[-1]

    def coeffs(p, w, k):
        if kind in ("T0", "T0diff"):
            return p.coefficients_T0(w, k)
        return p.coefficients(w, k, T)

    def plate_log(r1, r2, e):
        return _log1p(-r1.r_tm * r2.r_tm * e) + _log1p(-r1.r_te * r2.r_te * e)

    def atom_kernel(r, z, Y, e):
        x = np.square(z / Y)
        return Y * e * ((2 - x) * r.r_tm - x * r.r_te)

    def integrand(kappa, o):
        z = zeta[o]
        w = z * (HBAR_C / (2 * a))
        k = kappa / (2 * a)
        Y = np.sqrt(kappa * kappa + z * z)
        e = np.exp(-Y)
        if kind == "excess":
            if atom:
                return kappa * atom_kernel(p1.excess(w, k, T), z, Y, e)
            r1, d1 = p1.coefficients_T0(w, k), p1.excess(w, k, T)
            if same:
                r2, d2 = r1, d1
            else:
                r2, d2 = p2.coefficients_T0(w, k), p2.excess(w, k, T)
            out = 0.0
            for pol in ("r_tm", "r_te"):
                a1, a2 = getattr(r1, pol), getattr(r2, pol)
                b1, b2 = getattr(d1, pol), getattr(d2, pol)
                num = (a1 * b2 + b1 * a2 + b1 * b2) * e
                out = out + _log1p(-num / (1 - a1 * a2 * e))
            return kappa * out
        r1 = coeffs(p1, w, k)
        r2 = r1 if same else coeffs(p2, w, k)
        if kind != "T0diff":
            if atom:
                return kappa * atom_kernel(r1, z, Y, e)
            return kappa * plate_log(r1, r2, e)
        w0 = np.zeros(len(k))
        s1 = p1.coefficients_T0(w0, k)
        s2 = s1 if same else p2.coefficients_T0(w0, k)
        e0 = np.exp(-kappa)
        if atom:
            return kappa * (atom_kernel(r1, z, Y, e) - 2 * kappa * e0 * s1.r_tm)
        # kappa - Y and 1 - e^{-kappa} without cancellation
        dk = -(z * z) / (kappa + Y)
        om = -np.expm1(-kappa)
        out = 0.0
        for pol in ("r_tm", "r_te"):
            rr = getattr(r1, pol) * getattr(r2, pol)
            rr0 = getattr(s1, pol) * getattr(s2, pol)
            num = e0 * ((rr0 - rr) - rr * np.expm1(dk))
            out = out + _log1p(num / ((1 - rr0) + rr0 * om))
        return kappa * out

    if atom:
        # the integral is formed per unit polarizability; alpha is applied below
        atol = atol / system.atom.alpha0
    res = integrate_batch_semi_infinite(integrand, np.zeros(n), _kappa_scale(zeta),
                                        breaks=_kink_breaks(providers, a, n), rtol=rtol,
                                        atol=atol, max_intervals=4000)
    vals = res.values
    if atom:
        w = zeta * (HBAR_C / (2 * a))
        alpha = polarizability_at(system.atom, w)
        if kind == "T0diff":
            # alpha(w) I(w) - alpha0 I(0) = alpha(w) [I(w) - I(0)] + (alpha(w) - alpha0) I(0)
            d_alpha = alpha - system.atom.alpha0
            if np.any(d_alpha != 0):
                i0 = spectrum(system, np.zeros(1), "T0", None, rtol)[0] / system.atom.alpha0
                vals = alpha * vals + d_alpha * i0
            else:
                vals = alpha * vals
        else:
            vals = vals * alpha
    return vals


def _prefactor_T(system, T):
    a = system.a
    if _is_atom(system):
        return -K_B * T / (8 * a**3)
    return K_B * T / (8 * np.pi * a**2)


def _prefactor_0(system):
    a = system.a
    if _is_atom(system):
        return -HBAR_C / (32 * np.pi * a**4)
    return HBAR_C / (32 * np.pi**2 * a**3)


def _inner_tol(rel_tol):
    return max(rel_tol * 1e-2, 1e-13)


def free_energy(system, T, rel_tol=1e-6):
    """Free energy at temperature ``T`` by direct Matsubara summation."""
    if not T > 0:
        raise DomainError("temperature must be positive")
    z1 = first_matsubara(system.a, T)
    inner = _inner_tol(rel_tol)

    def term(ls):
        return np.real(spectrum(system, z1 * np.asarray(ls, dtype=float), "T", T, inner))

    return _prefactor_T(system, T) * matsubara_sum(term, rel_tol=rel_tol * 0.1)


def energy_T0(system, rel_tol=1e-6):
    """Zero-temperature interaction energy (frequency integral)."""
    inner = _inner_tol(rel_tol)

    def f(zeta, _):
        return np.real(spectrum(system, zeta, "T0", None, inner))

    res = integrate_batch_semi_infinite(f, 0.0, 1.0, rtol=rel_tol * 0.1, max_intervals=2000)
    return _prefactor_0(system) * float(res.values[0])


def casimir_free_energy(system, T, rel_tol=1e-6):
    """Plate-plate free energy per unit area, eV/µm²."""
    _expect(system, PlatePlateSystem)
    return free_energy(system, T, rel_tol)


def casimir_energy_T0(system, rel_tol=1e-6):
    """Plate-plate energy per unit area at T = 0, eV/µm²."""
    _expect(system, PlatePlateSystem)
    return energy_T0(system, rel_tol)


def casimir_polder_free_energy(system, T, rel_tol=1e-6):
    """Atom-plate free energy, eV."""
    _expect(system, AtomPlateSystem)
    return free_energy(system, T, rel_tol)


def casimir_polder_energy_T0(system, rel_tol=1e-6):
    """Atom-plate interaction energy at T = 0, eV."""
    _expect(system, AtomPlateSystem)
    return energy_T0(system, rel_tol)


def _expect(system, cls):
    if not isinstance(system, cls):
        raise TypeError(f"expected {cls.__name__}, got {type(system).__name__}")


def implicit_correction(system, T, rel_tol=1e-6):
    """Sum-minus-integral of the zero-temperature spectrum (Abel-Plana)."""
    z1 = first_matsubara(system.a, T)
    inner = _inner_tol(rel_tol)

    # Near t = 0 the difference is far below the rounding noise of its own
    # integrand, so the inner integrals get an absolute floor tied to the
    # size of the static spectrum.
    scale = abs(float(np.real(spectrum(system, np.zeros(1), "T0", None, inner)[0])))
    atol = 1e-12 * scale

    def G(t):
        return spectrum(system, z1 * np.asarray(t), "T0diff", None, inner, atol=atol)

    return _prefactor_T(system, T) * abel_plana_difference(G, rel_tol=rel_tol * 0.1,
                                                          check_decay=False, subtracted=True)


def explicit_correction(system, T, rel_tol=1e-6, scale=0.0):
    """(static part, non-static part) of the thermal correction from r(T) - r(0).

    ``scale`` (same units as the result) is the size of the correction the
    parts will be added to; the non-static sum is only resolved to
    ``rel_tol`` relative to the larger of it and the static part.
    """
    providers = (system.provider,) if _is_atom(system) else system.providers
    for p in providers:
        if not getattr(p, "has_T0", False):
            raise UnsupportedProvider(f"{p.describe()} has no zero-temperature branch")
    if not any(p.temperature_dependent for p in providers):
        return 0.0, 0.0
    z1 = first_matsubara(system.a, T)
    inner = _inner_tol(rel_tol)

    pref = _prefactor_T(system, T)
    # Absolute floors: both parts only need to be resolved relative to the
    # whole correction, not to themselves (they can be many orders smaller).
    floor = abs(scale / pref)

    def term(ls):
        return np.real(spectrum(system, z1 * np.asarray(ls, dtype=float), "excess", T, inner,
                                atol=inner * floor))

    l0 = 0.5 * float(term(np.zeros(1))[0])
    floor = max(abs(l0), floor)
    rest = matsubara_sum(term, rel_tol=rel_tol * 0.1, start=1, abs_tol=rel_tol * 1e-2 * floor,
                        smooth_tail_after=64)
    return pref * l0, pref * rest


def thermal_correction_breakdown(system, T, rel_tol=1e-6):
    """Split ``F(T) - E(0)`` into implicit, explicit static and explicit non-static parts."""
    if not T > 0:
        raise DomainError("temperature must be positive")
    imp = implicit_correction(system, T, rel_tol)
    l0, rest = explicit_correction(system, T, rel_tol, scale=imp)
    return FreeEnergyBreakdown(imp + l0 + rest, imp, l0, rest)


def pfa_sphere_force(system, T, R, rel_tol=1e-6):
    """Sphere-plate force 2 pi R F(a, T) in eV/µm (T = 0 uses the energy)."""
    _expect(system, PlatePlateSystem)
    if not R > 0:
        raise DomainError("sphere radius must be positive")
    if system.a / R > 0.1:
        warnings.warn(f"a/R = {system.a / R:.3g} > 0.1: proximity approximation is poor",
                      stacklevel=2)
    F = casimir_energy_T0(system, rel_tol) if T == 0 else casimir_free_energy(system, T, rel_tol)
    return 2 * math.pi * R * F
