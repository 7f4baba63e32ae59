import math
import warnings

import mpmath
import numpy as np
import pytest

from casimir_lab.constants import HBAR_C, K_B
from casimir_lab.energy import (AtomPlateSystem, PlatePlateSystem, casimir_energy_T0,
                                casimir_free_energy, casimir_polder_energy_T0,
                                casimir_polder_free_energy, explicit_correction,
                                first_matsubara, pfa_sphere_force, thermal_correction_breakdown)
from casimir_lab.errors import DomainError
from casimir_lab.reflection import (FresnelProvider, GraphenePTProvider, HydrodynamicProvider,
                                    IdealMetalProvider, VacuumProvider)
from casimir_lab.response import AtomModel, ConstantEps, Drude, HydrodynamicSheet
from casimir_lab.tensor import GrapheneParams

ZETA3 = float(mpmath.zeta(3))
ALPHA0 = 6.67e-13


def plates(provider, a):
    return PlatePlateSystem(provider, a=a)


def atom(provider, a, alpha0=ALPHA0):
    return AtomPlateSystem(AtomModel(alpha0), provider, a=a)


def classical_T(a, factor=20):
    """Temperature with k_B T = factor * ħc/(2a)."""
    return factor * HBAR_C / (2 * a) / K_B


@pytest.mark.parametrize("a", [0.1, 1.0, 5.0])
def test_ideal_plates_zero_temperature(a):
    E = casimir_energy_T0(plates(IdealMetalProvider(), a))
    assert E == pytest.approx(-math.pi**2 * HBAR_C / (720 * a**3), rel=1e-6)


@pytest.mark.parametrize("a", [0.1, 1.0, 5.0])
def test_ideal_atom_zero_temperature(a):
    E = casimir_polder_energy_T0(atom(IdealMetalProvider(), a))
    assert E == pytest.approx(-3 * HBAR_C * ALPHA0 / (8 * math.pi * a**4), rel=1e-6)


def test_vacuum_and_zero_polarizability_give_zero():
    assert casimir_energy_T0(plates(VacuumProvider(), 1.0)) == 0
    assert casimir_free_energy(plates(VacuumProvider(), 1.0), 300.0) == 0
    assert casimir_polder_energy_T0(atom(IdealMetalProvider(), 1.0, alpha0=0.0)) == 0


def test_ideal_plates_classical_limit():
    # both polarizations reflect fully at l = 0, each contributing zeta(3)/(16 pi)
    a = 1.0
    T = classical_T(a)
    F = casimir_free_energy(plates(IdealMetalProvider(), a), T)
    assert F == pytest.approx(-ZETA3 * K_B * T / (8 * math.pi * a * a), rel=1e-3)


def test_ideal_atom_classical_limit():
    a = 1.0
    T = classical_T(a)
    F = casimir_polder_free_energy(atom(IdealMetalProvider(), a), T)
    assert F == pytest.approx(-K_B * T * ALPHA0 / (4 * a**3), rel=1e-3)


def test_low_temperature_approaches_zero_temperature():
    s = plates(IdealMetalProvider(), 1.0)
    E0 = casimir_energy_T0(s)
    F = casimir_free_energy(s, 1.0)
    assert F == pytest.approx(E0, rel=1e-5)


def test_free_energy_decreases_with_temperature():
    s = plates(FresnelProvider(ConstantEps(5.0)), 1.0)
    F = [casimir_free_energy(s, T) for T in (50.0, 150.0, 300.0)]
    assert F[0] < 0 and F[2] < F[1] < F[0]


def test_magnitude_decreases_with_separation():
    prov = FresnelProvider(Drude(9.0, 0.035))
    E = [casimir_energy_T0(plates(prov, a)) for a in (0.5, 1.0, 2.0)]
    assert all(e < 0 for e in E) and abs(E[0]) > abs(E[1]) > abs(E[2])


def test_hydrodynamic_approaches_ideal_from_below():
    ideal = casimir_polder_energy_T0(atom(IdealMetalProvider(), 5.0))
    prev = 0.0
    for K in (0.675, 50.0, 5e3):
        E = casimir_polder_energy_T0(atom(HydrodynamicProvider(HydrodynamicSheet(K)), 5.0))
        assert ideal < E < prev
        prev = E
    assert E == pytest.approx(ideal, rel=2e-3)


def test_asymmetric_plates_between_symmetric_ones():
    a = 1.0
    p1, p2 = FresnelProvider(ConstantEps(2.0)), IdealMetalProvider()
    e11 = casimir_energy_T0(plates(p1, a))
    e22 = casimir_energy_T0(plates(p2, a))
    e12 = casimir_energy_T0(PlatePlateSystem(p1, p2, a=a))
    assert e22 < e12 < e11 < 0


def test_temperature_independent_material_has_no_explicit_part():
    s = plates(FresnelProvider(ConstantEps(3.0)), 1.0)
    assert explicit_correction(s, 10.0) == (0.0, 0.0)
    b = thermal_correction_breakdown(s, 10.0)
    assert b.explicit_l0 == 0 and b.explicit_lge1 == 0


def test_breakdown_identity_dielectric():
    s = plates(FresnelProvider(ConstantEps(3.0)), 1.0)
    b = thermal_correction_breakdown(s, 200.0, rel_tol=1e-7)
    direct = casimir_free_energy(s, 200.0, rel_tol=1e-9) - casimir_energy_T0(s, rel_tol=1e-9)
    assert b.total_correction == pytest.approx(direct, rel=1e-5)


def test_breakdown_identity_graphene_atom():
    s = atom(GraphenePTProvider(GrapheneParams(0.1, 0.0)), 0.5)
    T = 150.0
    b = thermal_correction_breakdown(s, T, rel_tol=1e-7)
    direct = casimir_polder_free_energy(s, T, 1e-9) - casimir_polder_energy_T0(s, 1e-9)
    assert b.total_correction == pytest.approx(b.implicit + b.explicit_l0 + b.explicit_lge1)
    assert b.total_correction == pytest.approx(direct, rel=1e-4)


def test_atom_static_term_ignores_te():
    # at l = 0 the atom kernel multiplies r_TE by the vanishing frequency
    a, T = 1.0, classical_T(1.0)
    F_ideal = casimir_polder_free_energy(atom(IdealMetalProvider(), a), T)
    F_drude = casimir_polder_free_energy(atom(FresnelProvider(Drude(1e3, 1e-3)), a), T)
    assert F_drude == pytest.approx(F_ideal, rel=2e-3)


def test_pfa_ideal_sphere():
    s = plates(IdealMetalProvider(), 1.0)
    f = pfa_sphere_force(s, 0.0, 100.0)
    assert f == pytest.approx(-math.pi**3 * HBAR_C * 100.0 / 360.0, rel=1e-6)


def test_pfa_warns_for_small_radius():
    with pytest.warns(UserWarning):
        pfa_sphere_force(plates(IdealMetalProvider(), 1.0), 0.0, 5.0)


def test_domain_errors():
    with pytest.raises(DomainError):
        PlatePlateSystem(IdealMetalProvider(), a=0.0)
    with pytest.raises(DomainError):
        casimir_free_energy(plates(IdealMetalProvider(), 1.0), 0.0)
    with pytest.raises(DomainError):
        pfa_sphere_force(plates(IdealMetalProvider(), 1.0), 0.0, -1.0)
    with pytest.raises(TypeError):
        casimir_polder_energy_T0(plates(IdealMetalProvider(), 1.0))


def test_first_matsubara_dimensionless():
    assert first_matsubara(1.0, 300.0) == pytest.approx(4 * math.pi * K_B * 300.0 / HBAR_C)
