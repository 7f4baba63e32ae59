import numpy as np
import pytest

from casimir_lab.errors import DomainError
from casimir_lab.response import (AtomModel, ConstantEps, ConstantEpsWithDC, Drude,
                                  HydrodynamicSheet, IdealMetal, Plasma, permittivity_at,
                                  polarizability_at)


def test_constant_eps_any_frequency():
    assert np.allclose(permittivity_at(ConstantEps(2.0), np.array([0.0, 1.0, 50.0])), 2.0)


def test_plasma_at_plasma_frequency():
    assert permittivity_at(Plasma(9.0), 9.0) == pytest.approx(2.0, rel=1e-15)


def test_drude_direct_formula():
    assert permittivity_at(Drude(9.0, 0.03), 0.03) == pytest.approx(45001.0, rel=1e-12)


def test_dielectric_with_dc():
    assert permittivity_at(ConstantEpsWithDC(2.0, 1e-3), 1e-3) == pytest.approx(3.0)


def test_drude_tends_to_plasma():
    xi = np.logspace(0, 1, 20)  # 1e-5 agreement needs xi >> 1e5 gamma
    d = permittivity_at(Drude(9.0, 9e-6), xi)
    p = permittivity_at(Plasma(9.0), xi)
    assert np.allclose(d, p, rtol=1e-5, atol=0)


def test_perfect_lattice_relaxation_vanishes():
    m = Drude(9.0, 0.03, relaxation="perfect_lattice")
    assert m.gamma_at(295.0) == pytest.approx(0.03)
    assert m.gamma_at(29.5) == pytest.approx(0.0003)
    assert m.temperature_dependent
    assert not Drude(9.0, 0.03).temperature_dependent


@pytest.mark.parametrize("model", [Drude(9.0, 0.03), Plasma(9.0), ConstantEpsWithDC(2.0, 0.1)])
def test_divergent_models_reject_zero_frequency(model):
    with pytest.raises(DomainError):
        permittivity_at(model, 0.0)


def test_negative_frequency_rejected():
    with pytest.raises(DomainError):
        permittivity_at(ConstantEps(2.0), -1.0)


def test_ideal_metal_has_no_permittivity():
    with pytest.raises(DomainError):
        permittivity_at(IdealMetal(), 1.0)


def test_complex_argument_allowed():
    val = permittivity_at(Plasma(9.0), 9.0 * np.exp(0.25j * np.pi))
    assert val == pytest.approx(1 + 81 / (81 * 1j))


@pytest.mark.parametrize("bad", [lambda: Plasma(-1.0), lambda: Drude(9.0, -0.1),
                                 lambda: ConstantEps(0.5), lambda: Drude(9, 0.03, relaxation="x"),
                                 lambda: HydrodynamicSheet(0.0), lambda: AtomModel(1e-12, 0.0)])
def test_constructor_validation(bad):
    with pytest.raises(DomainError):
        bad()


@pytest.mark.parametrize("omega0, xi, factor", [(np.inf, 5.0, 1.0), (10.0, 10.0, 0.5),
                                                 (10.0, 30.0, 0.1)])
def test_polarizability(omega0, xi, factor):
    atom = AtomModel(2e-12, omega0)
    assert polarizability_at(atom, xi) == pytest.approx(2e-12 * factor, rel=1e-14)
