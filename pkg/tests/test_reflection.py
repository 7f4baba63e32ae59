import math

import numpy as np
import pytest

from casimir_lab.constants import FINE_STRUCTURE, HBAR_C
from casimir_lab.errors import DomainError
from casimir_lab.reflection import (FresnelProvider, GrapheneConductivityProvider,
                                    GrapheneCorrelationProvider, GraphenePTProvider,
                                    HydrodynamicProvider, IdealMetalProvider, VacuumProvider,
                                    correlation_functions, fresnel, graphene_conductivity,
                                    graphene_correlation, graphene_pt, hydrodynamic,
                                    reflection_from_correlation)
from casimir_lab.response import (ConstantEps, ConstantEpsWithDC, Drude, HydrodynamicSheet,
                                  IdealMetal, Plasma)
from casimir_lab.tensor import GrapheneParams, tensor_components

PRISTINE = GrapheneParams(0.0, 0.0)
K = np.logspace(-2, 2, 9)


def test_vacuum_like_dielectric():
    r = fresnel(ConstantEps(1.0), 0.3, K)
    assert np.allclose(r.r_tm, 0) and np.allclose(r.r_te, 0)


def test_large_permittivity_approaches_ideal_metal():
    r = fresnel(ConstantEps(1e12), 0.3, 1.0)
    assert r.r_tm == pytest.approx(1.0, abs=1e-5)
    assert r.r_te == pytest.approx(-1.0, abs=1e-5)
    ideal = fresnel(IdealMetal(), 0.3, K)
    assert np.all(ideal.r_tm == 1) and np.all(ideal.r_te == -1)


def test_static_drude_plasma_dichotomy():
    d = fresnel(Drude(9.0, 0.03), 0.0, K)
    assert np.all(d.r_tm == 1) and np.all(d.r_te == 0)
    p = fresnel(Plasma(9.0), 0.0, K)
    kp = np.sqrt(K**2 + (9.0 / HBAR_C) ** 2)
    assert np.allclose(p.r_te, (K - kp) / (K + kp), rtol=1e-14)
    assert np.all(p.r_te < 0) and np.all(p.r_tm == 1)


def test_drude_small_frequency_te_vanishes():
    r = fresnel(Drude(9.0, 0.03), 1e-9, 1.0)
    assert abs(r.r_te) < 1e-4


def test_static_dielectric_limits():
    r = fresnel(ConstantEps(2.0), 0.0, K)
    assert np.allclose(r.r_tm, 1 / 3) and np.allclose(r.r_te, 0)
    dc = fresnel(ConstantEpsWithDC(2.0, 1e-3), 0.0, K)
    assert np.all(dc.r_tm == 1) and np.all(dc.r_te == 0)
    no_dc = fresnel(ConstantEpsWithDC(2.0, 0.0), 0.0, K)
    assert np.allclose(no_dc.r_tm, 1 / 3)


def test_magnetic_static_te():
    r = fresnel(ConstantEps(2.0, mu0=3.0), 0.0, 1.0)
    assert r.r_te == pytest.approx(0.5)


def test_hydrodynamic():
    sheet = HydrodynamicSheet(0.675)
    r = hydrodynamic(sheet, 0.0, np.array([0.675, 2.0]))
    assert np.all(r.r_tm == 1)
    assert r.r_te[0] == pytest.approx(-0.5, rel=1e-15)
    assert r.r_te[1] == pytest.approx(-0.675 / 2.675)


def test_pristine_static_values():
    r = graphene_pt(PRISTINE, 0.0, K, 0.0)
    tm = FINE_STRUCTURE * math.pi / (FINE_STRUCTURE * math.pi + 2 * PRISTINE.vf_ratio)
    te = -FINE_STRUCTURE * math.pi * PRISTINE.vf_ratio / (FINE_STRUCTURE * math.pi * PRISTINE.vf_ratio + 2)
    assert np.allclose(r.r_tm, tm, rtol=1e-13)
    assert np.allclose(r.r_te, te, rtol=1e-12)
    assert tm == pytest.approx(0.7747, abs=1e-4)
    assert te == pytest.approx(-3.82e-5, rel=1e-3)


def test_doped_static_te_vanishes():
    r = graphene_pt(GrapheneParams(0.0, 0.1), 0.0, np.array([0.1, 10.0]), 0.0)
    assert np.all(r.r_te == 0)


def test_reflection_bounded():
    rng = np.random.default_rng(3)
    w = rng.uniform(0, 1, 200)
    k = rng.uniform(0.01, 50, 200)
    for p in (PRISTINE, GrapheneParams(0.1, 0.02), GrapheneParams(0.0, 0.2)):
        graphene_pt(p, w, k, 30.0).check()
    for m in (Drude(9, 0.03), Plasma(9), ConstantEps(5), ConstantEpsWithDC(2, 0.1)):
        fresnel(m, w, k, 30.0).check()


def test_correlation_and_conductivity_routes_match_tensor():
    rng = np.random.default_rng(7)
    w = rng.uniform(1e-3, 1, 1000)
    k = 10 ** rng.uniform(-2, 2, 1000)
    p = GrapheneParams(0.1, 0.03)
    ref = graphene_pt(p, w, k, 40.0)
    for route in (graphene_correlation, graphene_conductivity):
        r = route(p, w, k, 40.0)
        assert np.max(np.abs(r.r_tm - ref.r_tm)) < 1e-12
        assert np.max(np.abs(r.r_te - ref.r_te)) < 1e-12


def test_zero_correlation_gives_zero_tm():
    r = reflection_from_correlation(np.zeros(3), -np.ones(3), 0.1, np.ones(3))
    assert np.all(r.r_tm == 0)


def test_static_transverse_correlation_undefined():
    tp = tensor_components(PRISTINE, 0.0, 1.0, 10.0)
    with pytest.raises(DomainError):
        correlation_functions(tp, 0.0)
    with pytest.raises(DomainError):
        GrapheneCorrelationProvider(PRISTINE).coefficients(0.0, 1.0, 10.0)


def test_origin_node_rejected():
    with pytest.raises(DomainError):
        fresnel(Plasma(9.0), 0.0, 0.0)


def test_provider_excess_matches_difference():
    prov = GraphenePTProvider(GrapheneParams(0.0, 0.1))
    w, k, T = np.array([0.0, 0.01, 0.2]), np.array([0.5, 3.0, 30.0]), 80.0
    ex = prov.excess(w, k, T)
    a, b = prov.coefficients(w, k, T), prov.coefficients_T0(w, k)
    assert np.allclose(ex.r_tm, a.r_tm - b.r_tm, rtol=1e-8, atol=1e-14)
    assert np.allclose(ex.r_te, a.r_te - b.r_te, rtol=1e-8, atol=1e-14)


def test_fresnel_provider_reference_branches():
    assert FresnelProvider(Drude(9, 0.03, relaxation="perfect_lattice")).temperature_dependent
    assert isinstance(FresnelProvider(ConstantEpsWithDC(2, 0.1)).reference, ConstantEps)
    plain = FresnelProvider(ConstantEps(2.0))
    assert not plain.temperature_dependent
    ex = plain.excess(0.1, K, 10.0)
    assert np.all(ex.r_tm == 0) and np.all(ex.r_te == 0)


def test_simple_providers():
    assert np.all(IdealMetalProvider().coefficients(0.1, K).r_te == -1)
    assert np.all(VacuumProvider().coefficients(0.1, K).r_tm == 0)
    assert HydrodynamicProvider().coefficients(0.0, 0.675).r_te == pytest.approx(-0.5)
    conductivity = GrapheneConductivityProvider(PRISTINE).coefficients(0.1, 1.0, 20.0)
    ref = GraphenePTProvider(PRISTINE).coefficients(0.1, 1.0, 20.0)
    assert conductivity.r_tm == pytest.approx(ref.r_tm, abs=1e-12)
