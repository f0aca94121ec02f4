import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bakhvalov_fem import (ConfigError, EvaluationError, MeshParams, PiecewiseLinear,
                           UndefinedRateError, build_mesh, convergence_rate, energy_error_continuous, energy_norm_discrete_diff,
                           hat_energy_norm, lagrange_interpolate, manufactured_solution, solve,
                           uniform_mesh)
from bakhvalov_fem import test_problem as make_test_problem


def test_zero_error():
    m = uniform_mesh(16)
    r = energy_error_continuous(lambda x: 0 * x, lambda x: 0 * x, PiecewiseLinear(m, np.zeros(17)), 1.0)
    assert r.e_energy == 0.0 and r.reliable


def test_sine_against_zero():
    m = uniform_mesh(16)
    r = energy_error_continuous(lambda x: np.sin(np.pi * x), lambda x: np.pi * np.cos(np.pi * x),
                                PiecewiseLinear(m, np.zeros(17)), 1.0)
    assert r.e_energy == pytest.approx(math.sqrt(math.pi**2 / 2 + 0.5), rel=1e-12)
    assert r.e_l2 == pytest.approx(math.sqrt(0.5), rel=1e-12)


def test_non_finite_integrand_reports_element():
    m = uniform_mesh(16)
    with pytest.raises(EvaluationError, match="element 8"):
        energy_error_continuous(lambda x: np.where((x > 0.5) & (x < 0.5625), np.nan, 0.0),
                                lambda x: 0 * x,
                                PiecewiseLinear(m, np.zeros(17)), 1.0)


def test_pythagoras_and_certificate():
    ms = manufactured_solution(1e-8, 1e-4)
    m = build_mesh(ms.mu0, ms.mu1, MeshParams(64))
    r = energy_error_continuous(ms.u, ms.du, solve(make_test_problem(1e-8, 1e-4), m), 1e-8)
    assert r.e_energy**2 == pytest.approx(r.e_l2**2 + r.e_h1w**2, rel=1e-12)
    assert r.quad_refinement_delta <= 1e-3 and r.reliable
    assert r.panels >= 8


def test_discrete_diff_zero_and_symmetric():
    ms = manufactured_solution(1e-8, 1e-4)
    m = build_mesh(ms.mu0, ms.mu1, MeshParams(32))
    v = lagrange_interpolate(ms.u, m)
    w = solve(make_test_problem(1e-8, 1e-4), m)
    assert energy_norm_discrete_diff(v, v, 1e-8) == 0.0
    assert energy_norm_discrete_diff(v, w, 1e-8) == energy_norm_discrete_diff(w, v, 1e-8)


def test_discrete_diff_single_hat():
    ms = manufactured_solution(1e-8, 1e-4)
    m = build_mesh(ms.mu0, ms.mu1, MeshParams(32))
    for i in (1, 8, 20, 31):
        e = np.zeros(33)
        e[i] = 1.0
        got = energy_norm_discrete_diff(PiecewiseLinear(m, e), PiecewiseLinear(m, np.zeros(33)), 1e-4)
        assert got == pytest.approx(hat_energy_norm(m, i, 1e-4), rel=1e-14)


def test_discrete_diff_matches_continuous_quadrature():
    ms = manufactured_solution(1e-6, 1e-4)
    m = build_mesh(ms.mu0, ms.mu1, MeshParams(64))
    v = lagrange_interpolate(ms.u, m)
    w = solve(make_test_problem(1e-6, 1e-4), m)
    d = v - w
    slope = lambda x: d.slopes[np.clip(np.searchsorted(m.nodes, x) - 1, 0, 63)]
    r = energy_error_continuous(d, slope, PiecewiseLinear(m, np.zeros(65)), 1e-6)
    assert energy_norm_discrete_diff(v, w, 1e-6) == pytest.approx(r.e_energy, rel=1e-9)


def test_discrete_diff_mesh_mismatch():
    a = PiecewiseLinear(uniform_mesh(16), np.zeros(17))
    b = PiecewiseLinear(uniform_mesh(16), np.zeros(17))
    with pytest.raises(ConfigError):
        energy_norm_discrete_diff(a, b, 1.0)


def test_rates():
    assert convergence_rate(0.4, 0.1) == 2.0
    assert convergence_rate(0.5, 0.5) == 0.0
    assert convergence_rate(0.89e-2, 0.28e-2) == pytest.approx(1.67, abs=0.01)


@pytest.mark.parametrize("a,b", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0), (float("nan"), 1.0)])
def test_undefined_rate(a, b):
    with pytest.raises(UndefinedRateError):
        convergence_rate(a, b)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-12, 1e3), st.floats(1e-12, 1e3))
def test_rate_antisymmetric(a, b):
    assert convergence_rate(a, b) == pytest.approx(-convergence_rate(b, a), abs=1e-12)


@pytest.mark.parametrize("eps1,eps2", [(1e-8, 1e-4), (1e-10, 1e-8), (1e-2, 1.0)])
def test_triangle_inequality(eps1, eps2):
    ms = manufactured_solution(eps1, eps2)
    for N in (16, 64, 256):
        m = build_mesh(ms.mu0, ms.mu1, MeshParams(N))
        uN = solve(make_test_problem(eps1, eps2), m)
        uI = lagrange_interpolate(ms.u, m)
        e = energy_error_continuous(ms.u, ms.du, uN, eps1).e_energy
        eI = energy_error_continuous(ms.u, ms.du, uI, eps1).e_energy
        assert e <= eI + energy_norm_discrete_diff(uI, uN, eps1) * (1 + 1e-9)
