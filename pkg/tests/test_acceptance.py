"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary lists one
PASS/FAIL line per criterion.  Criteria 1-3 (value matching at tau = 2) and
7 (interpolation orders) fail by design of the numbers, not of the code;
see the README for the analysis.
"""
import math
import os
import time
from types import SimpleNamespace

import numpy as np
import pytest

from bakhvalov_fem import (DEFAULT_ASSEMBLY, MeshParams, QuadratureRule, StudyConfig, assemble,
                           build_mesh, check_against_reference, convergence_rate,
                           layer_interpolation_errors, manufactured_solution, mesh_diagnostics,
                           pi_interpolate, run_study, table_config)
from bakhvalov_fem import test_problem as make_test_problem
from bakhvalov_fem.mesh import FALLBACK, GRADED, BakhvalovMesh
from bakhvalov_fem.study import TABLE_EPS1, TABLE_N, solve_cell
from oracles import dense_oracle

SMALL = (1e-8, 1e-10)
JOBS = max(1, min(4, os.cpu_count() or 1))


@pytest.fixture(scope="session")
def grids():
    """Every cell of the three published grids at the default tau = 2."""
    cfg = StudyConfig(TABLE_EPS1, (1.0, 1e-4, 1e-8), TABLE_N, jobs=JOBS)
    return run_study(cfg)


def report_failures(rep):
    return "\n".join(f"eps1={v.eps1:g} N={v.N} {v.kind}: computed {v.computed:.4g}, "
                     f"printed {v.printed}, tol {v.tolerance}" for v in rep.failures)


def test_criterion_1():
    """Table 3 energy errors and rates at tau = 2, eps1 in {1e-8, 1e-10}; full table < 10 s"""
    t0 = time.perf_counter()
    full = run_study(table_config(3))
    elapsed = time.perf_counter() - t0
    sub = run_study(table_config(3, eps1_list=SMALL))
    rep = check_against_reference(sub, 3)
    assert elapsed < 10.0, f"full table took {elapsed:.1f} s"
    assert not full.failures
    assert rep.passed, f"{len(rep.failures)} of {len(rep.checked)} checks fail\n" + report_failures(rep)


def test_criterion_2():
    """Table 4 supercloseness values and rates at tau = 2, eps1 in {1e-8, 1e-10}"""
    rep = check_against_reference(run_study(table_config(4, eps1_list=SMALL)), 4)
    assert rep.passed, f"{len(rep.failures)} of {len(rep.checked)} checks fail\n" + report_failures(rep)


@pytest.mark.parametrize("tid", [5, 6])
def test_criterion_3(tid):
    """Tables 5-6 (eps2 = 1e-8) values and rates at tau = 2, eps1 in {1e-8, 1e-10}"""
    rep = check_against_reference(run_study(table_config(tid, eps1_list=SMALL)), tid)
    assert rep.passed, f"{len(rep.failures)} of {len(rep.checked)} checks fail\n" + report_failures(rep)


def fallback_columns():
    cols = [(e1, 1.0) for e1 in TABLE_EPS1]
    cols += [(1.0, e2) for e2 in (1e-4, 1e-8)]
    return cols


def test_criterion_4(grids):
    """Fallback columns: energy rate 1.00 +- 0.10, supercloseness rate 2.00 +- 0.15 over the last four doublings"""
    bad = []
    for e1, e2 in fallback_columns():
        for N in TABLE_N[-5:-1]:
            r = grids.get(e1, e2, N)
            assert r.mu0 < N
            if abs(r.p_energy - 1.0) > 0.10:
                bad.append(f"eps1={e1:g} eps2={e2:g} N={N} energy rate {r.p_energy:.3f}")
            if abs(r.p_superclose - 2.0) > 0.15:
                bad.append(f"eps1={e1:g} eps2={e2:g} N={N} superclose rate {r.p_superclose:.3f}")
    assert not bad, "\n".join(bad)


def test_criterion_5(grids):
    """Galerkin residual <= 1e-10 on every cell of the three table grids"""
    assert len(grids.rows) == 162 and not grids.failures
    worst = max(grids.rows, key=lambda r: r.galerkin_residual)
    assert worst.galerkin_residual <= 1e-10, worst


def test_criterion_6():
    """Mesh-size bounds at tau = 2.5: width brackets, T argmax at an endpoint, scaled products non-increasing"""
    ms = manufactured_solution(1e-8, 1e-4)
    products = {}
    for N in (64, 128, 256, 512, 1024):
        d = mesh_diagnostics(build_mesh(ms.mu0, ms.mu1, MeshParams(N, 2.5, 0.5)))
        assert d.sizes_ok, (N, d)
        for side in (d.left, d.right):
            assert side is not None, N
            assert side.T_at_endpoint, (N, side.side, side.T_argmax)
            for m, v in side.scaled_products.items():
                products.setdefault((side.side, m), []).append(v)
    for key, seq in products.items():
        for a, b in zip(seq, seq[1:]):
            assert b <= 1.05 * a, (key, seq)


def test_criterion_7():
    """Interpolation orders at tau = 2.5: ||E_j - E_j^I|| >= 2.4, scaled |E_j - E_j^I|_1 >= 0.95, ||u - u^I||_E >= 1.9"""
    eps1, eps2, tau = 1e-10, 1e-8, 2.5
    ms = manufactured_solution(eps1, eps2)
    Ns = (64, 128, 256, 512, 1024)
    l2 = {"E0": [], "E1": []}
    h1 = {"E0": [], "E1": []}
    energy = []
    for N in Ns:
        errs = layer_interpolation_errors(ms, build_mesh(ms.mu0, ms.mu1, MeshParams(N, tau)))
        for name, mu in (("E0", ms.mu0), ("E1", ms.mu1)):
            l2[name].append(errs[name][0])
            h1[name].append(errs[name][1] / math.sqrt(mu))
        energy.append(solve_cell(eps1, eps2, N, tau=tau).e_interp)

    def orders(seq):
        return [convergence_rate(a, b) for a, b in zip(seq, seq[1:])]

    lines = []
    for label, seq, bound in ([(f"||{j} - {j}^I||", l2[j], 2.4) for j in l2]
                              + [(f"mu^-1/2 |{j} - {j}^I|_1", h1[j], 0.95) for j in h1]
                              + [("||u - u^I||_E", energy, 1.9)]):
        p = orders(seq)
        if min(p) < bound:
            lines.append(f"{label}: orders {', '.join(f'{x:.2f}' for x in p)} (need >= {bound})")
    assert not lines, "\n".join(lines)


def test_criterion_8(grids):
    """Self-consistency: quadrature delta, energy Pythagoras, closed-form pe1 energy, dense assembly oracle"""
    for r in grids.rows:
        assert r.quad_delta <= 1e-3, r
        assert r.e_energy**2 == pytest.approx(r.e_l2**2 + r.e_h1w**2, rel=1e-12, abs=0), r

    rule = QuadratureRule(10)
    for r in grids.rows:
        if r.right_mode != GRADED:
            continue
        ms = manufactured_solution(r.eps1, r.eps2)
        m = build_mesh(ms.mu0, ms.mu1, MeshParams(r.N, r.tau, r.p))
        b = pi_interpolate(ms, m)
        total = 0.0
        for e, rising in ((b.node - 1, True), (b.node, False)):
            h = m.h[e]
            slope = (1.0 if rising else -1.0) / h
            hat = (lambda t: t) if rising else (lambda t: 1 - t)
            v = b.pe1_node_value
            total += h * rule.integrate(lambda t: ms.eps1 * (v * slope) ** 2 + (v * hat(t)) ** 2)
        assert b.pe1_energy == pytest.approx(math.sqrt(total), rel=1e-12, abs=0), r

    meshes = []
    for e1, e2 in ((1e-8, 1e-4), (1.0, 1.0), (1e-10, 1e-8), (1e-2, 1.0)):
        ms = manufactured_solution(e1, e2)
        meshes.append((e1, e2, build_mesh(ms.mu0, ms.mu1, MeshParams(16))))
    # N = 8 is below the mesh minimum, so its uniform mesh is built directly
    meshes.append((1e-8, 1e-4, BakhvalovMesh(SimpleNamespace(N=8, tau=2.0, p=0.5), np.arange(9) / 8,
                                             np.full(8, 1 / 8), 0.25, 0.25, 1.0, 1.0,
                                             FALLBACK, FALLBACK)))
    for e1, e2, m in meshes:
        prob = make_test_problem(e1, e2)
        A, F = dense_oracle(prob, m)
        s = assemble(prob, m, DEFAULT_ASSEMBLY)
        assert np.abs(s.to_dense() - A).max() <= 1e-9 * np.abs(A).max(), (e1, e2, m.N)
        assert np.abs(s.rhs - F).max() <= 1e-9 * np.abs(F).max(), (e1, e2, m.N)


def test_criterion_9():
    """Table 3 grid CSV is byte-identical for one and several workers"""
    a = run_study(table_config(3, jobs=1)).to_csv()
    b = run_study(table_config(3, jobs=max(2, JOBS))).to_csv()
    assert a.encode() == b.encode()
