"""The published tables are reproduced with tau/p = 5 and one-point assembly.

With the documented tau = 2 the energy errors come out about 15-20 % low
(see test_acceptance criteria 1-3); tau = 2.5 with p = 0.5 matches every
graded cell.  The tables also keep the layers graded once N exceeds mu_0,
which ``require_mu_ge_n=False`` reproduces.
"""
import pytest

from bakhvalov_fem import DEFAULT_ASSEMBLY, MIDPOINT, check_against_reference, run_study, table_config
from bakhvalov_fem.study import solve_cell


@pytest.mark.parametrize("tid", [3, 4, 5, 6])
def test_small_eps_columns_reproduce_at_tau_2_5(tid):
    t = run_study(table_config(tid, eps1_list=(1e-8, 1e-10), tau=2.5))
    rep = check_against_reference(t, tid)
    assert rep.passed, rep.summary()
    assert len(rep.checked) == 34


def test_tau_over_p_is_what_matters():
    a = solve_cell(1e-8, 1e-4, 64, tau=2.5, p=0.5)
    b = solve_cell(1e-8, 1e-4, 64, tau=1.25, p=0.25)
    assert a.e_energy == b.e_energy and a.e_superclose == b.e_superclose


def test_midpoint_assembly_matches_supercloseness_and_gauss_does_not():
    mid = solve_cell(1e-8, 1e-4, 16, tau=2.5, quad=MIDPOINT)
    g5 = solve_cell(1e-8, 1e-4, 16, tau=2.5, quad=DEFAULT_ASSEMBLY)
    # printed value 0.14E-1
    assert abs(mid.e_superclose / 0.014 - 1) <= 0.05
    assert abs(g5.e_superclose / 0.014 - 1) > 0.05


@pytest.mark.parametrize("tid", [1, 3, 4, 5, 6])
def test_full_tables_with_relaxed_grading(tid):
    t = run_study(table_config(tid, tau=2.5, require_mu_ge_n=False, jobs=2))
    rep = check_against_reference(t, tid)
    assert rep.passed, "\n".join(v.__repr__() for v in rep.failures)


def test_full_table2_with_relaxed_grading():
    t = run_study(table_config(2, tau=2.5, require_mu_ge_n=False, jobs=2))
    rep = check_against_reference(t, 2)
    # only the pre-asymptotic 1.85 printed at eps1 = 1e-2, N = 64 misses the
    # 2.00 +- 0.15 target; the computed rate reproduces the printed one
    assert [(v.eps1, v.N, v.kind) for v in rep.failures] == [(1e-2, 64, "rate")]
    v = rep.failures[0]
    assert abs(v.computed - v.printed) <= 0.05
