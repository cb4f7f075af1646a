import numpy as np
import pytest

from amech import (AlgebroidChart, DualPoint, IntegratorConfig,
                   PreconditionFailed, ScalarField, TensorField,
                   action_rate_defect, canonical_symplectic,
                   conserved_momentum, dE_section, drift, hamilton_field,
                   hamilton_frame_coefficients, hamilton_vector_field,
                   hj_residual, poisson_bivector, rk4_integrate,
                   symmetry_defect)
from amech.systems import HamiltonianSystem, LagrangianSystem
from helpers import classical_hamilton_rhs, lie_poisson_so3_rhs, rk4_reference


def free_hamiltonian(chart):
    m = chart.m
    dim = m + chart.n
    return HamiltonianSystem(chart, ScalarField(
        lambda z: 0.5 * float(z[m:] @ z[m:]), dim,
        analytic_grad=lambda z: np.concatenate([np.zeros(m), z[m:]])))


def test_canonical_symplectic_flat(standard2):
    om = canonical_symplectic(standard2, DualPoint(np.zeros(2), np.ones(2))).omega
    expect = np.zeros((4, 4))
    expect[:2, 2:] = np.eye(2)
    expect[2:, :2] = -np.eye(2)
    assert np.array_equal(om, expect)


def test_canonical_symplectic_so3(so3_chart):
    om = canonical_symplectic(so3_chart,
                              DualPoint(np.zeros(1), np.array([0., 0., 1.]))).omega
    assert om[0, 1] == 1.0 and om[1, 0] == -1.0
    assert np.max(np.abs(om + om.T)) == 0.0


def test_canonical_symplectic_unit_determinant(rng):
    # nondegeneracy: det [[Cp, I], [-I, 0]] = 1 for any antisymmetric block
    for n in (2, 3, 5, 7):
        A = rng.standard_normal((n, n))
        A = A - A.T
        om = np.block([[A, np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
        assert abs(np.linalg.det(om) - 1.0) <= 1e-9


def test_hamilton_field_free_particle(standard2, rng):
    sys = free_hamiltonian(standard2)
    p = rng.standard_normal(2)
    xdot, pdot = hamilton_vector_field(sys, DualPoint(rng.standard_normal(2), p))
    assert np.allclose(xdot, p, atol=1e-12)
    assert np.max(np.abs(pdot)) <= 1e-12


def test_hamilton_field_rigid_body_lie_poisson(rigid_body):
    # frozen value (-1/6, 0, 0), cross-checked against pdot = p x I^-1 p
    pt = DualPoint(np.array([0.0]), np.array([0.0, 1.0, 1.0]))
    _, pdot = hamilton_vector_field(rigid_body.sys_H, pt)
    assert np.allclose(pdot, [-1.0 / 6.0, 0.0, 0.0], atol=1e-12)
    oracle = lie_poisson_so3_rhs([1.0, 2.0, 3.0], pt.p)
    assert np.allclose(pdot, oracle, atol=1e-12)


def test_hamilton_field_basic_hamiltonian_is_static(so3_chart):
    sys = HamiltonianSystem(so3_chart, ScalarField(
        lambda z: np.sin(z[0]), 4,
        analytic_grad=lambda z: np.array([np.cos(z[0]), 0, 0, 0])))
    xdot, pdot = hamilton_vector_field(sys, DualPoint(np.array([0.3]),
                                                      np.ones(3)))
    assert np.all(xdot == 0.0) and np.all(pdot == 0.0)


def test_hamilton_field_matches_classical_oracle(standard2, rng):
    def ev(z):
        x, p = z[:2], z[2:]
        return 0.5 * (1 + 0.3 * np.sin(x[1])) * p[0] ** 2 + 0.5 * p[1] ** 2 \
            + 0.1 * p[0] * p[1] + 0.5 * x @ x

    def grad(z):
        x, p = z[:2], z[2:]
        return np.array([
            x[0],
            0.15 * np.cos(x[1]) * p[0] ** 2 + x[1],
            (1 + 0.3 * np.sin(x[1])) * p[0] + 0.1 * p[1],
            p[1] + 0.1 * p[0],
        ])

    sys = HamiltonianSystem(standard2, ScalarField(ev, 4, analytic_grad=grad))
    for _ in range(25):
        state = rng.uniform(-1, 1, 4)
        xdot, pdot = hamilton_vector_field(sys, DualPoint(state[:2], state[2:]))
        oracle = classical_hamilton_rhs(ev, grad, 2, state)
        assert np.max(np.abs(np.concatenate([xdot, pdot]) - oracle)) <= 1e-10


def test_hamilton_field_is_poisson_flow(rigid_body, wong_abelian, rng):
    # field_u = sum_w dH_w Lambda[w, u] (the bivector contracted on dH)
    for mdl in (rigid_body, wong_abelian):
        chart = mdl.chart
        from amech.fields import fd_gradient
        for _ in range(50):
            pt = DualPoint(rng.uniform(-0.5, 0.5, chart.m),
                           rng.standard_normal(chart.n))
            xdot, pdot = hamilton_vector_field(mdl.sys_H, pt)
            lam = poisson_bivector(chart, pt).matrix
            gradH = fd_gradient(mdl.sys_H.H, pt.as_state())
            flow = gradH @ lam
            assert np.max(np.abs(np.concatenate([xdot, pdot]) - flow)) <= 1e-10


def test_hamilton_frame_coefficients_project_to_field(atiyah_so3, rng):
    pt = DualPoint(rng.uniform(-0.5, 0.5, 2), rng.standard_normal(5))
    z, v = hamilton_frame_coefficients(atiyah_so3.sys_H, pt)
    xdot, pdot = hamilton_vector_field(atiyah_so3.sys_H, pt)
    rho = atiyah_so3.chart.rho_at(pt.x)
    assert np.allclose(rho @ z, xdot, atol=1e-12)
    assert np.allclose(v, pdot, atol=1e-12)


def hj_line_setup():
    chart = AlgebroidChart.standard(1)
    H = ScalarField(lambda z: 0.5 * z[1] ** 2 - 0.5, 2,
                    analytic_grad=lambda z: np.array([0.0, z[1]]))
    return chart, H


def test_hj_residual_linear_action():
    chart, H = hj_line_setup()
    S = ScalarField(lambda x: x[0], 1)
    alpha = dE_section(chart, S)
    cocycle, hj = hj_residual(chart, H, alpha, np.array([0.4]))
    assert np.max(np.abs(cocycle)) <= 1e-8
    assert np.max(np.abs(hj)) <= 1e-8


def test_hj_residual_zero_section(standard2):
    sys = free_hamiltonian(standard2)
    alpha = TensorField(lambda x: np.zeros(2), 2, shape=(2,))
    cocycle, hj = hj_residual(standard2, sys.H, alpha, np.array([0.3, -0.8]))
    assert np.max(np.abs(cocycle)) <= 1e-12
    assert np.max(np.abs(hj)) <= 1e-12


def test_hj_residual_nonzero_certificate():
    chart = AlgebroidChart.standard(1)
    H = ScalarField(lambda z: 0.5 * z[1] ** 2, 2,
                    analytic_grad=lambda z: np.array([0.0, z[1]]))
    S = ScalarField(lambda x: 0.5 * x[0] ** 2, 1)
    alpha = dE_section(chart, S)
    x = np.array([0.7])
    _, hj = hj_residual(chart, H, alpha, x)
    assert abs(hj[0] - 0.7) <= 1e-6


def test_symmetry_defect_translations(standard2, rng):
    sys = free_hamiltonian(standard2)
    X = TensorField(lambda x: np.array([1.0, 0.0]), 2, shape=(2,))
    pt = DualPoint(rng.standard_normal(2), rng.standard_normal(2))
    assert abs(symmetry_defect(sys, X, pt)) <= 1e-10
    assert conserved_momentum(X, pt) == pt.p[0]


def test_symmetry_defect_partial_translation_invariance(standard2, rng):
    # H depends on x1 only; the x2-translation survives
    sys = HamiltonianSystem(standard2, ScalarField(
        lambda z: 0.5 * z[2:] @ z[2:] + np.cos(z[0]), 4,
        analytic_grad=lambda z: np.array([-np.sin(z[0]), 0.0, z[2], z[3]])))
    e2 = TensorField(lambda x: np.array([0.0, 1.0]), 2, shape=(2,))
    e1 = TensorField(lambda x: np.array([1.0, 0.0]), 2, shape=(2,))
    pt = DualPoint(rng.standard_normal(2), rng.standard_normal(2))
    assert abs(symmetry_defect(sys, e2, pt)) <= 1e-10
    assert conserved_momentum(e2, pt) == pt.p[1]
    pt_flag = DualPoint(np.array([1.0, 0.0]), np.zeros(2))
    assert abs(symmetry_defect(sys, e1, pt_flag)) >= 1e-3


def test_symmetry_defect_so3_rotation(rigid_body, rng):
    sys = free_hamiltonian(rigid_body.chart)
    X = TensorField(lambda x: np.array([1.0, 0.0, 0.0]), 1, shape=(3,))
    pt = DualPoint(np.array([0.0]), rng.standard_normal(3))
    assert abs(symmetry_defect(sys, X, pt)) <= 1e-10


def test_noether_momentum_conservation(standard2):
    # x1-translation-invariant Hamiltonian conserves p1 along the flow
    sys = HamiltonianSystem(standard2, ScalarField(
        lambda z: 0.5 * z[2:] @ z[2:] + np.cos(z[1]), 4,
        analytic_grad=lambda z: np.array([0.0, -np.sin(z[1]), z[2], z[3]])))
    traj = rk4_integrate(hamilton_field(sys), np.array([0.0, 0.2, 0.7, 0.1]),
                         IntegratorConfig(dt=1e-3, t_end=10.0),
                         {"p1": lambda s: float(s[2])})
    assert drift(traj, "p1")[0] <= 1e-8


def test_hamiltonian_conservation_quadratic(rigid_body):
    H = rigid_body.sys_H.H
    traj = rk4_integrate(hamilton_field(rigid_body.sys_H),
                         np.array([0.0, 0.2, 1.0, 0.5]),
                         IntegratorConfig(dt=1e-3, t_end=10.0),
                         {"H": lambda s: H(s)})
    assert drift(traj, "H")[0] <= 1e-8


def test_lifted_hj_curve_solves_hamilton_equations():
    # forward direction of the Hamilton-Jacobi theorem at desk scale
    chart, H = hj_line_setup()
    sys = HamiltonianSystem(chart, H)
    S = ScalarField(lambda x: x[0], 1)
    alpha = dE_section(chart, S)

    def base_rhs(x):
        z, _ = hamilton_frame_coefficients(sys, DualPoint(x, alpha(x)))
        return chart.rho_at(x) @ z

    dt = 1e-3
    cs = rk4_reference(base_rhs, np.array([0.1]), dt, 200)
    mus = np.array([alpha(c) for c in cs])
    dc = (cs[2:] - cs[:-2]) / (2 * dt)
    dmu = (mus[2:] - mus[:-2]) / (2 * dt)
    worst = 0.0
    for k in range(1, cs.shape[0] - 1):
        xdot, pdot = hamilton_vector_field(sys, DualPoint(cs[k], mus[k]))
        worst = max(worst, np.max(np.abs(dc[k - 1] - xdot)),
                    np.max(np.abs(dmu[k - 1] - pdot)))
    assert worst <= 1e-6


def test_action_rate_defect_linear_action():
    chart = AlgebroidChart.standard(1)
    # L = y^2/2 + 1/2, so H = p^2/2 - 1/2 and S(x) = x solves H o dS = 0
    sys_L = LagrangianSystem(chart, ScalarField(
        lambda z: 0.5 * z[1] ** 2 + 0.5, 2,
        analytic_grad=lambda z: np.array([0.0, z[1]])))
    S = ScalarField(lambda x: x[0], 1)
    assert action_rate_defect(sys_L, S, np.array([0.3])) <= 1e-8


def test_action_rate_defect_rest_case(standard2):
    sys_L = LagrangianSystem(standard2, ScalarField(
        lambda z: 0.5 * z[2:] @ z[2:], 4,
        analytic_grad=lambda z: np.concatenate([np.zeros(2), z[2:]])))
    S = ScalarField(lambda x: 1.25, 2)
    assert action_rate_defect(sys_L, S, np.array([0.4, -0.2])) <= 1e-12


def test_action_rate_defect_rejects_wrong_action():
    chart = AlgebroidChart.standard(1)
    sys_L = LagrangianSystem(chart, ScalarField(
        lambda z: 0.5 * z[1] ** 2 + 0.5, 2,
        analytic_grad=lambda z: np.array([0.0, z[1]])))
    S = ScalarField(lambda x: 0.5 * x[0] ** 2, 1)
    with pytest.raises(PreconditionFailed):
        action_rate_defect(sys_L, S, np.array([1.3]))
