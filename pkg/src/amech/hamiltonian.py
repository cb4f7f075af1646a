"""Hamiltonian side: the canonical symplectic matrix, the Hamilton field,
Hamilton-Jacobi residuals, and Noether-style symmetry checks.

Hamilton equations on a chart:

    dx^i/dt = rho^i_a dH/dp_a
    dp_a/dt = -(C^g_ab p_g dH/dp_b + rho^i_a dH/dx^i)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebroid import AlgebroidChart, dE_function, dE_oneform
from .errors import NonFiniteField, PreconditionFailed, ShapeError
from .fields import DiffConfig, ScalarField, TensorField, VectorField, fd_gradient, fd_jacobian
from .systems import DualPoint, HamiltonianSystem, LagrangianSystem


@dataclass(frozen=True)
class SymplecticMatrix:
    """Canonical symplectic 2-section coefficients at one point of E*.

    Frame order is the n horizontal legs followed by the n vertical ones,
    so the matrix is [[Cp, I], [-I, 0]] with (Cp)_ab = C^g_ab p_g.
    """

    omega: np.ndarray


def canonical_symplectic(chart: AlgebroidChart, pt: DualPoint) -> SymplecticMatrix:
    n = chart.n
    if pt.p.shape != (n,):
        raise ShapeError("point does not match chart rank")
    C = chart.C_at(pt.x)
    Cp = np.einsum("gab,g->ab", C, pt.p)
    Cp = 0.5 * (Cp - Cp.T)
    omega = np.zeros((2 * n, 2 * n))
    omega[:n, :n] = Cp
    omega[:n, n:] = np.eye(n)
    omega[n:, :n] = -np.eye(n)
    return SymplecticMatrix(omega)


def _grad_split(sys: HamiltonianSystem, pt: DualPoint, cfg):
    grad = fd_gradient(sys.H, pt.as_state(), cfg)
    return grad[:sys.chart.m], grad[sys.chart.m:]


def _make_hamilton_eval(sys: HamiltonianSystem, cfg: DiffConfig):
    """Prepared state -> [xdot, pdot] evaluator (constants hoisted)."""
    chart = sys.chart
    m, n = chart.m, chart.n
    H = sys.H
    const = chart.is_constant
    rho_c = chart._const_rho if const else None
    C_c = chart._const_C.reshape(n, n * n) if const else None

    def evaluate(state):
        z = np.asarray(state, dtype=float)
        x, p = z[:m], z[m:]
        grad = fd_gradient(H, z, cfg)
        Hx, Hp = grad[:m], grad[m:]
        if const:
            rho, Cflat = rho_c, C_c
        else:
            rho = chart.rho_at(x)
            Cflat = chart.C_at(x).reshape(n, n * n)
        # (Cp)_ab Hp_b with (Cp)_ab = C^g_ab p_g
        pdot = -((p @ Cflat).reshape(n, n) @ Hp + rho.T @ Hx)
        out = np.concatenate([rho @ Hp, pdot])
        if not np.isfinite(out).all():
            raise NonFiniteField("Hamilton field evaluated non-finite")
        return out

    return evaluate


def hamilton_vector_field(sys: HamiltonianSystem, pt: DualPoint,
                          cfg: DiffConfig | None = None):
    """Coordinate velocities (xdot, pdot) of the Hamilton field."""
    cfg = cfg or DiffConfig()
    out = _make_hamilton_eval(sys, cfg)(pt.as_state())
    m = sys.chart.m
    return out[:m], out[m:]


def hamilton_frame_coefficients(sys: HamiltonianSystem, pt: DualPoint,
                                cfg: DiffConfig | None = None):
    """Coefficients (z, v) of the Hamilton section in the adapted frame.

    z are the horizontal coefficients dH/dp and v the vertical ones; the
    anchor maps these onto the coordinate velocities returned by
    `hamilton_vector_field`.
    """
    Hx, Hp = _grad_split(sys, pt, cfg)
    rho = sys.chart.rho_at(pt.x)
    C = sys.chart.C_at(pt.x)
    v = -(np.einsum("gab,g,b->a", C, pt.p, Hp) + rho.T @ Hx)
    return Hp, v


def hamilton_field(sys: HamiltonianSystem, cfg: DiffConfig | None = None):
    """State-space velocity closure for integrators (state = [x, p])."""
    cfg = cfg or DiffConfig()
    return _make_hamilton_eval(sys, cfg)


def pullback_section(chart: AlgebroidChart, H: ScalarField,
                     alpha: VectorField) -> ScalarField:
    """The base function x -> H(x, alpha(x))."""
    m = chart.m

    def ev(x):
        return H(np.concatenate([x, alpha(x)]))

    return ScalarField(ev, m)


def hj_residual(chart: AlgebroidChart, H: ScalarField, alpha: VectorField, x,
                cfg: DiffConfig | None = None):
    """Hamilton-Jacobi certificates for a candidate section alpha of E*.

    Returns the pair (cocycle_defect, hj_defect): the first is the
    evaluated 2-form of d^E alpha (alpha must be a cocycle), the second
    the algebroid differential of H o alpha (the Hamilton-Jacobi equation
    proper).  Both vanish exactly when alpha solves the problem; they are
    reported separately because they are separate hypotheses.
    """
    x = np.asarray(x, dtype=float)
    a = alpha(x)
    if a.shape != (chart.n,):
        raise ShapeError(f"alpha(x) must have shape ({chart.n},)")
    cocycle = dE_oneform(chart, alpha, x, cfg)
    hj = dE_function(chart, pullback_section(chart, H, alpha), x, cfg)
    return cocycle, hj


def symmetry_defect(sys: HamiltonianSystem, X: VectorField, pt: DualPoint,
                    cfg: DiffConfig | None = None) -> float:
    """Derivative of H along the complete lift of the section X to E*.

    Zero means X generates a symmetry of H, in which case the momentum
    `conserved_momentum` is a constant of the motion.
    """
    Xv = X(pt.x)
    if Xv.shape != (sys.chart.n,):
        raise ShapeError("X must output n components")
    Hx, Hp = _grad_split(sys, pt, cfg)
    rho = sys.chart.rho_at(pt.x)
    C = sys.chart.C_at(pt.x)
    dX = fd_jacobian(X, pt.x, cfg)            # (beta, i)
    lift_p = np.einsum("ia,bi,b->a", rho, dX, pt.p) \
        + np.einsum("gab,g,b->a", C, pt.p, Xv)
    return float((rho @ Xv) @ Hx - lift_p @ Hp)


def conserved_momentum(X: VectorField, pt: DualPoint) -> float:
    """The linear momentum function p . X(x) attached to a section X."""
    return float(pt.p @ X(pt.x))


def dE_section(chart: AlgebroidChart, S: ScalarField,
               cfg: DiffConfig | None = None) -> VectorField:
    """The exact section d^E S of E*, as a field over the base."""

    def ev(x):
        return dE_function(chart, S, x, cfg)

    return TensorField(ev, chart.m, shape=(chart.n,))


def action_rate_defect(sys_L: LagrangianSystem, S: ScalarField, x,
                       tol: float = 1e-6,
                       cfg: DiffConfig | None = None,
                       leg_cfg=None) -> float:
    """Check that S grows along the flow at the Lagrangian's rate.

    Requires alpha = d^E S to pass both Hamilton-Jacobi residuals and
    H o alpha = 0 at x (PreconditionFailed otherwise); then returns
    |d(S o c)/dt - L(gamma)| with gamma the Legendre preimage of alpha(x)
    and d(S o c)/dt evaluated through the anchor.
    """
    from .legendre import induced_hamiltonian, legendre_inverse

    chart = sys_L.chart
    x = np.asarray(x, dtype=float)
    sys_H = induced_hamiltonian(sys_L, leg_cfg)
    alpha = dE_section(chart, S, cfg)
    cocycle, hj = hj_residual(chart, sys_H.H, alpha, x, cfg)
    h_on_alpha = pullback_section(chart, sys_H.H, alpha)(x)
    worst = max(float(np.max(np.abs(cocycle))) if cocycle.size else 0.0,
                float(np.max(np.abs(hj))) if hj.size else 0.0)
    if worst > tol:
        raise PreconditionFailed(
            f"alpha = d^E S fails the Hamilton-Jacobi residuals: {worst:.3e} > {tol:.1e}")
    if abs(h_on_alpha) > tol:
        raise PreconditionFailed(
            f"H o alpha = {h_on_alpha:.3e} is not zero within {tol:.1e}")
    gamma = legendre_inverse(sys_L, DualPoint(x, alpha(x)), cfg=leg_cfg)
    grad_S = fd_gradient(S, x, cfg)
    rate = float((chart.rho_at(x) @ gamma.y) @ grad_S)
    return abs(rate - sys_L.L(gamma.as_state()))
