"""Legendre transformation, its Newton inverse, and the induced Hamiltonian.

Hyperregularity is never assumed: every inverse call can fail with
`NoConvergence` or `SingularHessian`, and evaluating the induced
Hamiltonian surfaces those failures to the caller.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence
from .fields import DiffConfig, ScalarField, fd_gradient, fd_mixed_block
from .lagrangian import DEFAULT_COND_TOL, _inverse_with_cond, el_vector_field
from .systems import DualPoint, HamiltonianSystem, LagrangianSystem, PrimalPoint
from .tulczyjew import ProlPointE


@dataclass(frozen=True)
class LegendreConfig:
    """Newton settings for inverting the fiber derivative."""

    newton_tol: float = 1e-12
    max_iter: int = 50

    def __post_init__(self):
        if not self.newton_tol > 0:
            raise ValueError("newton_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


def _fiber_grad(sys_L: LagrangianSystem, x, y, cfg):
    z = np.concatenate([x, y])
    return fd_gradient(sys_L.L, z, cfg)[sys_L.chart.m:]


def _fiber_hessian(sys_L: LagrangianSystem, x, y, cfg):
    m, n = sys_L.chart.m, sys_L.chart.n
    z = np.concatenate([x, y])
    W = fd_mixed_block(sys_L.L, z, range(m, m + n), range(m, m + n), cfg)
    return 0.5 * (W + W.T)


def legendre_map(sys_L: LagrangianSystem, pt: PrimalPoint,
                 cfg: DiffConfig | None = None) -> DualPoint:
    """Fiber derivative: (x, y) -> (x, dL/dy)."""
    return DualPoint(pt.x.copy(), _fiber_grad(sys_L, pt.x, pt.y, cfg))


def legendre_inverse(sys_L: LagrangianSystem, pt: DualPoint,
                     y_guess=None, cfg: LegendreConfig | None = None,
                     cond_tol: float = DEFAULT_COND_TOL,
                     diff_cfg: DiffConfig | None = None) -> PrimalPoint:
    """Newton solve of dL/dy(x, y) = p for y.

    The warm start defaults to y = p, which is exact for an identity fiber
    Hessian and keeps the routine stateless.
    """
    cfg = cfg or LegendreConfig()
    x = pt.x
    y = np.array(pt.p if y_guess is None else y_guess, dtype=float)
    for _ in range(cfg.max_iter):
        resid = _fiber_grad(sys_L, x, y, diff_cfg) - pt.p
        if np.linalg.norm(resid) <= cfg.newton_tol:
            return PrimalPoint(x.copy(), y)
        W = _fiber_hessian(sys_L, x, y, diff_cfg)
        Winv = _inverse_with_cond(W, cond_tol)
        y = y - Winv @ resid
    resid = np.linalg.norm(_fiber_grad(sys_L, x, y, diff_cfg) - pt.p)
    if resid <= cfg.newton_tol:
        return PrimalPoint(x.copy(), y)
    raise NoConvergence(
        f"Legendre inverse stalled at |dL/dy - p| = {resid:.3e} "
        f"after {cfg.max_iter} iterations")


def induced_hamiltonian(sys_L: LagrangianSystem,
                        cfg: LegendreConfig | None = None,
                        cond_tol: float = DEFAULT_COND_TOL,
                        diff_cfg: DiffConfig | None = None) -> HamiltonianSystem:
    """The Hamiltonian H = E_L o Leg^{-1} as a system on the same chart.

    H(x, p) = p . y* - L(x, y*) at the Newton solution y*, and the exact
    first derivatives dH/dp = y*, dH/dx = -dL/dx(x, y*) are wired in as
    the analytic gradient so downstream dynamics do not difference through
    the Newton iteration.
    """
    chart = sys_L.chart
    m = chart.m

    def solve(z):
        pt = DualPoint(z[:m], z[m:])
        return legendre_inverse(sys_L, pt, cfg=cfg, cond_tol=cond_tol,
                                diff_cfg=diff_cfg)

    def ev(z):
        sol = solve(z)
        return float(z[m:] @ sol.y - sys_L.L(sol.as_state()))

    def grad(z):
        sol = solve(z)
        Lx = fd_gradient(sys_L.L, sol.as_state(), diff_cfg)[:m]
        return np.concatenate([-Lx, sol.y])

    H = ScalarField(ev, m + chart.n, analytic_grad=grad)
    return HamiltonianSystem(chart, H)


def lleg_map(sys_L: LagrangianSystem, pt: ProlPointE,
             cfg: DiffConfig | None = None):
    """Prolonged Legendre map on (x, y; z, v) coordinates.

    Returns (x, p, z, w) with p = dL/dy and
    w_a = rho^i_b z^b d2L/dx^i dy^a + v^b d2L/dy^a dy^b.
    """
    chart = sys_L.chart
    m, n = chart.m, chart.n
    zfull = np.concatenate([pt.x, pt.y])
    p = fd_gradient(sys_L.L, zfull, cfg)[m:]
    M = fd_mixed_block(sys_L.L, zfull, range(m), range(m, m + n), cfg)
    W = _fiber_hessian(sys_L, pt.x, pt.y, cfg)
    rho = chart.rho_at(pt.x)
    w = M.T @ (rho @ pt.z) + W @ pt.v
    return pt.x.copy(), p, pt.z.copy(), w


def relatedness_defect(sys_L: LagrangianSystem, pt: PrimalPoint,
                       cfg: LegendreConfig | None = None,
                       cond_tol: float = DEFAULT_COND_TOL,
                       diff_cfg: DiffConfig | None = None) -> float:
    """How far the Legendre map fails to intertwine the two dynamics.

    Pushes the Euler-Lagrange section coefficients at ``pt`` through the
    prolonged Legendre map and compares with the Hamilton section
    coefficients of the induced Hamiltonian at the image point; for
    hyperregular L the two agree identically, so anything beyond
    differencing noise is a defect.
    """
    from .hamiltonian import hamilton_frame_coefficients

    xdot, ydot = el_vector_field(sys_L, pt, cond_tol, diff_cfg)
    prol = ProlPointE(pt.x, pt.y, pt.y.copy(), ydot)
    x_img, p_img, z_img, w_img = lleg_map(sys_L, prol, diff_cfg)

    sys_H = induced_hamiltonian(sys_L, cfg, cond_tol, diff_cfg)
    z_h, v_h = hamilton_frame_coefficients(sys_H, DualPoint(x_img, p_img),
                                           diff_cfg)
    return float(max(np.max(np.abs(z_img - z_h)), np.max(np.abs(w_img - v_h))))
