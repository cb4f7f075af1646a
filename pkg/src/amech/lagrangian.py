"""Lagrangian side: Cartan data, regularity, the Euler-Lagrange field.

The dynamics on a chart with anchor rho and structure tensor C is

    dx^i/dt = rho^i_a y^a
    d/dt (dL/dy^a) = rho^i_a dL/dx^i - C^g_ab y^b dL/dy^g

and for regular L the explicit field solves the second equation through
the inverse fiber Hessian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteField, ShapeError, SingularHessian
from .fields import DiffConfig, fd_gradient, fd_mixed_block
from .systems import LagrangianSystem, PrimalPoint

DEFAULT_COND_TOL = 1e10


@dataclass(frozen=True)
class CartanData:
    """Pointwise Cartan objects of a Lagrangian.

    ``theta`` are the fiber-derivative components dL/dy, ``omega`` is the
    2n x 2n matrix of the Cartan 2-section in the adapted frame (first the
    n horizontal legs, then the n vertical ones), ``energy`` is
    y . dL/dy - L and ``W`` the symmetrized fiber Hessian.
    """

    theta: np.ndarray
    omega: np.ndarray
    energy: float
    W: np.ndarray


def _pieces(sys: LagrangianSystem, pt: PrimalPoint, cfg, need_mixed=True):
    """Shared derivative harvest: gradients, fiber Hessian, mixed block."""
    m, n = sys.chart.m, sys.chart.n
    z = pt.as_state()
    grad = fd_gradient(sys.L, z, cfg)
    Lx, Ly = grad[:m], grad[m:]
    W = fd_mixed_block(sys.L, z, range(m, m + n), range(m, m + n), cfg)
    W = 0.5 * (W + W.T)
    M = fd_mixed_block(sys.L, z, range(m), range(m, m + n), cfg) if need_mixed \
        else None
    return z, Lx, Ly, W, M


def _inverse_with_cond(W: np.ndarray, cond_tol: float) -> np.ndarray:
    """Dense inverse with a 1-norm condition estimate guard."""
    try:
        Winv = np.linalg.inv(W)
    except np.linalg.LinAlgError as exc:
        raise SingularHessian(f"fiber Hessian is singular: {exc}") from exc
    cond = np.abs(W).sum(axis=0).max() * np.abs(Winv).sum(axis=0).max()
    if not np.isfinite(cond) or cond > cond_tol:
        raise SingularHessian(
            f"fiber Hessian condition estimate {cond:.3e} exceeds {cond_tol:.1e}")
    return Winv


def cartan_data(sys: LagrangianSystem, pt: PrimalPoint,
                cfg: DiffConfig | None = None) -> CartanData:
    """Cartan 1- and 2-section coefficients, energy, and fiber Hessian."""
    z, Lx, Ly, W, M = _pieces(sys, pt, cfg)
    rho = sys.chart.rho_at(pt.x)
    C = sys.chart.C_at(pt.x)
    n = sys.chart.n
    # horizontal-horizontal block: Ly_g C^g_ab - (rho^i_a M_ib - rho^i_b M_ia)
    P = rho.T @ M                          # P[a, b] = rho^i_a M_ib
    TT = np.einsum("g,gab->ab", Ly, C) - (P - P.T)
    omega = np.zeros((2 * n, 2 * n))
    omega[:n, :n] = TT
    omega[:n, n:] = W
    omega[n:, :n] = -W
    energy = float(pt.y @ Ly - sys.L(z))
    return CartanData(theta=Ly, omega=omega, energy=energy, W=W)


def is_regular(sys: LagrangianSystem, pt: PrimalPoint,
               cond_tol: float = DEFAULT_COND_TOL,
               cfg: DiffConfig | None = None) -> bool:
    """True when the fiber Hessian is invertible within the condition bound."""
    z = pt.as_state()
    m, n = sys.chart.m, sys.chart.n
    W = fd_mixed_block(sys.L, z, range(m, m + n), range(m, m + n), cfg)
    W = 0.5 * (W + W.T)
    try:
        _inverse_with_cond(W, cond_tol)
    except SingularHessian:
        return False
    return True


def _make_el_eval(sys: LagrangianSystem, cond_tol: float, cfg: DiffConfig):
    """Prepared state -> (xdot, ydot) evaluator.

    Hoists everything reusable out of the per-step path: the diff config,
    constant structure functions, offset vectors of the analytic-gradient
    sweep, and reshaped contractions (matmuls instead of einsum, which
    matters at these sizes).
    """
    chart = sys.chart
    m, n = chart.m, chart.n
    L = sys.L
    grad_fn = L.analytic_grad
    h = cfg.h
    const = chart.is_constant
    rho_c = chart._const_rho if const else None
    C_c = chart._const_C.reshape(n, n * n) if const else None

    def evaluate(state):
        z = np.asarray(state, dtype=float)
        x, y = z[:m], z[m:]
        if const:
            rho, Cflat = rho_c, C_c
        else:
            rho = chart.rho_at(x)
            Cflat = chart.C_at(x).reshape(n, n * n)

        if grad_fn is not None:
            grad = np.asarray(grad_fn(z), dtype=float)
            W = np.empty((n, n))
            M = np.empty((m, n))
            zp = z.copy()
            zm = z.copy()
            for k in range(m + n):
                zp[k] += h
                zm[k] -= h
                col = (np.asarray(grad_fn(zp))[m:] - np.asarray(grad_fn(zm))[m:]) \
                    / (2.0 * h)
                zp[k] = z[k]
                zm[k] = z[k]
                if k < m:
                    M[k] = col
                else:
                    W[:, k - m] = col
            W = 0.5 * (W + W.T)
        else:
            grad = fd_gradient(L, z, cfg)
            W = fd_mixed_block(L, z, range(m, m + n), range(m, m + n), cfg)
            W = 0.5 * (W + W.T)
            M = fd_mixed_block(L, z, range(m), range(m, m + n), cfg)

        Lx, Ly = grad[:m], grad[m:]
        Winv = _inverse_with_cond(W, cond_tol)
        xdot = rho @ y
        # y^g C^n_gb Ly_n contracted as two matmuls over the flattened C
        rhs = rho.T @ Lx - M.T @ xdot + y @ (Ly @ Cflat).reshape(n, n)
        out = np.concatenate([xdot, Winv @ rhs])
        if not np.isfinite(out).all():
            raise NonFiniteField("Euler-Lagrange field evaluated non-finite")
        return out

    return evaluate


def el_vector_field(sys: LagrangianSystem, pt: PrimalPoint,
                    cond_tol: float = DEFAULT_COND_TOL,
                    cfg: DiffConfig | None = None):
    """Coordinate velocities (xdot, ydot) of the Euler-Lagrange field."""
    cfg = cfg or DiffConfig()
    out = _make_el_eval(sys, cond_tol, cfg)(pt.as_state())
    m = sys.chart.m
    return out[:m], out[m:]


def el_field(sys: LagrangianSystem, cond_tol: float = DEFAULT_COND_TOL,
             cfg: DiffConfig | None = None):
    """State-space velocity closure for integrators (state = [x, y])."""
    cfg = cfg or DiffConfig()
    return _make_el_eval(sys, cond_tol, cfg)


def el_residual(sys: LagrangianSystem, times, xs, ys,
                cfg: DiffConfig | None = None):
    """Euler-Lagrange residuals of a sampled curve.

    ``times`` must be uniform with at least 3 samples; time derivatives
    are central differences at the interior samples.  Returns the max norm
    of the admissibility residual dx/dt - rho y and of the dynamical
    residual d/dt(dL/dy) - rhs.
    """
    times = np.asarray(times, dtype=float)
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    ys = np.atleast_2d(np.asarray(ys, dtype=float))
    N = times.size
    if N < 3:
        raise ShapeError("need at least 3 samples for central differences")
    if xs.shape[0] != N or ys.shape[0] != N:
        raise ShapeError("times, xs, ys must have matching lengths")
    dts = np.diff(times)
    dt = dts[0]
    if not np.allclose(dts, dt, rtol=1e-9, atol=0.0):
        raise ShapeError("samples must be uniformly spaced")

    m, n = sys.chart.m, sys.chart.n
    theta = np.empty((N, n))
    rhs = np.empty((N, n))
    sode = np.empty((N, m))
    for k in range(N):
        z = np.concatenate([xs[k], ys[k]])
        grad = fd_gradient(sys.L, z, cfg)
        Lx, Ly = grad[:m], grad[m:]
        rho = sys.chart.rho_at(xs[k])
        C = sys.chart.C_at(xs[k])
        theta[k] = Ly
        rhs[k] = rho.T @ Lx - np.einsum("gab,b,g->a", C, ys[k], Ly)
        sode[k] = rho @ ys[k]

    dx_dt = (xs[2:] - xs[:-2]) / (2.0 * dt)
    dtheta_dt = (theta[2:] - theta[:-2]) / (2.0 * dt)
    res_sode = np.max(np.abs(dx_dt - sode[1:-1])) if m else 0.0
    res_el = np.max(np.abs(dtheta_dt - rhs[1:-1]))
    return float(res_sode), float(res_el)
