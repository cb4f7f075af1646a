"""Canonical involution, triple isomorphisms, and the two Lagrangian
submanifold residuals.

All four maps are plain coordinate formulas on prolongation points; their
defining properties (involutivity, projection interchange, invertibility)
live in the test suite as assertions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebroid import AlgebroidChart
from .errors import ShapeError
from .fields import DiffConfig, fd_gradient
from .hamiltonian import hamilton_frame_coefficients
from .systems import DualPoint, HamiltonianSystem, LagrangianSystem


@dataclass(frozen=True)
class ProlPointE:
    """Coordinates (x, y; z, v) on the prolongation over the bundle E."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class ProlPointEstar:
    """Coordinates (x, p; z, v) on the prolongation over the dual E*."""

    x: np.ndarray
    p: np.ndarray
    z: np.ndarray
    v: np.ndarray


def _check(chart, fiber, *vecs):
    if np.shape(fiber) != (chart.n,):
        raise ShapeError("fiber coordinate has wrong length")
    for v in vecs:
        if np.shape(v) != (chart.n,):
            raise ShapeError("prolongation coordinate has wrong length")


def sigma(chart: AlgebroidChart, pt: ProlPointE) -> ProlPointE:
    """Canonical involution: (x, y; z, v) -> (x, z; y, v + C z y)."""
    _check(chart, pt.y, pt.z, pt.v)
    C = chart.C_at(pt.x)
    twist = np.einsum("abc,b,c->a", C, pt.z, pt.y)
    return ProlPointE(pt.x, pt.z, pt.y, pt.v + twist)


def a_map(chart: AlgebroidChart, pt: ProlPointEstar):
    """Tulczyjew isomorphism onto the dual of the prolongation over E.

    Returns the covector coordinates (x, z, zeta, eta) with
    zeta_a = v_a + C^g_ab p_g z^b and eta = p.
    """
    _check(chart, pt.p, pt.z, pt.v)
    C = chart.C_at(pt.x)
    zeta = pt.v + np.einsum("gab,g,b->a", C, pt.p, pt.z)
    return pt.x, pt.z, zeta, pt.p.copy()


def flat_map(chart: AlgebroidChart, pt: ProlPointEstar):
    """Musical isomorphism induced by the canonical symplectic section.

    Returns (x, p, mu, nu) with mu_a = -v_a - C^g_ab p_g z^b and nu = z.
    """
    _check(chart, pt.p, pt.z, pt.v)
    C = chart.C_at(pt.x)
    mu = -pt.v - np.einsum("gab,g,b->a", C, pt.p, pt.z)
    return pt.x, pt.p.copy(), mu, pt.z.copy()


def flat_inverse(chart: AlgebroidChart, x, p, mu, nu) -> ProlPointEstar:
    """Solve the flat map back: z = nu, v = -mu - C p z."""
    C = chart.C_at(np.asarray(x, dtype=float))
    z = np.asarray(nu, dtype=float)
    v = -np.asarray(mu, dtype=float) - np.einsum("gab,g,b->a", C, p, z)
    return ProlPointEstar(np.asarray(x, dtype=float),
                          np.asarray(p, dtype=float), z, v)


def sL_residual(sys_L: LagrangianSystem, pt: ProlPointEstar,
                cfg: DiffConfig | None = None):
    """Residual norms of the Lagrangian-submanifold equations at ``pt``.

    The submanifold of the prolongation over E* generated by L is cut out
    by p = dL/dy, z = y, v_a = rho^i_a dL/dx^i - C^g_ab dL/dy^g z^b; the
    middle equation is absorbed by evaluating every L-derivative at
    y := z, so the second residual is identically zero and kept only to
    preserve the three-equation shape.
    """
    chart = sys_L.chart
    _check(chart, pt.p, pt.z, pt.v)
    m = chart.m
    grad = fd_gradient(sys_L.L, np.concatenate([pt.x, pt.z]), cfg)
    Lx, Ly = grad[:m], grad[m:]
    rho = chart.rho_at(pt.x)
    C = chart.C_at(pt.x)
    r1 = float(np.max(np.abs(pt.p - Ly)))
    r2 = 0.0
    v_expected = rho.T @ Lx - np.einsum("gab,g,b->a", C, Ly, pt.z)
    r3 = float(np.max(np.abs(pt.v - v_expected)))
    return r1, r2, r3


def sH_residual(sys_H: HamiltonianSystem, pt: ProlPointEstar,
                cfg: DiffConfig | None = None):
    """Residual norms of the image-of-the-Hamilton-section equations.

    The submanifold is the graph of the Hamilton section: z = dH/dp and
    v equals the vertical frame coefficient of the field.
    """
    chart = sys_H.chart
    _check(chart, pt.p, pt.z, pt.v)
    z_exp, v_exp = hamilton_frame_coefficients(sys_H, DualPoint(pt.x, pt.p), cfg)
    r1 = float(np.max(np.abs(pt.z - z_exp)))
    r2 = float(np.max(np.abs(pt.v - v_exp)))
    return r1, r2


def sL_point(sys_L: LagrangianSystem, x, y,
             cfg: DiffConfig | None = None) -> ProlPointEstar:
    """Construct the submanifold point generated by L over (x, y)."""
    chart = sys_L.chart
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    grad = fd_gradient(sys_L.L, np.concatenate([x, y]), cfg)
    Lx, Ly = grad[:chart.m], grad[chart.m:]
    rho = chart.rho_at(x)
    C = chart.C_at(x)
    v = rho.T @ Lx - np.einsum("gab,g,b->a", C, Ly, y)
    return ProlPointEstar(x, Ly.copy(), y.copy(), v)


def sH_point(sys_H: HamiltonianSystem, x, p,
             cfg: DiffConfig | None = None) -> ProlPointEstar:
    """Construct the Hamilton-section point over (x, p)."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    z, v = hamilton_frame_coefficients(sys_H, DualPoint(x, p), cfg)
    return ProlPointEstar(x, p.copy(), z, v)
