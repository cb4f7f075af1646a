"""Independent oracles and field generators for the test suite.

Everything here is written against textbook formulas with its own
differencing code so that agreement with the package is a genuine
cross-check, not a tautology.
"""

import numpy as np

from amech import ScalarField


def central_grad(fn, z, h=1e-5):
    z = np.asarray(z, dtype=float)
    g = np.empty(z.size)
    for i in range(z.size):
        zp = z.copy()
        zm = z.copy()
        zp[i] += h
        zm[i] -= h
        g[i] = (fn(zp) - fn(zm)) / (2.0 * h)
    return g


def classical_el_rhs(L_eval, L_grad, m, state, h=1e-5):
    """Classical Euler-Lagrange field on R^m: d/dt dL/dydot = dL/dx.

    Expects state = [x, xdot]; uses its own central differences of the
    (given or differenced) gradient at the same step as the package so
    the two implementations are comparable at rounding level.
    """
    state = np.asarray(state, dtype=float)
    n = state.size - m
    grad = L_grad(state) if L_grad is not None else central_grad(L_eval, state, h)
    Lx = grad[:m]
    xdot = state[m:]

    def grad_y(z):
        return (L_grad(z) if L_grad is not None else central_grad(L_eval, z, h))[m:]

    W = np.empty((n, n))
    M = np.empty((m, n))
    for k in range(m + n):
        zp = state.copy()
        zm = state.copy()
        zp[k] += h
        zm[k] -= h
        col = (grad_y(zp) - grad_y(zm)) / (2.0 * h)
        if k < m:
            M[k] = col
        else:
            W[:, k - m] = col
    W = 0.5 * (W + W.T)
    ydot = np.linalg.solve(W, Lx - M.T @ xdot)
    return np.concatenate([xdot, ydot])


def classical_hamilton_rhs(H_eval, H_grad, m, state, h=1e-5):
    """Canonical Hamilton field on R^m: xdot = dH/dp, pdot = -dH/dx."""
    state = np.asarray(state, dtype=float)
    grad = H_grad(state) if H_grad is not None else central_grad(H_eval, state, h)
    return np.concatenate([grad[m:], -grad[:m]])


def euler_rigid_body_rhs(inertia, omega):
    """Free rigid body in body coordinates: I omegadot = (I omega) x omega."""
    inertia = np.asarray(inertia, dtype=float)
    omega = np.asarray(omega, dtype=float)
    return np.cross(inertia * omega, omega) / inertia


def lie_poisson_so3_rhs(inertia, p):
    """Angular-momentum form of the rigid body: pdot = p x (I^-1 p)."""
    p = np.asarray(p, dtype=float)
    return np.cross(p, p / np.asarray(inertia, dtype=float))


def rk4_reference(fn, state0, dt, n_steps):
    """Plain RK4 used when the test needs its own integrator."""
    s = np.array(state0, dtype=float)
    out = [s.copy()]
    for _ in range(n_steps):
        k1 = fn(s)
        k2 = fn(s + 0.5 * dt * k1)
        k3 = fn(s + 0.5 * dt * k2)
        k4 = fn(s + dt * k3)
        s = s + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(s.copy())
    return np.asarray(out)


def random_smooth_field(rng, dim, with_grad=False):
    """A bounded-derivative random field: sine wave plus a quadratic."""
    a = rng.uniform(0.5, 1.5)
    b = rng.uniform(-1.0, 1.0, size=dim)
    c = rng.uniform(0.0, 2 * np.pi)
    Q = rng.uniform(-0.5, 0.5, size=(dim, dim))
    Q = 0.5 * (Q + Q.T)
    lin = rng.uniform(-1.0, 1.0, size=dim)

    def ev(z):
        return a * np.sin(b @ z + c) + 0.5 * z @ Q @ z + lin @ z

    def grad(z):
        return a * np.cos(b @ z + c) * b + Q @ z + lin

    return ScalarField(ev, dim, analytic_grad=grad if with_grad else None)


def random_quadratic_field(rng, dim):
    """Quadratic with symmetric positive definite curvature."""
    R = rng.standard_normal((dim, dim))
    Q = R @ R.T + dim * np.eye(dim)
    lin = rng.standard_normal(dim)

    def ev(z):
        return 0.5 * z @ Q @ z + lin @ z

    def grad(z):
        return Q @ z + lin

    return ScalarField(ev, dim, analytic_grad=grad), Q, lin
