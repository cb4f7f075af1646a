"""Atiyah-algebroid reduction: principal-bundle data, curvature, the
reduced chart, explicit Hamilton-Poincare / Lagrange-Poincare right-hand
sides, and the Wong system.

Everything lives in one trivialization U x G of the bundle: the chart has
base coordinates x^i, fiber coordinates (xdot^i, vbar^a) on the primal
side and (p_i, pbar_a) on the dual side.  The explicit right-hand sides
below are coded straight from the reduced equations, independently of the
generic chart engine, so the two routes cross-check each other.
"""

from __future__ import annotations

import numpy as np

from .algebroid import AlgebroidChart
from .errors import InvalidMetric, ShapeError
from .fields import DiffConfig, ScalarField, TensorField, fd_gradient, fd_jacobian, fd_mixed_block
from .lagrangian import DEFAULT_COND_TOL, _inverse_with_cond, el_vector_field
from .systems import DualPoint, HamiltonianSystem, LagrangianSystem, PrimalPoint

JACOBI_TOL = 1e-12


def jacobi_defect_constants(c: np.ndarray) -> float:
    """Max residual of the Jacobi identity for constant structure constants."""
    term = np.einsum("nam,mbg->nabg", c, c)
    cyc = term + term.transpose(0, 2, 3, 1) + term.transpose(0, 3, 1, 2)
    return float(np.max(np.abs(cyc)))


class PrincipalData:
    """Structure constants of the group plus connection components.

    Parameters
    ----------
    m:
        base dimension.
    c:
        (n_g, n_g, n_g) structure constants, layout ``c[c][a][b]``;
        must be antisymmetric in (a, b) and satisfy the Jacobi identity.
    A:
        `TensorField` returning the (n_g, m) connection components A^a_i(x).
    analytic_B:
        optional exact curvature field x -> (n_g, m, m); when present it
        overrides the finite-difference curvature (the FD route stays
        available through ``force_fd``).
    """

    def __init__(self, m: int, c: np.ndarray, A: TensorField,
                 analytic_B: TensorField | None = None):
        c = np.asarray(c, dtype=float)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise ShapeError(f"structure constants must be (n,n,n), got {c.shape}")
        anti = float(np.max(np.abs(c + c.transpose(0, 2, 1))))
        if anti > JACOBI_TOL:
            raise ShapeError(f"structure constants not antisymmetric: defect {anti:.2e}")
        jac = jacobi_defect_constants(c)
        if jac > JACOBI_TOL:
            raise ShapeError(f"structure constants fail the Jacobi identity: {jac:.2e}")
        self.m = int(m)
        self.n_g = c.shape[0]
        self.c = c
        self.A = A
        self.analytic_B = analytic_B


def curvature(pd: PrincipalData, x, cfg: DiffConfig | None = None,
              force_fd: bool = False) -> np.ndarray:
    """Curvature components B^c_ij = dA^c_j/dx^i - dA^c_i/dx^j - c^c_ab A^a_i A^b_j.

    This is the orientation under which the bracket of the horizontal
    basis fields is [e_i, e_j] = -B^c_ij e_c, so the reduced chart built
    from it genuinely satisfies the structure equations; in the abelian
    rank-1 case it reduces to the classical curl of the vector potential.
    Uses the analytic override when the data carries one (unless
    ``force_fd``); otherwise the connection is differentiated centrally.
    The result is antisymmetrized in (i, j) to kill summation roundoff.
    """
    x = np.asarray(x, dtype=float)
    if not force_fd and pd.analytic_B is not None:
        B = pd.analytic_B(x)
        if B.shape != (pd.n_g, pd.m, pd.m):
            raise ShapeError(f"analytic curvature has shape {B.shape}")
        return 0.5 * (B - B.transpose(0, 2, 1))
    A = pd.A(x)
    dA = fd_jacobian(pd.A, x, cfg)                 # (a, i, j) = dA^a_i/dx^j
    B = dA.transpose(0, 2, 1) - dA - np.einsum("cab,ai,bj->cij", pd.c, A, A)
    return 0.5 * (B - B.transpose(0, 2, 1))


def atiyah_chart(pd: PrincipalData, cfg: DiffConfig | None = None,
                 label: str = "") -> AlgebroidChart:
    """The reduced chart of the principal bundle: rank m + n_g over an
    m-dimensional base.

    Anchor: identity on the first m fiber directions, zero on the group
    block.  Structure tensor blocks (layout C[gamma][alpha][beta]):
    C^a_ij = -B^a_ij, C^c_ia = -C^c_ai = c^c_ab A^b_i, C^c_ab = c^c_ab,
    everything with a base-type upper index vanishes.
    """
    m, n_g = pd.m, pd.n_g
    n = m + n_g
    rho = np.zeros((m, n))
    rho[:, :m] = np.eye(m)

    def C_eval(x):
        A = pd.A(x)
        B = curvature(pd, x, cfg)
        C = np.zeros((n, n, n))
        C[m:, :m, :m] = -B
        block = np.einsum("cab,bi->cia", pd.c, A)   # c^c_ab A^b_i at [c, i, a]
        C[m:, :m, m:] = block
        C[m:, m:, :m] = -block.transpose(0, 2, 1)
        C[m:, m:, m:] = pd.c
        return C

    chart = AlgebroidChart(
        m, n,
        TensorField(lambda x: rho, m, shape=(m, n)),
        TensorField(C_eval, m, shape=(n, n, n)),
        label=label or f"atiyah(m={m}, n_g={n_g})")
    return chart


def _split_dual(pd: PrincipalData, pt: DualPoint):
    m, n_g = pd.m, pd.n_g
    if pt.p.shape != (m + n_g,):
        raise ShapeError("dual point fiber must have length m + n_g")
    return pt.p[:m], pt.p[m:]


def hp_rhs(pd: PrincipalData, h: ScalarField, pt: DualPoint,
           cfg: DiffConfig | None = None):
    """Explicit Hamilton-Poincare right-hand sides (xdot, pdot, pbardot).

    dx^i/dt   = dh/dp_i
    dp_i/dt   = -(dh/dx^i - B^a_ij pbar_a dh/dp_j - c^a_bd A^b_i pbar_a dh/dpbar_d)
    dpbar_a/dt = c^c_ab A^b_i pbar_c dh/dp_i - c^c_ab pbar_c dh/dpbar_b
    """
    m, n_g = pd.m, pd.n_g
    _, pbar = _split_dual(pd, pt)
    grad = fd_gradient(h, pt.as_state(), cfg)
    Hx = grad[:m]
    Hp = grad[m:2 * m]
    Hpb = grad[2 * m:]
    A = pd.A(pt.x)
    B = curvature(pd, pt.x, cfg)
    xdot = Hp.copy()
    pdot = -Hx + np.einsum("aij,a,j->i", B, pbar, Hp) \
        + np.einsum("abd,bi,a,d->i", pd.c, A, pbar, Hpb)
    pbardot = np.einsum("cab,bi,c,i->a", pd.c, A, pbar, Hp) \
        - np.einsum("cab,c,b->a", pd.c, pbar, Hpb)
    return xdot, pdot, pbardot


def hp_field(pd: PrincipalData, h: ScalarField, cfg: DiffConfig | None = None):
    """State-space closure of the explicit Hamilton-Poincare flow."""
    m = pd.m

    def field(state):
        pt = DualPoint.from_state(state, m)
        xdot, pdot, pbardot = hp_rhs(pd, h, pt, cfg)
        return np.concatenate([xdot, pdot, pbardot])

    return field


def _lp_pieces(pd: PrincipalData, l: ScalarField, pt: PrimalPoint, cfg):
    """Derivative blocks of the reduced Lagrangian l(x, xdot, vbar)."""
    m, n_g = pd.m, pd.n_g
    n = m + n_g
    if pt.y.shape != (n,):
        raise ShapeError("primal point fiber must have length m + n_g")
    z = pt.as_state()
    grad = fd_gradient(l, z, cfg)
    lx = grad[:m]
    lvb = grad[2 * m:]
    Mfull = fd_mixed_block(l, z, range(m), range(m, m + n), cfg)  # (m, n)
    Wfull = fd_mixed_block(l, z, range(m, m + n), range(m, m + n), cfg)
    Wfull = 0.5 * (Wfull + Wfull.T)
    return z, lx, lvb, Mfull, Wfull


def lp_field_explicit(pd: PrincipalData, l: ScalarField, pt: PrimalPoint,
                      cfg: DiffConfig | None = None,
                      cond_tol: float = DEFAULT_COND_TOL):
    """Explicit reduced Euler-Lagrange field, coded from the
    Lagrange-Poincare displays rather than the generic chart engine."""
    m, n_g = pd.m, pd.n_g
    z, lx, lvb, Mfull, Wfull = _lp_pieces(pd, l, pt, cfg)
    xd = pt.y[:m]
    vb = pt.y[m:]
    A = pd.A(pt.x)
    B = curvature(pd, pt.x, cfg)
    R = np.empty(m + n_g)
    R[:m] = lx - Mfull[:, :m].T @ xd \
        - np.einsum("a,aij,i->j", lvb, B, xd) \
        - np.einsum("a,abd,dj,b->j", lvb, pd.c, A, vb)
    R[m:] = -Mfull[:, m:].T @ xd \
        + np.einsum("a,abd,di,i->b", lvb, pd.c, A, xd) \
        + np.einsum("a,acb,c->b", lvb, pd.c, vb)
    Winv = _inverse_with_cond(Wfull, cond_tol)
    return xd.copy(), Winv @ R


def lp_rhs(pd: PrincipalData, l: ScalarField, pt: PrimalPoint,
           cfg: DiffConfig | None = None,
           cond_tol: float = DEFAULT_COND_TOL):
    """Generic Euler-Lagrange field on the reduced chart, plus the
    residuals of the two displayed Lagrange-Poincare equations under it.

    The field comes from the generic engine run on `atiyah_chart`; the
    residual pair substitutes that field into the explicit equations (the
    time derivatives expanded by the chain rule), so nonzero residuals
    flag disagreement between the two routes.
    """
    m, n_g = pd.m, pd.n_g
    chart = atiyah_chart(pd, cfg)
    sys_l = LagrangianSystem(chart, l)
    xdot, ydot = el_vector_field(sys_l, pt, cond_tol, cfg)

    z, lx, lvb, Mfull, Wfull = _lp_pieces(pd, l, pt, cfg)
    xd = pt.y[:m]
    vb = pt.y[m:]
    A = pd.A(pt.x)
    B = curvature(pd, pt.x, cfg)
    # d/dt of the fiber derivatives along the field, by the chain rule
    Dtheta = Mfull.T @ xdot + Wfull @ ydot
    lp1 = lx - Dtheta[:m] \
        - np.einsum("a,aij,i->j", lvb, B, xd) \
        - np.einsum("a,adb,bj,d->j", lvb, pd.c, A, vb)
    lp2 = Dtheta[m:] \
        - np.einsum("a,adb,d->b", lvb, pd.c, vb) \
        + np.einsum("a,adb,di,i->b", lvb, pd.c, A, xd)
    return (xdot, ydot), (float(np.max(np.abs(lp1))), float(np.max(np.abs(lp2))))


def bi_invariance_defect(c: np.ndarray, kappa: np.ndarray) -> float:
    """Ad-invariance residual of a fiber metric on the Lie algebra.

    max over (a, b, d) of |c^e_ab kappa_ed + c^e_ad kappa_eb|; zero iff
    lowering the upper index of c with kappa gives a totally antisymmetric
    tensor, which is what every contraction in the Wong reduction uses.
    """
    low = np.einsum("eab,ed->abd", c, kappa)     # kappa_ed c^e_ab at [a,b,d]
    return float(np.max(np.abs(low + low.transpose(0, 2, 1))))


def _check_spd(mat: np.ndarray, what: str) -> None:
    if not np.allclose(mat, mat.T, atol=1e-12):
        raise InvalidMetric(f"{what} is not symmetric")
    try:
        np.linalg.cholesky(mat)
    except np.linalg.LinAlgError as exc:
        raise InvalidMetric(f"{what} is not positive definite") from exc


class WongData:
    """Bi-invariant fiber metric kappa plus base metric field g(x).

    ``analytic_dg`` optionally supplies the exact metric derivative
    dg_jk/dx^i with layout (j, k, i); without it the derivative is taken
    by central differences of ``g``.
    """

    def __init__(self, kappa: np.ndarray, g: TensorField,
                 analytic_dg: TensorField | None = None):
        kappa = np.asarray(kappa, dtype=float)
        _check_spd(kappa, "kappa")
        self.kappa = kappa
        self.g = g
        self.analytic_dg = analytic_dg

    def g_at(self, x, check: bool = False) -> np.ndarray:
        gx = self.g(x)
        if check:
            _check_spd(gx, f"g({x})")
        return gx

    def dg_at(self, x, cfg: DiffConfig | None = None) -> np.ndarray:
        if self.analytic_dg is not None:
            return self.analytic_dg(x)
        return fd_jacobian(self.g, x, cfg)


def locked_velocity(wd: WongData, pbar) -> np.ndarray:
    """Body velocity paired to the momentum: vbar^a = kappa^{ab} pbar_b."""
    return np.linalg.solve(wd.kappa, np.asarray(pbar, dtype=float))


def wong_system(pd: PrincipalData, wd: WongData,
                cfg: DiffConfig | None = None):
    """Kinetic-energy Lagrangian and Hamiltonian of the gauge-particle
    system on the reduced chart.

    l = (kappa_ab vbar^a vbar^b + g_ij xdot^i xdot^j) / 2 and
    h = (kappa^ab pbar_a pbar_b + g^ij p_i p_j) / 2.
    """
    if wd.kappa.shape != (pd.n_g, pd.n_g):
        raise ShapeError("kappa must be (n_g, n_g)")
    defect = bi_invariance_defect(pd.c, wd.kappa)
    if defect > JACOBI_TOL:
        raise InvalidMetric(
            f"kappa is not Ad-invariant for these structure constants "
            f"(defect {defect:.2e})")
    m = pd.m
    chart = atiyah_chart(pd, cfg, label=f"wong(m={m}, n_g={pd.n_g})")
    kappa = wd.kappa
    kappa_inv = np.linalg.inv(kappa)
    wd.g_at(np.zeros(m), check=True)      # probe the base metric once

    def l_eval(zs):
        x, xd, vb = zs[:m], zs[m:2 * m], zs[2 * m:]
        gx = wd.g_at(x)
        return 0.5 * (vb @ kappa @ vb + xd @ gx @ xd)

    def l_grad(zs):
        x, xd, vb = zs[:m], zs[m:2 * m], zs[2 * m:]
        dg = wd.dg_at(x, cfg)
        lx = 0.5 * np.einsum("jki,j,k->i", dg, xd, xd)
        return np.concatenate([lx, wd.g_at(x) @ xd, kappa @ vb])

    def h_eval(zs):
        x, p, pb = zs[:m], zs[m:2 * m], zs[2 * m:]
        gx = wd.g_at(x)
        return 0.5 * (pb @ kappa_inv @ pb + p @ np.linalg.solve(gx, p))

    def h_grad(zs):
        x, p, pb = zs[:m], zs[m:2 * m], zs[2 * m:]
        ginv = np.linalg.inv(wd.g_at(x))
        dg = wd.dg_at(x, cfg)
        gp = ginv @ p
        hx = -0.5 * np.einsum("jki,j,k->i", dg, gp, gp)
        return np.concatenate([hx, gp, kappa_inv @ pb])

    dim = 2 * m + pd.n_g
    sys_l = LagrangianSystem(chart, ScalarField(l_eval, dim, analytic_grad=l_grad))
    sys_h = HamiltonianSystem(chart, ScalarField(h_eval, dim, analytic_grad=h_grad))
    return sys_l, sys_h


def wong_rhs_explicit(pd: PrincipalData, wd: WongData, pt: DualPoint,
                      cfg: DiffConfig | None = None):
    """The two Wong equations coded directly from their displays.

    dp_i/dt = -1/2 dg^{jk}/dx^i p_j p_k - pbar_a B^a_ji g^{jk} p_k,
    dpbar_b/dt = -c^a_db A^d_i pbar_a xdot^i with xdot^i = g^{ij} p_j.
    """
    m = pd.m
    p, pbar = _split_dual(pd, pt)
    x = pt.x
    ginv_field = TensorField(lambda xx: np.linalg.inv(wd.g_at(xx)), m,
                             shape=(m, m))
    ginv = ginv_field(x)
    dginv = fd_jacobian(ginv_field, x, cfg)       # (j, k, i)
    B = curvature(pd, x, cfg)
    A = pd.A(x)
    xdot = ginv @ p
    pdot = -0.5 * np.einsum("jki,j,k->i", dginv, p, p) \
        - np.einsum("aji,a,jk,k->i", B, pbar, ginv, p)
    pbardot = -np.einsum("adb,di,a,i->b", pd.c, A, pbar, xdot)
    return xdot, pdot, pbardot
