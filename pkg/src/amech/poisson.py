"""The linear Poisson structure carried by the dual bundle E*.

This is the independent route to the Hamiltonian dynamics: the bracket
below never touches the symplectic machinery, so agreement between the
two is a real cross-check rather than a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebroid import AlgebroidChart
from .errors import ShapeError
from .fields import WIDE_H, DiffConfig, ScalarField, fd_gradient
from .systems import DualPoint


@dataclass(frozen=True)
class PoissonBivector:
    """Component matrix of the bivector at one point of E*.

    Block order is (x-block, p-block); entry [u, v] is the bracket of the
    u-th and v-th coordinate functions, so the matrix is antisymmetric by
    construction.
    """

    matrix: np.ndarray


def poisson_bivector(chart: AlgebroidChart, pt: DualPoint) -> PoissonBivector:
    """Bivector matrix at ``pt``: {x,x} = 0, {p_a, x^j} = rho^j_a,
    {p_a, p_b} = C^g_ab p_g."""
    m, n = chart.m, chart.n
    if pt.x.shape != (m,) or pt.p.shape != (n,):
        raise ShapeError("point does not match chart dimensions")
    rho = chart.rho_at(pt.x)
    C = chart.C_at(pt.x)
    Cp = np.einsum("gab,g->ab", C, pt.p)
    Cp = 0.5 * (Cp - Cp.T)          # exact antisymmetry despite roundoff
    lam = np.zeros((m + n, m + n))
    lam[m:, :m] = rho.T
    lam[:m, m:] = -rho
    lam[m:, m:] = Cp
    return PoissonBivector(lam)


def poisson_bracket(chart: AlgebroidChart, F: ScalarField, G: ScalarField,
                    pt: DualPoint, cfg: DiffConfig | None = None) -> float:
    """{F, G} at ``pt`` as gradF . Lambda . gradG."""
    dim = chart.m + chart.n
    if F.dim != dim or G.dim != dim:
        raise ShapeError(f"F and G must live on (m+n)={dim}-space")
    z = pt.as_state()
    gF = fd_gradient(F, z, cfg)
    gG = fd_gradient(G, z, cfg)
    lam = poisson_bivector(chart, pt).matrix
    return float(gF @ lam @ gG)


def jacobi_defect(chart: AlgebroidChart, F: ScalarField, G: ScalarField,
                  H: ScalarField, pt: DualPoint,
                  cfg: DiffConfig | None = None) -> float:
    """|{F,{G,H}} + {G,{H,F}} + {H,{F,G}}| at ``pt``.

    The inner brackets are smooth functions of the point and are
    differentiated again for the outer bracket; that second level runs at
    the wide step `WIDE_H` since first-level noise would otherwise be
    amplified by 1/h.
    """
    cfg = cfg or DiffConfig()
    m = chart.m
    dim = m + chart.n
    outer_cfg = DiffConfig(h=max(cfg.h, WIDE_H))

    def inner(A, B):
        def ev(z):
            return poisson_bracket(chart, A, B, DualPoint(z[:m], z[m:]), cfg)
        return ScalarField(ev, dim)

    total = (poisson_bracket(chart, F, inner(G, H), pt, outer_cfg)
             + poisson_bracket(chart, G, inner(H, F), pt, outer_cfg)
             + poisson_bracket(chart, H, inner(F, G), pt, outer_cfg))
    return abs(total)
