"""Random-point cross-checks wired to the `amech check` subcommand.

Each check draws base points from the model's box and fiber data from a
seeded generator, evaluates one of the package's structural identities at
every point, and reports the worst residual.
"""

from __future__ import annotations

import numpy as np

from .atiyah import hp_rhs, lp_field_explicit
from .errors import PreconditionFailed
from .hamiltonian import hamilton_vector_field
from .lagrangian import el_vector_field, is_regular
from .legendre import induced_hamiltonian, legendre_map, relatedness_defect
from .models import BuiltinModel
from .systems import DualPoint, PrimalPoint
from .tulczyjew import (ProlPointE, ProlPointEstar, flat_inverse, flat_map,
                        a_map, sH_point, sH_residual, sL_point, sL_residual,
                        sigma)

DEFAULT_TOLS = {
    "involution": 1e-14,
    "triple": 1e-12,
    "legendre": 1e-6,
    "sl-eq-sh": 1e-6,
    "hp-lp": 1e-8,
}


def _base_points(model: BuiltinModel, rng, count):
    span = model.box_hi - model.box_lo
    return model.box_lo + rng.random((count, model.chart.m)) * span


def check_involution(model: BuiltinModel, points: int, rng) -> float:
    chart = model.chart
    worst = 0.0
    for x in _base_points(model, rng, points):
        y, z, v = rng.standard_normal((3, chart.n))
        pt = ProlPointE(x, y, z, v)
        img = sigma(chart, pt)
        back = sigma(chart, img)
        worst = max(worst,
                    np.max(np.abs(back.y - y)), np.max(np.abs(back.z - z)),
                    np.max(np.abs(back.v - v)), np.max(np.abs(back.x - x)),
                    # projection interchange: sigma swaps the two legs
                    np.max(np.abs(img.y - z)), np.max(np.abs(img.z - y)))
    return float(worst)


def check_triple(model: BuiltinModel, points: int, rng) -> float:
    chart = model.chart
    worst = 0.0
    for x in _base_points(model, rng, points):
        p, z, v = rng.standard_normal((3, chart.n))
        pt = ProlPointEstar(x, p, z, v)
        bx, bp, mu, nu = flat_map(chart, pt)
        back = flat_inverse(chart, bx, bp, mu, nu)
        worst = max(worst, np.max(np.abs(back.z - z)), np.max(np.abs(back.v - v)))
        # base-projection commutation of the triple
        ax, az, _, eta = a_map(chart, pt)
        worst = max(worst, np.max(np.abs(ax - x)), np.max(np.abs(az - z)),
                    np.max(np.abs(eta - p)), np.max(np.abs(bp - p)),
                    np.max(np.abs(nu - z)))
    return float(worst)


def _require_regular_lagrangian(model: BuiltinModel):
    if model.sys_L is None:
        raise PreconditionFailed(f"model {model.name} carries no Lagrangian")
    probe = PrimalPoint(model.x0, model.y0 if model.y0 is not None
                        else np.zeros(model.chart.n))
    if not is_regular(model.sys_L, probe):
        raise PreconditionFailed(
            f"model {model.name} has an irregular Lagrangian "
            f"(singular fiber Hessian at the probe point)")
    return model.sys_L


def check_legendre(model: BuiltinModel, points: int, rng) -> float:
    sys_L = _require_regular_lagrangian(model)
    worst = 0.0
    for x in _base_points(model, rng, points):
        y = rng.standard_normal(model.chart.n)
        worst = max(worst, relatedness_defect(sys_L, PrimalPoint(x, y)))
    return float(worst)


def check_sl_eq_sh(model: BuiltinModel, points: int, rng) -> float:
    sys_L = _require_regular_lagrangian(model)
    sys_H = induced_hamiltonian(sys_L)
    worst = 0.0
    for x in _base_points(model, rng, points):
        y = rng.standard_normal(model.chart.n)
        pt_L = sL_point(sys_L, x, y)
        worst = max(worst, *sH_residual(sys_H, pt_L))
        p = legendre_map(sys_L, PrimalPoint(x, y)).p
        pt_H = sH_point(sys_H, x, p)
        worst = max(worst, *sL_residual(sys_L, pt_H))
    return float(worst)


def check_hp_lp(model: BuiltinModel, points: int, rng) -> float:
    if model.pd is None:
        raise PreconditionFailed(
            f"model {model.name} carries no principal-bundle data")
    if model.sys_L is None or model.sys_H is None:
        raise PreconditionFailed(f"model {model.name} carries no dynamics")
    pd = model.pd
    worst = 0.0
    for x in _base_points(model, rng, points):
        p = rng.standard_normal(model.chart.n)
        xd_h, pd_h, pbd_h = hp_rhs(pd, model.sys_H.H, DualPoint(x, p))
        xd_g, pd_g = hamilton_vector_field(model.sys_H, DualPoint(x, p))
        worst = max(worst,
                    np.max(np.abs(xd_h - xd_g)),
                    np.max(np.abs(np.concatenate([pd_h, pbd_h]) - pd_g)))
        y = rng.standard_normal(model.chart.n)
        xd_e, yd_e = lp_field_explicit(pd, model.sys_L.L, PrimalPoint(x, y))
        xd_l, yd_l = el_vector_field(model.sys_L, PrimalPoint(x, y))
        worst = max(worst,
                    np.max(np.abs(xd_e - xd_l)), np.max(np.abs(yd_e - yd_l)))
    return float(worst)


CHECKS = {
    "involution": check_involution,
    "triple": check_triple,
    "legendre": check_legendre,
    "sl-eq-sh": check_sl_eq_sh,
    "hp-lp": check_hp_lp,
}


def run_check(name: str, model: BuiltinModel, points: int = 100,
              tol: float | None = None, seed: int = 0):
    """Run one named check; returns (max_residual, tol, passed)."""
    if name not in CHECKS:
        raise KeyError(f"unknown check {name!r}; available: {sorted(CHECKS)}")
    rng = np.random.default_rng(seed)
    tol = DEFAULT_TOLS[name] if tol is None else tol
    worst = CHECKS[name](model, points, rng)
    return worst, tol, worst <= tol
