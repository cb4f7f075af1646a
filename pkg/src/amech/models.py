"""Builtin model registry used by the CLI and the acceptance checks.

One model per acceptance scenario: a flat harmonic oscillator, the free
rigid body on so(3), the abelian Wong system (charged particle in a
uniform magnetic field), and a nonabelian so(3) gauge chart with a curved
base metric.  A deliberately irregular Lagrangian is registered as well
to exercise the error paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, Optional

import numpy as np

from .algebroid import AlgebroidChart
from .atiyah import PrincipalData, WongData, atiyah_chart, wong_system
from .fields import ScalarField, TensorField
from .systems import HamiltonianSystem, LagrangianSystem


def levi_civita3() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for (i, j, k), s in (((0, 1, 2), 1.0), ((1, 2, 0), 1.0), ((2, 0, 1), 1.0),
                         ((0, 2, 1), -1.0), ((2, 1, 0), -1.0), ((1, 0, 2), -1.0)):
        eps[i, j, k] = s
    return eps


def so3_structure_tensor() -> np.ndarray:
    """C[gamma][alpha][beta] = eps_{alpha beta gamma} for so(3)."""
    return np.transpose(levi_civita3(), (2, 0, 1))


@dataclass
class BuiltinModel:
    name: str
    chart: AlgebroidChart
    sys_L: Optional[LagrangianSystem] = None
    sys_H: Optional[HamiltonianSystem] = None
    pd: Optional[PrincipalData] = None
    wd: Optional[WongData] = None
    box_lo: np.ndarray = None
    box_hi: np.ndarray = None
    x0: np.ndarray = None
    y0: np.ndarray = None
    p0: np.ndarray = None
    casimirs: Dict[str, Dict[str, Callable]] = dc_field(default_factory=dict)
    hj_alpha: Optional[TensorField] = None

    def initial_state(self, dynamics: str) -> np.ndarray:
        fiber = self.y0 if dynamics == "lagrangian" else self.p0
        if fiber is None:
            raise ValueError(f"model {self.name} has no default {dynamics} state")
        return np.concatenate([self.x0, fiber])


def _euclid_sho() -> BuiltinModel:
    chart = AlgebroidChart.standard(1, label="euclid-sho")

    L = ScalarField(lambda z: 0.5 * z[1] ** 2 - 0.5 * z[0] ** 2, 2,
                    analytic_grad=lambda z: np.array([-z[0], z[1]]))
    H = ScalarField(lambda z: 0.5 * z[1] ** 2 + 0.5 * z[0] ** 2, 2,
                    analytic_grad=lambda z: np.array([z[0], z[1]]))
    return BuiltinModel(
        name="euclid-sho",
        chart=chart,
        sys_L=LagrangianSystem(chart, L),
        sys_H=HamiltonianSystem(chart, H),
        box_lo=np.array([-1.0]), box_hi=np.array([1.0]),
        x0=np.array([1.0]), y0=np.array([0.0]), p0=np.array([0.0]),
        hj_alpha=TensorField(lambda x: np.zeros(1), 1, shape=(1,)),
    )


RIGID_BODY_INERTIA = np.array([1.0, 2.0, 3.0])


def _so3_rigid_body() -> BuiltinModel:
    chart = AlgebroidChart.lie_algebra(so3_structure_tensor(),
                                       label="so3-rigid-body")
    I = RIGID_BODY_INERTIA
    Iinv = 1.0 / I

    L = ScalarField(lambda z: 0.5 * float(I @ (z[1:] ** 2)), 4,
                    analytic_grad=lambda z: np.concatenate([[0.0], I * z[1:]]))
    H = ScalarField(lambda z: 0.5 * float(Iinv @ (z[1:] ** 2)), 4,
                    analytic_grad=lambda z: np.concatenate([[0.0], Iinv * z[1:]]))

    casimirs = {
        # squared magnitude of the (angular) momentum, a Casimir of so(3)*
        "momentum-norm": {
            "lagrangian": lambda s: float(np.sum((I * s[1:]) ** 2)),
            "hamiltonian": lambda s: float(np.sum(s[1:] ** 2)),
        },
    }
    return BuiltinModel(
        name="so3-rigid-body",
        chart=chart,
        sys_L=LagrangianSystem(chart, L),
        sys_H=HamiltonianSystem(chart, H),
        box_lo=np.array([-1.0]), box_hi=np.array([1.0]),
        x0=np.array([0.0]),
        y0=np.array([0.0, 1.0, 1.0]),
        p0=np.array([0.0, 2.0, 3.0]),
        casimirs=casimirs,
    )


WONG_ABELIAN_B0 = 1.0


def connection_zero(m: int, n_g: int):
    """Flat connection: A = 0 everywhere."""
    A = TensorField(lambda x: np.zeros((n_g, m)), m, shape=(n_g, m))
    B = TensorField(lambda x: np.zeros((n_g, m, m)), m, shape=(n_g, m, m))
    return A, B


def connection_uniform_magnetic(B0: float = 1.0):
    """Rank-1 potential A^1 = (0, B0 x^1) on the plane: curl = B0."""
    A = TensorField(lambda x: np.array([[0.0, B0 * x[0]]]), 2, shape=(1, 2))
    B = TensorField(lambda x: np.array([[[0.0, B0], [-B0, 0.0]]]), 2,
                    shape=(1, 2, 2))
    return A, B


def connection_so3_linear():
    """so(3)-valued potential linear in x, with hand-derived curvature."""
    def A_eval(x):
        return np.array([[x[1], 0.0],
                         [0.0, x[0]],
                         [0.0, 0.0]])

    def B_eval(x):
        # B_12 = d_1 A_2 - d_2 A_1 - A_1 x A_2 with A_1 = (x2,0,0), A_2 = (0,x1,0)
        b12 = np.array([-1.0, 1.0, -x[0] * x[1]])
        B = np.zeros((3, 2, 2))
        B[:, 0, 1] = b12
        B[:, 1, 0] = -b12
        return B

    return (TensorField(A_eval, 2, shape=(3, 2)),
            TensorField(B_eval, 2, shape=(3, 2, 2)))


# named connection fields accepted by the principal-data JSON schema
CONNECTIONS = {
    "zero": lambda m, n_g, params: connection_zero(m, n_g),
    "uniform-magnetic": lambda m, n_g, params: connection_uniform_magnetic(
        float(params.get("B0", 1.0))),
    "so3-linear": lambda m, n_g, params: connection_so3_linear(),
}


def principal_from_dict(data: dict):
    """Build (PrincipalData, WongData | None) from the JSON schema.

    Schema: ``{"m": int, "c": nested (n,n,n) array, "A": {"name": str,
    "params": {...}}, "kappa": optional (n_g, n_g) matrix, "g": optional
    constant (m, m) matrix}``.  The connection name must be one of
    `CONNECTIONS`; kappa (with g defaulting to the identity) turns the
    data into a full Wong system.
    """
    m = int(data["m"])
    c = np.asarray(data["c"], dtype=float)
    n_g = c.shape[0]
    aspec = data["A"]
    if isinstance(aspec, str):
        aspec = {"name": aspec}
    try:
        builder = CONNECTIONS[aspec["name"]]
    except KeyError:
        raise KeyError(f"unknown connection field {aspec!r}; "
                       f"available: {sorted(CONNECTIONS)}")
    A, B = builder(m, n_g, aspec.get("params", {}))
    pd = PrincipalData(m=m, c=c, A=A, analytic_B=B)
    wd = None
    if "kappa" in data:
        gmat = np.asarray(data.get("g", np.eye(m)), dtype=float)
        wd = WongData(np.asarray(data["kappa"], dtype=float),
                      TensorField(lambda x, _g=gmat: _g, m, shape=(m, m)))
    return pd, wd


def model_from_principal(pd: PrincipalData, wd, name: str) -> BuiltinModel:
    """Wrap principal data as a runnable model (Wong dynamics when wd given)."""
    if wd is not None:
        sys_L, sys_H = wong_system(pd, wd)
        chart = sys_L.chart
    else:
        sys_L = sys_H = None
        chart = atiyah_chart(pd)
    m, n = chart.m, chart.n
    return BuiltinModel(
        name=name, chart=chart, sys_L=sys_L, sys_H=sys_H, pd=pd, wd=wd,
        box_lo=-np.ones(m), box_hi=np.ones(m),
        x0=np.zeros(m), y0=np.zeros(n), p0=np.zeros(n))


def _wong_abelian() -> BuiltinModel:
    A, Bfield = connection_uniform_magnetic(WONG_ABELIAN_B0)
    pd = PrincipalData(m=2, c=np.zeros((1, 1, 1)), A=A, analytic_B=Bfield)
    wd = WongData(np.eye(1), TensorField(lambda x: np.eye(2), 2, shape=(2, 2)))
    sys_L, sys_H = wong_system(pd, wd)

    casimirs = {
        "pbar": {
            "hamiltonian": lambda s: float(s[4]),
            "wong": lambda s: float(s[4]),
            "lagrangian": lambda s: float(s[4]),   # kappa = 1: pbar = vbar
        },
    }
    return BuiltinModel(
        name="wong-abelian",
        chart=sys_L.chart,
        sys_L=sys_L, sys_H=sys_H, pd=pd, wd=wd,
        box_lo=np.array([-1.0, -1.0]), box_hi=np.array([1.0, 1.0]),
        x0=np.array([0.0, 0.0]),
        y0=np.array([1.0, 0.0, 1.0]),
        p0=np.array([1.0, 0.0, 1.0]),
        casimirs=casimirs,
    )


def _atiyah_so3() -> BuiltinModel:
    A, Bfield = connection_so3_linear()
    pd = PrincipalData(m=2, c=levi_civita3(), A=A, analytic_B=Bfield)

    def g_eval(x):
        return np.array([[1.3 + 0.3 * np.sin(x[0]), 0.2],
                         [0.2, 1.3 + 0.3 * np.cos(x[1])]])

    def dg_eval(x):
        dg = np.zeros((2, 2, 2))          # (j, k, i) = dg_jk / dx^i
        dg[0, 0, 0] = 0.3 * np.cos(x[0])
        dg[1, 1, 1] = -0.3 * np.sin(x[1])
        return dg

    wd = WongData(np.eye(3), TensorField(g_eval, 2, shape=(2, 2)),
                  analytic_dg=TensorField(dg_eval, 2, shape=(2, 2, 2)))
    sys_L, sys_H = wong_system(pd, wd)

    casimirs = {
        "pbar-norm": {
            "hamiltonian": lambda s: float(np.sum(s[4:] ** 2)),
            "wong": lambda s: float(np.sum(s[4:] ** 2)),
        },
    }
    return BuiltinModel(
        name="atiyah-so3",
        chart=sys_L.chart,
        sys_L=sys_L, sys_H=sys_H, pd=pd, wd=wd,
        box_lo=np.array([-1.0, -1.0]), box_hi=np.array([1.0, 1.0]),
        x0=np.array([0.2, -0.3]),
        y0=np.array([0.5, -0.2, 0.3, -0.4, 0.6]),
        p0=np.array([0.5, -0.2, 0.3, -0.4, 0.6]),
        casimirs=casimirs,
    )


def _degenerate_linear() -> BuiltinModel:
    """Fixture with an irregular Lagrangian (linear in the fiber)."""
    chart = AlgebroidChart.standard(1, label="degenerate-linear")
    L = ScalarField(lambda z: z[1], 2,
                    analytic_grad=lambda z: np.array([0.0, 1.0]))
    return BuiltinModel(
        name="degenerate-linear",
        chart=chart,
        sys_L=LagrangianSystem(chart, L),
        box_lo=np.array([-1.0]), box_hi=np.array([1.0]),
        x0=np.array([0.0]), y0=np.array([0.0]),
    )


_BUILDERS = {
    "euclid-sho": _euclid_sho,
    "so3-rigid-body": _so3_rigid_body,
    "wong-abelian": _wong_abelian,
    "atiyah-so3": _atiyah_so3,
    "degenerate-linear": _degenerate_linear,
}


def builtin_names():
    return sorted(_BUILDERS)


def get_builtin(name: str) -> BuiltinModel:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(
            f"unknown builtin model {name!r}; available: {builtin_names()}")
    return builder()
