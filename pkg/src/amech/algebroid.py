"""Lie algebroid charts: structure functions, validation, d^E calculus.

A chart over an m-dimensional base with rank-n fiber is described by two
fields: the anchor components rho(x), an (m, n) matrix with rows indexed
by base coordinates and columns by the fiber basis, and the structure
tensor C(x) with layout ``C[gamma][alpha][beta]`` for the coefficient of
e_gamma in the bracket of e_alpha and e_beta.  That index layout is fixed
project-wide; every contraction below spells it out in einsum notation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ShapeError
from .fields import (DiffConfig, ScalarField, TensorField, VectorField,
                     constant_field, fd_gradient, fd_jacobian)


class AlgebroidChart:
    """One coordinate chart of a Lie algebroid.

    Parameters
    ----------
    m, n:
        base dimension and fiber rank.
    rho:
        `TensorField` returning the (m, n) anchor matrix rho^i_alpha(x).
    C:
        `TensorField` returning the (n, n, n) structure tensor, layout
        ``C[gamma][alpha][beta]``.
    label:
        display name used in reports.
    """

    def __init__(self, m: int, n: int, rho: TensorField, C: TensorField,
                 label: str = ""):
        self.m = int(m)
        self.n = int(n)
        self.rho = rho
        self.C = C
        self.label = label
        # set when built from constant coefficient arrays; enables JSON dump
        self._const_rho: Optional[np.ndarray] = None
        self._const_C: Optional[np.ndarray] = None

    @classmethod
    def from_constant(cls, rho: np.ndarray, C: np.ndarray, label: str = ""):
        """Chart with x-independent structure functions."""
        rho = np.asarray(rho, dtype=float)
        C = np.asarray(C, dtype=float)
        if rho.ndim != 2:
            raise ShapeError(f"rho must be a matrix, got shape {rho.shape}")
        m, n = rho.shape
        if C.shape != (n, n, n):
            raise ShapeError(f"C must have shape ({n},{n},{n}), got {C.shape}")
        chart = cls(m, n, constant_field(rho, m), constant_field(C, m), label)
        chart._const_rho = rho
        chart._const_C = C
        return chart

    @classmethod
    def standard(cls, m: int, label: str = ""):
        """The tangent-bundle chart: rho = identity, C = 0."""
        return cls.from_constant(np.eye(m), np.zeros((m, m, m)),
                                 label or f"standard(R^{m})")

    @classmethod
    def lie_algebra(cls, c: np.ndarray, label: str = ""):
        """A Lie algebra seen as an algebroid over a 1-point base.

        Modeled with one dummy base coordinate and rho = 0 so that every
        code path works unchanged on zero-dimensional reductions.
        """
        c = np.asarray(c, dtype=float)
        n = c.shape[0]
        if c.shape != (n, n, n):
            raise ShapeError(f"structure constants must be (n,n,n), got {c.shape}")
        return cls.from_constant(np.zeros((1, n)), c, label or "lie-algebra")

    def rho_at(self, x) -> np.ndarray:
        R = self.rho(x)
        if R.shape != (self.m, self.n):
            raise ShapeError(f"rho(x) has shape {R.shape}, expected ({self.m},{self.n})")
        return R

    def C_at(self, x) -> np.ndarray:
        C = self.C(x)
        if C.shape != (self.n, self.n, self.n):
            raise ShapeError(f"C(x) has shape {C.shape}, expected ({self.n},)*3")
        return C

    @property
    def is_constant(self) -> bool:
        return self._const_rho is not None

    def __repr__(self):
        return f"AlgebroidChart(m={self.m}, n={self.n}, label={self.label!r})"


@dataclass(frozen=True)
class StructureReport:
    """Maxima of the chart-consistency residuals over the sample set."""

    max_antisymmetry: float
    max_anchor_eq: float        # anchor-compatibility structure equation
    max_jacobi_eq: float        # cyclic (Jacobi-type) structure equation
    samples: int
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.max_antisymmetry, self.max_anchor_eq,
                   self.max_jacobi_eq) <= self.tol

    def as_dict(self) -> dict:
        return {
            "max_antisymmetry": self.max_antisymmetry,
            "max_anchor_eq": self.max_anchor_eq,
            "max_jacobi_eq": self.max_jacobi_eq,
            "samples": self.samples,
            "tol": self.tol,
            "passed": self.passed,
        }


def sample_box(lo, hi, count: int, offset: float = 0.5) -> np.ndarray:
    """Low-discrepancy (Kronecker) point set in the box [lo, hi]^d.

    Deterministic for a given offset; good enough spread for residual
    sampling without pulling in a QMC dependency.
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    if lo.shape != hi.shape:
        raise ShapeError("box corners must have the same shape")
    d = lo.size
    # generalized golden ratio alphas (Roberts' R_d sequence)
    phi = 1.0
    for _ in range(32):
        phi = (1.0 + phi) ** (1.0 / (d + 1))
    alpha = (1.0 / phi) ** np.arange(1, d + 1)
    k = np.arange(1, count + 1)[:, None]
    u = np.mod(offset + k * alpha[None, :], 1.0)
    return lo[None, :] + u * (hi - lo)[None, :]


def validate_structure(chart: AlgebroidChart, sample_points,
                       tol: float = 1e-6,
                       cfg: DiffConfig | None = None) -> StructureReport:
    """Check antisymmetry of C and both structure equations at sample points.

    The anchor equation reads
    ``rho^j_a d_j rho^i_b - rho^j_b d_j rho^i_a = rho^i_g C^g_ab``
    and the cyclic equation
    ``sum_cyc(a,b,g) [rho^i_a d_i C^n_bg + C^n_am C^m_bg] = 0``;
    base derivatives are central differences.
    """
    pts = np.atleast_2d(np.asarray(sample_points, dtype=float))
    if pts.shape[0] == 0:
        raise ShapeError("sample_points must be nonempty")
    if pts.shape[1] != chart.m:
        raise ShapeError(f"sample points must have dimension {chart.m}")
    cfg = cfg or DiffConfig()

    max_anti = 0.0
    max_eq1 = 0.0
    max_eq2 = 0.0
    for x in pts:
        rho = chart.rho_at(x)
        C = chart.C_at(x)
        max_anti = max(max_anti, float(np.max(np.abs(C + C.transpose(0, 2, 1)))))

        drho = fd_jacobian(chart.rho, x, cfg)          # (i, alpha, j)
        # rho^j_a d rho^i_b/dx^j  ->  lhs[i, a, b]
        lhs = np.einsum("ja,ibj->iab", rho, drho)
        lhs = lhs - lhs.transpose(0, 2, 1)
        rhs = np.einsum("ig,gab->iab", rho, C)
        max_eq1 = max(max_eq1, float(np.max(np.abs(lhs - rhs))))

        dC = fd_jacobian(chart.C, x, cfg)              # (nu, beta, gamma, i)
        term = np.einsum("ia,nbgi->nabg", rho, dC) \
            + np.einsum("nam,mbg->nabg", C, C)
        cyc = term + term.transpose(0, 2, 3, 1) + term.transpose(0, 3, 1, 2)
        max_eq2 = max(max_eq2, float(np.max(np.abs(cyc))))

    return StructureReport(max_anti, max_eq1, max_eq2, pts.shape[0], tol)


def dE_function(chart: AlgebroidChart, f: ScalarField, x,
                cfg: DiffConfig | None = None) -> np.ndarray:
    """Algebroid differential of a base function: (d^E f)_a = rho^i_a d_i f."""
    if f.dim != chart.m:
        raise ShapeError(f"f lives on {f.dim}-space, chart base is {chart.m}")
    x = np.asarray(x, dtype=float)
    grad = fd_gradient(f, x, cfg)
    return chart.rho_at(x).T @ grad


def dE_oneform(chart: AlgebroidChart, theta: VectorField, x,
               cfg: DiffConfig | None = None) -> np.ndarray:
    """Evaluated 2-form coefficients of the differential of a 1-section.

    ``(d^E theta)_bg = rho^i_b d_i theta_g - rho^i_g d_i theta_b
    - theta_a C^a_bg``; the result is antisymmetric.
    """
    x = np.asarray(x, dtype=float)
    th = theta(x)
    if th.shape != (chart.n,):
        raise ShapeError(f"theta(x) has shape {th.shape}, expected ({chart.n},)")
    dth = fd_jacobian(theta, x, cfg)                   # (gamma, i)
    rho = chart.rho_at(x)
    C = chart.C_at(x)
    grad_part = np.einsum("ib,gi->bg", rho, dth)
    out = grad_part - grad_part.T - np.einsum("a,abg->bg", th, C)
    return out


def bracket_sections(chart: AlgebroidChart, X: VectorField, Y: VectorField, x,
                     cfg: DiffConfig | None = None) -> np.ndarray:
    """Bracket of two sections in components.

    ``[X, Y]^g = rho^i_a X^a d_i Y^g - rho^i_b Y^b d_i X^g + C^g_ab X^a Y^b``.
    """
    x = np.asarray(x, dtype=float)
    Xv = X(x)
    Yv = Y(x)
    if Xv.shape != (chart.n,) or Yv.shape != (chart.n,):
        raise ShapeError("sections must output n components")
    rho = chart.rho_at(x)
    C = chart.C_at(x)
    dX = fd_jacobian(X, x, cfg)                        # (gamma, i)
    dY = fd_jacobian(Y, x, cfg)
    vX = rho @ Xv                                      # base velocity of X
    vY = rho @ Yv
    return dY @ vX - dX @ vY + np.einsum("gab,a,b->g", C, Xv, Yv)


def chart_to_dict(chart: AlgebroidChart) -> dict:
    """JSON-ready dict for a constant-coefficient chart."""
    if not chart.is_constant:
        raise ValueError("only constant-coefficient charts can be serialized")
    return {
        "m": chart.m,
        "n": chart.n,
        "rho": chart._const_rho.tolist(),
        "C": chart._const_C.tolist(),
        "label": chart.label,
    }


def chart_from_dict(data: dict) -> AlgebroidChart:
    rho = np.asarray(data["rho"], dtype=float)
    C = np.asarray(data["C"], dtype=float)
    chart = AlgebroidChart.from_constant(rho, C, label=data.get("label", ""))
    if chart.m != int(data["m"]) or chart.n != int(data["n"]):
        raise ShapeError("declared m/n do not match rho/C shapes")
    return chart


def save_chart(chart: AlgebroidChart, path) -> None:
    with open(path, "w") as fh:
        json.dump(chart_to_dict(chart), fh, indent=2)


def load_chart(path) -> AlgebroidChart:
    with open(path) as fh:
        return chart_from_dict(json.load(fh))
