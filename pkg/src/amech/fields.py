"""Scalar/vector/tensor fields and central finite differences.

Fields are thin wrappers around user callables evaluated at points of a
coordinate chart.  Everything downstream (structure equations, dynamics,
reduction) differentiates fields through this module, so the conventions
are fixed here once:

* points are 1-d float arrays of length ``dim``,
* derivatives are order-2 central differences with step ``DiffConfig.h``,
* a ``ScalarField`` may carry an analytic gradient which is then used
  instead of differencing.

The default step can be overridden globally through the ``AMECH_FD_H``
environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import NonFiniteField, ShapeError


def _default_h() -> float:
    return float(os.environ.get("AMECH_FD_H", "1e-5"))


@dataclass(frozen=True)
class DiffConfig:
    """Finite-difference settings; only the order-2 central scheme exists."""

    h: float = field(default_factory=_default_h)
    scheme: str = "central-2"

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"differentiation step must be positive, got {self.h}")
        if self.scheme != "central-2":
            raise ValueError(f"unsupported differencing scheme {self.scheme!r}")


#: step used for second-level (nested) differencing, where first-level
#: noise makes the default step too small
WIDE_H = 1e-4


class ScalarField:
    """Real-valued function of a ``dim``-dimensional point.

    Parameters
    ----------
    eval:
        callable mapping a point to a float; must be deterministic.
    dim:
        dimension of the domain.
    analytic_grad:
        optional callable returning the exact gradient.  When present it
        is used by `fd_gradient` (and must agree with central differences
        on smooth regions).
    """

    def __init__(self, eval: Callable[[np.ndarray], float], dim: int,
                 analytic_grad: Optional[Callable[[np.ndarray], np.ndarray]] = None):
        self.eval = eval
        self.dim = int(dim)
        self.analytic_grad = analytic_grad

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ShapeError(f"expected point of shape ({self.dim},), got {x.shape}")
        return float(self.eval(x))


class TensorField:
    """Array-valued function of a ``dim``-dimensional point.

    The output shape is fixed across the domain; if ``shape`` is given it
    is enforced on every evaluation, otherwise the first evaluation pins it.
    """

    def __init__(self, eval: Callable[[np.ndarray], np.ndarray], dim: int,
                 shape: Optional[tuple] = None):
        self.eval = eval
        self.dim = int(dim)
        self.shape = tuple(shape) if shape is not None else None

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ShapeError(f"expected point of shape ({self.dim},), got {x.shape}")
        out = np.asarray(self.eval(x), dtype=float)
        if self.shape is None:
            self.shape = out.shape
        elif out.shape != self.shape:
            raise ShapeError(f"field output shape changed: {out.shape} != {self.shape}")
        return out


# a vector field is just a rank-1 tensor field
VectorField = TensorField


def constant_field(value: np.ndarray, dim: int) -> TensorField:
    """Field returning a fixed array everywhere."""
    value = np.asarray(value, dtype=float)
    return TensorField(lambda x, _v=value: _v, dim, shape=value.shape)


def _require_finite(arr, what, index=None):
    arr = np.asarray(arr, dtype=float)
    if not np.all(np.isfinite(arr)):
        if index is None:
            bad = np.argwhere(~np.isfinite(np.atleast_1d(arr)))
            index = tuple(bad[0]) if bad.size else None
        raise NonFiniteField(f"non-finite value in {what}", index=index)
    return arr


def _central_gradient(func, x, h):
    """Gradient of a scalar callable by central differences."""
    x = np.asarray(x, dtype=float)
    d = x.size
    g = np.empty(d)
    for i in range(d):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        fp = func(xp)
        fm = func(xm)
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise NonFiniteField("non-finite evaluation in central gradient", index=i)
        g[i] = (fp - fm) / (2.0 * h)
    return g


def fd_gradient(f: ScalarField, x, cfg: DiffConfig | None = None) -> np.ndarray:
    """Gradient of ``f`` at ``x``: analytic if available, else central FD."""
    cfg = cfg or DiffConfig()
    x = np.asarray(x, dtype=float)
    if x.shape != (f.dim,):
        raise ShapeError(f"expected point of shape ({f.dim},), got {x.shape}")
    if f.analytic_grad is not None:
        g = np.asarray(f.analytic_grad(x), dtype=float)
        if g.shape != (f.dim,):
            raise ShapeError(f"analytic gradient has shape {g.shape}, expected ({f.dim},)")
        return _require_finite(g, "analytic gradient")
    return _central_gradient(f.eval, x, cfg.h)


def fd_jacobian(F: TensorField, x, cfg: DiffConfig | None = None) -> np.ndarray:
    """Derivative array of ``F`` at ``x``, shape ``F.shape + (dim,)``.

    Entry ``[..., i]`` is the central difference of ``F[...]`` along x^i.
    """
    cfg = cfg or DiffConfig()
    h = cfg.h
    x = np.asarray(x, dtype=float)
    if x.shape != (F.dim,):
        raise ShapeError(f"expected point of shape ({F.dim},), got {x.shape}")
    cols = []
    for i in range(F.dim):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        Fp = np.asarray(F(xp), dtype=float)
        Fm = np.asarray(F(xm), dtype=float)
        col = (Fp - Fm) / (2.0 * h)
        if not np.all(np.isfinite(col)):
            raise NonFiniteField("non-finite evaluation in jacobian", index=i)
        cols.append(col)
    return np.stack(cols, axis=-1)


def fd_hessian(f: ScalarField, x, cfg: DiffConfig | None = None) -> np.ndarray:
    """Symmetrized second-derivative matrix of ``f`` at ``x``.

    With an analytic gradient the Hessian is the central difference of the
    gradient (one differencing level, step ``cfg.h``).  Otherwise the
    standard 4-point / 3-point second-difference stencils are applied to
    ``f`` directly; their step never shrinks below `WIDE_H` because
    second-difference rounding noise grows like 1/h^2.  The result is
    symmetrized as ``(H + H.T) / 2``.
    """
    cfg = cfg or DiffConfig()
    h = cfg.h
    x = np.asarray(x, dtype=float)
    if x.shape != (f.dim,):
        raise ShapeError(f"expected point of shape ({f.dim},), got {x.shape}")
    d = f.dim
    if f.analytic_grad is not None:
        H = np.empty((d, d))
        for i in range(d):
            xp = x.copy()
            xm = x.copy()
            xp[i] += h
            xm[i] -= h
            gp = np.asarray(f.analytic_grad(xp), dtype=float)
            gm = np.asarray(f.analytic_grad(xm), dtype=float)
            col = (gp - gm) / (2.0 * h)
            if not np.all(np.isfinite(col)):
                raise NonFiniteField("non-finite evaluation in hessian", index=i)
            H[:, i] = col
        return 0.5 * (H + H.T)
    h = max(h, WIDE_H)
    H = np.empty((d, d))
    f0 = f(x)
    if not np.isfinite(f0):
        raise NonFiniteField("non-finite evaluation in hessian", index=None)
    for i in range(d):
        xp = x.copy()
        xm = x.copy()
        xp[i] += 2.0 * h
        xm[i] -= 2.0 * h
        val = (f(xp) - 2.0 * f0 + f(xm)) / (4.0 * h * h)
        if not np.isfinite(val):
            raise NonFiniteField("non-finite evaluation in hessian", index=i)
        H[i, i] = val
        for j in range(i + 1, d):
            xpp = x.copy()
            xpm = x.copy()
            xmp = x.copy()
            xmm = x.copy()
            xpp[i] += h
            xpp[j] += h
            xpm[i] += h
            xpm[j] -= h
            xmp[i] -= h
            xmp[j] += h
            xmm[i] -= h
            xmm[j] -= h
            val = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h)
            if not np.isfinite(val):
                raise NonFiniteField("non-finite evaluation in hessian", index=i)
            H[i, j] = val
            H[j, i] = val
    return 0.5 * (H + H.T)


def fd_mixed_block(f: ScalarField, x, rows, cols,
                   cfg: DiffConfig | None = None) -> np.ndarray:
    """Mixed second derivatives d^2 f / dx_r dx_c for r in rows, c in cols.

    Computed as an outer central difference of the first-level gradient
    components ``cols``.  With an analytic gradient the outer step is
    ``cfg.h``; when the inner gradient is itself differenced the outer
    step widens to `WIDE_H` to sit above the first-level noise.
    """
    cfg = cfg or DiffConfig()
    x = np.asarray(x, dtype=float)
    rows = list(rows)
    cols = list(cols)

    if f.analytic_grad is not None:
        h_outer = cfg.h

        def grad_cols(z):
            g = np.asarray(f.analytic_grad(z), dtype=float)
            return g[cols]
    else:
        h_outer = max(cfg.h, WIDE_H)

        def grad_cols(z):
            g = np.empty(len(cols))
            for k, c in enumerate(cols):
                zp = z.copy()
                zm = z.copy()
                zp[c] += cfg.h
                zm[c] -= cfg.h
                g[k] = (f.eval(zp) - f.eval(zm)) / (2.0 * cfg.h)
            return g

    out = np.empty((len(rows), len(cols)))
    for k, r in enumerate(rows):
        xp = x.copy()
        xm = x.copy()
        xp[r] += h_outer
        xm[r] -= h_outer
        row = (grad_cols(xp) - grad_cols(xm)) / (2.0 * h_outer)
        if not np.all(np.isfinite(row)):
            raise NonFiniteField("non-finite evaluation in mixed block", index=r)
        out[k] = row
    return out
