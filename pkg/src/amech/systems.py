"""Coordinate points and chart-plus-function system bundles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebroid import AlgebroidChart
from .errors import ShapeError
from .fields import ScalarField


def _vec(v, length, name):
    v = np.asarray(v, dtype=float)
    if v.shape != (length,):
        raise ShapeError(f"{name} must have shape ({length},), got {v.shape}")
    return v


@dataclass(frozen=True)
class PrimalPoint:
    """A point (x, y) of the total space E in fibred coordinates."""

    x: np.ndarray
    y: np.ndarray

    def as_state(self) -> np.ndarray:
        return np.concatenate([self.x, self.y])

    @classmethod
    def from_state(cls, state, m: int):
        state = np.asarray(state, dtype=float)
        return cls(state[:m].copy(), state[m:].copy())


@dataclass(frozen=True)
class DualPoint:
    """A point (x, p) of the dual bundle E* in fibred coordinates."""

    x: np.ndarray
    p: np.ndarray

    def as_state(self) -> np.ndarray:
        return np.concatenate([self.x, self.p])

    @classmethod
    def from_state(cls, state, m: int):
        state = np.asarray(state, dtype=float)
        return cls(state[:m].copy(), state[m:].copy())


class LagrangianSystem:
    """An algebroid chart together with a Lagrangian L(x, y)."""

    def __init__(self, chart: AlgebroidChart, L: ScalarField):
        if L.dim != chart.m + chart.n:
            raise ShapeError(
                f"L must live on (m+n)={chart.m + chart.n}-space, got dim {L.dim}")
        self.chart = chart
        self.L = L

    def point(self, x, y) -> PrimalPoint:
        return PrimalPoint(_vec(x, self.chart.m, "x"), _vec(y, self.chart.n, "y"))


class HamiltonianSystem:
    """An algebroid chart together with a Hamiltonian H(x, p)."""

    def __init__(self, chart: AlgebroidChart, H: ScalarField):
        if H.dim != chart.m + chart.n:
            raise ShapeError(
                f"H must live on (m+n)={chart.m + chart.n}-space, got dim {H.dim}")
        self.chart = chart
        self.H = H

    def point(self, x, p) -> DualPoint:
        return DualPoint(_vec(x, self.chart.m, "x"), _vec(p, self.chart.n, "p"))
