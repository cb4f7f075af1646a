"""Fixed-step classic RK4 with named invariant monitors.

Fixed step only: the acceptance checks rely on bitwise-deterministic
trajectories, and every intended problem is small enough that adaptivity
buys nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

from .errors import NonFiniteField, UnknownChannel


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-3
    t_end: float = 1.0
    method: str = "rk4"

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if self.method != "rk4":
            raise ValueError(f"unsupported method {self.method!r}")


@dataclass
class Trajectory:
    """Time-stamped states plus named scalar channels sampled per step."""

    times: np.ndarray
    states: np.ndarray
    monitors: Dict[str, np.ndarray] = field(default_factory=dict)
    error: Optional[str] = None

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states must have equal length")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("times must be strictly increasing")
        for name, chan in self.monitors.items():
            if len(chan) != len(self.times):
                raise ValueError(f"monitor channel {name!r} has wrong length")

    @property
    def completed(self) -> bool:
        return self.error is None

    def channel(self, name: str) -> np.ndarray:
        if name not in self.monitors:
            raise UnknownChannel(
                f"no monitor channel {name!r}; have {sorted(self.monitors)}")
        return self.monitors[name]


def rk4_integrate(field_fn: Callable[[np.ndarray], np.ndarray], state0,
                  cfg: IntegratorConfig,
                  monitors: Optional[Dict[str, Callable]] = None) -> Trajectory:
    """Classic RK4 run of d(state)/dt = field_fn(state).

    Monitors are evaluated at every accepted state including the initial
    one.  A non-finite evaluation mid-run truncates the trajectory and
    records the failure on the `Trajectory.error` flag instead of raising.
    """
    monitors = monitors or {}
    state = np.array(state0, dtype=float)
    n_steps = int(round(cfg.t_end / cfg.dt))
    times = np.arange(n_steps + 1) * cfg.dt

    with np.errstate(over="ignore", invalid="ignore"):
        chans = {name: [fn(state)] for name, fn in monitors.items()}
    states = [state.copy()]
    error = None
    dt = cfg.dt

    for _ in range(n_steps):
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                k1 = field_fn(state)
                k2 = field_fn(state + 0.5 * dt * k1)
                k3 = field_fn(state + 0.5 * dt * k2)
                k4 = field_fn(state + dt * k3)
                new = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        except NonFiniteField as exc:
            error = f"field evaluation failed: {exc}"
            break
        except FloatingPointError as exc:
            error = f"floating point failure: {exc}"
            break
        if not np.all(np.isfinite(new)):
            error = "state became non-finite"
            break
        state = new
        states.append(state.copy())
        with np.errstate(over="ignore", invalid="ignore"):
            for name, fn in monitors.items():
                chans[name].append(fn(state))

    k = len(states)
    return Trajectory(times=times[:k],
                      states=np.asarray(states),
                      monitors={name: np.asarray(vals) for name, vals in chans.items()},
                      error=error)


def drift(traj: Trajectory, channel: str):
    """Max absolute and relative deviation of a channel from its start."""
    c = traj.channel(channel)
    d = float(np.max(np.abs(c - c[0])))
    c0 = abs(float(c[0]))
    if c0 > 0.0:
        rel = d / c0
    else:
        rel = 0.0 if d == 0.0 else float("inf")
    return d, rel
