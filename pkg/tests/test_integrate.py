import numpy as np
import pytest

from amech import IntegratorConfig, UnknownChannel, drift, rk4_integrate


def test_exponential_decay_endpoint():
    traj = rk4_integrate(lambda s: -s, np.array([1.0]),
                         IntegratorConfig(dt=1e-3, t_end=1.0))
    assert abs(traj.states[-1, 0] - np.exp(-1.0)) <= 1e-10
    assert traj.completed
    assert traj.times[-1] == pytest.approx(1.0, abs=1e-12)


def test_zero_field_is_constant():
    s0 = np.array([0.3, -0.7])
    traj = rk4_integrate(lambda s: np.zeros(2), s0,
                         IntegratorConfig(dt=0.1, t_end=1.0))
    assert np.all(traj.states == s0)


def test_fourth_order_convergence():
    errs = []
    for dt in (2e-2, 1e-2):
        traj = rk4_integrate(lambda s: -s, np.array([1.0]),
                             IntegratorConfig(dt=dt, t_end=1.0))
        errs.append(abs(traj.states[-1, 0] - np.exp(-1.0)))
    ratio = errs[0] / errs[1]
    assert 12.0 <= ratio <= 20.0


def test_bitwise_determinism():
    def field(s):
        return np.array([s[1], -np.sin(s[0])])

    cfg = IntegratorConfig(dt=1e-2, t_end=3.0)
    a = rk4_integrate(field, np.array([1.0, 0.0]), cfg,
                      {"E": lambda s: 0.5 * s[1] ** 2 - np.cos(s[0])})
    b = rk4_integrate(field, np.array([1.0, 0.0]), cfg,
                      {"E": lambda s: 0.5 * s[1] ** 2 - np.cos(s[0])})
    assert np.array_equal(a.states, b.states)
    assert np.array_equal(a.monitors["E"], b.monitors["E"])


def test_monitors_sampled_at_every_state():
    traj = rk4_integrate(lambda s: -s, np.array([2.0]),
                         IntegratorConfig(dt=0.25, t_end=1.0),
                         {"val": lambda s: float(s[0])})
    assert traj.monitors["val"].shape == traj.times.shape
    assert traj.monitors["val"][0] == 2.0


def test_drift_constant_and_moving_channels():
    traj = rk4_integrate(lambda s: np.array([1.0]), np.array([0.0]),
                         IntegratorConfig(dt=0.1, t_end=1.0),
                         {"const": lambda s: 4.2, "x": lambda s: float(s[0])})
    assert drift(traj, "const") == (0.0, 0.0)
    mx, rel = drift(traj, "x")
    assert mx == pytest.approx(1.0, abs=1e-12)
    assert rel == float("inf")          # started at exactly zero


def test_unknown_channel_raises():
    traj = rk4_integrate(lambda s: -s, np.array([1.0]),
                         IntegratorConfig(dt=0.5, t_end=1.0))
    with pytest.raises(UnknownChannel):
        drift(traj, "nope")


def test_blowup_truncates_with_error_flag():
    # dy/dt = y^2 from y(0)=1 blows up at t=1
    def field(s):
        with np.errstate(over="ignore"):
            return s * s

    traj = rk4_integrate(field, np.array([1.0]),
                         IntegratorConfig(dt=1e-2, t_end=2.0))
    assert not traj.completed
    assert traj.error is not None
    assert traj.times.size < 201
    assert np.all(np.isfinite(traj.states))


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(dt=0.0, t_end=1.0)
    with pytest.raises(ValueError):
        IntegratorConfig(dt=0.1, t_end=-1.0)
    with pytest.raises(ValueError):
        IntegratorConfig(dt=0.1, t_end=1.0, method="leapfrog")
