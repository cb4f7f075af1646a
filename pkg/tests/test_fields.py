import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from amech import (DiffConfig, NonFiniteField, ScalarField, ShapeError,
                   TensorField, fd_gradient, fd_hessian, fd_jacobian,
                   fd_mixed_block)
from helpers import random_smooth_field


def test_gradient_of_square():
    f = ScalarField(lambda z: z[0] ** 2, 1)
    g = fd_gradient(f, np.array([1.0]))
    assert abs(g[0] - 2.0) <= 1e-9


def test_gradient_of_constant_is_zero():
    f = ScalarField(lambda z: 3.7, 4)
    assert np.all(fd_gradient(f, np.zeros(4)) == 0.0)


def test_gradient_of_sine():
    f = ScalarField(lambda z: np.sin(z[0]), 1)
    g = fd_gradient(f, np.array([0.3]))
    assert abs(g[0] - np.cos(0.3)) <= 1e-9


def test_analytic_gradient_short_circuits():
    calls = []

    def grad(z):
        calls.append(1)
        return np.array([5.0])

    f = ScalarField(lambda z: z[0], 1, analytic_grad=grad)
    assert fd_gradient(f, np.array([2.0]))[0] == 5.0
    assert calls


def test_jacobian_of_linear_map(rng):
    A = rng.standard_normal((3, 4))
    F = TensorField(lambda z: A @ z, 4)
    J = fd_jacobian(F, rng.standard_normal(4))
    assert np.max(np.abs(J - A)) <= 1e-8


def test_hessian_of_quadratic(rng):
    Q = rng.standard_normal((3, 3))
    Q = 0.5 * (Q + Q.T)
    f = ScalarField(lambda z: 0.5 * z @ Q @ z, 3)
    H = fd_hessian(f, rng.standard_normal(3))
    assert np.max(np.abs(H - Q)) <= 1e-6


def test_hessian_hand_example():
    # f(x, y) = x y^2 at (1, 2): [[0, 4], [4, 2]]
    f = ScalarField(lambda z: z[0] * z[1] ** 2, 2)
    H = fd_hessian(f, np.array([1.0, 2.0]))
    assert np.max(np.abs(H - np.array([[0.0, 4.0], [4.0, 2.0]]))) <= 1e-5


def test_hessian_is_symmetric(rng):
    f = random_smooth_field(rng, 4)
    H = fd_hessian(f, rng.standard_normal(4))
    assert np.array_equal(H, H.T)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=2, max_size=2),
       st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_quadratics_are_differentiated_exactly(point, a, b, c):
    # degree <= 2 polynomials have no truncation error under central FD
    f = ScalarField(lambda z: a * z[0] ** 2 + b * z[0] * z[1] + c * z[1], 2)
    x = np.asarray(point)
    g = fd_gradient(f, x)
    exact = np.array([2 * a * x[0] + b * x[1], b * x[0] + c])
    scale = max(1.0, float(np.max(np.abs(exact))))
    assert np.max(np.abs(g - exact)) / scale <= 1e-9


def test_analytic_and_fd_agree_on_smooth_fields(rng):
    for _ in range(100):
        dim = int(rng.integers(1, 5))
        f = random_smooth_field(rng, dim, with_grad=True)
        x = rng.uniform(-1, 1, size=dim)
        g_an = np.asarray(f.analytic_grad(x))
        g_fd = fd_gradient(ScalarField(f.eval, dim), x)
        scale = max(1.0, float(np.max(np.abs(g_an))))
        assert np.max(np.abs(g_an - g_fd)) / scale <= 1e-4


def test_hessian_stencil_and_gradient_routes_agree(rng):
    # the pure second-difference path and the differenced-analytic-gradient
    # path must land on the same matrix
    for _ in range(10):
        f = random_smooth_field(rng, 3, with_grad=True)
        x = rng.uniform(-1, 1, size=3)
        H_grad_route = fd_hessian(f, x)
        H_stencil = fd_hessian(ScalarField(f.eval, 3), x)
        assert np.max(np.abs(H_grad_route - H_stencil)) <= 1e-5


def test_mixed_block_matches_hessian_blocks(rng):
    f = random_smooth_field(rng, 5, with_grad=True)
    x = rng.uniform(-1, 1, size=5)
    H = fd_hessian(f, x)
    M = fd_mixed_block(f, x, range(2), range(2, 5))
    assert np.max(np.abs(M - H[:2, 2:])) <= 1e-7


def test_nonfinite_evaluation_carries_index():
    def ev(z):
        with np.errstate(invalid="ignore"):
            return float(np.sqrt(z[1]))

    f = ScalarField(ev, 2)
    with pytest.raises(NonFiniteField) as exc:
        fd_gradient(f, np.array([0.5, 0.0]))   # z[1] - h < 0 -> nan
    assert exc.value.index == 1


def test_shape_mismatch_raises():
    f = ScalarField(lambda z: z[0], 3)
    with pytest.raises(ShapeError):
        fd_gradient(f, np.zeros(2))
    F = TensorField(lambda z: np.ones(2), 2, shape=(2,))
    with pytest.raises(ShapeError):
        F(np.zeros(3))


def test_tensor_field_shape_is_pinned():
    flip = {"n": 2}

    def ev(z):
        flip["n"] = 3 - flip["n"]
        return np.ones(flip["n"])

    F = TensorField(ev, 1)
    F(np.zeros(1))
    with pytest.raises(ShapeError):
        F(np.zeros(1))


def test_diffconfig_validation_and_env_override(monkeypatch):
    with pytest.raises(ValueError):
        DiffConfig(h=0.0)
    with pytest.raises(ValueError):
        DiffConfig(scheme="forward-1")
    monkeypatch.setenv("AMECH_FD_H", "1e-7")
    assert DiffConfig().h == 1e-7
    monkeypatch.delenv("AMECH_FD_H")
    assert DiffConfig().h == 1e-5
