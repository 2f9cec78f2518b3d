import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oweno.euler import (
    Eos,
    analytic_flux,
    conserved_to_primitive,
    eigen_frame,
    frame_at,
    max_wave_speed,
    pressure,
    primitive_to_conserved,
    sound_speed,
)
from oweno.exceptions import InvalidState, NonHyperbolicState

EOS = Eos()
rho_s = st.floats(min_value=0.05, max_value=20)
vel_s = st.floats(min_value=-10, max_value=10)
p_s = st.floats(min_value=0.01, max_value=1000)


def test_pressure_examples():
    assert pressure(np.array([1.0, 0.0, 2.5])) == pytest.approx(1.0, rel=1e-15)
    # rho=1, v=1, p=1 -> E = 2.5 + 0.5
    assert pressure(np.array([1.0, 1.0, 3.0])) == pytest.approx(1.0, rel=1e-15)
    assert pressure(np.array([2.0, 2.0, -2.0, 7.0])) == pytest.approx(0.4 * 5.0, rel=1e-15)


def test_sound_speed():
    assert sound_speed(np.array([1.0, 0.0, 2.5])) == pytest.approx(np.sqrt(1.4), rel=1e-15)


def test_invalid_states_raise():
    with pytest.raises(InvalidState):
        pressure(np.array([0.0, 0.0, 1.0]))
    with pytest.raises(InvalidState) as info:
        pressure(np.array([[1.0, 1.0], [0.0, 3.0], [2.5, 1.0]]))
    assert info.value.location == (1,)
    with pytest.raises(ValueError):
        pressure(np.zeros((5, 2)))


def test_gamma_validation():
    with pytest.raises(ValueError):
        Eos(1.0)


@settings(max_examples=100, deadline=None)
@given(rho_s, vel_s, vel_s, p_s)
def test_primitive_round_trip(rho, vx, vy, p):
    prim = np.array([rho, vx, vy, p])
    back = conserved_to_primitive(primitive_to_conserved(prim))
    np.testing.assert_allclose(back, prim, rtol=1e-9, atol=1e-9 * (abs(vx) + abs(vy) + 1))


def _jacobian(U, direction, h=1e-6):
    n = U.size
    J = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h * max(1.0, abs(U[j]))
        J[:, j] = (analytic_flux(U + e, EOS, direction) - analytic_flux(U - e, EOS, direction)) / (2 * e[j])
    return J


@settings(max_examples=60, deadline=None)
@given(rho_s, vel_s, vel_s, p_s, st.sampled_from([0, 1]))
def test_frame_diagonalises_jacobian(rho, vx, vy, p, direction):
    U = primitive_to_conserved(np.array([rho, vx, vy, p]))
    fr = frame_at(U, EOS, direction)
    L, R, lam = fr.left_eigenvectors, fr.right_eigenvectors, fr.eigenvalues
    np.testing.assert_allclose(L @ R, np.eye(4), atol=1e-9)
    c = np.sqrt(1.4 * p / rho)
    vn = (vx, vy)[direction]
    np.testing.assert_allclose(lam, [vn - c, vn, vn, vn + c], rtol=1e-12, atol=1e-12)
    J = _jacobian(U, direction)
    scale = np.max(np.abs(J))
    np.testing.assert_allclose(J @ R, R * lam, atol=2e-5 * scale * np.max(np.abs(R)))


def test_frame_1d():
    U = primitive_to_conserved(np.array([1.2, 0.3, 0.8]))
    fr = frame_at(U)
    np.testing.assert_allclose(fr.left_eigenvectors @ fr.right_eigenvectors, np.eye(3), atol=1e-13)
    J = _jacobian(U, 0)
    np.testing.assert_allclose(J @ fr.right_eigenvectors, fr.right_eigenvectors * fr.eigenvalues, atol=1e-6)
    with pytest.raises(ValueError):
        frame_at(U, EOS, 1)


def test_mirror_symmetry_of_flux():
    U = primitive_to_conserved(np.array([1.1, 0.7, -0.2, 1.5]))
    M = U.copy()
    M[1] = -M[1]
    F, Fm = analytic_flux(U, EOS, 0), analytic_flux(M, EOS, 0)
    np.testing.assert_allclose(Fm, [-F[0], F[1], -F[2], -F[3]], rtol=1e-15)


def test_directions_swap():
    U = primitive_to_conserved(np.array([1.1, 0.7, -0.2, 1.5]))
    S = U[[0, 2, 1, 3]]
    np.testing.assert_allclose(analytic_flux(S, EOS, 1)[[0, 2, 1, 3]], analytic_flux(U, EOS, 0), rtol=1e-15)


def test_eigen_frame_uses_mean_state():
    a = primitive_to_conserved(np.array([1.0, 0.5, 1.0]))
    b = primitive_to_conserved(np.array([0.2, -0.5, 0.1]))
    np.testing.assert_array_equal(eigen_frame(a, b).eigenvalues, frame_at(0.5 * (a + b)).eigenvalues)
    with pytest.raises(NonHyperbolicState):
        eigen_frame(a, np.array([1.0, 0.0, -0.1]))


def test_max_wave_speed():
    U = primitive_to_conserved(np.array([[1.0, 1.0], [0.5, -2.0], [0.0, 0.1], [1.4, 1.4]]))
    sx, sy = max_wave_speed(U)
    assert sx == pytest.approx(2.0 + np.sqrt(1.4 * 1.4), rel=1e-14)
    assert sy == pytest.approx(0.1 + np.sqrt(1.4 * 1.4), rel=1e-14)
