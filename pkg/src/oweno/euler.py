"""Ideal-gas Euler equations in one and two space dimensions.

States are arrays whose leading axis holds the conserved variables:
``(rho, rho*v, E)`` in 1D and ``(rho, rho*vx, rho*vy, E)`` in 2D. Any
trailing axes are treated as grid axes.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

from .exceptions import InvalidState, NonHyperbolicState


@dataclass(frozen=True)
class Eos:
    gamma: float = 1.4

    def __post_init__(self):
        if not 1.0 < self.gamma <= 3.0:
            raise ValueError(f"gamma must lie in (1, 3], got {self.gamma}")


@dataclass(frozen=True)
class CharacteristicFrame:
    left_eigenvectors: np.ndarray
    right_eigenvectors: np.ndarray
    eigenvalues: np.ndarray


VARIABLES = {3: ("rho", "mom", "E"), 4: ("rho", "momx", "momy", "E")}


@njit(cache=True)
def local_state(U, s, perm):
    """Return (rho, m_normal, m_tangential, E) of column ``s`` in sweep-local order."""
    rho = U[perm[0], s]
    mn = U[perm[1], s]
    if U.shape[0] == 4:
        return rho, mn, U[perm[2], s], U[perm[3], s]
    return rho, mn, 0.0, U[perm[2], s]


@njit(cache=True)
def eigensystem(rho, mn, mt, E, gamma, nvar, L, R, lam):
    """Fill left/right eigenvectors and eigenvalues in sweep-local order.

    Fields are ordered (v-c, v, [v,] v+c). Returns False for rho <= 0 or p <= 0.
    """
    if not rho > 0.0:
        return False
    ir = 1.0 / rho
    u = mn * ir
    v = mt * ir
    q2 = u * u + v * v
    p = (gamma - 1.0) * (E - 0.5 * rho * q2)
    if not p > 0.0:
        return False
    c = np.sqrt(gamma * p * ir)
    ic = 1.0 / c
    H = (E + p) * ir
    b1 = (gamma - 1.0) * ic * ic
    b2 = 0.5 * b1 * q2
    last = nvar - 1
    R[:, :] = 0.0
    L[:, :] = 0.0
    # acoustic left-going, entropy, [shear,] acoustic right-going
    R[0, 0] = 1.0
    R[1, 0] = u - c
    R[last, 0] = H - u * c
    R[0, 1] = 1.0
    R[1, 1] = u
    R[last, 1] = 0.5 * q2
    R[0, last] = 1.0
    R[1, last] = u + c
    R[last, last] = H + u * c
    L[0, 0] = 0.5 * (b2 + u * ic)
    L[0, 1] = -0.5 * (b1 * u + ic)
    L[0, last] = 0.5 * b1
    L[1, 0] = 1.0 - b2
    L[1, 1] = b1 * u
    L[1, last] = -b1
    L[last, 0] = 0.5 * (b2 - u * ic)
    L[last, 1] = -0.5 * (b1 * u - ic)
    L[last, last] = 0.5 * b1
    lam[0] = u - c
    lam[1] = u
    lam[last] = u + c
    if nvar == 4:
        R[2, 0] = v
        R[2, 1] = v
        R[2, 3] = v
        R[2, 2] = 1.0
        R[3, 2] = v
        L[0, 2] = -0.5 * b1 * v
        L[1, 2] = b1 * v
        L[3, 2] = -0.5 * b1 * v
        L[2, 0] = -v
        L[2, 2] = 1.0
        lam[2] = u
    return True


@njit(cache=True)
def local_flux(rho, mn, mt, E, gamma, nvar, out):
    """Physical flux along the sweep direction, sweep-local order. False if invalid."""
    if not rho > 0.0:
        return False
    u = mn / rho
    p = (gamma - 1.0) * (E - 0.5 * (mn * mn + mt * mt) / rho)
    if not p > 0.0:
        return False
    out[0] = mn
    out[1] = mn * u + p
    if nvar == 4:
        out[2] = mt * u
    out[nvar - 1] = u * (E + p)
    return True


def _as_state(U):
    U = np.asarray(U, dtype=float)
    if U.shape[0] not in (3, 4):
        raise ValueError(f"expected 3 or 4 conserved variables, got leading axis {U.shape[0]}")
    return U


def _kinetic(U):
    if U.shape[0] == 3:
        return 0.5 * U[1] ** 2 / U[0]
    return 0.5 * (U[1] ** 2 + U[2] ** 2) / U[0]


def _first_bad(mask):
    idx = np.argwhere(mask)
    return tuple(int(i) for i in idx[0]) if idx.size else None


def pressure(U, eos=Eos()):
    """Pressure ``(gamma-1)(E - rho|v|^2/2)``; raises :class:`InvalidState` if nonpositive."""
    U = _as_state(U)
    rho = U[0]
    if np.any(~(rho > 0)):
        loc = _first_bad(np.atleast_1d(~(rho > 0)))
        raise InvalidState(f"nonpositive density at {loc}", loc)
    p = (eos.gamma - 1.0) * (U[-1] - _kinetic(U))
    if np.any(~(p > 0)):
        loc = _first_bad(np.atleast_1d(~(p > 0)))
        raise InvalidState(f"nonpositive pressure at {loc}", loc)
    return p


def sound_speed(U, eos=Eos()):
    U = _as_state(U)
    return np.sqrt(eos.gamma * pressure(U, eos) / U[0])


def primitive_to_conserved(prim, eos=Eos()):
    """``(rho, v[, vy], p)`` to conserved variables."""
    prim = np.asarray(prim, dtype=float)
    rho, p = prim[0], prim[-1]
    vel = prim[1:-1]
    U = np.empty_like(prim)
    U[0] = rho
    U[1:-1] = rho * vel
    U[-1] = p / (eos.gamma - 1.0) + 0.5 * rho * np.sum(vel**2, axis=0)
    return U


def conserved_to_primitive(U, eos=Eos()):
    U = _as_state(U)
    prim = np.empty_like(U)
    prim[0] = U[0]
    prim[1:-1] = U[1:-1] / U[0]
    prim[-1] = pressure(U, eos)
    return prim


def analytic_flux(U, eos=Eos(), direction=0):
    """Exact flux vector along axis ``direction`` (0 = x, 1 = y)."""
    U = _as_state(U)
    p = pressure(U, eos)
    vn = U[1 + direction] / U[0]
    F = U * vn
    F[1 + direction] = F[1 + direction] + p
    F[-1] = vn * (U[-1] + p)
    return F


def _perm(nvar, direction):
    if nvar == 3:
        if direction != 0:
            raise ValueError("1D states only have direction 0")
        return np.array([0, 1, 2])
    if direction == 0:
        return np.array([0, 1, 2, 3])
    return np.array([0, 2, 1, 3])


def frame_at(U, eos=Eos(), direction=0):
    """Characteristic frame of a single state along ``direction``."""
    U = _as_state(U).reshape(-1)
    nvar = U.shape[0]
    perm = _perm(nvar, direction)
    Ll = np.empty((nvar, nvar))
    Rl = np.empty((nvar, nvar))
    lam = np.empty(nvar)
    rho, mn, mt, E = local_state(U[:, None], 0, perm)
    if not eigensystem(rho, mn, mt, E, eos.gamma, nvar, Ll, Rl, lam):
        raise NonHyperbolicState("no eigen-decomposition at a state with rho <= 0 or p <= 0")
    # back to global component order
    inv = np.argsort(perm)
    left = Ll[:, inv]
    right = Rl[inv, :]
    return CharacteristicFrame(left, right, lam)


def eigen_frame(stateL, stateR, eos=Eos(), direction=0):
    """Frame at the arithmetic mean of two conserved states.

    The mean of two admissible states is admissible since pressure is a
    concave function of the conserved variables.
    """
    UL = _as_state(stateL).reshape(-1)
    UR = _as_state(stateR).reshape(-1)
    for U in (UL, UR):
        if not (U[0] > 0 and (eos.gamma - 1.0) * (U[-1] - _kinetic(U)) > 0):
            raise NonHyperbolicState("interface state with rho <= 0 or p <= 0")
    return frame_at(0.5 * (UL + UR), eos, direction)


def max_wave_speed(U, eos=Eos()):
    """Largest ``|v_d| + c`` over the grid, one value per space direction."""
    U = _as_state(U)
    c = sound_speed(U, eos)
    ndir = U.shape[0] - 2
    return tuple(float(np.max(np.abs(U[1 + d] / U[0]) + c)) for d in range(ndir))
