"""Numerical fluxes for the finite-difference (Shu-Osher) formulation.

For an interface ``i+1/2`` the flux is assembled from a local splitting
``f = f+ + f-`` evaluated on the states around the interface. Where the
wave speed has one sign on ``[u_i, u_{i+1}]`` the whole flux goes to the
upwind side; otherwise a local Lax-Friedrichs split with
``alpha = max |f'|`` is used. The positive part is reconstructed with the
right-biased kernel, the negative part with the mirrored one. Systems apply
the same recipe to each characteristic field.
"""

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .euler import eigensystem, local_flux, local_state
from .exceptions import InvalidStencilWidth, NonHyperbolicState
from .kernels import (
    DEFAULT_EPS,
    JSWENO5,
    KernelKind,
    ReconstructionMode,
    reconstruct_left,
    reconstruct_right,
    upwind_value,
)


@dataclass(frozen=True)
class ScalarFlux:
    """A scalar flux with its exact derivative.

    ``fprime_critical_points`` lists the points where ``f'`` has interior
    extrema; the wave-speed bound samples them when they fall inside an
    interface interval.
    """

    f: object
    fprime: object
    fprime_critical_points: tuple = ()
    name: str = "scalar"


def linear_flux(speed=1.0):
    return ScalarFlux(lambda u: speed * np.asarray(u, dtype=float),
                      lambda u: np.full_like(np.asarray(u, dtype=float), speed),
                      name="linear")


def burgers_flux():
    return ScalarFlux(lambda u: 0.5 * np.asarray(u, dtype=float) ** 2,
                      lambda u: np.asarray(u, dtype=float),
                      name="burgers")


@dataclass
class SplitFluxValues:
    plus: np.ndarray
    minus: np.ndarray
    alpha: float
    branch: int = 0  # +1 all plus, -1 all minus, 0 mixed


def _speed_bounds(flux, ui, uip1):
    """Min and max of f' over I(ui, uip1), as arrays over interfaces."""
    ui = np.asarray(ui, dtype=float)
    uip1 = np.asarray(uip1, dtype=float)
    a = np.asarray(flux.fprime(ui), dtype=float)
    b = np.asarray(flux.fprime(uip1), dtype=float)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    if flux.fprime_critical_points:
        left = np.minimum(ui, uip1)
        right = np.maximum(ui, uip1)
        for z in flux.fprime_critical_points:
            inside = (left <= z) & (z <= right)
            fz = float(flux.fprime(np.float64(z)))
            lo = np.where(inside, np.minimum(lo, fz), lo)
            hi = np.where(inside, np.maximum(hi, fz), hi)
    return lo, hi


def interface_alpha(flux, ui, uip1):
    """``max |f'(u)|`` for ``u`` between ``ui`` and ``uip1``."""
    lo, hi = _speed_bounds(flux, ui, uip1)
    alpha = np.maximum(np.abs(lo), np.abs(hi))
    return float(alpha) if alpha.ndim == 0 else alpha


def _branches(flux, ui, uip1):
    lo, hi = _speed_bounds(flux, ui, uip1)
    alpha = np.maximum(np.abs(lo), np.abs(hi))
    branch = np.where(lo > 0, 1, np.where(hi < 0, -1, 0)).astype(np.int64)
    return alpha, branch


def split_scalar(flux, states):
    """Split the flux on a window whose interface sits between its two middle states."""
    u = np.asarray(states, dtype=float)
    if u.ndim != 1 or u.size % 2:
        raise InvalidStencilWidth("split_scalar needs an even-length window")
    mid = u.size // 2
    alpha, branch = _branches(flux, u[mid - 1], u[mid])
    alpha, branch = float(alpha), int(branch)
    fu = np.asarray(flux.f(u), dtype=float)
    if branch > 0:
        return SplitFluxValues(fu, np.zeros_like(fu), alpha, 1)
    if branch < 0:
        return SplitFluxValues(np.zeros_like(fu), fu, alpha, -1)
    return SplitFluxValues(0.5 * (fu + alpha * u), 0.5 * (fu - alpha * u), alpha, 0)


def _check_flux_window(kind, n):
    if n != kind.flux_width:
        raise InvalidStencilWidth(
            f"{kind.label} numerical flux needs {kind.flux_width} states, got {n}"
        )


def _plus_minus(kind, plus, minus, eps, mode):
    """R+ on the plus values and R- on the minus values of a flux window."""
    mid = plus.size // 2  # index of u_{i+1}
    if kind is KernelKind.JSWENO5:
        rp = reconstruct_right(kind, plus[mid - 3: mid + 2], eps, mode)
        rm = reconstruct_left(kind, minus[mid - 2: mid + 3], eps, mode)
    elif kind is KernelKind.OWENO3:
        rp = reconstruct_right(kind, plus, eps, mode)
        rm = reconstruct_left(kind, minus, eps, mode)
    else:
        rp = reconstruct_right(kind, plus[:3], eps, mode)
        rm = reconstruct_left(kind, minus[1:], eps, mode)
    return rp + rm


def numerical_flux_scalar(kernel, flux, states, eps=DEFAULT_EPS, mode="cell"):
    """Numerical flux at ``i+1/2`` from ``u_{i-1..i+2}`` (or ``u_{i-2..i+3}`` for WENO5)."""
    kind = KernelKind.coerce(kernel)
    u = np.asarray(states, dtype=float)
    _check_flux_window(kind, u.size)
    mode = ReconstructionMode.coerce(mode)
    split = split_scalar(flux, u)
    return _plus_minus(kind, split.plus, split.minus, eps, mode)


def numerical_flux_system(kernel, frame, flux_states, u_states, speeds,
                          eps=DEFAULT_EPS, mode="cell", frame_right=None):
    """Characteristic-wise numerical flux for a system.

    ``flux_states`` and ``u_states`` have shape ``(nvar, W)``; ``speeds`` has
    shape ``(2, nvar)`` and holds the field eigenvalues at ``u_i`` and
    ``u_{i+1}``. When ``frame_right`` is given the negative part is projected
    with it instead of ``frame`` (two-sided linearisation).
    """
    kind = KernelKind.coerce(kernel)
    mode = ReconstructionMode.coerce(mode)
    F = np.asarray(flux_states, dtype=float)
    U = np.asarray(u_states, dtype=float)
    _check_flux_window(kind, F.shape[1])
    speeds = np.asarray(speeds, dtype=float)
    frame_right = frame if frame_right is None else frame_right
    wfL = frame.left_eigenvectors @ F
    wuL = frame.left_eigenvectors @ U
    wfR = frame_right.left_eigenvectors @ F
    wuR = frame_right.left_eigenvectors @ U
    nvar = F.shape[0]
    hat_plus = np.zeros(nvar)
    hat_minus = np.zeros(nvar)
    zeros = np.zeros(F.shape[1])
    for q in range(nvar):
        la, lb = speeds[0, q], speeds[1, q]
        if la > 0 and lb > 0:
            plus, minus = wfL[q], zeros
        elif la < 0 and lb < 0:
            plus, minus = zeros, wfR[q]
        else:
            alpha = max(abs(la), abs(lb))
            plus = 0.5 * (wfL[q] + alpha * wuL[q])
            minus = 0.5 * (wfR[q] - alpha * wuR[q])
        hat_plus[q] = _plus_minus(kind, plus, zeros, eps, mode)
        hat_minus[q] = _plus_minus(kind, zeros, minus, eps, mode)
    return frame.right_eigenvectors @ hat_plus + frame_right.right_eigenvectors @ hat_minus


# ---------------------------------------------------------------------------
# compiled line kernels used by the solver
# ---------------------------------------------------------------------------


@njit(cache=True)
def scalar_line_fluxes(u, f, alpha, branch, kind, eps, mode, out):
    """Fluxes at the ``m - 5`` interfaces of a ghost-padded line of length ``m``.

    Interface ``k`` lies between padded cells ``k + 2`` and ``k + 3``.
    """
    for k in range(u.shape[0] - 5):
        p = k + 2
        if branch[k] > 0:
            out[k] = upwind_value(kind, f[p - 2], f[p - 1], f[p], f[p + 1], f[p + 2], eps, mode)
        elif branch[k] < 0:
            out[k] = upwind_value(kind, f[p + 3], f[p + 2], f[p + 1], f[p], f[p - 1], eps, mode)
        else:
            a = alpha[k]
            rp = upwind_value(
                kind,
                0.5 * (f[p - 2] + a * u[p - 2]),
                0.5 * (f[p - 1] + a * u[p - 1]),
                0.5 * (f[p] + a * u[p]),
                0.5 * (f[p + 1] + a * u[p + 1]),
                0.5 * (f[p + 2] + a * u[p + 2]),
                eps, mode,
            )
            rm = upwind_value(
                kind,
                0.5 * (f[p + 3] - a * u[p + 3]),
                0.5 * (f[p + 2] - a * u[p + 2]),
                0.5 * (f[p + 1] - a * u[p + 1]),
                0.5 * (f[p] - a * u[p]),
                0.5 * (f[p - 1] - a * u[p - 1]),
                eps, mode,
            )
            out[k] = rp + rm


@njit(cache=True)
def _project(L, X, p, w, s0, s1):
    # w[q, s] = sum_r L[q, r] X[r, p - 2 + s] for s in [s0, s1)
    nvar = L.shape[0]
    for q in range(nvar):
        for s in range(s0, s1):
            acc = 0.0
            for r in range(nvar):
                acc += L[q, r] * X[r, p - 2 + s]
            w[q, s] = acc


@njit(cache=True)
def euler_line_fluxes(U, perm, gamma, kind, eps, mode, two_sided, out):
    """Characteristic-wise fluxes along one ghost-padded line.

    ``U`` is ``(nvar, m)`` in global component order and ``perm`` maps the
    sweep-local order (rho, m_normal, [m_tangential,] E) to it. Returns -1 on
    success or the padded index of the first state without a valid
    eigen-decomposition.
    """
    nvar = U.shape[0]
    m = U.shape[1]
    Ul = np.empty((nvar, m))
    Fl = np.empty((nvar, m))
    lam = np.empty((nvar, m))
    L = np.empty((nvar, nvar))
    R = np.empty((nvar, nvar))
    L2 = np.empty((nvar, nvar))
    R2 = np.empty((nvar, nvar))
    tmp = np.empty(nvar)
    for s in range(m):
        rho, mn, mt, E = local_state(U, s, perm)
        Ul[0, s] = rho
        Ul[1, s] = mn
        if nvar == 4:
            Ul[2, s] = mt
        Ul[nvar - 1, s] = E
        if not local_flux(rho, mn, mt, E, gamma, nvar, tmp):
            return s
        for q in range(nvar):
            Fl[q, s] = tmp[q]
        u = mn / rho
        c = np.sqrt(gamma * (Fl[1, s] - mn * u) / rho)
        for q in range(nvar):
            lam[q, s] = u
        lam[0, s] = u - c
        lam[nvar - 1, s] = u + c
    # WENO5 reads six states per interface, the third-order kernels four
    s0 = 0 if kind == JSWENO5 else 1
    s1 = 6 if kind == JSWENO5 else 5
    wfL = np.zeros((nvar, 6))
    wuL = np.zeros((nvar, 6))
    wfR = np.zeros((nvar, 6))
    wuR = np.zeros((nvar, 6))
    hp = np.empty(nvar)
    hm = np.empty(nvar)
    for k in range(m - 5):
        p = k + 2
        if two_sided:
            eigensystem(Ul[0, p], Ul[1, p], Ul[2, p] if nvar == 4 else 0.0,
                        Ul[nvar - 1, p], gamma, nvar, L, R, tmp)
            eigensystem(Ul[0, p + 1], Ul[1, p + 1], Ul[2, p + 1] if nvar == 4 else 0.0,
                        Ul[nvar - 1, p + 1], gamma, nvar, L2, R2, tmp)
            _project(L, Fl, p, wfL, s0, s1)
            _project(L, Ul, p, wuL, s0, s1)
            _project(L2, Fl, p, wfR, s0, s1)
            _project(L2, Ul, p, wuR, s0, s1)
        else:
            rho = 0.5 * (Ul[0, p] + Ul[0, p + 1])
            mn = 0.5 * (Ul[1, p] + Ul[1, p + 1])
            mt = 0.5 * (Ul[2, p] + Ul[2, p + 1]) if nvar == 4 else 0.0
            E = 0.5 * (Ul[nvar - 1, p] + Ul[nvar - 1, p + 1])
            if not eigensystem(rho, mn, mt, E, gamma, nvar, L, R, tmp):
                return p
            _project(L, Fl, p, wfL, s0, s1)
            _project(L, Ul, p, wuL, s0, s1)
        for q in range(nvar):
            la = lam[q, p]
            lb = lam[q, p + 1]
            if two_sided:
                gf = wfR[q]
                gu = wuR[q]
            else:
                gf = wfL[q]
                gu = wuL[q]
            hf = wfL[q]
            hu = wuL[q]
            if la > 0.0 and lb > 0.0:
                hp[q] = upwind_value(kind, hf[0], hf[1], hf[2], hf[3], hf[4], eps, mode)
                hm[q] = 0.0
            elif la < 0.0 and lb < 0.0:
                hp[q] = 0.0
                hm[q] = upwind_value(kind, gf[5], gf[4], gf[3], gf[2], gf[1], eps, mode)
            else:
                a = max(abs(la), abs(lb))
                hp[q] = upwind_value(
                    kind,
                    0.5 * (hf[0] + a * hu[0]), 0.5 * (hf[1] + a * hu[1]),
                    0.5 * (hf[2] + a * hu[2]), 0.5 * (hf[3] + a * hu[3]),
                    0.5 * (hf[4] + a * hu[4]), eps, mode,
                )
                hm[q] = upwind_value(
                    kind,
                    0.5 * (gf[5] - a * gu[5]), 0.5 * (gf[4] - a * gu[4]),
                    0.5 * (gf[3] - a * gu[3]), 0.5 * (gf[2] - a * gu[2]),
                    0.5 * (gf[1] - a * gu[1]), eps, mode,
                )
        for r in range(nvar):
            acc = 0.0
            for q in range(nvar):
                acc += R[r, q] * hp[q]
                if two_sided:
                    acc += R2[r, q] * hm[q]
                else:
                    acc += R[r, q] * hm[q]
            out[perm[r], k] = acc
    return -1


@njit(cache=True)
def euler_sweep(U3, axis, perm, gamma, kind, eps, mode, two_sided, out):
    """Fluxes along every interior line of a padded 2D field.

    ``U3`` is ``(nvar, nx + 2g, ny + 2g)``; ``out`` is ``(nvar, nx + 1, ny)``
    for ``axis == 0`` and ``(nvar, nx, ny + 1)`` for ``axis == 1``. Returns
    ``(-1, -1)`` or the (line, padded index) of the first failure.
    """
    g = 3
    nvar = U3.shape[0]
    if axis == 0:
        nlines = U3.shape[2] - 2 * g
        m = U3.shape[1]
    else:
        nlines = U3.shape[1] - 2 * g
        m = U3.shape[2]
    line = np.empty((nvar, m))
    fl = np.empty((nvar, m - 5))
    for j in range(nlines):
        if axis == 0:
            line[:, :] = U3[:, :, j + g]
        else:
            line[:, :] = U3[:, j + g, :]
        bad = euler_line_fluxes(line, perm, gamma, kind, eps, mode, two_sided, fl)
        if bad >= 0:
            return j, bad
        if axis == 0:
            out[:, :, j] = fl
        else:
            out[:, j, :] = fl
    return -1, -1


def raise_nonhyperbolic(where):
    raise NonHyperbolicState(f"no valid eigen-decomposition at cell {where}", where)
