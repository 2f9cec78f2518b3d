"""Third- and fifth-order WENO reconstruction kernels.

Every kernel reconstructs the value at the interface ``x_{1/2}`` from an
equispaced window and is right-biased: the window ``(f_-1, f_0, f_1[, f_2])``
is centred on ``x_0`` and the interface lies between ``f_0`` and ``f_1``.
Left-biased reconstructions are obtained by reversing the window.

The scalar kernels are compiled with numba so that the solver can call them
from its inner loops; the Python-level wrappers below add validation and
diagnostics.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numba import njit

from .exceptions import InvalidStencilWidth

DEFAULT_EPS = 1e-100

# integer codes shared with the compiled loops
POINT = 0
CELL = 1

JSWENO3 = 0
YCWENO3 = 1
OWENO3 = 2
JSWENO5 = 3


class ReconstructionMode(Enum):
    """Interpretation of window data: point values or cell averages."""

    POINT_VALUES = "point"
    CELL_AVERAGES = "cell"

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "_")
        aliases = {
            "point": cls.POINT_VALUES,
            "points": cls.POINT_VALUES,
            "point_values": cls.POINT_VALUES,
            "pointvalues": cls.POINT_VALUES,
            "cell": cls.CELL_AVERAGES,
            "cells": cls.CELL_AVERAGES,
            "cell_averages": cls.CELL_AVERAGES,
            "cellaverages": cls.CELL_AVERAGES,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown reconstruction mode {value!r}") from None

    @property
    def code(self):
        return POINT if self is ReconstructionMode.POINT_VALUES else CELL

    @property
    def ideal_weights(self):
        """Linear weights (c0, c1) of the third-order kernels."""
        if self is ReconstructionMode.POINT_VALUES:
            return (0.25, 0.75)
        return (1.0 / 3.0, 2.0 / 3.0)


class KernelKind(Enum):
    JSWENO3 = "jsweno3"
    YCWENO3 = "ycweno3"
    OWENO3 = "oweno3"
    JSWENO5 = "jsweno5"

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "").replace("_", "")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(
            f"unknown kernel {value!r}; expected one of "
            + ", ".join(k.value for k in cls)
        )

    @property
    def code(self):
        return _KIND_CODES[self]

    @property
    def width(self):
        """Number of window values the kernel reads."""
        return _WIDTHS[self]

    @property
    def flux_width(self):
        """Number of states a numerical flux of this kernel depends on."""
        return 6 if self is KernelKind.JSWENO5 else 4

    @property
    def label(self):
        return _LABELS[self]


_KIND_CODES = {
    KernelKind.JSWENO3: JSWENO3,
    KernelKind.YCWENO3: YCWENO3,
    KernelKind.OWENO3: OWENO3,
    KernelKind.JSWENO5: JSWENO5,
}
_WIDTHS = {
    KernelKind.JSWENO3: 3,
    KernelKind.YCWENO3: 3,
    KernelKind.OWENO3: 4,
    KernelKind.JSWENO5: 5,
}
_LABELS = {
    KernelKind.JSWENO3: "JS-WENO3",
    KernelKind.YCWENO3: "YC-WENO3",
    KernelKind.OWENO3: "OWENO3",
    KernelKind.JSWENO5: "JS-WENO5",
}


@dataclass(frozen=True)
class WeightDiagnostics:
    """Every intermediate quantity of a third-order weight computation.

    Fields not used by a kernel are zero (``sigma`` is YC only; ``I2``, ``d``,
    ``J``, ``tau``, ``omega``, ``tw0`` and ``tw1`` are OWENO3 only).
    """

    I0: float
    I1: float
    I2: float
    d: float
    J: float
    tau: float
    omega: float
    tw0: float
    tw1: float
    w0: float
    w1: float
    sigma: float
    p0: float
    p1: float
    result: float


# ---------------------------------------------------------------------------
# compiled scalar kernels
# ---------------------------------------------------------------------------


@njit(cache=True)
def _ideal3(mode):
    if mode == POINT:
        return 0.25, 0.75
    return 1.0 / 3.0, 2.0 / 3.0


@njit(cache=True)
def _candidates3(fm1, f0, f1):
    # -fm1/2 + 3 f0/2 and (f0 + f1)/2, written to be exact on constant data
    return f0 + 0.5 * (f0 - fm1), f0 + 0.5 * (f1 - f0)


@njit(cache=True)
def _oweno3_diag(fm1, f0, f1, f2, eps, mode):
    c0, c1 = _ideal3(mode)
    p0, p1 = _candidates3(fm1, f0, f1)
    I0 = (f0 - fm1) ** 2
    I1 = (f1 - f0) ** 2
    I2 = (f2 - f1) ** 2
    tw0 = (I1 + eps) / (I0 + I1 + 2.0 * eps)
    tw1 = 1.0 - tw0
    d = (-fm1 + 3.0 * f0 - 3.0 * f1 + f2) ** 2
    tau = d * (I0 + I1 + I2)
    J = I0 * (I1 + I2) + (I0 + I1) * I2
    omega = J / (J + tau + eps)
    w0 = omega * c0 + (1.0 - omega) * tw0
    w1 = omega * c1 + (1.0 - omega) * tw1
    return I0, I1, I2, d, J, tau, omega, tw0, tw1, w0, w1, p0, p1, p1 + w0 * (p0 - p1)


@njit(cache=True)
def oweno3(fm1, f0, f1, f2, eps, mode):
    return _oweno3_diag(fm1, f0, f1, f2, eps, mode)[13]


@njit(cache=True)
def _classic3_diag(fm1, f0, f1, eps, mode, yc):
    c0, c1 = _ideal3(mode)
    p0, p1 = _candidates3(fm1, f0, f1)
    I0 = (f0 - fm1) ** 2
    I1 = (f1 - f0) ** 2
    if yc:
        sigma = (f1 - 2.0 * f0 + fm1) ** 2
        a0 = c0 * (1.0 + sigma / (I0 + eps))
        a1 = c1 * (1.0 + sigma / (I1 + eps))
    else:
        sigma = 0.0
        a0 = c0 / (I0 + eps)
        a1 = c1 / (I1 + eps)
    w0 = a0 / (a0 + a1)
    w1 = a1 / (a0 + a1)
    return I0, I1, sigma, w0, w1, p0, p1, p1 + w0 * (p0 - p1)


@njit(cache=True)
def jsweno3(fm1, f0, f1, eps, mode):
    return _classic3_diag(fm1, f0, f1, eps, mode, False)[7]


@njit(cache=True)
def ycweno3(fm1, f0, f1, eps, mode):
    return _classic3_diag(fm1, f0, f1, eps, mode, True)[7]


@njit(cache=True)
def _jsweno5_diag(fm2, fm1, f0, f1, f2, eps, mode):
    if mode == POINT:
        q0 = f0 + (3.0 * (fm2 - f0) - 10.0 * (fm1 - f0)) / 8.0
        q1 = f0 + (3.0 * (f1 - f0) - (fm1 - f0)) / 8.0
        q2 = f0 + (6.0 * (f1 - f0) - (f2 - f0)) / 8.0
        d0, d1, d2 = 1.0 / 16.0, 10.0 / 16.0, 5.0 / 16.0
    else:
        q0 = f0 + (2.0 * (fm2 - fm1) - 5.0 * (fm1 - f0)) / 6.0
        q1 = f0 + (2.0 * (f1 - f0) - (fm1 - f0)) / 6.0
        q2 = f0 + (5.0 * (f1 - f0) - (f2 - f0)) / 6.0
        d0, d1, d2 = 0.1, 0.6, 0.3
    b0 = 13.0 / 12.0 * (fm2 - 2.0 * fm1 + f0) ** 2 + 0.25 * (fm2 - 4.0 * fm1 + 3.0 * f0) ** 2
    b1 = 13.0 / 12.0 * (fm1 - 2.0 * f0 + f1) ** 2 + 0.25 * (fm1 - f1) ** 2
    b2 = 13.0 / 12.0 * (f0 - 2.0 * f1 + f2) ** 2 + 0.25 * (3.0 * f0 - 4.0 * f1 + f2) ** 2
    a0 = d0 / (b0 + eps)
    a1 = d1 / (b1 + eps)
    a2 = d2 / (b2 + eps)
    s = a0 + a1 + a2
    w0 = a0 / s
    w1 = a1 / s
    w2 = a2 / s
    # convex combination anchored at q1: exact when the candidates agree
    return b0, b1, b2, w0, w1, w2, q0, q1, q2, q1 + w0 * (q0 - q1) + w2 * (q2 - q1)


@njit(cache=True)
def jsweno5(fm2, fm1, f0, f1, f2, eps, mode):
    return _jsweno5_diag(fm2, fm1, f0, f1, f2, eps, mode)[9]


@njit(cache=True)
def upwind_value(kind, vm2, vm1, v0, v1, v2, eps, mode):
    """Right-biased value at i+1/2 from the five values at i-2..i+2.

    Third-order kernels ignore ``vm2``; only OWENO3 reads ``v2``.
    """
    if kind == OWENO3:
        return oweno3(vm1, v0, v1, v2, eps, mode)
    if kind == JSWENO3:
        return jsweno3(vm1, v0, v1, eps, mode)
    if kind == YCWENO3:
        return ycweno3(vm1, v0, v1, eps, mode)
    return jsweno5(vm2, vm1, v0, v1, v2, eps, mode)


@njit(cache=True)
def _reconstruct_rows(kind, X, eps, mode, out):
    width = X.shape[1]
    for r in range(X.shape[0]):
        if width == 3:
            out[r] = upwind_value(kind, 0.0, X[r, 0], X[r, 1], X[r, 2], 0.0, eps, mode)
        elif width == 4:
            out[r] = upwind_value(kind, 0.0, X[r, 0], X[r, 1], X[r, 2], X[r, 3], eps, mode)
        else:
            out[r] = upwind_value(kind, X[r, 0], X[r, 1], X[r, 2], X[r, 3], X[r, 4], eps, mode)
    return out


# ---------------------------------------------------------------------------
# Python API
# ---------------------------------------------------------------------------


def _eps_value(eps):
    eps = DEFAULT_EPS if eps is None else float(eps)
    if not eps > 0.0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    return eps


def _as_window(window, width):
    w = np.asarray(window, dtype=float)
    if w.ndim != 1 or w.shape[0] != width:
        raise InvalidStencilWidth(
            f"expected a window of {width} values, got shape {w.shape}"
        )
    if not np.all(np.isfinite(w)):
        raise ValueError("window values must be finite")
    return w


def candidate_values(fm1, f0, f1):
    """Values at x_{1/2} of the two linear interpolants on (f_-1, f_0) and (f_0, f_1)."""
    return _candidates3(float(fm1), float(f0), float(f1))


def smoothness_indicators(window):
    """Squared undivided differences (I0, I1, I2) of a four-value window."""
    fm1, f0, f1, f2 = _as_window(window, 4)
    return (f0 - fm1) ** 2, (f1 - f0) ** 2, (f2 - f1) ** 2


def oweno3_weights(window, eps=DEFAULT_EPS, mode="cell"):
    """Full OWENO3 weight computation on ``(f_-1, f_0, f_1, f_2)``.

    Returns a :class:`WeightDiagnostics` with the indicators, the auxiliary
    weights, the corrector weight and the corrected weights.
    """
    w = _as_window(window, 4)
    mode = ReconstructionMode.coerce(mode)
    (I0, I1, I2, d, J, tau, omega, tw0, tw1, w0, w1, p0, p1, res) = _oweno3_diag(
        w[0], w[1], w[2], w[3], _eps_value(eps), mode.code
    )
    return WeightDiagnostics(
        I0=I0, I1=I1, I2=I2, d=d, J=J, tau=tau, omega=omega, tw0=tw0, tw1=tw1,
        w0=w0, w1=w1, sigma=0.0, p0=p0, p1=p1, result=res,
    )


def classic3_weights(window, eps=DEFAULT_EPS, mode="cell", kernel="jsweno3"):
    """Weights of JS-WENO3 or YC-WENO3 on ``(f_-1, f_0, f_1)``."""
    kind = KernelKind.coerce(kernel)
    if kind not in (KernelKind.JSWENO3, KernelKind.YCWENO3):
        raise ValueError(f"{kind.label} is not a three-point kernel")
    w = _as_window(window, 3)
    mode = ReconstructionMode.coerce(mode)
    I0, I1, sigma, w0, w1, p0, p1, res = _classic3_diag(
        w[0], w[1], w[2], _eps_value(eps), mode.code, kind is KernelKind.YCWENO3
    )
    return WeightDiagnostics(
        I0=I0, I1=I1, I2=0.0, d=0.0, J=0.0, tau=0.0, omega=0.0, tw0=0.0, tw1=0.0,
        w0=w0, w1=w1, sigma=sigma, p0=p0, p1=p1, result=res,
    )


def jsweno5_weights(window, eps=DEFAULT_EPS, mode="cell"):
    """Indicators, weights and candidate values of JS-WENO5 as a dict."""
    w = _as_window(window, 5)
    mode = ReconstructionMode.coerce(mode)
    vals = _jsweno5_diag(*w, _eps_value(eps), mode.code)
    keys = ("beta0", "beta1", "beta2", "w0", "w1", "w2", "q0", "q1", "q2", "result")
    return dict(zip(keys, vals))


def reconstruct_oweno3(window, eps=DEFAULT_EPS, mode="cell"):
    w = _as_window(window, 4)
    return oweno3(w[0], w[1], w[2], w[3], _eps_value(eps), ReconstructionMode.coerce(mode).code)


def reconstruct_jsweno3(fm1, f0, f1, eps=DEFAULT_EPS, mode="cell"):
    w = _as_window((fm1, f0, f1), 3)
    return jsweno3(w[0], w[1], w[2], _eps_value(eps), ReconstructionMode.coerce(mode).code)


def reconstruct_ycweno3(fm1, f0, f1, eps=DEFAULT_EPS, mode="cell"):
    w = _as_window((fm1, f0, f1), 3)
    return ycweno3(w[0], w[1], w[2], _eps_value(eps), ReconstructionMode.coerce(mode).code)


def reconstruct_jsweno5(window, eps=DEFAULT_EPS, mode="cell"):
    w = _as_window(window, 5)
    return jsweno5(*w, _eps_value(eps), ReconstructionMode.coerce(mode).code)


def reconstruct_right(kernel, window, eps=DEFAULT_EPS, mode="cell"):
    """Right-biased reconstruction at x_{1/2} with any kernel."""
    kind = KernelKind.coerce(kernel)
    w = _as_window(window, kind.width)
    out = np.empty(1)
    _reconstruct_rows(
        kind.code, w[None, :], _eps_value(eps), ReconstructionMode.coerce(mode).code, out
    )
    return float(out[0])


def reconstruct_left(kernel, window, eps=DEFAULT_EPS, mode="cell"):
    """Left-biased reconstruction: the right-biased kernel on the reversed window."""
    kind = KernelKind.coerce(kernel)
    w = _as_window(window, kind.width)
    return reconstruct_right(kind, w[::-1], eps, mode)


def reconstruct_many(kernel, windows, eps=DEFAULT_EPS, mode="cell", side="right"):
    """Vectorised reconstruction over the rows of a ``(n, width)`` array."""
    kind = KernelKind.coerce(kernel)
    X = np.asarray(windows, dtype=float)
    if X.ndim != 2 or X.shape[1] != kind.width:
        raise InvalidStencilWidth(
            f"{kind.label} needs windows of width {kind.width}, got shape {X.shape}"
        )
    if side == "left":
        X = X[:, ::-1]
    elif side != "right":
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    X = np.ascontiguousarray(X)
    out = np.empty(X.shape[0])
    return _reconstruct_rows(
        kind.code, X, _eps_value(eps), ReconstructionMode.coerce(mode).code, out
    )
