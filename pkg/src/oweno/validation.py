"""Input checks shared by the estimators and the CLI."""

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import InvalidStencilWidth
from .kernels import KernelKind


def check_windows(X, kernel):
    """2D float array of stencil windows whose width matches ``kernel``."""
    kind = KernelKind.coerce(kernel)
    X = check_array(X, dtype=np.float64, ensure_all_finite=True)
    if X.shape[1] != kind.width:
        raise InvalidStencilWidth(
            f"{kind.label} needs windows of width {kind.width}, got {X.shape[1]}"
        )
    return X


def check_eps(eps):
    eps = float(eps)
    if not (np.isfinite(eps) and eps > 0):
        raise ValueError(f"eps must be a positive finite number, got {eps!r}")
    return eps


def check_cfl(cfl):
    if cfl is None:
        return None
    cfl = float(cfl)
    if not 0.0 < cfl <= 1.0:
        raise ValueError(f"cfl must lie in (0, 1], got {cfl!r}")
    return cfl


def parse_resolution(text):
    """``"N"`` or ``"NxM"`` to a tuple of positive ints."""
    if isinstance(text, (int, np.integer)):
        parts = [int(text)]
    elif isinstance(text, (tuple, list)):
        parts = [int(v) for v in text]
    else:
        try:
            parts = [int(v) for v in str(text).lower().split("x")]
        except ValueError:
            raise ValueError(f"resolution must look like N or NxM, got {text!r}") from None
    if not 1 <= len(parts) <= 2 or min(parts) < 1:
        raise ValueError(f"resolution must look like N or NxM, got {text!r}")
    return tuple(parts)


def parse_floats(text):
    try:
        values = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise ValueError("expected at least one value")
    return values
