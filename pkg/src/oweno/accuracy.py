"""Algebraic accuracy experiments: refinement ladders at critical points and jumps.

Two families of test functions probe the kernels at ``x = 0``:

* ``f_k(x) = x**(k+1) * exp(x)``, smooth with a critical point of order ``k``;
* ``g_k(x) = x**(2k) * exp(x)`` for ``x <= 0`` and ``exp(x + 1)`` otherwise,
  which jumps at the origin.

Windows are sampled on ``x_i = (i - 1/2 + theta) h`` so that the reconstruction
point ``x_{1/2}`` sits at ``theta * h``.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import AllLevelsDegenerate
from .kernels import DEFAULT_EPS, KernelKind, ReconstructionMode, reconstruct_right

_E = math.e


@dataclass(frozen=True)
class TestFunction:
    """One member of the ``f_k`` / ``g_k`` families.

    ``family`` is ``"f"`` (smooth) or ``"g"`` (discontinuous at 0).
    """

    __test__ = False  # not a pytest class

    family: str
    k: int

    def __post_init__(self):
        if self.family not in ("f", "g"):
            raise ValueError(f"family must be 'f' or 'g', got {self.family!r}")
        if self.k not in (0, 1):
            raise ValueError(f"k must be 0 or 1, got {self.k!r}")

    @property
    def name(self):
        return f"{self.family}{self.k}"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "f":
            return x ** (self.k + 1) * np.exp(x)
        left = x ** (2 * self.k) * np.exp(x)
        return np.where(x <= 0.0, left, np.exp(np.minimum(x, 700.0) + 1.0))

    def antiderivative(self, x):
        """Closed-form antiderivative (continuous across 0 is not required)."""
        x = np.asarray(x, dtype=float)
        poly = self._poly(x)
        if self.family == "f":
            return poly * np.exp(x)
        return np.where(x <= 0.0, poly * np.exp(x), np.exp(x + 1.0))

    def _poly(self, x):
        # F = P(x) e^x for the x^m e^x pieces
        m = self.k + 1 if self.family == "f" else 2 * self.k
        if m == 0:
            return np.ones_like(x)
        if m == 1:
            return x - 1.0
        return x * x - 2.0 * x + 2.0

    def _poly_diff(self, a, b):
        # P(b) - P(a) without cancellation
        m = self.k + 1 if self.family == "f" else 2 * self.k
        if m == 0:
            return np.zeros_like(a)
        if m == 1:
            return b - a
        return (b - a) * (b + a - 2.0)

    def _smooth_integral(self, a, b):
        # integral of x^m e^x over [a, b] as e^a * (P(b) expm1(b-a) + P(b) - P(a))
        return np.exp(a) * (self._poly(b) * np.expm1(b - a) + self._poly_diff(a, b))

    def cell_average(self, a, b):
        """Mean of the function over ``[a, b]`` from its exact antiderivative."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        width = b - a
        if self.family == "f":
            return self._smooth_integral(a, b) / width
        left_b = np.minimum(b, 0.0)
        right_a = np.maximum(a, 0.0)
        left = np.where(a < 0.0, self._smooth_integral(a, left_b), 0.0)
        right = np.where(b > 0.0, np.exp(right_a + 1.0) * np.expm1(b - right_a), 0.0)
        return (left + right) / width


def _window_indices(width):
    if width == 3:
        return np.arange(-1, 2)
    if width == 4:
        return np.arange(-1, 3)
    if width == 5:
        return np.arange(-2, 3)
    raise ValueError(f"unsupported window width {width}")


def sample_window(func, h, theta=0, mode="point", width=4):
    """Sample ``func`` on ``x_i = (i - 1/2 + theta) h`` over a kernel's index range."""
    if not h > 0:
        raise ValueError("h must be positive")
    mode = ReconstructionMode.coerce(mode)
    x = (_window_indices(width) - 0.5 + theta) * h
    if mode is ReconstructionMode.POINT_VALUES:
        return np.asarray(func(x), dtype=float)
    if hasattr(func, "cell_average"):
        return np.asarray(func.cell_average(x - 0.5 * h, x + 0.5 * h), dtype=float)
    F = func.antiderivative
    return (F(x + 0.5 * h) - F(x - 0.5 * h)) / h


def single_error(kernel, func, h, theta=0, mode="point", eps=DEFAULT_EPS):
    """Absolute error of the reconstruction at ``theta * h``."""
    kind = KernelKind.coerce(kernel)
    window = sample_window(func, h, theta, mode, kind.width)
    value = reconstruct_right(kind, window, eps, mode)
    return abs(value - float(func(theta * h)))


@dataclass
class LadderConfig:
    """Refinement ladder ``n_j = 5 * 2**j`` for ``j = 0..j_max`` with ``h = 1/n``."""

    j_max: int = 8
    theta: int = 0
    mode: ReconstructionMode = ReconstructionMode.POINT_VALUES
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        self.mode = ReconstructionMode.coerce(self.mode)
        if int(self.j_max) < 1:
            raise ValueError("j_max must be at least 1")
        if self.theta not in (0, 1):
            raise ValueError("theta must be 0 or 1")
        if not self.eps > 0:
            raise ValueError("eps must be positive")

    @property
    def sizes(self):
        return [5 * 2**j for j in range(self.j_max + 1)]


@dataclass
class OrderReport:
    errors: list
    orders: list  # None where a ratio was excluded
    average_order: float
    sizes: list = field(default_factory=list)

    @property
    def levels_used(self):
        return sum(o is not None for o in self.orders)


def average_order(kernel, func, ladder):
    """Error ladder and mean observed order ``log2(E_{j-1} / E_j)``.

    Ratios touching an error at or below the round-off floor
    ``100 * eps_machine * max(|target|, tiny)`` are dropped from the mean.
    """
    kind = KernelKind.coerce(kernel)
    sizes = ladder.sizes
    target = abs(float(func(0.0)))
    floor = 100.0 * np.finfo(float).eps * target
    errors = []
    for n in sizes:
        h = 1.0 / n
        errors.append(single_error(kind, func, h, ladder.theta, ladder.mode, ladder.eps))
    orders = []
    for prev, cur in zip(errors[:-1], errors[1:]):
        if prev > floor and cur > floor and prev > 0 and cur > 0:
            orders.append(math.log2(prev / cur))
        else:
            orders.append(None)
    used = [o for o in orders if o is not None]
    if not used:
        raise AllLevelsDegenerate(
            f"{kind.label} on {func.name}: every level is below the round-off floor"
        )
    return OrderReport(errors=errors, orders=orders, average_order=float(np.mean(used)), sizes=sizes)


THIRD_ORDER_KERNELS = (KernelKind.JSWENO3, KernelKind.YCWENO3, KernelKind.OWENO3)
CSV_HEADER = ("scheme", "mode", "function", "k", "theta", "avg_order", "levels_used")


def _cells():
    for k in (0, 1):
        yield TestFunction("f", k), None
    for theta in (0, 1):
        for k in (0, 1):
            yield TestFunction("g", k), theta


def order_table(kernels=THIRD_ORDER_KERNELS, j_max=8, eps=DEFAULT_EPS, modes=None):
    """Average orders for every (scheme, mode, function, theta, k) cell.

    Returns a list of row dicts sorted by that key. A degenerate cell has
    ``avg_order`` and ``levels_used`` set to ``None``.
    """
    kinds = [KernelKind.coerce(k) for k in kernels]
    modes = [ReconstructionMode.coerce(m) for m in (modes or ("point", "cell"))]
    rows = []
    for kind in kinds:
        for mode in modes:
            for func, theta in _cells():
                ladder = LadderConfig(j_max=j_max, theta=theta or 0, mode=mode, eps=eps)
                try:
                    report = average_order(kind, func, ladder)
                    order, used = report.average_order, report.levels_used
                except AllLevelsDegenerate:
                    order, used = None, None
                rows.append(
                    {
                        "scheme": kind.value,
                        "mode": mode.value,
                        "function": func.family,
                        "k": func.k,
                        "theta": theta,
                        "avg_order": order,
                        "levels_used": used,
                    }
                )
    rows.sort(
        key=lambda r: (
            r["scheme"], r["mode"], r["function"],
            -1 if r["theta"] is None else r["theta"], r["k"],
        )
    )
    return rows


def table_to_csv(rows, stream=None):
    """Write order-table rows as CSV; returns the text when ``stream`` is None."""
    own = stream is None
    stream = io.StringIO() if own else stream
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow(
            [
                r["scheme"], r["mode"], r["function"], r["k"],
                "" if r["theta"] is None else r["theta"],
                "" if r["avg_order"] is None else f"{r['avg_order']:.6g}",
                "" if r["levels_used"] is None else r["levels_used"],
            ]
        )
    return stream.getvalue() if own else None
