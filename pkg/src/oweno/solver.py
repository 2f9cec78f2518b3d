"""Method-of-lines driver for 1D and 2D conservation laws.

Fields are stored as ``(nvar, nx)`` or ``(nvar, nx, ny)`` arrays of point
values at cell centres. The right-hand side pads the field with three ghost
layers per face, computes interface fluxes sweep by sweep and returns the
flux divergence. Time integration uses the three-stage TVD Runge-Kutta
method.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .euler import Eos, max_wave_speed
from .exceptions import InvalidState, NonHyperbolicState
from .flux import _branches, euler_line_fluxes, euler_sweep, scalar_line_fluxes
from .kernels import DEFAULT_EPS, KernelKind, ReconstructionMode

GHOST = 3

SPLITTINGS = ("upwind", "characteristic-llf", "donat-marquina")


# ---------------------------------------------------------------------------
# grid and boundary conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centred grid; ``bounds`` is one ``(lo, hi)`` pair per axis."""

    bounds: tuple
    n: tuple

    def __post_init__(self):
        if len(self.bounds) != len(self.n) or len(self.n) not in (1, 2):
            raise ValueError("grid must be 1D or 2D with one bound pair per axis")
        for (lo, hi), n in zip(self.bounds, self.n):
            if not hi > lo or int(n) < 1:
                raise ValueError(f"invalid axis {lo, hi} with {n} cells")

    @property
    def dims(self):
        return len(self.n)

    @property
    def h(self):
        return tuple((hi - lo) / n for (lo, hi), n in zip(self.bounds, self.n))

    def centers(self, axis=0):
        lo, _ = self.bounds[axis]
        return lo + (np.arange(self.n[axis]) + 0.5) * self.h[axis]

    def padded_centers(self, axis=0):
        lo, _ = self.bounds[axis]
        return lo + (np.arange(-GHOST, self.n[axis] + GHOST) + 0.5) * self.h[axis]

    def mesh(self):
        if self.dims == 1:
            return (self.centers(0),)
        return tuple(np.meshgrid(self.centers(0), self.centers(1), indexing="ij"))

    @property
    def cell_volume(self):
        return float(np.prod(self.h))


@dataclass(frozen=True)
class Periodic:
    pass


@dataclass(frozen=True)
class Outflow:
    """Zeroth-order extrapolation."""


@dataclass(frozen=True)
class Inflow:
    """Fixed conserved state in every ghost layer."""

    state: tuple


@dataclass(frozen=True)
class Reflecting:
    """Solid wall on the cell face; the normal momentum changes sign."""


@dataclass(frozen=True)
class DmrTop:
    """Moving-shock top boundary: ``post`` where x <= x0 + (1 + speed t)/sqrt(3), else ``pre``."""

    post: tuple
    pre: tuple
    x0: float = 0.25
    speed: float = 20.0

    def threshold(self, t):
        return self.x0 + (1.0 + self.speed * t) / math.sqrt(3.0)


@dataclass(frozen=True)
class Split:
    """``lower`` where the tangential coordinate is <= ``at``, ``upper`` beyond it."""

    at: float
    lower: object
    upper: object


@dataclass(frozen=True)
class Step:
    """Solid block ``x > x0, y < height`` with reflecting faces."""

    x0: float
    height: float


FACES = {"xlo": (0, 0), "xhi": (0, 1), "ylo": (1, 0), "yhi": (1, 1)}


def _layer(ndim, axis, k):
    idx = [slice(None)] * (ndim + 1)
    idx[axis + 1] = k
    return tuple(idx)


def _ghost_values(P, grid, axis, side, bc, t, nvar):
    """Values for the three ghost layers of one face, ordered outward from the wall."""
    n = grid.n[axis]
    nd = grid.dims
    if side == 0:
        ghosts = [GHOST - 1 - k for k in range(GHOST)]
        mirrors = [GHOST + k for k in range(GHOST)]
        periodic = [g + n for g in ghosts]
        edge = GHOST
    else:
        ghosts = [n + GHOST + k for k in range(GHOST)]
        mirrors = [n + GHOST - 1 - k for k in range(GHOST)]
        periodic = [g - n for g in ghosts]
        edge = n + GHOST - 1
    if isinstance(bc, Periodic):
        vals = [P[_layer(nd, axis, s)].copy() for s in periodic]
    elif isinstance(bc, Outflow):
        vals = [P[_layer(nd, axis, edge)].copy() for _ in ghosts]
    elif isinstance(bc, Reflecting):
        vals = []
        for s in mirrors:
            v = P[_layer(nd, axis, s)].copy()
            v[1 + axis] = -v[1 + axis]
            vals.append(v)
    elif isinstance(bc, Inflow):
        shape = P[_layer(nd, axis, edge)].shape
        state = np.asarray(bc.state, dtype=float).reshape((nvar,) + (1,) * (len(shape) - 1))
        vals = [np.broadcast_to(state, shape).copy() for _ in ghosts]
    elif isinstance(bc, DmrTop):
        if nd != 2 or axis != 1:
            raise ValueError("DmrTop applies to a y face of a 2D grid")
        x = grid.padded_centers(0)
        post = np.asarray(bc.post, dtype=float)[:, None]
        pre = np.asarray(bc.pre, dtype=float)[:, None]
        v = np.where(x[None, :] <= bc.threshold(t), post, pre)
        vals = [v.copy() for _ in ghosts]
    elif isinstance(bc, Split):
        if nd != 2:
            raise ValueError("Split boundaries need a 2D grid")
        tang = grid.padded_centers(1 - axis)
        lower = _ghost_values(P, grid, axis, side, bc.lower, t, nvar)[1]
        upper = _ghost_values(P, grid, axis, side, bc.upper, t, nvar)[1]
        use_upper = (tang > bc.at)[None, :]
        vals = [np.where(use_upper, u, l) for l, u in zip(lower, upper)]
    else:
        raise TypeError(f"unsupported boundary condition {bc!r}")
    return ghosts, vals


def _fill_obstacle(P, grid, step, axis):
    i_s = int(round((step.x0 - grid.bounds[0][0]) / grid.h[0]))
    j_s = int(round((step.height - grid.bounds[1][0]) / grid.h[1]))
    g = GHOST
    if axis == 0:
        rows = slice(g, g + j_s)
        for k in range(GHOST):
            src = P[:, g + i_s - 1 - k, rows].copy()
            src[1] = -src[1]
            P[:, g + i_s + k, rows] = src
    else:
        cols = slice(g + i_s, g + grid.n[0])
        for k in range(GHOST):
            src = P[:, cols, g + j_s + k].copy()
            src[2] = -src[2]
            P[:, cols, g + j_s - 1 - k] = src


def fill_ghosts(P, grid, boundaries, t=0.0, axis=None, obstacle=None):
    """Populate the ghost layers of the padded field ``P`` in place.

    ``boundaries`` maps face names (``xlo``, ``xhi``, ``ylo``, ``yhi``) to
    boundary conditions. With ``axis`` given only the ghosts used by sweeps
    along that axis are filled, including the obstacle mirror cells.
    """
    nvar = P.shape[0]
    axes = range(grid.dims) if axis is None else (axis,)
    for ax in axes:
        for side in (0, 1):
            face = ("x", "y")[ax] + ("lo", "hi")[side]
            bc = boundaries[face]
            ghosts, vals = _ghost_values(P, grid, ax, side, bc, t, nvar)
            for gidx, v in zip(ghosts, vals):
                P[_layer(grid.dims, ax, gidx)] = v
        if obstacle is not None:
            _fill_obstacle(P, grid, obstacle, ax)
    return P


def solid_mask(grid, obstacle):
    """Boolean ``(nx, ny)`` mask of cells inside the obstacle."""
    if obstacle is None:
        return None
    X, Y = grid.mesh()
    return (X > obstacle.x0) & (Y < obstacle.height)


def check_step_alignment(grid, step):
    for coord, axis in ((step.x0, 0), (step.height, 1)):
        cells = (coord - grid.bounds[axis][0]) / grid.h[axis]
        if abs(cells - round(cells)) > 1e-9:
            raise ValueError(
                f"step face at {coord} does not coincide with a cell face of the "
                f"{grid.n[0]}x{grid.n[1]} grid"
            )


# ---------------------------------------------------------------------------
# semidiscrete operator
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    kernel: KernelKind = KernelKind.OWENO3
    cfl: float = None
    t_final: float = None
    eps: float = DEFAULT_EPS
    splitting: str = None

    def __post_init__(self):
        self.kernel = KernelKind.coerce(self.kernel)
        if self.cfl is not None and not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.splitting is not None:
            s = self.splitting.lower().replace("_", "-")
            aliases = {"llf": "characteristic-llf", "characteristic": "characteristic-llf",
                       "dm": "donat-marquina", "donatmarquina": "donat-marquina"}
            s = aliases.get(s, s)
            if s not in SPLITTINGS:
                raise ValueError(f"unknown splitting {self.splitting!r}")
            self.splitting = s


class Discretization:
    """Semidiscrete operator ``du/dt = L(u, t)`` for a problem on a grid."""

    def __init__(self, problem, grid, config):
        self.problem = problem
        self.grid = grid
        self.config = config
        self.is_system = isinstance(problem.physics, Eos)
        splitting = config.splitting
        if self.is_system:
            if splitting == "upwind":
                raise ValueError("the upwind splitting applies to scalar laws only")
            self.two_sided = splitting == "donat-marquina"
        else:
            if grid.dims != 1:
                raise ValueError("scalar laws are supported in 1D only")
            self.two_sided = False
        self.kind = config.kernel.code
        self.mode = ReconstructionMode.CELL_AVERAGES.code
        self.obstacle = getattr(problem, "obstacle", None)
        if self.obstacle is not None:
            check_step_alignment(grid, self.obstacle)
        self.solid = solid_mask(grid, self.obstacle)
        shape = (problem.nvar,) + tuple(n + 2 * GHOST for n in grid.n)
        self._pad = np.zeros(shape)
        nvar = problem.nvar
        if nvar == 4:
            self._perms = (np.array([0, 1, 2, 3]), np.array([0, 2, 1, 3]))
        else:
            self._perms = (np.array([0, 1, 2]),)

    def padded(self, u, t, axis=None):
        g = GHOST
        P = self._pad
        if self.grid.dims == 1:
            P[:, g:-g] = u
        else:
            P[:, g:-g, g:-g] = u
        fill_ghosts(P, self.grid, self.problem.boundaries, t, axis, self.obstacle)
        return P

    def interface_fluxes(self, u, t=0.0, axis=0):
        """Numerical fluxes at all interfaces normal to ``axis``.

        Shape ``(nvar, nx + 1)`` in 1D; ``(nvar, nx + 1, ny)`` or
        ``(nvar, nx, ny + 1)`` in 2D.
        """
        P = self.padded(u, t, axis)
        cfg = self.config
        if not self.is_system:
            line = P[0]
            fu = np.asarray(self.problem.physics.f(line), dtype=float)
            alpha, branch = _branches(self.problem.physics, line[2:-3], line[3:-2])
            out = np.empty((1, line.size - 5))
            scalar_line_fluxes(line, fu, np.asarray(alpha, dtype=float), branch,
                               self.kind, cfg.eps, self.mode, out[0])
            return out
        gamma = self.problem.physics.gamma
        if self.grid.dims == 1:
            out = np.empty((P.shape[0], P.shape[1] - 5))
            bad = euler_line_fluxes(P, self._perms[0], gamma, self.kind, cfg.eps,
                                    self.mode, self.two_sided, out)
            if bad >= 0:
                where = bad - GHOST
                raise NonHyperbolicState(f"no valid eigen-decomposition at cell {where}", where)
            return out
        nx, ny = self.grid.n
        shape = (P.shape[0], nx + 1, ny) if axis == 0 else (P.shape[0], nx, ny + 1)
        out = np.empty(shape)
        line, bad = euler_sweep(P, axis, self._perms[axis], gamma, self.kind, cfg.eps,
                                self.mode, self.two_sided, out)
        if bad >= 0:
            where = (bad - GHOST, line) if axis == 0 else (line, bad - GHOST)
            if self.solid is None or not self._in_solid(where):
                raise NonHyperbolicState(f"no valid eigen-decomposition at cell {where}", where)
        return out

    def _in_solid(self, where):
        i, j = where
        nx, ny = self.grid.n
        return 0 <= i < nx and 0 <= j < ny and bool(self.solid[i, j])

    def __call__(self, u, t=0.0):
        h = self.grid.h
        F = self.interface_fluxes(u, t, 0)
        du = -(F[:, 1:] - F[:, :-1]) / h[0]
        if self.grid.dims == 2:
            G = self.interface_fluxes(u, t, 1)
            du -= (G[:, :, 1:] - G[:, :, :-1]) / h[1]
            if self.solid is not None:
                du[:, self.solid] = 0.0
        return du

    def max_speeds(self, u):
        if self.is_system:
            if self.solid is not None:
                return max_wave_speed(u[:, ~self.solid], self.problem.physics)
            return max_wave_speed(u, self.problem.physics)
        return (float(np.max(np.abs(self.problem.physics.fprime(u[0])))),)


def semidiscrete_rhs(u, problem, grid, config, t=0.0):
    """``L(u)`` for one evaluation; builds a throwaway :class:`Discretization`."""
    return Discretization(problem, grid, config)(u, t)


# ---------------------------------------------------------------------------
# time integration
# ---------------------------------------------------------------------------


def rk3_step(u, dt, rhs, t=0.0):
    """One step of the three-stage TVD Runge-Kutta method; ``rhs(u, t)``."""
    u1 = u + dt * rhs(u, t)
    u2 = 0.75 * u + 0.25 * (u1 + dt * rhs(u1, t + dt))
    return u / 3.0 + 2.0 / 3.0 * (u2 + dt * rhs(u2, t + 0.5 * dt))


def cfl_dt(h, speeds, cfl):
    """``cfl * min_d h_d / s_d``; infinite when every speed is zero."""
    ratios = [hd / s for hd, s in zip(h, speeds) if s > 0]
    return cfl * min(ratios) if ratios else math.inf


def compute_dt(u, disc, cfl, t=0.0, t_final=math.inf):
    """CFL time step, clipped so the last step lands on ``t_final``."""
    dt = cfl_dt(disc.grid.h, disc.max_speeds(u), cfl)
    return min(dt, t_final - t)


@dataclass
class RunResult:
    field: np.ndarray
    grid: Grid
    t: float
    steps: int
    walltime: float
    dts: list = field(default_factory=list)


def default_cfl(grid):
    return 0.5 if grid.dims == 1 else 0.4


def integrate(problem, grid, config=None, callback=None, u0=None):
    """Advance ``problem`` from its initial data to the final time.

    ``callback(step, t, u)`` runs after every accepted step. The wall time
    covers the time loop only.
    """
    config = config or RunConfig()
    disc = Discretization(problem, grid, config)
    u = problem.initial_field(grid) if u0 is None else np.array(u0, dtype=float)
    t_final = problem.t_final if config.t_final is None else config.t_final
    cfl = config.cfl if config.cfl is not None else problem.default_cfl(grid)
    t = 0.0
    steps = 0
    dts = []
    start = time.perf_counter()
    while t < t_final:
        try:
            dt = compute_dt(u, disc, cfl, t, t_final)
        except InvalidState as exc:
            raise InvalidState(f"step {steps}, t={t:.6g}: {exc}", exc.location) from exc
        last = t + dt >= t_final
        u = rk3_step(u, dt, disc, t)
        t = t_final if last else t + dt
        steps += 1
        dts.append(dt)
        if callback is not None:
            callback(steps, t, u)
    walltime = time.perf_counter() - start
    return RunResult(field=u, grid=grid, t=t, steps=steps, walltime=walltime, dts=dts)
