"""Benchmark catalogue: initial/boundary data, exact or reference solutions, error norms."""

import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import newton

from .euler import Eos, primitive_to_conserved
from .exceptions import IncompatibleGrids, NoExactSolution, UnknownProblem
from .flux import ScalarFlux, burgers_flux, linear_flux
from .kernels import KernelKind
from .solver import (
    DmrTop,
    Grid,
    Inflow,
    Outflow,
    Periodic,
    Reflecting,
    RunConfig,
    Split,
    Step,
    default_cfl,
    integrate,
)


@dataclass(frozen=True)
class ReferenceSpec:
    """Fine-grid self-run used in place of an exact solution."""

    n: tuple
    kernel: KernelKind = KernelKind.OWENO3
    cfl: float = None


@dataclass
class ProblemSpec:
    name: str
    bounds: tuple
    nvar: int
    initial: object  # callable(*coords) -> (nvar, ...) array
    boundaries: dict
    physics: object  # ScalarFlux or Eos
    t_final: float
    default_n: tuple
    exact: object = None  # callable(x, t) for scalar problems
    reference: ReferenceSpec = None
    obstacle: Step = None
    cfl: float = None
    description: str = ""

    @property
    def dims(self):
        return len(self.bounds)

    def grid(self, n=None):
        n = self.default_n if n is None else n
        n = (int(n),) if np.isscalar(n) else tuple(int(v) for v in n)
        if len(n) == 1 and self.dims == 2:
            n = (n[0], n[0])
        if len(n) != self.dims:
            raise ValueError(f"{self.name} is {self.dims}D; got resolution {n}")
        return Grid(self.bounds, n)

    def initial_field(self, grid):
        return np.asarray(self.initial(*grid.mesh()), dtype=float).reshape((self.nvar,) + grid.n)

    def default_cfl(self, grid):
        return self.cfl if self.cfl is not None else default_cfl(grid)


@dataclass(frozen=True)
class ErrorNorms:
    l1: float
    linf: float


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _sine(x):
    return 0.25 + 0.5 * np.sin(np.pi * x)


def _scalar(values):
    return np.asarray(values, dtype=float)[None, ...]


def _advection(**_):
    return ProblemSpec(
        name="advection",
        bounds=((-1.0, 1.0),),
        nvar=1,
        initial=lambda x: _scalar(_sine(x)),
        boundaries={"xlo": Periodic(), "xhi": Periodic()},
        physics=linear_flux(1.0),
        t_final=1.0,
        default_n=(40,),
        exact=lambda x, t: _sine(np.asarray(x) - t),
        description="linear advection of a sine wave",
    )


def burgers_exact(x, t):
    """Smooth Burgers solution from ``u = u0(x - u t)`` (valid before shock formation)."""
    x = np.asarray(x, dtype=float)
    if t == 0:
        return _sine(x)
    if t >= 2.0 / np.pi:
        raise NoExactSolution("the Burgers solution has a shock for t >= 2/pi")

    def g(u):
        return u - _sine(x - u * t)

    def dg(u):
        return 1.0 + 0.5 * np.pi * t * np.cos(np.pi * (x - u * t))

    return newton(g, _sine(x), fprime=dg, tol=1e-15, maxiter=100)


def _burgers(name, t_final, **_):
    smooth = name == "burgers_smooth"
    return ProblemSpec(
        name=name,
        bounds=((-1.0, 1.0),),
        nvar=1,
        initial=lambda x: _scalar(_sine(x)),
        boundaries={"xlo": Periodic(), "xhi": Periodic()},
        physics=burgers_flux(),
        t_final=t_final,
        default_n=(160,),
        exact=burgers_exact if smooth else None,
        reference=None if smooth else ReferenceSpec((5120,)),
        description="inviscid Burgers, " + ("smooth" if smooth else "after shock formation"),
    )


EOS = Eos(1.4)


def _shu_osher(**_):
    left = (27.0 / 7.0, 4.0 * math.sqrt(35.0) / 9.0, 31.0 / 3.0)
    left_u = tuple(primitive_to_conserved(np.array(left), EOS))

    def initial(x):
        prim = np.where(
            x <= -4.0,
            np.array(left)[:, None],
            np.stack([1.0 + np.sin(5.0 * x) / 5.0, np.zeros_like(x), np.ones_like(x)]),
        )
        return primitive_to_conserved(prim, EOS)

    return ProblemSpec(
        name="shu_osher",
        bounds=((-5.0, 5.0),),
        nvar=3,
        initial=initial,
        boundaries={"xlo": Inflow(left_u), "xhi": Outflow()},
        physics=EOS,
        t_final=1.8,
        default_n=(200,),
        reference=ReferenceSpec((4000,)),
        description="Mach 3 shock running into a density sine wave",
    )


def _blast(**_):
    def initial(x):
        p = np.where(x < 0.1, 1e3, np.where(x < 0.9, 1e-2, 1e2))
        prim = np.stack([np.ones_like(x), np.zeros_like(x), p])
        return primitive_to_conserved(prim, EOS)

    return ProblemSpec(
        name="blast",
        bounds=((0.0, 1.0),),
        nvar=3,
        initial=initial,
        boundaries={"xlo": Reflecting(), "xhi": Reflecting()},
        physics=EOS,
        t_final=0.038,
        default_n=(800,),
        reference=ReferenceSpec((20000,)),
        description="two interacting blast waves between reflecting walls",
    )


DMR_POST = (8.0, 8.25 * math.cos(math.pi / 6), -8.25 * math.sin(math.pi / 6), 563.5)
DMR_PRE = (1.4, 0.0, 0.0, 2.5)


def _from_velocity_energy(state):
    rho, vx, vy, E = state
    return (rho, rho * vx, rho * vy, E)


def _dmr(initial_front="physical", **_):
    post = _from_velocity_energy(DMR_POST)
    pre = _from_velocity_energy(DMR_PRE)
    slope = math.tan(math.pi / 6)
    if initial_front not in ("physical", "literal"):
        raise ValueError("initial_front must be 'physical' or 'literal'")

    def initial(x, y):
        if initial_front == "physical":
            behind = x <= 0.25 + slope * y
        else:
            behind = y <= 0.25 + slope * x
        return np.where(behind, np.array(post)[:, None, None], np.array(pre)[:, None, None])

    return ProblemSpec(
        name="dmr",
        bounds=((0.0, 4.0), (0.0, 1.0)),
        nvar=4,
        initial=initial,
        boundaries={
            "xlo": Inflow(post),
            "xhi": Outflow(),
            "ylo": Split(0.25, Outflow(), Reflecting()),
            "yhi": DmrTop(post, pre),
        },
        physics=EOS,
        t_final=0.2,
        default_n=(256, 64),
        description="Mach 10 shock reflecting off a 30 degree wedge",
    )


RIEMANN2D_QUADRANTS = {
    # (x > 1/2, y > 1/2) -> primitive (rho, vx, vy, p)
    (True, True): (1.5, 0.0, 0.0, 1.5),
    (False, True): (0.5323, 1.206, 0.0, 0.3),
    (False, False): (0.138, 1.206, 1.206, 0.029),
    (True, False): (0.5323, 0.0, 1.206, 0.3),
}


def _riemann2d(**_):
    def initial(x, y):
        prim = np.empty((4,) + x.shape)
        for (east, north), state in RIEMANN2D_QUADRANTS.items():
            mask = ((x > 0.5) == east) & ((y > 0.5) == north)
            prim[:, mask] = np.array(state)[:, None]
        return primitive_to_conserved(prim, EOS)

    return ProblemSpec(
        name="riemann2d",
        bounds=((0.0, 1.0), (0.0, 1.0)),
        nvar=4,
        initial=initial,
        boundaries={f: Outflow() for f in ("xlo", "xhi", "ylo", "yhi")},
        physics=EOS,
        t_final=0.3,
        default_n=(128, 128),
        reference=ReferenceSpec((512, 512)),
        description="four-quadrant Riemann problem",
    )


def _wind_tunnel(step=True, **_):
    free = tuple(primitive_to_conserved(np.array([1.4, 3.0, 0.0, 1.0]), EOS))

    def initial(x, y):
        return np.broadcast_to(np.array(free)[:, None, None], (4,) + x.shape).copy()

    return ProblemSpec(
        name="wind_tunnel",
        bounds=((0.0, 3.0), (0.0, 1.0)),
        nvar=4,
        initial=initial,
        boundaries={"xlo": Inflow(free), "xhi": Outflow(), "ylo": Reflecting(), "yhi": Reflecting()},
        physics=EOS,
        t_final=4.0,
        default_n=(120, 40),
        obstacle=Step(0.6, 0.2) if step else None,
        description="Mach 3 flow over a forward-facing step",
    )


_BUILDERS = {
    "advection": _advection,
    "burgers_smooth": lambda **kw: _burgers("burgers_smooth", 0.3, **kw),
    "burgers_disc": lambda **kw: _burgers("burgers_disc", 12.0, **kw),
    "shu_osher": _shu_osher,
    "blast": _blast,
    "dmr": _dmr,
    "riemann2d": _riemann2d,
    "wind_tunnel": _wind_tunnel,
}

PROBLEMS = tuple(_BUILDERS)


def make_problem(name, **options):
    """Build a benchmark by its CLI name; ``options`` go to the builder."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise UnknownProblem(name, PROBLEMS) from None
    return builder(**options)


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------


def _norms(diff, grid):
    diff = np.abs(diff)
    return ErrorNorms(l1=float(grid.cell_volume * diff.sum()), linf=float(diff.max()))


def _measured(field):
    # density for Euler, the unknown itself for scalar laws
    return np.asarray(field, dtype=float)[0]


def error_vs_exact(field, spec, grid, t=None):
    if spec.exact is None:
        raise NoExactSolution(f"{spec.name} has no exact solution")
    t = spec.t_final if t is None else t
    exact = spec.exact(*grid.mesh(), t)
    return _norms(_measured(field) - exact, grid)


def restrict(reference, shape):
    """Sample a fine field at the centres of a coarser grid.

    Odd ratios pick the coinciding fine cell; even ratios average the fine
    cells straddling each coarse centre (2 in 1D, 2x2 in 2D).
    """
    ref = np.asarray(reference, dtype=float)
    shape = tuple(shape)
    if ref.ndim != len(shape):
        raise IncompatibleGrids(f"reference has shape {ref.shape}, coarse grid {shape}")
    out = ref
    for axis, (nf, nc) in enumerate(zip(ref.shape, shape)):
        if nc <= 0 or nf % nc:
            raise IncompatibleGrids(f"fine size {nf} is not a multiple of coarse size {nc}")
        r = nf // nc
        idx = np.arange(nc) * r + r // 2
        if r % 2:
            out = np.take(out, idx, axis=axis)
        else:
            out = 0.5 * (np.take(out, idx - 1, axis=axis) + np.take(out, idx, axis=axis))
    return out


def error_vs_reference(field, reference_field, grid):
    coarse = _measured(field)
    fine = _measured(reference_field)
    return _norms(coarse - restrict(fine, coarse.shape), grid)


def reference_solution(spec, cache_dir=None):
    """Final field of the reference run, cached as ``.npy`` when ``cache_dir`` is given."""
    if spec.reference is None:
        raise NoExactSolution(f"{spec.name} has no reference configuration")
    ref = spec.reference
    grid = spec.grid(ref.n)
    path = None
    if cache_dir is not None:
        key = f"{spec.name}|{grid.n}|{ref.kernel.value}|{ref.cfl}|{spec.t_final}|v1"
        digest = hashlib.sha1(key.encode()).hexdigest()[:12]
        path = Path(cache_dir) / f"{spec.name}-{'x'.join(map(str, grid.n))}-{digest}.npy"
        if path.exists():
            return np.load(path)
    result = integrate(spec, grid, RunConfig(kernel=ref.kernel, cfl=ref.cfl))
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.save(path, result.field)
    return result.field


def scaling_counterexample(h):
    """Samples of ``4x^2`` at ``-h/2, h/2, 3h/2`` and their ``h = 1`` counterpart."""
    if not h > 0:
        raise ValueError("h must be positive")
    x = np.array([-0.5, 0.5, 1.5])
    G = 4.0 * x**2
    return h * h * G, G


def total_variation(values):
    v = np.asarray(values, dtype=float).ravel()
    return float(np.abs(np.diff(v)).sum())
