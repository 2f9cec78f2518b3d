"""Acceptance criteria, each run at its stated tolerance.

Every test records one PASS/FAIL line (shown in the terminal summary) and
then fails if any of its checks failed. Reference solutions come from the
pytest cache; building them from scratch takes far longer than the runtime
budgets, which are therefore timed with the references already available.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE
from oweno.accuracy import order_table
from oweno.euler import Eos, pressure, primitive_to_conserved
from oweno.kernels import (
    KernelKind,
    classic3_weights,
    jsweno5_weights,
    oweno3_weights,
    reconstruct_left,
    reconstruct_right,
)
from oweno.problems import (
    ProblemSpec,
    error_vs_exact,
    error_vs_reference,
    make_problem,
    reference_solution,
    scaling_counterexample,
    total_variation,
)
from oweno.solver import (
    Discretization,
    DmrTop,
    Inflow,
    Outflow,
    Periodic,
    Reflecting,
    RunConfig,
    Split,
    Step,
    integrate,
    rk3_step,
)

JS, YC, OW, W5 = KernelKind.JSWENO3, KernelKind.YCWENO3, KernelKind.OWENO3, KernelKind.JSWENO5
THIRD = (JS, YC, OW)
LEVELS = (40, 80, 160, 320, 640, 1280)


class Report:
    def __init__(self, name):
        self.name = name
        self.checks = []
        self.notes = []

    def check(self, label, ok, info=""):
        self.checks.append((label, bool(ok), info))

    def within(self, label, value, lo, hi):
        self.check(label, lo <= value <= hi, f"{value:.4g} in [{lo:.4g}, {hi:.4g}]")

    def note(self, text):
        self.notes.append(text)

    def finish(self):
        failed = [c for c in self.checks if not c[1]]
        ok = not failed
        detail = f"{len(self.checks) - len(failed)}/{len(self.checks)} checks"
        if failed:
            detail += "; failed: " + "; ".join(f"{label} ({info})" for label, _, info in failed)
        ACCEPTANCE.append((self.name, ok, detail))
        print(f"\n{self.name}: {'PASS' if ok else 'FAIL'}  {detail}")
        for label, passed, info in self.checks:
            print(f"    [{'ok' if passed else 'FAIL'}] {label}: {info}")
        for text in self.notes:
            print(f"    note: {text}")
        assert ok, detail


def _orders(errors, levels):
    return [math.log(a / b) / math.log(m / n) for a, b, n, m in zip(errors, errors[1:], levels, levels[1:])]


def _ladder(name, kind, levels=LEVELS, cfl=None):
    spec = make_problem(name)
    l1, linf = [], []
    for n in levels:
        grid = spec.grid(n)
        e = error_vs_exact(integrate(spec, grid, RunConfig(kind, cfl=cfl)).field, spec, grid)
        l1.append(e.l1)
        linf.append(e.linf)
    return l1, linf


def _rows_from(levels, orders, n_min):
    # order k belongs to level levels[k + 1]
    return [(n, o) for n, o in zip(levels[1:], orders) if n >= n_min]


def test_criterion_1_algebraic_order_table():
    rep = Report("criterion 1 (order table)")
    start = time.perf_counter()
    rows = order_table(j_max=8, eps=1e-100)
    elapsed = time.perf_counter() - start
    for r in rows:
        label = f"{r['scheme']} {r['mode']} {r['function']}{r['k']}" + (
            "" if r["theta"] is None else f" theta={r['theta']}")
        if r["function"] == "f" and r["k"] == 1:
            target = 3.01 if r["scheme"] == "oweno3" else 2.00
            rep.within(label, r["avg_order"], target - 0.15, target + 0.15)
        elif r["function"] == "g":
            rep.within(label, r["avg_order"], 1.8, 2.2)
    rep.check("runtime < 5 s", elapsed < 5.0, f"{elapsed:.2f} s")
    rep.finish()


def test_criterion_2_linear_advection():
    rep = Report("criterion 2 (linear advection)")
    start = time.perf_counter()
    ow = _ladder("advection", OW)
    js = _ladder("advection", JS)
    yc = _ladder("advection", YC)
    elapsed = time.perf_counter() - start
    for n, o in _rows_from(LEVELS, _orders(ow[0], LEVELS), 160):
        rep.within(f"oweno3 L1 order n={n}", o, 2.95, 3.05)
    rep.check("oweno3 n=40 L1 within factor 3 of 1.87e-4",
              1.87e-4 / 3 <= ow[0][0] <= 1.87e-4 * 3, f"{ow[0][0]:.3e}, factor {ow[0][0] / 1.87e-4:.2f}")
    rep.note(f"oweno3 n=40: L1 / |domain| = {ow[0][0] / 2:.3e}, Linf = {ow[1][0]:.3e}")
    for n, o in _rows_from(LEVELS, _orders(js[0], LEVELS), 0):
        rep.within(f"jsweno3 L1 order n={n}", o, 1.95, 2.35)
    for n, o in _rows_from(LEVELS, _orders(js[1], LEVELS), 0):
        rep.within(f"jsweno3 Linf order n={n}", o, 1.30, 1.55)
    for n, o in _rows_from(LEVELS, _orders(yc[0], LEVELS), 0):
        rep.within(f"ycweno3 L1 order n={n}", o, 2.1, 2.45)
    rep.check("runtime < 2 min", elapsed < 120, f"{elapsed:.1f} s")
    rep.finish()


def test_criterion_3_burgers_smooth():
    rep = Report("criterion 3 (Burgers, smooth)")
    start = time.perf_counter()
    ow = _ladder("burgers_smooth", OW)
    js = _ladder("burgers_smooth", JS)
    elapsed = time.perf_counter() - start
    for n, o in _rows_from(LEVELS, _orders(ow[0], LEVELS), 160):
        rep.within(f"oweno3 L1 order n={n}", o, 2.9, 3.1)
    for n, o in _rows_from(LEVELS, _orders(js[1], LEVELS), 160):
        rep.within(f"jsweno3 Linf order n={n}", o, 1.3, 1.5)
    rep.check("runtime < 2 min", elapsed < 120, f"{elapsed:.1f} s")
    rep.finish()


def test_criterion_4_burgers_discontinuous(reference_cache):
    rep = Report("criterion 4 (Burgers, shock)")
    spec = make_problem("burgers_disc")
    reference = reference_solution(spec, reference_cache)
    grid = spec.grid(160)
    u0 = spec.initial_field(grid)
    l1 = {}
    for kind in THIRD:
        res = integrate(spec, grid, RunConfig(kind))
        rep.check(f"{kind.value} completes", res.t == spec.t_final, f"t={res.t}, {res.steps} steps")
        drift = grid.h[0] * abs(res.field.sum() - u0.sum())
        rep.check(f"{kind.value} conservation", drift <= 1e-11, f"{drift:.2e}")
        tv, tv0 = total_variation(res.field[0]), total_variation(u0[0])
        rep.check(f"{kind.value} TV", tv <= tv0 + 0.1, f"{tv:.6f} vs {tv0:.6f} + 0.1")
        l1[kind] = error_vs_reference(res.field, reference, grid).l1
    rep.check("oweno3 < jsweno3 and ycweno3 in L1", l1[OW] < l1[JS] and l1[OW] < l1[YC],
              ", ".join(f"{k.value} {v:.4e}" for k, v in l1.items()))
    rep.finish()


def test_criterion_5_shu_osher(reference_cache):
    rep = Report("criterion 5 (Shu-Osher)")
    spec = make_problem("shu_osher")
    reference = reference_solution(spec, reference_cache)
    start = time.perf_counter()
    for n in (200, 400):
        grid = spec.grid(n)
        l1 = {k: error_vs_reference(integrate(spec, grid, RunConfig(k)).field, reference, grid).l1
              for k in THIRD}
        info = ", ".join(f"{k.value} {v:.4e}" for k, v in l1.items())
        rep.check(f"n={n}: oweno3 < ycweno3 < jsweno3", l1[OW] < l1[YC] < l1[JS], info)
    elapsed = time.perf_counter() - start
    rep.check("runtime < 5 min", elapsed < 300, f"{elapsed:.1f} s")
    rep.finish()


def test_criterion_6_blast_wave(reference_cache):
    rep = Report("criterion 6 (blast wave)")
    spec = make_problem("blast")
    reference = reference_solution(spec, reference_cache)
    grid = spec.grid(800)
    l1 = {}
    for kind in (OW, JS):
        low = [math.inf, math.inf]

        def watch(step, t, u):
            low[0] = min(low[0], float(u[0].min()))
            p = (Eos().gamma - 1.0) * (u[2] - 0.5 * u[1] ** 2 / u[0])
            low[1] = min(low[1], float(p.min()))

        res = integrate(spec, grid, RunConfig(kind, cfl=0.5), callback=watch)
        rep.check(f"{kind.value} completes", res.t == spec.t_final, f"{res.steps} steps")
        rep.check(f"{kind.value} rho, p > 0 every step", low[0] > 0 and low[1] > 0,
                  f"min rho {low[0]:.3e}, min p {low[1]:.3e}")
        l1[kind] = error_vs_reference(res.field, reference, grid).l1
    rep.check("oweno3 < jsweno3 in L1", l1[OW] < l1[JS], f"{l1[OW]:.4e} vs {l1[JS]:.4e}")
    rep.finish()


def _freestream_cases():
    rest = tuple(primitive_to_conserved(np.array([1.3, 0.0, 0.0, 2.0])))
    moving = tuple(primitive_to_conserved(np.array([1.3, 0.8, 0.0, 2.0])))
    faces = ("xlo", "xhi", "ylo", "yhi")
    yield "periodic", moving, {f: Periodic() for f in faces}, None
    yield "outflow", moving, {f: Outflow() for f in faces}, None
    yield "inflow", moving, {"xlo": Inflow(moving), "xhi": Outflow(), "ylo": Inflow(moving), "yhi": Inflow(moving)}, None
    yield "reflecting", rest, {f: Reflecting() for f in faces}, None
    yield "dmr-top+split", moving, {"xlo": Inflow(moving), "xhi": Outflow(),
                                    "ylo": Split(0.25, Outflow(), Reflecting()), "yhi": DmrTop(moving, moving)}, None
    yield "step", rest, {"xlo": Inflow(rest), "xhi": Outflow(), "ylo": Reflecting(), "yhi": Reflecting()}, Step(0.6, 0.2)


def test_criterion_7_two_dimensional(reference_cache):
    rep = Report("criterion 7 (2D runs)")
    riemann = make_problem("riemann2d")
    reference = reference_solution(riemann, reference_cache)
    start = time.perf_counter()
    grid = riemann.grid(128)
    l1 = {}
    for kind in THIRD:
        res = integrate(riemann, grid, RunConfig(kind))
        rep.check(f"riemann2d 128^2 {kind.value} completes", res.t == riemann.t_final, f"{res.steps} steps")
        l1[kind] = error_vs_reference(res.field, reference, grid).l1
    rep.check("riemann2d oweno3 < ycweno3 < jsweno3", l1[OW] < l1[YC] < l1[JS],
              ", ".join(f"{k.value} {v:.4e}" for k, v in l1.items()))
    dmr = make_problem("dmr")
    res = integrate(dmr, dmr.grid((256, 64)), RunConfig(OW, cfl=0.25))
    ok = res.t == dmr.t_final and bool(np.all(res.field[0] > 0)) and bool(np.all(pressure(res.field) > 0))
    rep.check("dmr 256x64 cfl 0.25 completes", ok, f"{res.steps} steps, {res.walltime:.0f} s")
    for label, state, bcs, step in _freestream_cases():
        spec = ProblemSpec(
            name=label, bounds=((0.0, 3.0), (0.0, 1.0)), nvar=4,
            initial=lambda x, y, s=np.array(state): np.broadcast_to(s[:, None, None], (4,) + x.shape).copy(),
            boundaries=bcs, physics=Eos(), t_final=1.0, default_n=(30, 10), obstacle=step,
        )
        g = spec.grid()
        worst = 0.0
        for kind in KernelKind:
            disc = Discretization(spec, g, RunConfig(kind))
            u0 = spec.initial_field(g)
            u = u0
            for _ in range(10):
                u = rk3_step(u, 0.01, disc)
            worst = max(worst, float(np.max(np.abs(u - u0))))
        rep.check(f"freestream {label}", worst <= 1e-12, f"max change {worst:.1e}")
    elapsed = time.perf_counter() - start
    rep.check("runtime < 15 min", elapsed < 900, f"{elapsed:.0f} s")
    rep.finish()


def _kernel_weights(kind, w, mode, eps=1e-100):
    if kind is OW:
        d = oweno3_weights(w, eps, mode)
        return [d.w0, d.w1], [d.p0, d.p1], d.result
    if kind is W5:
        d = jsweno5_weights(w, eps, mode)
        return [d["w0"], d["w1"], d["w2"]], [d["q0"], d["q1"], d["q2"]], d["result"]
    d = classic3_weights(w, eps, mode, kind)
    return [d.w0, d.w1], [d.p0, d.p1], d.result


def test_criterion_8_kernel_properties():
    rep = Report("criterion 8 (kernel properties)")
    start = time.perf_counter()
    ulp = np.finfo(float).eps
    rng = np.random.default_rng(2024)
    samples = 400
    for kind in KernelKind:
        partition = convex = constants = mirror = True
        for mode in ("point", "cell"):
            for _ in range(samples):
                scale = 10.0 ** rng.uniform(-6, 6)
                w = rng.normal(size=kind.width) * scale
                if rng.random() < 0.3:
                    w[rng.integers(kind.width):] += 10 * scale  # a jump somewhere
                weights, cands, value = _kernel_weights(kind, w, mode)
                partition &= abs(sum(weights) - 1.0) <= 4 * ulp and min(weights) >= 0
                lo, hi = min(cands), max(cands)
                slack = 4 * ulp * max(abs(lo), abs(hi))
                convex &= lo - slack <= value <= hi + slack
                c = float(w[0])
                constants &= reconstruct_right(kind, [c] * kind.width, 1e-100, mode) == c
                mirror &= reconstruct_left(kind, w, 1e-100, mode) == reconstruct_right(kind, w[::-1], 1e-100, mode)
        rep.check(f"{kind.value} partition of unity (4 ulp)", partition)
        rep.check(f"{kind.value} convexity (4 ulp)", convex)
        rep.check(f"{kind.value} exact on constants", constants)
        rep.check(f"{kind.value} exact mirror symmetry", mirror)

    worst = 0.0
    for _ in range(samples):
        w = rng.integers(-1000, 1001, size=4).astype(float)
        if np.all(np.diff(w) == 0):
            continue
        lam = 10.0 ** rng.uniform(-3, 3)
        mu = float(rng.integers(-1000, 1001))
        for mode in ("point", "cell"):
            a, b = oweno3_weights(w, 1e-100, mode), oweno3_weights(lam * w + mu, 1e-100, mode)
            worst = max(worst, abs(a.w0 - b.w0), abs(a.w1 - b.w1))
    rep.check("oweno3 scale/shift invariance", worst <= 1e-10, f"max weight change {worst:.1e}")

    gaps, omegas = [], []
    for j in range(6):
        h = 0.1 / 2**j
        x = np.arange(-1, 3) * h
        gaps.append(1.0 - oweno3_weights(x**2 * np.exp(x), 1e-100, "point").omega)
        xs = (np.arange(-1, 3) - 0.5) * h
        omegas.append(oweno3_weights(np.where(xs <= 0, np.exp(xs), np.exp(xs + 1)), 1e-100, "point").omega)
    r1 = np.log2(np.array(gaps[:-1]) / gaps[1:])
    r0 = np.log2(np.array(omegas[:-1]) / omegas[1:])
    rep.check("omega -> 1 on f1 at rate >= 1.8", np.all(r1 >= 1.8), f"min rate {r1.min():.3f}")
    rep.check("omega -> 0 at a jump at rate >= 1.9", np.all(r0 >= 1.9), f"min rate {r0.min():.3f}")

    diff = 0.0
    for h in (1.0, 0.1, 1e-3, 1e-5):
        F, G = scaling_counterexample(h)
        for mode in ("point", "cell"):
            a, b = classic3_weights(F, 1e-300, mode, JS), classic3_weights(G, 1e-300, mode, JS)
            diff = max(diff, abs(a.w0 - b.w0), abs(a.w1 - b.w1))
    rep.check("JS weights identical on F_h and G", diff <= 1e-10, f"max difference {diff:.1e}")

    footprint = True
    for kind in KernelKind:
        base = rng.normal(size=kind.width)
        ref = reconstruct_right(kind, base)
        for i in range(kind.width):
            w = base.copy()
            w[i] += 0.37
            footprint &= reconstruct_right(kind, w) != ref
    rep.check("stencil footprint", footprint)
    elapsed = time.perf_counter() - start
    rep.check("runtime < 10 s", elapsed < 10, f"{elapsed:.2f} s")
    rep.finish()
