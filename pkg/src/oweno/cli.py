"""Command-line front end.

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.
"""

import argparse
import math
import sys
from pathlib import Path

from . import io
from .accuracy import order_table, table_to_csv
from .exceptions import InvalidStencilWidth, OwenoError
from .kernels import (
    DEFAULT_EPS,
    KernelKind,
    ReconstructionMode,
    classic3_weights,
    jsweno5_weights,
    oweno3_weights,
)
from .problems import (
    PROBLEMS,
    error_vs_exact,
    error_vs_reference,
    make_problem,
    reference_solution,
)
from .solver import SPLITTINGS, RunConfig, integrate
from .validation import parse_floats, parse_resolution

SCHEMES = tuple(k.value for k in KernelKind)
SUMMARY_HEADER = "problem,scheme,n,cfl,t_final,steps,walltime_s"


class UsageError(Exception):
    pass


def _kernel(text):
    try:
        return KernelKind.coerce(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _resolution(text):
    try:
        return parse_resolution(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _levels(text):
    try:
        levels = [parse_resolution(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not levels:
        raise argparse.ArgumentTypeError("expected at least one level")
    return levels


def _schemes(text):
    names = [v for v in text.split(",") if v.strip()]
    if not names:
        raise argparse.ArgumentTypeError("expected at least one scheme")
    return [_kernel(v) for v in names]


def build_parser():
    parser = argparse.ArgumentParser(prog="oweno", description="Third-order WENO solvers and experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    acc = sub.add_parser("accuracy", help="order table of the reconstruction kernels")
    acc.add_argument("--jmax", type=int, default=8)
    acc.add_argument("--eps", type=_positive_float, default=DEFAULT_EPS)
    acc.add_argument("--out", type=Path)

    solve = sub.add_parser("solve", help="run one benchmark")
    _problem_flags(solve)
    solve.add_argument("--scheme", type=_kernel, default=KernelKind.OWENO3)
    solve.add_argument("--n", type=_resolution)
    solve.add_argument("--tfinal", type=float)
    solve.add_argument("--splitting", choices=SPLITTINGS)
    solve.add_argument("--dump", type=Path)
    solve.add_argument("--dump-every", type=int)

    conv = sub.add_parser("convergence", help="errors and observed orders over a level list")
    _problem_flags(conv)
    conv.add_argument("--scheme", type=_kernel, default=KernelKind.OWENO3)
    conv.add_argument("--levels", type=_levels, required=True)
    conv.add_argument("--out", type=Path)
    conv.add_argument("--reference-cache", type=Path)

    eff = sub.add_parser("efficiency", help="L1 error against wall time per scheme and level")
    _problem_flags(eff)
    eff.add_argument("--schemes", type=_schemes, required=True)
    eff.add_argument("--levels", type=_levels, required=True)
    eff.add_argument("--out", type=Path)
    eff.add_argument("--reference-cache", type=Path)

    st = sub.add_parser("stencil", help="every intermediate of one reconstruction")
    st.add_argument("--kernel", type=_kernel, default=KernelKind.OWENO3)
    st.add_argument("--values", required=True)
    st.add_argument("--eps", type=_positive_float, default=DEFAULT_EPS)
    st.add_argument("--mode", choices=("point", "cell"), default="cell")
    return parser


def _problem_flags(p):
    p.add_argument("--problem", choices=PROBLEMS, required=True)
    p.add_argument("--cfl", type=_positive_float)
    p.add_argument("--eps", type=_positive_float, default=DEFAULT_EPS)


def _config(args, scheme, tfinal=None):
    if args.cfl is not None and args.cfl > 1:
        raise UsageError("--cfl must lie in (0, 1]")
    return RunConfig(kernel=scheme, cfl=args.cfl, t_final=tfinal, eps=args.eps,
                     splitting=getattr(args, "splitting", None))


def _n_label(n):
    return "x".join(str(v) for v in n)


def _open_out(path):
    return sys.stdout if path is None else open(path, "w", newline="", encoding="utf-8")


def cmd_accuracy(args):
    if args.jmax < 2:
        raise UsageError("--jmax must be at least 2")
    rows = order_table(j_max=args.jmax, eps=args.eps)
    out = _open_out(args.out)
    try:
        table_to_csv(rows, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _dump_path(base, step):
    return base.with_name(f"{base.stem}_{step:06d}{base.suffix}")


def cmd_solve(args):
    spec = make_problem(args.problem)
    grid = spec.grid(args.n)
    config = _config(args, args.scheme, args.tfinal)
    if args.dump_every is not None and (args.dump_every < 1 or args.dump is None):
        raise UsageError("--dump-every needs --dump and a positive step count")
    callback = None
    if args.dump_every:
        def callback(step, t, u):
            if step % args.dump_every == 0:
                io.write_field(_dump_path(args.dump, step), grid, u)
    result = integrate(spec, grid, config, callback=callback)
    if args.dump is not None:
        io.write_field(args.dump, grid, result.field)
    cfl = config.cfl if config.cfl is not None else spec.default_cfl(grid)
    print(SUMMARY_HEADER)
    print(",".join([
        spec.name, config.kernel.value, _n_label(grid.n), io.fmt(cfl),
        io.fmt(result.t), str(result.steps), f"{result.walltime:.6f}",
    ]))
    return 0


def _errors(spec, grid, field, cache):
    if spec.exact is not None:
        return error_vs_exact(field, spec, grid)
    return error_vs_reference(field, reference_solution(spec, cache), grid)


def cmd_convergence(args):
    spec = make_problem(args.problem)
    config = _config(args, args.scheme)
    rows = []
    prev = None
    for n in args.levels:
        grid = spec.grid(n)
        result = integrate(spec, grid, config)
        err = _errors(spec, grid, result.field, args.reference_cache)
        if prev is None:
            o1 = oinf = None
        else:
            ratio = grid.n[0] / prev[0].n[0]
            o1 = math.log(prev[1].l1 / err.l1) / math.log(ratio)
            oinf = math.log(prev[1].linf / err.linf) / math.log(ratio)
        rows.append([_n_label(grid.n), err.l1, o1, err.linf, oinf])
        prev = (grid, err)
    out = _open_out(args.out)
    try:
        io.write_table(out, ("n", "l1_err", "l1_order", "linf_err", "linf_order"), rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_efficiency(args):
    spec = make_problem(args.problem)
    rows = []
    for kind in args.schemes:
        config = _config(args, kind)
        for n in args.levels:
            grid = spec.grid(n)
            result = integrate(spec, grid, config)
            err = _errors(spec, grid, result.field, args.reference_cache)
            rows.append([kind.value, _n_label(grid.n), err.l1, result.walltime])
    out = _open_out(args.out)
    try:
        io.write_table(out, ("scheme", "n", "l1_err", "walltime_s"), rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def stencil_report(kind, values, eps, mode):
    """Ordered ``(name, value)`` pairs of every intermediate."""
    if len(values) != kind.width:
        raise InvalidStencilWidth(
            f"{kind.label} needs {kind.width} values, got {len(values)}"
        )
    if kind is KernelKind.OWENO3:
        d = oweno3_weights(values, eps, mode)
        keys = ("I0", "I1", "I2", "d", "J", "tau", "omega", "tw0", "tw1", "w0", "w1", "p0", "p1", "result")
        return [(k, getattr(d, k)) for k in keys]
    if kind is KernelKind.JSWENO5:
        return list(jsweno5_weights(values, eps, mode).items())
    d = classic3_weights(values, eps, mode, kind)
    keys = ("I0", "I1") + (("sigma",) if kind is KernelKind.YCWENO3 else ()) + ("w0", "w1", "p0", "p1", "result")
    return [(k, getattr(d, k)) for k in keys]


def cmd_stencil(args):
    try:
        values = parse_floats(args.values)
        report = stencil_report(args.kernel, values, args.eps, ReconstructionMode.coerce(args.mode))
    except (ValueError, InvalidStencilWidth) as exc:
        raise UsageError(str(exc)) from None
    print(f"{args.kernel.value} " + " ".join(f"{k}={io.fmt(v)}" for k, v in report))
    return 0


COMMANDS = {
    "accuracy": cmd_accuracy,
    "solve": cmd_solve,
    "convergence": cmd_convergence,
    "efficiency": cmd_efficiency,
    "stencil": cmd_stencil,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (OwenoError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
