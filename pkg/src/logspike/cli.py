"""Command-line front end: ``logspike <command> [options]``.

Every command prints one table, as CSV (header + rows) or JSON
(``{"meta": ..., "rows": [...]}``), to stdout or ``--out``. Numbers carry
12 significant digits. Exit status is 0 on success, 1 when a computation
fails, 2 on bad usage.
"""

import argparse
import sys

from . import __version__
from .errors import BracketError, LogSpikeError
from .output import render
from .perturb import (
    crossing,
    first_order,
    first_order_quadrature,
    linear_energy,
    unperturbed_energy,
)
from .shooting import (
    ModelParams,
    Parity,
    barrier_halfwidth,
    eigenvalue,
    mismatch,
    rect_approx_energy,
    rect_approx_wavefunction,
    wavefunction,
    wkb_approx_wavefunction,
)
from .transformed import conditioning_study

DEFAULT_PAIRS = ((0, 1), (0, 2), (2, 3))
STUDY_ENERGIES = (5.55, 5.45)
STUDY_LAMBDAS = (3.50, 3.75, 4.00, 4.25)


class CommandFailed(Exception):
    """Raised after partial output was produced for a failing command."""


def _pair(text):
    try:
        m, n = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected M,N got {text!r}")
    if m < 0 or m >= n:
        raise argparse.ArgumentTypeError(f"pair {text!r} needs 0 <= M < N")
    return m, n


def _nonneg_float(text):
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"expected a value >= 0, got {text!r}")
    return value


def _pos_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a value > 0, got {text!r}")
    return value


def _n_max(text):
    value = int(text)
    if not 0 <= value <= 50:
        raise argparse.ArgumentTypeError("--n-max must lie in [0, 50]")
    return value


def _params(args):
    return ModelParams(args.g, delta=args.delta)


def cmd_perturb(args):
    rows = []
    for n in range(args.n_max + 1):
        closed = first_order(n)
        quad = first_order_quadrature(n, args.tol)
        rows.append(dict(n=n, parity=Parity.of(n).value,
                         E0=unperturbed_energy(n), E1_closed=closed,
                         E1_quadrature=quad, abs_difference=abs(closed - quad)))
    cols = ["n", "parity", "E0", "E1_closed", "E1_quadrature", "abs_difference"]
    return cols, rows, {}


def cmd_crossings(args):
    rows = []
    for m, n in args.pair or DEFAULT_PAIRS:
        est = crossing(m, n)
        rows.append(dict(m=m, n=n,
                         g_cross=None if est is None else est.g_cross,
                         spurious=None if est is None else est.spurious))
    return ["m", "n", "g_cross", "spurious"], rows, {}


def cmd_spectrum(args):
    params = _params(args)
    rows = []
    cols = ["n", "parity", "E_numeric", "E_first_order", "residual", "status"]
    for n in range(args.n_max + 1):
        parity = Parity.of(n)
        try:
            level = eigenvalue(n, params, args.e_tol)
        except BracketError as exc:
            rows.append(dict(n=n, parity=parity.value, E_numeric=None,
                             E_first_order=linear_energy(n, args.g),
                             residual=None, status="bracket-failure"))
            raise CommandFailed(str(exc), (cols, rows, {}))
        rows.append(dict(n=n, parity=parity.value, E_numeric=level.energy,
                         E_first_order=linear_energy(n, args.g),
                         residual=mismatch(level.energy, params, parity),
                         status="ok"))
    return cols, rows, {}


def cmd_wavefunction(args):
    params = _params(args)
    level = eigenvalue(args.level, params, args.e_tol)
    grid = wavefunction(level, params, args.points, args.normalization)
    rows = [dict(x=x, psi=psi, energy=level.energy) for x, psi in grid.samples]
    meta = {"energy": level.energy, "parity": level.parity.value}
    return ["x", "psi", "energy"], rows, meta


def cmd_approx(args):
    if not args.g > 0:
        raise LogSpikeError("approx needs --g > 0")
    params = _params(args)
    if args.level is not None:
        level = eigenvalue(args.level, params, args.e_tol)
        exact = wavefunction(level, params, args.points)
        rect = rect_approx_wavefunction(level.energy, args.g, level.parity,
                                        args.points)
        wkb = wkb_approx_wavefunction(level.energy, args.g, level.parity,
                                      args.points)
        rows = [dict(x=x, psi_numeric=a, psi_rect=b, psi_wkb=c)
                for x, a, b, c in zip(exact.x.tolist(), exact.psi.tolist(),
                                      rect.psi.tolist(), wkb.psi.tolist())]
        meta = {"energy": level.energy, "d": barrier_halfwidth(level.energy, args.g)}
        return ["x", "psi_numeric", "psi_rect", "psi_wkb"], rows, meta
    rows = []
    for n in range(args.n_max + 1):
        E_rect = rect_approx_energy(n, args.g, args.e_tol)
        rows.append(dict(
            n=n, parity=Parity.of(n).value, E_rect=E_rect,
            d_rect=None if E_rect is None else barrier_halfwidth(E_rect, args.g),
            E_numeric=eigenvalue(n, params, args.e_tol).energy))
    return ["n", "parity", "E_rect", "d_rect", "E_numeric"], rows, {}


def cmd_transform_study(args):
    energies = args.energy or list(STUDY_ENERGIES)
    lambdas = args.lambda_max or list(STUDY_LAMBDAS)
    rows = [dict(E=r.E, lambda_max=r.lambda_max, phi_at_zero=r.phi_at_zero,
                 difference=r.difference)
            for r in conditioning_study(energies, lambdas, args.g)]
    return ["E", "lambda_max", "phi_at_zero", "difference"], rows, {}


COMMANDS = {
    "perturb": cmd_perturb,
    "crossings": cmd_crossings,
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "approx": cmd_approx,
    "transform-study": cmd_transform_study,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="logspike",
        description="Square well with a logarithmic central spike.")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH")
    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--g", type=_nonneg_float, default=1.0)
    model.add_argument("--delta", type=float, default=1e-10)
    model.add_argument("--e-tol", type=_pos_float, default=1e-10)

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("perturb", parents=[common],
                       help="first-order coefficients, closed form vs quadrature")
    p.add_argument("--n-max", type=_n_max, default=9)
    p.add_argument("--tol", type=_pos_float, default=1e-10)

    p = sub.add_parser("crossings", parents=[common],
                       help="couplings where first-order levels cross")
    p.add_argument("--pair", type=_pair, action="append", metavar="M,N")

    p = sub.add_parser("spectrum", parents=[common, model],
                       help="low-lying eigenvalues by shooting")
    p.add_argument("--n-max", type=_n_max, default=4)

    p = sub.add_parser("wavefunction", parents=[common, model],
                       help="sampled eigenfunction on [-1, 1]")
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--points", type=int, default=401)
    p.add_argument("--normalization", choices=("max", "l2"), default="max")

    p = sub.add_parser("approx", parents=[common, model],
                       help="rectangular-barrier approximation")
    p.add_argument("--n-max", type=_n_max, default=4)
    p.add_argument("--level", type=int)
    p.add_argument("--points", type=int, default=401)

    p = sub.add_parser("transform-study", parents=[common],
                       help="backward integration in the exponential variable")
    p.add_argument("--g", type=_pos_float, default=1.0)
    p.add_argument("--energy", type=float, action="append")
    p.add_argument("--lambda-max", type=_pos_float, action="append")
    return parser


def _emit(args, table):
    cols, rows, extra = table
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("command", "format", "out")}
    meta = {"command": args.command, "parameters": params, "version": __version__}
    meta.update(extra)
    text = render(args.format, cols, rows, meta)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        table = COMMANDS[args.command](args)
    except CommandFailed as exc:
        message, partial = exc.args
        _emit(args, partial)
        print(f"logspike: {message}", file=sys.stderr)
        return 1
    except (LogSpikeError, ValueError) as exc:
        print(f"logspike: {exc}", file=sys.stderr)
        return 1
    _emit(args, table)
    return 0


if __name__ == "__main__":
    sys.exit(main())
