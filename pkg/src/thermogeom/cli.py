"""Command-line interface: ``thermogeom {scan,bounds,ising-check,sample,quantum}``.

Exit codes: 0 success, 1 numerical or domain failure, 2 usage or input
failure. Tables go to standard output (or ``--out``), diagnostics to
standard error.
"""

import argparse
import sys

import numpy as np

from .estimation import (bessel_bound, grid_unbiased_estimator, gtu_bound,
                         ising_correction_closed_form, locally_unbiased_estimator)
from .exceptions import (DegenerateTrajectoryError, InfeasibleConstraintsError,
                         NumericalInconsistencyError, SchemaError)
from .geometry import FRAME_TOL, normalize
from .gibbs import thermal_state
from .measurement import format_sample_table, sample_configurations
from .models import MAX_ISING_SPINS, from_spectrum_file, independent_bond_chain, ising_chain
from .quantum import anandan_aharonov_check, evolve_trajectory, random_commuting_pair
from .tables import fmt, to_csv
from .trajectory import central_moments, curvature, heat_capacity

SCAN_COLUMNS = ("beta", "log_partition", "mean_energy", "var_energy", "mu3", "mu4", "curvature",
                "heat_capacity", "tu_bound", "gtu_correction", "gtu_degenerate_flag")
ISING_COLUMNS = ("N", "boundary", "computed", "degenerate", "closed_form_n_minus_1",
                 "closed_form_n_minus_2", "independent_bond_n", "diff_n_minus_1", "diff_n_minus_2",
                 "diff_independent_bond")
MAX_BOND_COUNT = 10_000

NUMERICAL_ERRORS = (DegenerateTrajectoryError, NumericalInconsistencyError,
                    InfeasibleConstraintsError, FloatingPointError)


class UsageError(Exception):
    pass


class NumericalFailure(Exception):
    def __init__(self, message, beta=None):
        self.beta = beta
        super().__init__(message if beta is None else f"beta={fmt(beta)}: {message}")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def load_model(path):
    model = from_spectrum_file(path)
    if model.n_params != 1:
        raise UsageError(f"{path}: model has {model.n_params} parameters; this command needs a "
                         "one-parameter (energy only) model")
    return model


def scan_row(model, beta):
    state = thermal_state(model, beta)
    mean, mu = central_moments(model, state)
    k = curvature(model, state).curvature
    rep = gtu_bound(model, state)
    return (float(beta), state.log_partition, mean, mu[2], mu[3], mu[4], k,
            heat_capacity(model, beta), rep.tu_bound, rep.correction, rep.degenerate)


def cmd_scan(args):
    model = load_model(args.model)
    rows = []
    for beta in np.linspace(args.beta_min, args.beta_max, args.steps):
        try:
            rows.append(scan_row(model, beta))
        except NUMERICAL_ERRORS as exc:
            raise NumericalFailure(str(exc), beta) from exc
    return to_csv(SCAN_COLUMNS, rows)


def _ladder_rows(name, report):
    partial = report.partial_sums
    for n, term in enumerate(report.bound_terms):
        yield (name, n, term, partial[n], report.variance, n in report.skipped_orders)


def cmd_bounds(args):
    model = load_model(args.model)
    K = model.n_levels
    n_max = min(K - 1, 4) if args.n_max is None else args.n_max
    if not 0 <= n_max <= K - 1:
        raise UsageError(f"--n-max must be in [0, {K - 1}] for this model")
    beta = args.beta
    try:
        moment = gtu_bound(model, beta)
        estimators = [("locally_unbiased", locally_unbiased_estimator(model, beta))]
        if args.grid:
            grid = sorted(set(args.grid) | {beta})
            est = grid_unbiased_estimator(model, grid, beta, local_order=args.local_order)
            estimators.append(("grid_unbiased", est))
        ladders = [(name, bessel_bound(est, model, beta, n_max, tol=args.tol)) for name, est in estimators]
    except NUMERICAL_ERRORS as exc:
        raise NumericalFailure(str(exc), beta) from exc

    _, mu = central_moments(model, beta, orders=(2, 3))
    summary = [("beta", beta), ("var_energy", mu[2]), ("mu3", mu[3]), ("curvature", moment.curvature),
               ("tu_bound", moment.tu_bound), ("gtu_correction", moment.correction),
               ("gtu_bound", moment.gtu_bound), ("gtu_degenerate_flag", moment.degenerate)]
    rows = [r for name, rep in ladders for r in _ladder_rows(name, rep)]
    return (to_csv(("quantity", "value"), summary) + "\n"
            + to_csv(("estimator", "order", "term", "partial_sum", "variance", "skipped"), rows))


def ising_row(N, J, beta, boundary):
    if boundary == "bonds":
        model = independent_bond_chain(N, J)
    else:
        model = ising_chain(N, J, boundary)
    rep = gtu_bound(model, beta)
    bonds = gtu_bound(independent_bond_chain(N, J), beta).correction
    c1 = ising_correction_closed_form(N, J, beta)
    c2 = 2.0 * np.sinh(beta * J) ** 2 / (N - 2) if N > 2 else float("nan")
    computed = rep.correction
    return (N, boundary, computed, rep.degenerate, c1, c2, bonds,
            abs(computed - c1), abs(computed - c2), abs(computed - bonds))


def cmd_ising_check(args):
    limit = MAX_BOND_COUNT if args.boundary == "bonds" else MAX_ISING_SPINS
    for N in args.N:
        if not 2 <= N <= limit:
            raise UsageError(f"N={N} outside the supported range [2, {limit}] for boundary {args.boundary}")
    rows = []
    for N in args.N:
        try:
            rows.append(ising_row(N, args.J, args.beta, args.boundary))
        except NUMERICAL_ERRORS as exc:
            raise NumericalFailure(f"N={N}: {exc}", args.beta) from exc
    return to_csv(ISING_COLUMNS, rows)


def cmd_sample(args):
    model = load_model(args.model)
    counts = sample_configurations(model, args.beta, args.count, args.seed)
    return format_sample_table(model, args.beta, counts, seed=args.seed)


def cmd_quantum(args):
    rng = np.random.Generator(np.random.PCG64(args.seed))
    H, J = random_commuting_pair(args.dim // 2, rng)
    xi0 = normalize(rng.normal(size=args.dim))
    times = np.array([0.0]) if args.t_max == 0 else np.linspace(0.0, args.t_max, args.steps)
    traj = evolve_trajectory(H, J, xi0, times)
    G = anandan_aharonov_check(traj)
    rows = [(t, np.linalg.norm(xi), float(xi @ H @ xi), g) for t, xi, g in zip(traj.times, traj.states, G)]
    out = to_csv(("t", "norm", "mean_energy", "G"), rows)
    return out + f"# max_g_drift={fmt(float(np.ptp(G)))}\n"


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the table here instead of standard output")
    common.add_argument("--tol", type=float, default=FRAME_TOL,
                        help="squared-norm tolerance for degenerate frame directions")

    parser = argparse.ArgumentParser(prog="thermogeom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", parents=[common], help="tabulate thermal geometry over a beta grid")
    p.add_argument("--model", required=True)
    p.add_argument("--beta-min", type=float, required=True)
    p.add_argument("--beta-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bounds", parents=[common], help="variance-bound ladder at one beta")
    p.add_argument("--model", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n-max", type=int)
    p.add_argument("--grid", type=_float_list, help="comma-separated betas for a grid-unbiased estimator")
    p.add_argument("--local-order", type=int, default=1)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("ising-check", parents=[common], help="compare Ising curvature corrections")
    p.add_argument("--N", type=int, nargs="+", required=True)
    p.add_argument("--J", type=float, default=1.0)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--boundary", choices=("free", "periodic", "bonds"), required=True)
    p.set_defaults(func=cmd_ising_check)

    p = sub.add_parser("sample", parents=[common], help="sample configurations from a thermal state")
    p.add_argument("--model", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("quantum", parents=[common], help="Schrodinger flow on a random commuting pair")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_quantum)
    return parser


def _validate(parser, args):
    if args.command == "scan":
        if not args.beta_min < args.beta_max:
            parser.error("--beta-min must be less than --beta-max")
        if args.steps < 2:
            parser.error("--steps must be at least 2")
    elif args.command == "sample" and args.count < 1:
        parser.error("--count must be at least 1")
    elif args.command == "quantum":
        if args.dim < 2 or args.dim % 2:
            parser.error("--dim must be a positive even integer")
        if args.steps < 2:
            parser.error("--steps must be at least 2")
        if args.t_max < 0:
            parser.error("--t-max must be nonnegative")
    elif args.command == "bounds" and args.local_order < 0:
        parser.error("--local-order must be nonnegative")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        text = args.func(args)
    except (OSError, SchemaError, UsageError) as exc:
        print(f"thermogeom {args.command}: {exc}", file=sys.stderr)
        return 2
    except (NumericalFailure, *NUMERICAL_ERRORS) as exc:
        print(f"thermogeom {args.command}: numerical failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"thermogeom {args.command}: {exc}", file=sys.stderr)
        return 1
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"thermogeom {args.command}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
