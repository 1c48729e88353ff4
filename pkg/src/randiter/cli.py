"""Command-line interface: generate problems, run solvers, compare methods.

Commands:
    randiter generate {consistent,inconsistent,underdetermined} N P ...
    randiter solve PROBLEM_DIR --method rk ...
    randiter compare PROBLEM_DIR --method rk --method rcd ...

Exit codes: 0 success, 2 usage error, 3 non-convergence under a
consistent regime, 4 I/O error. Diagnostics go to stderr (controlled by
RANDITER_LOG={off,info,debug}); data output never does.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import io, kernel, oracle, ridge, solvers
from .errors import RanditerError

log = logging.getLogger("randiter")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_IO = 4

METHODS = ("rk", "rcd", "rk-ridge", "rcd-ridge", "rk-krr")


class UsageError(Exception):
    pass


def _setup_logging() -> None:
    level = os.environ.get("RANDITER_LOG", "off").lower()
    if level == "off":
        logging.disable(logging.CRITICAL)
        return
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if level == "debug" else logging.INFO,
        format="randiter: %(message)s",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="randiter")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a problem instance")
    gen.add_argument("regime", choices=["consistent", "inconsistent", "underdetermined"])
    gen.add_argument("n", type=int)
    gen.add_argument("p", type=int)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--noise", type=float, default=oracle.NOISE_SCALE_DEFAULT)
    gen.add_argument("--out", required=True)

    def add_run_flags(p):
        p.add_argument("--iters", type=int, default=10000)
        p.add_argument("--tol", type=float, default=1e-12)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--lambda", dest="lam", type=float, default=None)
        p.add_argument("--kernel", choices=["linear", "gaussian", "poly"], default=None)
        p.add_argument("--gamma", type=float, default=1.0)
        p.add_argument("--degree", type=int, default=2)
        p.add_argument("--offset", type=float, default=0.0)
        p.add_argument("--checkpoint-every", type=int, default=None)
        p.add_argument("--trials", type=int, default=1)
        p.add_argument("--beta0", default=None, help="vector file; default zero")
        p.add_argument("--out", required=True)

    slv = sub.add_parser("solve", help="run one solver, write a trace CSV")
    slv.add_argument("problem_dir")
    slv.add_argument("--method", choices=METHODS, required=True)
    add_run_flags(slv)

    cmp_ = sub.add_parser("compare", help="run several methods, write a summary CSV")
    cmp_.add_argument("problem_dir")
    cmp_.add_argument("--method", choices=METHODS, action="append", required=True)
    add_run_flags(cmp_)
    return parser


def cmd_generate(args) -> int:
    if args.regime == "underdetermined":
        if args.p <= args.n:
            raise UsageError("underdetermined regime requires p > n")
    elif args.n <= args.p:
        raise UsageError(f"{args.regime} regime requires n > p")

    if args.regime == "consistent":
        inst = oracle.gen_consistent(args.n, args.p, args.seed)
    elif args.regime == "inconsistent":
        inst = oracle.gen_inconsistent(args.n, args.p, args.noise, args.seed)
    else:
        inst = oracle.gen_underdetermined(args.n, args.p, args.seed)

    os.makedirs(args.out, exist_ok=True)
    paths = io.problem_paths(args.out)
    io.write_matrix(paths["X"], inst.problem.X)
    io.write_vector(paths["y"], inst.problem.y)
    io.write_vector(paths["reference"], inst.reference)
    meta = {
        "regime": args.regime,
        "n": args.n,
        "p": args.p,
        "seed": args.seed,
    }
    if inst.z is not None:
        meta["noise_scale"] = args.noise
        meta["norm_z"] = float(np.linalg.norm(inst.z))
    io.write_meta(paths["meta"], meta)
    log.info("wrote %s instance to %s", args.regime, args.out)
    return EXIT_OK


def _load_problem(problem_dir):
    paths = io.problem_paths(problem_dir)
    X = io.read_matrix(paths["X"])
    y = io.read_vector(paths["y"])
    reference = io.read_vector(paths["reference"]) if os.path.exists(paths["reference"]) else None
    meta = io.read_meta(paths["meta"]) if os.path.exists(paths["meta"]) else {}
    return X, y, reference, meta


def _regime_from_meta(meta) -> solvers.Regime:
    name = meta.get("regime", "unknown")
    for regime in solvers.Regime:
        if regime.value == name:
            return regime
    return solvers.Regime.UNKNOWN


def _kernel_spec(args) -> kernel.KernelSpec:
    if args.kernel is None:
        raise UsageError("rk-krr requires --kernel")
    family = {"linear": "linear", "gaussian": "gaussian", "poly": "polynomial"}[args.kernel]
    return kernel.KernelSpec(family, gamma=args.gamma, degree=args.degree, offset=args.offset)


def _run_one(method, X, y, reference, regime, args, seed):
    """One solver run; returns (trace, theoretical_rate). Oracle
    quantities (targets and rates) are computed here, outside the
    solver hot path."""
    config = solvers.RunConfig(
        max_iters=args.iters,
        tol=args.tol,
        seed=seed,
        checkpoint_every=args.checkpoint_every,
        beta0=io.read_vector(args.beta0) if args.beta0 else None,
    )
    if method in ("rk", "rcd"):
        if reference is None:
            raise UsageError("rk/rcd need a reference.vec in the problem directory")
        rate = oracle.theoretical_rate(
            oracle.gram(X), positive_only=regime == solvers.Regime.UNDERDETERMINED
        )
        trace = solvers.run(
            solvers.Method.RK if method == "rk" else solvers.Method.RCD,
            solvers.Problem(X, y, regime),
            config,
            reference,
            rate,
        )
        return trace, rate
    if args.lam is None or not args.lam > 0.0:
        raise UsageError(f"{method} requires --lambda > 0")
    lam = args.lam
    if method == "rk-ridge":
        beta_rr = oracle.ridge_solution(X, y, lam)
        alpha_star = oracle.ridge_alpha_star(X, y, lam)
        M = oracle.outer_gram(X) + lam * np.eye(X.shape[0])
        rate = oracle.theoretical_rate(M)
        return ridge.rk_ridge_run(X, y, lam, config, beta_rr, alpha_star, rate), rate
    if method == "rcd-ridge":
        beta_rr = oracle.ridge_solution(X, y, lam)
        M = oracle.gram(X) + lam * np.eye(X.shape[1])
        rate = oracle.theoretical_rate(M)
        return ridge.rcd_ridge_run(X, y, lam, config, beta_rr, rate), rate
    # rk-krr: rows of X are the data points
    spec = _kernel_spec(args)
    alpha_star = oracle.krr_alpha_star(X, y, spec, lam)
    M = oracle.gram_matrix(spec, X) + lam * np.eye(X.shape[0])
    rate = oracle.theoretical_rate(M)
    return kernel.krr_run(
        X, y, spec, lam, config, alpha_star, rate, energy_matrix=M
    ), rate


def _mean_trace(traces) -> solvers.ConvergenceTrace:
    """Entrywise mean over the checkpoint prefix common to all trials."""
    length = min(len(t.records) for t in traces)
    mean = solvers.ConvergenceTrace()
    for k in range(length):
        recs = [t.records[k] for t in traces]
        mean.append(
            solvers.TraceRecord(
                recs[0].iter,
                float(np.mean([r.err_sq for r in recs])),
                float(np.mean([r.energy_err_sq for r in recs])),
                float(np.mean([r.residual_sq for r in recs])),
                float(np.mean([r.bound for r in recs])),
            )
        )
    return mean


def cmd_solve(args) -> int:
    X, y, reference, meta = _load_problem(args.problem_dir)
    regime = _regime_from_meta(meta)
    traces = [
        _run_one(args.method, X, y, reference, regime, args, args.seed + trial)[0]
        for trial in range(max(args.trials, 1))
    ]
    io.write_trace_csv(args.out, traces[0])
    if len(traces) > 1:
        io.write_trace_csv(args.out + ".mean.csv", _mean_trace(traces))
    log.info("solve %s: final err_sq=%.3e", args.method, traces[0].final().err_sq)

    consistent = regime in (solvers.Regime.CONSISTENT_UNIQUE, solvers.Regime.UNDERDETERMINED)
    if consistent and traces[0].final().residual_sq > args.tol * args.tol:
        log.info("did not converge within %d iterations", args.iters)
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _contraction_per_iter(trace, natural: str) -> float:
    """Empirical per-iteration contraction fitted between the first and
    last checkpoints with positive error."""
    recs = [r for r in trace.records if getattr(r, natural) > 0.0]
    if len(recs) < 2 or recs[-1].iter == recs[0].iter:
        return 0.0
    ratio = getattr(recs[-1], natural) / getattr(recs[0], natural)
    return ratio ** (1.0 / (recs[-1].iter - recs[0].iter))


def cmd_compare(args) -> int:
    X, y, reference, meta = _load_problem(args.problem_dir)
    regime = _regime_from_meta(meta)
    rows = []
    for method in args.method:
        results = [
            _run_one(method, X, y, reference, regime, args, args.seed + trial)
            for trial in range(max(args.trials, 1))
        ]
        traces = [trace for trace, _ in results]
        rate = results[0][1]
        mean = _mean_trace(traces) if len(traces) > 1 else traces[0]
        natural = "err_sq" if method == "rk" else "energy_err_sq"
        final = mean.final()
        tol_sq = args.tol * args.tol
        to_tol = next((r.iter for r in mean.records if getattr(r, natural) <= tol_sq), -1)
        rows.append(
            (
                method,
                len(traces),
                to_tol,
                final.err_sq,
                final.energy_err_sq,
                final.residual_sq,
                rate,
                _contraction_per_iter(mean, natural),
            )
        )
    with open(args.out, "w", newline="\n") as f:
        f.write(
            "method,trials,iters_to_tol,final_err_sq,final_energy_err_sq,"
            "final_residual_sq,theoretical_rate,contraction_per_iter\n"
        )
        for row in rows:
            f.write(
                f"{row[0]},{row[1]},{row[2]},{io.fmt(row[3])},{io.fmt(row[4])},"
                f"{io.fmt(row[5])},{io.fmt(row[6])},{io.fmt(row[7])}\n"
            )
    return EXIT_OK


def main(argv=None) -> int:
    _setup_logging()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "solve":
            return cmd_solve(args)
        return cmd_compare(args)
    except UsageError as exc:
        print(f"randiter: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, IOError) as exc:
        print(f"randiter: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (RanditerError, ValueError) as exc:
        print(f"randiter: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
