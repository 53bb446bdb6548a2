"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 a mathematical claim failed,
3 resource or budget limit.
"""
from __future__ import annotations

import argparse
import math
import sys
from typing import Iterable

import numpy as np

from . import config
from . import cube as cc
from . import exit_time as et
from . import inequalities as iq
from . import sampling
from . import spectral as sp
from . import suite
from .literals import LiteralError, parse_function, parse_set
from .report import dumps, to_csv, to_pretty
from .search import BudgetExceededError, SearchTask, search

EXIT_OK, EXIT_USAGE, EXIT_CLAIM, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _threads(text: str) -> int:
    if text == "auto":
        return config.default_threads()
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("threads must be positive or 'auto'")
    return value


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--tol", type=float, default=None, help="pass tolerance (check default if unset)")
    g.add_argument("--threads", type=_threads, default=None,
                   help="worker count or 'auto' (default: $CUBELAB_THREADS)")
    g.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    g.add_argument("--budget", type=int, default=None, help="exhaustive search budget")
    return p


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout
        self.rows: list[dict] = []

    def emit(self, record: dict):
        if self.fmt == "json":
            print(dumps(record), file=self.stream)
        elif self.fmt == "pretty":
            print(to_pretty(record), file=self.stream)
            print(file=self.stream)
        else:
            self.rows.append(record)

    def close(self):
        if self.fmt == "csv" and self.rows:
            self.stream.write(to_csv(self.rows))


# -- commands ---------------------------------------------------------------------

def cmd_exit_time(args, out: Output) -> int:
    A = parse_set(args.set, args.n)
    record = {"n": args.n, "set": args.set, "size": A.size}
    if A.is_full():
        record.update(exact=math.inf, bound=math.inf, equality=True, survival=[],
                      error="full cube: the walk never exits")
        out.emit(record)
        return EXIT_OK
    steps = args.survival if args.survival == "auto" else int(args.survival)
    rep = et.mean_exit_exact(A, survival_steps=steps)
    record.update(exact=rep.exact, bound=rep.bound, equality=rep.equality,
                  survival=rep.survival)
    if args.mc_trials:
        mc = et.mean_exit_mc(A, args.mc_trials, args.seed, threads=args.threads)
        record["mc"] = {"estimate": mc.estimate, "stderr": mc.stderr,
                        "trials": mc.trials, "seed": mc.seed}
    else:
        record["mc"] = None
    out.emit(record)
    return EXIT_OK if rep.exact <= rep.bound + et.EQUALITY_TOL else EXIT_CLAIM


def cmd_boundary(args, out: Output) -> int:
    A = parse_set(args.set, args.n)
    record = {"n": args.n, "set": args.set, "size": A.size, "boundary": cc.edge_boundary(A)}
    if A.is_empty():
        out.emit(record)
        return EXIT_OK
    chk = iq.set_isoperimetry_check(A, _tol(args, 1e-9))
    record.update(isoperimetric_lower_bound=chk.rhs, margin=chk.margin, passed=chk.passed)
    out.emit(record)
    return EXIT_OK if chk.passed else EXIT_CLAIM


def cmd_dirichlet(args, out: Output) -> int:
    g = parse_function(args.function, args.n)
    out.emit({"n": args.n, "function": args.function, "dirichlet": cc.dirichlet_form(g),
              "support_size": g.support().size, "abs_sum": g.abs_sum(),
              "downward_monotone": cc.is_downward_monotone(g)})
    return EXIT_OK


def cmd_spectrum(args, out: Output) -> int:
    A = parse_set(args.set, args.n)
    system = sp.build_system(A)
    sd = system.spectrum(args.method)
    record = {"n": args.n, "set": args.set, "size": A.size,
              "eigenvalues": [g[0] for g in sd.grouped()],
              "multiplicities": [g[2] for g in sd.grouped()],
              "weights": [g[1] for g in sd.grouped()],
              "boundary": system.boundary_form()}
    code = EXIT_OK
    if A.is_full():
        record.update(q=math.inf, bound=math.inf, equality_margin=math.inf)
    else:
        chk = sp.verify_eigen_inequality(sd, A)
        record.update(q=sp.solve_unit(system).q, spectral_sum=chk.lhs, bound=chk.bound,
                      equality_margin=chk.margin, passed=chk.passed)
        code = EXIT_OK if chk.passed else EXIT_CLAIM
    out.emit(record)
    return code


def cmd_walks(args, out: Output) -> int:
    A = parse_set(args.set, args.n)
    for k in range(args.k + 1) if args.all else [args.k]:
        w = et.walk_count(A, k)
        out.emit({"n": args.n, "set": args.set, "size": A.size, "k": k, "count": w.count})
    return EXIT_OK


def cmd_shift(args, out: Output) -> int:
    g = parse_function(args.function, args.n)
    h = cc.monotonize(g) if args.direction is None else cc.shift_direction(g, args.direction)
    before, after = cc.dirichlet_form(g), cc.dirichlet_form(h)
    out.emit({"n": args.n, "direction": "all" if args.direction is None else args.direction,
              "values": h.values, "dirichlet_before": before, "dirichlet_after": after,
              "downward_monotone": cc.is_downward_monotone(h)})
    return EXIT_OK if after <= before + 1e-12 else EXIT_CLAIM


def _tol(args, default=iq.DEFAULT_TOL):
    return default if args.tol is None else args.tol


def _verify_instances(args) -> Iterable[dict]:
    rng = np.random.default_rng(args.seed)
    check = args.check
    tol = _tol(args)
    n = args.n
    if check in ("isop", "weak-ls", "weak-ls-ln", "log-sobolev"):
        for t in range(args.trials):
            A = sampling.random_set(n, rng)
            if check == "isop":
                g = sampling.random_function_on(A, rng)
                if args.monotone:
                    g = cc.monotonize(g)
                    A = g.support()
                yield iq.verify_functional_isoperimetry(g, A, tol).to_dict()
            elif check == "weak-ls":
                # the base-2 form is the set inequality, so it is run on indicators
                yield iq.baseline_weak_ls(cc.CubeFunction.indicator(A), tol).to_dict()
            elif check == "weak-ls-ln":
                yield iq.baseline_weak_ls_ln(sampling.random_function(n, rng), tol).to_dict()
            else:
                yield iq.baseline_log_sobolev(sampling.random_function(n, rng), tol).to_dict()
    elif check == "lemma32":
        for _ in range(args.trials):
            values, weights = sampling.random_distribution(rng, args.length)
            yield iq.lemma32_check(values, weights, tol).to_dict()
    elif check == "f-identity":
        for c in iq.f_identity_grid(n, args.grid, _tol(args, 1e-12)):
            yield c.to_dict()
    elif check in ("induction", "reduced"):
        for _ in range(args.trials):
            t0, t1, s0, s1 = sampling.random_step_params(n, rng)
            if check == "reduced":
                yield iq.reduced_check(t0, t1, s0, s1, n, tol).to_dict()
            else:
                alpha = rng.uniform(0.0, 2.0) * iq.optimal_alpha(t0, t1, s0, s1)
                inst = iq.InductionInstance.from_alpha(n, t0, t1, s0, s1, alpha)
                yield iq.induction_step_check(inst, tol).to_dict()
    elif check in ("quadratic-r", "delta"):
        for m in range(2, n + 1):
            for x, y in iq.dyadic_pairs(m):
                if check == "delta":
                    yield iq.delta_inequality_check(x, y, m, tol).to_dict()
                else:
                    for c in iq.discriminant_check(x, y, m, d_tol=tol):
                        yield c.to_dict()
    elif check == "eigen":
        for _ in range(args.trials):
            A = sampling.random_set(n, rng)
            sd = sp.build_system(A).spectrum()
            chk = sp.verify_eigen_inequality(sd, A)
            yield {"check": "eigen", "inputs": {"n": n, "size": A.size}, "lhs": chk.lhs,
                   "rhs": chk.bound, "margin": chk.margin, "passed": chk.passed, "tol": 1e-9}
    elif check == "degree":
        A = parse_set(args.set, n) if args.set else sampling.adjacent_swap(n, max(1, n // 2), rng)
        eps_prime = sp.measured_eps_prime(A) if args.eps_prime is None else args.eps_prime
        r = sp.degree_concentration(sp.build_system(A), eps_prime, args.delta)
        yield {"check": "degree", "inputs": {"n": n, "size": A.size, "eps_prime": eps_prime,
                                             "delta": args.delta},
               "applicable": r.applicable, "lhs": r.probability, "rhs": r.budget,
               "passed": r.passed, "mean": r.mean,
               "window": list(r.window), "tol": 1e-12}
    elif check == "coefficients":
        yield iq.ae_c2_check(args.beta, _tol(args, 1e-12)).to_dict()
    elif check == "beta-scan":
        rep = iq.beta_lemma_scan(args.lemma, args.points, _tol(args, 1e-12),
                                 workers=args.threads or 1)
        yield rep.to_dict()
    else:
        raise UsageError(f"unknown check {check!r}; available: {', '.join(VERIFY_CHECKS)}")


VERIFY_CHECKS = ("isop", "weak-ls", "weak-ls-ln", "log-sobolev", "lemma32", "f-identity",
                 "induction", "reduced", "quadratic-r", "delta", "eigen", "degree",
                 "coefficients", "beta-scan")


def cmd_verify(args, out: Output) -> int:
    if args.check not in VERIFY_CHECKS:
        raise UsageError(f"unknown check {args.check!r}; available: {', '.join(VERIFY_CHECKS)}")
    passed = failed = 0
    for record in _verify_instances(args):
        out.emit(record)
        if record["passed"]:
            passed += 1
        else:
            failed += 1
    out.emit({"summary": args.check, "passed": passed, "failed": failed})
    return EXIT_OK if failed == 0 else EXIT_CLAIM


def cmd_scan_beta(args, out: Output) -> int:
    rep = iq.beta_lemma_scan(args.lemma, args.points, _tol(args, 1e-12),
                             workers=args.threads or 1)
    out.emit(rep.to_dict())
    if args.csv:
        b = iq.beta_grid(args.csv_points)
        curve = [{"beta": float(x), "afbe_minus_2cd": float(iq.afbe_minus_2cd(x)),
                  "bf_minus_d2": float(iq.bf_minus_d2(x)),
                  "reduced_afbe": float(iq.reduced_afbe(x)),
                  "reduced_bfd2": float(iq.reduced_bfd2(x))} for x in b]
        with open(args.csv, "w") as fh:
            fh.write(to_csv(curve))
    return EXIT_OK if rep.passed and rep.min >= -rep.tol else EXIT_CLAIM


def cmd_search(args, out: Output) -> int:
    task = SearchTask(n=args.n, size=args.size, objective=args.objective, k=args.k,
                      mode=args.mode, trials=args.trials, restarts=args.restarts,
                      seed=args.seed, budget=args.budget)
    res = search(task)
    record = {"n": args.n, "size": args.size, "objective": args.objective, "mode": args.mode}
    record.update(res.to_dict())
    out.emit(record)
    if res.bound is not None and res.best_value > res.bound + 1e-9:
        return EXIT_CLAIM
    return EXIT_OK


def cmd_paper_suite(args, out: Output) -> int:
    names = [c.upper() for c in args.criterion] if args.criterion else list(suite.CRITERIA)
    for name in names:
        if name not in suite.CRITERIA:
            raise UsageError(f"unknown criterion {name!r}; available: {', '.join(suite.CRITERIA)}")
    results = []
    for name in names:
        r = suite.run_criterion(name, quick=args.quick)
        results.append(r)
        out.emit(r.to_dict())
    failed = [r.name for r in results if not r.passed]
    out.emit({"summary": "paper-suite", "quick": args.quick, "passed": len(results) - len(failed),
              "failed": failed, "seconds": round(sum(r.seconds for r in results), 3)})
    return EXIT_OK if not failed else EXIT_CLAIM


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="cubelab", description="Edge isoperimetry and exit times on {0,1}^n")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("exit-time", cmd_exit_time, "exact (and optional Monte Carlo) mean exit time")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--survival", default="auto", help="survival curve length K, or 'auto'")
    p.add_argument("--mc-trials", type=int, default=10000, help="0 disables the simulation")

    p = add("boundary", cmd_boundary, "edge boundary of a set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--set", required=True)

    p = add("dirichlet", cmd_dirichlet, "Dirichlet form of a function")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--function", required=True)

    p = add("spectrum", cmd_spectrum, "spectrum of the induced adjacency matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--method", choices=("auto", "jacobi", "lapack"), default="auto")

    p = add("walks", cmd_walks, "number of length-k walks inside a set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--all", action="store_true", help="report every length 0..k")

    p = add("shift", cmd_shift, "downward shift in one direction, or full monotonisation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--function", required=True)
    p.add_argument("--direction", type=int, default=None, help="omit to shift in every direction")

    p = add("verify", cmd_verify, "run one family of inequality checks")
    p.add_argument("check", help=", ".join(VERIFY_CHECKS))
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--grid", type=int, default=100)
    p.add_argument("--length", type=int, default=16)
    p.add_argument("--monotone", action="store_true", help="isop: monotonise g first")
    p.add_argument("--set", default=None)
    p.add_argument("--eps-prime", type=float, default=None)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--lemma", default="afbe-2cd")
    p.add_argument("--points", type=int, default=10**6)

    p = add("scan-beta", cmd_scan_beta, "grid scan of one beta lemma")
    p.add_argument("--lemma", default="afbe-2cd", help="afbe-2cd or bf-d2")
    p.add_argument("--points", type=int, default=10**6)
    p.add_argument("--csv", default=None, help="write the scan curves to this CSV file")
    p.add_argument("--csv-points", type=int, default=1000)

    p = add("search", cmd_search, "search for sets maximising an exit objective")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--objective", choices=("mean_exit_time", "k_step_survival"),
                   default="mean_exit_time")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--mode", choices=("exhaustive", "random", "greedy_local"), default="exhaustive")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--restarts", type=int, default=10)

    p = add("paper-suite", cmd_paper_suite, "run the full acceptance battery")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--criterion", action="append", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.format)
    try:
        code = args.func(args, out)
    except (LiteralError, UsageError) as exc:
        print(f"cubelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"cubelab: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"cubelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        out.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
