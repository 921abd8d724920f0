"""Command-line front end: every subcommand reads a scenario file and writes CSV tables.

Exit status is 0 on success, 2 when an input fails validation and 3 when a
numerical routine cannot reach its tolerance. Tables go to ``--out``, or to the
directory named by COSTLY_ATTENTION_OUT, or to ./out.
"""
import argparse
import csv
import logging
import os
import sys

import numpy as np

from . import config
from .errors import NumericError, PreconditionError, ValidationError
from .mechanism import TypeGrid, assign_greedy, check_equivalence, check_ic
from .oracle import GridPrior, brute_force_sender_opt, grid_censorship_distribution, random_feasible_policy, simulate_game
from .receiver import extensive_margin
from .policy import from_distribution, full_info_policy, null_info_policy, upper_censorship
from .sender import (
    censorship_payoff_derivative,
    comparative_statics_cost,
    direct_payoff,
    improve_bi_censorship,
    optimize_upper_censorship,
    payoff_report,
    reduced_payoff,
    search_bi_censorship,
    symmetric_benchmark,
)

OUT_ENV = "COSTLY_ATTENTION_OUT"
EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3

log = logging.getLogger("costly_attention")


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.15g}"
    return str(v)


def write_table(out_dir, name, scn, units, columns, rows):
    """CSV with a '#' line naming units and the scenario hash, then a column header."""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# scenario {scn.digest}; units: {units}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    log.info("wrote %s", path)
    return path


def _margin_cols(m):
    return (float("nan"), float("nan")) if m.empty else (m.c_lo, m.c_hi)


def _policy(scn, args):
    return config.load_policy(scn.prior, args.policy)


# ------------------------------------------------------------------ subcommands


def cmd_validate(scn, args):
    scn.prior.validate()
    scn.population.validate()
    print(f"scenario {scn.digest}: ok")
    if args.policy:
        pol = _policy(scn, args)
        rep = pol.audit()
        for kind, x, amount in rep.violations:
            print(f"policy fails {kind} at x={x:.12g} (by {amount:.3g})")
        if not rep.ok:
            return EXIT_INVALID
        print(f"policy {args.policy}: feasible and convex")
    return EXIT_OK


def cmd_solve(scn, args):
    sol = optimize_upper_censorship(scn, trace_points=args.trace)
    log.info("threshold %.12g via %s", sol.theta_star, sol.method)
    weights = dict(zip(scn.population.lambdas.tolist(), scn.population.weights.tolist()))
    rows = [(lam, weights[lam], sol.theta_star, sol.payoff, sol.reduced, *_margin_cols(m)) for lam, m in sol.margins]
    write_table(args.out, "solve.csv", scn, "theta and cutoffs in state units on [0,1]; payoffs in sender utility",
                ["lambda", "weight", "theta", "payoff", "reduced", "c_lo", "c_hi"], rows)
    if sol.derivative_trace:
        write_table(args.out, "solve_trace.csv", scn, "theta in state units; dW in utility per unit theta",
                    ["theta", "dW"], sol.derivative_trace)
    print(f"theta*={sol.theta_star:.12g} payoff={sol.payoff:.12g}")
    return EXIT_OK


def cmd_evaluate(scn, args):
    rep = payoff_report(scn, _policy(scn, args))
    rows = [(r["lambda"], r["weight"], r["reduced"], r["direct"], *_margin_cols(r["margin"])) for r in rep.per_lambda]
    rows.append(("all", 1.0, rep.reduced_W, rep.direct_W, float("nan"), float("nan")))
    write_table(args.out, "evaluate.csv", scn, "payoffs in sender utility; cutoffs in state units",
                ["lambda", "weight", "reduced", "direct", "c_lo", "c_hi"], rows)
    print(f"reduced={rep.reduced_W:.12g} direct={rep.direct_W:.12g} gap={rep.gap:.12g}")
    return EXIT_OK


def cmd_curves(scn, args):
    if args.policy:
        pol = _policy(scn, args)
    else:
        theta = args.theta if args.theta is not None else optimize_upper_censorship(scn).theta_star
        pol = upper_censorship(scn.prior, theta)
    full, null = full_info_policy(scn.prior), null_info_policy(scn.prior)
    cs = np.linspace(0.0, 1.0, args.points)
    net, net_full = pol.net(cs), full.net(cs)
    rows = zip(cs, pol(cs), full(cs), null(cs), net, net_full)
    write_table(args.out, "curves_net.csv", scn, "c in state units; policies and net informativeness in state units",
                ["c", "policy", "full", "null", "net", "net_full"], rows)
    use_reduced = scn.gamma == 0 and not scn.population.has_point_cutoff
    objective = reduced_payoff if use_reduced else direct_payoff
    rows = []
    for t in np.linspace(0.0, 1.0, args.points):
        cens = upper_censorship(scn.prior, t)
        dW = censorship_payoff_derivative(scn, t) if use_reduced else float("nan")
        rows.append((t, objective(scn, cens), dW))
    write_table(args.out, "curves_payoff.csv", scn,
                f"theta in state units; payoff is the {'reduced' if use_reduced else 'direct'} sender utility",
                ["theta", "payoff", "dW"], rows)
    return EXIT_OK


def cmd_statics(scn, args):
    res = comparative_statics_cost(scn, args.eps)
    rows = [(e, res.eta, res.thetas[e], res.margins[e], res.verdicts[e]) for e in res.thetas]
    write_table(args.out, "statics.csv", scn, "eps is the attention-cost scale; thresholds in state units",
                ["eps", "eta", "theta", "margin", "pushes_information"], rows)
    print(f"eta={res.eta:.12g} " + " ".join(f"theta[{e:g}]={t:.12g}" for e, t in res.thetas.items()))
    return EXIT_OK


def cmd_benchmark(scn, args):
    pop = scn.population
    zeta = args.zeta
    if zeta is None:
        points = [g for g in pop.densities if g.is_point]
        if not points:
            raise ValidationError("--zeta is required when the scenario has no point cutoff")
        zeta = points[0].zeta
    kappa = args.kappa if args.kappa is not None else float(pop.lambdas[0])
    res = symmetric_benchmark(scn.prior, zeta, kappa)
    write_table(args.out, "benchmark.csv", scn, "zeta and theta in state units; kappa in utility; payoff in sender utility",
                ["zeta", "kappa", "theta", "payoff", "binding", "attainable"],
                [(zeta, kappa, res.theta, res.payoff, res.binding, res.attainable)])
    print(f"theta={res.theta:.12g} payoff={res.payoff:.12g}")
    return EXIT_OK


def cmd_mechanism(scn, args):
    menu = config.load_menu(scn.prior, args.menu)
    lambdas = args.lambdas if args.lambdas else scn.population.lambdas.tolist()
    grid = TypeGrid.regular(args.cutoffs or scn.solver.grid_n, lambdas)
    mech = assign_greedy(menu, grid, scn.cost)
    ic = check_ic(mech, scn.cost)
    rows = [("ic", v.c, v.lam, v.index, v.detail) for v in ic]
    env = None
    if not ic:
        rep = check_equivalence(mech, scn.cost)
        env = rep.envelope
        rows += [("effort", v.c, v.lam, v.index, v.detail) for v in rep.effort_violations]
        rows += [("action", v.c, v.lam, v.index, v.detail) for v in rep.action_violations]
        xs = np.unique(np.concatenate([np.linspace(0.0, 1.0, args.points), env.kinks[env.kinks <= 1.0]]))
        write_table(args.out, "envelope.csv", scn, "x and I(x) in state units", ["x", "I"], zip(xs, env(xs)))
    write_table(args.out, "mechanism_violations.csv", scn, "c in state units; lambda is the attention-cost scale",
                ["kind", "c", "lambda", "menu_index", "detail"], rows)
    print(f"{len(rows)} violations over {grid.shape[0]}x{grid.shape[1]} types")
    return EXIT_OK if not rows else EXIT_INVALID


def cmd_improve(scn, args):
    pol = _policy(scn, args)
    res = improve_bi_censorship(scn, pol)
    rows = [("construct", res.theta1, res.x1, res.x2, res.payoff_in, res.payoff_out, *_margin_cols(res.margin_out))]
    if args.search:
        value, best, params = search_bi_censorship(scn, n=args.search)
        if best is not None:
            m = _margin_cols(extensive_margin(best, float(scn.population.lambdas[0]), scn.cost))
            rows.append(("search", *params, res.payoff_in, value, *m))
    write_table(args.out, "improve.csv", scn, "thresholds in state units; payoffs in sender utility",
                ["method", "theta1", "x1", "x2", "payoff_in", "payoff_out", "c_lo", "c_hi"], rows)
    print(f"payoff {res.payoff_in:.12g} -> {res.payoff_out:.12g}")
    return EXIT_OK


def cmd_oracle(scn, args):
    seed = scn.solver.seed if args.seed is None else args.seed
    bf = brute_force_sender_opt(scn, args.grid, args.samples, seed=seed)
    grid = GridPrior.from_prior(scn.prior, args.grid)
    children = np.random.SeedSequence(seed).spawn(args.samples)

    def candidate(name):
        kind, idx = name.split(":")
        if kind == "censor":
            return from_distribution(scn.prior, grid_censorship_distribution(grid, int(idx)))
        return random_feasible_policy(grid, children[int(idx)])

    named = {"optimum": upper_censorship(scn.prior, optimize_upper_censorship(scn).theta_star),
             "full": full_info_policy(scn.prior), "null": null_info_policy(scn.prior)}
    if args.policy:
        named["input"] = _policy(scn, args)
    rows = []
    for name in list(named) + list(bf.values):
        pol = named[name] if name in named else candidate(name)
        red = float("nan") if scn.population.has_point_cutoff else reduced_payoff(scn, pol)
        sim = se = float("nan")
        if args.sim and (name in named or name == bf.descriptor):
            res = simulate_game(scn, pol, args.sim, seed)
            sim, se = res.estimate, res.std_error
        rows.append((name, red, direct_payoff(scn, pol), sim, se))
    write_table(args.out, "oracle.csv", scn, "payoffs in sender utility",
                ["policy_id", "reduced", "direct", "simulated", "std_error"], rows)
    print(f"best brute-force candidate {bf.descriptor}: {bf.best_value:.12g}")
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser():
    p = argparse.ArgumentParser(prog="costly-attention", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log one line per stage to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.add_argument("scenario", help="scenario file (YAML or JSON)")
        sp.add_argument("--out", default=os.environ.get(OUT_ENV, "out"),
                        help=f"output directory (default: ${OUT_ENV} or ./out)")
        sp.set_defaults(func=fn)
        return sp

    sp = add("validate", cmd_validate, "check a scenario and optionally a policy file")
    sp.add_argument("--policy", help="policy file: CSV of (x, I) pairs or a YAML spec")

    sp = add("solve", cmd_solve, "optimal upper censorship with extensive margins per cost scale")
    sp.add_argument("--trace", type=int, default=None, metavar="N", help="also write dW on N thresholds")

    sp = add("evaluate", cmd_evaluate, "reduced and direct payoffs of a policy")
    sp.add_argument("--policy", required=True, help="policy file")

    sp = add("curves", cmd_curves, "net-informativeness and payoff-versus-threshold tables")
    sp.add_argument("--theta", type=float, default=None, help="censorship threshold (default: the optimum)")
    sp.add_argument("--policy", help="use this policy instead of an upper censorship")
    sp.add_argument("--points", type=int, default=201, help="rows per table (default 201)")

    sp = add("statics", cmd_statics, "optimal threshold at zero versus small attention costs")
    sp.add_argument("--eps", type=float, nargs="+", default=[0.001, 0.01], help="attention-cost scales")

    sp = add("benchmark", cmd_benchmark, "known-cutoff benchmark censorship")
    sp.add_argument("--zeta", type=float, default=None, help="common cutoff (default: the scenario's point cutoff)")
    sp.add_argument("--kappa", type=float, default=None, help="attention threshold (default: the scenario's lambda)")

    sp = add("mechanism", cmd_mechanism, "greedy menu assignment, incentive and equivalence checks")
    sp.add_argument("--menu", required=True, help="menu file listing policy specs or policy files")
    sp.add_argument("--cutoffs", type=int, default=None, help="cutoff grid size (default: solver.grid_n)")
    sp.add_argument("--lambdas", type=float, nargs="+", default=None, help="cost-scale grid (default: scenario support)")
    sp.add_argument("--points", type=int, default=1001, help="envelope table resolution")

    sp = add("improve", cmd_improve, "bi-upper censorship improving a policy under media capture")
    sp.add_argument("--policy", required=True, help="policy file")
    sp.add_argument("--search", type=int, nargs="?", const=21, default=None, metavar="N",
                    help="also grid-search (theta1, x1, x2) with N points per axis (default 21)")

    sp = add("oracle", cmd_oracle, "brute-force grid search and Monte Carlo cross-checks")
    sp.add_argument("--grid", type=int, default=21, metavar="K", help="grid prior size, at most 31")
    sp.add_argument("--samples", type=int, default=200, metavar="N", help="random feasible policies")
    sp.add_argument("--sim", type=int, default=0, metavar="n", help="simulation draws per reported policy")
    sp.add_argument("--seed", type=int, default=None, metavar="s", help="seed (default: solver.seed)")
    sp.add_argument("--policy", help="also report this policy")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        log.info("loading %s", args.scenario)
        scn = config.load_scenario(args.scenario)
        log.info("scenario %s; running %s", scn.digest, args.command)
        return args.func(scn, args)
    except (ValidationError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        for step in exc.trace:
            print(f"  {step}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
