"""Command-line interface: one subcommand per capability, stable text
formats (plain lines, DOT, CSV) so outputs diff cleanly under a fixed
seed."""

from __future__ import annotations

import argparse
import itertools
import sys
from fractions import Fraction
from pathlib import Path

from .errors import DegeneracyError, TlnfpError
from .exact import sign_str
from .chirotope import basis_name, chirotope_of, cocircuit
from .fixed_points import fixed_point_detail, fp_chirotope, singleton_rule, support_label
from .mutations import gp_check, is_mutation, pinned_bases
from .network import ParamPath, get_param, graph_of, load_network, parse_digraph, parse_param
from .regimes import atlas, bifurcation_graph, dot_graph, mutation_graph
from .sweeps import sweep
from . import dynamics


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="tlnfp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fp", help="fixed-point supports of a network")
    p.add_argument("network", type=Path)
    p.add_argument("--detail", action="store_true", help="include exact coordinates")

    p = sub.add_parser("graph", help="directed graph of a network")
    p.add_argument("network", type=Path)

    p = sub.add_parser("chirotope", help="all basis signs of the arrangement")
    p.add_argument("network", type=Path)

    p = sub.add_parser("cocircuits", help="vertex sign vectors per support")
    p.add_argument("network", type=Path)

    p = sub.add_parser("gp-check", help="verify all three-term exchange relations")
    p.add_argument("network", type=Path)

    p = sub.add_parser("mutations", help="basis signs, mutation status, pins")
    p.add_argument("network", type=Path)

    p = sub.add_parser("explore", help="mutation and bifurcation graphs of a digraph")
    p.add_argument("--graph", required=True, help="edge list like '1>2,2>1,3>2'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-nodes", type=int, default=64)
    p.add_argument("--budget", type=int, default=2000, help="search evaluations per neighbor")
    p.add_argument("--across-graphs", action="store_true",
                   help="also cross graph-changing walls (class pins only)")
    p.add_argument("--depth", type=int, default=None, help="limit exploration depth")
    p.add_argument("--out", type=Path, default=None, help="directory for DOT files")

    p = sub.add_parser("atlas", help="regime atlas over all 3-node digraph classes")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-explore", action="store_true", help="skip bifurcation graphs")
    p.add_argument("--out", type=Path, default=None, help="directory for reports")

    p = sub.add_parser("sweep", help="support bifurcations along one parameter")
    p.add_argument("network", type=Path)
    p.add_argument("--param", required=True, help="parameter name like W31 or b2")
    p.add_argument("--to", required=True, help="sweep target value (exact rational)")
    p.add_argument("--tol", default="1e-4", help="event interval width")
    p.add_argument("--out", type=Path, default=None, help="CSV output path")

    p = sub.add_parser("simulate", help="integrate the nonlinear dynamics")
    p.add_argument("network", type=Path)
    p.add_argument("--x0", required=True, help="comma-separated start state")
    p.add_argument("--t", type=float, required=True, help="end time")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--out", type=Path, default=None, help="CSV output path")
    return parser


def _cmd_fp(args) -> int:
    net = load_network(args.network)
    family = fp_chirotope(net)
    for support in family:
        line = support_label(support)
        if args.detail:
            detail = fixed_point_detail(net, support)
            coords = ", ".join(
                f"x{i + 1}={x} ({float(x):.6g})" for i, x in enumerate(detail.coordinates)
            )
            line += f"  [{coords}]"
        print(line)
    return 0


def _cmd_graph(args) -> int:
    net = load_network(args.network)
    g = graph_of(net)
    for i, j in g.sorted_edges():
        print(f"{i + 1}>{j + 1}")
    sinks = sorted(singleton_rule(net))
    print("sinks: " + (",".join(str(i + 1) for i in sinks) or "none"))
    return 0


def _cmd_chirotope(args) -> int:
    net = load_network(args.network)
    chi = chirotope_of(net)
    for subset in chi.bases():
        print(f"{basis_name(subset, net.n)} -> {sign_str(chi.basis_sign(subset))}")
    return 0


def _cmd_cocircuits(args) -> int:
    net = load_network(args.network)
    chi = chirotope_of(net)
    for size in range(net.n + 1):
        for members in itertools.combinations(range(net.n), size):
            label = support_label(members) if members else "(empty)"
            try:
                c = cocircuit(chi, members)
                print(f"{label}: {c.sign_string()}")
            except DegeneracyError as exc:
                print(f"{label}: unavailable ({exc})")
    return 0


def _cmd_gp_check(args) -> int:
    net = load_network(args.network)
    report = gp_check(net)
    print(f"residual {report.max_abs_residual} over {report.relations} relations")
    return 0 if report.ok else 2


def _cmd_mutations(args) -> int:
    net = load_network(args.network)
    chi = chirotope_of(net)
    pins = {}
    if net.n == 3:
        pins = pinned_bases(graph_of(net))
    for subset in chi.bases():
        s = chi.basis_sign(subset)
        mark = "yes" if is_mutation(chi, subset) else "no"
        pin = f"pinned({sign_str(pins[subset])})" if subset in pins else "free"
        print(f"{basis_name(subset, net.n):<18} sign={sign_str(s)} mutation={mark:<3} {pin}")
    return 0


def _cmd_explore(args) -> int:
    g = parse_digraph(args.graph)
    mg = mutation_graph(
        g,
        seed=args.seed,
        respect_graph=not args.across_graphs,
        max_nodes=args.max_nodes,
        neighbor_budget=args.budget,
        max_depth=args.depth,
    )
    bg = bifurcation_graph(mg)
    mut_dot = dot_graph(mg, "mutations")
    bif_dot = dot_graph(bg, "bifurcations")
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "mutation_graph.dot").write_text(mut_dot)
        (args.out / "bifurcation_graph.dot").write_text(bif_dot)
        print(f"wrote {args.out}/mutation_graph.dot and bifurcation_graph.dot")
    else:
        print(mut_dot)
        print(bif_dot)
    realized = sum(1 for n in mg.nodes.values() if n.realized)
    print(f"# mutation graph: {realized} realized nodes, "
          f"{len(mg.nodes) - realized} unknown, {len(mg.edges)} edges")
    print(f"# bifurcation graph: {len(bg.nodes)} regimes")
    return 0


def _cmd_atlas(args) -> int:
    report = atlas(
        samples=args.samples, seed=args.seed, explore=not args.no_explore, jobs=args.jobs
    )
    text = report.format()
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "summary.txt").write_text(text)
        for idx, cls in enumerate(report.classes, 1):
            (args.out / f"class_{idx:02d}.txt").write_text(cls.format() + "\n")
            if cls.bifurcations is not None:
                (args.out / f"class_{idx:02d}.dot").write_text(
                    dot_graph(cls.bifurcations, f"class_{idx:02d}")
                )
        print(f"wrote atlas reports to {args.out}")
    print(text)
    return 0


def _cmd_sweep(args) -> int:
    net = load_network(args.network)
    param = parse_param(args.param, net.n)
    path = ParamPath(
        base=net,
        param=param,
        start=get_param(net, param),
        stop=Fraction(args.to),
    )
    events = sweep(path, tol=Fraction(args.tol))
    lines = ["param,interval_lo,interval_hi,before,after"]
    for e in events:
        lines.append(
            f"{args.param},{e.lo},{e.hi},{e.before.format()},{e.after.format()}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        args.out.write_text(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def _cmd_simulate(args) -> int:
    net = load_network(args.network)
    x0 = [float(v) for v in args.x0.split(",")]
    if len(x0) != net.n:
        raise ValueError(f"need {net.n} start coordinates, got {len(x0)}")
    traj = dynamics.integrate(net, x0, args.t, args.dt)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            traj.write_csv(fh)
        print(f"wrote {args.out}")
    else:
        traj.write_csv(sys.stdout)
    return 0


_COMMANDS = {
    "fp": _cmd_fp,
    "graph": _cmd_graph,
    "chirotope": _cmd_chirotope,
    "cocircuits": _cmd_cocircuits,
    "gp-check": _cmd_gp_check,
    "mutations": _cmd_mutations,
    "explore": _cmd_explore,
    "atlas": _cmd_atlas,
    "sweep": _cmd_sweep,
    "simulate": _cmd_simulate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DegeneracyError as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return 2
    except (TlnfpError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
