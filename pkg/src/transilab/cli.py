"""Command line interface: generate, measure, detect, experiment, list-plans."""
from __future__ import annotations

import argparse
import csv
import sys

from . import metrics
from .clustered import HtParams, NmParams, ht_generate_with_info, nm_generate_with_info
from .detect import infomap_greedy, louvain
from .errors import FormatError, TransilabError
from .graph import (PowerLawSpec, Seed, default_degree_cutoff,
                    sample_power_law_degrees)
from .harness import (ExperimentPlan, builtin_plans, plan_from_json,
                      run_experiment)
from .io import read_edge_list, read_partition, write_edge_list, write_partition
from .lfr import LfrParams, lfr_generate, round_half_up
from .random_models import EvParams, barabasi_albert, configuration_model, evolutionary_pa

MEASURE_COLUMNS = ["n", "m", "mean_degree", "transitivity_global",
                   "transitivity_local_avg", "transitivity_literal_ratio",
                   "modularity", "mixing_coefficient", "n_communities"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transilab",
        description="Graph generators, community detection and "
                    "transitivity measurements.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a graph and write an edge list")
    g.add_argument("--model", required=True,
                   choices=["cm", "ba", "ev", "lfr-cm", "lfr-ba", "lfr-ev",
                            "nm", "ht"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--gamma", type=float, default=3.0)
    g.add_argument("--beta", type=float, default=2.0)
    g.add_argument("--mean-degree", type=float, default=15.0)
    g.add_argument("--k-max", type=int, default=None)
    g.add_argument("--mu", type=float, default=0.2)
    g.add_argument("--n-min", type=int, default=10)
    g.add_argument("--n-max", type=int, default=None)
    g.add_argument("--tau", type=float, default=0.5)
    g.add_argument("--p-closure", type=float, default=0.9)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.add_argument("--partition-out", default=None,
                   help="write the planted partition (lfr models only)")

    m = sub.add_parser("measure", help="print metrics of an edge list as CSV")
    m.add_argument("edge_list")
    m.add_argument("--partition", default=None)

    d = sub.add_parser("detect", help="detect communities and write a partition")
    d.add_argument("edge_list")
    d.add_argument("--algo", required=True, choices=["louvain", "infomap"])
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--restarts", type=int, default=3)
    d.add_argument("--out", required=True)

    e = sub.add_parser("experiment", help="run a builtin or JSON-defined plan")
    e.add_argument("--plan", required=True,
                   help="builtin plan name or path to a JSON plan file")
    e.add_argument("--out", required=True)
    e.add_argument("--seed", type=int, default=None)
    e.add_argument("--reps", type=int, default=None)
    e.add_argument("--scale", type=int, default=1,
                   help="divide n and n_max by this factor")
    e.add_argument("--quiet", action="store_true")

    sub.add_parser("list-plans", help="list builtin experiment plans")
    return parser


def _cmd_generate(args) -> int:
    seed = Seed(args.seed)
    k_max = args.k_max or default_degree_cutoff(args.gamma, args.mean_degree)
    metadata = {"model": args.model, "seed": args.seed}
    partition = None
    if args.model == "cm":
        deg = sample_power_law_degrees(
            PowerLawSpec(args.gamma, k_max, target_mean=args.mean_degree),
            args.n, seed)
        graph = configuration_model(deg, seed)
    elif args.model == "ba":
        graph = barabasi_albert(args.n, max(1, round_half_up(args.mean_degree / 2)), seed)
    elif args.model == "ev":
        graph = evolutionary_pa(EvParams(args.n, max(1, round_half_up(args.mean_degree / 2))), seed)
    elif args.model.startswith("lfr-"):
        if args.n_max is None:
            raise TransilabError("lfr models need --n-max")
        params = LfrParams(n=args.n, gamma=args.gamma, beta=args.beta,
                           mean_degree=args.mean_degree, k_max=k_max,
                           n_min=args.n_min, n_max=args.n_max, mu=args.mu,
                           basic_model=args.model.split("-", 1)[1])
        graph, partition, achieved = lfr_generate(params, seed)
        metadata["mu_target"] = args.mu
        metadata["mu_achieved"] = f"{achieved:.6g}"
    elif args.model == "nm":
        graph, info = nm_generate_with_info(
            NmParams(n=args.n, gamma=args.gamma, mean_degree=args.mean_degree,
                     k_max=k_max, tau=args.tau), seed)
        metadata.update(info)
    else:
        graph, info = ht_generate_with_info(
            HtParams(n=args.n, gamma=args.gamma, mean_degree=args.mean_degree,
                     k_max=k_max, p_closure=args.p_closure), seed)
        metadata.update(info)
    write_edge_list(graph, args.out, metadata)
    if partition is not None and args.partition_out:
        write_partition(partition, args.partition_out,
                        {"model": args.model, "seed": args.seed})
    elif args.partition_out:
        raise TransilabError(f"model {args.model} has no planted partition")
    return 0


def _cmd_measure(args) -> int:
    graph, _ = read_edge_list(args.edge_list)
    row = {
        "n": graph.n, "m": graph.m,
        "mean_degree": format(2.0 * graph.m / graph.n, ".6g") if graph.n else "",
    }
    cg, cl, lit = metrics.transitivity_summary(graph)
    row["transitivity_global"] = format(cg, ".6g")
    row["transitivity_local_avg"] = format(cl, ".6g")
    row["transitivity_literal_ratio"] = format(lit, ".6g")
    row["modularity"] = ""
    row["mixing_coefficient"] = ""
    row["n_communities"] = ""
    if args.partition:
        partition, _ = read_partition(args.partition, graph.n)
        row["modularity"] = format(metrics.modularity(graph, partition), ".6g")
        row["mixing_coefficient"] = format(
            metrics.mixing_coefficient(graph, partition), ".6g")
        row["n_communities"] = str(partition.n_communities)
    writer = csv.writer(sys.stdout)
    writer.writerow(MEASURE_COLUMNS)
    writer.writerow([row[c] for c in MEASURE_COLUMNS])
    return 0


def _cmd_detect(args) -> int:
    graph, _ = read_edge_list(args.edge_list)
    seed = Seed(args.seed)
    if args.algo == "louvain":
        result = louvain(graph, seed, restarts=args.restarts)
        header = {"algo": "louvain", "objective": f"{result.objective:.9g}",
                  "objective_kind": "modularity"}
    else:
        result = infomap_greedy(graph, seed, restarts=args.restarts)
        header = {"algo": "infomap", "objective": f"{result.objective:.9g}",
                  "objective_kind": "description_length_bits"}
    header["seed"] = args.seed
    write_partition(result.partition, args.out, header)
    print(f"{args.algo}: {result.partition.n_communities} communities, "
          f"objective {result.objective:.6g}")
    return 0


def _cmd_experiment(args) -> int:
    plans = builtin_plans()
    if args.plan in plans:
        plan = plans[args.plan]
    else:
        plan = plan_from_json(args.plan)
    if args.reps is not None or args.seed is not None:
        plan = ExperimentPlan(
            plan.name, plan.grid, plan.fixed,
            args.reps if args.reps is not None else plan.replicates,
            args.seed if args.seed is not None else plan.base_seed,
            plan.model, plan.detect, plan.louvain_restarts,
            plan.infomap_restarts, plan.description)
    plan = plan.scaled(args.scale)
    done = {"count": 0}

    def progress(rec):
        done["count"] += 1
        if not args.quiet and done["count"] % 25 == 0:
            print(f"  {done['count']} rows done", file=sys.stderr)

    rows = run_experiment(plan, out_path=args.out, progress=progress)
    failed = sum(1 for r in rows if r.error)
    print(f"{plan.name}: {len(rows)} rows -> {args.out}"
          + (f" ({failed} failed)" if failed else ""))
    return 0


def _cmd_list_plans(_args) -> int:
    for name, plan in builtin_plans().items():
        points = len(plan.grid_points())
        print(f"{name}: {points} grid points x {plan.replicates} replicates"
              f"{' (with detection)' if plan.detect else ''}")
        print(f"    {plan.description}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "measure": _cmd_measure,
        "detect": _cmd_detect,
        "experiment": _cmd_experiment,
        "list-plans": _cmd_list_plans,
    }
    try:
        return handlers[args.command](args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TransilabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
