"""Command-line interface and experiment harness.

Node ids are 0-based in every file and every printed result (the
triangle counterexample is usually described with 1-based nodes; subtract one).
Exit codes: 0 success, 1 failed check, 2 unreadable input, 3
disconnected network, 4 budget at or above the edge connectivity.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import cip as cip_mod
from . import erip as erip_mod
from . import oracle as oracle_mod
from .errors import (
    BudgetTooLarge,
    Disconnected,
    GraphFormatError,
    InterdictionError,
    ResampleLimit,
    SingularSystem,
    TooLarge,
)
from .graph import (
    EdgeCut,
    StochasticMatrix,
    WeightedGraph,
    graph_to_json,
    interdict,
    load_json,
    save_json,
    stochastic_from,
    stochastic_to_json,
    validate_stochastic,
    weighted_graph_from,
)
from .instances import (
    alternating_x0,
    assign_integer_weights,
    build_gadget,
    gen_bipartite,
    gen_complete,
    gen_er,
    gen_ring4,
    metropolis,
)
from .mincut import edge_connectivity
from .spectral import consensus_objective, effective_resistance

EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_DISCONNECTED = 3
EXIT_BUDGET = 4

FAMILIES = ("complete", "bipartite", "ring4", "er")
ALGORITHMS = ("optimal", "adaptive", "potential_iter", "potential_oneshot", "erip_approx")
CSV_HEADER = "family,n,l,seed,algorithm,objective,iterations,wall_ms"

TRIANGLE_P = [
    [17 / 30, 1 / 3, 1 / 10],
    [1 / 3, 1 / 3, 1 / 3],
    [1 / 10, 1 / 3, 17 / 30],
]


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _resistance_view(g: WeightedGraph) -> WeightedGraph:
    if g.mode == "resistance":
        return g
    edges = tuple((i, j, 1.0 / v) for i, j, v in g.edges)
    return WeightedGraph(g.n, edges, g.s, g.t, "resistance")


def _stochastic_to_resistance(P: StochasticMatrix, s: int, t: int) -> WeightedGraph:
    edges = tuple((i, j, 1.0 / P.entries[i, j]) for i, j in P.edge_pairs)
    return WeightedGraph(P.n, edges, s, t, "resistance")


def _load_x0(path, n: int) -> np.ndarray:
    if path is None:
        return alternating_x0(n)
    try:
        with open(path) as fh:
            data = json.load(fh)
        x0 = np.asarray(data, dtype=float)
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"cannot read x0 file {path}: {exc}") from exc
    if x0.shape != (n,):
        raise GraphFormatError(f"x0 must list {n} numbers")
    return x0


def _cut_pairs(cut: EdgeCut, pairs) -> list[list[int]]:
    return [[i, j] for i, j in cut.pairs(pairs)]


def _print_json(obj) -> None:
    print(json.dumps(obj))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_reff(args) -> int:
    doc = load_json(args.graph)
    g = weighted_graph_from(doc)
    s = args.s if args.s is not None else g.s
    t = args.t if args.t is not None else g.t
    print(f"{effective_resistance(g, s, t):.12f}")
    return 0


def cmd_erip(args) -> int:
    g = _resistance_view(weighted_graph_from(load_json(args.graph)))
    sol = erip_mod.erip_interdict(g, args.budget)
    _print_json(
        {
            "cut": _cut_pairs(sol.cut, g.pairs),
            "objective": sol.reff_after,
            "iterations": sol.k_index,
            "trace": [],
        }
    )
    return 0


def cmd_cip(args) -> int:
    doc = load_json(args.graph)
    P = stochastic_from(doc)
    x0 = _load_x0(args.x0, P.n)
    y0 = None
    if args.y0_seed is not None:
        rng = np.random.default_rng(args.y0_seed)
        y0 = np.ones(P.m)
        if args.budget > 0:
            y0[rng.choice(P.m, size=args.budget, replace=False)] = 0.0
    sol = cip_mod.cip_solve(
        P,
        x0,
        args.budget,
        y0=y0,
        mode=args.mode,
        max_iter=args.max_iter,
        zero_exactly_budget=args.zero_exactly_budget,
        kernel=args.kernel,
    )
    _print_json(
        {
            "cut": _cut_pairs(sol.cut, P.edge_pairs),
            "objective": sol.objective,
            "iterations": sol.iterations,
            "trace": [
                {"f": st.f_value, "removed": _cut_pairs(EdgeCut.from_y(st.y), P.edge_pairs)}
                for st in sol.trace
            ],
        }
    )
    return 0


def cmd_brute(args) -> int:
    doc = load_json(args.graph)
    if doc["mode"] == "stochastic":
        P = stochastic_from(doc)
        x0 = _load_x0(args.x0, P.n)
        res = oracle_mod.brute_cip(P, x0, args.budget, cap=args.oracle_cap, kernel=args.kernel)
        pairs = P.edge_pairs
    else:
        g = _resistance_view(weighted_graph_from(doc))
        res = oracle_mod.brute_erip(g, args.budget, cap=args.oracle_cap)
        pairs = g.pairs
    _print_json(
        {
            "cut": _cut_pairs(res.best_cut, pairs),
            "objective": res.best_value,
            "iterations": res.evaluated,
            "trace": [],
        }
    )
    return 0


def _gen_topology(family: str, n: int, p: float, connectivity: int, seed) -> WeightedGraph:
    if family == "complete":
        return gen_complete(n)
    if family == "bipartite":
        return gen_bipartite(n)
    if family == "ring4":
        return gen_ring4(n)
    if family == "er":
        return gen_er(n, p, connectivity, seed)
    raise GraphFormatError(f"unknown family {family!r}")


def cmd_gen(args) -> int:
    ss = np.random.SeedSequence([args.seed, FAMILIES.index(args.family), args.n])
    topo_ss, weight_ss = ss.spawn(2)
    g = _gen_topology(args.family, args.n, args.p, args.connectivity, topo_ss)
    if args.metropolis:
        P = metropolis(assign_integer_weights(g, np.random.default_rng(weight_ss)))
        doc = stochastic_to_json(P, g.s, g.t)
    else:
        doc = graph_to_json(g)
    save_json(doc, args.out)
    return 0


def cmd_gadget(args) -> int:
    base = weighted_graph_from(load_json(args.graph))
    gg = build_gadget(base, args.a, args.delta, args.variant)
    save_json(graph_to_json(gg.gadget), args.out)
    node_map = {
        "s": gg.gadget.s,
        "t": gg.gadget.t,
        "v_left": list(gg.v_left),
        "v_right": list(gg.v_right),
        "e_left": list(gg.e_left),
        "e_one": list(gg.e_one),
        "e_right": list(gg.e_right),
    }
    save_json(node_map, args.map_out or args.out + ".map.json")
    return 0


# ---------------------------------------------------------------------------
# experiment harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentRecord:
    family: str
    n: int
    l: int
    seed: int
    algorithm: str
    objective: float
    iterations: int
    wall_ms: int

    def csv_row(self) -> str:
        return (
            f"{self.family},{self.n},{self.l},{self.seed},{self.algorithm},"
            f"{self.objective!r},{self.iterations},{self.wall_ms}"
        )


def _parse_int_list(tokens: list[str], key: str) -> list[int]:
    out: list[int] = []
    for tok in tokens:
        if ".." in tok:
            lo, hi = tok.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(tok))
    if not out:
        raise GraphFormatError(f"config key {key!r} needs at least one value")
    return out


def parse_experiment_config(path) -> dict:
    """Flat key-value config: one 'key value' pair per line, repeated
    keys accumulate, '#' starts a comment, integer keys accept a..b
    ranges. Keys: family, n, l, seed, algorithm, p, oracle_cap, kernel,
    workers, out."""
    lists: dict[str, list[str]] = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise GraphFormatError(f"cannot read config {path}: {exc}") from exc
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        if len(parts) != 2:
            raise GraphFormatError(f"bad config line {raw!r}")
        lists.setdefault(parts[0], []).append(parts[1].strip())
    unknown = set(lists) - {"family", "n", "l", "seed", "algorithm", "p", "oracle_cap", "kernel", "workers", "out"}
    if unknown:
        raise GraphFormatError(f"unknown config keys: {sorted(unknown)}")
    for key in ("family", "n", "l", "seed", "algorithm"):
        if key not in lists:
            raise GraphFormatError(f"config key {key!r} is required")
    families = [f for toks in lists["family"] for f in toks.split()]
    algorithms = [a for toks in lists["algorithm"] for a in toks.split()]
    for fam in families:
        if fam not in FAMILIES:
            raise GraphFormatError(f"unknown family {fam!r}")
    for alg in algorithms:
        if alg not in ALGORITHMS:
            raise GraphFormatError(f"unknown algorithm {alg!r}")
    def scalar(key, cast, default):
        if key not in lists:
            return default
        if len(lists[key]) != 1:
            raise GraphFormatError(f"config key {key!r} must appear once")
        return cast(lists[key][0])
    return {
        "families": families,
        "n": _parse_int_list(lists["n"], "n"),
        "l": _parse_int_list(lists["l"], "l"),
        "seeds": _parse_int_list(lists["seed"], "seed"),
        "algorithms": algorithms,
        "p": scalar("p", float, 0.5),
        "oracle_cap": scalar("oracle_cap", int, oracle_mod.DEFAULT_CAP),
        "kernel": scalar("kernel", float, 1.0),
        "workers": scalar("workers", int, 1),
        "out": scalar("out", str, None),
    }


def build_experiment_instance(family: str, n: int, l: int, seed: int, p: float):
    """Deterministic instance for one (family, n, l, seed) cell: the
    topology (Erdos-Renyi draws are regenerated until they are
    (l+1)-edge-connected so the budget respects the connectivity
    assumption), Metropolis weights, and the alternating start vector."""
    ss = np.random.SeedSequence([seed, FAMILIES.index(family), n, l])
    topo_ss, weight_ss = ss.spawn(2)
    g = _gen_topology(family, n, p, l + 1, topo_ss)
    P = metropolis(assign_integer_weights(g, np.random.default_rng(weight_ss)))
    return g, P, alternating_x0(n)


def run_experiment_instance(task: tuple) -> list[ExperimentRecord]:
    family, n, l, seed, algorithms, p, oracle_cap, kernel = task
    rows: list[ExperimentRecord] = []

    def error_row(wall_ms: int) -> ExperimentRecord:
        return ExperimentRecord(family, n, l, seed, "ERROR", float("nan"), 0, wall_ms)

    start = time.perf_counter()
    try:
        g, P, x0 = build_experiment_instance(family, n, l, seed, p)
        if l >= edge_connectivity(P.n, P.edge_pairs):
            raise BudgetTooLarge(f"l={l} not below edge connectivity")
    except InterdictionError:
        return [error_row(int((time.perf_counter() - start) * 1000))]

    for alg in algorithms:
        t0 = time.perf_counter()
        try:
            if alg == "optimal":
                res = oracle_mod.brute_cip(P, x0, l, cap=oracle_cap, kernel=kernel)
                objective, iters = res.best_value, res.evaluated
            elif alg in ("adaptive", "potential_iter", "potential_oneshot"):
                sol = cip_mod.cip_solve(P, x0, l, mode=alg, kernel=kernel)
                objective, iters = sol.objective, sol.iterations
            elif alg == "erip_approx":
                if l == 0:
                    cut = EdgeCut(frozenset(), P.m)
                    iters = 0
                else:
                    r_graph = _stochastic_to_resistance(P, g.s, g.t)
                    esol = erip_mod.erip_interdict(r_graph, l)
                    cut, iters = esol.cut, esol.k_index
                objective = consensus_objective(interdict(P, cut), x0, kernel=kernel)
            else:
                raise GraphFormatError(f"unknown algorithm {alg!r}")
            wall = int((time.perf_counter() - t0) * 1000)
            rows.append(ExperimentRecord(family, n, l, seed, alg, objective, iters, wall))
        except InterdictionError:
            rows.append(error_row(int((time.perf_counter() - t0) * 1000)))
    return rows


def cmd_experiment(args) -> int:
    cfg = parse_experiment_config(args.config)
    out_path = args.out or cfg["out"]
    if out_path is None:
        raise GraphFormatError("no output path: set 'out' in the config or pass --out")
    tasks = [
        (family, n, l, seed, tuple(cfg["algorithms"]), cfg["p"], cfg["oracle_cap"], cfg["kernel"])
        for family in cfg["families"]
        for n in cfg["n"]
        for l in cfg["l"]
        for seed in cfg["seeds"]
    ]
    if cfg["workers"] > 1:
        with ProcessPoolExecutor(max_workers=cfg["workers"]) as pool:
            results = list(pool.map(run_experiment_instance, tasks))
    else:
        results = [run_experiment_instance(t) for t in tasks]
    rows = [row for batch in results for row in batch]
    rows.sort(key=lambda r: (r.family, r.n, r.l, r.seed, r.algorithm))
    with open(out_path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(row.csv_row() + "\n")
    print(f"wrote {len(rows)} rows to {out_path}")
    return 0


# ---------------------------------------------------------------------------
# counterexample reproduction
# ---------------------------------------------------------------------------

def cmd_counterexample(args) -> int:
    """Replays the triangle instance on which the highest-power-
    dissipation rule breaks the wrong edge. All checks are exact up to
    1e-9; any mismatch exits 1."""
    kernel = args.kernel
    P = validate_stochastic(TRIANGLE_P)
    x0 = np.array([1.0, 0.0, -1.0])  # e_0 - e_2
    pairs = P.edge_pairs  # ((0,1), (0,2), (1,2))
    checks: list[tuple[str, bool]] = []

    def check(name: str, ok: bool):
        checks.append((name, bool(ok)))

    print("conductance matrix P (nodes 0..2):")
    print(np.array(P.entries))
    diss = {pr: P.entries[pr] * (x0[pr[0]] - x0[pr[1]]) ** 2 for pr in pairs}
    print("power dissipations at x0:", {str(k): v for k, v in diss.items()})
    check(
        "dissipations equal (1/3, 2/5, 1/3) for edges (0,1),(0,2),(1,2)",
        abs(diss[(0, 1)] - 1 / 3) < 1e-9
        and abs(diss[(0, 2)] - 2 / 5) < 1e-9
        and abs(diss[(1, 2)] - 1 / 3) < 1e-9,
    )

    cut_12 = EdgeCut(frozenset({2}), 3)  # removes (1,2)
    cut_02 = EdgeCut(frozenset({1}), 3)  # removes (0,2)
    if args.debug_swap_cuts:
        cut_12, cut_02 = cut_02, cut_12
    P_12 = interdict(P, cut_12)
    P_02 = interdict(P, cut_02)
    print("P minus (1,2):")
    print(np.array(P_12.entries))
    print("P minus (0,2):")
    print(np.array(P_02.entries))
    sq_12 = P_12.entries @ P_12.entries
    sq_02 = P_02.entries @ P_02.entries
    print("squared interdicted matrices:")
    print(sq_12)
    print(sq_02)
    expect_12 = np.array(
        [[199 / 450, 37 / 90, 11 / 75], [37 / 90, 5 / 9, 1 / 30], [11 / 75, 1 / 30, 41 / 50]]
    )
    check("square of P minus (1,2) matches the written-out matrix", np.max(np.abs(sq_12 - expect_12)) < 1e-12)

    r_12 = effective_resistance(sq_12, 0, 2)
    r_02 = effective_resistance(sq_02, 0, 2)
    print(f"Reff after removing (1,2): {r_12:.12f}  (400/71 = {400 / 71:.12f})")
    print(f"Reff after removing (0,2): {r_02:.12f}  (18/5  = {18 / 5:.12f})")
    check("Reff after removing (1,2) equals 400/71", abs(r_12 - 400 / 71) < 1e-9)
    check("Reff after removing (0,2) equals 18/5", abs(r_02 - 18 / 5) < 1e-9)
    check("removing (1,2) beats removing (0,2)", r_12 > r_02)

    obj_12 = consensus_objective(P_12, x0, kernel=kernel)
    obj_02 = consensus_objective(P_02, x0, kernel=kernel)
    print(f"kernel-weighted objectives: break (1,2) -> {obj_12:.12f}, break (0,2) -> {obj_02:.12f}")
    check("objective of breaking (1,2) is kernel * 400/71", abs(obj_12 - kernel * 400 / 71) < 1e-9 * max(1.0, kernel))
    check("objective of breaking (0,2) is kernel * 18/5", abs(obj_02 - kernel * 18 / 5) < 1e-9 * max(1.0, kernel))

    pt = cip_mod.cip_solve(P, x0, 1, mode="potential_oneshot", kernel=kernel)
    print("one-shot dissipation rule breaks:", _cut_pairs(pt.cut, pairs))
    check("one-shot dissipation rule breaks (0,2)", pt.cut.removed == cut_02.removed)

    res = oracle_mod.brute_cip(P, x0, 1, kernel=kernel)
    print(
        "brute force breaks:",
        _cut_pairs(res.best_cut, pairs),
        "objective",
        res.best_value,
        "runner-up",
        res.runner_up_value,
    )
    check("brute-force optimum breaks (1,2)", res.best_cut.removed == cut_12.removed)
    check("brute-force optimum value is kernel * 400/71", abs(res.best_value - kernel * 400 / 71) < 1e-9 * max(1.0, kernel))

    failed = [name for name, ok in checks if not ok]
    for name, ok in checks:
        print(("PASS " if ok else "FAIL ") + name)
    if failed:
        print(f"{len(failed)} check(s) failed")
        return EXIT_FAIL
    print("all checks passed")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="interdiction", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reff", help="print the s-t effective resistance of a graph file")
    p.add_argument("graph")
    p.add_argument("--s", type=int, default=None, help="override the file's source node")
    p.add_argument("--t", type=int, default=None, help="override the file's sink node")
    p.set_defaults(func=cmd_reff)

    p = sub.add_parser("erip", help="sorted-edge/min-cut interdiction of a resistance graph")
    p.add_argument("graph")
    p.add_argument("--budget", type=int, required=True)
    p.set_defaults(func=cmd_erip)

    p = sub.add_parser("cip", help="iterative consensus interdiction of a stochastic matrix")
    p.add_argument("graph")
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--x0", default=None, help="JSON file with the start vector (default: alternating 0/1)")
    p.add_argument("--mode", choices=cip_mod.MODES, default="adaptive")
    p.add_argument("--kernel", type=float, default=1.0)
    p.add_argument("--y0-seed", type=int, default=None, help="seed a random feasible starting cut")
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument(
        "--zero-exactly-budget",
        action="store_true",
        help="reproduce the literal update that zeroes budget-many edges even on negative gradients",
    )
    p.set_defaults(func=cmd_cip)

    p = sub.add_parser("brute", help="exhaustive optimum (consensus objective for stochastic files, effective resistance otherwise)")
    p.add_argument("graph")
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--x0", default=None)
    p.add_argument("--kernel", type=float, default=1.0)
    p.add_argument("--oracle-cap", type=int, default=oracle_mod.DEFAULT_CAP)
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("gen", help="generate a benchmark family instance")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("n", type=int)
    p.add_argument("--p", type=float, default=0.5, help="edge probability for the er family")
    p.add_argument("--connectivity", type=int, default=1, help="resample er draws until this edge-connectivity")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--metropolis", action="store_true", help="emit a stochastic matrix with random integer weights")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("gadget", help="build the bipartite reduction gadget of a base graph")
    p.add_argument("graph")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--variant", choices=("clique", "dks"), default="clique")
    p.add_argument("--out", required=True)
    p.add_argument("--map-out", default=None)
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("experiment", help="run a seeded sweep and write one CSV row per (instance, algorithm)")
    p.add_argument("config")
    p.add_argument("--out", default=None, help="override the config's output path")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("counterexample", help="reproduce the triangle on which the dissipation rule is suboptimal")
    p.add_argument("--kernel", type=float, default=1.0)
    p.add_argument("--debug-swap-cuts", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_counterexample)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphFormatError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (Disconnected, SingularSystem) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except BudgetTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (TooLarge, ResampleLimit, InterdictionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
