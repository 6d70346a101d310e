"""Command-line front end: gen, solve, learn, verify, bench.

Exit codes: 0 success, 2 verification failed, 3 query budget exhausted,
4 invalid input.  All randomized generators require an explicit seed so
identical invocations produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction

from . import bimatrix as bm
from . import dag_learner as dag
from . import graphical as gg
from . import instances, parallel_links, serialize, verify
from .errors import BudgetExhausted, PqlabError
from .games import (
    BimatrixGame,
    CongestionGame,
    GraphicalGame,
    MixedProfile,
    enumerate_paths,
    link_tables,
    regret,
    validate_profile,
)
from .oracles import AdversaryLinkOracle, CongestionOracle, PurePayoffOracle

EXIT_OK = 0
EXIT_VERIFY_FAILED = 2
EXIT_BUDGET = 3
EXIT_INVALID = 4


def _parse_gen_spec(spec: str) -> tuple[str, dict[str, int]]:
    """Parse 'family:key=value,...' generator specs."""
    family, _, rest = spec.partition(":")
    params: dict[str, int] = {}
    if rest:
        for item in rest.split(","):
            key, _, value = item.partition("=")
            if not value:
                raise ValueError(f"malformed generator parameter {item!r}")
            params[key.strip()] = int(value)
    return family.strip(), params


def make_game(spec: str):
    family, p = _parse_gen_spec(spec)
    if family == "pennies":
        return instances.gen_matching_pennies(p.get("k", 2))
    if family == "gell":
        return instances.gen_G_ell(instances.GellSpec(p["ell"]))
    if family == "rell":
        return instances.gen_R_ell(p["k"], p.get("target", 0))
    if family == "random-bimatrix" or family == "random":
        return instances.gen_random_bimatrix(p["k"], p["seed"])
    if family == "random-graphical":
        return instances.gen_random_graphical(p["n"], p["k"], p["d"], p["seed"])
    if family == "step":
        return instances.gen_random_step_links(p.get("m", 2), p["n"], p.get("seed", 0))
    if family == "random-dag":
        return instances.gen_random_dag(
            p.get("v", 6), p.get("e", 10), p["n"], p["seed"], p.get("subdivide", 0)
        )
    raise ValueError(f"unknown generator family {family!r}")


def _load_or_gen(args):
    if getattr(args, "game", None):
        with open(args.game) as fp:
            return serialize.load_game(fp)
    if getattr(args, "gen", None):
        return make_game(_with_seed(args))
    raise ValueError("provide --game FILE or --gen SPEC")


def _with_seed(args) -> str:
    """Fold a standalone --seed flag into the generator spec."""
    spec = args.gen
    if getattr(args, "seed", None) is not None:
        family, params = _parse_gen_spec(spec)
        params["seed"] = args.seed
        spec = family + ":" + ",".join(f"{k}={v}" for k, v in params.items())
    return spec


def _emit(args, payload: dict) -> None:
    text = json.dumps(payload, indent=2, default=str) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    game = make_game(args.spec)
    _emit(args, serialize.game_to_dict(game))
    return EXIT_OK


def _cmd_solve_bimatrix(args) -> int:
    game = _load_or_gen(args)
    if not isinstance(game, BimatrixGame):
        raise ValueError("solve bimatrix needs a bimatrix game")
    if args.algo == "half-ne":
        oracle = PurePayoffOracle(game, max_queries=args.budget)
        result = bm.half_approx_ne(oracle)
        profile = result.profile
        payload = {
            "algorithm": "half-ne",
            "profile": serialize.profile_to_dict(profile),
            "trace": list(result.trace),
            "queries_used": result.queries_used,
        }
    elif args.algo == "uniform":
        profile = bm.uniform_profile(game.rows, game.cols)
        payload = {
            "algorithm": "uniform",
            "profile": serialize.profile_to_dict(profile),
            "queries_used": 0,
        }
    else:
        raise ValueError(f"unknown algorithm {args.algo!r}")
    eps = regret(game, profile)
    payload["regret"] = str(eps)
    if args.algo == "half-ne":
        bound = Fraction(1, 2)
    else:
        bound = 1 - Fraction(1, max(game.rows, game.cols))
    payload["verified"] = eps <= bound
    _emit(args, payload)
    return EXIT_OK if payload["verified"] else EXIT_VERIFY_FAILED


def _cmd_solve_parallel_links(args) -> int:
    if args.adversary:
        players = args.players
        if players is None and args.gen:
            _, params = _parse_gen_spec(args.gen)
            players = params.get("n")
        if not players:
            raise ValueError("--adversary needs --players or a --gen spec with n=")
        oracle = AdversaryLinkOracle(players, max_queries=args.budget)
        result = parallel_links.solve_parallel_links(oracle, args.kf)
        completions = list(
            range(oracle.state.lower, oracle.state.upper)
        )
        verified = (
            len(completions) == 1
            and result.loads.loads[0] == completions[0]
            and result.loads.loads[1] == players - completions[0]
        )
        payload = {
            "loads": list(result.loads.loads),
            "special_link": result.loads.special,
            "queries_used": result.queries_used,
            "query_bound": result.query_bound,
            "consistent_step_locations": completions,
            "verified": verified,
        }
    else:
        game = _load_or_gen(args)
        if not isinstance(game, CongestionGame) or not game.is_parallel_links:
            raise ValueError("solve parallel-links needs a parallel-links game")
        oracle = CongestionOracle(game, max_queries=args.budget)
        result = parallel_links.solve_parallel_links(oracle, args.kf)
        verified = parallel_links.is_delta_equilibrium(
            link_tables(game), result.loads.loads, 1, result.loads.special
        )
        payload = {
            "loads": list(result.loads.loads),
            "special_link": result.loads.special,
            "queries_used": result.queries_used,
            "query_bound": result.query_bound,
            "verified": verified,
        }
    if args.emit_trace:
        payload["phases"] = [
            {"delta": t.delta, "moved_groups": t.moved_groups,
             "removed": list(t.removed), "added": list(t.added)}
            for t in result.traces
        ]
    _emit(args, payload)
    return EXIT_OK if payload["verified"] else EXIT_VERIFY_FAILED


def _cmd_solve_dag(args) -> int:
    game = _load_or_gen(args)
    if not isinstance(game, CongestionGame):
        raise ValueError("solve dag needs a congestion game")
    oracle = CongestionOracle(game, max_queries=args.budget)
    result = dag.solve_dag_game(oracle)
    report = verify.deviation_report(game, result.profile)
    payload = {
        "profile": serialize.profile_to_dict(result.profile),
        "queries_used": result.queries_used,
        "contracted_edges": {
            str(e): list(ids) for e, ids in result.contraction.absorbed.items()
        },
        "verified": report.is_equilibrium,
        "worst_improvement": str(report.improvement),
    }
    _emit(args, payload)
    return EXIT_OK if report.is_equilibrium else EXIT_VERIFY_FAILED


def _cmd_learn_graphical(args) -> int:
    game = _load_or_gen(args)
    if not isinstance(game, GraphicalGame):
        raise ValueError("learn graphical needs a graphical game")
    oracle = PurePayoffOracle(game, max_queries=args.budget)
    learned = gg.learn_graphical(
        oracle, game.players, game.strategies, args.degree
    )
    payload = {
        "learned_game": serialize.game_to_dict(learned.game),
        "affects_edges": sorted(map(list, learned.affects_edges)),
        "queries_used": learned.queries_used,
        "verified": learned.game == game,
    }
    _emit(args, payload)
    return EXIT_OK if payload["verified"] else EXIT_VERIFY_FAILED


def _cmd_learn_dag(args) -> int:
    game = _load_or_gen(args)
    if not isinstance(game, CongestionGame):
        raise ValueError("learn dag needs a congestion game")
    oracle = CongestionOracle(game, max_queries=args.budget)
    reduced_net, cmap = dag.contract_network(oracle.network)
    view = dag.ContractedOracle(oracle, cmap) if cmap.steps else oracle
    learned = dag.learn_costs(view, reduced_net)
    reduced_game, _ = dag.preprocess_contract(game)
    equivalent, counterexample = verify.check_equivalence(
        learned.as_tables(), reduced_game.cost, reduced_game, game.players,
        mode=args.verify_mode,
    )
    payload = {
        "cost_tables": {
            str(e): [str(v) for v in table]
            for e, table in sorted(learned.as_tables().items())
        },
        "contracted_edges": {str(e): list(ids) for e, ids in cmap.absorbed.items()},
        "queries_used": oracle.ledger.count,
        "verified": equivalent,
    }
    if counterexample is not None:
        payload["counterexample"] = {
            "path": list(counterexample["path"]),
            "got": str(counterexample["got"]),
            "want": str(counterexample["want"]),
        }
    _emit(args, payload)
    return EXIT_OK if equivalent else EXIT_VERIFY_FAILED


def _cmd_verify(args) -> int:
    with open(args.game) as fp:
        game = serialize.load_game(fp)
    with open(args.profile) as fp:
        profile = serialize.profile_from_dict(json.load(fp))
    if isinstance(game, CongestionGame):
        assert isinstance(profile, dict)
        validate_profile(game, profile)
        report = verify.deviation_report(game, profile)
        payload = {
            "is_equilibrium": report.is_equilibrium,
            "improvement": str(report.improvement),
            "worst_path": list(report.worst_path) if report.worst_path else None,
            "worst_alternative": (
                list(report.worst_alternative) if report.worst_alternative else None
            ),
        }
        ok = report.is_equilibrium
    elif isinstance(game, BimatrixGame):
        if isinstance(profile, tuple):
            profile = MixedProfile.pure(profile[0], profile[1], game.rows, game.cols)
        assert isinstance(profile, MixedProfile)
        eps = regret(game, profile)
        payload = {"regret": str(eps), "is_equilibrium": eps == 0}
        ok = eps == 0
    else:
        assert isinstance(game, GraphicalGame) and isinstance(profile, tuple)
        base = game.payoffs(profile)
        worst = Fraction(0)
        for p in range(game.players):
            for s in range(game.strategies):
                moved = list(profile)
                moved[p] = s
                worst = max(worst, game.payoff(p, moved) - base[p])
        payload = {"improvement": str(worst), "is_equilibrium": worst == 0}
        ok = worst == 0
    _emit(args, payload)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def _cmd_bench(args) -> int:
    rows = []
    if args.family == "parallel-links":
        for exp in range(args.n_min_exp, args.n_max_exp + 1):
            n = 2**exp
            game = instances.gen_random_step_links(args.m, n, args.seed)
            oracle = CongestionOracle(game)
            t0 = time.monotonic()
            result = parallel_links.solve_parallel_links(oracle, args.kf)
            rows.append(
                {
                    "m": args.m,
                    "n": n,
                    "queries_used": result.queries_used,
                    "bound": result.query_bound,
                    "total_values": args.m * n,
                    "fraction": result.queries_used / (args.m * n),
                    "seconds": round(time.monotonic() - t0, 4),
                }
            )
    elif args.family == "dag":
        for n in range(args.players_min, args.players_max + 1):
            game = instances.gen_random_dag(args.v, args.e, n, args.seed)
            oracle = CongestionOracle(game)
            t0 = time.monotonic()
            result = dag.solve_dag_game(oracle)
            edges = len(result.contraction.reduced.edges)
            total = len(enumerate_paths(result.contraction.reduced)) ** n
            rows.append(
                {
                    "edges": edges,
                    "n": n,
                    "queries_used": result.queries_used,
                    "bound": edges * n,
                    "total_profiles": total,
                    "fraction": result.queries_used / total if total else 0,
                    "seconds": round(time.monotonic() - t0, 4),
                }
            )
    elif args.family == "graphical":
        n, k, d = args.players_max, args.k, args.d
        game = instances.gen_random_graphical(n, k, d, args.seed)
        oracle = PurePayoffOracle(game)
        t0 = time.monotonic()
        learned = gg.learn_graphical(oracle, n, k, d)
        rows.append(
            {
                "n": n,
                "k": k,
                "d": d,
                "queries_used": learned.queries_used,
                "bound": gg.probe_set_size(n, k, d),
                "total_profiles": k**n,
                "fraction": learned.queries_used / k**n,
                "seconds": round(time.monotonic() - t0, 4),
            }
        )
    else:
        raise ValueError(f"unknown bench family {args.family!r}")
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqlab", description="payoff-query equilibrium laboratory"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="emit a game as JSON")
    p_gen.add_argument("spec", help="e.g. pennies:k=4 | gell:ell=6 | step:m=2,n=16,seed=1")
    p_gen.add_argument("--out")
    p_gen.set_defaults(func=_cmd_gen)

    p_solve = sub.add_parser("solve", help="run a solver against an oracle")
    solve_sub = p_solve.add_subparsers(dest="target", required=True)

    s_bim = solve_sub.add_parser("bimatrix")
    s_bim.add_argument("--algo", default="half-ne", choices=("half-ne", "uniform"))
    _common_io(s_bim)
    s_bim.set_defaults(func=_cmd_solve_bimatrix)

    s_pl = solve_sub.add_parser("parallel-links")
    s_pl.add_argument("--kf", type=int, default=None, help="group factor")
    s_pl.add_argument("--adversary", action="store_true")
    s_pl.add_argument("--players", type=int, default=None)
    s_pl.add_argument("--emit-trace", action="store_true")
    _common_io(s_pl)
    s_pl.set_defaults(func=_cmd_solve_parallel_links)

    s_dag = solve_sub.add_parser("dag")
    _common_io(s_dag)
    s_dag.set_defaults(func=_cmd_solve_dag)

    p_learn = sub.add_parser("learn", help="reconstruct a hidden game")
    learn_sub = p_learn.add_subparsers(dest="target", required=True)

    l_gg = learn_sub.add_parser("graphical")
    l_gg.add_argument("--degree", type=int, required=True)
    _common_io(l_gg)
    l_gg.set_defaults(func=_cmd_learn_graphical)

    l_dag = learn_sub.add_parser("dag")
    l_dag.add_argument(
        "--verify-mode", default="exhaustive", choices=("exhaustive", "sampled")
    )
    _common_io(l_dag)
    l_dag.set_defaults(func=_cmd_learn_dag)

    p_verify = sub.add_parser("verify", help="deviation-check a profile")
    p_verify.add_argument("--game", required=True)
    p_verify.add_argument("--profile", required=True)
    p_verify.add_argument("--out")
    p_verify.set_defaults(func=_cmd_verify)

    p_bench = sub.add_parser("bench", help="query-count sweeps as CSV")
    p_bench.add_argument("family", choices=("parallel-links", "dag", "graphical"))
    p_bench.add_argument("--m", type=int, default=8)
    p_bench.add_argument("--kf", type=int, default=None)
    p_bench.add_argument("--n-min-exp", type=int, default=8)
    p_bench.add_argument("--n-max-exp", type=int, default=12)
    p_bench.add_argument("--v", type=int, default=6)
    p_bench.add_argument("--e", type=int, default=10)
    p_bench.add_argument("--players-min", type=int, default=1)
    p_bench.add_argument("--players-max", type=int, default=4)
    p_bench.add_argument("--k", type=int, default=2)
    p_bench.add_argument("--d", type=int, default=1)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--out")
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def _common_io(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--game", help="game JSON file")
    sub.add_argument("--gen", help="generator spec, e.g. random:k=10,seed=7")
    sub.add_argument("--seed", type=int, default=None, help="seed for --gen")
    sub.add_argument("--budget", type=int, default=None, help="max oracle queries")
    sub.add_argument("--out", help="write result JSON here instead of stdout")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (PqlabError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
