"""Command line front end.

Subcommands: ``mpc`` (path cover), ``tsp12`` ((1,2)-cost tour), ``maxtsp``
(heavy tour), ``gen`` (instance files), ``verify`` (oracle sweeps).

Exit codes: 0 success, 1 bad input or usage, 2 memory budget exceeded in
strict mode, 3 a guarantee or verification check failed.  Reports printed
with ``--json`` are canonical: keys sorted, no timing fields, so byte
identical across repeated runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .corpus import (
    SWEEPS,
    builtin_fixture,
    fixture_names,
    gen_degree124_graph,
    gen_random_graph,
    gen_random_max_tsp,
    gen_random_tsp12,
    gen_random_weighted_graph,
)
from .matching import ApproxParams, OracleLimitError
from .pathcover import iterative_path_cover, two_phase_path_cover
from .stream import (
    BudgetExceededError,
    FileEdgeSource,
    StreamFormatError,
    load_edge_list,
    open_session,
    save_edge_list,
)
from .tsp import (
    MaxTspInstance,
    Tsp12Instance,
    approx_max_tsp,
    approx_tsp12,
    oracle_max_tsp,
    oracle_path_cover,
    oracle_tsp12,
)

_OK, _INPUT, _BUDGET, _GUARANTEE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1; code 2 stays reserved for budget overruns."""

    def error(self, message):  # noqa: A002 - argparse API
        self.exit(_INPUT, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("STREAMPATH_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"STREAMPATH_SEED must be an int, got {raw!r}") from None


def _emit(args, report: dict, human_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in human_lines:
            print(line)


def _ratio(achieved: int, optimum: int) -> str | None:
    if optimum == 0:
        return None
    return str(Fraction(achieved, optimum))


def _run_flags(sub: argparse.ArgumentParser, iterative_flag: bool = False) -> None:
    sub.add_argument("file", help="edge-list file (see README for the format)")
    sub.add_argument("--epsilon", default="1/3", help="quality knob, a fraction in (0,1)")
    sub.add_argument("--budget", type=int, default=None, help="retained-words budget override")
    sub.add_argument("--strict", action="store_true", help="fail fast on budget overrun (exit 2)")
    sub.add_argument("--oracle", action="store_true", help="also solve exactly and check the bound")
    sub.add_argument("--json", action="store_true", help="machine-readable report")
    if iterative_flag:
        sub.add_argument(
            "--iterative",
            action="store_true",
            help="repeat matching rounds until no edge fits (experimental, no ratio guarantee)",
        )


def _cmd_mpc(args) -> int:
    params = ApproxParams.parse(args.epsilon)
    src = FileEdgeSource(args.file)
    sess = open_session(src, k=params.k, words_budget=args.budget, strict=args.strict)
    if args.iterative:
        res = iterative_path_cover(src, params, sess)
        cover = res.cover
        report = {
            "algorithm": "iterative-path-cover",
            "rounds": [m.size for m in res.rounds],
        }
        shape = f"rounds {report['rounds']}"
    else:
        res = two_phase_path_cover(src, params, sess)
        cover = res.cover
        report = {
            "algorithm": "two-phase-path-cover",
            "first_matching": res.first_matching.size,
            "second_matching": res.second_matching.size,
        }
        shape = f"matchings {res.first_matching.size} + {res.second_matching.size}"
    stream = res.report
    report.update(
        {
            "input": src.name,
            "n": src.n,
            "m": src.m,
            "epsilon": str(params.epsilon),
            "k": params.k,
            "cover_size": cover.size,
            "path_lengths": sorted(cover.path_lengths),
            "cover_edges": [[e.u, e.v] for e in cover.edges],
            "stream": stream.as_dict(),
        }
    )
    lines = [
        f"{report['algorithm']} on {src.name}: n={src.n} m={src.m} epsilon={params.epsilon}",
        f"  cover: {cover.size} edges in {len(cover.paths)} paths, {shape}",
        f"  stream: {stream.passes_used} passes, peak {stream.words_peak}"
        f" of {stream.words_budget} words",
    ]
    code = _OK
    if args.oracle:
        best = oracle_path_cover(load_edge_list(args.file)).size
        block: dict = {"best_cover": best, "ratio": _ratio(cover.size, best)}
        if args.iterative:
            block["bound_holds"] = None
            lines.append(f"  oracle: best cover {best}, ratio {block['ratio']}")
        else:
            p, q = params.epsilon.numerator, params.epsilon.denominator
            holds = 3 * cover.size * q >= 2 * (q - p) * best
            block["bound_holds"] = holds
            lines.append(
                f"  oracle: best cover {best}, ratio {block['ratio']},"
                f" bound {'holds' if holds else 'VIOLATED'}"
            )
            if not holds:
                code = _GUARANTEE
        report["oracle"] = block
    _emit(args, report, lines)
    return code


def _cmd_tsp12(args) -> int:
    params = ApproxParams.parse(args.epsilon)
    g = load_edge_list(args.file)
    if g.weighted:
        raise ValueError("tsp12 expects an unweighted edge list of the cost-1 pairs")
    inst = Tsp12Instance.from_graph(g)
    res = approx_tsp12(inst, params, words_budget=args.budget, strict=args.strict)
    stream = res.report
    report = {
        "algorithm": "tsp12-tour",
        "input": os.path.basename(args.file),
        "n": inst.n,
        "cost1_pairs": inst.m,
        "epsilon": str(params.epsilon),
        "k": params.k,
        "tour_cost": res.tour.cost,
        "tour_order": list(res.tour.order),
        "cover_size": res.mpc.cover.size,
        "stream": stream.as_dict(),
    }
    lines = [
        f"tsp12-tour on {report['input']}: n={inst.n}, {inst.m} cost-1 pairs,"
        f" epsilon={params.epsilon}",
        f"  tour cost {res.tour.cost} over a {res.mpc.cover.size}-edge cover",
        f"  stream: {stream.passes_used} passes, peak {stream.words_peak}"
        f" of {stream.words_budget} words",
    ]
    code = _OK
    if args.oracle:
        opt = oracle_tsp12(inst)
        holds = Fraction(res.tour.cost) <= (
            Fraction(4, 3) + params.epsilon + Fraction(1, inst.n)
        ) * opt
        report["oracle"] = {"optimum": opt, "ratio": _ratio(res.tour.cost, opt), "bound_holds": holds}
        lines.append(
            f"  oracle: optimum {opt}, ratio {report['oracle']['ratio']},"
            f" bound {'holds' if holds else 'VIOLATED'}"
        )
        if not holds:
            code = _GUARANTEE
    _emit(args, report, lines)
    return code


def _cmd_maxtsp(args) -> int:
    params = ApproxParams.parse(args.epsilon)
    g = load_edge_list(args.file)
    if not g.weighted:
        raise ValueError("maxtsp expects a weighted edge list covering every pair once")
    inst = MaxTspInstance(g.n, g.edges)
    res = approx_max_tsp(inst, params, words_budget=args.budget, strict=args.strict)
    stream = res.report
    report = {
        "algorithm": "max-tsp-tour",
        "input": os.path.basename(args.file),
        "n": inst.n,
        "m": inst.m,
        "epsilon": str(params.epsilon),
        "k": params.k,
        "tour_weight": res.tour.cost,
        "tour_order": list(res.tour.order),
        "cover_weight": res.cover.weight,
        "cover_size": res.cover.size,
        "stream": stream.as_dict(),
    }
    lines = [
        f"max-tsp-tour on {report['input']}: n={inst.n}, epsilon={params.epsilon}",
        f"  tour weight {res.tour.cost} over a cover of weight {res.cover.weight}",
        f"  stream: {stream.passes_used} passes, peak {stream.words_peak}"
        f" of {stream.words_budget} words",
    ]
    code = _OK
    if args.oracle:
        opt = oracle_max_tsp(inst)
        p, q = params.epsilon.numerator, params.epsilon.denominator
        holds = 12 * inst.n * res.tour.cost * q >= (7 * inst.n - 9) * (q - p) * opt
        report["oracle"] = {
            "optimum": opt,
            "ratio": _ratio(res.tour.cost, opt),
            "bound_holds": holds,
        }
        lines.append(
            f"  oracle: optimum {opt}, ratio {report['oracle']['ratio']},"
            f" bound {'holds' if holds else 'VIOLATED'}"
        )
        if not holds:
            code = _GUARANTEE
    _emit(args, report, lines)
    return code


def _cmd_gen(args) -> int:
    if args.what == "fixture":
        fx = builtin_fixture(args.name)
        save_edge_list(args.out, fx.graph)
        expected = " ".join(f"{k}={v}" for k, v in sorted(fx.expected.items()))
        print(f"wrote {args.out}: n={fx.graph.n} m={fx.graph.m} ({fx.notes}; {expected})")
        return _OK
    seed = args.seed if args.seed is not None else _default_seed()
    density = Fraction(args.density)
    if args.kind == "graph":
        g = gen_random_graph(args.n, seed, density)
    elif args.kind == "weighted":
        g = gen_random_weighted_graph(args.n, seed, density, args.max_weight)
    elif args.kind == "degree124":
        g = gen_degree124_graph(args.n, seed)
    elif args.kind == "tsp12":
        g = gen_random_tsp12(args.n, seed, density).cheap_graph()
    else:
        g = gen_random_max_tsp(args.n, seed, args.max_weight).graph()
    save_edge_list(args.out, g)
    print(f"wrote {args.out}: kind={args.kind} n={g.n} m={g.m} seed={seed}")
    return _OK


def _cmd_verify(args) -> int:
    names = list(SWEEPS) if args.suite == "all" else [args.suite]
    kwargs = {}
    if args.trials is not None:
        kwargs["trials"] = args.trials
    if args.seed is not None:
        kwargs["seed"] = args.seed
    suites: dict[str, dict] = {}
    all_ok = True
    lines: list[str] = []
    for name in names:
        outcome = SWEEPS[name](**kwargs)
        suites[name] = {
            "trials": outcome.trials,
            "checks": dict(sorted(outcome.checks.items())),
            "ok": outcome.ok,
        }
        all_ok = all_ok and outcome.ok
        lines.append(f"suite {name}: {outcome.trials} trials")
        for check, failures in sorted(outcome.checks.items()):
            verdict = "ok" if failures == 0 else f"{failures} FAILURES"
            lines.append(f"  {check}: {verdict}")
        for detail in outcome.details:
            lines.append(f"  ! {detail}")
    lines.append("all suites passed" if all_ok else "verification FAILED")
    _emit(args, {"suites": suites, "ok": all_ok}, lines)
    return _OK if all_ok else _GUARANTEE


def _build_parser() -> _Parser:
    parser = _Parser(prog="streampath", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    mpc = subs.add_parser("mpc", help="cover a graph with vertex-disjoint paths")
    _run_flags(mpc, iterative_flag=True)
    mpc.set_defaults(func=_cmd_mpc)

    tsp12 = subs.add_parser("tsp12", help="tour a (1,2)-cost instance")
    _run_flags(tsp12)
    tsp12.set_defaults(func=_cmd_tsp12)

    maxtsp = subs.add_parser("maxtsp", help="heavy tour of a complete weighted instance")
    _run_flags(maxtsp)
    maxtsp.set_defaults(func=_cmd_maxtsp)

    gen = subs.add_parser("gen", help="write instance files")
    gen_subs = gen.add_subparsers(dest="what", required=True)
    fx = gen_subs.add_parser("fixture", help="a named fixture with known expected values")
    fx.add_argument("name", choices=fixture_names())
    fx.add_argument("--out", required=True)
    fx.set_defaults(func=_cmd_gen)
    rnd = gen_subs.add_parser("random", help="a seeded random instance")
    rnd.add_argument("kind", choices=("graph", "weighted", "degree124", "tsp12", "maxtsp"))
    rnd.add_argument("--n", type=int, required=True)
    rnd.add_argument("--density", default="1/2", help="pair probability, a fraction")
    rnd.add_argument("--max-weight", type=int, default=20)
    rnd.add_argument("--seed", type=int, default=None, help="default: STREAMPATH_SEED or 0")
    rnd.add_argument("--out", required=True)
    rnd.set_defaults(func=_cmd_gen)

    verify = subs.add_parser("verify", help="run oracle sweeps")
    verify.add_argument("--suite", default="all", choices=("all",) + tuple(SWEEPS))
    verify.add_argument("--trials", type=int, default=None, help="override per-suite trial count")
    verify.add_argument("--seed", type=int, default=None, help="override per-suite seed")
    verify.add_argument("--json", action="store_true")
    verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"streampath: budget exceeded: {exc}", file=sys.stderr)
        return _BUDGET
    except (StreamFormatError, OracleLimitError, OSError) as exc:
        print(f"streampath: {exc}", file=sys.stderr)
        return _INPUT
    except ValueError as exc:
        print(f"streampath: {exc}", file=sys.stderr)
        return _INPUT


if __name__ == "__main__":
    sys.exit(main())
