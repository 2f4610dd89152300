"""The ``hamwheel`` command line: one subcommand per analysis, JSON on stdout or --out.

Exit status is 0 on success, 1 on usage or input errors and 2 when a check
ran to completion and found a verified failure (a violating cut, a non-beta
pair, a failed pipeline stage, an inequality that does not hold).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import ExtractionFailed, HamwheelError, NotBetaGraph, PipelineError
from .graph import Graph
from .io import decode_graph6, encode_graph6, load_graph

SCHEMA = "1"
VERIFIED_FAILURE = 2
USAGE_ERROR = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def derive_seed(seed: int, name: str) -> int:
    """Independent per-stream seed derived from the run seed and a stream name."""
    return random.Random(f"{seed}:{name}").getrandbits(63)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 1/5, got {text!r}") from None


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("HAMWHEEL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"HAMWHEEL_THREADS must be an integer, got {env!r}") from None
    return 1


def _load(args) -> Graph:
    from .generators import generate

    if args.graph6:
        g = load_graph(args.graph6, "graph6")
    elif args.edgelist:
        g = load_graph(args.edgelist, "edgelist")
    elif args.family:
        g = generate(args.family, derive_seed(args.seed, "family"))
    else:
        raise UsageError("supply a graph with --graph6, --edgelist or --family")
    back = decode_graph6(encode_graph6(g))
    if back != g:
        raise HamwheelError("graph6 round trip changed the input graph")
    return g


def _split_timing(obj):
    """Remove every ``timing`` entry from a nested report; return (clean, timings)."""
    timings = {}

    def walk(x, path):
        if isinstance(x, dict):
            out = {}
            for k, v in x.items():
                if k == "timing":
                    timings[".".join(path) or "result"] = v
                else:
                    out[k] = walk(v, path + [k])
            return out
        if isinstance(x, list):
            return [walk(v, path) for v in x]
        return x

    return walk(obj, []), timings


# -- commands -------------------------------------------------------------------------


def cmd_count(args, g):
    from .hamcount import Budget, count_hamiltonian_subsets

    hc = count_hamiltonian_subsets(g, Budget(max_n=args.max_n, time_ms=args.budget_ms, threads=_threads(args)))
    return hc.to_dict(), 0


def cmd_crux(args, g):
    from .crux import check_crux_scaling, crux_exact

    cert = crux_exact(g, args.alpha)
    out = cert.to_dict()
    code = 0
    if args.alpha_prime is not None:
        rep = check_crux_scaling(g, args.alpha, args.alpha_prime)
        out["scaling"] = rep.to_dict()
        code = 0 if rep.holds else VERIFIED_FAILURE
    return out, code


def _expander_params(args):
    from .expander import ExpanderParams

    p = ExpanderParams.standard(k=args.k)
    if args.eps1 is not None:
        p = ExpanderParams(eps1=float(args.eps1), k=args.k, C=p.C)
    return p


def cmd_extract(args, g):
    from .expander import Probed, extract_expander

    p = _expander_params(args)
    probed = Probed(probes=args.probes, seed=derive_seed(args.seed, "extract"))
    try:
        res = extract_expander(g, p, probed=probed, strict=not args.no_strict)
    except ExtractionFailed as exc:
        return {
            "error": "extraction_failed",
            "message": str(exc),
            "best": exc.best.sorted() if exc.best is not None else None,
            "violating": exc.violating.sorted() if exc.violating is not None else None,
        }, VERIFIED_FAILURE
    out = res.to_dict()
    out["params"] = p.to_dict()
    return out, 0


def cmd_wheel(args, g):
    from .expander import Probed
    from .wheel import PipelineParams, heavy_vertex

    base = PipelineParams.small() if g.n < 60 else PipelineParams()
    overrides = {
        k: v
        for k, v in (
            ("Lmin", args.lmin),
            ("Lmax", args.lmax),
            ("conn_cap", args.conn_cap),
            ("target_cycles", args.target_cycles),
        )
        if v is not None
    }
    p = dataclasses.replace(base, **overrides, exp=_expander_params(args))
    wseed = derive_seed(args.seed, "wheel")
    try:
        res = heavy_vertex(g, args.alpha, p, seed=wseed, probed=Probed(probes=args.probes, seed=wseed))
    except PipelineError as exc:
        return {"error": "pipeline_failed", "stage": exc.stage, "message": str(exc), "partial": exc.partial}, VERIFIED_FAILURE
    out = res.to_dict()
    out["params"] = p.to_dict()
    return out, 0


def cmd_beta(args, g):
    from .beta import BetaParams, check_beta_graph, count_lower_bound_beta, ndl_to_beta
    from .expander import EXHAUSTIVE, Probed

    if args.beta is None:
        raise UsageError("beta needs --beta P/Q")
    p = BetaParams(args.beta, g.n)
    bseed = derive_seed(args.seed, "beta")
    level = EXHAUSTIVE if g.n <= 22 else Probed(probes=args.probes, seed=bseed)
    out = {}
    if g.is_regular() and g.n <= 500:
        from .spectral import second_eigenvalue

        info = second_eigenvalue(g)
        out["spectral"] = {"d": info.d, "lambda": info.lam, "ndl_implies_beta": ndl_to_beta(info, args.beta)}
    chk = check_beta_graph(g, p, level)
    out["beta_check"] = chk.to_dict()
    if not chk.holds:
        return out, VERIFIED_FAILURE
    try:
        rep = count_lower_bound_beta(g, p, samples=args.samples, seed=bseed, level=level)
    except NotBetaGraph as exc:
        out["error"] = "not_beta_graph"
        out["pair"] = [sorted(x) for x in exc.pair]
        return out, VERIFIED_FAILURE
    out["bound"] = rep.to_dict()
    return out, 0 if rep.holds in (True, None) else VERIFIED_FAILURE


def cmd_census(args, g=None):
    from .hamcount import exhaustive_min_search

    return exhaustive_min_search(args.nmax, args.mindeg).to_dict(), 0


def cmd_bound(args, g=None):
    from .bound import BoundParams, evaluate_main_bound

    bp = BoundParams(B=args.B, beta_const=args.beta_const, alpha=args.alpha)
    return evaluate_main_bound(args.n, args.t, bp), 0


def cmd_spectral(args, g):
    from .spectral import mixing_check, second_eigenvalue

    info = second_eigenvalue(g)
    mix = mixing_check(g, trials=args.trials, seed=derive_seed(args.seed, "mixing"), info=info)
    out = {"spectral": info.to_dict(), "mixing": mix.to_dict()}
    return out, 0 if mix.holds else VERIFIED_FAILURE


COMMANDS = {
    "count": (cmd_count, True, "exact number of Hamiltonian subsets and per-vertex counts"),
    "crux": (cmd_crux, True, "exact crux size c_alpha(G) with a witness"),
    "extract": (cmd_extract, True, "extract a certified sublinear expander subgraph"),
    "wheel": (cmd_wheel, True, "run the wheel pipeline and report a heavy vertex"),
    "beta": (cmd_beta, True, "beta-graph check and the beta counting bound"),
    "census": (cmd_census, False, "minimum h over all labelled graphs with n <= nmax and min degree >= mindeg"),
    "bound": (cmd_bound, False, "evaluate the crux-based lower bound in high precision"),
    "spectral": (cmd_spectral, True, "second eigenvalue and expander mixing lemma trials"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--budget-ms", type=int, default=None)
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--format", choices=("json", "text"), default="json")

    graph = _Parser(add_help=False)
    src = graph.add_mutually_exclusive_group()
    src.add_argument("--graph6", metavar="FILE")
    src.add_argument("--edgelist", metavar="FILE")
    src.add_argument("--family", metavar="SPEC", help="e.g. complete:4, random_regular:2000,3")
    graph.add_argument("--alpha", type=_fraction, default=Fraction(1, 5))
    graph.add_argument("--alpha-prime", type=_fraction, default=None)
    graph.add_argument("--beta", type=_fraction, default=None)
    graph.add_argument("--eps1", type=_fraction, default=None)
    graph.add_argument("--k", type=int, default=15)
    graph.add_argument("--probes", type=int, default=32)
    graph.add_argument("--no-strict", action="store_true", help="allow eps1 outside the extraction guarantee")
    graph.add_argument("--max-n", type=int, default=18)
    graph.add_argument("--samples", type=int, default=16)
    graph.add_argument("--trials", type=int, default=100)
    graph.add_argument("--lmin", type=int, default=None)
    graph.add_argument("--lmax", type=int, default=None)
    graph.add_argument("--conn-cap", type=int, default=None)
    graph.add_argument("--target-cycles", type=int, default=None)

    parser = _Parser(prog="hamwheel", description="Hamiltonian subsets, cruxes, expanders and wheels.")
    parser.add_argument("--version", action="version", version=f"hamwheel {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, needs_graph, help_text) in COMMANDS.items():
        parents = [common, graph] if needs_graph else [common]
        sp = sub.add_parser(name, parents=parents, help=help_text, description=help_text)
        if name == "census":
            sp.add_argument("--nmax", type=int, required=True)
            sp.add_argument("--mindeg", type=int, required=True)
        if name == "bound":
            sp.add_argument("--n", type=float, required=True)
            sp.add_argument("--t", type=float, required=True)
            sp.add_argument("--B", type=float, default=1.0)
            sp.add_argument("--beta-const", type=float, default=None)
            sp.add_argument("--alpha", type=_fraction, default=Fraction(1, 5))
    return parser


def _text(report: dict, indent: int = 0) -> str:
    lines = []
    for k, v in report.items():
        if isinstance(v, dict):
            lines.append(" " * indent + f"{k}:")
            lines.append(_text(v, indent + 2))
        else:
            s = json.dumps(v)
            lines.append(" " * indent + f"{k}: {s if len(s) <= 120 else s[:117] + '...'}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fn, needs_graph, _ = COMMANDS[args.command]
    t0 = time.perf_counter()
    try:
        g = _load(args) if needs_graph else None
        result, code = fn(args, g)
    except UsageError as exc:
        print(f"hamwheel: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (HamwheelError, ValueError, OSError) as exc:
        print(f"hamwheel: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE_ERROR
    clean, timings = _split_timing(result)
    report = {"schema": SCHEMA, "command": args.command, "seed": args.seed, **clean}
    if g is not None:
        report["input"] = {"n": g.n, "m": g.m, "graph6": encode_graph6(g).decode("ascii")}
    timings["total_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    report["timing"] = timings
    text = json.dumps(report, sort_keys=True, indent=2) if args.format == "json" else _text(report)
    if args.out:
        args.out.write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
