"""Command-line surface.

Every invocation writes exactly one JSON document to stdout (plus optional
output files) and maps failures to exit codes: 0 success, 1 usage, 2
validation, 3 theorem-audit failure. All randomness takes an explicit
--seed with a fixed default; floats are printed with 17 significant digits
and rationals as "num/den", so identical invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import bounds, sampling, spectral, splitter
from ._accel import backend_name
from .entropy import (
    JointDistribution,
    Kernel,
    extend_independent,
    parse_expression,
    uniform_pair,
)
from .errors import IngletonError, TheoremViolation
from .graphs import (
    BiregularBipartiteGraph,
    build_grassmann_graph,
    build_polynomial_graph,
    build_projective_plane,
    write_graph,
)
from .search import SearchConfig, run_search
from .suites import SUITES


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ------------------------------------------------------------- stable JSON

def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        return "null"
    s = format(x, ".17g")
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"
    return s


def _dump(obj, parts):
    if obj is None:
        parts.append("null")
    elif obj is True:
        parts.append("true")
    elif obj is False:
        parts.append("false")
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, Fraction):
        parts.append(f'"{obj.numerator}/{obj.denominator}"')
    elif isinstance(obj, (int, np.integer)):
        parts.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        parts.append(_fmt_float(float(obj)))
    elif isinstance(obj, dict):
        parts.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                parts.append(", ")
            parts.append(json.dumps(str(key)))
            parts.append(": ")
            _dump(obj[key], parts)
        parts.append("}")
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for i, item in enumerate(obj):
            if i:
                parts.append(", ")
            _dump(item, parts)
        parts.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def stable_json(obj) -> str:
    parts = []
    _dump(obj, parts)
    return "".join(parts)


def _emit(doc):
    sys.stdout.write(stable_json(doc) + "\n")


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_graph(path) -> BiregularBipartiteGraph:
    return BiregularBipartiteGraph.from_json_dict(_load_json(path))


def _load_dist(path) -> JointDistribution:
    return JointDistribution.from_json_dict(_load_json(path))


# ----------------------------------------------------------------- commands

def _cmd_graph_gen(args):
    if args.family == "projective-plane":
        graph = build_projective_plane(args.q)
    elif args.family == "poly":
        if args.k is None:
            raise UsageError("--family poly requires --k")
        graph = build_polynomial_graph(args.q, args.k)
    else:
        if args.n is None or args.k is None or args.l is None:
            raise UsageError("--family grassmann requires --n, --k and --l")
        graph = build_grassmann_graph(args.q, args.n, args.k, args.l)
    if args.output:
        write_graph(graph, args.output)
        return {
            "family": list(graph.family),
            "x_size": graph.x_size,
            "y_size": graph.y_size,
            "edge_count": len(graph.edges),
            "output": args.output,
        }
    return graph.to_json_dict()


def _cmd_graph_validate(args):
    graph = _load_graph(args.input)
    d1 = len(graph.edges) // graph.x_size
    d2 = len(graph.edges) // graph.y_size
    return {
        "valid": True,
        "x_size": graph.x_size,
        "y_size": graph.y_size,
        "edge_count": len(graph.edges),
        "d1": d1,
        "d2": d2,
    }


def _cmd_spectrum(args):
    graph = _load_graph(args.input)
    return spectral.singular_values(graph).to_json_dict()


def _cmd_mixing(args):
    graph = _load_graph(args.input)
    summary = spectral.singular_values(graph)
    rng = sampling.spawn_rngs(args.seed, 1)[0]
    violations = 0
    min_slack = None
    for _ in range(args.samples):
        xs = sampling.random_subset(
            rng, graph.x_size, int(rng.integers(1, graph.x_size + 1))
        )
        ys = sampling.random_subset(
            rng, graph.y_size, int(rng.integers(1, graph.y_size + 1))
        )
        res = spectral.mixing_check(graph, xs, ys, summary)
        slack = res.bound - abs(res.observed - res.expected)
        if min_slack is None or slack < min_slack:
            min_slack = slack
        if not res.holds:
            violations += 1
    doc = {
        "samples": args.samples,
        "seed": args.seed,
        "violations": violations,
        "min_slack": min_slack,
        "lambda1": summary.lambda1,
        "lambda2": summary.lambda2,
    }
    code = 3 if violations else 0
    return doc, code


def _cmd_entropy_eval(args):
    dist = _load_dist(args.input)
    query = parse_expression(args.expr)
    return {"expr": args.expr, "value": query.evaluate(dist)}


def _cmd_split(args):
    dist = _load_dist(args.input)
    if dist.arity == 1:
        res = splitter.split_single(dist)
    else:
        res = splitter.split_tuple(dist)
    return res.to_json_dict()


def _cmd_certify(args):
    graph = _load_graph(args.input)
    pair = uniform_pair(graph)
    doc = _load_json(args.kernels)
    atom_order = [tuple(t) for t in doc["atoms"]]
    kernel_a = Kernel.from_json_rows(atom_order, doc["a"])
    kernel_b = Kernel.from_json_rows(atom_order, doc["b"])
    dist = extend_independent(pair, kernel_a, kernel_b)
    config = bounds.BoundConfig(epsilon0=args.epsilon0)
    report = bounds.certified_main(
        dist, ((0,), (1,), (2,), (3,)), graph, config=config
    )
    return report.to_json_dict()


def _cmd_search(args):
    graph = _load_graph(args.input)
    config = SearchConfig(
        alphabet_a=args.alphabet_a,
        alphabet_b=args.alphabet_b,
        strategy=args.strategy,
        restarts=args.restarts,
        max_steps=args.max_steps,
        step_scale=args.step_scale,
        seed=args.seed,
    )
    pair = uniform_pair(graph)
    report = run_search(pair, config)
    atom_order = list(pair.atoms.keys())
    doc = report.to_json_dict(atom_order)
    doc["atoms"] = [list(t) for t in atom_order]
    doc["strategy"] = args.strategy
    doc["seed"] = args.seed
    return doc


def _cmd_verify(args):
    report = SUITES[args.suite](seed=args.seed)
    doc = report.to_json_dict()
    elapsed = doc.pop("elapsed_seconds")
    print(
        f"suite {args.suite}: {doc['checks']} checks, "
        f"{doc['violations']} violations, {elapsed:.1f}s [{backend_name()}]",
        file=sys.stderr,
    )
    code = 0 if report.passed() else 3
    return doc, code


def build_parser() -> _Parser:
    parser = _Parser(prog="ingleton", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    graph = sub.add_parser("graph", help="generate or validate graph files")
    gsub = graph.add_subparsers(dest="graph_command", required=True)
    gen = gsub.add_parser("gen", help="construct a named graph family")
    gen.add_argument(
        "--family",
        required=True,
        choices=["projective-plane", "poly", "grassmann"],
    )
    gen.add_argument("--q", type=int, required=True)
    gen.add_argument("--k", type=int, default=None)
    gen.add_argument("--l", type=int, default=None)
    gen.add_argument("--n", type=int, default=None)
    gen.add_argument("-o", "--output", default=None)
    gen.set_defaults(handler=_cmd_graph_gen)
    val = gsub.add_parser("validate", help="re-validate a graph file")
    val.add_argument("-i", "--input", required=True)
    val.set_defaults(handler=_cmd_graph_validate)

    spec_p = sub.add_parser("spectrum", help="singular values of a graph")
    spec_p.add_argument("-i", "--input", required=True)
    spec_p.set_defaults(handler=_cmd_spectrum)

    mix = sub.add_parser("mixing", help="random mixing-bound checks")
    mix.add_argument("-i", "--input", required=True)
    mix.add_argument("--samples", type=int, default=100)
    mix.add_argument("--seed", type=int, default=0)
    mix.set_defaults(handler=_cmd_mixing)

    ent = sub.add_parser("entropy", help="entropy queries on distributions")
    esub = ent.add_subparsers(dest="entropy_command", required=True)
    ev = esub.add_parser("eval", help="evaluate an information expression")
    ev.add_argument("-i", "--input", required=True)
    ev.add_argument("--expr", required=True)
    ev.set_defaults(handler=_cmd_entropy_eval)

    spl = sub.add_parser("split", help="dyadic split of a distribution")
    spl.add_argument("-i", "--input", required=True)
    spl.set_defaults(handler=_cmd_split)

    cert = sub.add_parser("certify", help="certified Ingleton lower bound")
    cert.add_argument("-i", "--input", required=True)
    cert.add_argument("--kernels", required=True)
    cert.add_argument("--epsilon0", type=float, default=1.0)
    cert.set_defaults(handler=_cmd_certify)

    srch = sub.add_parser("search", help="minimize Ingleton over kernels")
    srch.add_argument("-i", "--input", required=True)
    srch.add_argument(
        "--strategy",
        choices=["exhaustive", "random", "local"],
        default="local",
    )
    srch.add_argument("--alphabet-a", type=int, default=2)
    srch.add_argument("--alphabet-b", type=int, default=2)
    srch.add_argument("--restarts", type=int, default=20)
    srch.add_argument("--max-steps", type=int, default=200)
    srch.add_argument("--step-scale", type=float, default=0.25)
    srch.add_argument("--seed", type=int, default=0)
    srch.set_defaults(handler=_cmd_search)

    ver = sub.add_parser("verify", help="run a property suite")
    ver.add_argument(
        "--suite", required=True, choices=sorted(SUITES.keys())
    )
    ver.add_argument("--seed", type=int, default=0)
    ver.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        result = args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except TheoremViolation as exc:
        print(f"theorem audit failed: {exc}", file=sys.stderr)
        return 3
    except IngletonError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if isinstance(result, tuple):
        doc, code = result
    else:
        doc, code = result, 0
    _emit(doc)
    return code


if __name__ == "__main__":
    sys.exit(main())
