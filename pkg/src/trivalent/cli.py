"""Command-line front end.

JSON on stdout is the canonical output; --format table is a display layer
over the same data.  Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .cache import Cache, default_dir
from .graphs import (
    GraphError,
    LabelledTrivalentGraph,
    automorphisms,
    find_arrow_orientation,
    make_arrow,
    reduce,
    validate,
)
from .linalg import BadPrimeError
from .morse import (
    TYPE_I,
    TYPE_II,
    GradedComplex,
    MorseError,
    check_complex,
    compute_propagator,
    contraction_identity_holds,
    dual_propagator,
    surviving_indices,
)
from .spaces import DEFAULT_PRIME_COUNT, GraphSpace, PrimeDisagreementError
from .surgery import (
    CONVENTION_DEFAULT,
    CONVENTIONS,
    SurgeryError,
    evaluate_full,
    evaluate_orbit,
)

KNOWN_DIMENSIONS = {1: 0, 2: 1, 3: 0, 4: 0, 5: 1}


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _prime_count(text: str) -> int:
    value = _positive(text)
    if value < 3:
        raise argparse.ArgumentTypeError("prime count must be at least 3")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gc",
        description="Spaces of trivalent graphs, propagators and surgery evaluation.",
    )
    parser.add_argument(
        "--format", choices=("json", "table"), default="json", help="output style"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_k(p, required=True):
        p.add_argument("-k", type=_positive, required=required, help="half the vertex count")
        p.add_argument(
            "--max-k",
            type=_positive,
            default=6,
            help="refuse computations beyond this k",
        )

    def add_cache(p):
        p.add_argument("--cache", help="cache directory (default: $GC_CACHE or user cache)")

    def add_jobs(p):
        p.add_argument("--jobs", type=_positive, default=1, help="worker count")

    p = sub.add_parser("enum", help="list graph classes at a given k")
    add_k(p)
    add_cache(p)

    p = sub.add_parser("dim", help="dimension of the quotient space at a given k")
    add_k(p)
    add_cache(p)
    add_jobs(p)
    p.add_argument(
        "--primes",
        type=_prime_count,
        default=DEFAULT_PRIME_COUNT,
        help="number of primes for the modular rank consensus",
    )

    p = sub.add_parser("reduce", help="class and normal form of a graph file")
    p.add_argument("file")
    add_cache(p)

    p = sub.add_parser("aut", help="automorphism counts of a graph file")
    p.add_argument("file")

    p = sub.add_parser("orient", help="find a source- and sink-free orientation")
    p.add_argument("file")

    p = sub.add_parser("surgery", help="evaluate the surgery sum for a graph file")
    p.add_argument("file")
    p.add_argument("--mode", choices=("orbit", "full"), default="orbit")
    p.add_argument(
        "--type-convention",
        choices=CONVENTIONS,
        default=CONVENTION_DEFAULT,
        help="which in/out pattern counts as type I",
    )
    add_cache(p)
    add_jobs(p)

    p = sub.add_parser("morse-propagator", help="contraction of an acyclic complex")
    p.add_argument("file")

    p = sub.add_parser("surviving", help="admissible index tuples per vertex type")

    p = sub.add_parser("selftest", help="run built-in consistency checks")
    p.add_argument("--max-k", type=_positive, default=3)
    add_cache(p)
    add_jobs(p)

    p = sub.add_parser("cache", help="inspect or manage the result cache")
    p.add_argument("action", choices=("status", "clear", "warm"))
    p.add_argument("-k", type=_positive, help="k to warm")
    add_cache(p)

    return parser


def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _graph_from_file(path: str) -> LabelledTrivalentGraph:
    data = _load_json(path)
    try:
        g = validate(data["vertices"], data["edges"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: not a graph file ({exc})")
    return g


def _arrow_from_file(path: str):
    data = _load_json(path)
    try:
        g = validate(data["vertices"], data["edges"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: not a graph file ({exc})")
    if "directions" in data:
        return make_arrow(g, [tuple(d) for d in data["directions"]])
    return find_arrow_orientation(g)


def _cache_from(args) -> Cache:
    directory = getattr(args, "cache", None) or default_dir()
    return Cache(directory)


def _check_k(args) -> int:
    if args.k > args.max_k:
        raise ValueError(f"k = {args.k} exceeds --max-k = {args.max_k}")
    return args.k


def cmd_enum(args):
    k = _check_k(args)
    space = GraphSpace(k, _cache_from(args))
    signed = [reduce(g).key for g in space.basis]
    return {
        "k": k,
        "classes": space.num_classes,
        "signed": signed,
        "zero": sorted(space.zero_keys),
    }


def cmd_dim(args):
    k = _check_k(args)
    space = GraphSpace(k, _cache_from(args))
    d = space.dimension(primes=args.primes, jobs=args.jobs)
    return {"k": k, "dimension": d}


def cmd_reduce(args):
    g = _graph_from_file(args.file)
    r = reduce(g)
    if r.is_zero:
        return {"class": "zero"}
    space = GraphSpace(g.k, _cache_from(args))
    nf = space.normal_form(space.class_vector(g))
    keys = [reduce(b).key for b in space.basis]
    return {
        "class": {"key": r.key, "sign": r.sign},
        "normal_form": {keys[i]: str(v) for i, v in sorted(nf.items())},
    }


def cmd_aut(args):
    g = _graph_from_file(args.file)
    gens, order, edge_order, vertex_order = automorphisms(g)
    return {
        "order": order,
        "edge_order": edge_order,
        "vertex_order": vertex_order,
        "generators": len(gens),
    }


def cmd_orient(args):
    g = _graph_from_file(args.file)
    a = find_arrow_orientation(g)
    out = g.to_json()
    out["directions"] = [list(d) for d in a.directions]
    return out


def cmd_surgery(args):
    a = _arrow_from_file(args.file)
    space = GraphSpace(a.graph.k, _cache_from(args))
    if args.mode == "orbit":
        report = evaluate_orbit(a, space, args.type_convention)
    else:
        report = evaluate_full(a, space, args.type_convention, jobs=args.jobs)
    return report.to_json()


def cmd_morse_propagator(args):
    data = _load_json(args.file)
    try:
        c = GradedComplex.from_json(data)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{args.file}: not a complex file ({exc})")
    check_complex(c)
    return compute_propagator(c).to_json()


def cmd_surviving(args):
    def encode(t):
        return [[list(ins), list(outs)] for ins, outs in surviving_indices(t)]

    return {"I": encode(TYPE_I), "II": encode(TYPE_II)}


def _selftest_checks(args):
    cache = _cache_from(args)
    for k in range(1, args.max_k + 1):
        expected = KNOWN_DIMENSIONS.get(k)
        got = GraphSpace(k, cache).dimension(jobs=args.jobs)
        yield f"dimension k={k}", expected is None or got == expected

    if args.max_k >= 2:
        space = GraphSpace(2, cache)
        k4 = LabelledTrivalentGraph(
            4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
        )
        nf = space.reduce_graph(k4)
        yield "complete graph class survives", nf != {}
        rpt = evaluate_orbit(find_arrow_orientation(k4), space)
        keys = [reduce(b).key for b in space.basis]
        yield "surgery matches reduction", rpt.result == {
            keys[i]: v for i, v in nf.items()
        }

    theta = LabelledTrivalentGraph(2, ((0, 1), (0, 1), (0, 1)))
    rpt = evaluate_orbit(find_arrow_orientation(theta), GraphSpace(1, cache))
    yield "triple edge evaluates to zero", rpt.result == {}
    _, order, _, _ = automorphisms(theta)
    yield "representative count", order * 8 == 2 ** 3 * 2 * 6

    c = GradedComplex((2, 2, 0, 0, 0), {1: [[2, 1], [1, 1]], 2: [[], []], 3: [], 4: []})
    g = compute_propagator(c)
    yield "contraction identity", contraction_identity_holds(c, g)
    dual = dual_propagator(c, g)
    yield "dual contraction identity", contraction_identity_holds(*dual)
    yield "propagator entries exact", all(
        isinstance(x, (int, Fraction)) for row in g.g(0) for x in row
    )

    one = surviving_indices(TYPE_I)
    two = surviving_indices(TYPE_II)
    yield "surviving tuple counts", len(one) == len(two) == 11
    yield "surviving tuples disjoint", not set(one) & set(two)


def cmd_selftest(args):
    checks = [{"name": name, "ok": ok} for name, ok in _selftest_checks(args)]
    return {"ok": all(c["ok"] for c in checks), "checks": checks}


def cmd_cache(args):
    cache = _cache_from(args)
    if args.action == "status":
        return {
            "directory": str(cache.directory),
            "entries": [{"file": name, "size": size} for name, size in cache.status()],
        }
    if args.action == "clear":
        return {"removed": cache.clear()}
    if args.k is None:
        raise ValueError("cache warm requires -k")
    space = GraphSpace(args.k, cache)
    space.relation_rows()
    space.normal_form({})
    return {
        "warmed": args.k,
        "files": len(cache.status()),
    }


_HANDLERS = {
    "enum": cmd_enum,
    "dim": cmd_dim,
    "reduce": cmd_reduce,
    "aut": cmd_aut,
    "orient": cmd_orient,
    "surgery": cmd_surgery,
    "morse-propagator": cmd_morse_propagator,
    "surviving": cmd_surviving,
    "selftest": cmd_selftest,
    "cache": cmd_cache,
}


def _render_table(payload) -> str:
    def cell(v):
        return v if isinstance(v, str) else json.dumps(v, separators=(",", ":"))

    items = payload.items() if isinstance(payload, dict) else enumerate(payload)
    rows = [(str(k), cell(v)) for k, v in items]
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = _HANDLERS[args.command](args)
    except (
        GraphError,
        SurgeryError,
        MorseError,
        PrimeDisagreementError,
        BadPrimeError,
        ValueError,
        OSError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.format == "table":
        print(_render_table(payload))
    else:
        print(json.dumps(payload, separators=(",", ":")))
    if args.command == "selftest" and not payload["ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
