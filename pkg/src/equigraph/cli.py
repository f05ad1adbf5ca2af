"""Command-line interface: gen, verify, reduce, dot and roundtrip.

Exit codes: 0 success, 2 validation failure, 3 not reducible or not
realizable, 4 I/O or schema error.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import documents
from .fpdata import FixedPointCollection, verify_all
from .models import cpn_graph, sphere_graph, z2_sharp_z2bar_graph, zn_graph
from .multigraph import GraphError, SignedMultigraph, fixed_point_collection, reverse_orientation, validate_graph
from .reduce4 import InvalidGKM, NotDescribable, generate4, reduce4, reduce4_gkm
from .reduce6 import NotRealizable, reduce6_data, reduce6_graph

EXIT_OK, EXIT_INVALID, EXIT_IRREDUCIBLE, EXIT_IO = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def default_seed() -> int:
    raw = os.environ.get("EQUIGRAPH_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"EQUIGRAPH_SEED must be an integer, got {raw!r}", EXIT_IO)


def _param(text: str, k: int):
    parts = [int(p) for p in text.split(",")]
    if len(parts) != k:
        raise CliError(f"parameter {text!r} needs {k} components", EXIT_IO)
    return parts[0] if k == 1 else parts


def _read(path: str) -> tuple[str, object]:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO)
    try:
        return text, documents.parse_document(text)
    except documents.DocumentError as exc:
        raise CliError(f"{path}: {exc}", EXIT_IO)


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO)


# ---------------------------------------------------------------- gen

MODEL_ARITY = {"sphere": None, "cpn": None, "z1": 3, "z2": 2, "zn": 4, "z2z2bar": 2, "random4": 0}


def build_model(kind: str, params: list[str], k: int, seed: int, steps: int) -> SignedMultigraph:
    arity = MODEL_ARITY.get(kind, -1)
    if arity == -1:
        raise CliError(f"unknown model {kind!r}; choose from {', '.join(MODEL_ARITY)}", EXIT_IO)
    if arity is not None and len(params) != arity:
        raise CliError(f"model {kind} takes {arity} parameters", EXIT_IO)
    try:
        if kind == "random4":
            return generate4(k, seed, steps)[0]
        if kind == "zn":
            return zn_graph(k, int(params[0]), *(_param(p, k) for p in params[1:]))
        ps = [_param(p, k) for p in params]
        if kind == "sphere":
            return sphere_graph(k, ps)
        if kind == "cpn":
            return cpn_graph(k, ps)
        if kind == "z1":
            return zn_graph(k, 1, *ps)
        if kind == "z2":
            return zn_graph(k, 2, ps[0], ps[1], ps[1])
        return z2_sharp_z2bar_graph(k, *ps)
    except (GraphError, ValueError) as exc:
        raise CliError(f"cannot build {kind}: {exc}", EXIT_INVALID)


def cmd_gen(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    g = build_model(args.model, args.params, args.k, seed, args.steps)
    if args.reversed:
        g = reverse_orientation(g)
    obj = fixed_point_collection(g) if args.data else g
    _write(args.output, documents.serialize(obj))
    return EXIT_OK


# ------------------------------------------------------------- verify


def verification_report(obj, effective: bool = True) -> tuple[bool, list[str]]:
    c = obj if isinstance(obj, FixedPointCollection) else fixed_point_collection(obj)
    lines, ok = [], True
    for name, v in verify_all(c).items():
        lines.append(f"{name}: {'ok' if v.ok else 'FAIL'} ({v.reason})")
        ok &= v.ok
    if isinstance(obj, SignedMultigraph):
        gv = validate_graph(obj, effective=effective)
        lines.append(f"structure: {'ok' if gv.ok else 'FAIL'}")
        lines += [f"  {m}" for m in gv.violations]
        ok &= gv.ok
    lines.append("verdict: " + ("all checks pass" if ok else "validation failed"))
    return ok, lines


def cmd_verify(args) -> int:
    _, obj = _read(args.input)
    ok, lines = verification_report(obj, effective=not args.non_effective)
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_INVALID


# ------------------------------------------------------------- reduce


def cmd_reduce(args) -> int:
    text, obj = _read(args.input)
    effective = not args.non_effective
    try:
        if args.dim == 4:
            if not isinstance(obj, SignedMultigraph):
                raise CliError("dimension 4 reduction needs a graph document", EXIT_IO)
            if args.gkm:
                engine, trace = "reduce4_gkm", reduce4_gkm(obj)
            else:
                if not validate_graph(obj, effective=effective).ok:
                    raise CliError("input graph fails validation", EXIT_INVALID)
                engine, trace = "reduce4", reduce4(obj, check=lambda h: validate_graph(h, effective=effective).ok)
        else:
            if args.level == "data":
                c = obj if isinstance(obj, FixedPointCollection) else fixed_point_collection(obj)
                engine, trace = "reduce6_data", reduce6_data(c)
            else:
                if not isinstance(obj, SignedMultigraph):
                    raise CliError("graph-level reduction needs a graph document", EXIT_IO)
                engine, trace = "reduce6_graph", reduce6_graph(obj, effective=effective)
    except InvalidGKM as exc:
        raise CliError(f"not a GKM graph: {exc}", EXIT_INVALID)
    except (NotRealizable, NotDescribable) as exc:
        raise CliError(f"not reducible: {exc}", EXIT_IRREDUCIBLE)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_IO)
    doc = documents.trace_to_doc(trace, engine, text)
    _write(args.output, documents.dumps(doc))
    if args.emit_dot_every_step:
        out = Path(args.emit_dot_every_step)
        try:
            out.mkdir(parents=True, exist_ok=True)
            for i, snap in enumerate(trace.snapshots()):
                if isinstance(snap, SignedMultigraph):
                    (out / f"step{i:03d}.dot").write_text(documents.dot_export(snap, f"step{i}"), encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot write DOT files: {exc}", EXIT_IO)
    if args.output not in (None, "-"):
        print(f"{engine}: {len(doc['steps'])} steps, reached empty: {doc['reached-empty']}", file=sys.stderr)
    return EXIT_OK if doc["reached-empty"] else EXIT_IRREDUCIBLE


# ---------------------------------------------------------------- dot


def cmd_dot(args) -> int:
    _, obj = _read(args.input)
    if not isinstance(obj, SignedMultigraph):
        raise CliError("dot needs a graph document", EXIT_IO)
    _write(args.output, documents.dot_export(obj))
    return EXIT_OK


# ---------------------------------------------------------- roundtrip


def roundtrip_one(k: int, seed: int, steps: int, max_vertices: int = 40) -> tuple[int, bool, str]:
    """Generate, reduce and validate every intermediate; (seed, ok, message)."""
    try:
        g, _ = generate4(k, seed, steps, max_vertices=max_vertices)
        trace = reduce4(g, check=lambda h: validate_graph(h, effective=True).ok)
    except (NotDescribable, GraphError, ValueError) as exc:
        return seed, False, str(exc)
    if not trace.final.is_empty():
        return seed, False, "did not reach the empty graph"
    return seed, True, f"{len(g.signs)} vertices, {len(trace.macro_steps())} macro-steps"


def cmd_roundtrip(args) -> int:
    base = default_seed() if args.seed is None else args.seed
    seeds = [base + i for i in range(args.count)]
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        results = list(pool.map(lambda s: roundtrip_one(args.k, s, args.steps, args.max_vertices), seeds))
    results.sort(key=lambda r: r[0])
    failures = 0
    for seed, ok, msg in results:
        print(f"seed {seed}: {'ok' if ok else 'FAIL'} ({msg})")
        failures += not ok
    print(f"{len(results) - failures}/{len(results)} reduced to the empty graph")
    return EXIT_OK if failures == 0 else EXIT_IRREDUCIBLE


# --------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="equigraph", description="Signed labeled multigraphs of torus actions with isolated fixed points.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="emit a standard model as a graph or collection document")
    g.add_argument("model", help=", ".join(MODEL_ARITY))
    g.add_argument("params", nargs="*", help="integers, or comma-separated vectors when k > 1")
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--reversed", action="store_true", help="reverse every vertex sign")
    g.add_argument("--data", action="store_true", help="emit the fixed point collection instead of the graph")
    g.add_argument("--seed", type=int, default=None, help="seed for random4 (default $EQUIGRAPH_SEED or 0)")
    g.add_argument("--steps", type=int, default=20, help="growth steps for random4")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="run every validator and print a report")
    v.add_argument("input")
    v.add_argument("--non-effective", action="store_true", help="skip the lattice spanning check")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reduce", help="reduce a graph or collection and write a trace")
    r.add_argument("input")
    r.add_argument("--dim", type=int, choices=(4, 6), required=True)
    r.add_argument("--level", choices=("graph", "data"), default="graph")
    r.add_argument("--gkm", action="store_true", help="dimension 4: treat the input as an unsigned GKM graph")
    r.add_argument("--non-effective", action="store_true", help="skip the lattice spanning check")
    r.add_argument("--emit-dot-every-step", metavar="DIR")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_reduce)

    d = sub.add_parser("dot", help="export a graph document as DOT")
    d.add_argument("input")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_dot)

    t = sub.add_parser("roundtrip", help="generate and reduce random dimension-4 graphs")
    t.add_argument("--count", type=int, default=20)
    t.add_argument("--k", type=int, default=1)
    t.add_argument("--steps", type=int, default=20)
    t.add_argument("--max-vertices", type=int, default=40)
    t.add_argument("--seed", type=int, default=None, help="first seed (default $EQUIGRAPH_SEED or 0)")
    t.add_argument("--workers", type=int, default=1)
    t.set_defaults(func=cmd_roundtrip)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"equigraph: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
