"""JSON documents for graphs, collections and traces, plus DOT export."""
from __future__ import annotations

import hashlib
import json

from .algebra import InvalidWeight, canonical_weight
from .fpdata import FixedPointCollection, FixedPointDatum, T62Move, make_datum
from .multigraph import GraphError, SignedMultigraph, make_graph


class DocumentError(ValueError):
    """Malformed document.  `path` names the offending field, if any."""

    def __init__(self, message: str, path: str = "", line: int | None = None, column: int | None = None):
        where = f" at {path}" if path else ""
        if line is not None:
            where += f" (line {line}, column {column})"
        super().__init__(message + where)
        self.path, self.line, self.column = path, line, column


# --------------------------------------------------------------- helpers


def _vec(w) -> list[int]:
    return list(w)


def _int(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(f"expected an integer, got {x!r}", path)
    return x


def _weight(x, k: int, path: str) -> tuple[int, ...]:
    if k == 1 and isinstance(x, int) and not isinstance(x, bool):
        x = [x]
    if not isinstance(x, list):
        raise DocumentError(f"expected a {k}-vector, got {x!r}", path)
    if len(x) != k:
        raise DocumentError(f"expected {k} entries, got {len(x)}", path)
    w = tuple(_int(c, f"{path}[{i}]") for i, c in enumerate(x))
    if not any(w):
        raise DocumentError("weights must be nonzero", path)
    return w


def _sign(x, path: str) -> int:
    if x in ("+", "+1"):
        return 1
    if x in ("-", "-1"):
        return -1
    if _int(x, path) not in (1, -1):
        raise DocumentError(f"sign must be +1 or -1, got {x!r}", path)
    return x


def _field(obj: dict, key: str, path: str = ""):
    if key not in obj:
        raise DocumentError(f"missing field {key!r}", path or "<root>")
    return obj[key]


def _list(x, path: str) -> list:
    if not isinstance(x, list):
        raise DocumentError(f"expected a list, got {type(x).__name__}", path)
    return x


# --------------------------------------------------------------- graphs


def graph_to_doc(g: SignedMultigraph) -> dict:
    return {
        "k": g.k,
        "n": g.n,
        "vertices": [{"id": v, "sign": g.signs[v]} for v in g.vertices],
        "edges": [{"u": e.u, "v": e.v, "label": _vec(e.label)} for e in g.edges],
    }


def graph_from_doc(doc: dict) -> SignedMultigraph:
    k = _int(_field(doc, "k"), "k")
    n = _int(_field(doc, "n"), "n")
    if k < 1 or n < 0:
        raise DocumentError("k must be positive and n non-negative", "k" if k < 1 else "n")
    verts = []
    for i, v in enumerate(_list(_field(doc, "vertices"), "vertices")):
        p = f"vertices[{i}]"
        if not isinstance(v, dict):
            raise DocumentError("expected an object", p)
        vid = _field(v, "id", p)
        if not isinstance(vid, str) or not vid:
            raise DocumentError("vertex id must be a non-empty string", p + ".id")
        verts.append((vid, _sign(_field(v, "sign", p), p + ".sign")))
    ids = {v for v, _ in verts}
    if len(ids) != len(verts):
        raise DocumentError("duplicate vertex id", "vertices")
    edges = []
    for i, e in enumerate(_list(_field(doc, "edges"), "edges")):
        p = f"edges[{i}]"
        if not isinstance(e, dict):
            raise DocumentError("expected an object", p)
        u, v = _field(e, "u", p), _field(e, "v", p)
        for name, x in (("u", u), ("v", v)):
            if x not in ids:
                raise DocumentError(f"unknown vertex {x!r}", f"{p}.{name}")
        edges.append((u, v, _weight(_field(e, "label", p), k, p + ".label")))
    try:
        return make_graph(k, n, verts, edges)
    except (GraphError, InvalidWeight) as exc:
        raise DocumentError(str(exc), "edges") from exc


# ---------------------------------------------------------- collections


def datum_to_doc(d: FixedPointDatum) -> dict:
    return {"sign": d.sign, "weights": [_vec(w) for w in d.weights]}


def collection_to_doc(c: FixedPointCollection) -> dict:
    return {"k": c.k, "n": c.n, "points": [datum_to_doc(d) for d in c.points]}


def collection_from_doc(doc: dict) -> FixedPointCollection:
    k = _int(_field(doc, "k"), "k")
    n = _int(_field(doc, "n"), "n")
    if k < 1 or n < 1:
        raise DocumentError("k and n must be positive", "k" if k < 1 else "n")
    pts = []
    for i, pt in enumerate(_list(_field(doc, "points"), "points")):
        p = f"points[{i}]"
        if not isinstance(pt, dict):
            raise DocumentError("expected an object", p)
        sign = _sign(_field(pt, "sign", p), p + ".sign")
        ws = _list(_field(pt, "weights", p), p + ".weights")
        if len(ws) != n:
            raise DocumentError(f"expected {n} weights, got {len(ws)}", p + ".weights")
        pts.append(make_datum(sign, [_weight(w, k, f"{p}.weights[{j}]") for j, w in enumerate(ws)]))
    return FixedPointCollection(k, n, tuple(pts))


# ---------------------------------------------------------------- text


def to_doc(obj) -> dict:
    if isinstance(obj, SignedMultigraph):
        return graph_to_doc(obj)
    if isinstance(obj, FixedPointCollection):
        return collection_to_doc(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def serialize(obj) -> str:
    return dumps(to_doc(obj))


def load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"syntax error: {exc.msg}", line=exc.lineno, column=exc.colno) from exc


def parse_document(text: str) -> SignedMultigraph | FixedPointCollection:
    """Parse a graph document (has "vertices") or a collection document (has "points")."""
    doc = load_json(text)
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object")
    if "vertices" in doc or "edges" in doc:
        return graph_from_doc(doc)
    if "points" in doc:
        return collection_from_doc(doc)
    raise DocumentError("expected a graph (vertices, edges) or a collection (points)")


def input_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# --------------------------------------------------------------- traces


def move_to_doc(m: T62Move) -> dict:
    return {
        "op": m.op_id,
        "A": m.A,
        "B": m.B,
        "C": m.C,
        "orientation": m.orientation,
        "removed": [str(d) for d in m.removed],
        "added": [str(d) for d in m.added],
    }


def _plain(x):
    if isinstance(x, (tuple, list)):
        return [_plain(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    return x


def trace_to_doc(trace, engine: str, source_text: str) -> dict:
    """Trace document: one record per step and one snapshot per state.

    Works for both the four- and six-dimensional trace types.
    """
    steps = []
    for s in trace.steps:
        rec = {"kind": s.kind, "macro": s.macro, "operands": _plain(s.operands)}
        if getattr(s, "move", None) is not None:
            rec["move"] = move_to_doc(s.move)
        steps.append(rec)
    snaps = trace.snapshots()
    doc = {
        "engine": engine,
        "input-hash": input_hash(source_text),
        "reached-empty": len(snaps[-1]) == 0 if isinstance(snaps[-1], FixedPointCollection) else snaps[-1].is_empty(),
        "steps": steps,
        "snapshots": [to_doc(x) for x in snaps],
    }
    if hasattr(trace, "backtracked"):
        doc["backtracked"] = trace.backtracked
    return doc


# ------------------------------------------------------------------ DOT


def _label(w) -> str:
    cw, _ = canonical_weight(w)
    return str(cw[0]) if len(cw) == 1 else "(" + ",".join(map(str, cw)) + ")"


def dot_export(g: SignedMultigraph, name: str = "G") -> str:
    """Deterministic DOT text; nodes and edges in sorted order."""
    lines = [f"graph {json.dumps(name)} {{"]
    for v in sorted(g.signs):
        s = "+" if g.signs[v] > 0 else "-"
        lines.append(f"  {json.dumps(v)} [label={json.dumps(f'{v},{s}')}];")
    rows = sorted((min(e.u, e.v), max(e.u, e.v), _label(e.label)) for e in g.edges)
    for u, v, lab in rows:
        lines.append(f"  {json.dumps(u)} -- {json.dumps(v)} [label={json.dumps(lab)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
