"""Dimension four: random generation by the four building operations and
reduction back to the empty graph by self connected sums and blow ups.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable

from .algebra import Weight, add, as_weight, canonical_weight, dot, multiple_of, neg, spans_lattice, sub
from .fpdata import make_datum
from .multigraph import (
    Edge,
    GraphError,
    SignedMultigraph,
    blow_up,
    empty_graph,
    reverse_edge,
    self_connected_sum,
    validate_graph,
    vertex_datum,
)


class NotDescribable(ValueError):
    """The graph cannot describe a four-manifold: no reduction case applies."""


class InvalidGKM(ValueError):
    """Labels at some vertex are not independent."""


@dataclass
class TraceStep:
    kind: str
    operands: dict
    graph: SignedMultigraph
    macro: int = 0


@dataclass
class Trace4:
    initial: SignedMultigraph
    steps: list[TraceStep] = field(default_factory=list)
    mode: str = "reduce"

    @property
    def final(self) -> SignedMultigraph:
        return self.steps[-1].graph if self.steps else self.initial

    def snapshots(self) -> list[SignedMultigraph]:
        return [self.initial] + [s.graph for s in self.steps]

    def macro_steps(self) -> list[list[TraceStep]]:
        out: dict[int, list[TraceStep]] = {}
        for s in self.steps:
            out.setdefault(s.macro, []).append(s)
        return [out[m] for m in sorted(out)]


# ------------------------------------------------------------ generation


def add_minimal(g: SignedMultigraph, A, B, ids: tuple[str, str]) -> SignedMultigraph:
    A, B = as_weight(A, g.k), as_weight(B, g.k)
    x, y = ids
    if x in g.signs or y in g.signs:
        raise GraphError("vertex id in use")
    signs = {**g.signs, x: 1, y: -1}
    return SignedMultigraph(g.k, g.n, signs, g.edges + (Edge(x, y, A), Edge(x, y, B)))


def subdivide(g: SignedMultigraph, e: int, D, sign_q: int, ids: tuple[str, str]) -> SignedMultigraph:
    """Replace the C-edge q1-q2 by q1-q (C), q-q' (D), q'-q2 (C) with opposite signs on q, q'."""
    D = as_weight(D, g.k)
    old = g.edges[e]
    q, q2 = ids
    if q in g.signs or q2 in g.signs:
        raise GraphError("vertex id in use")
    edges = g.edges[:e] + g.edges[e + 1:] + (Edge(old.u, q, old.label), Edge(q, q2, D), Edge(q2, old.v, old.label))
    return SignedMultigraph(g.k, g.n, {**g.signs, q: sign_q, q2: -sign_q}, edges)


def split_vertex(g: SignedMultigraph, v: str, ids: tuple[str, str]) -> SignedMultigraph:
    """Replace v (edges E, F) by an (E+F)-edge v'-v'' with v' on E and v'' on F."""
    inc = g.incident(v)
    if len(inc) != 2:
        raise GraphError("splitting needs a 2-valent vertex")
    (i, e), (j, f) = inc
    a, b = ids
    if a in g.signs or b in g.signs:
        raise GraphError("vertex id in use")
    s = g.signs[v]
    keep = tuple(x for t, x in enumerate(g.edges) if t not in (i, j))
    new = (Edge(e.other(v), a, e.label), Edge(a, b, add(e.label, f.label)), Edge(b, f.other(v), f.label))
    signs = {u: t for u, t in g.signs.items() if u != v}
    signs.update({a: s, b: s})
    return SignedMultigraph(g.k, g.n, signs, keep + new)


def _random_weight(rng: random.Random, k: int) -> Weight:
    r = 4 if k == 1 else 2
    while True:
        w = tuple(rng.randint(-r, r) for _ in range(k))
        if any(w):
            return w


def generate4(k: int, seed: int, step_count: int, max_vertices: int = 40, attempts: int = 40) -> tuple[SignedMultigraph, Trace4]:
    """Seeded random walk through the four building operations.

    Each proposed step is kept only if the result passes validate_graph
    (with the Property A sign check for k = 1); the sign of the new vertex
    in a subdivision is a coin flip subject to that filter.
    """
    if step_count < 1:
        raise ValueError("step_count must be positive")
    rng = random.Random(seed)
    g = empty_graph(k, 2)
    trace = Trace4(g, mode="forward")
    counter = 0

    def fresh() -> tuple[str, str]:
        nonlocal counter
        counter += 2
        return f"v{counter - 2}", f"v{counter - 1}"

    def legal(h: SignedMultigraph) -> bool:
        return validate_graph(h, effective=True, property_a=(k == 1)).ok

    for step in range(step_count):
        done = False
        for _ in range(attempts):
            choices = ["add"]
            if len(g) + 2 > max_vertices:
                choices = []
            if g.edges:
                if len(g) + 2 <= max_vertices:
                    choices += ["subdivide", "subdivide"]
                if len(g) + 1 <= max_vertices:
                    choices += ["split", "split"]
                choices.append("reverse")
            if not choices:
                break
            op = rng.choice(choices)
            try:
                if op == "add":
                    A, B = _random_weight(rng, k), _random_weight(rng, k)
                    if not spans_lattice([A, B], k):
                        continue
                    ids = fresh()
                    h, operands = add_minimal(g, A, B, ids), {"A": A, "B": B, "ids": ids}
                elif op == "subdivide":
                    e = rng.randrange(len(g.edges))
                    C = g.edges[e].label
                    Dw = _random_weight(rng, k)
                    if not spans_lattice([C, Dw], k):
                        continue
                    sq = rng.choice((1, -1))
                    ids = fresh()
                    h, operands = subdivide(g, e, Dw, sq, ids), {"edge": e, "D": Dw, "sign": sq, "ids": ids}
                elif op == "split":
                    v = rng.choice(sorted(g.signs))
                    labels = [e.label for _, e in g.incident(v)]
                    if not spans_lattice(labels, k) or not any(add(*labels)):
                        continue
                    ids = fresh()
                    h, operands = split_vertex(g, v, ids), {"vertex": v, "ids": ids}
                else:
                    e = rng.randrange(len(g.edges))
                    h, operands = reverse_edge(g, e), {"edge": e}
            except GraphError:
                continue
            if legal(h):
                g = h
                trace.steps.append(TraceStep(op, operands, g, macro=step))
                done = True
                break
        if not done and g.edges:
            e = rng.randrange(len(g.edges))
            g = reverse_edge(g, e)
            trace.steps.append(TraceStep("reverse", {"edge": e}, g, macro=step))
    return g, trace


# ------------------------------------------------------------- reduction


def _magnitude(w: Weight) -> int:
    return dot(w, w)


def _top_edge(g: SignedMultigraph) -> tuple[Edge, Weight]:
    top = max(_magnitude(e.label) for e in g.edges)
    cands = [(tuple(sorted((e.u, e.v))), i) for i, e in enumerate(g.edges) if _magnitude(e.label) == top]
    (pair, i) = min(cands)
    e = g.edges[i]
    return Edge(pair[0], pair[1], e.label), canonical_weight(e.label)[0]


def _other_weight(g: SignedMultigraph, p: str, l: Weight) -> list[Weight]:
    """Orientations of p's non-l weight lying in the half space <., l> >= 0."""
    labels = [e.label for _, e in g.incident(p)]
    rest = list(labels)
    for i, w in enumerate(rest):
        if canonical_weight(w)[0] == l:
            del rest[i]
            break
    if len(rest) != 1:
        raise NotDescribable(f"{p} does not have two weights")
    w = rest[0]
    s = dot(w, l)
    if s > 0:
        return [w]
    if s < 0:
        return [neg(w)]
    return [w, neg(w)]


def _normal_sign(g: SignedMultigraph, p: str, l: Weight, x: Weight) -> int:
    d = vertex_datum(g, p)
    for s in (1, -1):
        if make_datum(s, [l, x]) == d:
            return s
    raise NotDescribable(f"weights at {p} are not {{l, x}}")


def reduce4(g: SignedMultigraph, check: Callable[[SignedMultigraph], bool] | None = None) -> Trace4:
    """Reduce a four-dimensional graph to the empty graph.

    Each macro-step picks the lexicographically first edge of largest
    label norm, joining p1 and p2, and either self-sums p1 with p2
    (opposite data) or blows up p1 and self-sums p2 with the new vertex
    carrying l.  For k = 1 and l = 1 any vertex with opposite data is an
    acceptable partner.
    """
    if g.n != 2:
        raise ValueError("reduce4 needs n = 2")
    trace = Trace4(g)
    macro = 0
    while not g.is_empty():
        macro += 1
        edge, l = _top_edge(g)
        p1, p2 = edge.u, edge.v
        d1, d2 = vertex_datum(g, p1), vertex_datum(g, p2)
        if g.k == 1 and l == (1,):
            partners = [p2] if d2 == -d1 else []
            partners += [q for q in sorted(g.signs) if q not in (p1, p2) and vertex_datum(g, q) == -d1]
            for q in partners:
                try:
                    g = self_connected_sum(g, p1, q)
                except GraphError:
                    continue
                trace.steps.append(TraceStep("self_sum", {"p": p1, "q": q, "case": "0"}, g, macro))
                break
            else:
                raise NotDescribable(f"no partner for {p1} {d1}")
        elif d2 == -d1:
            try:
                g = self_connected_sum(g, p1, p2)
            except GraphError as exc:
                raise NotDescribable(str(exc)) from exc
            trace.steps.append(TraceStep("self_sum", {"p": p1, "q": p2, "case": "a", "l": l}, g, macro))
        else:
            for x in _other_weight(g, p1, l):
                eps = _normal_sign(g, p1, l, x)
                if not any(sub(l, x)):
                    continue
                if d2 == make_datum(eps, [l, sub(l, x)]):
                    break
            else:
                raise NotDescribable(f"{p2} {d2} is neither opposite nor complementary to {p1} {d1}")
            prefix = f"b{macro}:"
            try:
                g = blow_up(g, p1, [x, l], prefix=prefix)
                trace.steps.append(TraceStep("blow_up", {"p": p1, "weights": [x, l], "prefix": prefix, "case": "b"}, g, macro))
                g = self_connected_sum(g, p2, prefix + "q2")
            except GraphError as exc:
                raise NotDescribable(str(exc)) from exc
            trace.steps.append(TraceStep("self_sum", {"p": p2, "q": prefix + "q2", "case": "b", "l": l}, g, macro))
        if check is not None and not check(g):
            raise NotDescribable(f"intermediate graph failed the check after macro-step {macro}")
    return trace


# ----------------------------------------------------------------- GKM


def _independent(ws: list[Weight], k: int) -> bool:
    if k == 1:
        return all(multiple_of(a, b) is None for a, b in permutations(ws, 2))
    return len(ws) == 2 and any(
        a[i] * b[j] - a[j] * b[i] != 0
        for a, b in combinations(ws, 2)
        for i, j in combinations(range(k), 2)
    )


def check_gkm(g: SignedMultigraph) -> None:
    for v in g.signs:
        ws = [e.label for _, e in g.incident(v)]
        if not _independent(ws, g.k):
            raise InvalidGKM(f"labels at {v} are not independent: {ws}")


def strip_signs(g: SignedMultigraph) -> SignedMultigraph:
    return SignedMultigraph(g.k, g.n, {v: 1 for v in g.signs}, g.edges)


def reduce4_gkm(g: SignedMultigraph) -> Trace4:
    """Reduce a labelled graph whose vertex signs are unknown (and ignored).

    The sign of p1 is declared +1; the label multiset at p2 decides
    between a self-sum ({l, x}) and a blow up followed by a self-sum
    ({l, l-x}).  For k = 1, independence means neither label at a vertex
    is an integer multiple of the other.
    """
    if g.n != 2:
        raise ValueError("reduce4_gkm needs n = 2")
    check_gkm(g)
    g = strip_signs(g)
    trace = Trace4(g, mode="gkm")
    macro = 0
    while not g.is_empty():
        macro += 1
        edge, l = _top_edge(g)
        p1, p2 = edge.u, edge.v
        at_p2 = sorted(canonical_weight(e.label)[0] for _, e in g.incident(p2))
        chosen = None
        for x in _other_weight(g, p1, l):
            if at_p2 == sorted([l, canonical_weight(x)[0]]):
                chosen = ("1", x)
                break
            if any(sub(l, x)) and at_p2 == sorted([l, canonical_weight(sub(l, x))[0]]):
                chosen = ("2", x)
                break
        if chosen is None:
            raise NotDescribable(f"labels at {p2} do not fit {p1}")
        case, x = chosen
        target1 = make_datum(1, [l, x])
        target2 = -target1 if case == "1" else make_datum(1, [l, sub(l, x)])
        signs = dict(g.signs)
        for v, want in ((p1, target1), (p2, target2)):
            signs[v] = 1
            h = SignedMultigraph(g.k, g.n, signs, g.edges)
            if vertex_datum(h, v) != want:
                signs[v] = -1
        g = SignedMultigraph(g.k, g.n, signs, g.edges)
        trace.steps.append(TraceStep("set_signs", {p1: signs[p1], p2: signs[p2]}, g, macro))
        try:
            if case == "1":
                g = self_connected_sum(g, p1, p2)
                trace.steps.append(TraceStep("self_sum", {"p": p1, "q": p2, "case": "1"}, g, macro))
            else:
                prefix = f"b{macro}:"
                g = blow_up(g, p1, [x, l], prefix=prefix)
                trace.steps.append(TraceStep("blow_up", {"p": p1, "weights": [x, l], "prefix": prefix, "case": "2"}, g, macro))
                g = self_connected_sum(g, p2, prefix + "q2")
                trace.steps.append(TraceStep("self_sum", {"p": p2, "q": prefix + "q2", "case": "2"}, g, macro))
        except GraphError as exc:
            raise NotDescribable(str(exc)) from exc
        g = strip_signs(g)
        check_gkm(g)
        trace.steps.append(TraceStep("strip_signs", {}, g, macro))
    return trace


# ---------------------------------------------------------------- replay

_FORWARD = {
    "add": lambda g, o: add_minimal(g, o["A"], o["B"], tuple(o["ids"])),
    "subdivide": lambda g, o: subdivide(g, o["edge"], o["D"], o["sign"], tuple(o["ids"])),
    "split": lambda g, o: split_vertex(g, o["vertex"], tuple(o["ids"])),
    "reverse": lambda g, o: reverse_edge(g, o["edge"]),
    "self_sum": lambda g, o: self_connected_sum(g, o["p"], o["q"]),
    "blow_up": lambda g, o: blow_up(g, o["p"], o["weights"], prefix=o["prefix"]),
    "strip_signs": lambda g, o: strip_signs(g),
    "set_signs": lambda g, o: SignedMultigraph(g.k, g.n, {**g.signs, **o}, g.edges),
}


def replay(trace: Trace4) -> SignedMultigraph:
    """Re-apply every step from the initial graph; returns the final graph."""
    g = trace.initial
    for step in trace.steps:
        g = _FORWARD[step.kind](g, step.operands)
    return g
