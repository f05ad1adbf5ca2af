"""Signed labeled multigraphs and their operation algebra.

Vertices are string ids carrying a sign.  Edges carry raw labels that may
be negative; canonicalization only happens when vertex data are read off.
Every operation returns a new graph.
"""
from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import Weight, as_weight, canonical_weight, multiple_of, neg, spans_lattice
from .fpdata import FixedPointCollection, FixedPointDatum, make_datum, verify_all


class GraphError(ValueError):
    """An operation's preconditions do not hold."""


class ForbiddenPattern(GraphError):
    """Two opposite vertices share a neighbour through equally labelled edges."""


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    label: Weight

    def other(self, x: str) -> str:
        return self.v if x == self.u else self.u

    def canonical_label(self) -> Weight:
        return canonical_weight(self.label)[0]


@dataclass(frozen=True)
class SignedMultigraph:
    k: int
    n: int
    signs: Mapping[str, int] = field(default_factory=dict)
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "signs", dict(self.signs))
        object.__setattr__(self, "edges", tuple(self.edges))
        for e in self.edges:
            if e.u not in self.signs or e.v not in self.signs:
                raise GraphError(f"edge {e} references an unknown vertex")
            if len(e.label) != self.k or not any(e.label):
                raise GraphError(f"edge {e} has an invalid label")

    @property
    def vertices(self) -> list[str]:
        return list(self.signs)

    def __len__(self) -> int:
        return len(self.signs)

    def sign(self, v: str) -> int:
        return self.signs[v]

    def incident(self, v: str) -> list[tuple[int, Edge]]:
        return [(i, e) for i, e in enumerate(self.edges) if v in (e.u, e.v)]

    def degree(self, v: str) -> int:
        return sum((e.u == v) + (e.v == v) for e in self.edges)

    def is_empty(self) -> bool:
        return not self.signs

    def __str__(self) -> str:
        vs = " ".join(f"{v}{'+' if s > 0 else '-'}" for v, s in self.signs.items())
        es = " ".join(f"{e.u}-{e.v}:{_fmt(e.label)}" for e in self.edges)
        return f"<graph k={self.k} n={self.n} | {vs} | {es}>"


def _fmt(w: Weight) -> str:
    return str(w[0]) if len(w) == 1 else "(" + ",".join(map(str, w)) + ")"


def make_graph(k: int, n: int, vertices: Iterable[tuple[str, int]], edges: Iterable[tuple[str, str, object]]) -> SignedMultigraph:
    signs = {}
    for v, s in vertices:
        if v in signs:
            raise GraphError(f"duplicate vertex {v}")
        if s not in (1, -1):
            raise GraphError(f"vertex {v} has sign {s}")
        signs[v] = s
    es = tuple(Edge(u, v, as_weight(lab, k)) for u, v, lab in edges)
    return SignedMultigraph(k, n, signs, es)


def empty_graph(k: int, n: int) -> SignedMultigraph:
    return SignedMultigraph(k, n, {}, ())


def vertex_datum(g: SignedMultigraph, v: str) -> FixedPointDatum:
    if v not in g.signs:
        raise GraphError(f"unknown vertex {v}")
    labels = [e.label for _, e in g.incident(v)]
    if not labels:
        raise GraphError(f"vertex {v} has no edges")
    return make_datum(g.signs[v], labels)


def fixed_point_collection(g: SignedMultigraph) -> FixedPointCollection:
    return FixedPointCollection(g.k, g.n, tuple(vertex_datum(g, v) for v in g.signs))


def rename(g: SignedMultigraph, fn: Callable[[str], str]) -> SignedMultigraph:
    signs = {fn(v): s for v, s in g.signs.items()}
    if len(signs) != len(g.signs):
        raise GraphError("renaming is not injective")
    return SignedMultigraph(g.k, g.n, signs, tuple(Edge(fn(e.u), fn(e.v), e.label) for e in g.edges))


def disjoint_union(g1: SignedMultigraph, g2: SignedMultigraph) -> SignedMultigraph:
    if (g1.k, g1.n) != (g2.k, g2.n):
        raise GraphError("graphs of different type")
    clash = set(g1.signs) & set(g2.signs)
    if clash:
        raise GraphError(f"vertex ids overlap: {sorted(clash)}")
    return SignedMultigraph(g1.k, g1.n, {**g1.signs, **g2.signs}, g1.edges + g2.edges)


def reverse_orientation(g: SignedMultigraph) -> SignedMultigraph:
    return SignedMultigraph(g.k, g.n, {v: -s for v, s in g.signs.items()}, g.edges)


def reverse_edge(g: SignedMultigraph, e: int) -> SignedMultigraph:
    if not 0 <= e < len(g.edges):
        raise GraphError(f"unknown edge {e}")
    old = g.edges[e]
    signs = dict(g.signs)
    signs[old.u] = -signs[old.u]
    signs[old.v] = -signs[old.v]
    edges = list(g.edges)
    edges[e] = Edge(old.u, old.v, neg(old.label))
    return SignedMultigraph(g.k, g.n, signs, tuple(edges))


def exchange_edges(g: SignedMultigraph, e1: int, e2: int) -> SignedMultigraph:
    if not (0 <= e1 < len(g.edges) and 0 <= e2 < len(g.edges)):
        raise GraphError("unknown edge")
    a, b = g.edges[e1], g.edges[e2]
    if a.label != b.label:
        raise GraphError("exchanged edges must carry the same label")
    if len({a.u, a.v, b.u, b.v}) != 4:
        raise GraphError("exchanged edges must have four distinct endpoints")
    edges = list(g.edges)
    edges[e1] = Edge(a.u, b.v, a.label)
    edges[e2] = Edge(b.u, a.v, a.label)
    return SignedMultigraph(g.k, g.n, g.signs, tuple(edges))


# ------------------------------------------------------- connected sums


def _orient(g: SignedMultigraph, v: str, target: Counter, exclude: set[int] = frozenset()) -> tuple[SignedMultigraph, list[int]]:
    """Reverse edges at v, skipping exclude, so their raw labels equal target.

    Within a label class the edges reversed are the first ones in
    (other endpoint, edge index) order.
    """
    by_class: dict[Weight, list[int]] = defaultdict(list)
    for i, e in g.incident(v):
        if i not in exclude:
            by_class[e.canonical_label()].append(i)
    flips = []
    for c in sorted(by_class):
        idxs = sorted(by_class[c], key=lambda i: (g.edges[i].other(v), i))
        have = sum(1 for i in idxs if g.edges[i].label == c)
        want = target[c]
        if want + target[neg(c)] != len(idxs):
            raise GraphError(f"labels at {v} cannot be oriented to the requested ones")
        if have > want:
            flips += [i for i in idxs if g.edges[i].label == c][: have - want]
        elif have < want:
            flips += [i for i in idxs if g.edges[i].label != c][: want - have]
    if sum(target.values()) != sum(len(x) for x in by_class.values()):
        raise GraphError(f"labels at {v} cannot be oriented to the requested ones")
    for i in flips:
        g = reverse_edge(g, i)
    return g, flips


def _align(g: SignedMultigraph, p: str, q: str) -> tuple[SignedMultigraph, list[int]]:
    """Reverse edges at q (never p-q edges) until q's raw labels equal p's."""
    shared = {i for i, e in g.incident(q) if e.other(q) == p}
    target = Counter(e.label for i, e in g.incident(p) if i not in shared)
    return _orient(g, q, target, shared)


def _join(g: SignedMultigraph, p: str, q: str, check_pattern: bool) -> tuple[SignedMultigraph, dict]:
    if p == q:
        raise GraphError("a vertex cannot be summed with itself")
    if p not in g.signs or q not in g.signs:
        raise GraphError(f"unknown vertex {p if p not in g.signs else q}")
    dp, dq = vertex_datum(g, p), vertex_datum(g, q)
    if dp != -dq:
        raise GraphError(f"data at {p} {dp} and {q} {dq} are not opposite")
    if check_pattern:
        at_p = defaultdict(set)
        for _, e in g.incident(p):
            at_p[e.other(p)].add(e.canonical_label())
        for _, e in g.incident(q):
            r = e.other(q)
            if r != p and e.canonical_label() in at_p.get(r, ()):
                raise ForbiddenPattern(f"{r} is joined to {p} and {q} by edges labelled {_fmt(e.canonical_label())}")
    g, flips = _align(g, p, q)
    if g.signs[p] != -g.signs[q]:
        raise GraphError("alignment failed to make signs opposite")

    inc_p = g.incident(p)
    inc_q = g.incident(q)
    shared = {i for i, _ in inc_p} & {i for i, _ in inc_q}
    by_label_p: dict[Weight, list[tuple[str, int]]] = defaultdict(list)
    by_label_q: dict[Weight, list[tuple[str, int]]] = defaultdict(list)
    for i, e in inc_p:
        if i not in shared:
            by_label_p[e.label].append((e.other(p), i))
    for i, e in inc_q:
        if i not in shared:
            by_label_q[e.label].append((e.other(q), i))
    new_edges = []
    for lab in sorted(set(by_label_p) | set(by_label_q)):
        a, b = sorted(by_label_p[lab]), sorted(by_label_q[lab])
        if len(a) != len(b):
            raise GraphError(f"label {_fmt(lab)} cannot be matched at {p} and {q}")
        for (r, _), (s, _) in zip(a, b):
            if r == s:
                raise ForbiddenPattern(f"joining would put a self-loop at {r}")
            new_edges.append(Edge(r, s, lab))
    keep = tuple(e for e in g.edges if p not in (e.u, e.v) and q not in (e.u, e.v))
    signs = {v: s for v, s in g.signs.items() if v not in (p, q)}
    out = SignedMultigraph(g.k, g.n, signs, keep + tuple(new_edges))
    return out, {"reversed_at": q, "reversed_edges": flips}


def self_connected_sum(g: SignedMultigraph, p: str, q: str) -> SignedMultigraph:
    return _join(g, p, q, check_pattern=True)[0]


def connected_sum(g1: SignedMultigraph, p: str, g2: SignedMultigraph, q: str) -> SignedMultigraph:
    if p not in g1.signs:
        raise GraphError(f"unknown vertex {p}")
    if q not in g2.signs:
        raise GraphError(f"unknown vertex {q}")
    return _join(disjoint_union(g1, g2), p, q, check_pattern=False)[0]


def blow_up(g: SignedMultigraph, p: str, chosen_weights: Sequence, prefix: str = "b:") -> SignedMultigraph:
    """Replace p by the complex projective model on its (distinct) weights.

    p's edges are first reversed so that their raw labels equal
    chosen_weights.  Model vertices are named prefix + "q1" .. prefix + "qn".
    """
    from .models import cpn_graph  # models imports this module

    if p not in g.signs:
        raise GraphError(f"unknown vertex {p}")
    chosen = [as_weight(w, g.k) for w in chosen_weights]
    if len(set(chosen)) != len(chosen):
        raise GraphError("blow-up weights must be pairwise distinct")
    inc = g.incident(p)
    if Counter(canonical_weight(w)[0] for w in chosen) != Counter(e.canonical_label() for _, e in inc):
        raise GraphError(f"weights {chosen} are not the labels at {p}")
    g, _ = _orient(g, p, Counter(chosen))
    model = cpn_graph(g.k, chosen, reversed=g.signs[p] > 0)
    model = rename(model, lambda v: prefix + v)
    return connected_sum(g, p, model, prefix + "q0")


# ------------------------------------------------------------ validation


@dataclass
class GraphVerdict:
    ok: bool
    violations: list[str]

    def __bool__(self) -> bool:
        return self.ok


def _edge_compatible(g: SignedMultigraph, e: Edge, property_a: bool) -> str | None:
    """Local consistency of an edge with its isotropy component.

    Weights fixed by ker(l) are the multiples of l.  Both endpoints must
    have the same number of them.  When that number is one the component
    is a 2-sphere, and the remaining weights at the two ends agree modulo l
    up to sign changes whose parity matches the relative sign of the
    endpoints.  With property_a, an edge labelled +-1 (k = 1) must join
    vertices of opposite canonical sign, since its component is everything.
    """
    l = e.label
    ends = []
    for x in (e.u, e.v):
        ws = [f.label for _, f in g.incident(x)]
        inside = [w for w in ws if multiple_of(w, l) is not None]
        ends.append((g.signs[x], ws, inside))
    if len(ends[0][2]) != len(ends[1][2]):
        return f"edge {e.u}-{e.v}: isotropy dimension differs at the endpoints"
    if property_a and g.k == 1 and abs(l[0]) == 1:
        if vertex_datum(g, e.u).sign == vertex_datum(g, e.v).sign:
            return f"edge {e.u}-{e.v} with label ±1 joins vertices of equal sign"
        return None
    if len(ends[0][2]) != 1:
        return None
    (sp, wp, _), (sq, wq, _) = ends
    a = [w for w in wp if multiple_of(w, l) is None]
    c = [w for w in wq if multiple_of(w, l) is None]
    parity = 1 if sp == sq else 0
    for perm in itertools.permutations(c):
        for flips in itertools.product((0, 1), repeat=len(a)):
            if sum(flips) % 2 != parity:
                continue
            if all(multiple_of(tuple(x - (-y if f else y) for x, y in zip(ai, ci)), l) is not None
                   for ai, ci, f in zip(a, perm, flips)):
                return None
    return f"edge {e.u}-{e.v}: normal weights do not agree modulo {_fmt(l)}"


def validate_graph(g: SignedMultigraph, effective: bool = True, property_a: bool = False, pattern: bool = True) -> GraphVerdict:
    """Collect every violated necessary condition.

    Checks self-loops, regularity, the forbidden opposite-pair pattern, the
    fixed point validators, spanning (when effective), and edge-by-edge
    isotropy compatibility.  property_a adds the sign condition on edges
    labelled +-1, which Property A forces but a bare describing graph need
    not satisfy.  pattern=False skips the global opposite-pair scan; joins
    still refuse the pattern at the two vertices being joined.
    """
    bad: list[str] = []
    for e in g.edges:
        if e.u == e.v:
            bad.append(f"self-loop at {e.u}")
    for v in g.signs:
        if g.degree(v) != g.n:
            bad.append(f"{v} has degree {g.degree(v)}, expected {g.n}")
    if bad:
        return GraphVerdict(False, bad)
    data = {v: vertex_datum(g, v) for v in g.signs}
    for r in (g.signs if pattern else ()):
        nbrs = defaultdict(list)
        for _, e in g.incident(r):
            nbrs[e.canonical_label()].append(e.other(r))
        for lab, vs in nbrs.items():
            for x, y in itertools.combinations(sorted(set(vs)), 2):
                if data[x] == -data[y]:
                    bad.append(f"{x} and {y} are opposite and both joined to {r} by {_fmt(lab)}")
    for name, verdict in verify_all(fixed_point_collection(g)).items():
        if not verdict.ok:
            bad.append(f"{name}: {verdict.reason}")
    if effective:
        for v, d in data.items():
            if not spans_lattice(d.weights, g.k):
                bad.append(f"weights at {v} do not span Z^{g.k}")
    for e in g.edges:
        msg = _edge_compatible(g, e, property_a)
        if msg:
            bad.append(msg)
    return GraphVerdict(not bad, bad)


# -------------------------------------------------------- canonical form


def normalized(g: SignedMultigraph) -> SignedMultigraph:
    """Representative of the edge-reversal class: every raw label canonical."""
    for i, e in enumerate(g.edges):
        if canonical_weight(e.label)[1]:
            g = reverse_edge(g, i)
    return g


def _refine(g: SignedMultigraph, adj, colour: dict[str, int]) -> dict[str, int]:
    while True:
        sig = {v: (colour[v], tuple(sorted((colour[u], lab) for u, lab in adj[v]))) for v in g.signs}
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: ranks[sig[v]] for v in g.signs}
        if len(set(new.values())) == len(set(colour.values())):
            return new
        colour = new


def canonical_form(g: SignedMultigraph):
    """Hashable invariant: equal iff isomorphic up to edge reversal."""
    h = normalized(g)
    adj: dict[str, list] = defaultdict(list)
    for e in h.edges:
        adj[e.u].append((e.v, e.label))
        adj[e.v].append((e.u, e.label))
    data = {v: vertex_datum(h, v).sort_key() for v in h.signs}
    keys = sorted(set(data.values()))
    start = {v: keys.index(data[v]) for v in h.signs}
    best = None

    def encode(colour):
        order = sorted(h.signs, key=colour.get)
        pos = {v: i for i, v in enumerate(order)}
        verts = tuple(data[v] for v in order)
        es = tuple(sorted((min(pos[e.u], pos[e.v]), max(pos[e.u], pos[e.v]), e.label) for e in h.edges))
        return (verts, es)

    def search(colour):
        nonlocal best
        colour = _refine(h, adj, colour)
        cells = defaultdict(list)
        for v, c in colour.items():
            cells[c].append(v)
        split = [c for c in sorted(cells) if len(cells[c]) > 1]
        if not split:
            enc = encode(colour)
            if best is None or enc < best:
                best = enc
            return
        c = split[0]
        for v in sorted(cells[c]):
            nxt = {u: 2 * x + (0 if u == v else 1) if x == c else 2 * x + (1 if x > c else 0) for u, x in colour.items()}
            search(nxt)

    if h.signs:
        search(start)
    return (h.k, h.n, best)


def isomorphic(g1: SignedMultigraph, g2: SignedMultigraph) -> bool:
    return canonical_form(g1) == canonical_form(g2)
