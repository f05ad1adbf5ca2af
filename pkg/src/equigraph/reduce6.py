"""Dimension six (circle actions): reduction of fixed point data by the five
moves, and of multigraphs by connected sums with the standard models.

Both engines follow the same case analysis.  Let l be the largest weight.
If l <= 2, data are paired with their exact opposites.  Otherwise a datum
d1 = [e, l, x, y] is matched with a partner d2 that also carries l, and
the pair is classified:

    Case0b  l occurs twice in d1, d2 = -d1            op1 / self sum
    Case1   d2 = [-e, l, x, y]                        op1 / self sum
    Case2a  d2 = [-e, l, l-x, l-y], x != y            op2 / sum with CP^3
    Case2b  d2 = [-e, l, l-x, l-x], 2x != l           op5 / sum with Z2 # Z2bar
    Case3a  d2 = [ e, l, x, l-y], x != y              op3 / sum with Z1
    Case3b  d2 = [ e, l, x, l-x], 2x != l             op4 / sum with Z2

A pair that is both Case1 and Case2a (which happens when {x, y} =
{l-x, l-y}) is classified as Case2a.  Search is depth-first with
memoization of failed states.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .fpdata import (
    FixedPointCollection,
    FixedPointDatum,
    MoveError,
    T62Move,
    apply_t62,
    make_datum,
    op1_move,
    passes_validators,
    t62_move,
)
from .models import cpn_graph, z2_sharp_z2bar_graph, zn_graph
from .multigraph import (
    GraphError,
    SignedMultigraph,
    canonical_form,
    connected_sum,
    fixed_point_collection,
    rename,
    reverse_orientation,
    self_connected_sum,
    validate_graph,
    vertex_datum,
)


class NotRealizable(ValueError):
    """The search exhausted every branch without reaching the empty object."""


@dataclass(frozen=True)
class PartnerCase:
    case: str
    l: int
    x: int
    y: int


# search order across candidate partners
CASE_ORDER = ("Case0a", "Case1", "Case0b", "Case2a", "Case3a", "Case3b", "Case2b")


def _weights(d: FixedPointDatum) -> list[int]:
    return list(d.scalars())


def _rest(d: FixedPointDatum, l: int) -> tuple[int, int]:
    ws = _weights(d)
    ws.remove(l)
    return ws[0], ws[1]


def partner_cases(d1: FixedPointDatum, d2: FixedPointDatum, l: int) -> list[PartnerCase]:
    """Every case d2 fits relative to d1, most preferred first."""
    if l not in _weights(d1):
        raise ValueError(f"{d1} does not contain weight {l}")
    if l not in _weights(d2):
        return []
    e = d1.sign
    if l <= 2:
        return [PartnerCase("Case0a", l, 0, 0)] if d2 == -d1 else []
    if _weights(d1).count(l) >= 2:
        x = [w for w in _weights(d1) if w != l]
        return [PartnerCase("Case0b", l, x[0] if x else l, l)] if d2 == -d1 else []
    x, y = _rest(d1, l)
    out = []

    def datum(sign, a, b):
        try:
            return make_datum(sign, [l, a, b])
        except ValueError:
            return None

    if d2 == datum(-e, l - x, l - y):
        if x != y:
            out.append(PartnerCase("Case2a", l, x, y))
        elif 2 * x != l:
            out.append(PartnerCase("Case2b", l, x, y))
    if d2 == -d1:
        out.append(PartnerCase("Case1", l, x, y))
    if d2 == datum(-e, l - x, l - y) and x == y and 2 * x == l:
        out.append(PartnerCase("Case2c", l, x, y))
    for a, b in ((x, y), (y, x)):
        if d2 == datum(e, a, l - b):
            if a != b:
                out.append(PartnerCase("Case3a", l, a, b))
            elif 2 * a != l:
                out.append(PartnerCase("Case3b", l, a, b))
            else:
                out.append(PartnerCase("Case3c", l, a, b))
            break
    return sorted(out, key=_case_rank)


def _case_rank(pc: PartnerCase) -> int:
    return CASE_ORDER.index(pc.case) if pc.case in CASE_ORDER else len(CASE_ORDER)


def _search_cases(d1: FixedPointDatum, d2: FixedPointDatum, l: int, last_pair: bool = False) -> list[tuple[int, PartnerCase]]:
    """Cases the engines try for one pair, each with its ranking index.

    A partner that is both the exact opposite and a Case2a match (x + y = l)
    is tried as Case2a first: the op (2) route keeps the CP3 reduction in the
    documented three-move shape, and op (1) stays as the fallback for the pair.
    When the pair is all that is left, the exact opposite goes first, since a
    single self sum finishes the job.
    """
    cases = [pc for pc in partner_cases(d1, d2, l) if pc.case in CASE_ORDER]
    if not last_pair:
        cases.sort(key=lambda pc: pc.case != "Case2a")
    return [(_case_rank(cases[0]), pc) for pc in cases]


def classify_partner(d1: FixedPointDatum, d2: FixedPointDatum, l: int) -> PartnerCase | None:
    cases = partner_cases(d1, d2, l)
    return cases[0] if cases else None


def move_for(pc: PartnerCase, d1: FixedPointDatum) -> T62Move:
    """The five-move record that removes d1 and its partner."""
    e = d1.sign
    if pc.case in ("Case0a", "Case0b", "Case1"):
        return op1_move(d1)
    if pc.case == "Case2a":
        return t62_move(2, min(pc.x, pc.y), max(pc.x, pc.y), pc.l, e)
    if pc.case == "Case3a":
        return t62_move(3, pc.x, pc.y, pc.l, e)
    if pc.case == "Case3b":
        return t62_move(4, pc.x, None, pc.l, e)
    if pc.case == "Case2b":
        return t62_move(5, pc.x, None, pc.l, e)
    raise MoveError(f"{pc.case} has no move for l = {pc.l}")


# ---------------------------------------------------------------- traces


@dataclass
class Step6:
    kind: str
    operands: dict
    move: T62Move
    graph: SignedMultigraph | None = None
    collection: FixedPointCollection | None = None
    macro: int = 0
    top_weight: int = 0


@dataclass
class Trace6:
    level: str
    initial: object
    steps: list[Step6] = field(default_factory=list)
    backtracked: bool = False
    states_explored: int = 0

    @property
    def moves(self) -> list[T62Move]:
        seen, out = set(), []
        for s in self.steps:
            if s.macro not in seen:
                seen.add(s.macro)
                out.append(s.move)
        return out

    def snapshots(self) -> list:
        if self.level == "data":
            return [self.initial] + [s.collection for s in self.steps]
        return [self.initial] + [s.graph for s in self.steps]

    def macro_snapshots(self) -> list:
        """State after each completed macro-step (initial state first)."""
        out = [self.initial]
        for i, s in enumerate(self.steps):
            if i + 1 == len(self.steps) or self.steps[i + 1].macro != s.macro:
                out.append(s.collection if self.level == "data" else s.graph)
        return out

    @property
    def final(self):
        return self.snapshots()[-1]


class _Search:
    """Depth-first search with a failed-state memo."""

    def __init__(self, key: Callable, expand: Callable, is_goal: Callable):
        self.key, self.expand, self.is_goal = key, expand, is_goal
        self.failed: set = set()
        self.backtracked = False
        self.explored = 0

    def run(self, state, depth: int = 0):
        if self.is_goal(state):
            return []
        k = self.key(state)
        if k in self.failed:
            return None
        self.explored += 1
        for attempt in self.expand(state, depth):
            if attempt is None:
                self.backtracked = True
                continue
            steps, nxt = attempt
            rest = self.run(nxt, depth + 1)
            if rest is not None:
                return [steps] + rest
            self.backtracked = True
        self.failed.add(k)
        return None


# ------------------------------------------------------------ data engine


def _data_candidates(c: FixedPointCollection) -> list[tuple[FixedPointDatum, PartnerCase]]:
    l = c.max_weight()
    distinct = sorted(set(c.points))
    counts = c.counter()
    out = []
    if l <= 2:
        # only top-weight data, so every step still removes weight l
        for d in distinct:
            if l in _weights(d) and counts[-d]:
                out.append((d, PartnerCase("Case0a", l, 0, 0)))
                break
        return out
    tops = [d for d in distinct if l in _weights(d)]
    for d1 in tops:
        ranked = []
        for d2 in tops:
            if d2 == d1 and counts[d1] < 2:
                continue
            for i, (rank, pc) in enumerate(_search_cases(d1, d2, l, len(c) == 2)):
                ranked.append(((rank, i, d2.sort_key()), pc))
        out += [(d1, pc) for _, pc in sorted(ranked, key=lambda t: t[0])]
    return out


def reduce6_data(c: FixedPointCollection, verify: bool = True) -> Trace6:
    """Reduce a k = 1, n = 3 collection to the empty collection."""
    if c.k != 1 or c.n != 3:
        raise ValueError("reduce6_data needs k = 1 and n = 3")
    if verify and not passes_validators(c):
        raise NotRealizable("the collection fails the validators")

    def expand(state: FixedPointCollection, depth: int):
        l = state.max_weight()
        for d1, pc in _data_candidates(state):
            try:
                m = move_for(pc, d1)
                nxt = apply_t62(state, m)
            except (MoveError, ValueError):
                yield None
                continue
            if verify and not passes_validators(nxt):
                yield None
                continue
            yield Step6("t62", {"case": pc.case, "datum": str(d1)}, m, collection=nxt, macro=depth + 1, top_weight=l), nxt

    search = _Search(lambda s: s.points, expand, lambda s: len(s) == 0)
    steps = search.run(c)
    if steps is None:
        raise NotRealizable(f"no reduction found after exploring {search.explored} states")
    return Trace6("data", c, steps, search.backtracked, search.explored)


# ----------------------------------------------------------- graph engine


def _has_weight(g: SignedMultigraph, v: str, l: int) -> bool:
    return any(abs(e.label[0]) == l for _, e in g.incident(v))


def _l_adjacent(g: SignedMultigraph, p: str, q: str, l: int) -> bool:
    return any(e.other(p) == q and abs(e.label[0]) == l for _, e in g.incident(p))


def _graph_candidates(g: SignedMultigraph) -> Iterable[tuple[str, str, PartnerCase]]:
    l = max(abs(e.label[0]) for e in g.edges)
    data = {v: vertex_datum(g, v) for v in g.signs}
    order = sorted(g.signs, key=lambda v: (data[v].sort_key(), v))
    if l <= 2:
        for p in (v for v in order if _has_weight(g, v, l)):
            qs = [q for q in order if q != p and data[q] == -data[p]]
            qs.sort(key=lambda q: (not _l_adjacent(g, p, q, l), q))
            for q in qs:
                yield p, q, PartnerCase("Case0a", l, 0, 0)
        return
    tops = [v for v in order if _has_weight(g, v, l)]
    for p in tops:
        ranked = []
        for q in tops:
            if q == p:
                continue
            for i, (rank, pc) in enumerate(_search_cases(data[p], data[q], l, len(g.signs) == 2)):
                key = (rank, i, not _l_adjacent(g, p, q, l), data[q].sort_key(), q)
                ranked.append((key, q, pc))
        for _, q, pc in sorted(ranked, key=lambda t: t[0]):
            yield p, q, pc


def _model_for(pc: PartnerCase, eps: int, prefix: str):
    """Model graph, its vertex summed with p1, and its vertex summed with p2."""
    l, x, y = pc.l, pc.x, pc.y
    rev = eps > 0
    if pc.case == "Case2a":
        lo, hi = min(x, y), max(x, y)
        m, kind, params = cpn_graph(1, [lo, hi, l], reversed=rev), "sum_with_CP3", [lo, hi, l]
        at1, at2 = "q0", "q3"
    elif pc.case == "Case3a":
        m, kind, params = zn_graph(1, 1, l, y, x, reversed=rev), "sum_with_Z1", [l, y, x]
        at1, at2 = "q5", "q1"
    elif pc.case == "Case3b":
        m, kind, params = zn_graph(1, 2, l, x, x, reversed=rev), "sum_with_Z2", [l, x, x]
        at1, at2 = "q5", "q1"
    elif pc.case == "Case2b":
        m = z2_sharp_z2bar_graph(1, l, x)
        if rev:
            m = reverse_orientation(m)
        kind, params = "sum_with_Z2Z2bar", [l, x]
        at1, at2 = "q5'", "q5''"
    else:
        raise MoveError(pc.case)
    m = rename(m, lambda v: prefix + v)
    return m, kind, params, prefix + at1, prefix + at2


def apply_graph_case(g: SignedMultigraph, p1: str, p2: str, pc: PartnerCase, prefix: str) -> list[tuple[str, dict, SignedMultigraph]]:
    """Run the composite operation for one classified pair."""
    if pc.case in ("Case0a", "Case0b", "Case1"):
        return [("self_sum", {"p": p1, "q": p2}, self_connected_sum(g, p1, p2))]
    eps = vertex_datum(g, p1).sign
    m, kind, params, a1, a2 = _model_for(pc, eps, prefix)
    g1 = connected_sum(g, p1, m, a1)
    ops = {"p": p1, "model_vertex": a1, "params": params, "reversed": eps > 0, "prefix": prefix}
    g2 = self_connected_sum(g1, p2, a2)
    return [(kind, ops, g1), ("self_sum", {"p": p2, "q": a2}, g2)]


def reduce6_graph(g: SignedMultigraph, effective: bool = True) -> Trace6:
    """Reduce a k = 1, n = 3 multigraph to the empty graph."""
    if g.k != 1 or g.n != 3:
        raise ValueError("reduce6_graph needs k = 1 and n = 3")
    if not validate_graph(g, effective=effective).ok:
        raise NotRealizable("the graph fails validate_graph")

    def expand(state: SignedMultigraph, depth: int):
        l = max(abs(e.label[0]) for e in state.edges)
        for p1, p2, pc in _graph_candidates(state):
            try:
                d1 = vertex_datum(state, p1)
                move = move_for(pc, d1)
                parts = apply_graph_case(state, p1, p2, pc, prefix=f"m{depth + 1}:")
            except (GraphError, MoveError):
                yield None
                continue
            if not all(validate_graph(h, effective=effective, pattern=False).ok for _, _, h in parts):
                yield None
                continue
            steps = [
                Step6(kind, {**ops, "case": pc.case}, move, graph=h, collection=fixed_point_collection(h), macro=depth + 1, top_weight=l)
                for kind, ops, h in parts
            ]
            yield steps, parts[-1][2]

    search = _Search(canonical_form, expand, lambda s: s.is_empty())
    chunks = search.run(g)
    if chunks is None:
        raise NotRealizable(f"no reduction found after exploring {search.explored} states")
    steps = [s for chunk in chunks for s in chunk]
    return Trace6("graph", g, steps, search.backtracked, search.explored)


def replay_graph(trace: Trace6) -> SignedMultigraph:
    """Re-run a graph trace from its operands."""
    g = trace.initial
    builders = {
        "sum_with_CP3": lambda p: cpn_graph(1, p),
        "sum_with_Z1": lambda p: zn_graph(1, 1, *p),
        "sum_with_Z2": lambda p: zn_graph(1, 2, *p),
        "sum_with_Z2Z2bar": lambda p: z2_sharp_z2bar_graph(1, *p),
    }
    for s in trace.steps:
        o = s.operands
        if s.kind == "self_sum":
            g = self_connected_sum(g, o["p"], o["q"])
        else:
            m = builders[s.kind](o["params"])
            if o["reversed"]:
                m = reverse_orientation(m)
            m = rename(m, lambda v, pre=o["prefix"]: pre + v)
            g = connected_sum(g, o["p"], m, o["model_vertex"])
    return g
