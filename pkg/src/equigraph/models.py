"""Standard multigraphs: spheres, complex projective spaces, the six-
dimensional Hirzebruch analogues Z_n, and Z_2 # reversed Z_2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import as_weight, scale, sub
from .multigraph import (
    GraphError,
    SignedMultigraph,
    connected_sum,
    make_graph,
    rename,
    reverse_orientation,
)


def sphere_graph(k: int, weights: Sequence) -> SignedMultigraph:
    """Two vertices q1 (+) and q2 (-) joined by one edge per weight."""
    ws = [as_weight(w, k) for w in weights]
    return make_graph(k, len(ws), [("q1", 1), ("q2", -1)], [("q1", "q2", w) for w in ws])


def cpn_graph(k: int, a: Sequence, reversed: bool = False) -> SignedMultigraph:
    """Vertices q0..qn; q_i has sign (-1)^i and q_i-q_j (i<j) is labelled a_j - a_i, a_0 = 0."""
    n = len(a)
    pts = [tuple([0] * k)] + [as_weight(w, k) for w in a]
    if len(set(pts)) != len(pts):
        raise GraphError("complex projective parameters must be distinct and nonzero")
    flip = -1 if reversed else 1
    verts = [(f"q{i}", flip * (-1) ** i) for i in range(n + 1)]
    edges = [(f"q{i}", f"q{j}", sub(pts[j], pts[i])) for i in range(n + 1) for j in range(i + 1, n + 1)]
    return make_graph(k, n, verts, edges)


def zn_graph(k: int, hirzebruch_n: int, a, b, c, reversed: bool = False) -> SignedMultigraph:
    """The six-vertex graph of Z_n(a, b, c)."""
    a, b, c = (as_weight(x, k) for x in (a, b, c))
    nc = scale(hirzebruch_n, c)
    for name, w in (("b-a", sub(b, a)), ("nc-a", sub(nc, a)), ("nc-b", sub(nc, b))):
        if not any(w):
            raise GraphError(f"Z_n parameters need {name} != 0")
    flip = -1 if reversed else 1
    signs = {"q1": 1, "q2": -1, "q3": -1, "q4": -1, "q5": 1, "q6": 1}
    edges = [
        ("q1", "q2", c),
        ("q1", "q3", sub(a, b)),
        ("q5", "q1", a),
        ("q2", "q4", sub(a, b)),
        ("q2", "q6", sub(a, nc)),
        ("q3", "q4", c),
        ("q4", "q6", sub(nc, b)),
        ("q5", "q3", b),
        ("q5", "q6", c),
    ]
    return make_graph(k, 3, [(v, flip * s) for v, s in signs.items()], edges)


def z2_sharp_z2bar_graph(k: int, a, e) -> SignedMultigraph:
    """Connected sum of Z_2(a,e,e) and reversed Z_2(a,a-e,a-e) at their q1 vertices."""
    a, e = as_weight(a, k), as_weight(e, k)
    if scale(2, e) == a:
        raise GraphError("Z_2 # reversed Z_2 needs 2e != a")
    d = sub(a, e)
    left = rename(zn_graph(k, 2, a, e, e), lambda v: v + "'")
    right = rename(reverse_orientation(zn_graph(k, 2, a, d, d)), lambda v: v + "''")
    return connected_sum(left, "q1'", right, "q1''")


@dataclass(frozen=True)
class ModelId:
    """Names a standard model; kind is sphere, cpn, zn or z2z2bar."""

    kind: str
    params: tuple
    k: int = 1
    reversed: bool = False

    def build(self) -> SignedMultigraph:
        if self.kind == "sphere":
            g = sphere_graph(self.k, self.params)
        elif self.kind == "cpn":
            g = cpn_graph(self.k, self.params)
        elif self.kind == "zn":
            g = zn_graph(self.k, *self.params)
        elif self.kind == "z2z2bar":
            g = z2_sharp_z2bar_graph(self.k, *self.params)
        else:
            raise ValueError(f"unknown model {self.kind}")
        return reverse_orientation(g) if self.reversed else g
