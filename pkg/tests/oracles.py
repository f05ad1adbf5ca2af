"""Independent reference implementations used to cross-check the library.

None of these share code with the routines they check.
"""
import itertools
import math
from fractions import Fraction

import networkx as nx
from networkx.algorithms.isomorphism import categorical_multiedge_match, categorical_node_match


def minors_gcd_spans(ws, k):
    """Z-span of ws is Z^k iff the gcd of all k x k minors is 1."""
    rows = [list(w) for w in ws]
    if len(rows) < k:
        return False
    g = 0
    for pick in itertools.combinations(rows, k):
        g = math.gcd(g, _det(pick))
    return g == 1


def _det(m):
    m = [list(map(Fraction, r)) for r in m]
    n, d = len(m), Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return int(d)


def is_generic(xi, ws, anchor):
    return sum(a * x for a, x in zip(anchor, xi)) > 0 and all(sum(a * x for a, x in zip(w, xi)) for w in ws)


def first_generic_in_box(ws, k, anchor, radius=4):
    """Scan the box [-r, r]^k ordered by (max |entry|, lexicographic)."""
    box = sorted(itertools.product(range(-radius, radius + 1), repeat=k), key=lambda v: (max(map(abs, v)), v))
    return next(v for v in box if any(v) and is_generic(v, ws, anchor))


def abbv_sum(points):
    """Sum of sign / product(weights), straight from (sign, weights) pairs."""
    return sum((Fraction(s, math.prod(ws)) for s, ws in points), Fraction(0))


def _positive(g):
    """Networkx multigraph with every label made canonical (edge-reversal class)."""
    signs = dict(g.signs)
    out = nx.MultiGraph()
    labels = []
    for e in g.edges:
        lab = tuple(e.label)
        first = next(x for x in lab if x)
        if first < 0:
            lab = tuple(-x for x in lab)
            signs[e.u] = -signs[e.u]
            signs[e.v] = -signs[e.v]
        labels.append((e.u, e.v, lab))
    for v, s in signs.items():
        out.add_node(v, sign=s)
    for u, v, lab in labels:
        out.add_edge(u, v, label=lab)
    return out


def nx_isomorphic(g1, g2):
    """Isomorphism up to edge reversal, via networkx's VF2 matcher."""
    if (g1.k, g1.n) != (g2.k, g2.n):
        return False
    a, b = _positive(g1), _positive(g2)
    return nx.is_isomorphic(
        a,
        b,
        node_match=categorical_node_match("sign", None),
        edge_match=categorical_multiedge_match("label", None),
    )


def naive_datum(sign, weights):
    """Canonical (sign, sorted weights) for k = 1 without using the library."""
    ws = []
    for w in weights:
        if w < 0:
            sign, w = -sign, -w
        ws.append(w)
    return sign, tuple(sorted(ws))
