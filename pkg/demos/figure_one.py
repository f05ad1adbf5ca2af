"""Glue CP3(1,2,3) to its reverse at q0, then cancel opposite pairs one by one.

Prints each graph as DOT, then shows what the reduction engine does with the
disjoint union of the same two graphs.
"""
from equigraph.documents import dot_export
from equigraph.models import cpn_graph
from equigraph.multigraph import connected_sum, disjoint_union, rename, reverse_orientation, self_connected_sum
from equigraph.reduce6 import reduce6_graph

left = cpn_graph(1, [1, 2, 3])
right = rename(reverse_orientation(cpn_graph(1, [1, 2, 3])), lambda v: "r" + v)

g = connected_sum(left, "q0", right, "rq0")
print(f"connected sum at q0: {len(g.signs)} vertices")
print(dot_export(g, "sum"))
for v in ("q1", "q2", "q3"):
    g = self_connected_sum(g, v, "r" + v)
    print(f"self sum of {v} and r{v}: {len(g.signs)} vertices")
    print(dot_export(g, f"after_{v}"))

# the engine always removes the current top weight first, so its route differs
trace = reduce6_graph(disjoint_union(left, right))
print("engine route on the disjoint union:")
for s in trace.steps:
    print(f"  {s.kind:18} {s.operands.get('case', ''):7} -> {len(s.graph.signs)} vertices")
