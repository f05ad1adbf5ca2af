"""Grow a random dimension-4 graph, then reduce it back to the empty graph."""
import sys

from equigraph.reduce4 import generate4, reduce4

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 3
g, grown = generate4(1, seed, 12)
print(f"grown in {len(grown.steps)} steps to {len(g.signs)} vertices:")
for s in grown.steps:
    print(f"  {s.kind:10} {s.operands}")
trace = reduce4(g)
for s in trace.steps:
    print(f"  {s.kind:10} -> {len(s.graph.signs)} vertices")
