"""Reduce the Z2(5,2,2) multigraph, writing a DOT file per step to ./z2_steps."""
from pathlib import Path

from equigraph.documents import dot_export
from equigraph.models import zn_graph
from equigraph.reduce6 import reduce6_graph

out = Path("z2_steps")
out.mkdir(exist_ok=True)
trace = reduce6_graph(zn_graph(1, 2, 5, 2, 2))
for i, g in enumerate(trace.snapshots()):
    (out / f"step{i:03d}.dot").write_text(dot_export(g, f"step{i}"))
for s in trace.steps:
    params = s.operands.get("params", "")
    print(f"macro {s.macro}: {s.kind:18} {str(s.move):22} {params} -> {len(s.graph.signs)} vertices")
print(f"backtracked: {trace.backtracked}, states explored: {trace.states_explored}")
