"""Reduce the fixed point data of CP3(1,2,3) and Z2(3,1,1) by the five moves."""
from equigraph.fpdata import verify_all
from equigraph.models import cpn_graph, zn_graph
from equigraph.multigraph import fixed_point_collection
from equigraph.reduce6 import reduce6_data

for name, g in [("CP3(1,2,3)", cpn_graph(1, [1, 2, 3])), ("Z2(3,1,1)", zn_graph(1, 2, 3, 1, 1))]:
    c = fixed_point_collection(g)
    print(name, c)
    for check, verdict in verify_all(c).items():
        print(f"  {check}: {verdict.reason}")
    trace = reduce6_data(c)
    for s in trace.steps:
        print(f"  {str(s.move):24} leaves {s.collection}")
    print()
