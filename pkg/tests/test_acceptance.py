"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` to see the report lines, or
``python3 tests/test_acceptance.py`` for the bare report.
"""
import itertools
import random
import sys
from collections import Counter
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from equigraph.algebra import signature_by_sampling  # noqa: E402
from equigraph.fpdata import (  # noqa: E402
    FixedPointCollection,
    make_datum,
    passes_validators,
    verify_abbv,
    verify_min_weight_balance,
    verify_sign_balance,
    verify_signature,
)
from equigraph.models import cpn_graph, sphere_graph, z2_sharp_z2bar_graph, zn_graph  # noqa: E402
from equigraph.multigraph import (  # noqa: E402
    disjoint_union,
    fixed_point_collection,
    isomorphic,
    rename,
    reverse_edge,
    reverse_orientation,
    validate_graph,
    vertex_datum,
)
from equigraph.reduce4 import InvalidGKM, generate4, reduce4, reduce4_gkm, strip_signs  # noqa: E402
from equigraph.reduce6 import NotRealizable, reduce6_data, reduce6_graph  # noqa: E402
from oracles import abbv_sum  # noqa: E402

# pinned tolerances
EXACT = 0  # every comparison below is over exact rationals or integers
ROUND_TRIP_RUNS = 100  # per value of k
MAX_VERTICES = 40
MUTATIONS = 200
MIN_REJECT_RATE = 0.95
MUTATION_SEED = 20240601


def report(say, n, ok, detail):
    say(f"ACC{n} {'PASS' if ok else 'FAIL'}: {detail}")


@pytest.fixture
def say(capsys):
    def _say(line):
        with capsys.disabled():
            print("\n" + line)

    return _say


# ------------------------------------------------------------ inputs


def catalog():
    """The parameter grids of the model catalog, as (name, graph)."""
    out = []
    for a, b, c in itertools.combinations(range(1, 7), 3):
        out.append((f"CP3({a},{b},{c})", cpn_graph(1, [a, b, c])))
    for a, b, c in itertools.permutations(range(1, 6), 3):
        out.append((f"Z1({a},{b},{c})", zn_graph(1, 1, a, b, c)))
    for a in range(1, 6):
        for d in range(1, 6):
            if 2 * d != a and d != a:
                out.append((f"Z2({a},{d},{d})", zn_graph(1, 2, a, d, d)))
    for a in range(1, 6):
        for e in range(1, 6):
            if 2 * e != a and e != a:
                out.append((f"Z2#Z2bar({a},{e})", z2_sharp_z2bar_graph(1, a, e)))
    return out


def figure_one_input(a=1, b=2, c=3):
    left = cpn_graph(1, [a, b, c])
    right = rename(reverse_orientation(cpn_graph(1, [a, b, c])), lambda v: "r" + v)
    return disjoint_union(left, right)


@lru_cache(maxsize=None)
def six_dim_inputs():
    """Effective catalog models, their reversals and a few disjoint unions."""
    graphs = [(name, g) for name, g in catalog() if validate_graph(g).ok]
    graphs += [(name + " reversed", reverse_orientation(g)) for name, g in graphs]
    rng = random.Random(7)
    base = [g for _, g in graphs]
    for i in range(10):
        g, h = rng.sample(base, 2)
        graphs.append((f"union{i}", disjoint_union(g, rename(h, lambda v: "u" + v))))
    graphs.append(("CP3 + reversed CP3", figure_one_input()))
    return tuple(graphs)


@lru_cache(maxsize=None)
def six_dim_traces():
    data = [(name, reduce6_data(fixed_point_collection(g))) for name, g in six_dim_inputs()]
    graph = [(name, reduce6_graph(g)) for name, g in six_dim_inputs()]
    return tuple(data), tuple(graph)


@lru_cache(maxsize=None)
def four_dim_traces():
    out = []
    for k in (1, 2):
        for seed in range(ROUND_TRIP_RUNS):
            g, _ = generate4(k, seed, 25, max_vertices=MAX_VERTICES)
            out.append((k, seed, g, reduce4(g)))
    return tuple(out)


# -------------------------------------------------------------- ACC 1


@pytest.mark.xfail(
    strict=True,
    reason="the drawn order keeps weight 3 until the last pair, which the top-weight rule of ACC5 forbids; see decisions ledger",
)
def test_acc1_figure_one(say):
    trace = reduce6_graph(figure_one_input())
    counts = [len(s.graph.signs) for s in trace.steps]
    penultimate = trace.steps[-2].graph if len(trace.steps) >= 2 else None
    shape = penultimate is not None and isomorphic(penultimate, sphere_graph(1, [1, 2, 3]))
    ok = len(trace.steps) == 4 and counts == [6, 4, 2, 0] and shape
    report(say, 1, ok, f"steps={len(trace.steps)} counts={counts} penultimate has labels 3,2,1: {shape}")
    assert ok


# -------------------------------------------------------------- ACC 2


def test_acc2_worked_data_reductions(say):
    cp3 = reduce6_data(fixed_point_collection(cpn_graph(1, [1, 2, 3])))
    z2 = reduce6_data(fixed_point_collection(zn_graph(1, 2, 3, 1, 1)))
    cp3_ops = [m.op_id for m in cp3.moves]
    z2_ops = [m.op_id for m in z2.moves]
    ok = (
        cp3_ops == [2, 1, 1]
        and (cp3.moves[0].A, cp3.moves[0].B, cp3.moves[0].C) == (1, 2, 3)
        and z2_ops == [4, 1, 1, 1, 1]
        and (z2.moves[0].A, z2.moves[0].C) == (1, 3)
        and Counter(cp3_ops) == Counter({2: 1, 1: 2})
        and Counter(z2_ops) == Counter({4: 1, 1: 4})
        and len(cp3.final) == 0
        and len(z2.final) == 0
    )
    report(say, 2, ok, f"CP3 {[str(m) for m in cp3.moves]}; Z2 {[str(m) for m in z2.moves]}")
    assert ok


# -------------------------------------------------------------- ACC 3


def test_acc3_model_catalog(say):
    bad = []
    models = catalog()
    for name, g in models:
        c = fixed_point_collection(g)
        abbv = verify_abbv(c).value
        oracle = abbv_sum([(d.sign, d.scalars()) for d in c])
        sig = verify_signature(c)
        sampled = signature_by_sampling([(d.sign, d.scalars()) for d in c])
        ok = (
            abbv == EXACT
            and oracle == EXACT
            and sig.ok
            and sig.value == EXACT
            and sampled == (True, EXACT)
            and verify_sign_balance(c).ok
            and verify_min_weight_balance(c).ok
        )
        if not ok:
            bad.append(name)
    report(say, 3, not bad, f"{len(models) - len(bad)}/{len(models)} models with ABBV=0, signature=0, balances ok")
    assert not bad, bad


# -------------------------------------------------------------- ACC 4


def test_acc4_dimension_four_round_trip(say):
    failures = []
    for k, seed, g, trace in four_dim_traces():
        if len(g.signs) > MAX_VERTICES or not trace.final.is_empty():
            failures.append((k, seed))
        elif not all(validate_graph(h).ok for h in trace.snapshots()):
            failures.append((k, seed))
    cp2 = fixed_point_collection(cpn_graph(1, [1, 2]))
    s_plus = verify_signature(cp2).value
    s_minus = verify_signature(cp2.negated()).value
    cp2_ok = s_plus == 1 and s_minus == -1 and reduce4(cpn_graph(1, [1, 2])).final.is_empty()
    runs = len(four_dim_traces())
    ok = not failures and cp2_ok
    report(say, 4, ok, f"{runs - len(failures)}/{runs} generated graphs reduced; CP2 signature {s_plus}, reversed {s_minus}")
    assert ok, failures


# -------------------------------------------------------------- ACC 5


def test_acc5_top_weight_monotonicity(say):
    data, graph = six_dim_traces()
    bad, checked = [], 0
    for name, trace in data + graph:
        for s in trace.steps:
            l = s.top_weight
            removed_ok = all(l in d.scalars() for d in s.move.removed)
            added_ok = all(w < l for d in s.move.added for w in d.scalars())
            checked += 1
            if not (removed_ok and added_ok):
                bad.append((name, str(s.move)))
        # the recorded top weight is the real maximum of the state before the step
        for before, s in zip(trace.snapshots(), trace.steps):
            c = before if isinstance(before, FixedPointCollection) else fixed_point_collection(before)
            if c.max_weight() != s.top_weight:
                bad.append((name, "top weight mismatch"))
    report(say, 5, not bad, f"{checked} dimension-6 steps remove the top weight and add only smaller weights")
    assert not bad, bad[:5]


def test_acc5_dimension_four_self_sums_drop_two(say):
    # what the engine does guarantee: each self sum removes two vertices and
    # each blow-up adds one, so every macro-step shrinks the graph
    bad, n = [], 0
    for k, seed, g, trace in four_dim_traces():
        prev = len(trace.initial.signs)
        for s in trace.steps:
            now = len(s.graph.signs)
            want = -2 if s.kind == "self_sum" else 1
            if now - prev != want:
                bad.append((k, seed, s.kind))
            prev = now
            n += 1
    say(f"ACC5 (supplement) {'PASS' if not bad else 'FAIL'}: {n} dimension-4 steps; self sums -2, blow-ups +1")
    assert not bad, bad[:5]


@pytest.mark.xfail(
    strict=True,
    reason="a blow-up macro-step changes the vertex count by +1-2 = -1 (CP2 has 3 vertices); see decisions ledger",
)
def test_acc5_dimension_four_macro_steps_drop_two(say):
    drops = Counter()
    for _, _, _, trace in four_dim_traces():
        prev = len(trace.initial.signs)
        for macro in trace.macro_steps():
            now = len(macro[-1].graph.signs)
            drops[prev - now] += 1
            prev = now
    ok = set(drops) == {2}
    report(say, 5, ok, f"dimension-4 macro-step drops {dict(sorted(drops.items()))}")
    assert ok


# -------------------------------------------------------------- ACC 6


def test_acc6_two_vertex_graphs_are_opposite(say):
    graphs = [h for _, _, _, t in four_dim_traces() for h in t.snapshots()]
    graphs += [h for _, t in six_dim_traces()[1] for h in t.snapshots()]
    graphs += [g for _, g in catalog()]
    graphs += [sphere_graph(1, [1, 2, 3]), sphere_graph(2, [(1, 0), (0, 1)])]
    pairs = [h for h in graphs if len(h.signs) == 2]
    bad = []
    for h in pairs:
        a, b = sorted(h.signs)
        if vertex_datum(h, a) != -vertex_datum(h, b):
            bad.append(h)
    report(say, 6, not bad and pairs, f"{len(pairs)} two-vertex graphs among {len(graphs)}, all with opposite data")
    assert pairs and not bad


# -------------------------------------------------------------- ACC 7


def mutate(c: FixedPointCollection, rng: random.Random):
    pts = list(c.points)
    i = rng.randrange(len(pts))
    d = pts[i]
    if rng.random() < 0.5:
        pts[i] = -d
        how = f"flip sign of {d}"
    else:
        ws = list(d.scalars())
        j = rng.randrange(len(ws))
        ws[j] += 1
        pts[i] = make_datum(d.sign, ws)
        how = f"raise weight {j} of {d}"
    return FixedPointCollection(c.k, c.n, tuple(sorted(pts, key=lambda x: x.sort_key()))), how


def test_acc7_negative_screening(say):
    rng = random.Random(MUTATION_SEED)
    models = catalog()
    accepted = []
    for _ in range(MUTATIONS):
        name, g = rng.choice(models)
        m, how = mutate(fixed_point_collection(g), rng)
        if not passes_validators(m):
            continue
        try:
            trace = reduce6_data(m)
        except NotRealizable:
            continue
        accepted.append((name, how, [str(x) for x in trace.moves]))
    rate = 1 - len(accepted) / MUTATIONS
    for name, how, moves in accepted:
        say(f"  accepted mutant of {name} ({how}): {moves}")
    ok = rate >= MIN_REJECT_RATE
    report(say, 7, ok, f"{MUTATIONS - len(accepted)}/{MUTATIONS} mutants rejected ({rate:.1%}, need {MIN_REJECT_RATE:.0%})")
    assert ok


# -------------------------------------------------------------- ACC 8


def test_acc8_gkm(say):
    cp2 = reduce4_gkm(strip_signs(cpn_graph(2, [(1, 0), (0, 1)])))
    sphere = reduce4_gkm(strip_signs(sphere_graph(2, [(1, 0), (0, 1)])))
    flipped = reduce4_gkm(strip_signs(reverse_edge(cpn_graph(2, [(1, 0), (0, 1)]), 2)))
    try:
        reduce4_gkm(strip_signs(sphere_graph(2, [(1, 1), (2, 2)])))
        rejected = False
    except InvalidGKM:
        rejected = True
    ok = cp2.final.is_empty() and sphere.final.is_empty() and flipped.final.is_empty() and rejected
    report(
        say,
        8,
        ok,
        f"CP2 in {len(cp2.macro_steps())} macro-steps, sphere in {len(sphere.macro_steps())}, dependent labels rejected: {rejected}",
    )
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-rxX"]))
