import json

import pytest

from equigraph.cli import main, roundtrip_one
from equigraph.documents import parse_document, serialize
from equigraph.fpdata import D, collection
from equigraph.models import cpn_graph, zn_graph
from equigraph.multigraph import fixed_point_collection
from equigraph.reduce4 import strip_signs


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else serialize(obj))
    return str(p)


def test_gen_writes_a_model(tmp_path):
    out = tmp_path / "cp3.json"
    assert main(["gen", "cpn", "1", "2", "3", "-o", str(out)]) == 0
    assert parse_document(out.read_text()) == cpn_graph(1, [1, 2, 3])


def test_gen_collection_and_reversed(tmp_path, capsys):
    assert main(["gen", "z1", "3", "2", "1", "--data", "--reversed"]) == 0
    c = parse_document(capsys.readouterr().out)
    assert c == fixed_point_collection(zn_graph(1, 1, 3, 2, 1)).negated()


def test_gen_vector_parameters(capsys):
    assert main(["gen", "cpn", "1,0", "0,1", "--k", "2"]) == 0
    g = parse_document(capsys.readouterr().out)
    assert g.k == 2 and len(g.signs) == 3


def test_gen_bad_parameters(capsys):
    assert main(["gen", "z1", "2", "2", "1"]) == 2
    assert main(["gen", "z2", "1"]) == 4
    assert main(["gen", "torus"]) == 4
    assert main(["gen", "cpn", "1,2"]) == 4


def test_gen_random4_uses_env_seed(monkeypatch, capsys):
    monkeypatch.setenv("EQUIGRAPH_SEED", "5")
    main(["gen", "random4", "--steps", "8"])
    a = capsys.readouterr().out
    main(["gen", "random4", "--steps", "8", "--seed", "5"])
    assert capsys.readouterr().out == a
    monkeypatch.setenv("EQUIGRAPH_SEED", "x")
    assert main(["gen", "random4"]) == 4


def test_verify_z1_passes(tmp_path, capsys):
    path = write(tmp_path, "z1.json", parse_document(serialize(zn_graph(1, 1, 3, 2, 1))))
    assert main(["verify", path]) == 0
    out = capsys.readouterr().out
    assert "ABBV=0" in out and "signature=0" in out and "structure: ok" in out


def test_verify_z1_collection(tmp_path, capsys):
    path = write(tmp_path, "z1.json", fixed_point_collection(zn_graph(1, 1, 3, 2, 1)))
    assert main(["verify", path]) == 0
    out = capsys.readouterr().out
    assert "ABBV=0" in out and "min_weight_balance: ok" in out and "sign_balance: ok" in out


def test_verify_rejects_single_point(tmp_path, capsys):
    path = write(tmp_path, "bad.json", collection(1, 3, [D(1, 1, 1, 1)]))
    assert main(["verify", path]) == 2
    assert "ABBV=1" in capsys.readouterr().out


def test_verify_io_errors(tmp_path):
    assert main(["verify", str(tmp_path / "missing.json")]) == 4
    assert main(["verify", write(tmp_path, "broken.json", "{")]) == 4
    assert main(["verify", write(tmp_path, "schema.json", '{"k":1,"n":1,"vertices":[{"id":"a"}],"edges":[]}')]) == 4


def test_reduce_data_cp3(tmp_path):
    path = write(tmp_path, "cp3.json", fixed_point_collection(cpn_graph(1, [1, 2, 3])))
    out = tmp_path / "trace.json"
    assert main(["reduce", path, "--dim", "6", "--level", "data", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["steps"]) == 3 and doc["reached-empty"]


def test_reduce_graph_with_dot_snapshots(tmp_path):
    path = write(tmp_path, "z2.json", zn_graph(1, 2, 3, 1, 1))
    dots = tmp_path / "dots"
    out = tmp_path / "trace.json"
    assert main(["reduce", path, "--dim", "6", "-o", str(out), "--emit-dot-every-step", str(dots)]) == 0
    doc = json.loads(out.read_text())
    files = sorted(p.name for p in dots.iterdir())
    assert files[0] == "step000.dot" and len(files) == len(doc["steps"]) + 1


def test_reduce_dimension_four(tmp_path, capsys):
    path = write(tmp_path, "cp2.json", cpn_graph(1, [1, 2]))
    assert main(["reduce", path, "--dim", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["engine"] == "reduce4" and len(doc["steps"]) == 3


def test_reduce_gkm(tmp_path, capsys):
    path = write(tmp_path, "g.json", strip_signs(cpn_graph(2, [(1, 0), (0, 1)])))
    assert main(["reduce", path, "--dim", "4", "--gkm"]) == 0
    capsys.readouterr()
    bad = write(tmp_path, "bad.json", strip_signs(cpn_graph(1, [2, 4])))
    assert main(["reduce", bad, "--dim", "4", "--gkm"]) == 2


def test_reduce_not_realizable(tmp_path):
    path = write(tmp_path, "bad.json", collection(1, 3, [D(1, 1, 1, 1)]))
    assert main(["reduce", path, "--dim", "6", "--level", "data"]) == 3


def test_reduce_invalid_graph(tmp_path):
    path = write(tmp_path, "g.json", cpn_graph(1, [2, 4]))
    assert main(["reduce", path, "--dim", "4"]) == 2
    assert main(["reduce", path, "--dim", "4", "--non-effective"]) == 0


def test_reduce_wrong_document_kind(tmp_path):
    path = write(tmp_path, "c.json", fixed_point_collection(cpn_graph(1, [1, 2])))
    assert main(["reduce", path, "--dim", "4"]) == 4
    assert main(["reduce", path, "--dim", "6"]) == 4


def test_dot_command(tmp_path, capsys):
    path = write(tmp_path, "cp3.json", cpn_graph(1, [1, 2, 3]))
    assert main(["dot", path]) == 0
    first = capsys.readouterr().out
    assert main(["dot", path]) == 0
    assert capsys.readouterr().out == first
    assert first.count(" -- ") == 6


def test_roundtrip_command(capsys):
    assert main(["roundtrip", "--count", "6", "--steps", "10", "--workers", "3", "--seed", "100"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert [line.split(":")[0] for line in out[:6]] == [f"seed {s}" for s in range(100, 106)]
    assert out[-1] == "6/6 reduced to the empty graph"


def test_roundtrip_one():
    seed, ok, msg = roundtrip_one(2, 9, 12)
    assert seed == 9 and ok, msg


def test_missing_subcommand():
    with pytest.raises(SystemExit):
        main([])
