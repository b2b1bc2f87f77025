import io
import json
import os
import subprocess
import sys

import pytest

from pantscomplex.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
        return str(path)

    return _write


FIG6 = ["1", "0", "-1", "1/0", "1"]


def test_counts():
    assert call("counts", 2, 0) == (0, '{"curves":3,"pants":2}\n', "")


def test_counts_rejects_bad_type():
    code, out, err = call("counts", 1, 0)
    assert code == 2 and out == "" and "error" in err


def test_enumerate():
    code, out, _ = call("enumerate", 0, 5)
    data = json.loads(out)
    assert code == 0 and data["count"] == 15 == len(data["codes"])


def test_movegraph_formats():
    code, out, _ = call("movegraph", 0, 5)
    data = json.loads(out)
    assert code == 0 and len(data["vertices"]) == 15 and len(data["edges"]) == 30
    code, out, _ = call("movegraph", 0, 4, "--format", "dot")
    assert code == 0 and out.startswith("graph")


def test_moves(write):
    g = write("g.json", {"g": 1, "n": 1, "pants": [0], "legs": [[1, 0]], "edges": [[0, 0]]})
    code, out, _ = call("moves", g)
    data = json.loads(out)
    assert code == 0 and [m["kind"] for m in data["moves"]] == ["S"]
    assert data["moves"][0]["complement"] == {"g": 1, "n": 1}


def test_farey_ball():
    code, out, _ = call("farey", "ball", 1, "--model", "s")
    data = json.loads(out)
    assert code == 0 and data["model"] == "S" and len(data["triangles"]) == 2
    code, out, _ = call("farey", "ball", 1, "--format", "dot")
    assert code == 0 and "--" in out


def test_reduce_then_verify(write):
    code, out, _ = call("reduce", write("loop.json", FIG6))
    assert code == 0
    cert = json.loads(out)
    assert [s["op"] for s in cert["steps"]].count("swap") == 2
    path = write("cert.json", out)
    assert call("verify", path)[0] == 0
    # accepts the {"loop": [...]} wrapper too
    assert call("reduce", write("loop2.json", {"loop": FIG6}))[1] == out


def test_tampered_certificate(write):
    _, out, _ = call("reduce", write("loop.json", FIG6))
    cert = json.loads(out)
    swap = next(s for s in cert["steps"] if s["op"] == "swap")
    swap["cell"]["boundary"][0] = "2"
    code, out, _ = call("verify", write("bad.json", cert))
    verdict = json.loads(out)
    assert code == 1 and verdict["ok"] is False and verdict["step"] is not None


def test_malformed_json(write):
    code, out, err = call("verify", write("broken.json", '{"host":\n  {"model": "A",}'))
    assert code == 2 and out == ""
    assert "line 2" in err and "column" in err


def test_missing_file():
    code, _, err = call("verify", "/nonexistent/cert.json")
    assert code == 2 and "cannot read" in err


def test_fill_and_failure(write):
    code, out, _ = call("movegraph", 0, 4)
    verts = json.loads(out)["vertices"]
    loop = write("l.json", verts + verts[:1])
    code, out, _ = call("fill", 0, 4, loop)
    assert code == 0 and json.loads(out)["type"] == "certificate"
    code, out, _ = call("fill", 0, 4, loop, "--budget", 0)
    assert code == 1 and json.loads(out)["status"] == "budget-exhausted"


def test_fill_not_a_loop(write):
    code, _, err = call("fill", 0, 4, write("l.json", [[0, 4]]))
    assert code == 2


def test_report():
    code, out, _ = call("report", 0, 5)
    data = json.loads(out)
    assert code == 0 and (data["basis_size"], data["filled"], data["failed"]) == (16, 16, 0)


def test_relations():
    code, out, _ = call("relations", 0, 5, "--kind", "5A")
    assert code == 0 and json.loads(out)["count"] == 12
    code, out, _ = call("relations", 1, 1, "--kind", "3S")
    assert code == 0 and json.loads(out)["count"] == 0


def test_corpus_seed():
    a = call("corpus", "--seed", 5, "--count", 4)
    assert a == call("corpus", "--seed", 5, "--count", 4)
    assert a[1] != call("corpus", "--seed", 6, "--count", 4)[1]
    assert call("corpus", "--count", 1)[0] == 2
    assert call("corpus", "--seed", 2**64)[0] == 2
    assert call("corpus", "--seed", -1)[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["movegraph", 1, 3],
        ["farey", "ball", 3],
        ["relations", 0, 5, "--kind", "3A"],
        ["relations", 0, 6, "--kind", "C"],
    ],
)
def test_export_roundtrip(argv, write):
    _, first, _ = call(*argv)
    path = write("obj.json", first)
    code, again, _ = call("export", path)
    assert code == 0
    # re-export of the export is a fixed point, byte for byte
    assert call("export", write("obj2.json", again))[1] == again
    assert json.loads(again) == json.loads(first) | {"type": json.loads(again)["type"]}
    assert call("export", path, "--format", "dot")[0] == 0


def test_export_certificate_and_graph(write):
    _, cert, _ = call("reduce", write("loop.json", FIG6))
    assert call("export", write("c.json", cert))[1] == cert
    g = {"g": 0, "n": 3, "pants": [0], "legs": [[1, 0], [2, 0], [3, 0]], "edges": []}
    code, out, _ = call("export", write("g.json", g))
    assert code == 0 and call("export", write("g2.json", out))[1] == out
    code, out, _ = call("export", write("g.json", g), "--format", "dot")
    assert code == 0 and "b3" in out


def test_export_unknown(write):
    assert call("export", write("x.json", {"type": "mystery"}))[0] == 2


def test_module_entry_point_is_hash_seed_independent():
    outs = set()
    for seed in ("0", "1"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run([sys.executable, "-m", "pantscomplex", "relations", "0", "5", "--kind", "5A"],
                              capture_output=True, env=env, check=True)
        outs.add(proc.stdout)
    assert len(outs) == 1
