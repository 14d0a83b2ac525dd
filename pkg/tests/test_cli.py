import io
import json
import subprocess
import sys

import pytest

from tropmon.cli import REPRO, run
from tropmon.tropical_types import TropicalType

from corpus import edge, theta, triangle, vertex

MAIN = {"generators": ["e0", "e1", "e2", "e3"], "relations": [
    {"lhs": {"e0": 1, "e2": 1}, "rhs": {"e1": 2}},
    {"lhs": {"e1": 1, "e3": 1}, "rhs": {"e2": 2}},
    {"lhs": {"e0": 1, "e3": 1}, "rhs": {"e1": 1, "e2": 1}}]}


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    text = out.getvalue() or err.getvalue()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = text
    return code, data


@pytest.fixture
def write(tmp_path):
    def _write(obj, name="in.json"):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)
    return _write


def test_torify(write):
    code, out = call("torify", write(MAIN))
    assert code == 0 and out["rank"] == 2 and out["hilbert_size"] == 4


def test_sanitize_and_construct(write):
    code, out = call("sanitize", write(MAIN))
    assert code == 0 and len(out["presentation"]["generators"]) == 6
    code, built = call("construct", write(out, "san.json"))
    assert code == 0 and len(built["slopes"]) == 6
    assert built["presentation_echo"] == out["presentation"]
    code, out = call("sanitize", "--uniform", write(MAIN))
    assert code == 0 and len(out["presentation"]["generators"]) == 8


def test_construct_needs_bipartite(write):
    code, out = call("construct", write(MAIN))
    assert code == 1 and out["error"] == "NotBipartite"
    code, out = call("construct", "--sanitize", write(MAIN))
    assert code == 0 and out["monoid"]["hilbert_size"] == 4


def test_construct_not_positive(write):
    P = {"generators": ["a", "b"], "relations": [{"lhs": {"a": 1, "b": 1}, "rhs": {}}]}
    code, out = call("construct", write({"presentation": P, "bipartition": {"left": ["a", "b"], "right": []}}))
    assert code == 1 and out["error"] == "NotPositive" and set(out["generators"]) == {"a", "b"}


def test_pretty_trace(write):
    out = io.StringIO()
    assert run(["--pretty", "construct", "--sanitize", write(MAIN)], stdout=out) == 0
    assert "trace:" in out.getvalue() and "edge e0:" in out.getvalue()


def test_type_commands(write):
    tri = write(triangle(2, 1, 3).to_dict())
    code, out = call("type-monoid", tri)
    assert code == 0 and out["rank"] == 2 and out["hilbert_size"] == 4
    code, out = call("representable", tri)
    assert code == 0 and out["representable"]
    code, out = call("representable", write(theta(1, -1).to_dict(), "t.json"))
    assert code == 1 and out == {"representable": False}
    code, out = call("rank-check", tri)
    assert code == 0 and out == {"rank": 2, "vertex_count": 3, "holds": True}
    code, out = call("unparalleled", tri)
    assert code == 0 and out["minimal_generator_count"] == 3 and out["bound"] == 3
    code, out = call("monogenize", tri)
    assert code == 0 and TropicalType.from_dict(out) == triangle(2, 1, 3)
    code, out = call("reduce", tri)
    assert code == 0 and out["zero_edge_count"] == 0


def test_rank_check_precondition(write):
    two = TropicalType(1, (vertex("a"), vertex("b"), vertex("c", [0])),
                       (edge("a", "c", 1), edge("b", "c", 1)))
    code, out = call("rank-check", write(two.to_dict()))
    assert code == 1 and out["error"] == "PreconditionFailed" and "not monogenic" in out["failures"]


def test_invalid_inputs(write):
    code, out = call("torify", write("{not json"))
    assert code == 2 and out["error"] == "InputError"
    code, out = call("torify", "/nonexistent/file.json")
    assert code == 2
    bad = {"n": 1, "mode": "orthant", "vertices": [{"id": "a", "genus": 0, "face": [0]}],
           "edges": [{"id": "e", "from": "a", "to": "z", "slope": [1], "face": [0]}], "legs": []}
    code, out = call("type-monoid", write(bad))
    assert code == 2 and out["error"] == "InvalidType"
    assert any(v["kind"] == "UnknownVertex" for v in out["violations"])
    code, out = call("torify", write({"generators": "oops"}))
    assert code == 2
    assert call("no-such-command")[0] == 2


def test_realize2d():
    code, out = call("realize2d", "--k", "1", "--m", "3")
    assert code == 0 and out["slope_triple"] == [2, 1, 3]
    code, out = call("realize2d", "--k", "2", "--m", "4")
    assert code == 2 and out["error"] == "InvalidConeData"
    code, out = call("realize2d", "--k", "1", "--m", "3", "--v3", "1,2")
    assert code == 0
    code, out = call("realize2d", "--k", "1", "--m", "3", "--v3", "x")
    assert code == 2


def test_obstruct(write):
    code, out = call("obstruct", write({"vertices": [[0, 0], [1, 0], [2, 1], [2, 2], [1, 3], [0, 3], [-1, 1]]}))
    assert code == 1 and out["verdict"] == "inaccessible" and out["extremal_ray_count"] == 7
    code, out = call("obstruct", write([[0, 0], [1, 0], [1, 1], [0, 1]]))
    assert code == 0 and out["verdict"] == "inconclusive"
    code, out = call("obstruct", write([[0, 0], [1, 0], [2, 0]]))
    assert code == 2 and out["error"] == "NotConvex"
    code, out = call("obstruct", write([[0, 0], [1, 0], [0.5, 1]]))
    assert code == 2 and out["error"] == "NotLattice"


def test_glue_affine(write):
    code, out = call("glue-affine", write(MAIN))
    assert code == 0 and out["graph_genus"] == 1 and out["monoid"]["hilbert_size"] == 4
    assert out["type"]["mode"] == "affine"


def test_search(tmp_path, monkeypatch):
    cat = tmp_path / "cat.json"
    code, out = call("search", "--vertices", "3", "--slope-bound", "3", "--out", str(cat))
    assert code == 0 and out["types"] == 42 and out["catalog"] == str(cat)
    assert json.loads(cat.read_text())["runs"][0]["summary"]["distinct_monoids"] == out["distinct_monoids"]
    env = tmp_path / "env.json"
    monkeypatch.setenv("TROPMON_CATALOG", str(env))
    code, out = call("search", "--vertices", "2", "--slope-bound", "1", "--records")
    assert code == 0 and env.exists() and len(out["records"]) == 1
    code, out = call("search", "--vertices", "0", "--slope-bound", "1")
    assert code == 2 and out["error"] == "InvalidBounds"


@pytest.mark.parametrize("name", sorted(REPRO))
def test_repro_matches_golden(name):
    code, out = call("repro", name)
    assert code == 0 and out["matches_golden"], out.get("diff")


def test_repro_reports():
    _, out = call("repro", "example-main-construction")
    rep = out["report"]
    assert rep["torify"]["hilbert_size"] == 4 and rep["monoid_matches_input"]
    assert len(rep["sanitized"]["relations"]) == 5
    _, out = call("repro", "rank-formula-sweep")
    counts = out["report"]["by_vertex_count"]
    assert [counts[k]["types"] for k in ("1", "2", "3")] == [1, 9, 855]
    assert all(c["violations"] == 0 for c in counts.values())


def test_output_is_deterministic(write):
    path = write(MAIN)
    assert call("construct", "--sanitize", path) == call("construct", "--sanitize", path)


def test_round_trip_through_files(write):
    code, san = call("sanitize", write(MAIN))
    code, built = call("construct", write(san, "s.json"))
    code, mono = call("type-monoid", write({"type": built["type"]}, "t.json"))
    assert code == 0 and mono == built["monoid"]


def test_stdin_and_entry_point():
    res = subprocess.run([sys.executable, "-m", "tropmon", "torify", "-"], input=json.dumps(MAIN),
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["rank"] == 2
