import json
import subprocess
import sys

import pytest

from shapes import a22, markov, octagon_maximal, path3, star5
from surfclust.cli import EXIT_CODES, main, run
from surfclust.quiver import Quiver
from surfclust.triangulation import Triangulation, exchange_quiver


@pytest.fixture
def cli(capsys):
    def call(*argv):
        code = main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err

    return call


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_reconstruct_markov(cli, tmp_path):
    code, out, _ = cli("reconstruct", "--quiver", write(tmp_path, "q.json", markov().to_json()))
    doc = json.loads(out)
    assert code == 0
    assert doc["status"] == "recovered" and doc["sig"] == "g=1,p=1,h=()"
    assert doc["surface"] == "once-punctured torus"
    t = Triangulation.from_json(doc["triangulation"])
    assert exchange_quiver(t).signed() == markov().signed()


def test_reconstruct_ambiguous_and_outside(cli, tmp_path):
    code, out, _ = cli("reconstruct", "--quiver", write(tmp_path, "a.json", a22().to_json()))
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "ambiguous"
    assert doc["signatures"] == ["g=0,p=0,h=(2,2)", "g=0,p=2,h=(1)"]
    code, out, _ = cli("reconstruct", "--quiver", write(tmp_path, "s.json", star5().to_json()))
    assert code == 1 and json.loads(out)["status"] == "not-in-class"


def test_decompose_all(cli, tmp_path):
    path = write(tmp_path, "q.json", a22().to_json())
    code, out, _ = cli("decompose", "--quiver", path, "--all")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "multiple" and doc["count"] == 2
    assert len(doc["decompositions"]) == 2
    code, out, _ = cli("decompose", "--quiver", path, "--kinds", "I,II")
    doc = json.loads(out)
    assert doc["verdict"] == "unique" and doc["count"] == 1
    code, _, err = cli("decompose", "--quiver", path, "--kinds", "I,VII")
    assert code == 2 and "VII" in err


def test_build_and_exception_surface(cli):
    code, out, _ = cli("build", "--sig", "g=0,p=1,h=(2)")
    doc = json.loads(out)
    assert code == EXIT_CODES["exception-surface"] == 4
    assert doc["item"] == 2
    code, out, _ = cli("build", "--sig", "g=0,p=0,h=(8)")
    doc = json.loads(out)
    assert code == 0 and doc["sig"] == "g=0,p=0,h=(8)"
    assert len(Triangulation.from_json(doc["triangulation"]).arcs) == 5
    code, out, _ = cli("build", "--sig", "g=0,p=1,h=(2)", "--seed-only")
    assert code == 0


def test_usage_errors(cli, tmp_path):
    code, _, err = cli("build", "--sig", "g=0,p=3,h=()")
    assert code == 2 and err
    code, _, _ = cli("frobnicate")
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = cli("quiver", "--triangulation", str(bad))
    assert code == 2 and "JSONDecodeError" in err
    code, _, _ = cli("mutate", "--quiver", write(tmp_path, "q.json", markov().to_json()), "--at", "7")
    assert code == 2


def test_enumerate_cap(cli):
    code, out, _ = cli("enumerate", "--sig", "g=0,p=0,h=(7)", "--cap", "10")
    doc = json.loads(out)
    assert code == 3 and doc["truncated"] and doc["count"] == 10
    code, out, _ = cli("enumerate", "--sig", "g=0,p=0,h=(6)", "--cap", "100", "--list")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 14 == len(doc["triangulations"])


def test_mutation_class(cli, tmp_path):
    code, out, _ = cli("mutation-class", "--quiver", write(tmp_path, "q.json", path3().to_json()), "--cap", "50")
    assert code == 0 and json.loads(out)["size"] == 4
    heavy = Quiver.from_arrows(3, [(0, 1, 3), (1, 2, 3), (2, 0, 3)])
    code, _, _ = cli("mutation-class", "--quiver", write(tmp_path, "h.json", heavy.to_json()), "--cap", "5")
    assert code == 3


def test_quiver_mutate_flip_pipeline(cli, tmp_path):
    t = octagon_maximal()
    tpath = write(tmp_path, "t.json", t.to_json())
    code, out, _ = cli("quiver", "--triangulation", tpath)
    q = Quiver.from_json(json.loads(out))
    assert code == 0 and q == exchange_quiver(t)
    code, out, _ = cli("flip", "--triangulation", tpath, "--arc", "0")
    flipped = Triangulation.from_json(json.loads(out)["triangulation"])
    qpath = write(tmp_path, "q.json", q.to_json())
    code, out, _ = cli("mutate", "--quiver", qpath, "--at", str(q.index(0)))
    assert Quiver.from_json(json.loads(out)) == exchange_quiver(flipped)
    code, out, _ = cli("mutate", "--quiver", qpath, "--at", "0", "--at", "0")
    assert Quiver.from_json(json.loads(out)) == q
    code, out, _ = cli("quiver", "--triangulation", tpath, "--text")
    assert code == 0 and out.strip()


def test_json_outputs_reparse(tmp_path):
    qpath = write(tmp_path, "q.json", a22().to_json())
    for argv in (
        ["build", "--sig", "g=1,p=2,h=(3)"],
        ["enumerate", "--sig", "g=0,p=1,h=(4)", "--cap", "500", "--list"],
        ["decompose", "--quiver", qpath, "--all"],
        ["reconstruct", "--quiver", qpath],
    ):
        res = run(argv)
        text = res.render()
        assert json.loads(text) == res.payload
        assert json.loads(json.dumps(json.loads(text))) == json.loads(text)


def test_render_and_signature(cli, tmp_path):
    tpath = write(tmp_path, "t.json", octagon_maximal().to_json())
    code, out, _ = cli("render", "--triangulation", tpath, "--name", "Oct")
    assert code == 0 and out.startswith("digraph Oct") and "->" in out
    code, out, _ = cli("signature", "--triangulation", tpath)
    assert json.loads(out)["sig"] == "g=0,p=0,h=(8)"


def test_verify_small(cli):
    code, out, _ = cli("verify", "--sig", "g=0,p=0,h=(6)", "--sig", "g=1,p=1,h=()", "--match1", "--random", "50")
    doc = json.loads(out)
    assert code == 0 and doc["failed"] == 0
    assert len(doc["reports"]) == 2 and doc["match1"]["pairs_checked"] > 0


def test_verify_strict_cap(cli):
    code, _, _ = cli("verify", "--sig", "g=0,p=0,h=(9)", "--cap", "20", "--strict-cap", "--random", "0")
    assert code == 3


@pytest.mark.slow
def test_verify_default_suite_in_parallel(cli):
    code, out, _ = cli("verify", "--jobs", "2")
    doc = json.loads(out)
    assert code == 0 and doc["failed"] == 0
    assert len(doc["reports"]) == 13


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "surfclust", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "surfclust" in proc.stdout


def test_commands_chain_through_files(cli, tmp_path):
    built = tmp_path / "built.json"
    code, out, _ = cli("build", "--sig", "g=1,p=1,h=(2)")
    built.write_text(out)
    code, out, _ = cli("quiver", "--triangulation", str(built))
    assert code == 0
    qpath = tmp_path / "q.json"
    qpath.write_text(out)
    code, out, _ = cli("reconstruct", "--quiver", str(qpath))
    assert code == 0 and json.loads(out)["sig"] == "g=1,p=1,h=(2)"
    flipped = tmp_path / "flipped.json"
    code, out, _ = cli("flip", "--triangulation", str(built), "--arc", "0")
    flipped.write_text(out)
    code, out, _ = cli("signature", "--triangulation", str(flipped))
    assert code == 0 and json.loads(out)["sig"] == "g=1,p=1,h=(2)"
