import json

import pytest
from conftest import chain2, diamond, id2, tot2

from fundlog.cli import main
from fundlog.io import frame_to_json, hom_to_json, lattice_to_json, write_json
from fundlog.lattice import LatticeHom


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    write_json(frame_to_json(id2()), tmp_path / "id2.json")
    write_json(frame_to_json(tot2()), tmp_path / "tot2.json")
    write_json(lattice_to_json(diamond()), tmp_path / "b4.json")
    write_json({"points": ["a", "b"], "edges": [["a", "b"]]}, tmp_path / "bad.json")
    (tmp_path / "broken.json").write_text('{"points": [\n', encoding="utf-8")
    return tmp_path


def test_check_exit_codes(capsys, files):
    code, out, _ = run(capsys, "check", str(files / "id2.json"))
    assert code == 0 and json.loads(out)["valid"]
    code, out, _ = run(capsys, "check", str(files / "bad.json"))
    assert code == 1 and not json.loads(out)["valid"]
    code, _, err = run(capsys, "check", str(files / "broken.json"))
    assert code == 2 and "line" in err
    code, _, _ = run(capsys, "check", str(files / "missing.json"))
    assert code == 2
    assert run(capsys, "check", str(files / "b4.json"))[0] == 0


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "enumerate", "frames", "--size", "0")[0] == 2
    assert run(capsys, "verify", "nosuch")[0] == 2


def test_construct(capsys, files, tmp_path):
    out_path = tmp_path / "cf.json"
    code, _, _ = run(capsys, "construct", "canonical", str(files / "b4.json"), "-o", str(out_path))
    assert code == 0
    assert len(json.loads(out_path.read_text())["points"]) == 5
    code, out, _ = run(capsys, "construct", "algebra", str(files / "id2.json"))
    assert code == 0 and json.loads(out)["size"] == 4
    code, out, _ = run(capsys, "construct", "coproduct", str(files / "id2.json"), str(files / "tot2.json"))
    assert code == 0 and len(json.loads(out)["points"]) == 4
    code, out, _ = run(capsys, "construct", "filter-ext", str(files / "id2.json"))
    assert code == 0 and len(json.loads(out)["points"]) == 5


def test_construct_duals(capsys, tmp_path):
    write_json(hom_to_json(LatticeHom(chain2(), diamond(), (0, 3))), tmp_path / "f.json")
    code, out, _ = run(capsys, "construct", "dual-map", str(tmp_path / "f.json"))
    assert code == 0
    dual = json.loads(out)
    assert len(dual["source"]["points"]) == 5
    (tmp_path / "h.json").write_text(out, encoding="utf-8")
    code, out, _ = run(capsys, "construct", "dual-hom", str(tmp_path / "h.json"))
    assert code == 0 and "elements" in json.loads(out)["source"]


def test_derive_statuses(capsys, tmp_path):
    code, out, _ = run(capsys, "derive", "p |- ~~p", "--out-dir", str(tmp_path / "pr"))
    assert code == 0 and json.loads(out)["status"] == "proved"
    assert (tmp_path / "pr" / "trace.json").exists()
    code, out, _ = run(capsys, "derive", "~~p |- p", "--out-dir", str(tmp_path / "cm"))
    assert code == 1
    for name in ("countermodel_frame.json", "countermodel_valuation.json", "countermodel.dot"):
        assert (tmp_path / "cm" / name).exists()
    assert run(capsys, "derive", "p |- ")[0] == 2
    code, out, _ = run(capsys, "derive", "p & (q | r) |- (p & q) | (p & r)", "--depth", "0", "--max-size", "1")
    assert code == 3 and json.loads(out)["status"] == "unknown"


def test_countermodel_exit_codes(capsys):
    code, out, _ = run(capsys, "countermodel", "T |- p | ~p")
    assert code == 0 and json.loads(out)["found"]
    code, out, _ = run(capsys, "countermodel", "p |- p")
    assert code == 1 and not json.loads(out)["found"]


def test_gt_check(capsys, tmp_path):
    (tmp_path / "ax.txt").write_text("# excluded middle\np | ~p\n", encoding="utf-8")
    code, out, _ = run(capsys, "gt-check", "--axioms", str(tmp_path / "ax.txt"), "--max-size", "2")
    assert code == 0 and json.loads(out)["ok"]
    (tmp_path / "ax.json").write_text('["p |"]', encoding="utf-8")
    assert run(capsys, "gt-check", "--axioms", str(tmp_path / "ax.json"))[0] == 2


def test_enumerate_counts(capsys):
    code, out, _ = run(capsys, "enumerate", "lattices", "--size", "5", "--count")
    assert code == 0 and json.loads(out)["count"] == 11
    code, out, _ = run(capsys, "enumerate", "frames", "--size", "2", "--count")
    assert json.loads(out)["count"] == 9
    code, out, _ = run(capsys, "enumerate", "frames", "--size", "2")
    assert len(json.loads(out)) == 9


def test_export_dot(capsys, files, tmp_path):
    code, out, _ = run(capsys, "export-dot", str(files / "id2.json"), "--algebra", "positive")
    assert code == 0 and out.startswith("digraph")
    target = tmp_path / "b4.dot"
    assert run(capsys, "export-dot", str(files / "b4.json"), "-o", str(target))[0] == 0
    assert "rankdir=BT" in target.read_text()


def _strip(report):
    report = dict(report)
    report.pop("timings", None)
    return report


def test_verify_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "verify", "facts24", "--max-size", "2", "--report", str(a))[0] == 0
    assert run(capsys, "verify", "facts24", "--max-size", "2", "--report", str(b), "--workers", "2")[0] == 0
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    assert _strip(ra) == _strip(rb)
    assert list(ra) == list(rb)


def test_verify_report_lines(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "facts24", "--max-size", "2", "--report", str(tmp_path / "r.json"))
    assert code == 0
    assert out.splitlines()[-1].startswith("facts24: PASS")


def test_workers_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("FUNDLOG_WORKERS", "2")
    path = tmp_path / "r.json"
    assert run(capsys, "verify", "facts24", "--max-size", "2", "--report", str(path))[0] == 0
    assert json.loads(path.read_text())["timings"]["workers"] == 2
    assert run(capsys, "verify", "facts24", "--max-size", "2", "--report", str(path), "--workers", "1")[0] == 0
    assert json.loads(path.read_text())["timings"]["workers"] == 1
