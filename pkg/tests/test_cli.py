import json
import subprocess
import sys

import numpy as np
import pytest

import wlgroups.experiment as E
from wlgroups import cayfile, make_abelian, make_cyclic, random_relabeling, relabel
from wlgroups.cli import main
from wlgroups.groupspec import build_group


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, G):
        path = tmp_path / f"{name}.cay"
        cayfile.save(G, path)
        return path
    return write


def test_group_gen_trivial_group(capsys):
    assert run(capsys, "group-gen", "cyclic:1") == (0, "1\n0\n", "")


def test_group_gen_round_trips(capsys, tmp_path):
    out = tmp_path / "g.cay"
    assert run(capsys, "group-gen", "abelian:2,4", "-o", out)[0] == 0
    assert cayfile.load(out) == make_abelian([2, 4])


def test_group_gen_pair_writes_two_files(capsys, tmp_path):
    code, out, _ = run(capsys, "group-gen", "cfpair:2", "-o", tmp_path / "pair.cay")
    assert code == 0
    assert (tmp_path / "pair_G.cay").exists() and (tmp_path / "pair_H.cay").exists()
    assert len(out.splitlines()) == 2
    assert run(capsys, "group-gen", "cfpair:2")[0] == 1


def test_wl_outputs(capsys, files):
    z4, v4 = files("z4", make_cyclic(4)), files("v4", make_abelian([2, 2]))
    code, out, _ = run(capsys, "wl", z4, v4, "--k", 1)
    assert code == 0 and out.startswith("distinguished, round 1\n")
    code, out, _ = run(capsys, "wl", z4, z4)
    assert out.startswith("indistinguishable (stable at round ")
    code, out, _ = run(capsys, "wl", z4, v4, "--k", 1, "--json")
    payload = json.loads(out)
    assert payload["schema"] == "wlgroups.run/1" and payload["distinguished"] is True


def test_wl_count_free_family(capsys, tmp_path):
    run(capsys, "group-gen", "cfpair:2", "-o", tmp_path / "p.cay")
    code, out, _ = run(capsys, "wl", tmp_path / "p_G.cay", tmp_path / "p_H.cay", "--k", 1, "--count-free")
    assert code == 0 and out.startswith("indistinguishable")
    code, out, _ = run(capsys, "wl", tmp_path / "p_G.cay", tmp_path / "p_H.cay", "--k", 1)
    assert out.startswith("distinguished")


def test_iso_auto_on_relabeled_pair(capsys, files):
    G = build_group("dihedral:4")
    a = files("a", G)
    b = files("b", relabel(G, random_relabeling(8, np.random.default_rng(5))))
    code, out, _ = run(capsys, "iso", a, b)
    assert code == 0 and out.startswith("isomorphic (method=")
    code, out, _ = run(capsys, "iso", a, b, "--method", "oracle", "--json")
    payload = json.loads(out)
    assert payload["schema"] == "wlgroups.verdict/1" and payload["status"] == "isomorphic"


def test_iso_methods(capsys, files):
    z6, s3 = files("z6", make_cyclic(6)), files("s3", build_group("sym:3"))
    assert run(capsys, "iso", z6, s3, "--method", "wl")[1].startswith("non-isomorphic (method=wl)")
    out = run(capsys, "iso", z6, s3, "--method", "canon", "--json")[1]
    assert json.loads(out)["conditional"] is True
    assert run(capsys, "iso", z6, s3, "--method", "abelian")[0] == 5


def test_iso_list_json_lines(capsys, files):
    a5 = files("a5", build_group("alt:5"))
    code, out, err = run(capsys, "iso-list", a5, a5, "--verify-sample", 5)
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(lines) == 120
    assert lines[0]["index"] == 0 and sorted(lines[0]["map"]) == list(range(60))
    assert json.loads(err)["count"] == 120


def test_canon_output_is_byte_identical(capsys, files, tmp_path):
    a, b = files("z6", make_cyclic(6)), files("z2z3", make_abelian([2, 3]))
    run(capsys, "canon", a, "-o", tmp_path / "ca.cay")
    run(capsys, "canon", b, "-o", tmp_path / "cb.cay")
    assert (tmp_path / "ca.cay").read_bytes() == (tmp_path / "cb.cay").read_bytes()
    code, out, _ = run(capsys, "canon", a)
    assert code == 0 and "# labels " in out


def test_experiment_command(capsys, tmp_path):
    spec = tmp_path / "e.spec"
    spec.write_text("corpus = abelian\norders = 1-16\nk = 1\ncsv = r.csv\n")
    code, out, _ = run(capsys, "experiment", spec)
    assert code == 0 and "0 contradictions" in out
    assert (tmp_path / "r.csv").read_text().startswith("# wlgroups-report v1 seed=0\n")


def test_exit_codes(capsys, tmp_path, monkeypatch):
    bad = tmp_path / "bad.cay"
    bad.write_text("2\n0 1\n1 1\n")
    good = tmp_path / "good.cay"
    cayfile.save(make_cyclic(2), good)
    assert run(capsys, "wl", bad, good)[0] == 3
    assert run(capsys, "wl", good, good, "--k", 0)[0] == 2
    assert run(capsys, "group-gen", "cyclc:3")[0] == 2
    assert run(capsys, "wl", tmp_path / "missing.cay", good)[0] == 10
    assert run(capsys, "group-gen", "cyclic:100", "--cap", 50)[0] == 4
    spec = tmp_path / "e.spec"
    spec.write_text("corpus = spec:cyclic:4; spec:abelian:2,2\ncsv = r.csv\n")
    monkeypatch.setattr(E, "_run_one", lambda *a: (1, "indistinguishable"))
    assert run(capsys, "experiment", spec)[0] == 0
    spec.write_text("corpus = spec:cyclic:6; spec:abelian:2,3\ncsv = r.csv\n")
    monkeypatch.setattr(E, "_run_one", lambda *a: (1, "distinguished"))
    code, _, err = run(capsys, "experiment", spec)
    assert code == 9 and "OracleContradiction" in err
    assert (tmp_path / "r.csv").exists()


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "wlgroups.cli", "group-gen", "cyclic:3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "3"
