import json

import pytest

from himm.canonical import are_isomorphic
from himm.cli import main
from himm.corpus import hub, k4_3, path2, single_edge, triangle
from himm.hypergraph import from_json, to_json


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, g in [
        ("e3", single_edge(3)),
        ("path2", path2()),
        ("tri", triangle()),
        ("hub", hub()),
        ("k43", k4_3()),
    ]:
        p = tmp_path / f"{name}.json"
        p.write_text(to_json(g))
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


class TestCheck:
    def test_yes_exit_zero(self, files, capsys):
        code = main(["check", files["e3"], files["path2"]])
        assert code == 0
        out = json.loads(capsys.readouterr().out)
        assert out["answer"] == "yes"
        assert out["witness"]["vertexMap"]

    def test_no_exit_one(self, files):
        assert main(["check", files["tri"], files["path2"]]) == 1

    def test_unknown_exit_three(self, files, capsys):
        assert main(["check", files["k43"], files["k43"], "--budget", "2"]) == 3
        assert json.loads(capsys.readouterr().out)["answer"] == "unknown"

    def test_both_methods_agree(self, files):
        assert main(["check", "--method", "both", files["e3"], files["path2"]]) == 0
        assert main(["check", "--method", "both", files["tri"], files["path2"]]) == 1

    def test_oracle_method(self, files, capsys):
        assert main(["check", "--method", "oracle", files["e3"], files["path2"]]) == 0
        assert json.loads(capsys.readouterr().out)["answer"] == "yes"

    def test_parse_error_exit_two(self, files, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        assert main(["check", str(bad), files["path2"]]) == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_file_exit_two(self, files):
        assert main(["check", "nosuch.json", files["path2"]]) == 2

    def test_witness_file(self, files, tmp_path, capsys):
        wfile = tmp_path / "w.json"
        assert main(["check", files["e3"], files["path2"],
                     "--witness", str(wfile)]) == 0
        capsys.readouterr()
        assert main(["verify", files["e3"], files["path2"], str(wfile)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert "finalIsomorphism" in out

    def test_env_budget(self, files, monkeypatch, capsys):
        monkeypatch.setenv("HIMM_BUDGET", "2")
        assert main(["check", files["k43"], files["k43"]]) == 3


class TestOracleAndDual:
    def test_oracle_command(self, files, capsys):
        assert main(["oracle", files["e3"], files["path2"]]) == 0
        assert json.loads(capsys.readouterr().out)["answer"] == "yes"

    def test_dual_command(self, files, capsys):
        assert main(["dual", files["path2"], files["hub"]]) in (0, 1)
        out = json.loads(capsys.readouterr().out)
        assert out["answer"] in ("yes", "no")


class TestDivisions:
    def test_count_only(self, files, capsys):
        assert main(["divisions", files["k43"], "--count-only"]) == 0
        assert capsys.readouterr().out.strip() == "19"

    def test_ordinary_count_is_one(self, files, capsys):
        assert main(["divisions", files["path2"], "--count-only"]) == 0
        assert capsys.readouterr().out.strip() == "1"

    def test_r3_count(self, files, capsys):
        assert main(["divisions", files["e3"], "--count-only"]) == 0
        assert capsys.readouterr().out.strip() == "2"

    def test_member_files_written(self, files, tmp_path, capsys):
        outdir = tmp_path / "members"
        assert main(["divisions", files["e3"], "--out", str(outdir)]) == 0
        written = sorted(p.name for p in outdir.iterdir())
        assert written == [
            "division000.dot", "division000.json",
            "division001.dot", "division001.json",
        ]

    def test_star_only_flag(self, files, capsys):
        assert main(["divisions", files["k43"], "--count-only", "--star-only"]) == 0
        assert capsys.readouterr().out.strip() == "1"


class TestTransform:
    def test_m_factor_size(self, files, tmp_path, capsys):
        two = tmp_path / "two.json"
        two.write_text(to_json(single_edge(2)))
        assert main(["transform", str(two), "--m-factor", "3"]) == 0
        captured = capsys.readouterr()
        obj = json.loads(captured.out)
        assert len(obj["nodes"]) == 7
        assert "expected M|V|+|E|=7" in captured.err

    def test_dual_twice_isomorphic(self, files, tmp_path, capsys):
        assert main(["transform", files["path2"], "--dual"]) == 0
        first = capsys.readouterr().out
        mid = tmp_path / "mid.json"
        mid.write_text(first)
        assert main(["transform", str(mid), "--dual"]) == 0
        back = from_json(capsys.readouterr().out)
        ok, _ = are_isomorphic(back, path2())
        assert ok

    def test_factor_dot(self, files, tmp_path, capsys):
        dot = tmp_path / "g.dot"
        assert main(["transform", files["e3"], "--factor", "--dot", str(dot)]) == 0
        text = dot.read_text()
        # the factor graph of one size-3 edge is the 3-star
        assert text.count(" -- ") == 3

    def test_densify(self, files, capsys):
        assert main(["transform", files["path2"], "--densify", "4"]) == 0
        captured = capsys.readouterr()
        obj = json.loads(captured.out)
        assert len(obj["nodes"]) == 3 + 2 + 3 * 3
        assert "densified nodes=14" in captured.err


class TestVerify:
    def test_tampered_witness_rejected(self, files, tmp_path, capsys):
        wfile = tmp_path / "w.json"
        assert main(["check", files["path2"], files["hub"],
                     "--witness", str(wfile)]) == 0
        capsys.readouterr()
        obj = json.loads(wfile.read_text())
        first = next(iter(obj["edgeSubgraphs"]))
        for eid in obj["edgeSubgraphs"]:
            obj["edgeSubgraphs"][eid] = obj["edgeSubgraphs"][first]
        wfile.write_text(json.dumps(obj))
        assert main(["verify", files["path2"], files["hub"], str(wfile)]) == 1
        assert "edge-disjointness violated" in capsys.readouterr().err

    def test_garbage_witness_exit_two(self, files, tmp_path):
        wfile = tmp_path / "w.json"
        wfile.write_text('{"oops": true}')
        assert main(["verify", files["path2"], files["hub"], str(wfile)]) == 2


class TestRoundTrip:
    def test_parse_serialize_identity(self, files):
        for key in ("e3", "path2", "tri", "hub", "k43"):
            text = open(files[key]).read()
            assert to_json(from_json(text)) == text
