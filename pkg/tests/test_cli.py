"""The hkf command line: build, report, export-links, exit codes."""

import json

import pytest

from hkf.cli import main
from hkf.construction import link_template
from hkf.diagrams import canonical_form, validate
from hkf.pdcode import read_pd


@pytest.fixture(scope="module")
def build_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("build3")
    assert main(["build", "--n", "3", "--q", "1", "--out", str(out)]) == 0
    return out


@pytest.fixture(scope="module")
def link_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("links")
    assert main(["export-links", "--n", "3", "--out", str(out)]) == 0
    return out


class TestBuild:
    def test_writes_three_files(self, build_dir):
        for name in ("embedding_base.pd", "embedding_twisted.pd", "construction.json"):
            assert (build_dir / name).exists(), name
        meta = json.loads((build_dir / "construction.json").read_text())
        assert meta["version"] == "hkf-construction/1"
        assert meta["params"] == {"n": 3, "r": 1, "q": 1}
        assert meta["crossings"] == {"gamma1": 63, "gamma2": 221}
        assert set(meta["edge_arcs"]) == {"1-2", "1-3", "2-3"}

    def test_vertex_records(self, build_dir):
        text = (build_dir / "embedding_twisted.pd").read_text()
        assert sum(line.startswith("V(") for line in text.splitlines()) == 3

    def test_q0_outputs_identical(self, tmp_path):
        assert main(["build", "--n", "3", "--q", "0", "--out", str(tmp_path)]) == 0
        base = (tmp_path / "embedding_base.pd").read_bytes()
        twisted = (tmp_path / "embedding_twisted.pd").read_bytes()
        assert base == twisted

    def test_even_n_rejected(self, tmp_path, capsys):
        assert main(["build", "--n", "4", "--out", str(tmp_path)]) == 2
        assert "invalid-params" in capsys.readouterr().err

    def test_unwritable_out(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        assert main(["build", "--n", "3", "--out", str(blocker / "sub")]) == 3

    def test_reimport_validates(self, build_dir):
        d = read_pd((build_dir / "embedding_twisted.pd").read_text())
        assert validate(d) == []
        assert len(d.crossings) == 221


class TestReport:
    def test_end_to_end(self, build_dir, tmp_path, capsys):
        out = tmp_path / "rep"
        assert main(["report", str(build_dir), "--out", str(out)]) == 0
        stdout = capsys.readouterr().out
        lines = stdout.splitlines()
        assert lines[0].startswith("cycle,length,forms-multiset,")
        assert len(lines) == 2
        assert (out / "report.csv").read_text() == stdout
        obj = json.loads((out / "report.json").read_text())
        assert obj["params"] == {"n": 3, "r": 1, "q": 1}
        assert len(obj["cycles"]) == 1

    def test_rerun_byte_identical(self, build_dir, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["report", str(build_dir), "--out", str(out1)]) == 0
        assert main(["report", str(build_dir), "--out", str(out2)]) == 0
        assert (out1 / "report.csv").read_bytes() == (out2 / "report.csv").read_bytes()
        ja = json.loads((out1 / "report.json").read_text())
        jb = json.loads((out2 / "report.json").read_text())
        ja.pop("timing")
        jb.pop("timing")
        assert ja == jb

    def test_accepts_pd_file_path(self, build_dir, tmp_path):
        out = tmp_path / "rep"
        code = main(["report", str(build_dir / "embedding_twisted.pd"), "--out", str(out)])
        assert code == 0

    def test_cache_env(self, build_dir, tmp_path, monkeypatch):
        cache = tmp_path / "cache"
        monkeypatch.setenv("HKF_CACHE_DIR", str(cache))
        assert main(["report", str(build_dir), "--out", str(tmp_path / "r")]) == 0
        assert list(cache.glob("row-*.json"))

    def test_missing_input(self, tmp_path, capsys):
        assert main(["report", str(tmp_path / "nope")]) == 3
        assert "i/o error" in capsys.readouterr().err

    def test_corrupt_pd_is_parse_error(self, build_dir, tmp_path, capsys):
        bad = tmp_path / "bad"
        bad.mkdir()
        (bad / "construction.json").write_text(
            (build_dir / "construction.json").read_text()
        )
        (bad / "embedding_twisted.pd").write_text("X(1,2,3)\nL(a: 1)\n")
        assert main(["report", str(bad)]) == 4
        assert "line 1" in capsys.readouterr().err

    def test_corrupt_meta_is_parse_error(self, build_dir, tmp_path, capsys):
        bad = tmp_path / "bad"
        bad.mkdir()
        (bad / "embedding_twisted.pd").write_text(
            (build_dir / "embedding_twisted.pd").read_text()
        )
        (bad / "construction.json").write_text("{\n  broken\n")
        assert main(["report", str(bad)]) == 4
        assert "line 2" in capsys.readouterr().err

    def test_crossing_count_mismatch(self, build_dir, tmp_path):
        bad = tmp_path / "bad"
        bad.mkdir()
        meta = json.loads((build_dir / "construction.json").read_text())
        meta["crossings"]["gamma2"] += 1
        (bad / "construction.json").write_text(json.dumps(meta))
        (bad / "embedding_twisted.pd").write_text(
            (build_dir / "embedding_twisted.pd").read_text()
        )
        assert main(["report", str(bad)]) == 4

    def test_bad_jobs_value(self, build_dir):
        assert main(["report", str(build_dir), "--jobs", "0"]) == 2


class TestExportLinks:
    def test_file_inventory(self, link_dir):
        names = sorted(p.name for p in link_dir.iterdir())
        assert names == [
            "cycle-1-2-3-W1-c.pd",
            "cycle-1-2-3-W2-c.pd",
            "cycle-1-2-3-W3-c.pd",
            "template-a.pd",
            "template-b.pd",
            "template-c.pd",
        ]

    @pytest.mark.parametrize("form,count", [("a", 5), ("b", 10), ("c", 10)])
    def test_template_component_records(self, link_dir, form, count):
        text = (link_dir / ("template-%s.pd" % form)).read_text()
        assert sum(line.startswith("L(") for line in text.splitlines()) == count

    def test_reimport_round_trip(self, link_dir):
        for path in sorted(link_dir.iterdir()):
            d = read_pd(path.read_text())
            assert validate(d) == [], path.name
        exported = read_pd((link_dir / "template-b.pd").read_text())
        assert canonical_form(exported) == canonical_form(link_template("b").diagram)

    def test_even_n_rejected(self, tmp_path):
        assert main(["export-links", "--n", "4", "--out", str(tmp_path)]) == 2


class TestUsage:
    def test_no_command(self, capsys):
        assert main([]) == 2
        capsys.readouterr()

    def test_version(self, capsys):
        assert main(["--version"]) == 0
        assert capsys.readouterr().out.startswith("hkf ")

    def test_bad_flag_value(self, capsys):
        assert main(["build", "--n", "five"]) == 2
        capsys.readouterr()
