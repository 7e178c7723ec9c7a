"""Per-cycle invariant reports: rows, determinism, caching."""

import json

import pytest

from hkf.construction import ConstructionParams, assemble_gamma2, build_embedding
from hkf.report import (
    CSV_COLUMNS,
    CycleRow,
    build_report,
    compute_cycle_row,
    cycle_name,
    poly_text,
    report_csv,
    report_json,
)


@pytest.fixture(scope="module")
def triangle_pair():
    g1 = build_embedding(ConstructionParams(3, q=1))
    return g1, assemble_gamma2(g1)


@pytest.fixture(scope="module")
def triangle_report(triangle_pair):
    return build_report(*triangle_pair)


class TestFormatting:
    def test_poly_text(self):
        assert poly_text({0: 1}) == "0:1"
        assert poly_text({-4: -1, -3: 1, -1: 1}) == "-4:-1 -3:1 -1:1"
        assert poly_text({}) == "0"

    def test_cycle_name(self):
        assert cycle_name((1, 2, 3)) == "1-2-3"

    def test_csv_columns(self):
        assert CSV_COLUMNS[0] == "cycle"
        assert CSV_COLUMNS[-1] == "verdict"
        assert len(CSV_COLUMNS) == 9


class TestCycleRow:
    def test_untwisted_triangle(self):
        g1 = build_embedding(ConstructionParams(3, q=0))
        g2 = assemble_gamma2(g1)
        row = compute_cycle_row(g1, g2, (1, 2, 3))
        assert row.crossings_raw == 15
        assert row.verdict == "nontrivial"
        assert row.evidence == "nontrivial-jones"
        assert row.a2 == 5
        assert row.a2_note == ""
        assert row.alexander == {3: 1, 2: -1, 0: 1, -2: -1, -3: 1}

    def test_twisted_triangle_overflows_skein_cap(self, triangle_pair):
        row = compute_cycle_row(*triangle_pair, (1, 2, 3))
        assert row.crossings_raw == 129
        assert row.a2 is None
        assert "skein cap" in row.a2_note
        assert row.csv_cells()[7] == "overflow"
        assert row.verdict == "nontrivial"

    def test_alexander_is_symmetric_and_unit_at_one(self, triangle_pair):
        row = compute_cycle_row(*triangle_pair, (1, 2, 3))
        assert sum(row.alexander.values()) == 1
        assert {-e: c for e, c in row.alexander.items()} == dict(row.alexander)


class TestRunReport:
    def test_row_count_and_order(self, triangle_report):
        assert len(triangle_report.rows) == 1
        assert triangle_report.rows[0].cycle == (1, 2, 3)
        assert triangle_report.params == {"n": 3, "r": 1, "q": 1}

    def test_csv_shape(self, triangle_report):
        lines = report_csv(triangle_report).splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 2
        assert lines[1].startswith("1-2-3,3,ccc,129,")

    def test_rerun_is_byte_identical(self, triangle_pair):
        a = build_report(*triangle_pair)
        b = build_report(*triangle_pair)
        assert report_csv(a) == report_csv(b)
        ja, jb = json.loads(report_json(a)), json.loads(report_json(b))
        ja.pop("timing")
        jb.pop("timing")
        assert ja == jb

    def test_json_schema(self, triangle_report):
        obj = json.loads(report_json(triangle_report))
        assert obj["version"] == "hkf-report/1"
        assert set(obj) == {"version", "params", "budget", "cycles", "timing"}
        entry = obj["cycles"][0]
        assert entry["cycle"] == [1, 2, 3]
        assert entry["forms"] == ["c", "c", "c"]
        assert entry["verdict"]["status"] == "nontrivial"
        assert set(obj["timing"]) == {"total_s", "cycles"}

    def test_parallel_matches_serial(self, triangle_pair):
        g1 = build_embedding(ConstructionParams(3, q=0))
        g2 = assemble_gamma2(g1)
        serial = build_report(g1, g2, jobs=1)
        parallel = build_report(g1, g2, jobs=2)
        assert report_csv(serial) == report_csv(parallel)

    def test_cache_roundtrip(self, tmp_path, triangle_pair):
        first = build_report(*triangle_pair, cache_dir=tmp_path)
        assert list(tmp_path.glob("row-*.json"))
        seen = []
        second = build_report(
            *triangle_pair, cache_dir=tmp_path, progress=seen.append
        )
        assert report_csv(first) == report_csv(second)
        assert seen == ["cycle 1-2-3: cached"]

    def test_cache_key_includes_budget(self, tmp_path, triangle_pair):
        build_report(*triangle_pair, cache_dir=tmp_path)
        build_report(*triangle_pair, budget=5000, cache_dir=tmp_path)
        assert len(list(tmp_path.glob("row-*.json"))) == 2


class TestVerdictLadder:
    def test_forms_multiset_property(self):
        row = CycleRow(
            cycle=(1, 2, 3),
            forms=("c", "a", "b"),
            crossings_raw=5,
            crossings_simplified=0,
            jones={0: 1},
            alexander={0: 1},
            a2=0,
            a2_note="",
            verdict="unknot",
            evidence="simplified-to-zero-crossings",
        )
        assert row.forms_multiset == "abc"
        assert row.csv_cells()[8] == "unknot"
