import numpy as np
import pytest

from deltap.data import BinaryMatrix, ContingencyTable
from deltap.errors import ParseError, SchemaError
from deltap.files import (
    ingest,
    parse_p_value,
    read_distances,
    read_results,
    write_contingency,
    write_distances,
    write_instances,
    write_results,
)
from deltap.inference import AnalysisConfig, analyze_all_pairs
from deltap.relational import build_distance_matrix

from conftest import JOY_ADMIRATION


def test_table1_contingency_csv(tmp_path):
    p = tmp_path / "t1.csv"
    p.write_text("# A=admiration B=joy: rows admiration, columns joy\nn00,n01,n10,n11\n4274,112,205,22\n")
    t = ingest(p, "contingency")
    assert t == JOY_ADMIRATION and t.n == 4613


def test_table2_instances_after_encoding(table2_csv):
    m = ingest(table2_csv, "instances", categorical=["V1"], itemsets=[("X", "V2")])
    assert m.variable_names == ("X", "Y", "Z", "V2", "X&V2")
    assert m.rows.shape == (6, 5)
    assert m.column("X&V2").tolist() == [0, 0, 1, 0, 0, 1]


def test_empty_file(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("")
    with pytest.raises(ParseError):
        ingest(p)
    with pytest.raises(ParseError):
        ingest(p, "contingency")


def test_malformed_cell_location(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("# comment\na,b\n0,1\n1,x\n")
    with pytest.raises(ParseError) as err:
        ingest(p)
    assert err.value.row == 4 and err.value.column == "b"


def test_duplicate_names(tmp_path):
    p = tmp_path / "dup.csv"
    p.write_text("a,a\n0,1\n")
    with pytest.raises(SchemaError):
        ingest(p)


def test_contingency_schema(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("a,b,c,d\n1,2,3,4\n")
    with pytest.raises(SchemaError):
        ingest(p, "contingency")
    p.write_text("n00,n01,n10,n11\n1,2,-3,4\n")
    with pytest.raises(ParseError):
        ingest(p, "contingency")
    p.write_text("n00,n01,n10,n11\n1,2,3,4\n5,6,7,8\n")
    with pytest.raises(ParseError):
        ingest(p, "contingency")


def test_round_trip_instances_with_missing(tmp_path):
    rng = np.random.default_rng(0)
    rows = rng.integers(0, 2, size=(50, 4))
    missing = rng.random((50, 4)) < 0.1
    m = BinaryMatrix(("a", "b", "c", "d"), rows, missing)
    p = tmp_path / "m.csv"
    write_instances(m, p, checksum="abc")
    assert ingest(p) == m


def test_round_trip_contingency(tmp_path):
    p = tmp_path / "c.csv"
    write_contingency(JOY_ADMIRATION, p)
    assert ingest(p, "contingency") == JOY_ADMIRATION
    t = ContingencyTable(0, 0, 0, 0)
    write_contingency(t, p)
    assert ingest(p, "contingency") == t


def test_results_table(tmp_path):
    rng = np.random.default_rng(1)
    m = BinaryMatrix(("a", "b", "c"), (rng.random((400, 3)) < 0.3).astype(int))
    results = analyze_all_pairs(m, AnalysisConfig(draws=2_000))
    p = tmp_path / "results.csv"
    write_results(results, p, checksum="deadbeef")
    assert p.read_text().startswith("# input-sha256: deadbeef\n")
    rows = read_results(p)
    assert len(rows) == 3
    keys = [(r["p_value"], -abs(r["delta_p"])) for r in rows]
    assert keys == sorted(keys)
    for r in rows:
        assert r["n00"] + r["n01"] + r["n10"] + r["n11"] == r["n"] == 400
    d = build_distance_matrix(results)
    write_distances(d, tmp_path / "d.csv")
    back = read_distances(tmp_path / "d.csv")
    assert back.labels == d.labels
    np.testing.assert_allclose(back.values, d.values, rtol=1e-5)


def test_parse_p_value():
    assert parse_p_value("<2.5e-05") == 0.0
    assert parse_p_value("0.0123") == 0.0123
