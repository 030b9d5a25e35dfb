import pytest

from renyi_parry.catalog import (
    CatalogEntry,
    constants_report,
    ingest,
    parse_catalog,
    reproduce_entry,
    reproduce_table1,
    reproduce_table2,
    serialize,
)
from renyi_parry.errors import ParseError
from renyi_parry.polynomial import LEHMER, IntPolynomial


@pytest.fixture(scope="module")
def table1():
    return reproduce_table1()


def test_ingest_table2():
    entries = ingest("table2")
    assert [e.minimal_poly.degree for e in entries] == [4, 6, 8, 10]


def test_ingest_table1():
    entries = ingest("table1")
    assert len(entries) == 27
    assert sum(1 for e in entries if e.label.startswith("theta_")) == 8
    assert all(e.expected["kind"] in ("salem", "perron", "pisot") for e in entries)


def test_ingest_empty(tmp_path):
    p = tmp_path / "empty.txt"
    p.write_text("")
    assert ingest(p) == []
    p.write_text("# only a comment\n\n")
    assert ingest(str(p)) == []


def test_parse_error_line_numbers():
    text = "1 -1 -1 -1 1 | label=a\n\n1 x 1 | label=b\n"
    with pytest.raises(ParseError) as exc:
        parse_catalog(text)
    assert exc.value.line == 3
    with pytest.raises(ParseError) as exc:
        parse_catalog("1 -1 -1 -1 1 | label\n")
    assert exc.value.line == 1
    with pytest.raises(ParseError) as exc:
        parse_catalog("# c\n1 2 | label=not monic\n")
    assert exc.value.line == 2


def test_entry_invariants():
    with pytest.raises(ParseError):
        CatalogEntry("x", IntPolynomial([0, 1, 1]))
    with pytest.raises(ParseError):
        CatalogEntry("x", IntPolynomial([1, 1, 2]))


def test_round_trip():
    for name in ("table1", "table2"):
        entries = ingest(name)
        assert parse_catalog(serialize(entries)) == entries
    assert serialize([]) == ""


def test_table2_all_match():
    rep = reproduce_table2()
    assert rep.mismatches == [] and rep.ok
    pats = {r["label"]: r["pattern"] for r in rep.rows}
    assert pats["1.722"] == "0.1(1 0^{2})^w"
    assert pats["1.401"] == "0.1(0^{2} 1 0^{4})^w"
    assert pats["1.17628"] == "0.1(0^{10} 1 0^{18} 1 0^{12} 1 0^{18} 1 0^{12})^w"


def test_table1_examples(table1):
    rows = {r["label"]: r for r in table1.rows}
    r = rows["1.293485"]
    assert (r["dyg"], r["deg"], r["parry_degree"]) == (6, 10, 12)
    r = rows["theta_9^-1"]
    assert r["value"] == "1.213149" and r["irreducible"] and r["pattern"] == "0.1 0^{7} 1"
    assert rows["1.176280"]["parry_degree"] == 75


def test_table1_mismatches_are_explained(table1):
    for m in table1.mismatches:
        assert m.note and m.computed is not None and m.expected is not None
    assert table1.flagged_labels == ["1.252775", "1.281691"]
    # every reference value and dyg column is reproduced
    assert {m.field for m in table1.mismatches} <= {"parry_degree", "pattern"}


def test_table1_unflagged_rows(table1):
    # rows whose reference Parry degree cannot belong to the reference pattern
    assert sorted({m.label for m in table1.unflagged}) == ["1.285196", "1.285199"]


def test_report_json(table1):
    js = table1.to_json()
    assert js["mismatch_count"] == len(table1.mismatches)
    assert js["unflagged_count"] == len(table1.unflagged)
    assert len(js["rows"]) == 27


def test_reproduce_entry_without_metadata():
    row, out = reproduce_entry(CatalogEntry("lehmer", LEHMER))
    assert out == [] and row["parry_degree"] == 75


def test_divisibility_is_enforced():
    # a value column that disagrees is reported, never raised
    entry = parse_catalog("1 -1 -1 -1 1 | label=s4; value=1.723; deg=5")[0]
    _, out = reproduce_entry(entry)
    assert {m.field for m in out} == {"value", "deg"}


def test_constants():
    c = constants_report()
    assert c["theta_31_inverse"] == "1.08544"
    assert c["theta_12_inverse"] == "1.172950"
    assert c["theta_11_inverse"] == "1.184276"
    assert c["lehmer_in_theta12_theta11"] is True
    assert c["conjecture_interval"] == ["1.08544", "1.17295"]
    assert abs(c["a_max"] - 5.8743) < 1e-4
    assert abs(c["threshold"] - 0.146447) < 1e-6
    assert abs(c["criterion_32_lhs"] - 0.0694628) < 1e-7
    assert c["criterion_32_holds"] and c["golden_check"]
