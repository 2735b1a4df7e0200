from fractions import Fraction

import pytest
from gmpy2 import mpq, mpz
from hypothesis import given
from hypothesis import strategies as st

from decic.report import (
    CheckRecord,
    ReportError,
    VerificationReport,
    emit_report,
    exact,
    machine_body,
    parse_machine,
)


def test_exact_conversion():
    assert exact(mpq(3, 4)) == "3/4"
    assert exact(mpq(6, 3)) == "2"
    assert exact(mpz(7)) == 7
    assert exact(Fraction(-1, 2)) == "-1/2"
    assert exact((1, [True, None])) == [1, [True, None]]
    assert exact({1: mpq(1, 2)}) == {"1": "1/2"}


def test_empty_report():
    rep = VerificationReport()
    assert rep.passed and rep.exit_code() == 0
    text = emit_report(rep).decode()
    assert text.splitlines() == ["decic verification report", ""]
    assert parse_machine(emit_report(rep, "machine")).records == []


def test_claims_drive_status():
    rec = CheckRecord("demo")
    assert rec.claim("two", 1 + 1, 2)
    assert rec.status == "pass"
    assert not rec.claim("three", 2, 3)
    assert rec.status == "fail" and "three" in rec.detail
    assert rec.values["three"] == {"value": 2, "kind": "claimed", "expected": 3}
    rep = VerificationReport([rec])
    assert rep.exit_code() == 1


def test_single_record_human_layout():
    rec = CheckRecord("group", seconds=0.5)
    rec.claim("order", 4, 4)
    rec.record("elements", ["1", "g"], "info")
    rec.note("operators compared at (1,1,1,1)")
    text = emit_report(VerificationReport([rec])).decode()
    assert "group  pass" in text
    assert "order=4" in text and "elements" not in text
    assert "note: operators compared" in text
    assert text.rstrip().endswith("1 checks, 0 failed, 0 skipped")


def test_validation():
    with pytest.raises(ReportError):
        CheckRecord("x", status="maybe")
    with pytest.raises(ReportError):
        CheckRecord("x").record("v", 1, "guess")
    rep = VerificationReport([CheckRecord("x")])
    with pytest.raises(ReportError):
        rep.add(CheckRecord("x"))
    with pytest.raises(ReportError):
        emit_report(rep, "xml")
    with pytest.raises(ReportError):
        parse_machine("{}")
    with pytest.raises(ReportError):
        parse_machine("not json")


values = st.one_of(
    st.integers(-10**30, 10**30),
    st.booleans(),
    st.none(),
    st.fractions().map(str),
    st.lists(st.integers(-5, 5), max_size=4),
)


@given(
    st.lists(
        st.tuples(
            st.text("abcdefgh-", min_size=1, max_size=8),
            st.sampled_from(["pass", "fail", "skipped"]),
            st.dictionaries(st.text("xyz_", min_size=1, max_size=5), values, max_size=4),
            st.floats(0, 100),
        ),
        max_size=5,
        unique_by=lambda t: t[0],
    )
)
def test_machine_round_trip(items):
    rep = VerificationReport(config={"seed": 1729})
    for cid, status, vals, secs in items:
        rec = CheckRecord(cid, status, seconds=secs)
        for k, v in vals.items():
            rec.record(k, v)
        rep.add(rec)
    data = emit_report(rep, "machine")
    back = parse_machine(data)
    assert [r.body() for r in back.records] == [r.body() for r in rep.records]
    assert back.config == rep.config
    assert emit_report(back, "machine") == emit_report(parse_machine(emit_report(back, "machine")), "machine")


def test_body_ignores_timings():
    a = CheckRecord("c", seconds=1.0)
    b = CheckRecord("c", seconds=9.0)
    ra, rb = VerificationReport([a]), VerificationReport([b])
    assert emit_report(ra, "machine") != emit_report(rb, "machine")
    assert machine_body(emit_report(ra, "machine")) == machine_body(emit_report(rb, "machine"))
