import json

import pytest

from gorecone.cli import (
    AnalysisReport,
    analyze,
    gen_corpus,
    main,
    read_corpus,
    report_document,
    render_text,
    run_suite,
    write_corpus,
)

EXAMPLE = (416, 577, 646, 744)


def test_main_analyze_example_exit_zero(capsys):
    assert main(["analyze", "416", "577", "646", "744"]) == 0
    out = capsys.readouterr().out
    assert "case 1b" in out
    assert "minimal generators = 7" in out
    assert "documented misprint" in out


def test_main_analyze_invalid_spec_exit_two(capsys):
    assert main(["analyze", "2", "4", "6", "8"]) == 2
    assert "gcd" in capsys.readouterr().err


def test_main_analyze_budget_exhaustion_exit_three(monkeypatch, capsys):
    monkeypatch.setenv("GORECONE_BUDGET", "1")
    assert main(["analyze", "416", "577", "646", "744"]) == 3
    assert "budget" in capsys.readouterr().err.lower()


def test_main_rejection_report_exits_zero(capsys):
    # complete intersection: analysis reports the rejection, not an error
    assert main(["analyze", "8", "10", "12", "15"]) == 0
    assert "complete_intersection" in capsys.readouterr().out


def test_order_flag_is_honored():
    report = analyze(EXAMPLE)
    assert report.order.perm == (4, 2, 3, 1)  # auto-selected for this family
    from gorecone.polycore import MonomialOrder, NEGDEGREVLEX

    forced = analyze(EXAMPLE, order=MonomialOrder(NEGDEGREVLEX, (4, 3, 2, 1)))
    assert forced.order.perm == (4, 3, 2, 1)
    assert forced.tangent.minimal_count == 7


def test_main_bad_order_flag(capsys):
    assert main(["analyze", "416", "577", "646", "744", "--order", "x4,x4,x2,x1"]) == 2


def test_json_document_shape(example_report):
    doc = report_document(example_report)
    assert list(doc) == [
        "spec",
        "structure",
        "basis",
        "tangent_cone",
        "prediction",
        "validation",
        "integrity",
    ]
    assert doc["tangent_cone"]["minimal_count"] == 7
    assert doc["validation"]["outcome"] == "COUNT_MATCH_SET_MISMATCH"
    assert doc["validation"]["known_erratum"] is True
    json.dumps(doc)  # must be serializable


def test_json_includes_timings_only_on_request(example_report):
    assert "timings" not in report_document(example_report)
    assert "timings" in report_document(example_report, timings=True)


def test_report_determinism():
    docs = [json.dumps(report_document(analyze(EXAMPLE))) for _ in range(2)]
    assert docs[0] == docs[1]
    texts = [render_text(analyze(EXAMPLE)) for _ in range(2)]
    assert texts[0] == texts[1]


def test_integrity_chain(example_report):
    chain = example_report.integrity
    assert chain["structure"]["input"] == chain["spec"]["output"]
    assert chain["basis"]["input"] == chain["structure"]["output"]
    assert chain["tangent"]["input"] == chain["basis"]["output"]
    assert chain["prediction"]["input"] == chain["structure"]["output"]


def test_gen_corpus_deterministic():
    a = [rec.spec.n for rec in gen_corpus(42, 25)]
    b = [rec.spec.n for rec in gen_corpus(42, 25)]
    assert a == b


def test_gen_corpus_case_filter():
    records = gen_corpus(42, 10, case_filter="3a")
    assert all(rec.case_label == "3a" for rec in records)


def test_gen_corpus_structures_round_trip():
    from gorecone.toricgen import BresinskyData, detect_structure

    for rec in gen_corpus(42, 8):
        detected = detect_structure(rec.spec)
        assert isinstance(detected, BresinskyData)
        assert detected.case_label == rec.case_label


def test_corpus_file_round_trip(tmp_path):
    records = gen_corpus(13, 12)
    path = tmp_path / "corpus.txt"
    write_corpus(records, str(path))
    loaded = read_corpus(str(path))
    assert loaded == [rec.spec.n for rec in records]
    # comments and blank lines are tolerated
    path2 = tmp_path / "extra.txt"
    path2.write_text("# heading\n\n5 6 7 8  # trailing\n")
    assert read_corpus(str(path2)) == [(5, 6, 7, 8)]


def test_run_suite_small():
    specs = [rec.spec.n for rec in gen_corpus(11, 15)]
    summary = run_suite(specs)
    assert summary.total == 15
    assert summary.ok
    assert "MISMATCH" not in summary.outcomes
    assert summary.cm_disagreements == 0


def test_run_suite_rejects_empty():
    with pytest.raises(ValueError):
        run_suite([])


def test_main_run_suite_exit_zero(capsys):
    assert main(["run-suite", "--seed", "11", "--count", "6"]) == 0
    out = capsys.readouterr().out
    assert "analyzed 6 curves" in out


def test_main_gen_corpus_stdout(capsys):
    assert main(["gen-corpus", "--seed", "3", "--count", "4"]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l.strip()]
    assert len(lines) == 4
    assert all("# case=" in l for l in lines)


def test_main_run_suite_corpus_file(tmp_path, capsys):
    path = tmp_path / "c.txt"
    write_corpus(gen_corpus(7, 5), str(path))
    assert main(["run-suite", "--corpus", str(path)]) == 0


def test_report_for_rejection_has_no_basis():
    report = analyze((8, 10, 12, 15))
    assert report.rejected
    assert report.basis is None and report.tangent is None
    doc = report_document(report)
    assert doc["structure"]["accepted"] is False
