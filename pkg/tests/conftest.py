from __future__ import annotations

import pytest

from gorecone.cli import analyze, gen_corpus
from gorecone.semigroup import CurveSpec
from gorecone.toricgen import detect_structure

EXAMPLE_N = (416, 577, 646, 744)

# Seeded corpus shared by the acceptance suite; 220 curves cover all six
# structure cases for this seed.
CORPUS_SEED = 20260810
CORPUS_COUNT = 220


@pytest.fixture(scope="session")
def example_spec():
    return CurveSpec(EXAMPLE_N)


@pytest.fixture(scope="session")
def example_data(example_spec):
    return detect_structure(example_spec)


@pytest.fixture(scope="session")
def example_report():
    return analyze(EXAMPLE_N)


@pytest.fixture(scope="session")
def corpus_records():
    return gen_corpus(CORPUS_SEED, CORPUS_COUNT)


@pytest.fixture(scope="session")
def corpus_reports(corpus_records):
    return [analyze(rec.spec.n) for rec in corpus_records]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    lines = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" not in nodeid or "::" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if not name.startswith("test_criterion"):
                continue
            verdict = "PASS" if status == "passed" else "FAIL"
            lines[name] = verdict
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name in sorted(lines):
            terminalreporter.write_line(f"[{lines[name]}] {name}")
