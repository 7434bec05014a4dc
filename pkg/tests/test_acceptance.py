"""End-to-end acceptance suite.

Each criterion is one test; the terminal summary prints a PASS/FAIL line
per criterion (see conftest).  The shared corpus is seeded and spans all
six structure cases; three hypothesis families too thin to hit by
sampling are exercised through frozen exponent tables that are
re-validated against their standing hypotheses before use.
"""

import random
import time

import pytest

from gorecone.caselaw import (
    COUNT_MATCH_SET_MISMATCH,
    MATCH,
    evaluate_atom,
    instantiate_template,
    load_rules,
    predict_generators,
)
from gorecone.cli import analyze, gen_corpus
from gorecone.morasb import certify, complete, normal_form
from gorecone.polycore import (
    Polynomial,
    compare,
    format_polynomial,
    parse_polynomial,
    sign_canonical,
)
from gorecone.semigroup import CurveSpec
from gorecone.tcone import graded_kernel, initial_dims_from_generators
from gorecone.toricgen import Rejected, instantiate_case1a

EXAMPLE = (416, 577, 646, 744)

EXAMPLE_IDEAL = [
    "x1^8 - x3^4*x4",
    "x2^10 - x1^3*x3^7",
    "x3^11 - x2^2*x4^8",
    "x4^9 - x1^5*x2^8",
    "x1^3*x4^8 - x2^8*x3^4",
]
EXAMPLE_BASIS_EXTRAS = ["x3^15 - x1^8*x2^2*x4^7", "x1^11*x4^7 - x2^8*x3^8"]
EXAMPLE_CONE = [
    "x3^4*x4",
    "x2^10 - x1^3*x3^7",
    "x2^2*x4^8",
    "x4^9",
    "x1^3*x4^8",
    "x3^15",
    "x2^8*x3^8",
]

# Frozen exponent tables (case-1a naming) for hypothesis families that a
# moderate random stream essentially never hits.  Each entry is
# re-validated below: it must instantiate, land in the named family, and
# satisfy every standing hypothesis.
RARE_FAMILY_TABLES = {
    "1b.cm.six.ii1": [
        ((15, 3, 3, 4), {(1, 3): 2, (1, 4): 3, (2, 1): 4, (2, 4): 1, (3, 1): 11, (3, 2): 1, (4, 2): 2, (4, 3): 1}),
        ((16, 3, 3, 4), {(1, 3): 2, (1, 4): 3, (2, 1): 4, (2, 4): 1, (3, 1): 12, (3, 2): 1, (4, 2): 2, (4, 3): 1}),
        ((17, 3, 3, 4), {(1, 3): 2, (1, 4): 3, (2, 1): 4, (2, 4): 1, (3, 1): 13, (3, 2): 1, (4, 2): 2, (4, 3): 1}),
        ((18, 3, 3, 4), {(1, 3): 2, (1, 4): 3, (2, 1): 5, (2, 4): 1, (3, 1): 13, (3, 2): 1, (4, 2): 2, (4, 3): 1}),
        ((16, 4, 3, 4), {(1, 3): 2, (1, 4): 1, (2, 1): 3, (2, 4): 3, (3, 1): 13, (3, 2): 2, (4, 2): 2, (4, 3): 1}),
        ((12, 4, 3, 4), {(1, 3): 2, (1, 4): 3, (2, 1): 5, (2, 4): 1, (3, 1): 7, (3, 2): 2, (4, 2): 2, (4, 3): 1}),
    ],
    "1b.cm.six.ii2": [
        ((7, 8, 2, 7), {(1, 3): 1, (1, 4): 2, (2, 1): 5, (2, 4): 5, (3, 1): 2, (3, 2): 3, (4, 2): 5, (4, 3): 1}),
        ((9, 8, 2, 9), {(1, 3): 1, (1, 4): 4, (2, 1): 4, (2, 4): 5, (3, 1): 5, (3, 2): 1, (4, 2): 7, (4, 3): 1}),
        ((8, 2, 7, 6), {(1, 3): 5, (1, 4): 4, (2, 1): 3, (2, 4): 2, (3, 1): 5, (3, 2): 1, (4, 2): 1, (4, 3): 2}),
        ((2, 4, 9, 4), {(1, 3): 7, (1, 4): 2, (2, 1): 1, (2, 4): 2, (3, 1): 1, (3, 2): 1, (4, 2): 3, (4, 3): 2}),
        ((8, 9, 9, 2), {(1, 3): 6, (1, 4): 1, (2, 1): 2, (2, 4): 1, (3, 1): 6, (3, 2): 5, (4, 2): 4, (4, 3): 3}),
        ((8, 5, 2, 6), {(1, 3): 1, (1, 4): 3, (2, 1): 3, (2, 4): 3, (3, 1): 5, (3, 2): 1, (4, 2): 4, (4, 3): 1}),
    ],
    "2a.noncm.seven": [
        ((8, 10, 2, 4), {(1, 3): 1, (1, 4): 2, (2, 1): 3, (2, 4): 2, (3, 1): 5, (3, 2): 1, (4, 2): 9, (4, 3): 1}),
        ((5, 8, 9, 2), {(1, 3): 8, (1, 4): 1, (2, 1): 4, (2, 4): 1, (3, 1): 1, (3, 2): 5, (4, 2): 3, (4, 3): 1}),
        ((10, 2, 5, 8), {(1, 3): 1, (1, 4): 5, (2, 1): 1, (2, 4): 3, (3, 1): 9, (3, 2): 1, (4, 2): 1, (4, 3): 4}),
        ((10, 2, 6, 7), {(1, 3): 3, (1, 4): 4, (2, 1): 1, (2, 4): 3, (3, 1): 9, (3, 2): 1, (4, 2): 1, (4, 3): 3}),
        ((3, 5, 9, 10), {(1, 3): 5, (1, 4): 1, (2, 1): 2, (2, 4): 9, (3, 1): 1, (3, 2): 4, (4, 2): 1, (4, 3): 4}),
        ((3, 5, 9, 10), {(1, 3): 4, (1, 4): 1, (2, 1): 1, (2, 4): 9, (3, 1): 2, (3, 2): 4, (4, 2): 1, (4, 3): 5}),
    ],
    "2b.cm.six.i": [
        ((10, 3, 8, 6), {(1, 3): 4, (1, 4): 1, (2, 1): 3, (2, 4): 5, (3, 1): 7, (3, 2): 2, (4, 2): 1, (4, 3): 4}),
        ((8, 9, 8, 4), {(1, 3): 5, (1, 4): 3, (2, 1): 7, (2, 4): 1, (3, 1): 1, (3, 2): 1, (4, 2): 8, (4, 3): 3}),
        ((10, 10, 7, 9), {(1, 3): 3, (1, 4): 6, (2, 1): 2, (2, 4): 3, (3, 1): 8, (3, 2): 3, (4, 2): 7, (4, 3): 4}),
        ((9, 10, 5, 7), {(1, 3): 2, (1, 4): 6, (2, 1): 3, (2, 4): 1, (3, 1): 6, (3, 2): 5, (4, 2): 5, (4, 3): 3}),
        ((10, 10, 9, 9), {(1, 3): 4, (1, 4): 5, (2, 1): 1, (2, 4): 4, (3, 1): 9, (3, 2): 5, (4, 2): 5, (4, 3): 5}),
        ((3, 7, 8, 8), {(1, 3): 6, (1, 4): 1, (2, 1): 2, (2, 4): 7, (3, 1): 1, (3, 2): 6, (4, 2): 1, (4, 3): 2}),
    ],
    "2b.cm.six.ii1": [
        ((8, 4, 8, 6), {(1, 3): 6, (1, 4): 1, (2, 1): 1, (2, 4): 5, (3, 1): 7, (3, 2): 1, (4, 2): 3, (4, 3): 2}),
        ((8, 9, 4, 4), {(1, 3): 3, (1, 4): 1, (2, 1): 1, (2, 4): 3, (3, 1): 7, (3, 2): 6, (4, 2): 3, (4, 3): 1}),
        ((5, 9, 4, 5), {(1, 3): 3, (1, 4): 1, (2, 1): 2, (2, 4): 4, (3, 1): 3, (3, 2): 4, (4, 2): 5, (4, 3): 1}),
        ((3, 3, 4, 9), {(1, 3): 1, (1, 4): 7, (2, 1): 1, (2, 4): 2, (3, 1): 2, (3, 2): 1, (4, 2): 2, (4, 3): 3}),
        ((5, 9, 3, 5), {(1, 3): 2, (1, 4): 2, (2, 1): 2, (2, 4): 3, (3, 1): 3, (3, 2): 5, (4, 2): 4, (4, 3): 1}),
        ((4, 3, 5, 5), {(1, 3): 3, (1, 4): 3, (2, 1): 1, (2, 4): 2, (3, 1): 3, (3, 2): 1, (4, 2): 2, (4, 3): 2}),
    ],
    "3b.cm.six.ii1": [
        ((4, 8, 9, 9), {(1, 3): 1, (1, 4): 4, (2, 1): 1, (2, 4): 5, (3, 1): 3, (3, 2): 2, (4, 2): 6, (4, 3): 8}),
        ((3, 6, 7, 6), {(1, 3): 3, (1, 4): 2, (2, 1): 1, (2, 4): 4, (3, 1): 2, (3, 2): 1, (4, 2): 5, (4, 3): 4}),
        ((5, 9, 5, 3), {(1, 3): 3, (1, 4): 1, (2, 1): 1, (2, 4): 2, (3, 1): 4, (3, 2): 4, (4, 2): 5, (4, 3): 2}),
        ((7, 5, 3, 5), {(1, 3): 2, (1, 4): 1, (2, 1): 3, (2, 4): 4, (3, 1): 4, (3, 2): 2, (4, 2): 3, (4, 3): 1}),
        ((3, 6, 7, 7), {(1, 3): 1, (1, 4): 3, (2, 1): 1, (2, 4): 4, (3, 1): 2, (3, 2): 2, (4, 2): 4, (4, 3): 6}),
        ((3, 9, 2, 3), {(1, 3): 1, (1, 4): 1, (2, 1): 2, (2, 4): 2, (3, 1): 1, (3, 2): 3, (4, 2): 6, (4, 3): 1}),
    ],
}


def canon(p: Polynomial) -> Polynomial:
    return sign_canonical(p)


def canon_set(polys) -> set:
    return {canon(p) for p in polys}


def test_criterion_1_worked_example_exact_reproduction(example_report):
    started = time.perf_counter()
    report = analyze(EXAMPLE)
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0

    # (a) the toric ideal is minimally generated by the five published binomials
    assert canon_set(report.structure.binomials) == canon_set(
        parse_polynomial(s) for s in EXAMPLE_IDEAL
    )
    # (b) the standard basis under x4 > x2 > x3 > x1 is f1..f7 exactly
    assert report.order.perm == (4, 2, 3, 1)
    assert canon_set(report.basis.elements) == canon_set(
        parse_polynomial(s) for s in EXAMPLE_IDEAL + EXAMPLE_BASIS_EXTRAS
    )
    # (c) the tangent cone has exactly the seven published generators
    assert report.tangent.minimal_count == 7
    assert canon_set(report.tangent.minimal_generators) == canon_set(
        parse_polynomial(s) for s in EXAMPLE_CONE
    )
    assert report.tangent.cm_verdict is False
    assert report.validation.outcome == COUNT_MATCH_SET_MISMATCH
    assert report.validation.known_erratum


def test_criterion_2_cm_reverification(corpus_records, corpus_reports):
    assert len(corpus_records) >= 200
    assert {rec.case_label for rec in corpus_records} == {"1a", "1b", "2a", "2b", "3a", "3b"}
    covered = 0
    disagreements = []
    for rec, report in zip(corpus_records, corpus_reports):
        assert not report.rejected
        if not report.cm_prediction.covered:
            continue
        covered += 1
        if report.cm_prediction.value != report.tangent.cm_verdict:
            disagreements.append(rec.spec.n)
    assert covered >= 150
    assert disagreements == []


def _family_samples():
    """At least five admissible exponent tables per hypothesis family: a
    seeded stream plus the frozen tables for the thin families."""
    table = load_rules()
    buckets = {rule.id: [] for rule in table.rules}
    rng = random.Random(424242)
    draws = 0
    while draws < 12000 and any(len(v) < 5 for v in buckets.values()):
        draws += 1
        a = tuple(rng.randint(2, 6) for _ in range(4))
        aij = {}
        for j, (p, q) in ((1, (2, 3)), (2, (3, 4)), (3, (1, 4)), (4, (1, 2))):
            s = rng.randint(1, a[j - 1] - 1)
            aij[(p, j)] = s
            aij[(q, j)] = a[j - 1] - s
        result = instantiate_case1a(a, aij)
        if isinstance(result, Rejected):
            continue
        pred = predict_generators(result.data)
        if pred.source and len(buckets[pred.source]) < 5:
            buckets[pred.source].append(result.data)
    for source, tables in RARE_FAMILY_TABLES.items():
        for a, aij in tables:
            if len(buckets[source]) >= 5:
                break
            result = instantiate_case1a(a, aij)
            assert not isinstance(result, Rejected), (source, a)
            pred = predict_generators(result.data)
            assert pred.source == source, (source, a, pred.source)
            buckets[source].append(result.data)
    return buckets


def test_criterion_3_standard_basis_certificates():
    table = load_rules()
    rules = {r.id: r for r in table.rules}
    buckets = _family_samples()
    for source, instances in sorted(buckets.items()):
        assert len(instances) >= 5, f"only {len(instances)} samples for {source}"
        rule = rules[source]
        order = table.order(rule.order_name)
        for data in instances[:5]:
            symbols = data.symbols()
            for text in rule.standing:
                assert evaluate_atom(text, symbols).holds, (source, text)
            basis = [instantiate_template(t, symbols) for t in rule.basis]
            result = certify(order, basis)
            assert result.ok, (source, data.spec.n, result.failing_pair)


def test_criterion_4_case_theorem_counts(corpus_reports):
    fired = 0
    for report in corpus_reports:
        pred = report.prediction
        if pred.source is None:
            continue
        fired += 1
        tally = report.validation
        if pred.source.endswith("noncm.seven"):
            assert report.tangent.minimal_count == 7, report.spec.n
        else:
            assert report.tangent.minimal_count in (5, 6), report.spec.n
        assert report.tangent.minimal_count == pred.count, report.spec.n
        if tally.outcome == MATCH:
            continue
        # the single tolerated deviation: the documented fifth-element
        # misprint, with exactly the published symmetric difference
        assert tally.outcome == COUNT_MATCH_SET_MISMATCH, (report.spec.n, tally.outcome)
        assert pred.source == "1b.noncm.seven", report.spec.n
        assert tally.known_erratum, report.spec.n
        s = report.structure.symbols()
        assert canon_set(tally.extra) == {
            canon(instantiate_template("x1^a21*x4^a34", s))
        }
        assert canon_set(tally.missing) == {
            canon(instantiate_template("x2^a42*x3^a13", s))
        }
    assert fired >= 100


def test_criterion_5_dual_oracle_graded_agreement(corpus_reports):
    for report in corpus_reports:
        gens = list(report.tangent.generators)
        bound = report.tangent.degree_bound
        dims = initial_dims_from_generators(gens, bound)
        spread = max(g.max_degree() - g.min_degree() for g in report.basis.elements)
        oracle = graded_kernel(report.spec, bound, slice_bound=bound + max(spread, 4))
        assert dims == oracle.initial_dims, report.spec.n
        assert dims == report.tangent.graded_dims, report.spec.n


def test_criterion_6_round_trip_500_tuples():
    rng = random.Random(60606)
    accepted = 0
    attempts = 0
    while accepted < 500:
        attempts += 1
        assert attempts < 10000
        a = tuple(rng.randint(2, 6) for _ in range(4))
        aij = {}
        for j, (p, q) in ((1, (2, 3)), (2, (3, 4)), (3, (1, 4)), (4, (1, 2))):
            s = rng.randint(1, a[j - 1] - 1)
            aij[(p, j)] = s
            aij[(q, j)] = a[j - 1] - s
        result = instantiate_case1a(a, aij)
        if isinstance(result, Rejected):
            continue
        accepted += 1
        from gorecone.toricgen import detect_structure

        detected = detect_structure(result.spec)
        perm = result.permutation
        back_a = tuple(detected.a[perm[i] - 1] for i in range(4))
        back_aij = {(i, j): detected.aij[(perm[i - 1], perm[j - 1])] for (i, j) in aij}
        assert back_a == a and back_aij == aij, result.spec.n
    assert accepted == 500


def test_criterion_7_mora_engine_properties(corpus_reports):
    rng = random.Random(777)
    bases = [r.basis for r in corpus_reports if not r.rejected]
    # 1000 randomized reductions: strict leading-monomial descent and the
    # exact weak-normal-form identity unit*f = sum q_i g_i + remainder
    reductions = 0
    while reductions < 1000:
        basis = bases[rng.randrange(len(bases))]
        f = Polynomial.zero()
        for g in basis.elements:
            if rng.random() < 0.7:
                m = tuple(rng.randint(0, 2) for _ in range(4))
                f = f + g.term_mul(rng.choice([1, -1, 2]), m)
        if rng.random() < 0.3 or f.is_zero():
            f = f + Polynomial.monomial(tuple(rng.randint(0, 3) for _ in range(4)), 1)
        res = normal_form(basis.order, f, list(basis.elements), witness=True)
        lms = [st.lead_before for st in res.trace.steps]
        for a, b in zip(lms, lms[1:]):
            assert compare(basis.order, b, a) == -1
        lhs = res.unit * f
        for q, g in zip(res.quotients, basis.elements):
            lhs = lhs - q * g
        assert lhs == res.remainder
        assert res.unit.coefficient((0, 0, 0, 0)) != 0
        reductions += 1
    # completion idempotence on every corpus basis
    for basis in bases:
        again = complete(basis.order, list(basis.elements))
        assert set(again.elements) == set(basis.elements)
