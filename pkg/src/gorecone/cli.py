"""Command-line surface: end-to-end curve analysis, corpus generation, and
the validation suite.

``analyze`` runs the whole pipeline on four multiplicities: validate,
detect the five-generator structure, pick the monomial order the fired
hypothesis family calls for, complete the standard basis, extract the
tangent cone, and cross-validate the computed minimal generating set
against the predicted one.  ``gen-corpus`` samples exponent tables and
emits accepted curves; ``run-suite`` analyzes a corpus and tallies the
validation outcomes per hypothesis family.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from . import caselaw, morasb, tcone, toricgen
from .caselaw import CasePrediction, CmPrediction, ValidationResult
from .morasb import DEFAULT_BUDGET, CompletionBudgetExceeded, StandardBasis
from .polycore import MonomialOrder, NEGDEGREVLEX, format_polynomial
from .semigroup import CurveSpec, InvalidCurveError, SearchBoundExceeded, symmetry_report
from .tcone import TangentConeReport
from .toricgen import BresinskyData, Instantiation, Rejected, StructureRejection

BUDGET_ENV = "GORECONE_BUDGET"

ORDER_STANDARD = (4, 3, 2, 1)


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class AnalysisReport:
    spec: CurveSpec
    structure: Union[BresinskyData, StructureRejection]
    order: MonomialOrder | None
    basis: StandardBasis | None
    tangent: TangentConeReport | None
    cm_prediction: CmPrediction | None
    prediction: CasePrediction | None
    validation: ValidationResult | None
    timings: dict[str, float] = field(default_factory=dict)
    integrity: dict[str, dict[str, str]] = field(default_factory=dict)

    @property
    def rejected(self) -> bool:
        return isinstance(self.structure, StructureRejection)


def _parse_order(text: str) -> MonomialOrder:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4 or any(not p.startswith("x") for p in parts):
        raise ValueError(f"order must list x1..x4 greatest first, got {text!r}")
    perm = tuple(int(p[1:]) for p in parts)
    return MonomialOrder(NEGDEGREVLEX, perm)  # raises on bad permutations


def analyze(
    n: Sequence[int],
    *,
    order: MonomialOrder | None = None,
    degree_bound: int | None = None,
    budget: int = DEFAULT_BUDGET,
    cross_check: bool = True,
) -> AnalysisReport:
    """Full pipeline on one curve; always returns a report (rejections
    included).  Invalid multiplicities raise InvalidCurveError; blown
    search/completion budgets raise their dedicated errors."""
    timings: dict[str, float] = {}
    integrity: dict[str, dict[str, str]] = {}

    t0 = time.perf_counter()
    spec = CurveSpec(tuple(n))
    timings["spec"] = time.perf_counter() - t0
    spec_out = ",".join(str(v) for v in spec.n)
    integrity["spec"] = {"output": _sha(spec_out)}

    t0 = time.perf_counter()
    structure = toricgen.detect_structure(spec)
    timings["structure"] = time.perf_counter() - t0
    if isinstance(structure, StructureRejection):
        struct_out = f"rejected:{structure.reason}:{structure.detail}"
        integrity["structure"] = {"input": _sha(spec_out), "output": _sha(struct_out)}
        return AnalysisReport(
            spec, structure, None, None, None, None, None, None, timings, integrity
        )
    struct_out = structure.case_label + ";" + ";".join(
        format_polynomial(f) for f in structure.binomials
    )
    integrity["structure"] = {"input": _sha(spec_out), "output": _sha(struct_out)}

    t0 = time.perf_counter()
    cm_prediction = caselaw.predict_cm(structure)
    prediction = caselaw.predict_generators(structure)
    timings["prediction"] = time.perf_counter() - t0
    pred_out = f"{prediction.source}:{prediction.count}"
    integrity["prediction"] = {"input": _sha(struct_out), "output": _sha(pred_out)}

    if order is None:
        order = caselaw.load_rules().order(prediction.order_name)

    t0 = time.perf_counter()
    basis = morasb.complete(order, list(structure.binomials), budget=budget)
    timings["basis"] = time.perf_counter() - t0
    basis_out = order.name() + ";" + ";".join(
        format_polynomial(g, order) for g in basis.elements
    )
    integrity["basis"] = {"input": _sha(struct_out), "output": _sha(basis_out)}

    t0 = time.perf_counter()
    tangent = tcone.build_report(basis, spec, cross_check=cross_check)
    if degree_bound is not None:
        maxdeg = max(g.max_degree() for g in tangent.generators)
        if degree_bound < maxdeg:
            raise ValueError(f"--bound {degree_bound} is below the top generator degree {maxdeg}")
        # recompute graded data at the requested bound
        dims = tcone.initial_dims_from_generators(list(tangent.generators), degree_bound)
        cm, fail = tcone._x1_regular(list(tangent.generators), dims, degree_bound)
        tangent = TangentConeReport(
            generators=tangent.generators,
            minimal_generators=tangent.minimal_generators,
            minimal_count=tangent.minimal_count,
            degree_breakdown=tangent.degree_breakdown,
            graded_dims=dims,
            degree_bound=degree_bound,
            cm_verdict=cm,
            cm_failure_degree=fail,
        )
    timings["tangent"] = time.perf_counter() - t0
    tangent_out = ";".join(format_polynomial(g) for g in tangent.minimal_generators)
    integrity["tangent"] = {"input": _sha(basis_out), "output": _sha(tangent_out)}

    t0 = time.perf_counter()
    validation = caselaw.validate(prediction, tangent)
    timings["validation"] = time.perf_counter() - t0
    integrity["validation"] = {
        "input": _sha(pred_out + "|" + tangent_out),
        "output": _sha(validation.outcome),
    }
    return AnalysisReport(
        spec,
        structure,
        order,
        basis,
        tangent,
        cm_prediction,
        prediction,
        validation,
        timings,
        integrity,
    )


# -- corpus ---------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusRecord:
    spec: CurveSpec
    case_label: str
    instantiation: Instantiation


def gen_corpus(
    seed: int,
    count: int,
    case_filter: str | None = None,
    *,
    a_lo: int = 2,
    a_hi: int = 6,
    max_attempts: int = 2_000_000,
) -> list[CorpusRecord]:
    """Seeded sample of accepted curves from the case-1a parametrization.

    Diagonal exponents are drawn from [a_lo, a_hi], off-diagonals from the
    splits a_j = a_ij + a_kj; rejections (gcd, duplicates, embedding
    dimension) are skipped.  Deterministic for a fixed seed."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = random.Random(seed)
    out: list[CorpusRecord] = []
    for _ in range(max_attempts):
        if len(out) >= count:
            break
        a = tuple(rng.randint(a_lo, a_hi) for _ in range(4))
        aij: dict[tuple[int, int], int] = {}
        for j, (p, q) in ((1, (2, 3)), (2, (3, 4)), (3, (1, 4)), (4, (1, 2))):
            split = rng.randint(1, a[j - 1] - 1)
            aij[(p, j)] = split
            aij[(q, j)] = a[j - 1] - split
        result = toricgen.instantiate_case1a(a, aij)
        if isinstance(result, Rejected):
            continue
        if case_filter is not None and result.data.case_label != case_filter:
            continue
        out.append(CorpusRecord(result.spec, result.data.case_label, result))
    else:
        raise SearchBoundExceeded(
            f"corpus sampler found only {len(out)}/{count} after {max_attempts} attempts"
        )
    return out


def write_corpus(records: list[CorpusRecord], path: str) -> None:
    with open(path, "w") as fh:
        fh.write("# corpus: one curve per line, four multiplicities\n")
        for rec in records:
            n = " ".join(str(v) for v in rec.spec.n)
            fh.write(f"{n}  # case={rec.case_label}\n")


def read_corpus(path: str) -> list[tuple[int, int, int, int]]:
    specs = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"corpus lines need four integers, got {line!r}")
            specs.append(tuple(int(p) for p in parts))
    return specs


# -- suite ------------------------------------------------------------------------


@dataclass
class SuiteSummary:
    total: int
    outcomes: dict[str, int]
    by_source: dict[str, dict[str, int]]
    cm_checked: int
    cm_disagreements: int
    mismatches: list[tuple[tuple[int, ...], str]]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _suite_row(n: tuple[int, ...]) -> dict:
    report = analyze(n)
    if report.rejected:
        return {"n": n, "outcome": "REJECTED", "source": report.structure.reason}
    row = {
        "n": n,
        "outcome": report.validation.outcome,
        "known_erratum": report.validation.known_erratum,
        "source": report.prediction.source or "none",
        "count": report.tangent.minimal_count,
        "cm_computed": report.tangent.cm_verdict,
        "cm_covered": report.cm_prediction.covered,
        "cm_predicted": report.cm_prediction.value,
    }
    return row


def run_suite(specs: Sequence[tuple[int, ...]], *, jobs: int = 1) -> SuiteSummary:
    """Analyze every corpus entry; tally validation outcomes per fired
    hypothesis family and compare both Cohen-Macaulay verdicts."""
    if not specs:
        raise ValueError("empty corpus")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_suite_row, specs))
    else:
        rows = [_suite_row(n) for n in specs]
    outcomes: dict[str, int] = {}
    by_source: dict[str, dict[str, int]] = {}
    cm_checked = 0
    cm_bad = 0
    mismatches = []
    for row in rows:
        outcome = row["outcome"]
        outcomes[outcome] = outcomes.get(outcome, 0) + 1
        src = row["source"]
        by_source.setdefault(src, {})
        by_source[src][outcome] = by_source[src].get(outcome, 0) + 1
        if outcome == "MISMATCH":
            mismatches.append((row["n"], src))
        if row.get("cm_covered"):
            cm_checked += 1
            if row["cm_predicted"] != row["cm_computed"]:
                cm_bad += 1
                mismatches.append((row["n"], f"cm:{src}"))
    return SuiteSummary(
        total=len(rows),
        outcomes=dict(sorted(outcomes.items())),
        by_source={k: dict(sorted(v.items())) for k, v in sorted(by_source.items())},
        cm_checked=cm_checked,
        cm_disagreements=cm_bad,
        mismatches=mismatches,
    )


# -- rendering ----------------------------------------------------------------------


def report_document(report: AnalysisReport, *, timings: bool = False) -> dict:
    """The structured report: stable key order, polynomials as text."""
    doc: dict = {"spec": {"n": list(report.spec.n)}}
    if report.rejected:
        doc["structure"] = {
            "accepted": False,
            "reason": report.structure.reason,
            "detail": report.structure.detail,
        }
    else:
        data = report.structure
        doc["structure"] = {
            "accepted": True,
            "case": data.case_label,
            "a": list(data.a),
            "aij": {f"a{i}{j}": v for (i, j), v in sorted(data.aij.items())},
            "generators": [format_polynomial(f) for f in data.binomials],
        }
        doc["basis"] = {
            "order": report.order.name(),
            "elements": [format_polynomial(g, report.order) for g in report.basis.elements],
            "size": len(report.basis.elements),
        }
        doc["tangent_cone"] = {
            "generators": [format_polynomial(g) for g in report.tangent.generators],
            "minimal_generators": [
                format_polynomial(g) for g in report.tangent.minimal_generators
            ],
            "minimal_count": report.tangent.minimal_count,
            "degree_breakdown": {str(k): v for k, v in sorted(report.tangent.degree_breakdown.items())},
            "degree_bound": report.tangent.degree_bound,
            "cohen_macaulay": report.tangent.cm_verdict,
            "cm_failure_degree": report.tangent.cm_failure_degree,
        }
        doc["prediction"] = {
            "source": report.prediction.source,
            "count": report.prediction.count,
            "cohen_macaulay": report.prediction.cm,
            "cm_covered": report.cm_prediction.covered,
            "cm_predicted": report.cm_prediction.value,
            "hypotheses": [
                {"text": a.text, "lhs": a.lhs, "rhs": a.rhs, "holds": a.holds}
                for a in report.prediction.hypotheses
            ],
            "generators": (
                [format_polynomial(g) for g in report.prediction.generators]
                if report.prediction.generators is not None
                else None
            ),
        }
        doc["validation"] = {
            "outcome": report.validation.outcome,
            "known_erratum": report.validation.known_erratum,
            "missing": [format_polynomial(p) for p in report.validation.missing],
            "extra": [format_polynomial(p) for p in report.validation.extra],
        }
    doc["integrity"] = report.integrity
    if timings:
        doc["timings"] = {k: round(v, 6) for k, v in report.timings.items()}
    return doc


def render_text(report: AnalysisReport, *, timings: bool = False) -> str:
    lines = []
    n = report.spec.n
    lines.append(f"curve: n = ({n[0]}, {n[1]}, {n[2]}, {n[3]})")
    if report.rejected:
        lines.append(f"structure: rejected ({report.structure.reason}): {report.structure.detail}")
        return "\n".join(lines)
    data = report.structure
    lines.append(f"structure: case {data.case_label}, symmetric, non-complete-intersection")
    lines.append("toric ideal minimal generators:")
    for k, f in enumerate(data.binomials, 1):
        lines.append(f"  f{k} = {format_polynomial(f)}")
    lines.append(f"order: {report.order.name()}")
    lines.append(f"standard basis ({len(report.basis.elements)} elements):")
    for k, g in enumerate(report.basis.elements, 1):
        lines.append(f"  g{k} = {format_polynomial(g, report.order)}")
    t = report.tangent
    lines.append(f"tangent cone: minimal generators = {t.minimal_count}")
    for g in t.minimal_generators:
        lines.append(f"  {format_polynomial(g)}")
    cm = "yes" if t.cm_verdict else f"no (regularity fails in degree {t.cm_failure_degree})"
    lines.append(f"Cohen-Macaulay tangent cone: {cm}")
    p = report.prediction
    if p.source is None:
        lines.append("prediction: no published family covers these exponents")
    else:
        lines.append(f"prediction: family {p.source}, count {p.count}")
        if p.erratum is not None:
            lines.append(
                f"  note: element {p.erratum.element} kept as printed "
                f"({format_polynomial(p.erratum.printed)}); computation supports "
                f"{format_polynomial(p.erratum.supported)}"
            )
    v = report.validation
    if v is not None:
        flag = " (documented misprint)" if v.known_erratum else ""
        lines.append(f"validation: {v.outcome}{flag}")
        for poly in v.missing:
            lines.append(f"  predicted only: {format_polynomial(poly)}")
        for poly in v.extra:
            lines.append(f"  computed only: {format_polynomial(poly)}")
    if timings:
        total = sum(report.timings.values())
        lines.append(f"timings: total {total:.3f}s " + " ".join(
            f"{k}={v:.3f}s" for k, v in report.timings.items()
        ))
    return "\n".join(lines)


def render_suite(summary: SuiteSummary) -> str:
    lines = [f"analyzed {summary.total} curves"]
    lines.append("outcomes: " + ", ".join(f"{k}={v}" for k, v in summary.outcomes.items()))
    lines.append("coverage by hypothesis family:")
    for src, tally in summary.by_source.items():
        cells = ", ".join(f"{k}={v}" for k, v in tally.items())
        lines.append(f"  {src}: {cells}")
    lines.append(
        f"Cohen-Macaulay re-verification: {summary.cm_checked} covered instances, "
        f"{summary.cm_disagreements} disagreements"
    )
    if summary.mismatches:
        lines.append("MISMATCHES:")
        for n, src in summary.mismatches:
            lines.append(f"  {n} ({src})")
    return "\n".join(lines)


# -- entry point ---------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gorecone",
        description="Tangent cones of Gorenstein monomial curves in 4-space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="run the full pipeline on one curve")
    p_an.add_argument("n", nargs=4, type=int, metavar=("N1", "N2", "N3", "N4"))
    p_an.add_argument("--order", help="variable order, greatest first, e.g. x4,x2,x3,x1")
    p_an.add_argument("--bound", type=int, help="degree bound for graded computations")
    p_an.add_argument("--json", action="store_true", help="emit the structured document")
    p_an.add_argument("--timings", action="store_true", help="include wall times")

    p_gen = sub.add_parser("gen-corpus", help="emit seeded curves from the parametrization")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--count", type=int, required=True)
    p_gen.add_argument("--case", choices=sorted(toricgen.CASE_PATTERNS), help="keep one case only")
    p_gen.add_argument("--out", help="write to a corpus file instead of stdout")

    p_suite = sub.add_parser("run-suite", help="validate a corpus end to end")
    p_suite.add_argument("--corpus", help="corpus file (four integers per line, # comments)")
    p_suite.add_argument("--seed", type=int, default=0, help="seed when generating a corpus")
    p_suite.add_argument("--count", type=int, default=50, help="size when generating a corpus")
    p_suite.add_argument("--jobs", type=int, default=1)
    p_suite.add_argument("--json", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    budget = DEFAULT_BUDGET
    if os.environ.get(BUDGET_ENV):
        budget = int(os.environ[BUDGET_ENV])

    if args.command == "analyze":
        order = None
        if args.order:
            try:
                order = _parse_order(args.order)
            except ValueError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2
        try:
            report = analyze(args.n, order=order, degree_bound=args.bound, budget=budget)
        except InvalidCurveError as exc:
            print(f"invalid curve: {exc}", file=sys.stderr)
            return 2
        except (SearchBoundExceeded, CompletionBudgetExceeded) as exc:
            print(f"search aborted: {exc}", file=sys.stderr)
            return 3
        if args.json:
            print(json.dumps(report_document(report, timings=args.timings), indent=2, sort_keys=False))
        else:
            print(render_text(report, timings=args.timings))
        if report.validation is not None and report.validation.outcome == "MISMATCH":
            return 1
        return 0

    if args.command == "gen-corpus":
        try:
            records = gen_corpus(args.seed, args.count, args.case)
        except SearchBoundExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 3
        if args.out:
            write_corpus(records, args.out)
        else:
            for rec in records:
                n = " ".join(str(v) for v in rec.spec.n)
                print(f"{n}  # case={rec.case_label}")
        return 0

    if args.command == "run-suite":
        if args.corpus:
            specs = read_corpus(args.corpus)
        else:
            specs = [rec.spec.n for rec in gen_corpus(args.seed, args.count)]
        if not specs:
            print("error: empty corpus", file=sys.stderr)
            return 2
        try:
            summary = run_suite(specs, jobs=args.jobs)
        except InvalidCurveError as exc:
            print(f"invalid curve in corpus: {exc}", file=sys.stderr)
            return 2
        except (SearchBoundExceeded, CompletionBudgetExceeded) as exc:
            print(f"search aborted: {exc}", file=sys.stderr)
            return 3
        if args.json:
            doc = {
                "total": summary.total,
                "outcomes": summary.outcomes,
                "by_source": summary.by_source,
                "cm_checked": summary.cm_checked,
                "cm_disagreements": summary.cm_disagreements,
                "mismatches": [[list(n), s] for n, s in summary.mismatches],
            }
            print(json.dumps(doc, indent=2))
        else:
            print(render_suite(summary))
        return 0 if summary.ok else 1

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    raise SystemExit(main())
