"""Decision tables for the tangent cone case law, and the cross-checks.

The tables live in ``caselaw_rules.yaml`` next to this module so they can
be audited without reading code: per case, the Cohen-Macaulayness
criterion as guard/condition branches, and per hypothesis family the
claimed standard basis together with the minimal generator count.
Predicted generating sets are the lowest homogeneous forms of the basis
templates, evaluated on an instance's exponents; one documented misprint
family is kept verbatim and flagged so validation can report it.
"""

from __future__ import annotations

import importlib.resources
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import yaml

from .polycore import MonomialOrder, NEGDEGREVLEX, Polynomial, degree, sign_canonical
from .tcone import TangentConeReport, lowest_form
from .toricgen import BresinskyData

# validation outcomes
MATCH = "MATCH"
COUNT_MATCH_SET_MISMATCH = "COUNT_MATCH_SET_MISMATCH"
MISMATCH = "MISMATCH"
UNCOVERED = "UNCOVERED"


class RuleTableError(ValueError):
    """The rules data file is malformed."""


# -- tiny expression language ---------------------------------------------------
#
# Arithmetic over the exponent symbols (a1..a4, a12..a43) with + - * and
# parentheses; comparisons <=, <, ==; boolean and/or.  Polynomial templates
# use x1..x4 with ^ powers whose exponents are arithmetic expressions.

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>x[1-4])|(?P<sym>a\d+)|(?P<name>and|or)"
    r"|(?P<op><=|==|[<>+*^()-]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise RuleTableError(f"cannot tokenize {text!r} at {text[pos:]!r}")
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind: str | None = None, value: str | None = None) -> tuple[str, str]:
        tok = self.peek()
        if tok is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise RuleTableError(f"unexpected token {tok} in {self.text!r}")
        self.pos += 1
        return tok

    def done(self) -> bool:
        return self.pos >= len(self.tokens)

    # arithmetic ----------------------------------------------------------
    def arith(self):
        node = self.term()
        while (tok := self.peek()) and tok[1] in "+-":
            self.take()
            rhs = self.term()
            node = (("add" if tok[1] == "+" else "sub"), node, rhs)
        return node

    def term(self):
        node = self.atom()
        while (tok := self.peek()) and tok[1] == "*":
            self.take()
            node = ("mul", node, self.atom())
        return node

    def atom(self):
        tok = self.peek()
        if tok is None:
            raise RuleTableError(f"truncated expression {self.text!r}")
        if tok[0] == "num":
            self.take()
            return ("num", int(tok[1]))
        if tok[0] == "sym":
            self.take()
            return ("sym", tok[1])
        if tok[1] == "(":
            self.take()
            node = self.arith()
            self.take(value=")")
            return node
        raise RuleTableError(f"unexpected {tok} in {self.text!r}")

    # comparisons and boolean combinations ---------------------------------
    def comparison(self):
        lhs = self.arith()
        op = self.take("op")[1]
        if op not in ("<=", "<", "=="):
            raise RuleTableError(f"unsupported relation {op!r} in {self.text!r}")
        rhs = self.arith()
        return ("cmp", op, lhs, rhs)

    def boolean(self):
        node = self.bool_term()
        while (tok := self.peek()) and tok == ("name", "or"):
            self.take()
            node = ("or", node, self.bool_term())
        return node

    def bool_term(self):
        node = self.comparison()
        while (tok := self.peek()) and tok == ("name", "and"):
            self.take()
            node = ("and", node, self.comparison())
        return node

    # polynomial templates --------------------------------------------------
    def polynomial(self):
        terms = []
        sign = 1
        if (tok := self.peek()) and tok[1] == "-":
            self.take()
            sign = -1
        terms.append((sign, self.mono()))
        while (tok := self.peek()) and tok[1] in "+-":
            self.take()
            terms.append((1 if tok[1] == "+" else -1, self.mono()))
        return terms

    def mono(self):
        exps: dict[int, object] = {}
        while True:
            tok = self.take("var")
            v = int(tok[1][1])
            if (nxt := self.peek()) and nxt[1] == "^":
                self.take()
                exps[v] = self._exp_atom()
            else:
                exps[v] = ("num", 1)
            if (nxt := self.peek()) and nxt[1] == "*":
                self.take()
                continue
            break
        return exps

    def _exp_atom(self):
        tok = self.peek()
        if tok and tok[1] == "(":
            self.take()
            node = self.arith()
            self.take(value=")")
            return node
        if tok and tok[0] in ("num", "sym"):
            self.take()
            return ("num", int(tok[1])) if tok[0] == "num" else ("sym", tok[1])
        raise RuleTableError(f"bad exponent in {self.text!r}")


def _eval_arith(node, symbols: Mapping[str, int]) -> int:
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "sym":
        if node[1] not in symbols:
            raise RuleTableError(f"symbol {node[1]} is not housed by this case")
        return symbols[node[1]]
    lhs, rhs = _eval_arith(node[1], symbols), _eval_arith(node[2], symbols)
    if kind == "add":
        return lhs + rhs
    if kind == "sub":
        return lhs - rhs
    return lhs * rhs


def _eval_bool(node, symbols: Mapping[str, int]) -> bool:
    if node[0] == "cmp":
        _, op, lhs, rhs = node
        lv, rv = _eval_arith(lhs, symbols), _eval_arith(rhs, symbols)
        return {"<=": lv <= rv, "<": lv < rv, "==": lv == rv}[op]
    if node[0] == "and":
        return _eval_bool(node[1], symbols) and _eval_bool(node[2], symbols)
    return _eval_bool(node[1], symbols) or _eval_bool(node[2], symbols)


@dataclass(frozen=True)
class Atom:
    """One evaluated hypothesis: textual form, both sides, and the truth."""

    text: str
    lhs: int
    rhs: int
    relation: str
    holds: bool


@lru_cache(maxsize=512)
def _parsed_comparison(text: str):
    parser = _Parser(text)
    node = parser.comparison()
    if not parser.done():
        raise RuleTableError(f"trailing tokens in atom {text!r}")
    return node


@lru_cache(maxsize=512)
def _parsed_template(text: str) -> tuple:
    parser = _Parser(text)
    terms = parser.polynomial()
    if not parser.done():
        raise RuleTableError(f"trailing tokens in template {text!r}")
    return tuple((sign, tuple(sorted(exps.items()))) for sign, exps in terms)


@lru_cache(maxsize=512)
def _parsed_boolean(text: str):
    parser = _Parser(text)
    node = parser.boolean()
    if not parser.done():
        raise RuleTableError(f"trailing tokens in condition {text!r}")
    return node


def evaluate_atom(text: str, symbols: Mapping[str, int]) -> Atom:
    _, op, lhs, rhs = _parsed_comparison(text)
    lv, rv = _eval_arith(lhs, symbols), _eval_arith(rhs, symbols)
    holds = {"<=": lv <= rv, "<": lv < rv, "==": lv == rv}[op]
    return Atom(text=text, lhs=lv, rhs=rv, relation=op, holds=holds)


def instantiate_template(text: str, symbols: Mapping[str, int]) -> Polynomial:
    terms = [(sign, dict(exps)) for sign, exps in _parsed_template(text)]
    poly_terms = []
    for sign, exps in terms:
        vec = [0, 0, 0, 0]
        for v, node in exps.items():
            e = _eval_arith(node, symbols)
            if e < 0:
                raise RuleTableError(f"negative exponent {e} instantiating {text!r}")
            vec[v - 1] = e
        poly_terms.append(((vec[0], vec[1], vec[2], vec[3]), sign))
    return Polynomial(poly_terms)


# -- rule table -----------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorRule:
    id: str
    case: str
    order_name: str
    cm: bool
    standing: tuple[str, ...]
    basis: tuple[str, ...]
    count: int
    erratum: Mapping | None
    note: str | None


@dataclass(frozen=True)
class RuleTable:
    orders: Mapping[str, tuple[int, int, int, int]]
    cm: Mapping[str, Sequence[Mapping]]
    rules: tuple[GeneratorRule, ...]

    def rules_for(self, case: str) -> list[GeneratorRule]:
        return [r for r in self.rules if r.case == case]

    def order(self, name: str) -> MonomialOrder:
        return MonomialOrder(NEGDEGREVLEX, self.orders[name])


@lru_cache(maxsize=1)
def load_rules() -> RuleTable:
    text = importlib.resources.files("gorecone").joinpath("caselaw_rules.yaml").read_text()
    raw = yaml.safe_load(text)
    orders = {k: tuple(v) for k, v in raw["orders"].items()}
    rules = []
    for entry in raw["rules"]:
        rules.append(
            GeneratorRule(
                id=entry["id"],
                case=entry["case"],
                order_name=entry["order"],
                cm=bool(entry["cm"]),
                standing=tuple(entry["standing"]),
                basis=tuple(entry["basis"]),
                count=int(entry["count"]),
                erratum=entry.get("erratum"),
                note=entry.get("note"),
            )
        )
    table = RuleTable(orders=orders, cm=raw["cm"], rules=tuple(rules))
    _sanity_check(table)
    return table


def _sanity_check(table: RuleTable) -> None:
    from .toricgen import CASE_PATTERNS

    for case in CASE_PATTERNS:
        if case not in table.cm:
            raise RuleTableError(f"no CM criterion for case {case}")
    for rule in table.rules:
        if rule.case not in CASE_PATTERNS:
            raise RuleTableError(f"rule {rule.id} references unknown case {rule.case}")
        if rule.count != len(rule.basis):
            raise RuleTableError(f"rule {rule.id}: count {rule.count} != basis size")
        if rule.order_name not in table.orders:
            raise RuleTableError(f"rule {rule.id}: unknown order {rule.order_name}")


def housed_symbols(case: str) -> set[str]:
    """All exponent symbols available in a given case."""
    from .toricgen import CASE_PATTERNS

    diag = CASE_PATTERNS[case]["diag"]
    syms = {f"a{i}" for i in range(1, 5)}
    for i, (j, k) in diag.items():
        syms.add(f"a{i}{j}")
        syms.add(f"a{i}{k}")
    return syms


# -- predictions ------------------------------------------------------------------


@dataclass(frozen=True)
class CmPrediction:
    covered: bool
    value: bool | None
    atoms: tuple[Atom, ...]
    branch: int | None


def predict_cm(data: BresinskyData) -> CmPrediction:
    """Evaluate the published Cohen-Macaulayness criterion for the instance.

    Branches are tried in table order; the first whose guards all hold
    decides.  Instances matching no guard set are reported uncovered."""
    table = load_rules()
    symbols = data.symbols()
    atoms: list[Atom] = []
    for k, branch in enumerate(table.cm[data.case_label]):
        guard_atoms = [evaluate_atom(t, symbols) for t in branch["guard"]]
        atoms.extend(guard_atoms)
        if not all(a.holds for a in guard_atoms):
            continue
        cond_atoms = [evaluate_atom(t, symbols) for t in branch["conditions"]]
        atoms.extend(cond_atoms)
        return CmPrediction(
            covered=True,
            value=all(a.holds for a in cond_atoms),
            atoms=tuple(atoms),
            branch=k,
        )
    return CmPrediction(covered=False, value=None, atoms=tuple(atoms), branch=None)


@dataclass(frozen=True)
class ErratumNote:
    element: int  # 1-based index into the prediction
    printed: Polynomial
    supported: Polynomial
    note: str


@dataclass(frozen=True)
class CasePrediction:
    source: str | None
    hypotheses: tuple[Atom, ...]
    generators: tuple[Polynomial, ...] | None
    count: int | None
    cm: bool | None
    order_name: str
    erratum: ErratumNote | None

    @property
    def covered(self) -> bool:
        return self.source is not None


def _flip_atom(p: Polynomial) -> Atom | None:
    """For a binomial template instance, record which side has lower degree
    (the lowest-form selection); None for monomials."""
    terms = list(p.terms())
    if len(terms) < 2:
        return None
    degs = sorted(degree(m) for m, _ in terms)
    lhs, rhs = degs[0], degs[-1]
    rel = "==" if lhs == rhs else "<"
    return Atom(
        text=f"deg {lhs} {rel} deg {rhs} (lowest-form side)",
        lhs=lhs,
        rhs=rhs,
        relation=rel,
        holds=True,
    )


def predict_generators(data: BresinskyData) -> CasePrediction:
    """Fire the hypothesis family covering the instance and instantiate its
    predicted minimal generating set.

    Families are mutually exclusive within a case; when none applies (a
    parameter region the tables do not treat), the prediction is empty but
    carries every evaluated hypothesis for the report."""
    table = load_rules()
    symbols = data.symbols()
    fallthrough: list[Atom] = []
    seen: set[str] = set()
    for rule in table.rules_for(data.case_label):
        standing = [evaluate_atom(t, symbols) for t in rule.standing]
        if not all(a.holds for a in standing):
            for a in standing:
                if a.text not in seen:
                    seen.add(a.text)
                    fallthrough.append(a)
            continue
        basis = [instantiate_template(t, symbols) for t in rule.basis]
        gens = [sign_canonical(lowest_form(p)) for p in basis]
        atoms = list(standing)
        for p in basis:
            flip = _flip_atom(p)
            if flip is not None:
                atoms.append(flip)
        erratum = None
        if rule.erratum is not None:
            applies = _eval_bool(_parsed_boolean(rule.erratum["when"]), symbols)
            if applies:
                printed = sign_canonical(instantiate_template(rule.erratum["printed"], symbols))
                supported = sign_canonical(
                    instantiate_template(rule.erratum["supported"], symbols)
                )
                idx = int(rule.erratum["element"]) - 1
                if gens[idx] != supported:
                    raise RuleTableError(
                        f"rule {rule.id}: lowest form {gens[idx]} != supported reading"
                    )
                gens[idx] = printed
                erratum = ErratumNote(
                    element=idx + 1,
                    printed=printed,
                    supported=supported,
                    note=rule.erratum.get("note", "").strip(),
                )
        return CasePrediction(
            source=rule.id,
            hypotheses=tuple(atoms),
            generators=tuple(gens),
            count=rule.count,
            cm=rule.cm,
            order_name=rule.order_name,
            erratum=erratum,
        )
    return CasePrediction(
        source=None,
        hypotheses=tuple(fallthrough),
        generators=None,
        count=None,
        cm=None,
        order_name="standard",
        erratum=None,
    )


def prediction_basis(data: BresinskyData, prediction: CasePrediction) -> list[Polynomial]:
    """The claimed standard basis of the fired rule, instantiated."""
    if prediction.source is None:
        raise ValueError("no rule fired for this instance")
    table = load_rules()
    (rule,) = [r for r in table.rules if r.id == prediction.source]
    return [instantiate_template(t, data.symbols()) for t in rule.basis]


# -- validation --------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationResult:
    outcome: str
    predicted_count: int | None
    computed_count: int
    missing: tuple[Polynomial, ...]  # predicted but not computed
    extra: tuple[Polynomial, ...]  # computed but not predicted
    known_erratum: bool


def validate(prediction: CasePrediction, report: TangentConeReport) -> ValidationResult:
    """Compare a fired prediction against the computed tangent cone.

    Set comparison is up to scalar normalization and order.  A one-element
    symmetric difference matching a flagged misprint is classified as
    COUNT_MATCH_SET_MISMATCH with ``known_erratum`` set; computed results
    always take precedence."""
    computed = {sign_canonical(g) for g in report.minimal_generators}
    if prediction.generators is None:
        return ValidationResult(
            UNCOVERED, None, report.minimal_count, (), (), known_erratum=False
        )
    if not report.count_complete:
        # a fired family with generators past the degree guard: the count
        # comparison would be meaningless, so fail loudly
        return ValidationResult(
            MISMATCH, prediction.count, report.minimal_count, (), (), known_erratum=False
        )
    predicted = {sign_canonical(g) for g in prediction.generators}
    missing = tuple(sorted(predicted - computed, key=lambda p: p.monomials()))
    extra = tuple(sorted(computed - predicted, key=lambda p: p.monomials()))
    counts_match = prediction.count == report.minimal_count
    if counts_match and not missing and not extra:
        outcome = MATCH
    elif counts_match and len(predicted) == len(computed):
        outcome = COUNT_MATCH_SET_MISMATCH
    else:
        outcome = MISMATCH
    known = False
    if prediction.erratum is not None and outcome == COUNT_MATCH_SET_MISMATCH:
        known = missing == (sign_canonical(prediction.erratum.printed),) and extra == (
            sign_canonical(prediction.erratum.supported),
        )
    return ValidationResult(
        outcome, prediction.count, report.minimal_count, missing, extra, known_erratum=known
    )
