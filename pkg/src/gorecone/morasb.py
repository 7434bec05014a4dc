"""Standard bases for local orders via Mora's algorithm.

The reduction is Mora's weak normal form: among all reducers whose leading
monomial divides the work polynomial's, pick one of minimal ecart (ties to
the earliest in the pool); if even the best reducer has larger ecart than
the work polynomial, the work polynomial itself joins the pool before the
step.  Completion is the Buchberger loop over s-polynomials with the
normal selection strategy (pairs by increasing lcm degree).

A weak normal form r of f with respect to G satisfies u*f = sum q_i g_i + r
for a unit u of the local ring; ``normal_form`` can track that identity
exactly (``witness=True``) so tests can verify reduction soundness.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .polycore import (
    Exponent,
    MonomialOrder,
    Polynomial,
    ZERO_EXP,
    degree,
    divides,
    ecart,
    exp_div,
    exp_lcm,
    format_polynomial,
    leading_monomial,
    normalize_leading,
    spoly,
)


class CompletionBudgetExceeded(RuntimeError):
    """The completion loop processed more pairs than its budget allows."""


DEFAULT_BUDGET = 10_000
_STEP_CAP = 1_000_000


@dataclass
class ReductionStep:
    reducer: str  # "g<i>" for an input element, "h<k>" for an adjoined one
    multiplier: Exponent
    coeff: Fraction
    lead_before: Exponent


@dataclass
class ReductionTrace:
    """One weak-normal-form run: the reducer picked at every step plus the
    points where the work polynomial was adjoined to the pool."""

    steps: list[ReductionStep] = field(default_factory=list)
    adjoined_at: list[int] = field(default_factory=list)  # step indices

    def to_text_lines(self) -> list[str]:
        lines = []
        adjoined = set(self.adjoined_at)
        for k, st in enumerate(self.steps):
            if k in adjoined:
                lines.append(f"adjoin work polynomial as h{self.adjoined_at.index(k)}")
            mult = "*".join(
                f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}"
                for i, e in enumerate(st.multiplier)
                if e > 0
            ) or "1"
            lines.append(f"reduce by {st.reducer} times {st.coeff}*{mult}")
        return lines


@dataclass
class NormalFormResult:
    remainder: Polynomial
    trace: ReductionTrace
    unit: Polynomial | None = None
    quotients: list[Polynomial] | None = None


def _witness_check(f, G, res):
    lhs = res.unit * f
    for q, g in zip(res.quotients, G):
        lhs = lhs - q * g
    return lhs == res.remainder


def normal_form(
    order: MonomialOrder,
    f: Polynomial,
    G: list[Polynomial],
    *,
    witness: bool = False,
) -> Polynomial | NormalFormResult:
    """Mora weak normal form of f with respect to G.

    Returns the remainder polynomial; with ``witness=True`` returns a
    NormalFormResult carrying the trace, the unit u and the quotients q_i
    of the exact identity u*f = sum q_i g_i + remainder.
    """
    for g in G:
        if g.is_zero():
            raise ValueError("reducers must be non-zero")
    trace = ReductionTrace()
    pool: list[Polynomial] = list(G)
    labels = [f"g{i + 1}" for i in range(len(G))]
    # representation of each pool element as (unit, quotients) over G;
    # inputs are themselves: unit 0?  They are not f-multiples, so track
    # only adjoined elements' representations.
    reps: list[tuple[Polynomial, list[Polynomial]] | None] = [None] * len(G)

    h = f
    unit = Polynomial.one() if witness else None
    quots = [Polynomial.zero() for _ in G] if witness else None
    steps = 0
    while not h.is_zero():
        lm_h, lc_h = h.leading_term(order)
        candidates = [
            k for k, g in enumerate(pool) if divides(g.leading_term(order)[0], lm_h)
        ]
        if not candidates:
            break
        e_h = ecart(order, h)
        best = min(candidates, key=lambda k: (ecart(order, pool[k]), k))
        if ecart(order, pool[best]) > e_h:
            trace.adjoined_at.append(len(trace.steps))
            pool.append(h)
            labels.append(f"h{len(pool) - len(G)}")
            reps.append((unit, list(quots)) if witness else None)
        g = pool[best]
        lm_g, lc_g = g.leading_term(order)
        mult = exp_div(lm_h, lm_g)
        coeff = lc_h / lc_g
        trace.steps.append(ReductionStep(labels[best], mult, coeff, lm_h))
        h = h - g.term_mul(coeff, mult)
        if witness:
            rep = reps[best]
            if rep is None:
                quots[best] = quots[best] + Polynomial.monomial(mult, coeff)
            else:
                u_b, q_b = rep
                unit = unit - u_b.term_mul(coeff, mult)
                for i in range(len(G)):
                    quots[i] = quots[i] - q_b[i].term_mul(coeff, mult)
        steps += 1
        if steps > _STEP_CAP:
            raise CompletionBudgetExceeded("normal form exceeded the step cap")
    if witness:
        return NormalFormResult(h, trace, unit, quots)
    return h


@dataclass(frozen=True)
class StandardBasis:
    """A certified standard basis: every pairwise s-polynomial weakly
    reduces to zero over the elements."""

    order: MonomialOrder
    elements: tuple[Polynomial, ...]
    certificate: dict[tuple[int, int], ReductionTrace]

    def leading_monomials(self) -> tuple[Exponent, ...]:
        return tuple(g.leading_term(self.order)[0] for g in self.elements)

    def certificate_text(self) -> str:
        lines = []
        for (i, j) in sorted(self.certificate):
            lines.append(f"pair ({i + 1},{j + 1}):")
            tr = self.certificate[(i, j)]
            body = tr.to_text_lines() or ["already zero"]
            lines.extend("  " + s for s in body)
        return "\n".join(lines)


@dataclass(frozen=True)
class CertifyResult:
    ok: bool
    failing_pair: tuple[int, int] | None
    traces: dict[tuple[int, int], ReductionTrace]
    remainders: dict[tuple[int, int], Polynomial]


def certify(order: MonomialOrder, G: list[Polynomial]) -> CertifyResult:
    """Check NF(spoly(g_i, g_j) | G) == 0 for every pair i < j."""
    traces: dict[tuple[int, int], ReductionTrace] = {}
    remainders: dict[tuple[int, int], Polynomial] = {}
    failing = None
    ok = True
    for i, j in itertools.combinations(range(len(G)), 2):
        res = normal_form(order, spoly(order, G[i], G[j]), G, witness=True)
        traces[(i, j)] = res.trace
        remainders[(i, j)] = res.remainder
        if not res.remainder.is_zero() and ok:
            ok = False
            failing = (i, j)
    return CertifyResult(ok, failing, traces, remainders)


def complete(
    order: MonomialOrder, F: list[Polynomial], *, budget: int = DEFAULT_BUDGET
) -> StandardBasis:
    """Standard-basis completion of F under the order.

    Pairs are processed by increasing lcm total degree (ties by index);
    non-zero normal forms join the basis with leading coefficient +1.
    The result is pruned to a minimal standard basis (no leading monomial
    divides another) and re-certified.
    """
    G = [normalize_leading(order, f) for f in F if not f.is_zero()]
    if not G:
        raise ValueError("cannot complete an empty basis")

    def pair_key(i: int, j: int) -> tuple[int, int, int]:
        lm_i = G[i].leading_term(order)[0]
        lm_j = G[j].leading_term(order)[0]
        return (degree(exp_lcm(lm_i, lm_j)), i, j)

    heap: list[tuple[int, int, int]] = []
    for i, j in itertools.combinations(range(len(G)), 2):
        heapq.heappush(heap, pair_key(i, j))
    processed = 0
    while heap:
        _, i, j = heapq.heappop(heap)
        processed += 1
        if processed > budget:
            raise CompletionBudgetExceeded(
                f"completion exceeded its budget of {budget} pair reductions"
            )
        h = normal_form(order, spoly(order, G[i], G[j]), G)
        if h.is_zero():
            continue
        G.append(normalize_leading(order, h))
        new = len(G) - 1
        for k in range(new):
            heapq.heappush(heap, pair_key(k, new))

    pruned = _prune_leading(order, G)
    cert = certify(order, pruned)
    if not cert.ok:
        raise AssertionError(
            f"completion produced a non-certifying basis (pair {cert.failing_pair})"
        )
    return StandardBasis(order, tuple(pruned), cert.traces)


def _prune_leading(order: MonomialOrder, G: list[Polynomial]) -> list[Polynomial]:
    """Drop elements whose leading monomial is divisible by another's;
    the leading ideal, and hence the standard-basis property, is preserved."""
    indexed = sorted(
        range(len(G)),
        key=lambda k: (degree(G[k].leading_term(order)[0]), G[k].leading_term(order)[0], k),
    )
    kept: list[int] = []
    for k in indexed:
        lm = G[k].leading_term(order)[0]
        if any(divides(G[m].leading_term(order)[0], lm) for m in kept):
            continue
        kept.append(k)
    return [G[k] for k in sorted(kept)]


def is_standard_basis(order: MonomialOrder, G: list[Polynomial]) -> bool:
    return certify(order, G).ok


def basis_summary(basis: StandardBasis) -> list[str]:
    return [format_polynomial(g, basis.order) for g in basis.elements]
