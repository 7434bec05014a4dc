"""Tangent cone extraction and graded linear algebra.

The tangent cone ideal is generated by the least homogeneous summands of a
standard basis under a local order.  Every polynomial this pipeline
produces is a monomial or a difference of two monomials, so the graded
vector-space computations (minimal generator counts via graded Nakayama,
ideal quotients for the Cohen-Macaulay test) reduce to exact component
counting over a union-find structure: a monomial row grounds its column,
a difference row merges two columns, and ranks fall out of the component
structure.  A general fraction-based Gaussian elimination backs the rare
rows with three or more terms.

The independent cross-check is a semigroup-side oracle: monomials grouped
by their weight under x_i -> t^{n_i} give, by pure counting, the dimension
of each graded piece of the tangent cone ideal, with no reference to any
basis computation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .polycore import (
    Exponent,
    MonomialOrder,
    Polynomial,
    ZeroPolynomial,
    degree,
    exp_mul,
    normalize_leading,
)
from .semigroup import CurveSpec
from .morasb import StandardBasis

DEGREE_GUARD = 40


class InhomogeneousInput(ValueError):
    """An operation requiring homogeneous polynomials received one that is not."""


class DegreeBoundTooLarge(ValueError):
    """Graded computations refuse degree bounds past the guard."""


class OracleDisagreement(AssertionError):
    """The generator-side and semigroup-side graded dimensions differ."""


def lowest_form(f: Polynomial) -> Polynomial:
    """The sum of all terms of f of minimal total degree."""
    if f.is_zero():
        raise ZeroPolynomial("zero polynomial has no lowest form")
    return f.homogeneous_part(f.min_degree())


def tangent_generators(basis: StandardBasis) -> list[Polynomial]:
    """Lowest forms of the basis elements, leading coefficient +1 under the
    basis order, deduplicated keeping first occurrences."""
    seen: set[Polynomial] = set()
    out: list[Polynomial] = []
    for g in basis.elements:
        h = normalize_leading(basis.order, lowest_form(g))
        if h not in seen:
            seen.add(h)
            out.append(h)
    return out


# -- exact ranks of monomial/difference row spaces ---------------------------


class _SpanTracker:
    """Incremental exact rank of a set of rows over the rationals, where a
    row is either a single monomial or a difference of two monomials."""

    def __init__(self) -> None:
        self.parent: dict[Exponent, Exponent] = {}
        self.grounded: dict[Exponent, bool] = {}
        self.rank = 0

    def _find(self, m: Exponent) -> Exponent:
        parent = self.parent
        while parent[m] != m:
            parent[m] = parent[parent[m]]
            m = parent[m]
        return m

    def _add_node(self, m: Exponent) -> None:
        if m not in self.parent:
            self.parent[m] = m
            self.grounded[m] = False

    def add_monomial(self, m: Exponent) -> bool:
        """Add the row {m}; returns True if the rank grew."""
        self._add_node(m)
        r = self._find(m)
        if self.grounded[r]:
            return False
        self.grounded[r] = True
        self.rank += 1
        return True

    def add_difference(self, m1: Exponent, m2: Exponent) -> bool:
        """Add the row m1 - m2; returns True if the rank grew."""
        if m1 == m2:
            return False
        self._add_node(m1)
        self._add_node(m2)
        r1, r2 = self._find(m1), self._find(m2)
        if r1 == r2:
            return False
        g1, g2 = self.grounded[r1], self.grounded[r2]
        if g1 and g2:
            # joining two grounded components: row already in the span
            # (m1 and m2 are both spanned), but merge for bookkeeping
            self.parent[r2] = r1
            return False
        self.parent[r2] = r1
        self.grounded[r1] = g1 or g2
        self.rank += 1
        return True

    def contains_poly(self, f: Polynomial) -> bool:
        """Span membership for a monomial or difference polynomial."""
        terms = list(f.terms())
        if len(terms) == 1:
            m = terms[0][0]
            return m in self.parent and self.grounded[self._find(m)]
        if len(terms) == 2:
            (m1, c1), (m2, c2) = terms
            if c1 + c2 != 0:
                raise InhomogeneousInput("span membership needs difference rows")
            if m1 not in self.parent or m2 not in self.parent:
                return False
            r1, r2 = self._find(m1), self._find(m2)
            if r1 == r2:
                return True
            return self.grounded[r1] and self.grounded[r2]
        raise InhomogeneousInput("span membership supports at most two terms")


def _require_rows(H: list[Polynomial]) -> None:
    for h in H:
        if h.is_zero():
            raise ZeroPolynomial("zero polynomial in generator list")
        if not h.is_homogeneous():
            raise InhomogeneousInput(f"not homogeneous: {h}")


def _add_multiples(tracker: _SpanTracker, h: Polynomial, d: int, min_mult_degree: int = 0) -> None:
    """Add rows m*h for all monomials m with deg(m*h) = d, deg(m) >= min_mult_degree."""
    e = h.max_degree()
    k = d - e
    if k < min_mult_degree or k < 0:
        return
    terms = list(h.terms())
    for m in _monomials_of_degree(k):
        if len(terms) == 1:
            tracker.add_monomial(exp_mul(m, terms[0][0]))
        elif len(terms) == 2:
            tracker.add_difference(exp_mul(m, terms[0][0]), exp_mul(m, terms[1][0]))
        else:  # pragma: no cover - pipeline rows are monomials/differences
            raise InhomogeneousInput("rows with 3+ terms need the dense fallback")


def _monomials_of_degree(d: int) -> list[Exponent]:
    out = []
    for e1 in range(d + 1):
        for e2 in range(d - e1 + 1):
            for e3 in range(d - e1 - e2 + 1):
                out.append((e1, e2, e3, d - e1 - e2 - e3))
    return out


def ideal_dimension(H: list[Polynomial], d: int) -> int:
    """dim of the degree-d piece of the ideal generated by the homogeneous H."""
    _require_rows(H)
    tracker = _SpanTracker()
    for h in H:
        _add_multiples(tracker, h, d)
    return tracker.rank


def initial_dims_from_generators(H: list[Polynomial], bound: int) -> dict[int, int]:
    """Degree-by-degree dimensions of the ideal generated by H, for d <= bound."""
    if bound > DEGREE_GUARD:
        raise DegreeBoundTooLarge(f"degree bound {bound} exceeds {DEGREE_GUARD}")
    _require_rows(H)
    dims = {}
    for d in range(bound + 1):
        tracker = _SpanTracker()
        for h in H:
            _add_multiples(tracker, h, d)
        dims[d] = tracker.rank
    return dims


def minimal_generator_count(
    H: list[Polynomial],
) -> tuple[int, dict[int, int]]:
    """Minimal number of generators of the ideal generated by H, with the
    per-degree breakdown.

    Graded Nakayama: in each degree d the count is dim I_d minus the
    dimension of the span of multiples m*h with deg(m) >= 1.  Only degrees
    realized by H can contribute.
    """
    _require_rows(H)
    if not H:
        raise ValueError("need at least one generator")
    degrees = sorted({h.max_degree() for h in H})
    if degrees[-1] > DEGREE_GUARD:
        raise DegreeBoundTooLarge(f"generator degree {degrees[-1]} exceeds {DEGREE_GUARD}")
    breakdown: dict[int, int] = {}
    total = 0
    for d in degrees:
        full = _SpanTracker()
        proper = _SpanTracker()
        for h in H:
            _add_multiples(full, h, d)
            _add_multiples(proper, h, d, min_mult_degree=1)
        count = full.rank - proper.rank
        if count:
            breakdown[d] = count
            total += count
    return total, breakdown


def minimal_generator_subset(H: list[Polynomial]) -> list[Polynomial]:
    """A minimal generating subset of H, chosen greedily by increasing
    degree (ties by the deterministic term order)."""
    _require_rows(H)
    ordered = sorted(H, key=lambda h: (h.max_degree(), h.monomials()))
    kept: list[Polynomial] = []
    for h in ordered:
        tracker = _SpanTracker()
        for k in kept:
            _add_multiples(tracker, k, h.max_degree())
        if not tracker.contains_poly(h):
            kept.append(h)
    return kept


# -- semigroup-side oracle ----------------------------------------------------


@dataclass(frozen=True)
class GradedKernelSlice:
    """Graded data of the toric ideal computed from the semigroup alone.

    ``slice_dims[d]``: dimension of the vector space of ideal members
    supported in degrees <= d (differences of equal-weight monomials).
    ``initial_dims[d]``: dimension of the degree-d piece of the ideal of
    lowest forms, as witnessed by tails up to ``slice_bound``.
    """

    degree: int
    slice_bound: int
    slice_dims: dict[int, int]
    initial_dims: dict[int, int]

    @property
    def dimension(self) -> int:
        return self.initial_dims.get(self.degree, 0)


def graded_kernel(
    spec: CurveSpec, d: int, *, slice_bound: int | None = None
) -> GradedKernelSlice:
    """Semigroup-side graded dimensions of the toric ideal at degrees <= d.

    Monomials of degree <= slice_bound are grouped by weight under
    x_i -> t^{n_i}.  A weight class with k_lo monomials of degree < e and
    k in total realizes min(k_lo, k-1) independent ideal members truncated
    below degree e; consecutive differences give both the by-degree slice
    dimensions and the lowest-form dimensions.  Initial forms whose every
    ideal witness needs terms of degree > slice_bound are not seen, which
    is why callers pass a bound covering the spread (degree minus order)
    of the bases they cross-check against.
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    if slice_bound is None:
        slice_bound = d + 4
    if slice_bound < d:
        raise ValueError("slice bound below requested degree")
    if slice_bound > 2 * DEGREE_GUARD:
        raise DegreeBoundTooLarge(f"slice bound {slice_bound} exceeds {2 * DEGREE_GUARD}")
    n = spec.n
    # degree-histogram per weight class
    classes: dict[int, list[int]] = {}
    for e1 in range(slice_bound + 1):
        w1 = e1 * n[0]
        for e2 in range(slice_bound - e1 + 1):
            w2 = w1 + e2 * n[1]
            for e3 in range(slice_bound - e1 - e2 + 1):
                w3 = w2 + e3 * n[2]
                for e4 in range(slice_bound - e1 - e2 - e3 + 1):
                    w = w3 + e4 * n[3]
                    hist = classes.get(w)
                    if hist is None:
                        hist = [0] * (slice_bound + 1)
                        classes[w] = hist
                    hist[e1 + e2 + e3 + e4] += 1
    slice_dims: dict[int, int] = {}
    initial_dims: dict[int, int] = {}
    for e in range(d + 1):
        slice_total = 0
        initial_total = 0
        for hist in classes.values():
            size = sum(hist)
            if size < 2:
                continue
            upto_e = sum(hist[: e + 1])
            below_e = upto_e - hist[e]
            slice_total += max(upto_e - 1, 0)
            r_now = min(below_e, size - 1)
            r_next = min(upto_e, size - 1)
            initial_total += r_next - r_now
        # slice_dims by degree: increments of dim(I intersect R_{<=e})
        slice_dims[e] = slice_total
        initial_dims[e] = initial_total
    # convert cumulative slice dims to per-degree increments
    per_degree = {}
    prev = 0
    for e in range(d + 1):
        per_degree[e] = slice_dims[e] - prev
        prev = slice_dims[e]
    return GradedKernelSlice(
        degree=d, slice_bound=slice_bound, slice_dims=per_degree, initial_dims=initial_dims
    )


def kernel_basis_at_degree(spec: CurveSpec, d: int) -> list[tuple[Exponent, Exponent]]:
    """Binomial differences spanning the homogeneous degree-d ideal members:
    pairs (m, m') of equal weight and equal degree d, one per independent
    difference."""
    n = spec.n
    by_weight: dict[int, list[Exponent]] = {}
    for m in _monomials_of_degree(d):
        w = sum(e * v for e, v in zip(m, n))
        by_weight.setdefault(w, []).append(m)
    out = []
    for w in sorted(by_weight):
        group = sorted(by_weight[w])
        out.extend((m, group[0]) for m in group[1:])
    return out


# -- the tangent cone report ---------------------------------------------------


@dataclass(frozen=True)
class TangentConeReport:
    generators: tuple[Polynomial, ...]
    minimal_generators: tuple[Polynomial, ...]
    minimal_count: int
    degree_breakdown: dict[int, int]
    graded_dims: dict[int, int]
    degree_bound: int
    cm_verdict: bool
    cm_failure_degree: int | None
    # False when generators above the degree guard were left out of the
    # counting; happens only outside the published hypothesis families,
    # where non-CM standard bases can reach lowest forms past degree 50.
    count_complete: bool = True


def oracle_slice_bound(basis: StandardBasis, bound: int) -> int:
    """Tail allowance for the semigroup-side oracle: initial forms at
    degrees <= bound are witnessed by ideal members whose top degree is at
    most bound + the largest spread (degree minus order) among basis
    elements that start at or below the bound."""
    spreads = [
        g.max_degree() - g.min_degree()
        for g in basis.elements
        if g.min_degree() <= bound
    ]
    return bound + max(max(spreads), 4)


def build_report(basis: StandardBasis, spec: CurveSpec, *, cross_check: bool = True) -> TangentConeReport:
    """Assemble the tangent cone data from a certified standard basis.

    The degree bound is (max generator degree) + 4, capped at the degree
    guard; generators past the cap are reported but excluded from the
    graded counting (the per-degree data below the cap stays exact, since
    ideal membership in degree d only involves generators of degree <= d).
    The semigroup-side oracle must agree with the generator-side
    dimensions at every degree up to the bound, else the computation
    aborts loudly.
    """
    gens = tangent_generators(basis)
    full_bound = max(g.max_degree() for g in gens) + 4
    bound = min(full_bound, DEGREE_GUARD)
    work = [g for g in gens if g.max_degree() <= bound]
    count, breakdown = minimal_generator_count(work)
    minimal = minimal_generator_subset(work)
    if len(minimal) != count:
        raise AssertionError(
            f"minimal subset size {len(minimal)} != Nakayama count {count}"
        )
    dims = initial_dims_from_generators(work, bound)
    if cross_check:
        oracle = graded_kernel(spec, bound, slice_bound=oracle_slice_bound(basis, bound))
        if oracle.initial_dims != dims:
            diff = {
                d: (dims.get(d), oracle.initial_dims.get(d))
                for d in sorted(set(dims) | set(oracle.initial_dims))
                if dims.get(d) != oracle.initial_dims.get(d)
            }
            raise OracleDisagreement(
                f"graded dimensions disagree with the semigroup oracle: {diff}"
            )
    cm, fail_deg = _x1_regular(work, dims, bound)
    return TangentConeReport(
        generators=tuple(gens),
        minimal_generators=tuple(minimal),
        minimal_count=count,
        degree_breakdown=breakdown,
        graded_dims=dims,
        degree_bound=bound,
        cm_verdict=cm,
        cm_failure_degree=fail_deg,
        count_complete=full_bound <= DEGREE_GUARD,
    )


def _x1_regular(
    H: list[Polynomial], dims: dict[int, int], bound: int
) -> tuple[bool, int | None]:
    x1 = (1, 0, 0, 0)
    for d in range(bound):
        tracker = _SpanTracker()
        for h in H:
            _add_multiples(tracker, h, d + 1)
        rank_ideal = tracker.rank
        for m in _monomials_of_degree(d):
            tracker.add_monomial(exp_mul(m, x1))
        rank_with_x1 = tracker.rank
        n_monomials_d = len(_monomials_of_degree(d))
        kernel_dim = n_monomials_d - (rank_with_x1 - rank_ideal)
        if kernel_dim != dims.get(d, 0):
            return False, d
    return True, None


def is_cm_tangent_cone(report: TangentConeReport, spec: CurveSpec) -> bool:
    """Cohen-Macaulayness of the tangent cone ring, decided structurally:
    x1 (least multiplicity) must be a non-zerodivisor, i.e. the ideal
    quotient by x1 adds nothing in any degree up to the report's bound."""
    cm, _ = _x1_regular(list(report.generators), dict(report.graded_dims), report.degree_bound)
    return cm
