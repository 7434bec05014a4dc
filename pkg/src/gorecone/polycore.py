"""Exact sparse polynomial arithmetic in x1..x4 over the rationals.

Monomials are exponent vectors stored as plain 4-tuples of non-negative
integers, so they can key dictionaries directly.  Coefficients are
`fractions.Fraction`; every operation is exact.

Monomial orders come in two kinds:

* ``degrevlex`` -- global degree reverse lexicographic (a well-order),
* ``negdegrevlex`` -- its local twin, where *lower* total degree wins and
  the constant monomial 1 is the greatest monomial of all.

Both carry a permutation of the four variables (greatest first), because
the same polynomial is routinely inspected under x4>x3>x2>x1 and under
x4>x2>x3>x1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Exponent = tuple[int, int, int, int]
CoeffLike = Union[int, Fraction]

NVARS = 4
ZERO_EXP: Exponent = (0, 0, 0, 0)

# compare() results
LT, EQ, GT = -1, 0, 1

NEGDEGREVLEX = "negdegrevlex"
DEGREVLEX = "degrevlex"


class ZeroPolynomial(ValueError):
    """Raised when an operation needs a non-zero polynomial."""


def degree(m: Exponent) -> int:
    return m[0] + m[1] + m[2] + m[3]


def divides(m1: Exponent, m2: Exponent) -> bool:
    """Componentwise divisibility: x^m1 | x^m2."""
    return m1[0] <= m2[0] and m1[1] <= m2[1] and m1[2] <= m2[2] and m1[3] <= m2[3]


def exp_mul(m1: Exponent, m2: Exponent) -> Exponent:
    return (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3])


def exp_div(m1: Exponent, m2: Exponent) -> Exponent:
    """m1 / m2, assuming m2 | m1."""
    d = (m1[0] - m2[0], m1[1] - m2[1], m1[2] - m2[2], m1[3] - m2[3])
    if min(d) < 0:
        raise ValueError(f"{m2} does not divide {m1}")
    return d


def exp_lcm(m1: Exponent, m2: Exponent) -> Exponent:
    return (max(m1[0], m2[0]), max(m1[1], m2[1]), max(m1[2], m2[2]), max(m1[3], m2[3]))


def support(m: Exponent) -> tuple[int, ...]:
    """1-based indices of the variables occurring in the monomial."""
    return tuple(i + 1 for i in range(NVARS) if m[i] > 0)


@dataclass(frozen=True)
class MonomialOrder:
    """A semigroup order on monomials in x1..x4.

    ``perm`` lists the variables from greatest to least, e.g. (4, 3, 2, 1)
    means x4 > x3 > x2 > x1.  Ties in total degree break reverse
    lexicographically: the first disagreement found while scanning from the
    least variable upward makes the monomial with the *larger* exponent
    there the *smaller* monomial.
    """

    kind: str = NEGDEGREVLEX
    perm: tuple[int, int, int, int] = (4, 3, 2, 1)

    def __post_init__(self) -> None:
        if self.kind not in (NEGDEGREVLEX, DEGREVLEX):
            raise ValueError(f"unknown order kind {self.kind!r}")
        if sorted(self.perm) != [1, 2, 3, 4]:
            raise ValueError(f"perm must permute (1,2,3,4), got {self.perm}")

    @property
    def is_local(self) -> bool:
        return self.kind == NEGDEGREVLEX

    def compare(self, a: Exponent, b: Exponent) -> int:
        da, db = degree(a), degree(b)
        if da != db:
            if self.kind == NEGDEGREVLEX:
                return GT if da < db else LT
            return GT if da > db else LT
        for v in reversed(self.perm):
            i = v - 1
            if a[i] != b[i]:
                return LT if a[i] > b[i] else GT
        return EQ

    def max(self, monomials: Iterable[Exponent]) -> Exponent:
        best = None
        for m in monomials:
            if best is None or self.compare(m, best) == GT:
                best = m
        if best is None:
            raise ValueError("empty monomial collection")
        return best

    def name(self) -> str:
        vars_desc = ">".join(f"x{v}" for v in self.perm)
        return f"{self.kind}({vars_desc})"


def compare(order: MonomialOrder, a: Exponent, b: Exponent) -> int:
    """Strict total order on monomials; returns LT, EQ or GT."""
    return order.compare(a, b)


class Polynomial:
    """Immutable sparse polynomial: a map from exponent vectors to
    non-zero rational coefficients.  Canonical form is unique; zero
    coefficients are never stored."""

    __slots__ = ("_terms", "_hash", "_lead_cache")

    def __init__(self, terms: Union[Mapping[Exponent, CoeffLike], Iterable[tuple[Exponent, CoeffLike]]] = ()):
        data: dict[Exponent, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, coeff in items:
            c = Fraction(coeff)
            if c == 0:
                continue
            t = tuple(exp)
            if len(t) != NVARS or any(e < 0 or not isinstance(e, int) for e in t):
                raise ValueError(f"bad exponent vector {exp!r}")
            c0 = data.get(t)
            c = c if c0 is None else c0 + c
            if c == 0:
                data.pop(t, None)
            else:
                data[t] = c
        object.__setattr__(self, "_terms", data)
        object.__setattr__(self, "_hash", None)
        # per-order leading-term cache: order -> (exp, coeff)
        object.__setattr__(self, "_lead_cache", {})

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def one(cls) -> "Polynomial":
        return cls({ZERO_EXP: 1})

    @classmethod
    def monomial(cls, exp: Exponent, coeff: CoeffLike = 1) -> "Polynomial":
        return cls({tuple(exp): coeff})

    @classmethod
    def binomial(cls, pos: Exponent, neg: Exponent) -> "Polynomial":
        """x^pos - x^neg."""
        return cls([(tuple(pos), 1), (tuple(neg), -1)])

    # -- basic queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def terms(self) -> Iterator[tuple[Exponent, Fraction]]:
        """Terms in a fixed deterministic order (lexicographic on exponents)."""
        for exp in sorted(self._terms):
            yield exp, self._terms[exp]

    def coefficient(self, exp: Exponent) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def monomials(self) -> tuple[Exponent, ...]:
        return tuple(sorted(self._terms))

    def max_degree(self) -> int:
        if not self._terms:
            raise ZeroPolynomial("zero polynomial has no degree")
        return max(degree(m) for m in self._terms)

    def min_degree(self) -> int:
        if not self._terms:
            raise ZeroPolynomial("zero polynomial has no degree")
        return min(degree(m) for m in self._terms)

    def is_homogeneous(self) -> bool:
        if not self._terms:
            return True
        degs = {degree(m) for m in self._terms}
        return len(degs) == 1

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        data = dict(self._terms)
        for exp, c in other._terms.items():
            s = data.get(exp, Fraction(0)) + c
            if s == 0:
                data.pop(exp, None)
            else:
                data[exp] = s
        return Polynomial(data)

    def __neg__(self) -> "Polynomial":
        return Polynomial({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        data = dict(self._terms)
        for exp, c in other._terms.items():
            s = data.get(exp, Fraction(0)) - c
            if s == 0:
                data.pop(exp, None)
            else:
                data[exp] = s
        return Polynomial(data)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        data: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = exp_mul(e1, e2)
                s = data.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    data.pop(e, None)
                else:
                    data[e] = s
        return Polynomial(data)

    def term_mul(self, coeff: CoeffLike, exp: Exponent) -> "Polynomial":
        """Multiply by the single term coeff * x^exp."""
        c0 = Fraction(coeff)
        if c0 == 0:
            return Polynomial()
        return Polynomial({exp_mul(e, exp): c * c0 for e, c in self._terms.items()})

    def scale(self, coeff: CoeffLike) -> "Polynomial":
        return self.term_mul(coeff, ZERO_EXP)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial({e: c for e, c in self._terms.items() if degree(e) == d})

    def evaluate_powers(self, weights: tuple[int, int, int, int]) -> dict[int, Fraction]:
        """Substitute x_i -> t^{weights[i]} and collect the result by t-power.

        The returned map drops zero coefficients, so a member of the toric
        ideal of the weights evaluates to the empty map.
        """
        out: dict[int, Fraction] = {}
        for e, c in self._terms.items():
            w = e[0] * weights[0] + e[1] * weights[1] + e[2] * weights[2] + e[3] * weights[3]
            s = out.get(w, Fraction(0)) + c
            if s == 0:
                out.pop(w, None)
            else:
                out[w] = s
        return out

    # -- equality / hashing ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(frozenset(self._terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)

    # -- leading data -------------------------------------------------------------

    def leading_term(self, order: MonomialOrder) -> tuple[Exponent, Fraction]:
        if not self._terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        cached = self._lead_cache.get(order)
        if cached is None:
            m = order.max(self._terms)
            cached = (m, self._terms[m])
            self._lead_cache[order] = cached
        return cached


def leading_monomial(order: MonomialOrder, f: Polynomial) -> tuple[Exponent, Fraction]:
    """The greatest term of f under the order, as (exponent, coefficient)."""
    return f.leading_term(order)


def ecart(order: MonomialOrder, f: Polynomial) -> int:
    """Total degree of f minus total degree of its leading monomial."""
    lm, _ = f.leading_term(order)
    return f.max_degree() - degree(lm)


def spoly(order: MonomialOrder, f: Polynomial, g: Polynomial) -> Polynomial:
    """S-polynomial: (lcm/LT(f))*f - (lcm/LT(g))*g over the leading monomials."""
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    lcm = exp_lcm(mf, mg)
    left = f.term_mul(Fraction(1, 1) / cf, exp_div(lcm, mf))
    right = g.term_mul(Fraction(1, 1) / cg, exp_div(lcm, mg))
    return left - right


def normalize_leading(order: MonomialOrder, f: Polynomial) -> Polynomial:
    """Scale f so its leading coefficient under the order is +1."""
    _, c = f.leading_term(order)
    return f if c == 1 else f.scale(Fraction(1, 1) / c)


def sign_canonical(f: Polynomial) -> Polynomial:
    """Order-free canonical sign: the lexicographically greatest monomial
    gets a positive coefficient.  Used for set comparisons of generators."""
    if f.is_zero():
        return f
    top = max(f.monomials())
    return f if f.coefficient(top) > 0 else -f


# -- plain-text syntax ---------------------------------------------------------
#
# Terms look like "3/2*x1^2*x3 - x4"; variables are x1..x4, "^" is power,
# "*" separates factors.  Constants are plain rationals.

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x[1-4])|(?P<op>[\^*+-]))")


def parse_polynomial(text: str) -> Polynomial:
    pos = 0
    terms: list[tuple[Exponent, Fraction]] = []
    sign = Fraction(1)
    coeff: Fraction | None = None
    exps = [0, 0, 0, 0]
    started = False

    def flush() -> None:
        nonlocal coeff, exps, started, sign
        if not started:
            return
        c = sign * (coeff if coeff is not None else Fraction(1))
        terms.append(((exps[0], exps[1], exps[2], exps[3]), c))
        coeff = None
        exps = [0, 0, 0, 0]
        started = False
        sign = Fraction(1)

    expect_power = -1  # variable index waiting for an exponent, or -1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
            break
        pos = m.end()
        if m.lastgroup == "num":
            value = Fraction(m.group("num"))
            if expect_power >= 0:
                exps[expect_power] += int(value)
                expect_power = -1
            else:
                coeff = value if coeff is None else coeff * value
                started = True
        elif m.lastgroup == "var":
            idx = int(m.group("var")[1]) - 1
            exps[idx] += 1
            expect_power = -2  # may be followed by ^
            started = True
        else:
            op = m.group("op")
            if op == "^":
                if expect_power != -2:
                    raise ValueError("misplaced '^'")
                idx = next(i for i in range(3, -1, -1) if exps[i] > 0)
                exps[idx] -= 1
                expect_power = idx
                continue
            if op == "*":
                continue
            flush()
            sign = Fraction(1) if op == "+" else Fraction(-1)
            started = False
    flush()
    if not terms and text.strip() not in ("", "0"):
        raise ValueError(f"cannot parse polynomial {text!r}")
    return Polynomial(terms)


def _format_term(exp: Exponent, coeff: Fraction) -> str:
    factors = []
    for i, e in enumerate(exp):
        if e == 1:
            factors.append(f"x{i + 1}")
        elif e > 1:
            factors.append(f"x{i + 1}^{e}")
    c = abs(coeff)
    if not factors:
        return str(c)
    if c == 1:
        return "*".join(factors)
    return str(c) + "*" + "*".join(factors)


def format_polynomial(f: Polynomial, order: MonomialOrder | None = None) -> str:
    """Render in the plain-text syntax.

    Without an order, positive terms print before negative ones (each group
    sorted by degree then lexicographically, descending), which reproduces
    the usual presentation of binomials like ``x1^8 - x3^4*x4``.  With an
    order, terms print from greatest to least under it.
    """
    if f.is_zero():
        return "0"
    items = list(f._terms.items())
    if order is not None:
        import functools

        items.sort(key=functools.cmp_to_key(lambda s, t: order.compare(s[0], t[0])), reverse=True)
    else:
        items.sort(key=lambda it: (it[1] < 0, -degree(it[0]), tuple(-e for e in it[0])))
    out = []
    for i, (exp, coeff) in enumerate(items):
        term = _format_term(exp, coeff)
        if i == 0:
            out.append(("-" if coeff < 0 else "") + term)
        else:
            out.append(("- " if coeff < 0 else "+ ") + term)
    return " ".join(out)
