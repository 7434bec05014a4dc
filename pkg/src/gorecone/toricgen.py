"""Bresinsky structure of the toric ideal: detection and construction.

A symmetric non-complete-intersection monomial curve in 4-space has its
toric ideal minimally generated by five binomials: four "diagonal" ones
x_i^{a_i} - x_j^{a_ij} x_k^{a_ik} covering each variable once, and one
mixed binomial reusing four of the off-diagonal exponents.  Under
n1 < n2 < n3 < n4 the right-hand-side patterns land in exactly one of six
shapes (cases 1a, 1b, 2a, 2b, 3a, 3b).

Construction goes the other way: Bresinsky's closed formulas produce the
four multiplicities from a case-1a exponent table; sorting the result
relabels the structure into one of the six cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

from .polycore import Polynomial, support
from .semigroup import (
    CurveSpec,
    InvalidCurveError,
    betti_generators,
    minimal_power_exponents,
    symmetry_report,
)

Vector = tuple[int, int, int, int]


class InternalConsistencyError(AssertionError):
    """Cross-checks inside structure detection disagreed; indicates a bug,
    never bad user input."""


# Right-hand-side variable pairs of the diagonal binomials f1..f4, and the
# shape ((i, j), (k, l)) of the mixed binomial
#     f5 = x_i^{a_ki} x_j^{a_lj} - x_k^{a_jk} x_l^{a_il}
# for each of the six cases.
CASE_PATTERNS: dict[str, dict] = {
    "1a": {"diag": {1: (3, 4), 2: (1, 4), 3: (1, 2), 4: (2, 3)}, "mixed": ((1, 3), (2, 4))},
    "1b": {"diag": {1: (3, 4), 2: (1, 3), 3: (2, 4), 4: (1, 2)}, "mixed": ((1, 4), (2, 3))},
    "2a": {"diag": {1: (2, 3), 2: (3, 4), 3: (1, 4), 4: (1, 2)}, "mixed": ((2, 4), (1, 3))},
    "2b": {"diag": {1: (2, 3), 2: (1, 4), 3: (2, 4), 4: (1, 3)}, "mixed": ((1, 2), (4, 3))},
    "3a": {"diag": {1: (2, 4), 2: (1, 3), 3: (1, 4), 4: (2, 3)}, "mixed": ((1, 2), (3, 4))},
    "3b": {"diag": {1: (2, 4), 2: (3, 4), 3: (1, 2), 4: (1, 3)}, "mixed": ((2, 3), (1, 4))},
}


def mixed_exponent_names(case: str) -> tuple[tuple[int, int], ...]:
    """The four a_ij symbols appearing in the mixed binomial, in the order
    (exponent of x_i, of x_j, of x_k, of x_l) of the pattern."""
    (i, j), (k, l) = CASE_PATTERNS[case]["mixed"]
    return ((k, i), (l, j), (j, k), (i, l))


@dataclass(frozen=True)
class BresinskyData:
    """Extracted structure: case label, diagonal exponents a_1..a_4, the
    housed off-diagonal exponents a_ij (exponent of x_j in f_i), and the
    five binomials in canonical presentation."""

    case_label: str
    spec: CurveSpec
    a: Vector
    aij: Mapping[tuple[int, int], int]
    binomials: tuple[Polynomial, ...]

    def symbols(self) -> dict[str, int]:
        table = {f"a{i + 1}": self.a[i] for i in range(4)}
        for (i, j), value in self.aij.items():
            table[f"a{i}{j}"] = value
        return table

    def exponent(self, name: str) -> int:
        return self.symbols()[name]


@dataclass(frozen=True)
class StructureRejection:
    """Why a spec is not a Gorenstein non-complete-intersection curve."""

    reason: str  # "not_symmetric" | "complete_intersection" | "shape_mismatch"
    detail: str


@dataclass(frozen=True)
class Instantiation:
    spec: CurveSpec
    permutation: Vector  # permutation[old_index] = new variable position (1-based)
    data: BresinskyData
    case1a_a: Vector
    case1a_aij: Mapping[tuple[int, int], int]


@dataclass(frozen=True)
class Rejected:
    reason: str
    detail: str


def _diag_polynomial(i: int, a_i: int, rhs: dict[int, int]) -> Polynomial:
    pos = tuple(a_i if v == i else 0 for v in range(1, 5))
    neg = tuple(rhs.get(v, 0) for v in range(1, 5))
    return Polynomial.binomial(pos, neg)


def _mixed_polynomial(case: str, aij: Mapping[tuple[int, int], int]) -> Polynomial:
    (i, j), (k, l) = CASE_PATTERNS[case]["mixed"]
    names = mixed_exponent_names(case)
    pos = {i: aij[names[0]], j: aij[names[1]]}
    neg = {k: aij[names[2]], l: aij[names[3]]}
    return Polynomial.binomial(
        tuple(pos.get(v, 0) for v in range(1, 5)),
        tuple(neg.get(v, 0) for v in range(1, 5)),
    )


def _build_data(case: str, spec: CurveSpec, a: Vector, aij: dict[tuple[int, int], int]) -> BresinskyData:
    diag = CASE_PATTERNS[case]["diag"]
    binomials = []
    for i in range(1, 5):
        j, k = diag[i]
        binomials.append(_diag_polynomial(i, a[i - 1], {j: aij[(i, j)], k: aij[(i, k)]}))
    binomials.append(_mixed_polynomial(case, aij))
    data = BresinskyData(case, spec, a, dict(sorted(aij.items())), tuple(binomials))
    _verify_data(data)
    return data


def _verify_data(data: BresinskyData) -> None:
    n = data.spec.n
    for f in data.binomials:
        if f.evaluate_powers(n):
            raise InternalConsistencyError(f"{f} does not vanish on the curve")
    if not gluing_check(data):
        raise InternalConsistencyError(f"gluing sums fail for {data.case_label}: {data.aij}")
    for i in range(4):
        if data.a[i] < 2:
            raise InternalConsistencyError(f"diagonal exponent a{i + 1} = {data.a[i]} < 2")
    for (i, j), v in data.aij.items():
        if not 0 < v < data.a[j - 1]:
            raise InternalConsistencyError(f"a{i}{j} = {v} outside (0, a{j})")


def gluing_check(data: BresinskyData) -> bool:
    """Each variable occurs on the right-hand sides of exactly two diagonal
    binomials; its two exponents there must sum to its own diagonal
    exponent."""
    diag = CASE_PATTERNS[data.case_label]["diag"]
    for j in range(1, 5):
        owners = [i for i in range(1, 5) if j in diag[i]]
        if len(owners) != 2:
            return False
        if data.a[j - 1] != sum(data.aij[(i, j)] for i in owners):
            return False
    return True


def detect_structure(spec: CurveSpec) -> Union[BresinskyData, StructureRejection]:
    """Classify the curve via its minimal binomial generators.

    Symmetric five-generator curves match one of the six case patterns and
    come back as BresinskyData; everything else is a StructureRejection
    with a reason.  Internal mismatches (a symmetric five-generator curve
    failing the shape checks) raise, because theory says they cannot
    happen."""
    sym = symmetry_report(spec)
    if not sym.is_symmetric:
        return StructureRejection("not_symmetric", f"frobenius {sym.frobenius}")
    pairs = betti_generators(spec)
    if len(pairs) == 3:
        return StructureRejection(
            "complete_intersection", "toric ideal minimally generated by 3 binomials"
        )
    if len(pairs) != 5:
        return StructureRejection(
            "shape_mismatch", f"{len(pairs)} minimal generators (expected 3 or 5)"
        )

    diag_info: dict[int, tuple[int, dict[int, int]]] = {}
    mixed: tuple[Vector, Vector] | None = None
    for u, v in pairs:
        su, sv = support(u), support(v)
        if len(su) == 1 and len(sv) == 2 and su[0] not in sv:
            i = su[0]
            pure, rhs = u, v
        elif len(sv) == 1 and len(su) == 2 and sv[0] not in su:
            i = sv[0]
            pure, rhs = v, u
        elif len(su) == 2 and len(sv) == 2 and not set(su) & set(sv):
            if mixed is not None:
                return StructureRejection("shape_mismatch", "two mixed binomials")
            mixed = (u, v)
            continue
        else:
            return StructureRejection("shape_mismatch", f"unexpected binomial {u} - {v}")
        if i in diag_info:
            return StructureRejection("shape_mismatch", f"two pure powers of x{i}")
        diag_info[i] = (pure[i - 1], {w: rhs[w - 1] for w in support(rhs)})
    if len(diag_info) != 4 or mixed is None:
        return StructureRejection("shape_mismatch", "diagonal binomials do not cover all variables")

    diag_pairs = {i: tuple(sorted(diag_info[i][1])) for i in range(1, 5)}
    matches = [
        case
        for case, pattern in CASE_PATTERNS.items()
        if {i: tuple(sorted(p)) for i, p in pattern["diag"].items()} == diag_pairs
    ]
    if not matches:
        return StructureRejection("shape_mismatch", f"no case pattern fits {diag_pairs}")
    if len(matches) > 1:
        raise InternalConsistencyError(f"ambiguous case patterns {matches} for {diag_pairs}")
    case = matches[0]

    a = tuple(diag_info[i][0] for i in range(1, 5))
    independent = minimal_power_exponents(spec)
    if a != independent:
        raise InternalConsistencyError(
            f"diagonal exponents {a} disagree with minimal powers {independent}"
        )
    aij = {
        (i, j): diag_info[i][1][j] for i in range(1, 5) for j in diag_info[i][1]
    }

    # orient and verify the mixed binomial against the case pattern
    (pi, pj), (pk, pl) = CASE_PATTERNS[case]["mixed"]
    names = mixed_exponent_names(case)
    u, v = mixed
    if set(support(u)) == {pk, pl}:
        u, v = v, u
    if set(support(u)) != {pi, pj} or set(support(v)) != {pk, pl}:
        raise InternalConsistencyError(f"mixed binomial supports {mixed} do not fit case {case}")
    expected = {
        pi: aij[names[0]],
        pj: aij[names[1]],
        pk: aij[names[2]],
        pl: aij[names[3]],
    }
    actual = {w: u[w - 1] for w in (pi, pj)} | {w: v[w - 1] for w in (pk, pl)}
    if expected != actual:
        raise InternalConsistencyError(
            f"mixed binomial exponents {actual} differ from diagonals {expected} in case {case}"
        )
    return _build_data(case, spec, (a[0], a[1], a[2], a[3]), aij)


# -- case-1a construction -------------------------------------------------------

_CASE1A_SUM_OWNERS = {1: (21, 31), 2: (32, 42), 3: (13, 43), 4: (14, 24)}


def case1a_multiplicities(a: Vector, aij: Mapping[tuple[int, int], int]) -> Vector:
    """Bresinsky's closed formulas for the multiplicities of a case-1a
    exponent table."""
    g = {f"a{i}{j}": aij[(i, j)] for (i, j) in aij}
    n1 = a[1] * a[2] * g["a14"] + g["a32"] * g["a13"] * g["a24"]
    n2 = a[2] * a[3] * g["a21"] + g["a31"] * g["a43"] * g["a24"]
    n3 = a[0] * a[3] * g["a32"] + g["a14"] * g["a42"] * g["a31"]
    n4 = a[0] * a[1] * g["a43"] + g["a42"] * g["a21"] * g["a13"]
    return (n1, n2, n3, n4)


def validate_case1a_exponents(a: Vector, aij: Mapping[tuple[int, int], int]) -> None:
    keys = {(2, 1), (3, 1), (3, 2), (4, 2), (1, 3), (4, 3), (1, 4), (2, 4)}
    if set(aij) != keys:
        raise ValueError(f"case-1a table must house exactly {sorted(keys)}")
    if any(v < 2 for v in a):
        raise ValueError(f"diagonal exponents must exceed 1: {a}")
    for (i, j), v in aij.items():
        if not 0 < v < a[j - 1]:
            raise ValueError(f"a{i}{j} = {v} outside (0, a{j} = {a[j - 1]})")
    for j, (p, q) in _CASE1A_SUM_OWNERS.items():
        total = aij[(p // 10, p % 10)] + aij[(q // 10, q % 10)]
        if a[j - 1] != total:
            raise ValueError(f"a{j} = {a[j - 1]} != a{p} + a{q} = {total}")


def instantiate_case1a(
    a: Vector, aij: Mapping[tuple[int, int], int]
) -> Union[Instantiation, Rejected]:
    """Build the curve for a case-1a exponent table.

    Accepts iff the four multiplicities are coprime, pairwise distinct and
    none is redundant; the returned structure is relabeled to the sorted
    order, with the applied permutation recorded."""
    validate_case1a_exponents(a, aij)
    n_raw = case1a_multiplicities(a, aij)
    if math.gcd(*n_raw) != 1:
        return Rejected("gcd", f"gcd{n_raw} = {math.gcd(*n_raw)}")
    if len(set(n_raw)) != 4:
        return Rejected("duplicate_multiplicities", f"{n_raw}")
    order = sorted(range(4), key=lambda i: n_raw[i])
    perm = tuple(order.index(i) + 1 for i in range(4))  # old index -> new position
    try:
        spec = CurveSpec(tuple(sorted(n_raw)))
    except InvalidCurveError as exc:
        return Rejected("embedding_dimension", str(exc))
    case, new_a, new_aij = relabel_case1a(a, aij, perm)
    data = _build_data(case, spec, new_a, new_aij)
    return Instantiation(spec, perm, data, tuple(a), dict(sorted(aij.items())))


def relabel_case1a(
    a: Vector, aij: Mapping[tuple[int, int], int], perm: Vector
) -> tuple[str, Vector, dict[tuple[int, int], int]]:
    """Rename variables of a case-1a structure by old->new permutation and
    identify which of the six cases the renamed structure matches."""
    new_a = [0, 0, 0, 0]
    for old in range(1, 5):
        new_a[perm[old - 1] - 1] = a[old - 1]
    new_aij = {(perm[i - 1], perm[j - 1]): v for (i, j), v in aij.items()}
    diag_map = {}
    for old_i, (j, k) in CASE_PATTERNS["1a"]["diag"].items():
        diag_map[perm[old_i - 1]] = tuple(sorted((perm[j - 1], perm[k - 1])))
    matches = [
        case
        for case, pattern in CASE_PATTERNS.items()
        if {i: tuple(sorted(p)) for i, p in pattern["diag"].items()} == diag_map
    ]
    if len(matches) != 1:
        raise InternalConsistencyError(f"relabeled diagonal map {diag_map} matches {matches}")
    return matches[0], (new_a[0], new_a[1], new_a[2], new_a[3]), new_aij
