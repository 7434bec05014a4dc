"""Exact arithmetic on the numerical semigroup generated by n1 < n2 < n3 < n4.

Membership, gaps and the Frobenius number come from a boolean table filled
by dynamic programming; factorizations from bounded knapsack enumeration.
The minimal binomial generators of the toric ideal are read off the
factorization graphs: a semigroup element whose factorizations split into
several support-disjoint components contributes one joining binomial per
extra component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

Vector = tuple[int, int, int, int]


class InvalidCurveError(ValueError):
    """The four multiplicities do not define an embedding-dimension-4 curve."""


class SearchBoundExceeded(RuntimeError):
    """A semigroup search ran past its certified bound."""


def _membership_table(gens: tuple[int, ...], limit: int) -> bytearray:
    """table[s] == 1 iff s is a non-negative integer combination of gens."""
    table = bytearray(limit + 1)
    table[0] = 1
    for g in gens:
        for s in range(g, limit + 1):
            if table[s - g]:
                table[s] = 1
    return table


def _semigroup_contains(gens: tuple[int, ...], s: int) -> bool:
    if s < 0:
        return False
    return bool(_cached_table(gens, s)[s])


@lru_cache(maxsize=256)
def _cached_table(gens: tuple[int, ...], limit: int) -> bytes:
    # Round the limit up so nearby queries share one table.
    size = max(limit, 4 * max(gens))
    return bytes(_membership_table(gens, size))


@dataclass(frozen=True)
class CurveSpec:
    """The four multiplicities of a monomial curve in 4-space.

    Valid specs have gcd 1, strictly increasing entries and embedding
    dimension exactly 4 (no multiplicity lies in the semigroup generated
    by the other three).
    """

    n: Vector

    def __post_init__(self) -> None:
        n = tuple(self.n)
        if len(n) != 4:
            raise InvalidCurveError(f"need exactly 4 multiplicities, got {len(n)}")
        if any(not isinstance(v, int) or v <= 0 for v in n):
            raise InvalidCurveError(f"multiplicities must be positive integers: {n}")
        if not (n[0] < n[1] < n[2] < n[3]):
            raise InvalidCurveError(f"multiplicities must be strictly increasing: {n}")
        if math.gcd(*n) != 1:
            raise InvalidCurveError(f"gcd != 1 for {n}")
        for i in range(4):
            others = tuple(v for j, v in enumerate(n) if j != i)
            if _semigroup_contains(others, n[i]):
                raise InvalidCurveError(
                    f"n{i + 1} = {n[i]} is redundant: embedding dimension < 4"
                )
        object.__setattr__(self, "n", n)


def contains(spec: CurveSpec, s: int) -> bool:
    """True iff s is a non-negative integer combination of the multiplicities."""
    if s < 0:
        raise ValueError("semigroup membership is defined for s >= 0")
    return _semigroup_contains(spec.n, s)


@dataclass(frozen=True)
class SymmetryReport:
    frobenius: int
    gaps: tuple[int, ...]
    is_symmetric: bool


def symmetry_report(spec: CurveSpec) -> SymmetryReport:
    """Frobenius number, the full gap list, and the symmetry verdict.

    Symmetric means: x is a gap exactly when frobenius - x lies in the
    semigroup.  The scan stops after n1 consecutive members (no gaps can
    follow), with a 2*n3*n4 hard ceiling guarding invalid input.
    """
    n = spec.n
    ceiling = 2 * n[2] * n[3]
    table = _membership_table(n, ceiling)
    run = 0
    frobenius = -1
    for s in range(ceiling + 1):
        if table[s]:
            run += 1
            if run == n[0]:
                break
        else:
            run = 0
            frobenius = s
    else:
        raise SearchBoundExceeded(f"no Frobenius number below {ceiling} for {n}")
    gaps = tuple(s for s in range(frobenius + 1) if not table[s])
    symmetric = all(
        (not table[x]) == bool(table[frobenius - x]) for x in range(frobenius + 1)
    )
    return SymmetryReport(frobenius=frobenius, gaps=gaps, is_symmetric=symmetric)


def apery_set(spec: CurveSpec) -> tuple[int, ...]:
    """Apery set w.r.t. n1: the least semigroup element in each residue class
    mod n1, indexed by residue."""
    n = spec.n
    rep = symmetry_report(spec)
    top = rep.frobenius + n[0] + 1
    table = _membership_table(n, top)
    out = []
    for r in range(n[0]):
        s = r
        while s <= top and not table[s]:
            s += n[0]
        out.append(s)
    return tuple(out)


def factorizations(spec: CurveSpec, s: int) -> tuple[Vector, ...]:
    """All u >= 0 with u . n == s, in lexicographic order."""
    if s < 0:
        raise ValueError("factorizations are defined for s >= 0")
    n1, n2, n3, n4 = spec.n
    out: list[Vector] = []
    for u1 in range(s // n1 + 1):
        r1 = s - u1 * n1
        for u2 in range(r1 // n2 + 1):
            r2 = r1 - u2 * n2
            for u3 in range(r2 // n3 + 1):
                r3 = r2 - u3 * n3
                u4, rem = divmod(r3, n4)
                if rem == 0:
                    out.append((u1, u2, u3, u4))
    return tuple(out)


def minimal_power_exponents(spec: CurveSpec) -> Vector:
    """For each i, the least k >= 2 with k*n_i in the semigroup of the
    other three multiplicities."""
    out = []
    for i in range(4):
        others = tuple(v for j, v in enumerate(spec.n) if j != i)
        k = 2
        while not _semigroup_contains(others, k * spec.n[i]):
            k += 1
            if k > 4 * spec.n[3]:
                raise SearchBoundExceeded(
                    f"no power of n{i + 1} found in the semigroup of the others"
                )
        out.append(k)
    return (out[0], out[1], out[2], out[3])


def _factorization_components(fams: tuple[Vector, ...]) -> list[list[int]]:
    """Connected components of the factorization graph (edge iff the two
    factorizations share a variable in their supports)."""
    parent = list(range(len(fams)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    supports = [frozenset(k for k in range(4) if u[k] > 0) for u in fams]
    for i in range(len(fams)):
        for j in range(i + 1, len(fams)):
            if supports[i] & supports[j]:
                union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(len(fams)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: min(g))


def betti_elements(spec: CurveSpec, bound: int | None = None) -> tuple[int, ...]:
    """Semigroup elements whose factorization graph is disconnected."""
    return tuple(s for s, _ in _betti_scan(spec, bound))


def betti_generators(
    spec: CurveSpec, bound: int | None = None
) -> list[tuple[Vector, Vector]]:
    """A minimal generating set of the toric ideal, as exponent pairs (u, v)
    meaning x^u - x^v.

    One pair joins each extra component of each disconnected factorization
    graph; component representatives are the factorization of least total
    degree (ties to the lexicographically least), and the base component is
    the one with the overall least representative.

    The default search bound is 2 * max_i(a_i * n_i), where a_i is the least
    power of n_i landing in the semigroup of the others.  That covers every
    generator of the Gorenstein shapes this package targets: the four pure
    powers sit at a_i * n_i, and the mixed binomial at a_kj*n_j + a_il*n_l
    with a_kj < a_j and a_il < a_l.  Pass ``bound`` to override, subject to
    the 4*n4^2 hard ceiling.
    """
    return [pair for _, pairs in _betti_scan(spec, bound) for pair in pairs]


def _betti_scan(
    spec: CurveSpec, bound: int | None
) -> list[tuple[int, list[tuple[Vector, Vector]]]]:
    n = spec.n
    hard = 4 * n[3] * n[3]
    if bound is None:
        a = minimal_power_exponents(spec)
        bound = min(2 * max(a[i] * n[i] for i in range(4)), hard)
    if bound > hard:
        raise SearchBoundExceeded(f"Betti search bound {bound} exceeds 4*n4^2 = {hard}")
    table = _membership_table(n, bound)

    def member(s: int) -> bool:
        return s >= 0 and bool(table[s])

    out: list[tuple[int, list[tuple[Vector, Vector]]]] = []
    for s in range(1, bound + 1):
        if not table[s]:
            continue
        # The factorization graph of s has the same component count as the
        # graph on the variables i with s - n_i in S, joined when
        # s - n_i - n_j is in S.  That check is 10 table lookups, so full
        # factorization enumeration only runs on the rare disconnected s.
        verts = [i for i in range(4) if member(s - n[i])]
        parent = list(range(4))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for ii in range(len(verts)):
            for jj in range(ii + 1, len(verts)):
                i, j = verts[ii], verts[jj]
                if member(s - n[i] - n[j]):
                    parent[find(j)] = find(i)
        if len({find(i) for i in verts}) < 2:
            continue
        fams = factorizations(spec, s)
        comps = _factorization_components(fams)
        if len(comps) < 2:
            continue
        reps = sorted(
            (min((sum(fams[i]), fams[i]) for i in comp)[1] for comp in comps)
        )
        base = reps[0]
        pairs = [(other, base) for other in reps[1:]]
        out.append((s, pairs))
    return out
