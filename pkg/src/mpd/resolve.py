"""Minimization, kernels and minimal free resolutions (N <= 2).

All reductions here are sparse column operations over F_p.  Columns are dicts
``row -> value``; over F_2 the hot loops are the same code with p = 2.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .complex import FreeComplex, dagger, shift_homological, truncate
from .core import GradedMatrix, MPDError, ValidationError, grade_leq, inv_mod, is_finite


class UnsupportedParameterError(MPDError):
    pass


class LengthError(MPDError):
    pass


@dataclass(frozen=True)
class Presentation:
    matrix: GradedMatrix  # rows: generators, columns: relations

    @property
    def generators(self) -> tuple:
        return self.matrix.row_grades

    @property
    def relations(self) -> tuple:
        return self.matrix.col_grades


@dataclass(frozen=True)
class BettiTable:
    N: int
    table: dict  # d -> sorted tuple of grades (with repetition)

    def __post_init__(self):
        t = {int(d): tuple(sorted(tuple(g) for g in gs)) for d, gs in self.table.items()}
        object.__setattr__(self, "table", {d: gs for d, gs in sorted(t.items()) if gs})

    @classmethod
    def of(cls, G: FreeComplex) -> "BettiTable":
        return cls(G.N, {d: G.gens_at(d) for d in G.degrees})

    def __getitem__(self, d: int) -> tuple:
        return self.table.get(d, ())

    def __eq__(self, other) -> bool:
        return isinstance(other, BettiTable) and self.N == other.N and self.table == other.table

    def __hash__(self):
        return hash((self.N, tuple(self.table.items())))

    def total(self) -> int:
        return sum(len(v) for v in self.table.values())

    def dual(self) -> "BettiTable":
        """The table of the pointwise dual: d -> N - d, g -> 1 - g."""
        return BettiTable(self.N, {self.N - d: [tuple(1 - x for x in g) for g in gs] for d, gs in self.table.items()})


def _require_small_n(N: int) -> None:
    if N > 2:
        raise UnsupportedParameterError(f"resolutions are only supported for N <= 2, got N = {N}")


# ---------------------------------------------------------------- minimize


def minimize(C: FreeComplex) -> FreeComplex:
    """Cancel every pair of generators joined by an invertible entry of equal
    grades (a contractible ball summand) until all differentials are minimal.

    Degrees are processed in ascending order; within a degree the eligible
    entry with the smallest (row, column) original index is taken first.
    """
    p = C.p
    lo, hi = C.lo, C.hi
    grades = {d: C.gens_at(d) for d in range(lo - 1, hi + 2)}
    alive = {d: set(range(len(grades[d]))) for d in grades}
    cols = {d: {j: dict(c) for j, c in enumerate(C.diff(d).columns)} for d in range(lo + 1, hi + 1)}
    rows = {}
    for d, cd in cols.items():
        r: dict = {}
        for j, col in cd.items():
            for i in col:
                r.setdefault(i, set()).add(j)
        rows[d] = r

    for d in range(lo + 1, hi + 1):
        cd, rd = cols[d], rows[d]
        rg, cg = grades[d - 1], grades[d]
        heap = [(i, j) for j, col in cd.items() for i in col if rg[i] == cg[j]]
        heapq.heapify(heap)
        while heap:
            i, j = heapq.heappop(heap)
            if j not in alive[d] or i not in alive[d - 1]:
                continue
            colj = cd.get(j)
            if colj is None or i not in colj:
                continue
            a_inv = inv_mod(colj[i], p)
            # Schur complement on the other columns that meet row i
            for k in list(rd.get(i, ())):
                if k == j:
                    continue
                colk = cd[k]
                c = colk[i] * a_inv % p
                for r, v in colj.items():
                    y = (colk.get(r, 0) - c * v) % p
                    if y:
                        if r not in colk:
                            rd.setdefault(r, set()).add(k)
                            if rg[r] == cg[k]:
                                heapq.heappush(heap, (r, k))
                        colk[r] = y
                    elif r in colk:
                        del colk[r]
                        rd[r].discard(k)
            # drop column j and row i of d_d
            for r in colj:
                rd[r].discard(j)
            del cd[j]
            for k in rd.pop(i, ()):
                cd[k].pop(i, None)
            alive[d].discard(j)
            alive[d - 1].discard(i)
            # row j of d_{d+1} and column i of d_{d-1} vanish with the ball
            if d + 1 in cols:
                for k in rows[d + 1].pop(j, ()):
                    cols[d + 1][k].pop(j, None)
            if d - 1 in cols and i in cols[d - 1]:
                for r in cols[d - 1].pop(i):
                    rows[d - 1][r].discard(i)

    keep = {d: sorted(alive[d]) for d in range(lo, hi + 1)}
    gens = [tuple(grades[d][i] for i in keep[d]) for d in range(lo, hi + 1)]
    diffs = {}
    for d in range(lo + 1, hi + 1):
        rpos = {i: k for k, i in enumerate(keep[d - 1])}
        out = []
        for j in keep[d]:
            col = cols[d][j]
            for i in col:
                if i not in rpos:
                    raise ValidationError(f"minimize: stale row {i} in degree {d}; input is not a complex")
            out.append(tuple(sorted((rpos[i], v) for i, v in col.items())))
        diffs[d] = out
    return FreeComplex.from_maps(C.N, p, lo, gens, diffs)


# ---------------------------------------------------------------- kernels


def _reduce_into(v: dict, slave: dict, pivots: dict, p: int) -> None:
    """Reduce sparse column ``v`` (and its slave) against ``pivots`` in place.

    ``pivots`` maps a pivot row to (column, slave) with column[row] == 1.
    """
    while v:
        low = max(v)
        hit = pivots.get(low)
        if hit is None:
            return
        pc, ps = hit
        c = v[low]
        for r, x in pc.items():
            y = (v.get(r, 0) - c * x) % p
            if y:
                v[r] = y
            else:
                v.pop(r, None)
        for r, x in ps.items():
            y = (slave.get(r, 0) - c * x) % p
            if y:
                slave[r] = y
            else:
                slave.pop(r, None)


def _kernel(M: GradedMatrix):
    """Free basis of ker M as list of (grade, leading column, vector dict)."""
    p = M.p
    cg = M.col_grades
    n = len(cg)
    if n == 0:
        return []
    N = len(cg[0])
    _require_small_n(N)
    order = sorted(range(n), key=lambda j: (cg[j], j))
    if N == 1:
        lines = [None]
    else:
        lines = sorted({g[1] for g in cg})
    done = set()
    found = []
    for y in lines:
        pivots: dict = {}
        for j in order:
            if j in done or (y is not None and cg[j][1] > y):
                continue
            v = dict(M.columns[j])
            slave = {j: 1}
            _reduce_into(v, slave, pivots, p)
            if v:
                c = inv_mod(v[max(v)], p)
                pivots[max(v)] = (
                    {r: x * c % p for r, x in v.items()},
                    {r: x * c % p for r, x in slave.items()},
                )
            else:
                done.add(j)
                grade = cg[j] if y is None else (cg[j][0], y)
                found.append((grade, j, slave))
    found.sort(key=lambda t: t[1])
    return found


def kernel_basis(M: GradedMatrix) -> GradedMatrix:
    """A graded matrix whose columns freely generate ker M (N <= 2)."""
    N = M.N
    if N is not None:
        _require_small_n(N)
    found = _kernel(M)
    return GradedMatrix(
        M.col_grades,
        tuple(g for g, _, _ in found),
        tuple(tuple(sorted(v.items())) for _, _, v in found),
        M.p,
    )


def _express(K: GradedMatrix, B: GradedMatrix) -> GradedMatrix:
    """Coordinates of the columns of B in the kernel basis K (rows of the result
    index K's columns).  Every column of K has a distinct leading row under the
    (grade, index) order and a coefficient 1 there."""
    p = K.p
    rg = K.row_grades
    key = {i: (g, i) for i, g in enumerate(rg)}
    lead = {}
    for k, col in enumerate(K.columns):
        top = max((i for i, _ in col), key=lambda i: key[i])
        lead[top] = (k, dict(col))
    out = []
    for j, col in enumerate(B.columns):
        v = dict(col)
        coeffs = {}
        while v:
            top = max(v, key=lambda i: key[i])
            hit = lead.get(top)
            if hit is None:
                raise ValidationError(f"boundary column {j} is not a cycle: d^2 != 0")
            k, kv = hit
            if not grade_leq(K.col_grades[k], B.col_grades[j]):
                raise ValidationError(
                    f"boundary column {j} at {B.col_grades[j]} needs kernel generator {k} at {K.col_grades[k]}"
                )
            c = v[top] * inv_mod(kv[top], p) % p
            coeffs[k] = (coeffs.get(k, 0) + c) % p
            for r, x in kv.items():
                y = (v.get(r, 0) - c * x) % p
                if y:
                    v[r] = y
                else:
                    v.pop(r, None)
        out.append(tuple(sorted((k, c) for k, c in coeffs.items() if c)))
    return GradedMatrix(K.col_grades, B.col_grades, tuple(out), p)


# ---------------------------------------------------------------- resolutions


def _resolve(P0: GradedMatrix, N: int) -> FreeComplex:
    """Minimal free resolution of coker P0 on degrees [0, N]."""
    p = P0.p
    K = kernel_basis(P0) if P0.shape[1] else GradedMatrix.zero(P0.col_grades, (), p)
    G = FreeComplex.from_maps(N, p, 0, [P0.row_grades, P0.col_grades, K.col_grades], {1: P0, 2: K})
    G = minimize(G)
    if N == 1:
        if G.gens_at(2):
            raise LengthError("a one-parameter resolution came out with a nonzero second syzygy")
        G = truncate(G, 0, 1)
    return G


def _presentation_matrix(C: FreeComplex, d: int) -> GradedMatrix:
    """Unminimized presentation of H_d(C) by cycles and boundaries."""
    # only d-1, d, d+1 matter for H_d; cancelling balls first keeps the kernel small
    T = minimize(truncate(C, d - 1, d + 1))
    K = kernel_basis(T.diff(d))
    return _express(K, T.diff(d + 1))


def minimal_presentation(C: FreeComplex, d: int) -> Presentation:
    _require_small_n(C.N)
    G = _resolve(_presentation_matrix(C, d), C.N)
    return Presentation(G.diff(1))


def free_resolution(P: Presentation) -> FreeComplex:
    M = P.matrix
    N = M.N
    if N is None:
        raise UnsupportedParameterError("cannot infer N from an empty presentation; use mfr_direct")
    _require_small_n(N)
    return _resolve(M, N)


def mfr_direct(C: FreeComplex, d: int) -> FreeComplex:
    """Minimal free resolution of H_d(C): presentation, then one kernel step."""
    _require_small_n(C.N)
    return _resolve(_presentation_matrix(C, d), C.N)


def resolution_length(G: FreeComplex) -> float:
    nz = [d for d in G.degrees if G.gens_at(d)]
    return max(nz) if nz else -math.inf


def dual_resolution(G: FreeComplex) -> FreeComplex:
    """G[N]^dagger read as a chain complex: degree k holds F(1 - g) for g in G_{N-k}."""
    N = G.N
    for g in G.all_grades():
        if not is_finite(g):
            raise LengthError(f"infinite grade {g} in a resolution")
    if G.lo < 0 or resolution_length(G) != N:
        raise LengthError(
            f"dual of a resolution of length {resolution_length(G)} is not a resolution; length must be exactly N = {N}"
        )
    G = truncate(G, 0, N)
    return shift_homological(dagger(G), -N)


def mfr_cohomological(C: FreeComplex, d: int) -> FreeComplex:
    """Minimal free resolution of H_d(C) through the dual of the cone."""
    from .cone import cone_complex, default_zeta, restrict

    N = C.N
    _require_small_n(N)
    if C.is_zero():
        return FreeComplex.empty(N, C.p, 0, N)
    zeta = default_zeta(C)
    D = dagger(cone_complex(C, zeta))
    G = mfr_direct(D, -(d + N))
    if G.is_zero():
        return FreeComplex.empty(N, C.p, 0, N)
    return restrict(dual_resolution(G), zeta)


def betti_table(G: FreeComplex) -> BettiTable:
    return BettiTable.of(G)
