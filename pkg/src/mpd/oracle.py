"""Brute-force pointwise linear algebra on finite grids.

Everything here evaluates a complex of free modules grade by grade and does
plain linear algebra over F_p.  It is deliberately independent of the sparse
reduction code in :mod:`mpd.resolve`, which it is used to check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .complex import FreeComplex, Multifiltration, chain_complex, koszul_sign, subsets
from .core import DimensionError, MPDError, grade_leq, inv_mod


class OracleError(MPDError):
    pass


# ---------------------------------------------------------------- dense F_p algebra


def rref(A: np.ndarray, p: int):
    """Reduced row echelon form over F_p. Returns (R, pivot_columns)."""
    R = np.array(A, dtype=np.int64) % p
    m, n = R.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = R[r] * inv_mod(int(R[r, c]), p) % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            R[rows] = (R[rows] - np.outer(col[rows], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank_mod(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning {x : Ax = 0}, in reduced form."""
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    R, piv = rref(A, p) if m else (np.zeros((0, n), dtype=np.int64), [])
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        out[f, k] = 1
        for r, c in enumerate(piv):
            out[c, k] = (-R[r, f]) % p
    return out


def solve(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """X with AX = B for A of full column rank; raises if inconsistent."""
    m, n = A.shape
    k = B.shape[1]
    if n == 0:
        if np.any(B % p):
            raise OracleError("inconsistent system")
        return np.zeros((0, k), dtype=np.int64)
    R, piv = rref(np.hstack([A, B]), p)
    if len([c for c in piv if c < n]) != n:
        raise OracleError("coefficient matrix is not of full column rank")
    if any(c >= n for c in piv):
        raise OracleError("inconsistent system")
    return R[:n, n:] % p


def column_basis(A: np.ndarray, p: int) -> np.ndarray:
    """A basis of the column space of A, as columns of reduced form."""
    if A.shape[1] == 0 or A.shape[0] == 0:
        return np.zeros((A.shape[0], 0), dtype=np.int64)
    R, piv = rref(A.T, p)
    return R[: len(piv)].T.copy()


# ---------------------------------------------------------------- incremental ranks


class _Echelon:
    """Incrementally maintained echelon basis; vectors are sparse dicts (or ints over F_2)."""

    def __init__(self, p: int):
        self.p = p
        self.basis: dict = {}

    def add(self, col) -> bool:
        p = self.p
        if p == 2:
            v = 0
            for i, _ in col:
                v ^= 1 << i
            while v:
                h = v.bit_length() - 1
                b = self.basis.get(h)
                if b is None:
                    self.basis[h] = v
                    return True
                v ^= b
            return False
        v = dict(col)
        while v:
            h = max(v)
            b = self.basis.get(h)
            if b is None:
                c = inv_mod(v[h], p)
                self.basis[h] = {i: x * c % p for i, x in v.items()}
                return True
            c = v[h]
            for i, x in b.items():
                y = (v.get(i, 0) - c * x) % p
                if y:
                    v[i] = y
                else:
                    v.pop(i, None)
        return False


class _RankTable:
    """rank of (M restricted to columns with grade <= z) for every z, on the
    compressed grid of column coordinate values.  Valid matrices only: all rows
    hit by such columns have grade <= z as well."""

    def __init__(self, M):
        self.M = M
        N = M.N or 1
        self.N = N
        grades = M.col_grades
        self.axes = [sorted({g[i] for g in grades}) for i in range(N)]
        self.table: dict = {}
        if not grades:
            return
        last = self.axes[-1]
        order = sorted(range(len(grades)), key=lambda j: (grades[j][-1], j))
        cache: dict = {}
        for prefix in product(*[range(len(a)) for a in self.axes[:-1]]):
            bound = [self.axes[i][k] for i, k in enumerate(prefix)]
            eligible = tuple(j for j in order if all(grades[j][i] <= bound[i] for i in range(N - 1)))
            ranks = cache.get(eligible)
            if ranks is None:
                ech = _Echelon(M.p)
                r = 0
                ranks = []
                pos = 0
                for y in last:
                    while pos < len(eligible) and grades[eligible[pos]][-1] <= y:
                        if ech.add(M.columns[eligible[pos]]):
                            r += 1
                        pos += 1
                    ranks.append(r)
                cache[eligible] = ranks
            for k, r in enumerate(ranks):
                self.table[prefix + (k,)] = r

    def rank_at(self, z) -> int:
        key = []
        for i, a in enumerate(self.axes):
            k = _floor_index(a, z[i])
            if k < 0:
                return 0
            key.append(k)
        return self.table.get(tuple(key), 0)


def _floor_index(values: list, x) -> int:
    lo, hi = 0, len(values)
    while lo < hi:
        mid = (lo + hi) // 2
        if values[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo - 1


def _count_leq(grades, z) -> int:
    return sum(1 for g in grades if all(a <= b for a, b in zip(g, z)))


# ---------------------------------------------------------------- value types


@dataclass(frozen=True)
class GridBox:
    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo, hi = tuple(self.lo), tuple(self.hi)
        if len(lo) != len(hi) or not lo:
            raise DimensionError(f"box corners {lo}, {hi} differ in length")
        if not grade_leq(lo, hi):
            raise DimensionError(f"empty box: {lo} is not <= {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def N(self) -> int:
        return len(self.lo)

    def points(self):
        """All grades in the box, lexicographic order."""
        return product(*[range(a, b + 1) for a, b in zip(self.lo, self.hi)])

    def __contains__(self, z) -> bool:
        return len(z) == self.N and grade_leq(self.lo, z) and grade_leq(z, self.hi)

    def __len__(self) -> int:
        return math.prod(b - a + 1 for a, b in zip(self.lo, self.hi))

    def negated(self) -> "GridBox":
        return GridBox(tuple(-x for x in self.hi), tuple(-x for x in self.lo))


@dataclass(frozen=True)
class HilbertFunction:
    box: GridBox
    values: dict  # (d, z) -> dim

    def at(self, d: int, z) -> int:
        return self.values.get((d, tuple(z)), 0)

    @property
    def degrees(self) -> list:
        return sorted({d for d, _ in self.values})

    def support(self, d: int | None = None) -> list:
        return sorted((k for k, v in self.values.items() if v and (d is None or k[0] == d)))


@dataclass
class PointwiseModule:
    box: GridBox
    dims: dict  # z -> int
    step_maps: dict  # (z, i) -> ndarray dims[z + e_i] x dims[z]; i is 0-based
    p: int = 2

    def step(self, z, i: int) -> np.ndarray:
        z = tuple(z)
        M = self.step_maps.get((z, i))
        if M is None:
            raise OracleError(f"no structure map at {z} along axis {i + 1}")
        return M

    def commuting_defects(self) -> list:
        bad = []
        N = self.box.N
        for (z, i) in self.step_maps:
            for j in range(N):
                if j == i:
                    continue
                zi = _plus(z, i)
                zj = _plus(z, j)
                if (zi, j) not in self.step_maps or (zj, i) not in self.step_maps:
                    continue
                a = self.step_maps[(zi, j)] @ self.step_maps[(z, i)] % self.p
                b = self.step_maps[(zj, i)] @ self.step_maps[(z, j)] % self.p
                if not np.array_equal(a, b):
                    bad.append((z, i, j))
        return bad

    def check(self) -> "PointwiseModule":
        bad = self.commuting_defects()
        if bad:
            z, i, j = bad[0]
            raise OracleError(f"structure maps do not commute at {z}, axes {i + 1} and {j + 1}")
        return self


def _plus(z, i, k: int = 1) -> tuple:
    z = list(z)
    z[i] += k
    return tuple(z)


@dataclass(frozen=True)
class Barcode:
    degree: int
    intervals: tuple = field(default=())  # sorted (birth, death); death may be math.inf

    def __post_init__(self):
        ivs = tuple(sorted((b, d) for b, d in self.intervals))
        for b, d in ivs:
            if not b < d:
                raise DimensionError(f"interval [{b}, {d}) is empty")
        object.__setattr__(self, "intervals", ivs)

    def bounded(self) -> list:
        return [iv for iv in self.intervals if iv[1] != math.inf]

    def unbounded(self) -> list:
        return [iv for iv in self.intervals if iv[1] == math.inf]


# ---------------------------------------------------------------- Hilbert functions


def hilbert_homology(C: FreeComplex, box: GridBox, d: int) -> HilbertFunction:
    """dim H_d(C)_z for every z in ``box``."""
    return hilbert_homology_all(C, box, [d])


def hilbert_homology_all(C: FreeComplex, box: GridBox, degrees: Sequence[int] | None = None) -> HilbertFunction:
    if box.N != C.N:
        raise DimensionError(f"box has {box.N} coordinates, complex has N={C.N}")
    if degrees is None:
        degrees = list(C.degrees)
    tables: dict = {}

    def table(e):
        if e not in tables:
            tables[e] = _RankTable(C.diff(e))
        return tables[e]

    values = {}
    pts = list(box.points())
    for d in degrees:
        gens = C.gens_at(d)
        if not gens:
            for z in pts:
                values[(d, z)] = 0
            continue
        t0, t1 = table(d), table(d + 1)
        for z in pts:
            values[(d, z)] = _count_leq(gens, z) - t0.rank_at(z) - t1.rank_at(z)
    return HilbertFunction(box, values)


def default_box(C: FreeComplex, zeta=None) -> GridBox:
    """[meet of generator grades - 1, zeta + 2] (zeta defaults to the join)."""
    grades = C.all_grades()
    if not grades:
        return GridBox((0,) * C.N, (0,) * C.N)
    lo = tuple(min(c) - 1 for c in zip(*grades))
    if zeta is None:
        zeta = tuple(max(c) for c in zip(*grades))
    hi = tuple(x + 2 for x in zeta)
    return GridBox(lo, tuple(max(a, b) for a, b in zip(lo, hi)))


# ---------------------------------------------------------------- pointwise homology


def _restricted(C: FreeComplex, d: int, z) -> list:
    return [i for i, g in enumerate(C.gens_at(d)) if all(a <= b for a, b in zip(g, z))]


def _dense_block(M, rows: list, cols: list) -> np.ndarray:
    rpos = {i: k for k, i in enumerate(rows)}
    A = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for k, j in enumerate(cols):
        for i, v in M.columns[j]:
            A[rpos[i], k] = v
    return A


def _homology_at(C: FreeComplex, d: int, z):
    p = C.p
    idx = _restricted(C, d, z)
    n = len(idx)
    if n == 0:
        return idx, np.zeros((0, 0), dtype=np.int64), np.zeros((0, 0), dtype=np.int64)
    A = _dense_block(C.diff(d), _restricted(C, d - 1, z), idx)
    Bm = _dense_block(C.diff(d + 1), idx, _restricted(C, d + 1, z))
    Z = nullspace(A, p) if A.shape[0] else np.eye(n, dtype=np.int64)
    B = column_basis(Bm, p)
    # extend the boundary basis by cycles, greedily in the order of Z's columns
    nb = B.shape[1]
    if Z.shape[1] == 0:
        picked = []
    else:
        _, piv = rref(np.hstack([B, Z]), p)
        picked = [c - nb for c in piv if c >= nb]
    H = Z[:, picked] if picked else np.zeros((n, 0), dtype=np.int64)
    return idx, B, H


def homology_functor(C: FreeComplex, box: GridBox, d: int) -> PointwiseModule:
    """H_d(C) on ``box`` with a chosen basis at every grade and the induced step maps."""
    if box.N != C.N:
        raise DimensionError(f"box has {box.N} coordinates, complex has N={C.N}")
    p = C.p
    data = {z: _homology_at(C, d, z) for z in box.points()}
    dims = {z: v[2].shape[1] for z, v in data.items()}
    steps = {}
    for z, (idx, _, H) in data.items():
        for i in range(C.N):
            w = _plus(z, i)
            if w not in data:
                continue
            idx2, B2, H2 = data[w]
            if dims[z] == 0 or dims[w] == 0:
                steps[(z, i)] = np.zeros((dims[w], dims[z]), dtype=np.int64)
                continue
            pos = {g: k for k, g in enumerate(idx2)}
            emb = np.zeros((len(idx2), H.shape[1]), dtype=np.int64)
            for k, g in enumerate(idx):
                emb[pos[g]] = H[k]
            X = solve(np.hstack([B2, H2]), emb, p)
            steps[(z, i)] = X[B2.shape[1] :] % p
    return PointwiseModule(box, dims, steps, p).check()


def free_module_pointwise(g, box: GridBox, p: int = 2) -> PointwiseModule:
    """The free module F(g) evaluated on a box."""
    C = FreeComplex.from_maps(box.N, p, 0, [(tuple(g),)])
    return homology_functor(C, box, 0)


# ---------------------------------------------------------------- Betti numbers


def koszul_betti(P: PointwiseModule, z) -> dict:
    """Multiplicity of z in beta_d, for d = 0..N, via Koszul homology of P at z."""
    z = tuple(z)
    N = P.box.N
    p = P.p
    corner = tuple(x - 1 for x in z)
    if corner not in P.box or z not in P.box:
        raise OracleError(f"Koszul cube below {z} is not inside the box [{P.box.lo}, {P.box.hi}]")
    levels = [subsets(N, k) for k in range(N + 1)]

    def pt(S):
        return tuple(x - (1 if i + 1 in S else 0) for i, x in enumerate(z))

    def block_dims(k):
        return [P.dims[pt(S)] for S in levels[k]]

    def diff(k):
        # Koszul differential from degree k to k-1
        rdims, cdims = block_dims(k - 1), block_dims(k)
        roff = np.concatenate([[0], np.cumsum(rdims)]).astype(int)
        coff = np.concatenate([[0], np.cumsum(cdims)]).astype(int)
        A = np.zeros((int(roff[-1]), int(coff[-1])), dtype=np.int64)
        index = {S: i for i, S in enumerate(levels[k - 1])}
        for c, S in enumerate(levels[k]):
            if not cdims[c]:
                continue
            for j in range(1, k + 1):
                s = S[j - 1]
                face = S[: j - 1] + S[j:]
                r = index[face]
                if not rdims[r]:
                    continue
                block = P.step(pt(S), s - 1) * koszul_sign(k, j)
                A[roff[r] : roff[r + 1], coff[c] : coff[c + 1]] = block % p
        return A

    diffs = {k: diff(k) for k in range(1, N + 1)}
    out = {}
    for k in range(N + 1):
        n = sum(block_dims(k))
        r_out = rank_mod(diffs[k], p) if k >= 1 and n else 0
        r_in = rank_mod(diffs[k + 1], p) if k + 1 <= N and n else 0
        out[k] = n - r_out - r_in
    return out


def betti_oracle(C: FreeComplex, d: int, box: GridBox | None = None) -> dict:
    """Betti table of H_d(C) by Koszul homology at every grade of ``box``.

    Returns ``{k: sorted list of grades with multiplicity}``.  The box must
    contain all Betti grades and one extra step below; the default box does.
    """
    if box is None:
        box = default_box(C)
    P = homology_functor(C, box, d)
    table = {k: [] for k in range(C.N + 1)}
    for z in box.points():
        if tuple(x - 1 for x in z) not in box:
            continue
        for k, m in koszul_betti(P, z).items():
            table[k].extend([z] * m)
    return {k: sorted(v) for k, v in table.items()}


# ---------------------------------------------------------------- barcodes


def barcode_1d(C: FreeComplex, d: int) -> Barcode:
    """Barcode of H_d(C) for N = 1 by the standard column reduction."""
    if C.N != 1:
        raise DimensionError(f"barcodes need N = 1, got N = {C.N}")
    p = C.p
    gens_d = C.gens_at(d)
    if not gens_d:
        return Barcode(d, ())

    def reduce(M, rows, cols):
        # order rows and columns by (grade, index); returns pivot row per column (original ids)
        rorder = sorted(range(len(rows)), key=lambda i: (rows[i], i))
        rpos = {i: k for k, i in enumerate(rorder)}
        corder = sorted(range(len(cols)), key=lambda j: (cols[j], j))
        low_owner: dict = {}
        pivots = {}
        for j in corder:
            v = {rpos[i]: x for i, x in M.columns[j]}
            while v:
                low = max(v)
                o = low_owner.get(low)
                if o is None:
                    low_owner[low] = v
                    pivots[j] = rorder[low]
                    break
                c = v[low] * inv_mod(o[low], p) % p
                for i, x in o.items():
                    y = (v.get(i, 0) - c * x) % p
                    if y:
                        v[i] = y
                    else:
                        v.pop(i, None)
        return pivots

    negative = set(reduce(C.diff(d), C.gens_at(d - 1), gens_d)) if C.gens_at(d - 1) else set()
    gens_up = C.gens_at(d + 1)
    killed = {}
    if gens_up:
        for j, i in reduce(C.diff(d + 1), gens_d, gens_up).items():
            killed[i] = gens_up[j][0]
    intervals = []
    for i, g in enumerate(gens_d):
        if i in negative:
            continue
        b = g[0]
        death = killed.get(i, math.inf)
        if b < death:
            intervals.append((b, death))
    return Barcode(d, tuple(intervals))


def relative_barcode_1d(K: Multifiltration, q: int, p: int | None = None, reduced: bool = True) -> Barcode:
    """Barcode of z -> H^q(|K|, K_{-z}), the relative cohomology re-indexed so
    that it is a (covariant) persistence module; cochains at z are supported on
    simplices s with 1 - g(s) <= z.

    With ``reduced`` the empty simplex takes part as well (it enters with the
    first vertex), so that at grades where K_{-z} is empty the module is the
    reduced cohomology of |K|.
    """
    if K.N != 1:
        raise DimensionError(f"barcodes need N = 1, got N = {K.N}")
    C = chain_complex(K, reduced=reduced, p=p)
    p = C.p
    # cochain differential delta^{q}: C^q -> C^{q+1} is the transpose of d_{q+1}
    def cochain_map(e):
        M = C.diff(e)
        return np.array(M.to_dense(), dtype=np.int64).reshape(len(M.row_grades), len(M.col_grades)).T

    key = [tuple(1 - g[0] for g in C.gens_at(k)) for k in (q - 1, q, q + 1)]
    all_keys = [1 - g[0] for g in C.all_grades()]
    lo, hi = min(all_keys), max(all_keys)
    delta_q = cochain_map(q + 1) if C.gens_at(q + 1) else np.zeros((0, len(key[1])), dtype=np.int64)
    delta_prev = cochain_map(q) if C.gens_at(q - 1) else np.zeros((len(key[1]), 0), dtype=np.int64)

    def support(k, z):
        return [i for i, x in enumerate(key[k]) if x <= z]

    def cocycles(z):
        cols = support(1, z)
        n = len(key[1])
        if not cols:
            return np.zeros((n, 0), dtype=np.int64)
        A = delta_q[:, cols] if delta_q.shape[0] else np.zeros((0, len(cols)), dtype=np.int64)
        Z = nullspace(A, p) if A.shape[0] else np.eye(len(cols), dtype=np.int64)
        out = np.zeros((n, Z.shape[1]), dtype=np.int64)
        out[cols] = Z
        return out

    def coboundaries(z):
        cols = support(0, z)
        if not cols:
            return np.zeros((len(key[1]), 0), dtype=np.int64)
        return delta_prev[:, cols] % p

    if not key[1]:
        return Barcode(q, ())
    Zs = {z: cocycles(z) for z in range(lo - 1, hi + 1)}
    Bs = {z: coboundaries(z) for z in range(lo - 1, hi + 1)}
    rB = {z: rank_mod(B, p) for z, B in Bs.items()}

    def r(a, b):
        if a < lo or b < a:
            return 0
        a, b = min(a, hi), min(b, hi)
        return rank_mod(np.hstack([Zs[a], Bs[b]]), p) - rB[b]

    intervals = []
    T = hi
    for a in range(lo, hi + 1):
        for b in range(a + 1, T + 1):
            m = r(a, b - 1) - r(a, b) - r(a - 1, b - 1) + r(a - 1, b)
            intervals.extend([(a, b)] * m)
        m = r(a, T) - r(a - 1, T)
        intervals.extend([(a, math.inf)] * m)
    return Barcode(q, tuple(intervals))


def duality_defects(C: FreeComplex, box: GridBox | None = None, degrees=None) -> list:
    """Grades where dim H_{-(d+N)}(C^dagger)_z != dim H_d(C)_{-z}.

    Each defect is ``(d, z, lhs, rhs)``.  ``box`` is the window for H_d(C).
    """
    from .complex import dagger

    if box is None:
        box = default_box(C)
    D = dagger(C)
    N = C.N
    if degrees is None:
        degrees = list(C.degrees)
    hc = hilbert_homology_all(C, box, degrees)
    hd = hilbert_homology_all(D, box.negated(), [-(d + N) for d in degrees])
    bad = []
    for d in degrees:
        for w in box.points():
            z = tuple(-x for x in w)
            lhs = hd.at(-(d + N), z)
            rhs = hc.at(d, w)
            if lhs != rhs:
                bad.append((d, z, lhs, rhs))
    return bad
