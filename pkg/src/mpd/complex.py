"""Chain complexes of finite-rank free Z^N-persistence modules.

A :class:`FreeComplex` stores, for each homological degree ``d`` in ``[lo, hi]``,
the graded rank of ``C_d`` as an ordered tuple of grades, and for each
``d in (lo, hi]`` the differential ``C_d -> C_{d-1}`` as a :class:`GradedMatrix`.
Cochain complexes are stored with negated degrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .core import (
    DimensionError,
    DomainError,
    GradedMatrix,
    MPDError,
    ValidationError,
    check_prime,
    compose,
    grade_leq,
    grade_sub,
    is_finite,
    meet,
    ones,
    unit_subset,
)


class FiltrationError(MPDError):
    pass


class AugmentationError(MPDError):
    pass


@dataclass(frozen=True)
class FreeComplex:
    N: int
    p: int
    lo: int
    hi: int
    gens: tuple  # gens[d - lo] = tuple of grades of C_d
    diffs: tuple  # diffs[d - lo - 1] = GradedMatrix of d_d : C_d -> C_{d-1}

    def __post_init__(self):
        check_prime(self.p)
        if self.N < 1:
            raise DimensionError(f"parameter count must be >= 1, got {self.N}")
        width = self.hi - self.lo + 1
        if width < 0:
            raise DimensionError(f"empty degree range [{self.lo}, {self.hi}]")
        gens = tuple(tuple(tuple(g) for g in gs) for gs in self.gens)
        if len(gens) != width:
            raise DimensionError(f"expected {width} generator lists, got {len(gens)}")
        for gs in gens:
            for g in gs:
                if len(g) != self.N:
                    raise DimensionError(f"grade {g} has length {len(g)}, expected {self.N}")
        if len(self.diffs) != max(width - 1, 0):
            raise DimensionError(f"expected {max(width - 1, 0)} differentials, got {len(self.diffs)}")
        for k, D in enumerate(self.diffs):
            d = self.lo + k + 1
            if D.p != self.p:
                raise DimensionError(f"differential {d} is over F_{D.p}, complex over F_{self.p}")
            if D.row_grades != gens[d - 1 - self.lo] or D.col_grades != gens[d - self.lo]:
                raise DimensionError(f"differential {d} grades do not match generators of degrees {d}, {d - 1}")
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "diffs", tuple(self.diffs))

    # -- construction

    @classmethod
    def from_maps(cls, N: int, p: int, lo: int, gens: Sequence, diffs: dict | None = None) -> "FreeComplex":
        """Build from generator lists starting at degree ``lo`` and a mapping
        ``d -> columns`` (or GradedMatrix) for the nonzero differentials."""
        gens = tuple(tuple(tuple(g) for g in gs) for gs in gens)
        hi = lo + len(gens) - 1
        diffs = diffs or {}
        mats = []
        for d in range(lo + 1, hi + 1):
            rows, cols = gens[d - 1 - lo], gens[d - lo]
            data = diffs.get(d)
            if data is None:
                mats.append(GradedMatrix.zero(rows, cols, p))
            elif isinstance(data, GradedMatrix):
                mats.append(GradedMatrix(rows, cols, data.columns, p))
            else:
                mats.append(GradedMatrix(rows, cols, tuple(data), p))
        return cls(N, p, lo, hi, gens, tuple(mats))

    @classmethod
    def empty(cls, N: int, p: int = 2, lo: int = 0, hi: int = 0) -> "FreeComplex":
        return cls.from_maps(N, p, lo, [()] * (hi - lo + 1))

    # -- accessors

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def gens_at(self, d: int) -> tuple:
        if self.lo <= d <= self.hi:
            return self.gens[d - self.lo]
        return ()

    def diff(self, d: int) -> GradedMatrix:
        """The differential C_d -> C_{d-1}; a zero matrix outside the stored range."""
        if self.lo < d <= self.hi:
            return self.diffs[d - self.lo - 1]
        return GradedMatrix.zero(self.gens_at(d - 1), self.gens_at(d), self.p)

    def rank(self, d: int) -> int:
        return len(self.gens_at(d))

    def total_rank(self) -> int:
        return sum(len(g) for g in self.gens)

    def all_grades(self) -> list:
        return [g for gs in self.gens for g in gs]

    def is_zero(self) -> bool:
        return self.total_rank() == 0

    # -- checks

    def check(self) -> "FreeComplex":
        """Raise ValidationError unless every differential is valid and d^2 = 0."""
        for k, D in enumerate(self.diffs):
            d = self.lo + k + 1
            bad = D.first_invalid_entry()
            if bad is not None:
                i, j = bad
                raise ValidationError(
                    f"differential {d}: entry ({i}, {j}) is nonzero but row grade "
                    f"{D.row_grades[i]} is not <= column grade {D.col_grades[j]}"
                )
        for k in range(len(self.diffs) - 1):
            d = self.lo + k + 1
            if not compose(self.diffs[k], self.diffs[k + 1]).is_zero():
                raise ValidationError(f"d_{d} o d_{d + 1} != 0")
        return self

    def is_minimal(self) -> bool:
        return all(D.is_minimal() for D in self.diffs)

    def trimmed(self) -> "FreeComplex":
        """Drop empty degrees at both ends (keeping at least one degree)."""
        nz = [d for d in self.degrees if self.gens_at(d)]
        if not nz:
            return FreeComplex.empty(self.N, self.p, self.lo, self.lo)
        return truncate(self, nz[0], nz[-1])


def truncate(C: FreeComplex, lo: int, hi: int) -> FreeComplex:
    """Brutal truncation to degrees [lo, hi] (degrees outside become zero)."""
    gens = [C.gens_at(d) for d in range(lo, hi + 1)]
    diffs = {d: C.diff(d) for d in range(lo + 1, hi + 1)}
    return FreeComplex.from_maps(C.N, C.p, lo, gens, diffs)


# ---------------------------------------------------------------- filtrations


@dataclass(frozen=True)
class Multifiltration:
    """A one-critical simplicial Z^N-filtration: each simplex with its entry grade."""

    N: int
    simplices: tuple  # tuple of (vertex tuple, grade)
    p: int = 2  # default characteristic for chain complexes built from it

    def __post_init__(self):
        check_prime(self.p)
        simplices = tuple((tuple(s), tuple(g)) for s, g in self.simplices)
        object.__setattr__(self, "simplices", simplices)
        self.validate()

    def validate(self) -> None:
        if self.N < 1:
            raise FiltrationError(f"parameter count must be >= 1, got {self.N}")
        if not self.simplices:
            raise FiltrationError("filtration has no simplices")
        grade_of: dict = {}
        for k, (s, g) in enumerate(self.simplices):
            if len(g) != self.N:
                raise FiltrationError(f"simplex {s}: grade {g} has length {len(g)}, expected {self.N}")
            if not s:
                raise FiltrationError(f"simplex #{k} has no vertices")
            if any(v < 0 for v in s) or list(s) != sorted(set(s)):
                raise FiltrationError(f"simplex {s}: vertex ids must be sorted, distinct and nonnegative")
            if not is_finite(g):
                raise FiltrationError(f"simplex {s}: grade {g} is not finite")
            if s in grade_of:
                raise FiltrationError(f"simplex {s} listed twice")
            grade_of[s] = g
        for s, g in self.simplices:
            if len(s) == 1:
                continue
            for i in range(len(s)):
                face = s[:i] + s[i + 1 :]
                if face not in grade_of:
                    raise FiltrationError(f"simplex {s}: face {face} missing")
                if not grade_leq(grade_of[face], g):
                    raise FiltrationError(
                        f"simplex {s} at grade {g} enters before its face {face} at grade {grade_of[face]}"
                    )

    @property
    def dim(self) -> int:
        return max(len(s) for s, _ in self.simplices) - 1

    def grade_of(self, simplex) -> tuple:
        for s, g in self.simplices:
            if s == tuple(simplex):
                return g
        raise KeyError(simplex)

    def simplices_of_dim(self, d: int) -> list:
        return [(s, g) for s, g in self.simplices if len(s) == d + 1]


def chain_complex(K: Multifiltration, reduced: bool = True, p: int | None = None) -> FreeComplex:
    """The filtered simplicial chain complex, augmented when ``reduced``.

    Generators of C_d are the d-simplices in input order; the boundary of
    [v_0..v_k] is sum (-1)^i [v_0..^v_i..v_k].  The augmentation C_{-1} is a
    single generator at the meet of the vertex grades, which must be attained by
    some vertex for the module to be free.
    """
    p = K.p if p is None else check_prime(p)
    dim = K.dim
    by_dim = [K.simplices_of_dim(d) for d in range(dim + 1)]
    index = [{s: i for i, (s, _) in enumerate(level)} for level in by_dim]
    gens = [tuple(g for _, g in level) for level in by_dim]
    diffs: dict[int, list] = {}
    for d in range(1, dim + 1):
        cols = []
        for s, _ in by_dim[d]:
            col = {}
            for i in range(len(s)):
                face = s[:i] + s[i + 1 :]
                col[index[d - 1][face]] = (-1) ** i % p
            cols.append(col)
        diffs[d] = cols
    if not reduced:
        return FreeComplex.from_maps(K.N, p, 0, gens, diffs).check()
    vgrades = gens[0]
    g0 = meet(*vgrades)
    if g0 not in vgrades:
        raise AugmentationError(
            f"reduced complex needs a vertex at the meet {g0} of all vertex grades; none found"
        )
    diffs[0] = [{0: 1} for _ in vgrades]
    return FreeComplex.from_maps(K.N, p, -1, [(g0,)] + gens, diffs).check()


# ---------------------------------------------------------------- transforms


def dagger(C: FreeComplex) -> FreeComplex:
    """The global dual C^† = Hom(C, F(1)), stored as a chain complex with negated
    degrees: degree -d holds F(1 - z) for every z in rk C_d, and the differential
    out of degree -d is the graded transpose of d_{d+1} shifted by <-1>."""
    for g in C.all_grades():
        if not is_finite(g):
            raise DomainError(f"cannot dualize a complex with infinite grade {g}")
    one = ones(C.N)
    minus_one = tuple(-1 for _ in range(C.N))
    gens = [tuple(grade_sub(one, g) for g in C.gens_at(-e)) for e in range(-C.hi, -C.lo + 1)]
    diffs = {}
    for e in range(-C.hi + 1, -C.lo + 1):
        # degree e = -d maps to -d-1, dual to d_{d+1}
        diffs[e] = C.diff(-e + 1).transpose().shift(minus_one)
    return FreeComplex.from_maps(C.N, C.p, -C.hi, gens, diffs).check()


def shift_homological(C: FreeComplex, i: int) -> FreeComplex:
    """C[i] with C[i]_d = C_{i+d}."""
    return FreeComplex(C.N, C.p, C.lo - i, C.hi - i, C.gens, C.diffs)


def shift_graded(C: FreeComplex, z: Sequence) -> FreeComplex:
    """C<z>: every generator grade decreased by ``z``."""
    z = tuple(z)
    if len(z) != C.N:
        raise DimensionError(f"shift {z} does not have length {C.N}")
    gens = tuple(tuple(grade_sub(g, z) for g in gs) for gs in C.gens)
    return FreeComplex(C.N, C.p, C.lo, C.hi, gens, tuple(D.shift(z) for D in C.diffs))


def koszul_sign(k: int, j: int) -> int:
    """Sign of the face S -> S minus its j-th element (1-based) for |S| = k."""
    return 1 if (k - j) % 2 == 0 else -1


def subsets(N: int, k: int) -> list:
    """k-subsets of {1..N} in lexicographic order."""
    return list(combinations(range(1, N + 1), k))


def koszul(N: int, p: int = 2) -> FreeComplex:
    """The Koszul complex: the minimal free resolution of the simple module at 0."""
    if N < 1:
        raise DimensionError(f"Koszul complex needs N >= 1, got {N}")
    levels = [subsets(N, k) for k in range(N + 1)]
    index = [{S: i for i, S in enumerate(level)} for level in levels]
    gens = [tuple(unit_subset(N, S) for S in level) for level in levels]
    diffs = {}
    for k in range(1, N + 1):
        cols = []
        for S in levels[k]:
            col = {}
            for j in range(1, k + 1):
                face = S[: j - 1] + S[j:]
                col[index[k - 1][face]] = koszul_sign(k, j) % p
            cols.append(col)
        diffs[k] = cols
    return FreeComplex.from_maps(N, p, 0, gens, diffs).check()


def direct_sum(*complexes: FreeComplex) -> FreeComplex:
    """Blockwise direct sum; generators are concatenated in argument order."""
    if not complexes:
        raise DimensionError("direct sum of nothing")
    N, p = complexes[0].N, complexes[0].p
    for C in complexes:
        if (C.N, C.p) != (N, p):
            raise DimensionError("direct sum of complexes over different N or p")
    lo = min(C.lo for C in complexes)
    hi = max(C.hi for C in complexes)
    gens = []
    offsets = []
    for d in range(lo, hi + 1):
        off, acc = [], []
        for C in complexes:
            off.append(len(acc))
            acc.extend(C.gens_at(d))
        gens.append(tuple(acc))
        offsets.append(off)
    diffs = {}
    for d in range(lo + 1, hi + 1):
        cols = []
        for c, C in enumerate(complexes):
            row_off = offsets[d - 1 - lo][c]
            for col in C.diff(d).columns:
                cols.append(tuple((i + row_off, v) for i, v in col))
        diffs[d] = cols
    return FreeComplex.from_maps(N, p, lo, gens, diffs)


def graded_ranks(C: FreeComplex) -> dict:
    return {d: C.gens_at(d) for d in C.degrees}


def complexes_equal(A: FreeComplex, B: FreeComplex) -> bool:
    """Equality up to empty degrees at the ends."""
    if (A.N, A.p) != (B.N, B.p):
        return False
    lo, hi = min(A.lo, B.lo), max(A.hi, B.hi)
    for d in range(lo, hi + 1):
        if A.gens_at(d) != B.gens_at(d):
            return False
        if A.diff(d).columns != B.diff(d).columns:
            return False
    return True


def elementary_basis_change(C: FreeComplex, d: int, k: int, j: int, c: int) -> FreeComplex:
    """Replace basis element e_k of C_d by e_k + c·e_j (requires grade(e_j) <= grade(e_k)).

    The differential out of C_d gets column k += c·column j; the differential into
    C_d gets row j -= c·row k.  Validity and d^2 = 0 are preserved.
    """
    gs = C.gens_at(d)
    if not grade_leq(gs[j], gs[k]) or j == k:
        raise ValidationError(f"basis change e_{k} += c e_{j} in degree {d} is not graded")
    p = C.p
    diffs = {e: C.diff(e) for e in range(C.lo + 1, C.hi + 1)}
    if d in diffs:
        D = diffs[d]
        cols = list(D.columns)
        acc = dict(cols[k])
        for i, v in cols[j]:
            acc[i] = (acc.get(i, 0) + c * v) % p
        cols[k] = tuple(acc.items())
        diffs[d] = GradedMatrix(D.row_grades, D.col_grades, tuple(cols), p)
    if d + 1 in diffs:
        D = diffs[d + 1]
        cols = []
        for col in D.columns:
            acc = dict(col)
            vk = acc.get(k, 0)
            if vk:
                acc[j] = (acc.get(j, 0) - c * vk) % p
            cols.append(tuple(acc.items()))
        diffs[d + 1] = GradedMatrix(D.row_grades, D.col_grades, tuple(cols), p)
    return FreeComplex.from_maps(C.N, p, C.lo, C.gens, diffs)


def generators_join(C: FreeComplex) -> tuple | None:
    grades = C.all_grades()
    if not grades:
        return None
    return tuple(max(c) for c in zip(*grades))


def generators_meet(C: FreeComplex) -> tuple | None:
    grades = C.all_grades()
    if not grades:
        return None
    return tuple(min(c) for c in zip(*grades))


__all__: Iterable[str] = [
    "AugmentationError",
    "FiltrationError",
    "FreeComplex",
    "Multifiltration",
    "chain_complex",
    "complexes_equal",
    "dagger",
    "direct_sum",
    "elementary_basis_change",
    "koszul",
    "shift_graded",
    "shift_homological",
    "subsets",
    "truncate",
]
