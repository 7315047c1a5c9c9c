"""Grades of Z^N, prime-field scalars and sparse graded matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

Grade = tuple  # tuple[int, ...]; ExtendedGrade may also hold -inf / +inf


class MPDError(Exception):
    """Base class for all domain errors raised by this package."""


class DimensionError(MPDError):
    pass


class CompositionError(MPDError):
    pass


class ValidationError(MPDError):
    """A graded matrix or complex violates validity or d^2 = 0."""


class DomainError(MPDError):
    """An operation received an infinite grade where only finite ones make sense."""


class FieldError(MPDError):
    pass


# ---------------------------------------------------------------- grades


def grade_leq(a: Sequence, b: Sequence) -> bool:
    if len(a) != len(b):
        raise DimensionError(f"grade length mismatch: {tuple(a)} vs {tuple(b)}")
    return all(x <= y for x, y in zip(a, b))


def grade_lt(a: Sequence, b: Sequence) -> bool:
    """Strict order of the poset: a <= b and a != b."""
    return grade_leq(a, b) and tuple(a) != tuple(b)


def join_masked(a: Sequence, b: Sequence, S: Iterable[int]) -> Grade:
    """Componentwise max over the (1-based) coordinates in ``S``; ``a`` elsewhere."""
    if len(a) != len(b):
        raise DimensionError(f"grade length mismatch: {tuple(a)} vs {tuple(b)}")
    S = set(S)
    for s in S:
        if not 1 <= s <= len(a):
            raise DimensionError(f"mask index {s} outside 1..{len(a)}")
    return tuple(max(x, y) if i + 1 in S else x for i, (x, y) in enumerate(zip(a, b)))


def join(*grades: Sequence) -> Grade:
    if not grades:
        raise DimensionError("join of no grades")
    return tuple(max(c) for c in zip(*grades))


def meet(*grades: Sequence) -> Grade:
    if not grades:
        raise DimensionError("meet of no grades")
    return tuple(min(c) for c in zip(*grades))


def is_finite(g: Sequence) -> bool:
    return all(not (isinstance(x, float) and math.isinf(x)) for x in g)


def _require_finite(g: Sequence) -> None:
    if not is_finite(g):
        raise DomainError(f"arithmetic on infinite grade {tuple(g)}")


def grade_sub(a: Sequence, b: Sequence) -> Grade:
    _require_finite(a)
    _require_finite(b)
    if len(a) != len(b):
        raise DimensionError(f"grade length mismatch: {tuple(a)} vs {tuple(b)}")
    return tuple(x - y for x, y in zip(a, b))


def grade_add(a: Sequence, b: Sequence) -> Grade:
    _require_finite(a)
    _require_finite(b)
    if len(a) != len(b):
        raise DimensionError(f"grade length mismatch: {tuple(a)} vs {tuple(b)}")
    return tuple(x + y for x, y in zip(a, b))


def grade_neg(a: Sequence) -> Grade:
    _require_finite(a)
    return tuple(-x for x in a)


def ones(N: int) -> Grade:
    return (1,) * N


def unit_subset(N: int, S: Iterable[int]) -> Grade:
    """The indicator vector e_S for a 1-based index set S."""
    S = set(S)
    return tuple(1 if i + 1 in S else 0 for i in range(N))


# ---------------------------------------------------------------- fields


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p) or p >= 2**31:
        raise FieldError(f"characteristic must be a prime below 2^31, got {p!r}")
    return p


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(a, -1, p)


@dataclass(frozen=True)
class FieldScalar:
    """An element of F_p. Internally the package works with bare ints; this
    wrapper exists for callers who want operator syntax."""

    residue: int
    p: int = 2

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "residue", self.residue % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldScalar):
            if other.p != self.p:
                raise FieldError(f"mixing F_{self.p} and F_{other.p}")
            return other.residue
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FieldScalar(self.residue + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldScalar(self.residue - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldScalar(o - self.residue, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldScalar(self.residue * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldScalar(-self.residue, self.p)

    def inverse(self) -> "FieldScalar":
        return FieldScalar(inv_mod(self.residue, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * FieldScalar(o, self.p).inverse()

    def __bool__(self):
        return self.residue != 0

    def __int__(self):
        return self.residue


# ---------------------------------------------------------------- matrices

Column = tuple  # tuple[tuple[int, int], ...]: (row, value) pairs, rows ascending


def _normalize_column(col, m: int, p: int, j: int) -> Column:
    if isinstance(col, Mapping):
        items = col.items()
    else:
        items = col
    acc: dict[int, int] = {}
    for i, v in items:
        if not 0 <= i < m:
            raise DimensionError(f"row index {i} out of range in column {j} (rows: {m})")
        acc[i] = (acc.get(i, 0) + v) % p
    return tuple((i, acc[i]) for i in sorted(acc) if acc[i])


@dataclass(frozen=True)
class GradedMatrix:
    """A matrix over F_p with a grade on every row and column, stored as sparse
    columns.  Validity is not enforced on construction; see :meth:`is_valid`."""

    row_grades: tuple
    col_grades: tuple
    columns: tuple
    p: int = 2

    def __post_init__(self):
        check_prime(self.p)
        rows = tuple(tuple(g) for g in self.row_grades)
        cols = tuple(tuple(g) for g in self.col_grades)
        lengths = {len(g) for g in rows + cols}
        if len(lengths) > 1:
            raise DimensionError(f"mixed grade lengths {sorted(lengths)}")
        if len(self.columns) != len(cols):
            raise DimensionError(f"{len(self.columns)} columns but {len(cols)} column grades")
        m = len(rows)
        columns = tuple(_normalize_column(c, m, self.p, j) for j, c in enumerate(self.columns))
        object.__setattr__(self, "row_grades", rows)
        object.__setattr__(self, "col_grades", cols)
        object.__setattr__(self, "columns", columns)

    # -- construction

    @classmethod
    def zero(cls, row_grades, col_grades, p: int = 2) -> "GradedMatrix":
        return cls(tuple(row_grades), tuple(col_grades), tuple(() for _ in col_grades), p)

    @classmethod
    def from_dense(cls, row_grades, col_grades, dense, p: int = 2) -> "GradedMatrix":
        row_grades, col_grades = tuple(row_grades), tuple(col_grades)
        m, n = len(row_grades), len(col_grades)
        if len(dense) != m or any(len(r) != n for r in dense):
            raise DimensionError(f"dense data does not have shape {m}x{n}")
        columns = tuple(tuple((i, dense[i][j]) for i in range(m) if dense[i][j] % p) for j in range(n))
        return cls(row_grades, col_grades, columns, p)

    @classmethod
    def identity(cls, grades, p: int = 2) -> "GradedMatrix":
        grades = tuple(grades)
        return cls(grades, grades, tuple(((j, 1),) for j in range(len(grades))), p)

    # -- accessors

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_grades), len(self.col_grades)

    @property
    def N(self) -> int | None:
        for g in self.row_grades + self.col_grades:
            return len(g)
        return None

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def entries(self):
        for j, col in enumerate(self.columns):
            for i, v in col:
                yield i, j, v

    def entry(self, i: int, j: int) -> int:
        for r, v in self.columns[j]:
            if r == i:
                return v
        return 0

    def to_dense(self) -> list[list[int]]:
        m, n = self.shape
        out = [[0] * n for _ in range(m)]
        for i, j, v in self.entries():
            out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)

    # -- predicates

    def first_invalid_entry(self):
        for i, j, _ in self.entries():
            if not grade_leq(self.row_grades[i], self.col_grades[j]):
                return i, j
        return None

    def is_valid(self) -> bool:
        return self.first_invalid_entry() is None

    def is_minimal(self) -> bool:
        for i, j, _ in self.entries():
            if not grade_lt(self.row_grades[i], self.col_grades[j]):
                return False
        return True

    # -- structural operations

    def transpose(self) -> "GradedMatrix":
        """Graded transpose: entries transposed, grades swapped and negated."""
        m, n = self.shape
        rows: list[list[tuple[int, int]]] = [[] for _ in range(m)]
        for j, col in enumerate(self.columns):
            for i, v in col:
                rows[i].append((j, v))
        return GradedMatrix(
            tuple(grade_neg(g) for g in self.col_grades),
            tuple(grade_neg(g) for g in self.row_grades),
            tuple(tuple(r) for r in rows),
            self.p,
        )

    def shift(self, z: Sequence) -> "GradedMatrix":
        """M<z>: every row and column grade decreased by ``z``."""
        z = tuple(z)
        return GradedMatrix(
            tuple(grade_sub(g, z) for g in self.row_grades),
            tuple(grade_sub(g, z) for g in self.col_grades),
            self.columns,
            self.p,
        )

    def select(self, rows: Sequence[int], cols: Sequence[int]) -> "GradedMatrix":
        """Submatrix on the given (ordered) row and column indices."""
        rmap = {i: k for k, i in enumerate(rows)}
        columns = tuple(tuple((rmap[i], v) for i, v in self.columns[j] if i in rmap) for j in cols)
        return GradedMatrix(
            tuple(self.row_grades[i] for i in rows),
            tuple(self.col_grades[j] for j in cols),
            columns,
            self.p,
        )

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        return compose(self, other)


def transpose(M: GradedMatrix) -> GradedMatrix:
    return M.transpose()


def shift_matrix(M: GradedMatrix, z: Sequence) -> GradedMatrix:
    return M.shift(z)


def is_valid(M: GradedMatrix) -> bool:
    return M.is_valid()


def is_minimal(M: GradedMatrix) -> bool:
    return M.is_minimal()


def compose(A: GradedMatrix, B: GradedMatrix) -> GradedMatrix:
    """The product A·B of composable morphisms (B first)."""
    if A.p != B.p:
        raise CompositionError(f"characteristics differ: {A.p} vs {B.p}")
    if A.col_grades != B.row_grades:
        raise CompositionError(
            f"cannot compose: {A.shape[1]} source grades of A do not match {B.shape[0]} target grades of B"
        )
    p = A.p
    out = []
    for col in B.columns:
        acc: dict[int, int] = {}
        for k, b in col:
            for i, a in A.columns[k]:
                acc[i] = (acc.get(i, 0) + a * b) % p
        out.append(tuple((i, acc[i]) for i in sorted(acc) if acc[i]))
    return GradedMatrix(A.row_grades, B.col_grades, tuple(out), p)
