import pytest
from hypothesis import given
from hypothesis import strategies as st

from mpd.core import (
    CompositionError,
    DimensionError,
    DomainError,
    FieldError,
    FieldScalar,
    GradedMatrix,
    compose,
    grade_add,
    grade_leq,
    grade_lt,
    is_minimal,
    is_prime,
    is_valid,
    join,
    join_masked,
    meet,
    shift_matrix,
    transpose,
)


def test_grade_leq_examples():
    assert grade_leq((0, 1), (1, 1))
    assert not grade_leq((1, 0), (0, 1))
    assert grade_leq((2, 3, 5), (2, 3, 5))


def test_grade_leq_length_mismatch():
    with pytest.raises(DimensionError):
        grade_leq((0, 1), (0, 1, 2))


def test_join_masked():
    assert join_masked((1, 5), (4, 2), {1}) == (4, 5)
    assert join_masked((1, 5), (4, 2), set()) == (1, 5)
    assert join_masked((1, 5), (4, 2), {1, 2}) == (4, 5)
    assert join((1, 5), (4, 2)) == (4, 5)
    assert meet((1, 5), (4, 2)) == (1, 2)
    with pytest.raises(DimensionError):
        join_masked((1, 5), (4, 2), {3})


def test_infinite_grades_compare_but_do_not_add():
    inf = float("inf")
    assert grade_leq((-inf, 0), (3, 0))
    assert grade_leq((0, 0), (inf, 0))
    with pytest.raises(DomainError):
        grade_add((inf, 0), (1, 1))


ROWS = ((0, 1), (1, 0))
COLS = ((0, 2), (1, 1), (2, 0))


def test_validity_block_pattern():
    M = GradedMatrix.from_dense(ROWS, COLS, [[1, 1, 0], [0, 1, 1]])
    assert is_valid(M)
    bad = GradedMatrix.from_dense(ROWS, COLS, [[1, 1, 0], [1, 1, 1]])
    assert not is_valid(bad)
    assert bad.first_invalid_entry() == (1, 0)


def test_equal_grades_valid_not_minimal():
    M = GradedMatrix.from_dense([(1, 1)], [(1, 1)], [[1]])
    assert is_valid(M) and not is_minimal(M)
    # minimal and valid are independent scans
    odd = GradedMatrix.from_dense([(2, 0)], [(0, 2)], [[1]])
    assert not is_valid(odd) and not is_minimal(odd)


def test_transpose_example():
    M = GradedMatrix.from_dense(ROWS, [(1, 1)], [[1], [1]])
    T = transpose(M)
    assert T.row_grades == ((-1, -1),)
    assert T.col_grades == ((0, -1), (-1, 0))
    assert T.to_dense() == [[1, 1]]
    assert transpose(T) == M


def test_shift_example():
    M = GradedMatrix.from_dense([(0, 1)], [(1, 1)], [[1]])
    S = shift_matrix(M, (1, 1))
    assert S.row_grades == ((-1, 0),) and S.col_grades == ((0, 0),)
    assert shift_matrix(M, (0, 0)) == M
    assert shift_matrix(S, (-1, -1)) == M


def test_koszul_composition_vanishes():
    p = 5
    d1 = GradedMatrix.from_dense([(0, 0)], [(1, 0), (0, 1)], [[1, 1]], p)
    d2 = GradedMatrix.from_dense([(1, 0), (0, 1)], [(1, 1)], [[1], [p - 1]], p)
    assert compose(d1, d2).is_zero()


def test_compose_identity_and_mismatch():
    B = GradedMatrix.from_dense([(0,), (1,)], [(2,)], [[1], [1]])
    assert compose(GradedMatrix.identity(B.row_grades), B) == B
    with pytest.raises(CompositionError):
        compose(B, B)
    with pytest.raises(CompositionError):
        compose(GradedMatrix.identity([(2,)], 3), B)


def test_entries_reduced_mod_p():
    M = GradedMatrix(((0,),), ((0,), (1,)), ({0: 7}, [(0, 3), (0, 2)]), 5)
    assert M.columns == (((0, 2),), ())
    with pytest.raises(DimensionError):
        GradedMatrix(((0,),), ((0,),), ({1: 1},), 5)


def test_field_axioms_exhaustive():
    for p in [q for q in range(2, 14) if is_prime(q)]:
        for a in range(1, p):
            x = FieldScalar(a, p)
            assert (x * x.inverse()).residue == 1
            assert (x / x).residue == 1
            assert (x - x).residue == 0
            assert (-x + x).residue == 0
        for a in range(p):
            for b in range(p):
                x, y = FieldScalar(a, p), FieldScalar(b, p)
                assert (x + y).residue == (a + b) % p
                assert (x * y) == (y * x)


def test_field_rejects_non_primes():
    for bad in [0, 1, 4, 9, 2**31 + 11]:
        with pytest.raises(FieldError):
            FieldScalar(1, bad)
    with pytest.raises(FieldError):
        FieldScalar(1, 3) + FieldScalar(1, 5)


# ---------------------------------------------------------------- properties

grades2 = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@given(grades2, grades2, grades2)
def test_partial_order(a, b, c):
    assert grade_leq(a, a)
    if grade_leq(a, b) and grade_leq(b, a):
        assert a == b
    if grade_leq(a, b) and grade_leq(b, c):
        assert grade_leq(a, c)
    assert grade_lt(a, b) == (grade_leq(a, b) and a != b)


@st.composite
def valid_matrices(draw, m=None, n=None, p=3, rows=None):
    m = draw(st.integers(0, 4)) if m is None and rows is None else (len(rows) if rows is not None else m)
    n = draw(st.integers(0, 4)) if n is None else n
    rg = rows if rows is not None else [draw(grades2) for _ in range(m)]
    cg = [draw(grades2) for _ in range(n)]
    cols = []
    for g in cg:
        col = {}
        for i, r in enumerate(rg):
            if grade_leq(r, g):
                v = draw(st.integers(0, p - 1))
                if v:
                    col[i] = v
        cols.append(col)
    return GradedMatrix(tuple(rg), tuple(cg), tuple(cols), p)


@given(valid_matrices(), grades2)
def test_transpose_and_shift_preserve_validity(M, z):
    assert is_valid(M)
    assert is_valid(transpose(M))
    assert is_valid(shift_matrix(M, z))
    assert transpose(transpose(M)) == M


@given(st.data())
def test_compose_associative_and_matches_dense(data):
    A = data.draw(valid_matrices())
    B = data.draw(valid_matrices(rows=list(A.col_grades)))
    C = data.draw(valid_matrices(rows=list(B.col_grades)))
    AB_C = compose(compose(A, B), C)
    assert AB_C == compose(A, compose(B, C))
    assert is_valid(AB_C)
    dA, dB = A.to_dense(), B.to_dense()
    m, k, n = A.shape[0], A.shape[1], B.shape[1]
    dense = [[sum(dA[i][t] * dB[t][j] for t in range(k)) % 3 for j in range(n)] for i in range(m)]
    assert compose(A, B).to_dense() == dense
