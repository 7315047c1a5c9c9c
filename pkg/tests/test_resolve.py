import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import two_param_resolution, triangle_filtration, staircase_complex
from mpd.complex import FreeComplex, chain_complex, complexes_equal, dagger, koszul
from mpd.cone import cone_complex
from mpd.core import GradedMatrix, compose, grade_leq
from mpd.generate import random_complex, random_filtration
from mpd.oracle import GridBox, betti_oracle, default_box, hilbert_homology_all, rank_mod
from mpd.resolve import (
    BettiTable,
    LengthError,
    Presentation,
    UnsupportedParameterError,
    dual_resolution,
    free_resolution,
    kernel_basis,
    mfr_cohomological,
    mfr_direct,
    minimal_presentation,
    minimize,
    resolution_length,
)


def bars_resolution(bars, p=2):
    gens0 = tuple((b,) for b, _ in bars)
    gens1 = tuple((d,) for _, d in bars)
    return FreeComplex.from_maps(1, p, 0, [gens0, gens1], {1: [{i: 1} for i in range(len(bars))]})


# ---------------------------------------------------------------- minimize


def test_minimize_ball():
    C = FreeComplex.from_maps(2, 3, 0, [((1, 2),), ((1, 2),)], {1: [{0: 2}]})
    M = minimize(C)
    assert M.is_zero()


def test_minimize_fixes_koszul():
    K = koszul(3, 5)
    assert complexes_equal(minimize(K), K)


def test_minimize_drops_trivial_bar():
    G = bars_resolution([(0, 3), (2, 2), (1, 5)])
    M = minimize(G)
    assert M.gens_at(0) == ((0,), (1,)) and M.gens_at(1) == ((3,), (5,))
    assert M.is_minimal()


@given(st.integers(0, 10**6), st.sampled_from([1, 2, 3]), st.sampled_from([2, 3]))
def test_minimize_keeps_homology(seed, N, p):
    C = random_complex(seed, N=N, p=p, max_rank=18, grade_max=4)
    M = minimize(C)
    M.check()
    assert M.is_minimal()
    box = default_box(C)
    assert hilbert_homology_all(C, box).values == hilbert_homology_all(M, box).values


# ---------------------------------------------------------------- kernels


def test_kernel_of_koszul_d1():
    d1 = koszul(2, 3).diff(1)
    K = kernel_basis(d1)
    assert K.col_grades == ((1, 1),)
    assert K.to_dense() in ([[1], [2]], [[2], [1]])


def test_kernel_of_zero_matrix():
    M = GradedMatrix.zero([(0, 0)], [(1, 0), (0, 3)], 5)
    K = kernel_basis(M)
    assert K.col_grades == M.col_grades
    assert K == GradedMatrix.identity(M.col_grades, 5)


def test_kernel_needs_small_n():
    with pytest.raises(UnsupportedParameterError):
        kernel_basis(koszul(3).diff(1))
    with pytest.raises(UnsupportedParameterError):
        mfr_direct(koszul(3), 0)


def _random_valid(rng, m, n, p, gmax=4):
    rg = [tuple(int(x) for x in rng.integers(0, gmax, 2)) for _ in range(m)]
    cg = [tuple(int(x) for x in rng.integers(0, gmax + 2, 2)) for _ in range(n)]
    cols = []
    for g in cg:
        cols.append({i: int(rng.integers(0, p)) for i, r in enumerate(rg) if grade_leq(r, g) and rng.random() < 0.6})
    return GradedMatrix(tuple(rg), tuple(cg), tuple(cols), p)


def _dense(M, rows, cols):
    A = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for k, j in enumerate(cols):
        for i, v in M.columns[j]:
            if i in rows:
                A[rows.index(i), k] = v
    return A


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 7]))
def test_kernel_pointwise(seed, p):
    rng = np.random.default_rng(seed)
    M = _random_valid(rng, 6, 9, p)
    K = kernel_basis(M)
    assert K.is_valid()
    assert compose(M, K).is_zero()
    for z in GridBox((0, 0), (6, 6)).points():
        cols = [j for j, g in enumerate(M.col_grades) if grade_leq(g, z)]
        rows = list(range(len(M.row_grades)))
        dim_ker = len(cols) - rank_mod(_dense(M, rows, cols), p)
        kcols = [k for k, g in enumerate(K.col_grades) if grade_leq(g, z)]
        Kz = _dense(K, list(range(len(M.col_grades))), kcols)
        assert len(kcols) == dim_ker
        assert rank_mod(Kz, p) == len(kcols)


# ---------------------------------------------------------------- presentations and resolutions


def test_presentation_of_staircase():
    P = minimal_presentation(staircase_complex(4), 0)
    assert P.generators == ((1, 1),)
    assert sorted(P.relations) == [(1, 2), (2, 1)]
    assert P.matrix.is_minimal()


def test_presentation_of_koszul():
    P = minimal_presentation(koszul(2, 3), 0)
    assert P.generators == ((0, 0),)
    assert sorted(P.relations) == [(0, 1), (1, 0)]


def test_presentation_of_acyclic_complex():
    C = FreeComplex.from_maps(2, 2, 0, [((0, 0),), ((0, 0),)], {1: [{0: 1}]})
    P = minimal_presentation(C, 0)
    assert P.matrix.shape == (0, 0)


def test_free_resolution_of_koszul_presentation():
    K = koszul(2, 3)
    G = free_resolution(Presentation(K.diff(1)))
    assert G.gens == K.gens and resolution_length(G) == 2
    assert compose(G.diff(1), G.diff(2)).is_zero()


def test_free_resolution_one_parameter():
    bars = [(0, 2), (1, 6)]
    P = Presentation(bars_resolution(bars).diff(1))
    G = free_resolution(P)
    assert (G.lo, G.hi) == (0, 1) and resolution_length(G) == 1
    assert G.gens_at(0) == ((0,), (1,)) and G.gens_at(1) == ((2,), (6,))


def test_free_resolution_of_two_param_module():
    ref = two_param_resolution()
    G = free_resolution(Presentation(ref.diff(1)))
    assert G.gens == ref.gens
    assert G.diff(2).to_dense() in ([[1], [2], [1]], [[2], [1], [2]])


def test_resolution_length():
    assert resolution_length(koszul(2)) == 2
    assert resolution_length(FreeComplex.empty(2, 2, 0, 2)) == -math.inf
    assert resolution_length(bars_resolution([(0, 1)])) == 1


def test_dual_resolution_one_parameter():
    bars = [(0, 2), (1, 6), (3, 4)]
    D = dual_resolution(bars_resolution(bars, 3))
    got = sorted(zip((g[0] for g in D.gens_at(0)), (g[0] for g in D.gens_at(1))))
    # generators come from the deaths and relations from the births
    assert sorted(g[0] for g in D.gens_at(0)) == sorted(1 - d for _, d in bars)
    assert sorted(g[0] for g in D.gens_at(1)) == sorted(1 - b for b, _ in bars)
    assert len(got) == 3
    assert BettiTable.of(mfr_direct(D, 0)) == BettiTable(1, {0: [(-1,), (-5,), (-3,)], 1: [(1,), (0,), (-2,)]})


def test_dual_resolution_length_error():
    with pytest.raises(LengthError):
        dual_resolution(FreeComplex.from_maps(2, 2, 0, [((0, 0),)]))


@given(st.integers(0, 10**6), st.sampled_from([1, 2]), st.sampled_from([2, 3]))
def test_double_dual_and_betti_duality(seed, N, p):
    C = random_complex(seed, N=N, p=p, max_rank=14, grade_max=4)
    Ch = cone_complex(C)
    for d in range(Ch.lo, Ch.hi + 1):
        G = mfr_direct(Ch, d)
        if G.is_zero():
            continue
        assert resolution_length(G) == N
        D = dual_resolution(G)
        D.check()
        assert D.is_minimal()
        assert complexes_equal(dual_resolution(D), G)
        Gstar = mfr_direct(dagger(Ch), -(d + N))
        assert BettiTable.of(Gstar) == BettiTable.of(G).dual()


def test_mfr_direct_fixed_point_and_staircase():
    K = koszul(2, 3)
    G = mfr_direct(K, 0)
    assert G.gens == K.gens
    S = mfr_direct(staircase_complex(4), 0)
    assert S.gens_at(0) == ((1, 1),)
    assert sorted(S.gens_at(1)) == [(1, 2), (2, 1)]
    assert S.gens_at(2) == ((2, 2),)


def test_cohomological_route_small_cases():
    t = BettiTable.of(koszul(2))
    assert BettiTable.of(mfr_cohomological(koszul(2), 0)) == t
    C = chain_complex(triangle_filtration())
    a = BettiTable.of(mfr_direct(C, 1))
    assert a == BettiTable(2, {0: [(1, 1)], 1: [(2, 2)]})
    assert BettiTable.of(mfr_cohomological(C, 1)) == a
    assert mfr_cohomological(C, 0).is_zero()


@given(st.integers(0, 10**6))
def test_pipelines_match_oracle_on_small_bifiltrations(seed):
    K = random_filtration(seed, N=2, max_simplices=40, grade_max=5)
    C = chain_complex(K, reduced=False, p=3)
    box = GridBox((-1, -1), (6, 6))
    for d in range(K.dim + 1):
        direct = mfr_direct(C, d)
        assert direct.is_minimal()
        a = BettiTable.of(direct)
        assert a == BettiTable(2, betti_oracle(C, d, box))
        assert BettiTable.of(mfr_cohomological(C, d)) == a
        # H_0 of the resolution has the Hilbert function of H_d(C)
        hg = hilbert_homology_all(direct, box)
        hc = hilbert_homology_all(C, box, [d])
        for z in box.points():
            assert hg.at(0, z) == hc.at(d, z)
            assert hg.at(1, z) == hg.at(2, z) == 0
