"""Seeded random filtrations and free complexes for tests and the CLI."""

from __future__ import annotations

import random
from itertools import combinations

from .complex import (
    FreeComplex,
    Multifiltration,
    chain_complex,
    direct_sum,
    elementary_basis_change,
    koszul,
    shift_graded,
    shift_homological,
)
from .core import grade_leq, meet


def _grade(rng: random.Random, N: int, lo: int, hi: int) -> tuple:
    return tuple(rng.randint(lo, hi) for _ in range(N))


def random_filtration(
    seed: int | random.Random,
    N: int = 2,
    max_simplices: int = 60,
    grade_max: int = 8,
    dim: int = 2,
) -> Multifiltration:
    """A one-critical filtration of a random flag-like complex.

    Every simplex enters at the join of its facets' grades plus a small random
    delay, clipped to ``grade_max``.  Vertex 0 sits at the meet of all vertex
    grades so the reduced complex is free.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    n = rng.randint(2, max(2, min(max_simplices // 3, 40)))
    vgrades = [_grade(rng, N, 0, grade_max) for _ in range(n)]
    vgrades[0] = meet(*vgrades)
    simplices = [((v,), vgrades[v]) for v in range(n)]
    grade_of = {(v,): vgrades[v] for v in range(n)}
    p_edge = rng.uniform(0.15, 0.6)
    levels = [[(v,) for v in range(n)]]
    for k in range(1, dim + 1):
        prev = set(levels[-1])
        cand = []
        if k == 1:
            cand = [e for e in combinations(range(n), 2) if rng.random() < p_edge]
        else:
            verts = sorted({v for s in prev for v in s})
            for s in combinations(verts, k + 1):
                if all(s[:i] + s[i + 1 :] in prev for i in range(k + 1)) and rng.random() < 0.7:
                    cand.append(s)
        level = []
        for s in cand:
            if len(simplices) >= max_simplices:
                break
            faces = [s[:i] + s[i + 1 :] for i in range(len(s))]
            base = tuple(max(c) for c in zip(*[grade_of[f] for f in faces]))
            g = tuple(min(grade_max, max(x, x + rng.choice([0, 0, 1, 2]))) for x in base)
            grade_of[s] = g
            simplices.append((s, g))
            level.append(s)
        levels.append(level)
        if not level:
            break
    return Multifiltration(N, tuple(simplices))


def random_filtration_1d(seed, max_simplices: int = 30, grade_max: int = 10) -> Multifiltration:
    return random_filtration(seed, N=1, max_simplices=max_simplices, grade_max=grade_max)


# ---------------------------------------------------------------- complexes


def _segment(N: int, p: int, d: int, a: tuple, b: tuple, c: int) -> FreeComplex:
    """F(a) -> F(b) in degrees d+1 -> d, b <= a."""
    return FreeComplex.from_maps(N, p, d, [(b,), (a,)], {d + 1: [{0: c}]})


def random_complex(
    seed: int | random.Random,
    N: int = 2,
    p: int = 2,
    max_rank: int = 40,
    grade_max: int = 6,
    degrees: tuple = (0, 3),
    mix: int = 30,
) -> FreeComplex:
    """A random valid free complex assembled from free summands, segments,
    shifted Koszul complexes and small filtrations, then scrambled by graded
    changes of basis."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    lo, hi = degrees
    parts = []
    total = 0
    target = rng.randint(1, max_rank)
    while total < target:
        kind = rng.choice(["free", "segment", "segment", "koszul", "filtration"])
        d = rng.randint(lo, hi)
        if kind == "free":
            part = FreeComplex.from_maps(N, p, d, [(_grade(rng, N, 0, grade_max),)])
        elif kind == "segment":
            if d == hi:
                d = hi - 1 if hi > lo else d
            b = _grade(rng, N, 0, grade_max)
            a = tuple(rng.randint(x, grade_max) for x in b)
            part = _segment(N, p, d, a, b, rng.randint(1, p - 1))
        elif kind == "koszul":
            if total + 2**N > max_rank or hi - lo < 1:
                continue
            g = _grade(rng, N, 0, grade_max - 1)
            part = shift_graded(koszul(N, p), tuple(-x for x in g))
            part = shift_homological(part, -d)
        else:
            K = random_filtration(rng, N=N, max_simplices=min(8, max_rank - total), grade_max=grade_max, dim=2)
            part = chain_complex(K, reduced=False, p=p)
            part = shift_homological(part, -lo)
        size = part.total_rank()
        if total + size > max_rank:
            if total:
                break
            continue
        parts.append(part)
        total += size
    C = direct_sum(*parts)
    for _ in range(mix):
        d = rng.randint(C.lo, C.hi)
        gs = C.gens_at(d)
        if len(gs) < 2:
            continue
        j, k = rng.sample(range(len(gs)), 2)
        if grade_leq(gs[j], gs[k]):
            C = elementary_basis_change(C, d, k, j, rng.randint(1, p - 1))
    return C.check()
