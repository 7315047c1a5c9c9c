"""The eventually acyclic replacement of a free complex.

For a threshold zeta above every generator grade, P_S sends F(z) to
F(z v_S (zeta + 1)) and the inclusions P_S -> P_{S - s} assemble into a cube
of copies of C whose total complex has no homology outside the down-set of
zeta.  Restricting to that down-set gives C back.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complex import FreeComplex, koszul_sign, subsets
from .core import DimensionError, MPDError, grade_leq, join_masked


class ConeError(MPDError):
    pass


@dataclass(frozen=True)
class ConeThreshold:
    zeta: tuple

    def __post_init__(self):
        object.__setattr__(self, "zeta", tuple(self.zeta))


def _as_zeta(zeta) -> tuple:
    if isinstance(zeta, ConeThreshold):
        return zeta.zeta
    return tuple(zeta)


def default_zeta(C: FreeComplex) -> ConeThreshold:
    """The smallest admissible threshold: the join of all generator grades."""
    grades = C.all_grades()
    if not grades:
        raise ConeError("complex has no generators, so there is no default threshold")
    return ConeThreshold(tuple(max(c) for c in zip(*grades)))


def _blocks(C: FreeComplex, d: int) -> list:
    """Provenance of the generators of the cone in degree d: (S, index in C_{d-|S|})."""
    out = []
    for k in range(C.N + 1):
        for S in subsets(C.N, k):
            out.extend((S, i) for i in range(len(C.gens_at(d - k))))
    return out


def cone_provenance(C: FreeComplex) -> dict:
    return {d: _blocks(C, d) for d in range(C.lo, C.hi + C.N + 1)}


def cone_complex(C: FreeComplex, zeta=None) -> FreeComplex:
    """The total complex with Ĉ_d = sum over S of P_S C_{d-|S|}.

    Within a block the differential is (-1)^{|S|} times that of C; the
    inclusion P_S C -> P_{S - s_j} C carries the Koszul sign of dropping s_j.
    """
    zeta = default_zeta(C).zeta if zeta is None else _as_zeta(zeta)
    N, p = C.N, C.p
    if len(zeta) != N:
        raise DimensionError(f"threshold {zeta} does not have length {N}")
    for d in C.degrees:
        for i, g in enumerate(C.gens_at(d)):
            if not grade_leq(g, zeta):
                raise ConeError(f"threshold {zeta} is not above generator {i} of degree {d} at grade {g}")
    top = tuple(x + 1 for x in zeta)
    lo, hi = C.lo, C.hi + N
    prov = {d: _blocks(C, d) for d in range(lo, hi + 1)}
    gens = []
    for d in range(lo, hi + 1):
        gens.append(tuple(join_masked(C.gens_at(d - len(S))[i], top, S) for S, i in prov[d]))
    diffs = {}
    for d in range(lo + 1, hi + 1):
        pos = {key: r for r, key in enumerate(prov[d - 1])}
        cols = []
        for S, i in prov[d]:
            k = len(S)
            col = {}
            sgn = -1 if k % 2 else 1
            for r, v in C.diff(d - k).columns[i]:
                col[pos[(S, r)]] = sgn * v % p
            for j in range(1, k + 1):
                face = S[: j - 1] + S[j:]
                col[pos[(face, i)]] = koszul_sign(k, j) % p
            cols.append(col)
        diffs[d] = cols
    return FreeComplex.from_maps(N, p, lo, gens, diffs).check()


def restrict(X, zeta):
    """Delete every generator whose grade is not below ``zeta``.

    Works on a FreeComplex or a BettiTable.
    """
    from .resolve import BettiTable

    zeta = _as_zeta(zeta)
    if isinstance(X, BettiTable):
        return BettiTable(
            X.N, {d: tuple(g for g in gs if grade_leq(g, zeta)) for d, gs in X.table.items()}
        )
    if not isinstance(X, FreeComplex):
        raise TypeError(f"cannot restrict a {type(X).__name__}")
    if len(zeta) != X.N:
        raise DimensionError(f"threshold {zeta} does not have length {X.N}")
    keep = {d: [i for i, g in enumerate(X.gens_at(d)) if grade_leq(g, zeta)] for d in X.degrees}
    gens = [tuple(X.gens_at(d)[i] for i in keep[d]) for d in X.degrees]
    diffs = {d: X.diff(d).select(keep[d - 1], keep[d]) for d in range(X.lo + 1, X.hi + 1)}
    return FreeComplex.from_maps(X.N, X.p, X.lo, gens, diffs)
