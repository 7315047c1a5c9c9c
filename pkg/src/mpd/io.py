"""Text formats: ``mpfil`` filtrations, ``fcc`` free complexes, and CSV tables.

All documents are UTF-8 with LF line endings; ``#`` starts a comment that runs
to the end of the line.  Serialization is canonical, so equal values give
byte-identical documents.
"""

from __future__ import annotations

import csv
import io as _io
import math

from .complex import FiltrationError, FreeComplex, Multifiltration
from .core import GradedMatrix, MPDError, ValidationError, check_prime, grade_leq
from .oracle import Barcode, GridBox, HilbertFunction
from .resolve import BettiTable


class ParseError(MPDError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _lines(text: str):
    """Yield (line number, stripped content) for non-blank lines, comments removed."""
    for n, raw in enumerate(text.split("\n"), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            yield n, s


def _ints(tokens, n: int, what: str) -> list:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers in {what}, got {' '.join(tokens)!r}", n) from None


def _grade_text(g) -> str:
    return " ".join(str(x) for x in g)


# ---------------------------------------------------------------- mpfil


def parse_filtration(text: str) -> Multifiltration:
    rows = list(_lines(text))
    if not rows:
        raise ParseError("empty document; expected header 'mpfil <N> <p>'", 1)
    n0, head = rows[0]
    parts = head.split()
    if len(parts) != 3 or parts[0] != "mpfil":
        raise ParseError(f"expected header 'mpfil <N> <p>', got {head!r}", n0)
    N, p = _ints(parts[1:], n0, "header")
    if N < 1:
        raise ParseError(f"parameter count must be >= 1, got {N}", n0)
    try:
        check_prime(p)
    except MPDError as e:
        raise ParseError(str(e), n0) from None
    simplices = []
    where = {}
    for n, s in rows[1:]:
        if s.count(";") != 1:
            raise ParseError(f"expected '<grade> ; <vertices>', got {s!r}", n)
        left, right = s.split(";")
        g = tuple(_ints(left.split(), n, "grade"))
        verts = tuple(_ints(right.split(), n, "vertex list"))
        if len(g) != N:
            raise ParseError(f"grade has {len(g)} coordinates, expected {N}", n)
        if not verts:
            raise ParseError("simplex has no vertices", n)
        if any(v < 0 for v in verts) or list(verts) != sorted(set(verts)):
            raise ParseError(f"vertex ids {verts} must be sorted, distinct and nonnegative", n)
        if verts in where:
            raise FiltrationError(f"line {n}: simplex {verts} duplicates line {where[verts]}")
        where[verts] = n
        simplices.append((verts, g))
    if not simplices:
        raise FiltrationError("filtration has no simplices")
    grade_of = dict(simplices)
    for s, g in simplices:
        if len(s) < 2:
            continue
        for i in range(len(s)):
            face = s[:i] + s[i + 1 :]
            if face not in grade_of:
                raise FiltrationError(f"line {where[s]}: face {face} of simplex {s} is missing")
            if not grade_leq(grade_of[face], g):
                raise FiltrationError(
                    f"line {where[s]}: simplex {s} at {g} enters before its face {face} at {grade_of[face]}"
                )
    return Multifiltration(N, tuple(simplices), p)


def serialize_filtration(K: Multifiltration) -> str:
    out = [f"mpfil {K.N} {K.p}"]
    for s, g in K.simplices:
        out.append(f"{_grade_text(g)} ; {' '.join(str(v) for v in s)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- fcc


def parse_complex(text: str, verify: bool = True) -> FreeComplex:
    rows = list(_lines(text))
    if not rows:
        raise ParseError("empty document; expected header 'fcc <N> <p> <lo> <hi>'", 1)
    n0, head = rows[0]
    parts = head.split()
    if len(parts) != 5 or parts[0] != "fcc":
        raise ParseError(f"expected header 'fcc <N> <p> <lo> <hi>', got {head!r}", n0)
    N, p, lo, hi = _ints(parts[1:], n0, "header")
    if N < 1 or hi < lo:
        raise ParseError(f"bad header values N={N}, degrees [{lo}, {hi}]", n0)
    try:
        check_prime(p)
    except MPDError as e:
        raise ParseError(str(e), n0) from None
    gens: dict = {d: [] for d in range(lo, hi + 1)}
    cols: dict = {}
    seen_gens, seen_maps = set(), set()
    section = None
    for n, s in rows[1:]:
        tok = s.split()
        if tok[0] == "gens":
            if len(tok) != 2 or not tok[1].endswith(":"):
                raise ParseError(f"expected 'gens <d>:', got {s!r}", n)
            (d,) = _ints([tok[1][:-1]], n, "gens header")
            if d not in gens:
                raise ParseError(f"degree {d} outside [{lo}, {hi}]", n)
            if d in seen_gens:
                raise ParseError(f"generators of degree {d} listed twice", n)
            if seen_maps:
                raise ParseError("'gens' sections must precede all 'map' sections", n)
            seen_gens.add(d)
            section = ("gens", d)
        elif tok[0] == "map":
            if len(tok) != 2:
                raise ParseError(f"expected 'map <d>', got {s!r}", n)
            (d,) = _ints(tok[1:], n, "map header")
            if not lo < d <= hi:
                raise ParseError(f"differential {d} outside ({lo}, {hi}]", n)
            if d in seen_maps:
                raise ParseError(f"differential {d} listed twice", n)
            seen_maps.add(d)
            cols[d] = {}
            section = ("map", d)
        elif tok[0] == "col":
            if section is None or section[0] != "map":
                raise ParseError("'col' line outside a map section", n)
            d = section[1]
            if len(tok) < 2 or not tok[1].endswith(":"):
                raise ParseError(f"expected 'col <j>: <i>:<c> ...', got {s!r}", n)
            (j,) = _ints([tok[1][:-1]], n, "column index")
            ncols, nrows = len(gens[d]), len(gens[d - 1])
            if not 0 <= j < ncols:
                raise ParseError(f"column {j} out of range for differential {d} ({ncols} columns)", n)
            if j in cols[d]:
                raise ParseError(f"column {j} of differential {d} listed twice", n)
            entries = []
            last = -1
            for pair in tok[2:]:
                if pair.count(":") != 1:
                    raise ParseError(f"expected '<row>:<coefficient>', got {pair!r}", n)
                i, c = _ints(pair.split(":"), n, "entry")
                if not 0 <= i < nrows:
                    raise ParseError(f"row {i} out of range for differential {d} ({nrows} rows)", n)
                if i <= last:
                    raise ParseError(f"rows must be strictly ascending in column {j}", n)
                if not 0 <= c < p:
                    raise ParseError(f"coefficient {c} is not a residue mod {p}", n)
                last = i
                entries.append((i, c))
            cols[d][j] = entries
        else:
            if section is None or section[0] != "gens":
                raise ParseError(f"unexpected line {s!r}", n)
            d = section[1]
            g = tuple(_ints(tok, n, "grade"))
            if len(g) != N:
                raise ParseError(f"grade has {len(g)} coordinates, expected {N}", n)
            gens[d].append(g)
    mats = {}
    for d, cd in cols.items():
        data = [cd.get(j, ()) for j in range(len(gens[d]))]
        mats[d] = GradedMatrix(tuple(gens[d - 1]), tuple(gens[d]), tuple(data), p)
    C = FreeComplex.from_maps(N, p, lo, [tuple(gens[d]) for d in range(lo, hi + 1)], mats)
    if verify:
        C.check()
    return C


def serialize_complex(C: FreeComplex) -> str:
    out = [f"fcc {C.N} {C.p} {C.lo} {C.hi}"]
    for d in C.degrees:
        out.append(f"gens {d}:")
        out.extend(_grade_text(g) for g in C.gens_at(d))
    for d in range(C.lo + 1, C.hi + 1):
        out.append(f"map {d}")
        for j, col in enumerate(C.diff(d).columns):
            if col:
                out.append(f"col {j}: " + " ".join(f"{i}:{v}" for i, v in col))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- CSV


def _csv(rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _colex(g) -> tuple:
    return tuple(reversed(g))


def emit_betti(table: BettiTable) -> str:
    """``degree,g1..gN,multiplicity``; rows by degree, then grades in colex order."""
    N = table.N
    rows = [["degree"] + [f"g{i + 1}" for i in range(N)] + ["multiplicity"]]
    for d in sorted(table.table):
        counts: dict = {}
        for g in table.table[d]:
            counts[g] = counts.get(g, 0) + 1
        for g in sorted(counts, key=_colex):
            rows.append([d, *g, counts[g]])
    return _csv(rows)


def _read_csv(text: str, expect: list) -> list:
    body = [(n, s) for n, s in _lines(text)]
    if not body:
        raise ParseError("empty CSV document", 1)
    n0, head = body[0]
    cells = next(csv.reader([head]))
    if cells != expect:
        raise ParseError(f"expected header {','.join(expect)}, got {head!r}", n0)
    out = []
    for n, s in body[1:]:
        cells = next(csv.reader([s]))
        if len(cells) != len(expect):
            raise ParseError(f"expected {len(expect)} fields, got {len(cells)}", n)
        out.append((n, cells))
    return out


def parse_betti(text: str, N: int | None = None) -> BettiTable:
    first = next(iter(_lines(text)), (1, ""))[1]
    n_fields = len(first.split(","))
    if N is None:
        N = n_fields - 2
    expect = ["degree"] + [f"g{i + 1}" for i in range(N)] + ["multiplicity"]
    table: dict = {}
    for n, cells in _read_csv(text, expect):
        d, *g, m = _ints(cells, n, "Betti row")
        if m < 0:
            raise ParseError(f"negative multiplicity {m}", n)
        table.setdefault(d, []).extend([tuple(g)] * m)
    return BettiTable(N, table)


def emit_hilbert(h: HilbertFunction) -> str:
    """``d,z1..zN,dim`` for every degree and every grade of the box (lex order)."""
    N = h.box.N
    rows = [["d"] + [f"z{i + 1}" for i in range(N)] + ["dim"]]
    for d in h.degrees:
        for z in h.box.points():
            rows.append([d, *z, h.at(d, z)])
    return _csv(rows)


def parse_hilbert(text: str) -> HilbertFunction:
    first = next(iter(_lines(text)), (1, ""))[1]
    N = len(first.split(",")) - 2
    if N < 1:
        raise ParseError("Hilbert CSV needs at least one grade column", 1)
    expect = ["d"] + [f"z{i + 1}" for i in range(N)] + ["dim"]
    values = {}
    for n, cells in _read_csv(text, expect):
        d, *z, v = _ints(cells, n, "Hilbert row")
        values[(d, tuple(z))] = v
    if not values:
        raise ParseError("Hilbert CSV has no rows", None)
    zs = [z for _, z in values]
    box = GridBox(tuple(min(c) for c in zip(*zs)), tuple(max(c) for c in zip(*zs)))
    return HilbertFunction(box, values)


def emit_barcode(b) -> str:
    """``degree,birth,death`` with ``inf`` for an infinite death.  Accepts one
    Barcode or a list of them."""
    bars = [b] if isinstance(b, Barcode) else list(b)
    rows = [["degree", "birth", "death"]]
    for bar in sorted(bars, key=lambda x: x.degree):
        for s, t in bar.intervals:
            rows.append([bar.degree, s, "inf" if t == math.inf else t])
    return _csv(rows)


def parse_barcode(text: str) -> list:
    by_deg: dict = {}
    for n, (d, s, t) in _read_csv(text, ["degree", "birth", "death"]):
        (d, s) = _ints([d, s], n, "barcode row")
        death = math.inf if t.strip() == "inf" else _ints([t], n, "death")[0]
        by_deg.setdefault(d, []).append((s, death))
    try:
        return [Barcode(d, tuple(v)) for d, v in sorted(by_deg.items())]
    except MPDError as e:
        raise ParseError(str(e)) from None


def read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        import sys

        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


__all__ = [
    "ParseError",
    "ValidationError",
    "emit_barcode",
    "emit_betti",
    "emit_hilbert",
    "parse_barcode",
    "parse_betti",
    "parse_complex",
    "parse_filtration",
    "parse_hilbert",
    "serialize_complex",
    "serialize_filtration",
]
