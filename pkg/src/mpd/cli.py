"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (bad data, unsupported N, a
failed duality check), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys

from . import io as mio
from .complex import chain_complex, dagger
from .cone import cone_complex, default_zeta, restrict
from .core import MPDError
from .generate import random_complex, random_filtration
from .oracle import GridBox, barcode_1d, default_box, hilbert_homology, hilbert_homology_all, relative_barcode_1d
from .resolve import BettiTable, mfr_cohomological, mfr_direct


class UsageError(Exception):
    pass


def _grade_arg(text: str, N: int | None = None, what: str = "grade") -> tuple:
    try:
        g = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None
    if N is not None and len(g) != N:
        raise UsageError(f"{what} {text!r} has {len(g)} coordinates, expected {N}")
    return g


def _box_arg(text: str, N: int) -> GridBox:
    if ";" not in text:
        raise UsageError(f"--box must look like 'lo1,..,loN;hi1,..,hiN', got {text!r}")
    a, b = text.split(";", 1)
    lo, hi = _grade_arg(a, N, "box corner"), _grade_arg(b, N, "box corner")
    if any(x > y for x, y in zip(lo, hi)):
        raise UsageError(f"box corner {lo} is not below {hi}")
    return GridBox(lo, hi)


def _load_complex(args):
    if getattr(args, "complex", None):
        return mio.parse_complex(mio.read_text(args.complex), verify=not args.no_verify)
    if getattr(args, "filtration", None):
        K = mio.parse_filtration(mio.read_text(args.filtration))
        return chain_complex(K, reduced=not getattr(args, "unreduced", False))
    raise UsageError("an input is required: --complex FILE or --filtration FILE")


def _resolve(C, d: int, via: str):
    return mfr_direct(C, d) if via == "direct" else mfr_cohomological(C, d)


# ---------------------------------------------------------------- subcommands


def cmd_complex(args) -> int:
    K = mio.parse_filtration(mio.read_text(args.filtration))
    C = chain_complex(K, reduced=not args.unreduced, p=args.p)
    mio.write_text(args.output, mio.serialize_complex(C))
    return 0


def cmd_dagger(args) -> int:
    mio.write_text(args.output, mio.serialize_complex(dagger(_load_complex(args))))
    return 0


def cmd_cone(args) -> int:
    C = _load_complex(args)
    zeta = _grade_arg(args.zeta, C.N, "--zeta") if args.zeta else default_zeta(C)
    mio.write_text(args.output, mio.serialize_complex(cone_complex(C, zeta)))
    return 0


def cmd_restrict(args) -> int:
    if args.betti:
        B = mio.parse_betti(mio.read_text(args.betti))
        if not args.zeta:
            raise UsageError("restricting a Betti table needs --zeta")
        mio.write_text(args.output, mio.emit_betti(restrict(B, _grade_arg(args.zeta, B.N, "--zeta"))))
        return 0
    C = _load_complex(args)
    zeta = _grade_arg(args.zeta, C.N, "--zeta") if args.zeta else default_zeta(C)
    mio.write_text(args.output, mio.serialize_complex(restrict(C, zeta)))
    return 0


def cmd_hilbert(args) -> int:
    C = _load_complex(args)
    box = _box_arg(args.box, C.N) if args.box else default_box(C)
    h = hilbert_homology(C, box, args.deg) if args.deg is not None else hilbert_homology_all(C, box)
    mio.write_text(args.output, mio.emit_hilbert(h))
    return 0


def cmd_betti(args) -> int:
    C = _load_complex(args)
    G = C if args.deg is None else _resolve(C, args.deg, args.via)
    mio.write_text(args.output, mio.emit_betti(BettiTable.of(G)))
    return 0


def cmd_resolve(args) -> int:
    C = _load_complex(args)
    mio.write_text(args.output, mio.serialize_complex(_resolve(C, args.deg, args.via)))
    return 0


def cmd_barcode(args) -> int:
    if args.relative:
        if not args.filtration:
            raise UsageError("--relative needs --filtration")
        K = mio.parse_filtration(mio.read_text(args.filtration))
        bar = relative_barcode_1d(K, args.deg)
    else:
        bar = barcode_1d(_load_complex(args), args.deg)
    mio.write_text(args.output, mio.emit_barcode(bar))
    return 0


def cmd_verify_duality(args) -> int:
    C = _load_complex(args)
    N = C.N
    Ch, zeta = C, None
    if not args.no_cone:
        zeta = _grade_arg(args.zeta, N, "--zeta") if args.zeta else default_zeta(C).zeta
        Ch = cone_complex(C, zeta)
    box = _box_arg(args.box, N) if args.box else default_box(C, zeta)
    d = args.deg
    lhs = hilbert_homology(dagger(Ch), box.negated(), -(d + N))
    rhs = hilbert_homology(Ch, box, d)
    ok = True
    out = sys.stdout if args.output is None else open(args.output, "w", encoding="utf-8", newline="\n")
    try:
        for w in box.points():
            z = tuple(-x for x in w)
            a, b = lhs.at(-(d + N), z), rhs.at(d, w)
            status = "PASS" if a == b else "FAIL"
            ok &= a == b
            out.write(f"{status} z={','.join(map(str, z))} dual={a} primal={b}\n")
        out.write(("PASS" if ok else "FAIL") + f" degree {d}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0 if ok else 1


def cmd_random_filtration(args) -> int:
    K = random_filtration(args.seed, N=args.N, max_simplices=args.max_simplices, grade_max=args.grade_max)
    mio.write_text(args.output, mio.serialize_filtration(K))
    return 0


def cmd_random_complex(args) -> int:
    C = random_complex(args.seed, N=args.N, p=args.p, max_rank=args.max_rank, grade_max=args.grade_max)
    mio.write_text(args.output, mio.serialize_complex(C))
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mpd", description="Duality tools for multiparameter persistence.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def inputs(sp, filtration=True):
        sp.add_argument("--complex", help="input free complex (fcc)")
        if filtration:
            sp.add_argument("--filtration", help="input filtration (mpfil); built as a chain complex")
            sp.add_argument("--unreduced", action="store_true", help="skip the augmentation for --filtration")
        sp.add_argument("--no-verify", action="store_true", help="skip validity and d^2 = 0 checks on load")
        sp.add_argument("-o", "--output", help="output file (default: stdout)")

    sp = sub.add_parser("complex", help="filtration -> free chain complex")
    sp.add_argument("--filtration", required=True)
    sp.add_argument("--unreduced", action="store_true")
    sp.add_argument("-p", type=int, default=None, help="override the characteristic in the file")
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_complex)

    sp = sub.add_parser("dagger", help="global dual of a free complex")
    inputs(sp)
    sp.set_defaults(fn=cmd_dagger)

    sp = sub.add_parser("cone", help="eventually acyclic replacement")
    inputs(sp)
    sp.add_argument("--zeta", help="threshold g1,..,gN (default: join of all generator grades)")
    sp.set_defaults(fn=cmd_cone)

    sp = sub.add_parser("restrict", help="drop generators not below zeta")
    inputs(sp)
    sp.add_argument("--betti", help="restrict a Betti CSV instead of a complex")
    sp.add_argument("--zeta")
    sp.set_defaults(fn=cmd_restrict)

    sp = sub.add_parser("hilbert", help="Hilbert function of homology on a box")
    inputs(sp)
    sp.add_argument("--deg", type=int, help="homological degree (default: all)")
    sp.add_argument("--box", help="'lo1,..,loN;hi1,..,hiN'")
    sp.set_defaults(fn=cmd_hilbert)

    for name, fn, help_ in [
        ("betti", cmd_betti, "Betti table of a resolution, or of H_d with --deg"),
        ("resolve", cmd_resolve, "minimal free resolution of H_d"),
    ]:
        sp = sub.add_parser(name, help=help_)
        inputs(sp)
        sp.add_argument("--deg", type=int, required=name == "resolve")
        sp.add_argument("--via", choices=["direct", "cohomological"], default="direct")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("barcode", help="one-parameter barcode of H_d (or relative cohomology)")
    inputs(sp)
    sp.add_argument("--deg", type=int, required=True)
    sp.add_argument("--relative", action="store_true", help="barcode of H^deg(|K|, K) instead")
    sp.set_defaults(fn=cmd_barcode)

    sp = sub.add_parser("verify-duality", help="compare H^{d+N} of the dual cone with H_d of the cone")
    inputs(sp)
    sp.add_argument("--deg", type=int, required=True)
    sp.add_argument("--zeta")
    sp.add_argument("--box", help="window for H_d; the dual side uses its negation")
    sp.add_argument("--no-cone", action="store_true", help="skip coning (the identity usually fails then)")
    sp.set_defaults(fn=cmd_verify_duality)

    sp = sub.add_parser("random-filtration", help="seeded random one-critical filtration")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--N", type=int, default=2)
    sp.add_argument("--max-simplices", type=int, default=60)
    sp.add_argument("--grade-max", type=int, default=8)
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_random_filtration)

    sp = sub.add_parser("random-complex", help="seeded random free complex")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--N", type=int, default=2)
    sp.add_argument("-p", type=int, default=2)
    sp.add_argument("--max-rank", type=int, default=40)
    sp.add_argument("--grade-max", type=int, default=6)
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_random_complex)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"mpd: usage error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"mpd: {e}", file=sys.stderr)
        return 2
    except MPDError as e:
        print(f"mpd: error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
