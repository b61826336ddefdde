"""Command-line front end for reproducible experiment runs.

Subcommands: ``gen`` (emit tile-set files), ``count`` (exact counts),
``invariants`` (growth tables and trend read-outs), ``render`` (ASCII/SVG
pictures of sampled patterns), ``encode`` (density encodings of rational
functions with exact bound verification).

Exit codes: 0 success, 2 usage or input error, 3 resource cap exceeded,
4 empty result.  Every output starts with a ``# manifest:`` line echoing the
exact invocation and tool version, so runs are reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from . import constructions as cons
from . import hierarchy as hi
from .core import LatticeBasis
from .enumeration import ResourceLimitError, count_blocks, count_rect, periodic_points, sample_pattern
from .invariants import growth_table, trend_report
from .render import render_ascii, render_svg
from .ruleio import ParseError, load, save, serialize
from .turing import TmParseError, load_tm

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_EMPTY = 4


def _manifest(argv: list[str]) -> str:
    return f"# manifest: sft2d {__version__} :: {' '.join(argv)}"


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sft2d", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a tile-set file")
    g.add_argument("name", choices=["robinson", "padic", "traffic", "tsirelson", "polygrowth", "tm"])
    g.add_argument("--p", type=int, default=3)
    g.add_argument("--q", type=int)
    g.add_argument("--bh", default="")
    g.add_argument("--bv", default="")
    g.add_argument("--m", type=int, default=1, help="marking modulus for polygrowth")
    g.add_argument("--machine", help=".tm file for the tm generator")
    g.add_argument("-o", "--output", required=True)

    c = sub.add_parser("count", help="exact counting")
    c.add_argument("file")
    c.add_argument("--mode", choices=["rect", "blocks", "periodic"], required=True)
    c.add_argument("--k", type=int)
    c.add_argument("--j", type=int)
    c.add_argument("--w", type=int)
    c.add_argument("--h", type=int)
    c.add_argument("--lattice", help="a,b,c,d for basis vectors (a,b) and (c,d)")
    c.add_argument("--max-states", type=int, default=2_000_000)
    c.add_argument("--csv", action="store_true")

    iv = sub.add_parser("invariants", help="growth table and trend report")
    iv.add_argument("file")
    iv.add_argument("--k-list", required=True, help="comma-separated block sides")
    iv.add_argument("--j-extra", type=int, default=0)
    iv.add_argument("--max-states", type=int, default=2_000_000)
    iv.add_argument("--csv", action="store_true")

    r = sub.add_parser("render", help="render a sampled admissible pattern")
    r.add_argument("file")
    r.add_argument("--w", type=int, required=True)
    r.add_argument("--h", type=int, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--format", choices=["ascii", "svg"], default="ascii")
    r.add_argument("--max-states", type=int, default=2_000_000)
    r.add_argument("-o", "--output")

    e = sub.add_parser("encode", help="density encoding of a rational function")
    e.add_argument("--family", choices=["constant", "one-over-n", "alternating", "table"], required=True)
    e.add_argument("--params", default="")
    e.add_argument("--n-max", type=int, default=4)
    e.add_argument("--j-max", type=int, default=3)
    e.add_argument("--csv", action="store_true")
    return ap


def _cmd_gen(args, argv) -> int:
    name = args.name
    if name == "robinson":
        x = cons.robinson_x2()
    elif name == "padic":
        x = cons.p_adic_xp(args.p)
    elif name == "traffic":
        x = cons.traffic_light_F(args.p)
    elif name == "polygrowth":
        x = cons.poly_growth_x(args.p, args.m)
    elif name == "tsirelson":
        if args.q is None:
            print("tsirelson needs --q", file=sys.stderr)
            return EXIT_INPUT
        bh = [int(v) for v in args.bh.split(",") if v != ""]
        bv = [int(v) for v in args.bv.split(",") if v != ""]
        x = cons.tsirelson_y(args.p, args.q, bh, bv)
    else:
        if not args.machine:
            print("tm needs --machine FILE", file=sys.stderr)
            return EXIT_INPUT
        x = cons.tm_spacetime_sft(load_tm(args.machine))
    text = _manifest(argv) + "\n" + serialize(x)
    with open(args.output, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    print(f"wrote {args.output}: {x.alphabet.size} symbols, "
          f"{len(x.h_allowed)} h-pairs, {len(x.v_allowed)} v-pairs")
    return EXIT_OK


def _cmd_count(args, argv) -> int:
    x = load(args.file)
    print(_manifest(argv))
    if args.mode == "rect":
        w = args.w or args.k
        h = args.h or args.k
        if not w or not h:
            print("rect mode needs --k or --w/--h", file=sys.stderr)
            return EXIT_INPUT
        n = count_rect(x, w, h, max_states=args.max_states)
        if args.csv:
            print("mode,w,h,count")
            print(f"rect,{w},{h},{n}")
        else:
            print(f"rect {w}x{h}: {n}")
    elif args.mode == "blocks":
        if not args.k or not args.j:
            print("blocks mode needs --k and --j", file=sys.stderr)
            return EXIT_INPUT
        bc = count_blocks(x, args.k, args.j, max_states=args.max_states)
        if args.csv:
            print("mode,k,j,count")
            print(f"blocks,{bc.k},{bc.j},{bc.value}")
        else:
            print(f"blocks k={bc.k} in j={bc.j}: {bc.value}")
    else:
        if not args.lattice:
            print("periodic mode needs --lattice a,b,c,d", file=sys.stderr)
            return EXIT_INPUT
        a, b, c, d = (int(v) for v in args.lattice.split(","))
        n = periodic_points(x, LatticeBasis((a, b), (c, d)), max_rows=args.max_states)
        if args.csv:
            print("mode,lattice,count")
            print(f"periodic,{a};{b};{c};{d},{n}")
        else:
            print(f"periodic points for lattice ({a},{b}),({c},{d}): {n}")
    return EXIT_OK


def _cmd_invariants(args, argv) -> int:
    x = load(args.file)
    print(_manifest(argv))
    ks = [int(v) for v in args.k_list.split(",")]
    if x.is_empty:
        print("empty tile set: degenerate table, all estimators undefined")
        return EXIT_OK
    table = growth_table(x, ks, args.j_extra, max_states=args.max_states)
    print(table.to_csv() if args.csv else table.to_text(), end="")
    try:
        print(trend_report(table).to_text(), end="")
    except ValueError as e:
        print(f"trend: {e}")
    return EXIT_OK


def _cmd_render(args, argv) -> int:
    x = load(args.file)
    pat = sample_pattern(x, args.w, args.h, args.seed, max_states=args.max_states)
    if pat is None:
        print("no admissible pattern at this size", file=sys.stderr)
        return EXIT_EMPTY
    body = render_ascii(x, pat) if args.format == "ascii" else render_svg(x, pat)
    text = _manifest(argv) + "\n" + body if args.format == "ascii" else body.replace(
        "?>", f"?>\n<!-- {_manifest(argv)[2:]} -->", 1
    )
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return EXIT_OK


def _parse_fracs(params: str) -> list[Fraction]:
    return [Fraction(tok) for tok in params.split(",") if tok != ""]


def _cmd_encode(args, argv) -> int:
    if args.n_max > 5:
        print("n-max above 5 exceeds the default schedule's desk scale "
              f"(t_6 = 2^36 bits); requested n-max {args.n_max}", file=sys.stderr)
        return EXIT_RESOURCE
    if args.family == "constant":
        (c,) = _parse_fracs(args.params) or [Fraction(1, 2)]
        G = hi.family_constant(c)
    elif args.family == "one-over-n":
        G = hi.family_one_over_n()
    elif args.family == "alternating":
        c, d = _parse_fracs(args.params)
        G = hi.family_alternating(c, d)
    else:
        rows = []
        with open(args.params, "r", encoding="utf-8") as f:
            for line in f:
                line = line.split("#", 1)[0].strip()
                if line:
                    rows.append([Fraction(tok) for tok in line.split()])
        G = hi.family_table(rows)
    Gm = hi.monotonize(G)
    g = hi.encode_density(Gm)
    print(_manifest(argv))
    if args.csv:
        print("n,j,average,target,shifted_target,bound,pass,pass_shifted")
    for n in range(1, args.n_max + 1):
        for j in range(args.j_max + 1):
            r = hi.verify_block_bound(g, Gm, n, j)
            if args.csv:
                print(f"{r.n},{r.j},{r.average},{r.target},{r.shifted_target},"
                      f"{r.bound},{int(r.passed)},{int(r.passed_shifted)}")
            else:
                print(f"n={r.n} j={r.j}: avg={r.average} target={r.target} "
                      f"(shifted {r.shifted_target}) bound={r.bound} "
                      f"pass={r.passed} pass_shifted={r.passed_shifted}")
    print("# density estimates (avg-then-inf | inf-then-avg)")
    for est in hi.density_estimates(g, args.n_max, args.j_max):
        print(f"n={est.n}: {est.avg_then_inf} | {est.inf_then_avg}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code not in (0, None) else EXIT_OK
    try:
        if args.cmd == "gen":
            return _cmd_gen(args, argv)
        if args.cmd == "count":
            return _cmd_count(args, argv)
        if args.cmd == "invariants":
            return _cmd_invariants(args, argv)
        if args.cmd == "render":
            return _cmd_render(args, argv)
        return _cmd_encode(args, argv)
    except (ParseError, TmParseError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as e:
        print(f"resource cap: {e}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    raise SystemExit(main())
