"""Command-line front end.

Subcommands: kh (classical bigraded homology = page 1), filtered (filtered
homology dims and filtration profile), ss (spectral pages), s (filtration
extremes and slice bounds), gens (canonical generators), movie (induced
cobordism map report), selftest (invariant suite on a built-in corpus).

Exit codes: 0 success, 1 input error, 2 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .algebra import FrobeniusParams, ParameterError, PRESETS
from .canonical import canonical_generators, generator_class_rank
from .cobordism import (
    Movie,
    MovieError,
    compatible_states,
    dry_run,
    expand_on_canonical,
    induced_map,
    parse_movie_text,
)
from .complexes import ResourceCapError, build_complex
from .diagram import DiagramError, ParseError, mirror, parse_braid, parse_pd, read_diagram_text
from .homology import filtered_homology, filtration_levels, khovanov_homology, slice_bounds
from .spectral import all_pages

SCHEMA = "filtkh/1"


def _jval(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)
    return x


def _dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _parse_params(text):
    if text in PRESETS:
        return PRESETS[text]
    fields = {}
    for part in text.split(","):
        key, sep, val = part.partition(":")
        if not sep:
            raise ParameterError("bad --params %r" % text)
        fields[key.strip()] = Fraction(val.strip())
    if set(fields) == {"a", "h"}:
        return FrobeniusParams.from_ah(fields["a"], fields["h"])
    if set(fields) == {"alpha", "beta"}:
        return FrobeniusParams.from_roots(fields["alpha"], fields["beta"])
    raise ParameterError(
        "--params wants lee, bar-natan, a:<r>,h:<r> or alpha:<r>,beta:<r>"
    )


def _load_diagram(args):
    sources = [s for s in (args.input, args.pd, args.braid) if s]
    if len(sources) != 1:
        raise ParseError("give exactly one diagram: a file, --pd or --braid")
    if args.pd is not None:
        d = parse_pd(args.pd)
    elif args.braid is not None:
        toks = args.braid.replace(",", " ").split()
        if len(toks) < 1:
            raise ParseError("--braid wants '<strands> <letters...>'")
        d = parse_braid([int(x) for x in toks[1:]], int(toks[0]))
    else:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError("cannot read %s: %s" % (args.input, exc))
        d = read_diagram_text(text)
    if not d.crossings and not d.loops:
        raise ParseError("empty input: the diagram has no crossings and no loops")
    if args.outer:
        from .diagram import LinkDiagram

        d = LinkDiagram(d.crossings, loops=d.loops, outer_face_hint=args.outer)
    if args.mirror:
        d = mirror(d)
    return d


def _meta(d, p, args):
    return {
        "schema": SCHEMA,
        "version": __version__,
        "diagram": {
            "pd": d.pd_text(),
            "crossings": d.n_crossings,
            "n_plus": d.n_plus,
            "n_minus": d.n_minus,
            "components": d.n_components(),
        },
        "params": {
            "label": p.label(),
            "a": _jval(p.a), "h": _jval(p.h),
            "alpha": _jval(p.alpha), "beta": _jval(p.beta),
        },
        "convention": {
            "sign": "cube-alternating",
            "q": "deg - r - writhe",
            "mirror": bool(args.mirror),
        },
    }


def _table(rows, headers):
    rows = [[str(x) for x in row] for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    out = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for r in rows:
        out.append("  ".join(x.rjust(w) for x, w in zip(r, widths)).rstrip())
    return "\n".join(out) + "\n"


def cmd_kh(args, d, p):
    c = build_complex(d, p, max_crossings=args.max_crossings)
    kh = khovanov_homology(c)
    doc = _meta(d, p, args)
    doc["kh"] = sorted([r, q, dim] for (r, q), dim in kh.items())
    doc["total"] = sum(kh.values())
    if args.format == "json":
        return _dumps(doc)
    return _table(doc["kh"], ["r", "q", "dim"]) + "total %d\n" % doc["total"]


def cmd_filtered(args, d, p):
    c = build_complex(d, p, max_crossings=args.max_crossings)
    fh = filtered_homology(c)
    s = filtration_levels(c)
    doc = _meta(d, p, args)
    doc["filtered"] = sorted([r, dim] for r, dim in fh.items())
    doc["total"] = sum(fh.values())
    doc["profile"] = {
        str(r): sorted([k, v] for k, v in per.items())
        for r, per in s.profile.items()
    }
    if args.format == "json":
        return _dumps(doc)
    out = _table(doc["filtered"], ["r", "dim"]) + "total %d\n" % doc["total"]
    for r in sorted(s.profile):
        prof = ", ".join("F^%d:%d" % (k, v) for k, v in sorted(s.profile[r].items()) if v)
        out += "r=%d  %s\n" % (r, prof)
    return out


def cmd_ss(args, d, p):
    c = build_complex(d, p, max_crossings=args.max_crossings)
    pages = all_pages(c, max_page=args.max_page)
    doc = _meta(d, p, args)
    doc["pages"] = [
        {
            "k": pg.k,
            "cells": sorted([r, q, dim] for (r, q), dim in pg.cells.items()),
            "dranks": sorted([r, q, rk] for (r, q), rk in pg.dranks.items()),
            "collapsed": pg.collapsed,
            "total": pg.total_dim(),
        }
        for pg in pages
    ]
    if args.format == "json":
        return _dumps(doc)
    out = ""
    for pg in doc["pages"]:
        out += "E_%d  total %d%s\n" % (
            pg["k"], pg["total"], "  (collapsed)" if pg["collapsed"] else "")
        out += _table(pg["cells"], ["r", "q", "dim"])
        if pg["dranks"]:
            out += "d_%d ranks:\n" % pg["k"] + _table(pg["dranks"], ["r", "q", "rank"])
    return out


def cmd_s(args, d, p):
    c = build_complex(d, p, max_crossings=args.max_crossings)
    s = filtration_levels(c)
    chi_bound, genus_bound = slice_bounds(s)
    doc = _meta(d, p, args)
    doc["s"] = {k: _jval(v) for k, v in s.as_dict().items()}
    doc["bounds"] = {"chi": chi_bound}
    if genus_bound is not None:
        doc["bounds"]["genus"] = _jval(genus_bound)
    if args.format == "json":
        return _dumps(doc)
    out = "smin %d  smax %d" % (s.s_min, s.s_max)
    if s.s_bar is not None:
        out += "  sbar %s" % _jval(s.s_bar)
    out += "\nslice Euler characteristic <= %d" % chi_bound
    if genus_bound is not None:
        out += "\nslice genus >= %s" % _jval(genus_bound)
    return out + "\n"


def cmd_gens(args, d, p):
    c = build_complex(d, p, max_crossings=args.max_crossings)
    gens = canonical_generators(c)
    rank = generator_class_rank(c, gens)
    doc = _meta(d, p, args)
    doc["generators"] = [g.as_dict() for g in gens]
    doc["class_rank"] = rank
    if args.format == "json":
        return _dumps(doc)
    rows = [
        [g["state"], g["vertex"], g["hdeg"], g["qlevel"],
         " ".join("%s:%s" % (cc["id"], cc["idempotent"]) for cc in g["circles"])]
        for g in doc["generators"]
    ]
    return _table(rows, ["state", "vertex", "r", "q", "circles"]) + \
        "class rank %d of %d\n" % (rank, len(gens))


def cmd_movie(args, d, p):
    if not args.movie:
        raise MovieError("the movie subcommand needs --movie FILE")
    try:
        with open(args.movie, "r", encoding="utf-8") as fh:
            events = parse_movie_text(fh.read())
    except OSError as exc:
        raise MovieError("cannot read %s: %s" % (args.movie, exc))
    movie = Movie(d, events)
    if args.dry_run:
        return dry_run(movie) + "\n"
    res = induced_map(movie, p, max_crossings=args.max_crossings)
    doc = _meta(d, p, args)
    doc["chi"] = res.chi
    doc["filtration_degree"] = res.composite.fdegree
    doc["chain_map"] = res.composite.is_chain_map()
    doc["homology_rank"] = res.composite.homology_rank()
    doc["final_diagram"] = res.diagrams[-1].pd_text()
    transports = []
    from .canonical import canonical_states

    for state in canonical_states(d):
        exp = expand_on_canonical(res.composite, state)
        compat = compatible_states(res, state)
        transports.append({
            "state": "".join("ab"[b] for b in state),
            "image": sorted(
                ["".join("ab"[b] for b in st), _jval(x)] for st, x in exp.items()
            ),
            "compatible": sorted("".join("ab"[b] for b in st) for st in compat),
        })
    doc["transport"] = transports
    if args.format == "json":
        return _dumps(doc)
    out = "chi %d, filtration degree %d, chain map %s, homology rank %d\n" % (
        res.chi, res.composite.fdegree, doc["chain_map"], doc["homology_rank"])
    out += "final: %s\n" % doc["final_diagram"]
    for t in transports:
        img = " + ".join("%s.h_%s" % (x, st) for st, x in t["image"]) or "0"
        out += "h_%s -> %s   (compatible: %s)\n" % (
            t["state"], img, " ".join(t["compatible"]) or "-")
    return out


def cmd_selftest(args, d, p):
    from .spectral import compare_pages, limit_cells, page

    failures = []
    corpus = [
        ("unknot", parse_braid([], 1)),
        ("unlink2", parse_braid([], 2)),
        ("kink+", parse_braid([1], 2)),
        ("hopf", parse_braid([1, 1], 2)),
        ("trefoil", parse_braid([1, 1, 1], 2)),
        ("figure8", parse_braid([1, -2, 1, -2], 3)),
    ]
    lines = []
    for name, dg in corpus:
        for plabel, params in PRESETS.items():
            c = build_complex(dg, params)
            ok = True
            for r in c.degrees():
                if not c.differential(r + 1).compose(c.differential(r)).is_zero():
                    ok = False
                if not c.top_differential(r + 1).compose(c.top_differential(r)).is_zero():
                    ok = False
            total = sum(filtered_homology(c).values())
            if total != 2 ** dg.n_components():
                ok = False
            e1 = page(c, 1).cells
            if e1 != khovanov_homology(c):
                ok = False
            if generator_class_rank(c) != 2 ** dg.n_components():
                ok = False
            lines.append("%s %s/%s" % ("PASS" if ok else "FAIL", name, plabel))
            if not ok:
                failures.append(name)
    out = "\n".join(lines) + "\n"
    if failures:
        raise RuntimeError(out + "selftest failures: %s" % sorted(set(failures)))
    return out


COMMANDS = {
    "kh": cmd_kh,
    "filtered": cmd_filtered,
    "ss": cmd_ss,
    "s": cmd_s,
    "gens": cmd_gens,
    "movie": cmd_movie,
    "selftest": cmd_selftest,
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="filtkh",
        description="Exact filtered sl(2) link cohomology calculator",
    )
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("input", nargs="?", help="diagram file (pd:/braid:/outer: lines)")
    ap.add_argument("--pd", help="inline PD code, e.g. 'X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]'")
    ap.add_argument("--braid", help="inline braid: '<strands> <letters...>'")
    ap.add_argument("--params", default="lee",
                    help="lee | bar-natan | a:<r>,h:<r> | alpha:<r>,beta:<r>")
    ap.add_argument("--mirror", action="store_true", help="mirror the diagram first")
    ap.add_argument("--format", choices=("json", "table"), default="table")
    ap.add_argument("--max-page", type=int, default=None)
    ap.add_argument("--max-crossings", type=int, default=14)
    ap.add_argument("--outer", default=None, help="outer face hint, e.g. f3")
    ap.add_argument("--movie", default=None, help="movie file for the movie subcommand")
    ap.add_argument("--dry-run", action="store_true",
                    help="movie: print intermediate diagrams only")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        params = _parse_params(args.params)
        if args.command == "selftest":
            d = None
        else:
            d = _load_diagram(args)
        out = COMMANDS[args.command](args, d, params)
    except ResourceCapError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except (ParseError, DiagramError, ParameterError, MovieError, ValueError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 1
    except RuntimeError as exc:
        sys.stderr.write("%s\n" % exc)
        return 1
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
