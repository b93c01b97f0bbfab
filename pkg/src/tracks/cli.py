"""Command line front end: JSON reports on stdout, diagnostics on stderr.

Exit codes: 0 verdict computed, 2 inconclusive (budget exhausted or
radius-unstable), 1 input error.  Reports are schema-versioned and byte
reproducible for identical inputs and flags.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import fixtures
from .complex2 import CoverSpec, InputError, build_cyclic_cover, parse_complex
from .ends import complement_components, end_count_estimate, is_essential, is_splitting_vertex, splits
from .hypgeom import assign_structure
from .intersect import NonTransverse, frontier_regions
from .normalize import normalize
from .pattern import Pattern, PatternError, component_split, is_normal, orient_pattern
from .render import render_svg
from .search import shortest_pattern

SCHEMA = "tracks-report/1"


def _digest(text):
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _fnum(x):
    return float(format(x, ".12g"))


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_complex(path):
    text = _read(path)
    return parse_complex(text), {path: _digest(text)}


def _load_pattern(path, Y):
    text = _read(path)
    pat = Pattern.from_text(text)
    pat.validate(Y, allow_loose=True)
    return pat, {path: _digest(text)}


def _report(args, inputs, result):
    return {
        "schema": SCHEMA,
        "command": args.command,
        "inputs": inputs,
        "flags": {
            k: v
            for k, v in sorted(vars(args).items())
            if k not in ("command", "func") and v is not None
        },
        "result": result,
    }


def _emit(args, inputs, result, code=0):
    print(json.dumps(_report(args, inputs, result), sort_keys=True, indent=2))
    return code


def _cover_spec(args, Y):
    if getattr(args, "subgroup_word", None):
        return CoverSpec(subgroup_words=list(args.subgroup_word),
                         coset_bound=args.coset_bound or 100)
    if getattr(args, "universal", False):
        return CoverSpec(subgroup_words=[], coset_bound=args.coset_bound or 100)
    if not Y.cocycle:
        raise InputError("complex file carries no cocycle and no subgroup words were given")
    return CoverSpec(cocycle=Y.cocycle, cocycle2=Y.cocycle2 or None)


def _build_cover(args, Y, radius):
    spec = _cover_spec(args, Y)
    if spec.subgroup_words is not None:
        spec = CoverSpec(subgroup_words=spec.subgroup_words, coset_bound=radius)
        return build_cyclic_cover(Y, spec, "truncated")
    return build_cyclic_cover(Y, spec, "truncated", radius=radius)


# -- commands -------------------------------------------------------------------


def cmd_validate(args):
    Y, inputs = _load_complex(args.complex)
    links = {}
    for v in Y.vertices:
        link = Y.vertex_link(v)
        links[v] = {
            "nodes": len(link.nodes),
            "segments": len(link.segments),
            "components": len(link.components()),
            "circle": link.is_circle(),
        }
    result = {
        "vertices": len(Y.vertices),
        "edges": len(Y.edges),
        "triangles": len(Y.triangles),
        "euler_characteristic": Y.euler_characteristic(),
        "free_edges": Y.free_edges(),
        "valences": {e: Y.valence(e) for e in Y.edge_ids},
        "frontier_regions": sorted(str(k) for k in frontier_regions(Y)),
        "vertex_links": links,
    }
    return _emit(args, inputs, result)


def cmd_cover(args):
    Y, inputs = _load_complex(args.complex)
    spec = _cover_spec(args, Y)
    if args.mode == "finite":
        cov = build_cyclic_cover(Y, spec, "finite", degree=args.degree)
    else:
        if spec.subgroup_words is not None:
            spec = CoverSpec(subgroup_words=spec.subgroup_words,
                             coset_bound=args.coset_bound or args.radius or 100)
            cov = build_cyclic_cover(Y, spec, "truncated")
        else:
            cov = build_cyclic_cover(Y, spec, "truncated", radius=args.radius or 2)
    C = cov.complex
    result = {
        "kind": cov.kind,
        "vertices": len(C.vertices),
        "edges": len(C.edges),
        "triangles": len(C.triangles),
        "frontier_regions": sorted(str(k) for k in frontier_regions(C)),
        "warnings": cov.warnings,
    }
    if cov.deck is not None:
        result["deck_order"] = cov.degree
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(C.to_text())
        result["written"] = args.out
    return _emit(args, inputs, result, 2 if cov.warnings else 0)


def cmd_normalize(args):
    Y, inputs = _load_complex(args.complex)
    pat, more = _load_pattern(args.pattern, Y)
    inputs.update(more)
    res = normalize(pat, Y)
    result = {
        "one_sided_input": res.one_sided,
        "move_log": res.log.to_json(),
        "weight": res.pattern.weight(),
        "is_normal": is_normal(res.pattern)[0],
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(res.pattern.to_text())
        result["written"] = args.out
    return _emit(args, inputs, result)


def _shortest_once(args, Y, radius):
    cov = _build_cover(args, Y, radius)
    H = assign_structure(cov.complex)
    res = shortest_pattern(cov.complex, args.mode, args.weight_bound, H,
                           tol=args.tol, max_iter=args.max_iter,
                           tie_break=args.tie_break)
    return cov, res


def cmd_shortest(args):
    Y, inputs = _load_complex(args.complex)
    if args.radius is None:
        target = Y
        H = assign_structure(target)
        res = shortest_pattern(target, args.mode, args.weight_bound, H,
                               tol=args.tol, max_iter=args.max_iter,
                               tie_break=args.tie_break)
        runs = [(None, res)]
        stable = None
    else:
        _, res = _shortest_once(args, Y, args.radius)
        _, res2 = _shortest_once(args, Y, args.radius + 1)
        runs = [(args.radius, res), (args.radius + 1, res2)]
        if res.found() != res2.found():
            stable = False
        elif not res.found():
            stable = True
        else:
            stable = (res.complexity.weight == res2.complexity.weight
                      and abs(res.complexity.length - res2.complexity.length) < 1e-6)
    payload = []
    for radius, r in runs:
        entry = {"radius": radius, "found": r.found()}
        if r.found():
            entry.update({
                "weight": r.complexity.weight,
                "length": _fnum(r.complexity.length),
                "checks": {k: (v if not isinstance(v, float) else _fnum(v))
                           for k, v in r.checks.items() if k != "coincidences"},
                "pattern": r.pattern.to_text(),
            })
        payload.append(entry)
    result = {"runs": payload, "radius_stable": stable}
    first = runs[0][1]
    code = 0 if first.found() and (stable is None or stable) else 2
    return _emit(args, inputs, result, code)


def cmd_ends(args):
    Y, inputs = _load_complex(args.complex)
    result = {}
    code = 0
    if args.pattern:
        pat, more = _load_pattern(args.pattern, Y)
        inputs.update(more)
        target = Y
        if args.radius is not None:
            cov = _build_cover(args, Y, args.radius)
            target = cov.complex
        rep = complement_components(target, pat)
        result["complement"] = {
            "components": [
                {"key": c.key, "cells": len(c.cells), "infinite": c.infinite,
                 "bounding": c.bounding,
                 "orientation_summary": {str(k): v for k, v in c.orientation_summary.items()}}
                for c in rep.components
            ],
            "splits": splits(target, pat),
        }
        if pat.orientation is not None:
            verdict, witness = is_essential(target, pat)
            result["essential"] = verdict
            if witness is not None:
                result["witness_line"] = witness.to_text() if hasattr(witness, "to_text") else str(witness.steps)
        result["splitting_vertices"] = sorted(
            v for v in target.vertices if is_splitting_vertex(target, v)[0]
        )
    else:
        if args.radius is None:
            raise InputError("ends needs --radius (or a pattern to analyse)")
        cov_k = _build_cover(args, Y, args.radius)
        cov_k1 = _build_cover(args, Y, args.radius2 or args.radius + 1)
        est = end_count_estimate(cov_k, cov_k1)
        result["end_count_lower_bound"] = est.count
        result["stable"] = est.stable
        result["frontier_regions"] = [est.regions_small, est.regions_big]
        code = 0 if est.stable else 2
    return _emit(args, inputs, result, code)


def cmd_cross(args):
    from .axes import axis_from_pattern, crosses_with_type, four_regions

    Y, inputs = _load_complex(args.complex)
    pa, more_a = _load_pattern(args.pattern_a, Y)
    pb, more_b = _load_pattern(args.pattern_b, Y)
    inputs.update(more_a)
    inputs.update(more_b)
    A = axis_from_pattern(Y, pa)
    B = axis_from_pattern(Y, pb)
    rep = crosses_with_type(Y, A, B)
    result = {
        "verdict": rep.verdict,
        "b_crosses_a": rep.b_crosses_a,
        "a_crosses_b": rep.a_crosses_b,
        "type": rep.crossing_type,
        "sides_of_b_ends": {str(k): v for k, v in rep.side_of_b_ends.items()},
        "sides_of_a_ends": {str(k): v for k, v in rep.side_of_a_ends.items()},
    }
    if rep.verdict == "crosses" and rep.b_crosses_a and rep.a_crosses_b:
        fr = four_regions(Y, A, B)
        result["four_regions"] = {
            "assignment": {str(k): v for k, v in sorted(fr.assignment.items())},
            "infinite_components": fr.infinite_components,
            "aligned": fr.aligned,
        }
    code = 2 if rep.verdict == "unresolved" else 0
    return _emit(args, inputs, result, code)


def _load_translates(args, Y):
    out = []
    inputs = {}
    for item in args.translate or []:
        if "=" not in item:
            raise InputError(f"translate must be label=path, got {item!r}")
        label, path = item.split("=", 1)
        pat, more = _load_pattern(path, Y)
        inputs.update(more)
        from .axes import axis_from_pattern

        out.append((label, axis_from_pattern(Y, pat)))
    return out, inputs


def cmd_triple(args):
    from .axes import axis_from_pattern, good_triple_check, select_nearest_axis

    Y, inputs = _load_complex(args.complex)
    pat, more = _load_pattern(args.pattern, Y)
    inputs.update(more)
    A = axis_from_pattern(Y, pat)
    family, more = _load_translates(args, Y)
    inputs.update(more)
    if not family:
        raise InputError("triple needs at least one --translate")
    rep = select_nearest_axis(Y, A, family)
    result = {
        "nearest": rep.nearest_label,
        "side_sets": {k: sorted(str(r) for r in v) for k, v in rep.side_sets.items()},
        "unresolved": [[str(l), m] for l, m in rep.unresolved],
    }
    if rep.nearest_label is not None and args.third is not None:
        H = assign_structure(Y)
        third, more = _load_pattern(args.third, Y)
        inputs.update(more)
        D = dict(family)[rep.nearest_label]
        good, why = good_triple_check(Y, H, A, D, axis_from_pattern(Y, third))
        result["good"] = good
        result["good_detail"] = why
    code = 0 if rep.nearest_label is not None else 2
    return _emit(args, inputs, result, code)


def cmd_check51(args):
    from .axes import axis_from_pattern, check_splitting_conditions

    Y, inputs = _load_complex(args.complex)
    pat, more = _load_pattern(args.pattern, Y)
    inputs.update(more)
    axis = axis_from_pattern(Y, pat)
    family, more = _load_translates(args, Y)
    inputs.update(more)
    H = assign_structure(Y)
    conditions = check_splitting_conditions(Y, H, axis, family)
    result = {
        name: {"passed": rep.passed, "detail": rep.detail}
        for name, rep in sorted(conditions.items())
    }
    result["all_passed"] = all(rep.passed for rep in conditions.values())
    return _emit(args, inputs, result)


def cmd_render(args):
    Y, inputs = _load_complex(args.complex)
    pats = []
    for path in args.pattern or []:
        pat, more = _load_pattern(path, Y)
        inputs.update(more)
        pats.append(pat)
    if args.replay and pats:
        res = normalize(pats[0], Y)
        steps = [pats[0]]
        work = pats[0]
        # re-run the log to materialize intermediate states
        from .normalize import _delete_circle, _resolve_arc

        for move in res.log.moves:
            if move["move"] == "delete_circle":
                work = _delete_circle(work, move["triangle"])
            else:
                work = _resolve_arc(work, Y, (move["triangle"], *move["chord"]))
            steps.append(work)
        written = []
        stem = args.out or "replay.svg"
        stem = stem[:-4] if stem.endswith(".svg") else stem
        for i, st in enumerate(steps):
            path = f"{stem}.{i}.svg"
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(render_svg(Y, [st]))
            written.append(path)
        return _emit(args, inputs, {"written": written})
    svg = render_svg(Y, pats)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(svg)
        return _emit(args, inputs, {"written": args.out})
    sys.stdout.write(svg)
    return 0


def cmd_fixture(args):
    maker = fixtures.ALL.get(args.name)
    if maker is None:
        raise InputError(f"unknown fixture {args.name!r}; have {sorted(fixtures.ALL)}")
    kwargs = {}
    if args.name == "annulus":
        kwargs = {"n": args.n or 4, "frontier": bool(args.frontier)}
    elif args.name == "disk":
        kwargs = {"n": args.n or 4}
    Y = maker(**kwargs)
    if args.name == "torus":
        Y.cocycle = fixtures.torus_cocycle_a()
        Y.cocycle2 = fixtures.torus_cocycle_b()
    if args.name == "mobius":
        Y.cocycle = fixtures.mobius_orientation_cocycle()
    text = Y.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        return _emit(args, {}, {"written": args.out})
    sys.stdout.write(text)
    return 0


# -- entry ----------------------------------------------------------------------


def _parser():
    p = argparse.ArgumentParser(prog="tracks",
                                description="pattern/track calculus on 2-complexes")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--max-iter", type=int, default=200, dest="max_iter")
        sp.add_argument("--seed", type=int, default=None,
                        help="reserved for randomized property-test drivers")
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("validate", help="parse and validate a complex file")
    sp.add_argument("complex")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("cover", help="build a finite or truncated cover")
    sp.add_argument("complex")
    sp.add_argument("--mode", choices=["finite", "truncated"], default="truncated")
    sp.add_argument("--degree", type=int, default=2)
    sp.add_argument("--radius", type=int, default=None)
    sp.add_argument("--subgroup-word", action="append", dest="subgroup_word")
    sp.add_argument("--universal", action="store_true")
    sp.add_argument("--coset-bound", type=int, default=None, dest="coset_bound")
    common(sp)
    sp.set_defaults(func=cmd_cover)

    sp = sub.add_parser("normalize", help="normalize a pattern (Lemma-style moves)")
    sp.add_argument("complex")
    sp.add_argument("pattern")
    common(sp)
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("shortest", help="bounded shortest-pattern search")
    sp.add_argument("complex")
    sp.add_argument("--mode", choices=["essential", "one_sided"], default="essential")
    sp.add_argument("--weight-bound", type=int, default=6, dest="weight_bound")
    sp.add_argument("--radius", type=int, default=None)
    sp.add_argument("--tie-break", choices=["asc", "desc"], default="asc", dest="tie_break")
    sp.add_argument("--subgroup-word", action="append", dest="subgroup_word")
    sp.add_argument("--universal", action="store_true")
    sp.add_argument("--coset-bound", type=int, default=None, dest="coset_bound")
    common(sp)
    sp.set_defaults(func=cmd_shortest)

    sp = sub.add_parser("ends", help="end-count estimate / complement analysis")
    sp.add_argument("complex")
    sp.add_argument("--pattern", default=None)
    sp.add_argument("--radius", type=int, default=None)
    sp.add_argument("--radius2", type=int, default=None)
    sp.add_argument("--subgroup-word", action="append", dest="subgroup_word")
    sp.add_argument("--universal", action="store_true")
    sp.add_argument("--coset-bound", type=int, default=None, dest="coset_bound")
    common(sp)
    sp.set_defaults(func=cmd_ends)

    sp = sub.add_parser("cross", help="axis crossing verdict and type")
    sp.add_argument("complex")
    sp.add_argument("pattern_a")
    sp.add_argument("pattern_b")
    common(sp)
    sp.set_defaults(func=cmd_cross)

    sp = sub.add_parser("triple", help="nearest-axis selection over a translate family")
    sp.add_argument("complex")
    sp.add_argument("pattern")
    sp.add_argument("--translate", action="append")
    sp.add_argument("--third", default=None)
    common(sp)
    sp.set_defaults(func=cmd_triple)

    sp = sub.add_parser("check51", help="splitting-condition diagnostics (a)-(e)")
    sp.add_argument("complex")
    sp.add_argument("pattern")
    sp.add_argument("--translate", action="append")
    common(sp)
    sp.set_defaults(func=cmd_check51)

    sp = sub.add_parser("render", help="SVG diagram of complex and patterns")
    sp.add_argument("complex")
    sp.add_argument("--pattern", action="append")
    sp.add_argument("--replay", action="store_true",
                    help="one SVG per normalization step of the first pattern")
    common(sp)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("fixture", help="write a bundled fixture complex")
    sp.add_argument("name")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--frontier", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_fixture)

    return p


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, PatternError, NonTransverse, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
