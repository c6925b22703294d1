"""Command-line front end.

Exit codes: 0 the checked property holds, 1 it fails (a JSON counterexample
is written to stdout), 2 usage, parse or size-cap errors (stderr).
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import algebra, constructions, correspondence, semantics
from .errors import CplkitError, SizeCapExceeded
from .frames import (
    FrameClass, NeighborhoodFrame, WorldMap, all_world_maps, class_names, classify, find_isomorphism,
    frame_to_dict, frame_to_json, load_frame,
)
from .syntax import parse_cpl, parse_modal, print_fol2
from .syntax.cpl import Signature
from .topology import load_topology
from .translation import translate2

HOLDS, FAILS, ERROR = 0, 1, 2


class UsageError(CplkitError):
    pass


# --- input helpers ------------------------------------------------------------


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def read_formula_lines(path: str) -> list[str]:
    """Non-empty lines of a formula file, ``#`` comments stripped."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _formula_texts(args) -> list[str]:
    texts = list(args.formula or [])
    if getattr(args, "formula_file", None):
        texts += read_formula_lines(args.formula_file)
    return texts


def _one_formula(args) -> str:
    texts = _formula_texts(args)
    if len(texts) != 1:
        raise UsageError("exactly one formula is required (--formula or --formula-file)")
    return texts[0]


def _frame(path: str, args) -> NeighborhoodFrame:
    frame = load_frame(path)
    if frame.size > args.max_worlds:
        raise SizeCapExceeded(f"{path} has {frame.size} worlds, above --max-worlds {args.max_worlds}")
    return frame


def _pairs(items: list[str], flag: str) -> dict[str, str]:
    out = {}
    for item in items or []:
        for part in item.split(","):
            if "=" not in part:
                raise UsageError(f"{flag} expects NAME=WORLD entries, got {part!r}")
            k, v = part.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _corpus(args) -> list[tuple[str, NeighborhoodFrame]]:
    """Named frames from --frame, --frames-dir (sorted by filename) or --corpus."""
    named = [(p, _frame(p, args)) for p in args.frame or []]
    if getattr(args, "frames_dir", None):
        d = Path(args.frames_dir)
        if not d.is_dir():
            raise UsageError(f"{d} is not a directory")
        named += [(p.name, _frame(str(p), args)) for p in sorted(d.glob("*.json"))]
    if getattr(args, "corpus", None) is not None:
        frames = constructions.monotonic_corpus(args.corpus)
        named += [(f"n{f.size}_{k:04d}", f) for k, f in enumerate(frames)]
    if not named:
        raise UsageError("no frames given (use --frame, --frames-dir or --corpus)")
    return named


# --- subcommands ------------------------------------------------------------------


def cmd_classify(args) -> int:
    frame = _frame(args.frame, args)
    names = class_names(classify(frame))
    print(_dump({"classes": names}) if args.json else " ".join(names) or "none")
    return HOLDS


def cmd_eval(args) -> int:
    frame = _frame(args.frame, args)
    phi = parse_cpl(_one_formula(args), Signature.of_frame(frame))
    assignment = _pairs(args.assign, "--assign")
    value = semantics.eval_cpl(frame, phi, assignment)
    if value:
        print(_dump({"value": True}) if args.json else "true")
        return HOLDS
    print(_dump({"value": False, "assignment": assignment}))
    return FAILS


def _top_counterexample(top, phi, world):
    props = sorted(semantics.propositions(phi))
    for val in semantics.valuations(len(top.points), props):
        ext = semantics.modal_extension_top(top, val, phi)
        for i, w in enumerate(top.points):
            if (world is None or w == world) and not ext >> i & 1:
                return w, {p: top.labels(m) for p, m in val.items()}
    return None


def cmd_modal_check(args) -> int:
    phi = parse_modal(_one_formula(args))
    if (args.frame is None) == (args.topology is None):
        raise UsageError("give exactly one of --frame or --topology")
    if args.topology:
        top = load_topology(args.topology)
        if args.world is not None and args.world not in top.points:
            raise UsageError(f"{args.world!r} is not a point")
        found = _top_counterexample(top, phi, args.world)
    else:
        frame = _frame(args.frame, args)
        if args.world is not None and args.world not in frame:
            raise UsageError(f"{args.world!r} is not a world")
        found = None
        worlds = [args.world] if args.world else frame.worlds
        for w in worlds:
            val = semantics.countervaluation(frame, phi, w)
            if val is not None:
                found = (w, val)
                break
    if found is None:
        print(_dump({"valid": True}) if args.json else "valid")
        return HOLDS
    print(_dump({"valid": False, "world": found[0], "valuation": found[1]}))
    return FAILS


def cmd_translate(args) -> int:
    text = _one_formula(args)
    out = print_fol2(translate2(parse_cpl(text)))
    print(_dump({"cpl": text, "fol2": out}) if args.json else out)
    return HOLDS


def cmd_ue(args) -> int:
    frame = _frame(args.frame, args)
    ue = algebra.ultrafilter_extension(frame)
    iso = find_isomorphism(frame, ue)
    if iso is None:
        print(_dump({"isomorphic": False, "ue": frame_to_dict(ue)}))
        return FAILS
    if args.json:
        print(_dump({"isomorphic": True, "ue": frame_to_dict(ue), "isomorphism": iso}))
    else:
        print(frame_to_json(ue))
        print("isomorphic to input: " + ", ".join(f"{k}->{v}" for k, v in iso.items()))
    return HOLDS


def cmd_complex(args) -> int:
    frame = _frame(args.frame, args)
    bam = algebra.complex_algebra(frame)
    if not args.canonical:
        print(algebra.bam_to_json(bam))
        return HOLDS
    result = algebra.canonical_extension(bam)
    ok = result.is_isomorphism(bam)
    report = {
        "algebra": algebra.bam_to_dict(bam),
        "extension": algebra.bam_to_dict(result.extension),
        "embedding_is_isomorphism": ok,
        "note": result.note(),
    }
    print(_dump(report))
    return HOLDS if ok else FAILS


def _maps(args, dom, cod):
    if args.map:
        return [WorldMap.from_labels(dom, cod, _pairs(args.map, "--map"))]
    return list(all_world_maps(dom, cod))


def _show_map(m: WorldMap) -> str:
    return ",".join(f"{k}->{v}" for k, v in m.as_labels().items())


def cmd_dual_check(args) -> int:
    dom, cod = _frame(args.frame, args), _frame(args.frame2, args)
    rows, bad = [], []
    for m in _maps(args, dom, cod):
        bm, hom = algebra.duality_sides(m)
        row = {"map": m.as_labels(), "bounded_morphism": bm, "homomorphism": hom}
        rows.append(row)
        if bm != hom:
            bad.append(row)
    if bad:
        print(_dump({"biconditional": False, "counterexamples": bad}))
        return FAILS
    if args.json:
        print(_dump({"biconditional": True, "maps": rows}))
    else:
        for r, m in zip(rows, _maps(args, dom, cod)):
            print(f"{_show_map(m)}: bounded_morphism={str(r['bounded_morphism']).lower()} "
                  f"homomorphism={str(r['homomorphism']).lower()}")
    return HOLDS


def cmd_disjoint_union(args) -> int:
    frames = [_frame(p, args) for p in args.frame]
    print(frame_to_json(constructions.disjoint_union(frames, args.max_worlds)))
    return HOLDS


def _morphism_result(args, m: WorldMap) -> int:
    bad = constructions.bounded_morphism_counterexample(m)
    if bad is not None:
        print(_dump({"bounded_morphism": False, "counterexample": bad}))
        return FAILS
    print(_dump({"bounded_morphism": True, "map": m.as_labels()}) if args.json else "true")
    return HOLDS


def cmd_gensub_check(args) -> int:
    sub, sup = _frame(args.sub, args), _frame(args.sup, args)
    return _morphism_result(args, constructions.inclusion_map(sub, sup))


def cmd_bmorph_check(args) -> int:
    dom, cod = _frame(args.frame, args), _frame(args.frame2, args)
    if not args.map:
        raise UsageError("--map is required")
    return _morphism_result(args, WorldMap.from_labels(dom, cod, _pairs(args.map, "--map")))


def cmd_qup(args) -> int:
    frames = [_frame(p, args) for p in args.frame]
    if not 0 <= args.index < len(frames):
        raise UsageError(f"--index must be in 0..{len(frames) - 1}")
    q = constructions.quasi_ultraproduct(frames, args.index)
    iso = find_isomorphism(q, frames[args.index])
    report = algebra.ultraproduct_embedding(frames, args.index) if args.verify_embedding else None
    ok = iso is not None and (report is None or report.passed)
    out = {"frame": frame_to_dict(q), "isomorphism": iso}
    if report is not None:
        out["embedding"] = report.as_dict()
    if not ok:
        print(_dump(out))
        return FAILS
    if args.json:
        print(_dump(out))
    else:
        print(frame_to_json(q))
        print("isomorphic to factor: " + ", ".join(f"{k}->{v}" for k, v in iso.items()))
        if report is not None:
            print("embedding: pass")
    return HOLDS


def _correspond_one(pair_name: str, name: str, frame: NeighborhoodFrame):
    pair = correspondence.lookup(pair_name)
    if not correspondence.in_applicability_class(frame, pair):
        return None
    if pair.local:
        rep = correspondence.check_local_correspondence(frame, pair)
        return [dict(d, frame=name) for d in rep.disagreements]
    res = correspondence.check_class_sentence(frame, pair)
    return [] if res.agree else [{"frame": name, "sentence": res.sentence, "reference": res.reference}]


def cmd_correspond(args) -> int:
    try:
        pair = correspondence.lookup(args.pair)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    named = _corpus(args)
    names = [n for n, _ in named]
    frames = [f for _, f in named]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_correspond_one, [pair.name] * len(named), names, frames))
    else:
        results = [_correspond_one(pair.name, n, f) for n, f in named]
    checked = [r for r in results if r is not None]
    disagreements = [d for r in checked for d in r]
    report = {
        "pair": pair.name,
        "frames_checked": len(checked),
        "frames_skipped": len(results) - len(checked),
        "disagreements": disagreements,
    }
    if disagreements:
        print(_dump(report))
        return FAILS
    if args.json:
        print(_dump(report))
    else:
        print(f"pair {pair.name}: {len(checked)} frames checked, {report['frames_skipped']} outside the class, "
              "0 disagreements")
    return HOLDS


def _exactly_two_worlds(frame: NeighborhoodFrame) -> bool:
    return frame.size == 2


def cmd_gt_check(args) -> int:
    frames = [f for _, f in _corpus(args)]
    texts = _formula_texts(args)
    if args.membership and texts:
        raise UsageError("give formulas or --membership, not both")
    if args.membership:
        report = correspondence.gt_closure_check(frames, membership=MEMBERSHIPS[args.membership])
    else:
        report = correspondence.gt_closure_check(frames, delta=[parse_modal(t) for t in texts], jobs=args.jobs)
    out = report.as_dict()
    if not report.passed:
        print(_dump(out))
        return FAILS
    if args.json:
        print(_dump(out))
    else:
        for name, c in report.conditions.items():
            note = f" ({c.note})" if c.note else ""
            print(f"{name}: pass, {c.checked} checked{note}")
    return HOLDS


MEMBERSHIPS = {"exactly-2-worlds": _exactly_two_worlds}


def cmd_enumerate(args) -> int:
    frames = constructions.enumerate_monotonic_frames(args.worlds)
    if args.count:
        n = sum(1 for _ in frames)
        print(_dump({"worlds": args.worlds, "count": n}) if args.json else n)
        return HOLDS
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for k, f in enumerate(frames):
            (out / f"frame_{k:04d}.json").write_text(frame_to_json(f) + "\n", encoding="utf-8")
        return HOLDS
    for f in frames:
        print(frame_to_json(f))
    return HOLDS


def cmd_random_frame(args) -> int:
    frame = constructions.random_monotonic_frame(args.worlds, args.seed, FrameClass.parse(args.target))
    print(frame_to_json(frame))
    return HOLDS


# --- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON output")
    common.add_argument("--max-worlds", type=int, default=16, help="world cap for input frames (default 16)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for corpus commands")

    def formula_flags(p, multiple=False):
        p.add_argument("--formula", action="append", help="formula text" + (" (repeatable)" if multiple else ""))
        p.add_argument("--formula-file", help="file with one formula per line, '#' comments")

    def corpus_flags(p):
        p.add_argument("--frame", action="append", help="frame file (repeatable)")
        p.add_argument("--frames-dir", help="directory of frame files, read in filename order")
        p.add_argument("--corpus", type=int, choices=(1, 2, 3), help="all monotonic frames with 1..N worlds")

    parser = argparse.ArgumentParser(prog="cplkit", description="Coalgebraic predicate logic over finite neighborhood frames")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="frame classes of a frame")
    p.add_argument("--frame", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("eval", parents=[common], help="evaluate a CPL formula")
    p.add_argument("--frame", required=True)
    formula_flags(p)
    p.add_argument("--assign", action="append", help="VAR=WORLD, repeatable or comma separated")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("modal-check", parents=[common], help="frame validity of a modal formula")
    p.add_argument("--frame")
    p.add_argument("--topology")
    p.add_argument("--world", help="check validity at this world only")
    formula_flags(p)
    p.set_defaults(func=cmd_modal_check)

    p = sub.add_parser("translate", parents=[common], help="two-sorted translation of a CPL formula")
    formula_flags(p)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("ue", parents=[common], help="ultrafilter extension")
    p.add_argument("--frame", required=True)
    p.set_defaults(func=cmd_ue)

    p = sub.add_parser("complex", parents=[common], help="complex algebra as a BAM table")
    p.add_argument("--frame", required=True)
    p.add_argument("--canonical", action="store_true", help="also build and check the canonical extension")
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("dual-check", parents=[common], help="bounded morphism vs dual homomorphism")
    p.add_argument("--frame", required=True, help="domain frame")
    p.add_argument("--frame2", required=True, help="codomain frame")
    p.add_argument("--map", action="append", help="w=v entries; all maps when omitted")
    p.set_defaults(func=cmd_dual_check)

    p = sub.add_parser("disjoint-union", parents=[common], help="tagged disjoint union")
    p.add_argument("--frame", action="append", required=True)
    p.set_defaults(func=cmd_disjoint_union)

    p = sub.add_parser("gensub-check", parents=[common], help="generated subframe check")
    p.add_argument("--sub", required=True)
    p.add_argument("--sup", required=True)
    p.set_defaults(func=cmd_gensub_check)

    p = sub.add_parser("bmorph-check", parents=[common], help="bounded morphism check")
    p.add_argument("--frame", required=True, help="domain frame")
    p.add_argument("--frame2", required=True, help="codomain frame")
    p.add_argument("--map", action="append", help="w=v entries")
    p.set_defaults(func=cmd_bmorph_check)

    p = sub.add_parser("qup", parents=[common], help="principal quasi-ultraproduct")
    p.add_argument("--frame", action="append", required=True)
    p.add_argument("--index", type=int, required=True, help="principal index")
    p.add_argument("--verify-embedding", action="store_true", help="also check the algebra embedding")
    p.set_defaults(func=cmd_qup)

    p = sub.add_parser("correspond", parents=[common], help="check a built-in correspondence pair")
    p.add_argument("--pair", required=True)
    corpus_flags(p)
    p.set_defaults(func=cmd_correspond)

    p = sub.add_parser("gt-check", parents=[common], help="closure conditions of a modally defined class")
    corpus_flags(p)
    formula_flags(p, multiple=True)
    p.add_argument("--membership", choices=sorted(MEMBERSHIPS), help="built-in membership predicate")
    p.set_defaults(func=cmd_gt_check)

    p = sub.add_parser("enumerate", parents=[common], help="all monotonic frames on n worlds")
    p.add_argument("--worlds", type=int, required=True)
    p.add_argument("--count", action="store_true")
    p.add_argument("--out-dir", help="write one file per frame")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("random-frame", parents=[common], help="seeded random monotonic frame")
    p.add_argument("--worlds", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--target", default="monotonic", help="frame class (default monotonic)")
    p.set_defaults(func=cmd_random_frame)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else HOLDS
    try:
        return args.func(args)
    except (CplkitError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
