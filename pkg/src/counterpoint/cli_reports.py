"""Command-line reports over worlds, dichotomies, and scored passages.

Commands
--------
  worlds table    histogram and moments of a world
  worlds export   full count matrix or histogram as CSV
  step            symmetry count of one step
  compare         valid-step overlap of two worlds
  analyze         score file -> step counts -> effect size and chi-square
  noll            chord endomorphism report(s)
  scale-report    forbidden steps of a world inside a scale
  walk            seeded random walk over valid steps

Output is TEXT (4-decimal rendering), JSON (full precision, sorted keys,
no timestamps — byte-identical across reruns of the same tool version), or
CSV where tabular.  Exit codes: 0 success, 2 input error, 3 model error,
4 calibration-gate failure.  Preset worlds are cached on disk under
$COUNTERPOINT_CACHE_DIR (default ~/.cache/counterpoint), keyed by modulus,
class representative, and model variant; the calibration gate runs when a
cache entry is created.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from .dichotomies import (
    Dichotomy,
    NotStrong,
    OddModulusUnsupported,
    chord_endomorphisms,
    classify,
    parse_pitch_class_set,
)
from .model_tables import EXPECTED_STEP_HISTOGRAMS
from .residue_algebra import DualNumber, Modulus, ModulusMismatch, NotInvertible
from .score_io import (
    COLUMN_CANTUS,
    Dedup,
    FixedCantus,
    OrderError,
    ParseError,
    ScoreFormat,
    TooFewEvents,
    extract_transitions,
    parse_score,
    score_against_world,
)
from .stats import (
    DegeneratePopulation,
    EmptyCategory,
    EmptySample,
    PopulationSpec,
    SdDivisor,
    chi_square_gof,
    effect_size,
    sample_summary,
)
from .worlds import (
    DeadEnd,
    GateFailure,
    RestrictionMode,
    World,
    build_world,
    scale_restriction_report,
    walk,
    world_histogram_csv,
    world_matrix_csv,
    world_moments,
    world_overlap,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MODEL = 3
EXIT_GATE = 4

_INPUT_ERRORS = (ParseError, OrderError, TooFewEvents, ValueError, OSError)
_MODEL_ERRORS = (
    NotStrong,
    DegeneratePopulation,
    EmptyCategory,
    EmptySample,
    ModulusMismatch,
    DeadEnd,
    NotInvertible,
    OddModulusUnsupported,
)


def _version() -> str:
    from counterpoint import __version__

    return __version__


def _tool_header() -> dict:
    return {"name": "counterpoint", "version": _version()}


def _jsonable(value):
    if isinstance(value, Fraction):
        return {"fraction": f"{value.numerator}/{value.denominator}", "value": float(value)}
    if isinstance(value, DualNumber):
        return value.render()
    if isinstance(value, Enum):
        return value.value
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        if hasattr(value, "render") and callable(value.render):
            try:
                return value.render()
            except TypeError:
                pass
        return {f.name: _jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _emit_json(payload: dict) -> None:
    body = {"tool": _tool_header()}
    body.update(payload)
    sys.stdout.write(json.dumps(_jsonable(body), sort_keys=True, indent=2) + "\n")


def _f4(x) -> str:
    return f"{float(x):.4f}"


def _fp(p: float) -> str:
    """p-values: 4 decimals, switching to scientific below 1e-4."""
    return f"{p:.4e}" if 0 < p < 1e-4 else f"{p:.4f}"


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# world loading and cache


def cache_directory() -> Path:
    env = os.environ.get("COUNTERPOINT_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "counterpoint"


def _cache_path(d: Dichotomy, variant: str) -> Path:
    canonical = classify(d).canonical_representative
    stem = "world-n{}-c{}-{}".format(
        d.modulus.n,
        "_".join(str(r) for r in canonical),
        variant.replace("/", "_"),
    )
    return cache_directory() / f"{stem}.json"


def _world_to_payload(w: World) -> dict:
    return {
        "modulus": w.modulus.n,
        "half": sorted(w.dichotomy.half),
        "label": w.label,
        "variant": w.variant,
        "counts": ["".join(str(c) for c in row) for row in w.counts],
        "histogram": {str(k): v for k, v in sorted(w.histogram.items())},
    }


def _world_from_payload(payload: dict) -> World:
    modulus = Modulus(payload["modulus"])
    d = Dichotomy(frozenset(payload["half"]), modulus)
    counts = tuple(bytes(int(ch) for ch in row) for row in payload["counts"])
    histogram = {int(k): v for k, v in payload["histogram"].items()}
    recount: dict = {c: 0 for c in histogram}
    for row in counts:
        for c in row:
            recount[c] = recount.get(c, 0) + 1
    if {k: v for k, v in recount.items() if v} != {k: v for k, v in histogram.items() if v}:
        raise GateFailure("cached world is internally inconsistent")
    label = payload["label"]
    if label in EXPECTED_STEP_HISTOGRAMS and histogram != EXPECTED_STEP_HISTOGRAMS[label]:
        raise GateFailure(f"cached {label} world fails its calibration fingerprint")
    return World(d, label, payload["variant"], counts, histogram)


def load_world(d: Dichotomy, use_cache: bool = True) -> World:
    """Build a world, reusing the on-disk cache for the two presets."""
    from .dichotomies import FUX_HALF, MYSTIC_HALF
    from .model_tables import FUX_MODEL_VARIANT, MYSTIC_MODEL_VARIANT

    preset_variant = None
    if d.modulus.n == 12 and d.half == FUX_HALF:
        preset_variant = FUX_MODEL_VARIANT
    elif d.modulus.n == 12 and d.half == MYSTIC_HALF:
        preset_variant = MYSTIC_MODEL_VARIANT
    if preset_variant is None or not use_cache:
        return build_world(d)
    path = _cache_path(d, preset_variant)
    if path.exists():
        try:
            return _world_from_payload(json.loads(path.read_text()))
        except (OSError, KeyError, TypeError, json.JSONDecodeError):
            pass  # unreadable cache: rebuild below and overwrite
    world = build_world(d)  # calibration gate runs here
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(_world_to_payload(world), sort_keys=True))
    tmp.replace(path)
    return world


# ---------------------------------------------------------------------------
# commands


def cmd_worlds_table(args) -> int:
    world = load_world(Dichotomy.parse(args.dichotomy))
    moments = world_moments(world)
    if args.output == "CSV":
        sys.stdout.write(world_histogram_csv(world))
        return EXIT_OK
    if args.output == "JSON":
        _emit_json(
            {
                "command": "worlds table",
                "world": world.label,
                "dichotomy": world.dichotomy.render(),
                "model_variant": world.variant,
                "histogram": {str(k): v for k, v in sorted(world.histogram.items())},
                "moments": {
                    "mean": moments.mean,
                    "variance": moments.variance,
                    "sd": moments.sd,
                },
                "note": moments.note,
            }
        )
        return EXIT_OK
    print(f"world: {world.label} ({world.dichotomy.render()})")
    print(f"model-variant: {world.variant}")
    print("symmetries  steps")
    for c in sorted(world.histogram):
        print(f"{c:<11d} {world.histogram[c]}")
    print(f"mean: {_f4(moments.mean)} ({_frac(moments.mean)})  sd: {_f4(moments.sd)}")
    if moments.note:
        print(f"note: {moments.note}")
    return EXIT_OK


def cmd_worlds_export(args) -> int:
    world = load_world(Dichotomy.parse(args.dichotomy))
    if args.what == "matrix":
        sys.stdout.write(world_matrix_csv(world))
    else:
        sys.stdout.write(world_histogram_csv(world))
    return EXIT_OK


def cmd_step(args) -> int:
    world = load_world(Dichotomy.parse(args.dichotomy))
    src = DualNumber.parse(args.src)
    dst = DualNumber.parse(args.dst)
    count = world.count(src, dst)
    if args.output == "JSON":
        _emit_json(
            {
                "command": "step",
                "world": world.label,
                "model_variant": world.variant,
                "from": src.render(),
                "to": dst.render(),
                "count": count,
            }
        )
    else:
        print(f"{src.render()}>{dst.render()}: {count}")
    return EXIT_OK


def cmd_compare(args) -> int:
    world_a = load_world(Dichotomy.parse(args.a))
    world_b = load_world(Dichotomy.parse(args.b))
    overlap = world_overlap(world_a, world_b)
    if args.output == "JSON":
        _emit_json(
            {
                "command": "compare",
                "a": world_a.label,
                "b": world_b.label,
                "p_a": overlap.p_a,
                "p_b": overlap.p_b,
                "p_ab": overlap.p_ab,
                "gap": overlap.gap,
            }
        )
        return EXIT_OK
    total = world_a.total_steps
    print(f"worlds: {world_a.label} vs {world_b.label}")
    print(f"p_a  = {world_a.valid_step_count}/{total} = {_f4(overlap.p_a)}")
    print(f"p_b  = {world_b.valid_step_count}/{total} = {_f4(overlap.p_b)}")
    p_ab_steps = int(overlap.p_ab * total)
    print(f"p_ab = {p_ab_steps}/{total} = {_f4(overlap.p_ab)}")
    print(f"independence gap |p_ab - p_a*p_b| = {_f4(overlap.gap)}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    fmt = ScoreFormat[args.format]
    events = parse_score(text, fmt)
    if args.cantus_policy == "column":
        policy = COLUMN_CANTUS
    else:
        if args.cantus_pc is None:
            raise ValueError("--cantus-pc is required with --cantus-policy fixed")
        policy = FixedCantus(args.cantus_pc)
    dedup = Dedup[args.dedup]
    world = load_world(Dichotomy.parse(args.world))
    seq = extract_transitions(events, policy, dedup)
    counts = score_against_world(seq, world)
    pop = PopulationSpec.from_histogram(world.histogram)
    sample = sample_summary(counts, pop.support, SdDivisor[args.divisor])
    effect = effect_size(sample, pop, args.alpha)
    chi = chi_square_gof(sample, pop, yates=not args.no_yates,
                         merge_low_expected=args.merge_low_expected)
    policy_text = (
        "COLUMN_CANTUS" if isinstance(policy, type(COLUMN_CANTUS)) else f"FIXED_CANTUS({policy.pc})"
    )
    if args.output == "JSON":
        _emit_json(
            {
                "command": "analyze",
                "world": world.label,
                "dichotomy": world.dichotomy.render(),
                "model_variant": world.variant,
                "file": os.path.basename(args.file),
                "policy": policy_text,
                "dedup": seq.dedup_applied,
                "transition_count": len(counts),
                "per_step_counts": list(counts),
                "steps": [f"{a.render()}>{b.render()}" for a, b in seq.steps],
                "sample": {
                    "n": sample.n,
                    "observed": {str(k): v for k, v in sample.observed},
                    "overflow_values": list(sample.overflow_values),
                    "mean": sample.mean,
                    "sd": sample.sd,
                    "sd_divisor": sample.divisor,
                },
                "population": {"mean": pop.mean, "sd": pop.sd},
                "effect_size": effect,
                "chi_square": chi,
            }
        )
        return EXIT_OK
    print(f"world: {world.label} ({world.dichotomy.render()})")
    print(f"model-variant: {world.variant}")
    print(f"file: {args.file}  policy: {policy_text}  dedup: {Dedup[args.dedup].value}")
    print(f"transitions: {len(counts)}")
    print("per-step counts: " + " ".join(str(c) for c in counts))
    print("observed: " + "  ".join(f"{k}:{v}" for k, v in sample.observed))
    print(f"sample mean: {_f4(sample.mean)}  sd: {_f4(sample.sd)} (divisor {sample.divisor.value})")
    print(f"population mean: {_f4(pop.mean)}  sd: {_f4(pop.sd)}")
    print(
        f"effect size d: {_f4(effect.d)}  "
        f"{100 * (1 - effect.alpha):.0f}% CI: [{_f4(effect.ci_low)}, {_f4(effect.ci_high)}]  "
        f"(z = {_f4(effect.z)})"
    )
    corr = "Yates" if chi.yates else "uncorrected"
    print(f"chi-square: {_f4(chi.statistic)} (df {chi.df}, {corr})  p-value: {_fp(chi.p_value)}")
    return EXIT_OK


def cmd_noll(args) -> int:
    if args.scan:
        even = sorted(parse_pitch_class_set("0,2,4,6,8,10"))
        from itertools import combinations

        reports = [chord_endomorphisms(frozenset(tri)) for tri in combinations(even, 3)]
        if args.output == "JSON":
            _emit_json(
                {
                    "command": "noll scan",
                    "scan": "wt-triads",
                    "reports": [
                        {
                            "chord": list(r.chord),
                            "endomorphism_count": len(r.endomorphisms),
                            "linear_parts": list(r.linear_parts),
                            "strong_verdict": r.strong_verdict,
                        }
                        for r in reports
                    ],
                    "all_strong_verdicts_false": not any(r.strong_verdict for r in reports),
                }
            )
            return EXIT_OK
        for r in reports:
            print(
                f"{','.join(str(c) for c in r.chord)}: "
                f"{len(r.endomorphisms)} endomorphisms, verdict {r.strong_verdict}"
            )
        print(f"all verdicts false: {not any(r.strong_verdict for r in reports)}")
        return EXIT_OK
    if not args.chord:
        raise ValueError("either a chord or --scan wt-triads is required")
    report = chord_endomorphisms(parse_pitch_class_set(args.chord))
    if args.output == "JSON":
        _emit_json(
            {
                "command": "noll",
                "chord": list(report.chord),
                "endomorphisms": [m.render() for m in report.endomorphisms],
                "endomorphism_count": len(report.endomorphisms),
                "linear_parts": list(report.linear_parts),
                "strong_verdict": report.strong_verdict,
            }
        )
        return EXIT_OK
    print(f"chord: {','.join(str(c) for c in report.chord)}")
    print(f"endomorphisms ({len(report.endomorphisms)}): "
          + " ".join(m.render() for m in report.endomorphisms))
    print(f"linear parts: {','.join(str(v) for v in report.linear_parts)}")
    print(f"strong verdict: {report.strong_verdict}")
    return EXIT_OK


def cmd_scale_report(args) -> int:
    world = load_world(Dichotomy.parse(args.dichotomy))
    scale = parse_pitch_class_set(args.scale) if args.scale else frozenset()
    report = scale_restriction_report(world, scale, RestrictionMode[args.mode])
    if args.output == "JSON":
        _emit_json(
            {
                "command": "scale-report",
                "world": world.label,
                "model_variant": world.variant,
                "scale": list(report.scale),
                "mode": report.mode,
                "restricted_step_count": report.restricted_step_count,
                "forbidden_step_count": report.forbidden_step_count,
                "forbidden_class_count": report.forbidden_class_count,
                "forbidden_classes": [list(c) for c in report.forbidden_classes],
                "forbidden_steps": [
                    f"{a.render()}>{b.render()}" for a, b in report.forbidden_steps
                ],
            }
        )
        return EXIT_OK
    print(f"world: {world.label}  scale: {','.join(str(p) for p in report.scale)}  "
          f"mode: {report.mode.value}")
    print(f"steps in domain: {report.restricted_step_count}")
    print(f"forbidden steps: {report.forbidden_step_count}")
    print(f"forbidden classes (k, d, l): {report.forbidden_class_count}")
    for k, d, l in report.forbidden_classes:
        print(f"  k={k} d={d} l={l}")
    return EXIT_OK


def cmd_walk(args) -> int:
    world = load_world(Dichotomy.parse(args.dichotomy))
    start = DualNumber.parse(args.start)
    result = walk(world, start, args.length, args.seed)
    if args.output == "JSON":
        _emit_json(
            {
                "command": "walk",
                "world": world.label,
                "model_variant": world.variant,
                "start": start.render(),
                "length": args.length,
                "seed": args.seed,
                "path": [z.render() for z in result.path],
                "completed": result.completed,
                "dead_end_at": result.dead_end_at,
            }
        )
        return EXIT_OK
    print(" ".join(z.render() for z in result.path))
    if not result.completed:
        print(f"dead end after {result.steps_taken} steps")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="counterpoint",
        description="Counterpoint worlds, dichotomy analysis, and score reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    worlds = sub.add_parser("worlds", help="world tables and exports")
    worlds_sub = worlds.add_subparsers(dest="worlds_command", required=True)
    table = worlds_sub.add_parser("table", help="histogram and moments")
    table.add_argument("--dichotomy", required=True)
    table.add_argument("--output", choices=["TEXT", "JSON", "CSV"], default="TEXT")
    table.set_defaults(func=cmd_worlds_table)
    export = worlds_sub.add_parser("export", help="matrix or histogram CSV")
    export.add_argument("--dichotomy", required=True)
    export.add_argument("--what", choices=["matrix", "histogram"], default="matrix")
    export.set_defaults(func=cmd_worlds_export)

    step = sub.add_parser("step", help="symmetry count of one step")
    step.add_argument("--dichotomy", required=True)
    step.add_argument("--from", dest="src", required=True, metavar="X+EK")
    step.add_argument("--to", dest="dst", required=True, metavar="Y+EL")
    step.add_argument("--output", choices=["TEXT", "JSON"], default="TEXT")
    step.set_defaults(func=cmd_step)

    compare = sub.add_parser("compare", help="overlap of two worlds")
    compare.add_argument("--a", required=True)
    compare.add_argument("--b", required=True)
    compare.add_argument("--output", choices=["TEXT", "JSON"], default="TEXT")
    compare.set_defaults(func=cmd_compare)

    analyze = sub.add_parser("analyze", help="score a passage against a world")
    analyze.add_argument("--file", required=True)
    analyze.add_argument("--format", choices=[f.value for f in ScoreFormat], required=True)
    analyze.add_argument("--world", required=True)
    analyze.add_argument("--cantus-policy", choices=["column", "fixed"], default="column")
    analyze.add_argument("--cantus-pc", type=int)
    analyze.add_argument("--dedup", choices=[d.value for d in Dedup], default="CONSECUTIVE")
    analyze.add_argument("--alpha", type=float, default=0.10)
    analyze.add_argument("--no-yates", action="store_true")
    analyze.add_argument("--merge-low-expected", action="store_true")
    analyze.add_argument("--divisor", choices=[d.value for d in SdDivisor], default="N")
    analyze.add_argument("--output", choices=["TEXT", "JSON"], default="TEXT")
    analyze.set_defaults(func=cmd_analyze)

    noll = sub.add_parser("noll", help="chord endomorphism report")
    noll.add_argument("chord", nargs="?")
    noll.add_argument("--scan", choices=["wt-triads"])
    noll.add_argument("--output", choices=["TEXT", "JSON"], default="TEXT")
    noll.set_defaults(func=cmd_noll)

    scale = sub.add_parser("scale-report", help="forbidden steps inside a scale")
    scale.add_argument("--dichotomy", required=True)
    scale.add_argument("--scale", required=True)
    scale.add_argument(
        "--mode", choices=[m.value for m in RestrictionMode], default="CANTUS_ONLY"
    )
    scale.add_argument("--output", choices=["TEXT", "JSON"], default="TEXT")
    scale.set_defaults(func=cmd_scale_report)

    walk_p = sub.add_parser("walk", help="seeded random walk over valid steps")
    walk_p.add_argument("--dichotomy", required=True)
    walk_p.add_argument("--start", required=True, metavar="X+EK")
    walk_p.add_argument("--length", type=int, default=8)
    walk_p.add_argument("--seed", type=int, default=0)
    walk_p.add_argument("--output", choices=["TEXT", "JSON"], default="TEXT")
    walk_p.set_defaults(func=cmd_walk)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except GateFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GATE
    except _MODEL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
