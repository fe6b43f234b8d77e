"""Command-line front end.

Subcommands: ends, glacial, almost-invariant, coarse, selftest. Every
run prints one JSON report to stdout (and optionally to --out); reports
are byte-identical given the same configuration and seed. Exit codes:
0 for a definitive verdict, 2 for Inconclusive, 1 for errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .almost_invariant import almost_invariant_verdict, disjoint_ncc_count
from .covers import (
    ball_cover_scale,
    approximate_ends,
    cover_coarsely_clopen,
    deep_component_candidates,
    intersection_boundary_check,
    star,
    star_composition,
    star_preserves_clopen_check,
    window_to_cover_scale,
    FINITE_CAVEAT,
)
from .ends_tree import build_component_tree, classify_ends
from .equivalence import run_battery
from .errors import BallTooLarge, CertificationFailed, CoarseEndsError
from .fixtures import battery_fixtures, cross_space
from .glacial import is_s_chain, scale_from_balls
from .groups import builtin_groups
from .report import DOT_NODE_LIMIT, render_report, tree_level_table, tree_to_dot
from .windows import DEFAULT_MEMORY_CAP, generate_window

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2

DEFAULT_SEED = 11


class UsageError(Exception):
    """Bad arguments or configuration; reported on stderr, exit code 1."""


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on bad usage, which would collide with
    the Inconclusive exit code; remap usage failures to 1."""

    def error(self, message):
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def parse_radii(value) -> list[int] | None:
    """Accept "lo..hi", a comma list, "auto" (None), or an int list."""
    if value is None or isinstance(value, (list, tuple)):
        return None if value is None else [int(v) for v in value]
    text = str(value).strip()
    if text == "auto":
        return None
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(
            f"cannot parse radii {text!r}; use forms like 1..20, 1,3,9 or auto"
        ) from None


def parse_schedule(value) -> tuple[int, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(int(v) for v in value)
    try:
        return tuple(int(p) for p in str(value).split(",") if p.strip())
    except ValueError:
        raise UsageError(f"cannot parse schedule {value!r}") from None


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        config = json.loads(Path(path).read_text())
    except OSError as err:
        raise UsageError(f"cannot read config file: {err}") from None
    except json.JSONDecodeError as err:
        raise UsageError(f"config file is not valid JSON: {err}") from None
    if not isinstance(config, dict):
        raise UsageError("config file must hold a JSON object")
    return config


def _setting(args, config: dict, name: str, default=None):
    """Resolution order: explicit flag, then config file, then default."""
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in config:
        return config[name]
    return default


def _require(args, config: dict, name: str):
    value = _setting(args, config, name)
    if value is None:
        raise UsageError(f"missing required option --{name.replace('_', '-')}")
    return value


def _emit(payload: dict, args) -> None:
    text = render_report(payload)
    sys.stdout.write(text)
    if getattr(args, "out", None):
        Path(args.out).write_text(text)


def _lookup_group(key: str):
    catalog = builtin_groups()
    if key not in catalog:
        raise UsageError(
            f"unknown group {key!r}; available: {', '.join(sorted(catalog))}"
        )
    return catalog[key]


def cmd_ends(args, config: dict) -> int:
    key = _require(args, config, "group")
    group = _lookup_group(key)
    defaults = group.ends_defaults()
    radii = parse_radii(_setting(args, config, "radii", "auto"))
    if radii is None:
        radii = list(defaults["radii"])
    horizon_factor = _setting(args, config, "horizon_factor", defaults["horizon_factor"])
    window_w = _setting(args, config, "window_w", defaults["window_w"])
    step_cap = _setting(args, config, "step_cap", defaults["step_cap"])
    memory_cap = _setting(args, config, "memory_cap", DEFAULT_MEMORY_CAP)
    seed = _setting(args, config, "seed", DEFAULT_SEED)

    payload = {
        "command": "ends",
        "parameters": {
            "group": key,
            "radii": radii,
            "horizon_factor": horizon_factor,
            "window_w": window_w,
            "step_cap": step_cap,
            "memory_cap": memory_cap,
            "seed": seed,
        },
    }
    try:
        tree = build_component_tree(
            group,
            radii,
            horizon_factor=horizon_factor,
            step_cap=step_cap,
            memory_cap=memory_cap,
        )
    except BallTooLarge as err:
        payload["verdict"] = {
            "kind": "inconclusive",
            "count": None,
            "label": "Inconclusive",
            "reason": (
                "window generation exceeded the memory cap at radius "
                f"{err.radius_reached}"
            ),
        }
        _emit(payload, args)
        return EXIT_INCONCLUSIVE

    verdict = classify_ends(tree, window_w=window_w)
    payload["window"] = {
        "radius": tree.window_radius,
        "truncated": tree.truncated,
        "dropped_radii": tree.dropped_radii,
    }
    payload["levels"] = [
        {
            "cut": lv.cut,
            "horizon": lv.horizon,
            "components": len(lv.nodes),
            "horizon_touching": lv.horizon_count(),
        }
        for lv in tree.levels
    ]
    payload["verdict"] = {
        "kind": verdict.kind,
        "count": verdict.count,
        "label": str(verdict),
        "stabilization_window": verdict.stabilization_window,
        "counts": verdict.counts,
    }
    try:
        ncc = disjoint_ncc_count(group, tree, window_w=window_w, memory_cap=memory_cap)
        payload["ncc"] = {
            "count": ncc.count,
            "certified": ncc.certified,
            "schedule": ncc.schedule,
            "skipped_reason": ncc.skipped_reason,
            "certificates": [
                {
                    "rep": c.rep,
                    "size": c.size,
                    "kind": c.kind,
                    "max_diff_norm": c.max_diff_norm,
                }
                for c in ncc.certificates
            ],
        }
    except (CertificationFailed, BallTooLarge) as err:
        payload["ncc"] = {"error": str(err)}

    if getattr(args, "dot", None):
        small = tree.total_nodes() < DOT_NODE_LIMIT
        Path(args.dot).write_text(tree_to_dot(tree) if small else tree_level_table(tree))
        payload["tree_rendering"] = "dot" if small else "level-table"

    _emit(payload, args)
    return EXIT_OK if verdict.definitive() else EXIT_INCONCLUSIVE


def _chosen_fixtures(names_raw) -> tuple:
    all_fixtures = battery_fixtures()
    if names_raw is None:
        return all_fixtures
    if isinstance(names_raw, (list, tuple)):
        names = [str(n) for n in names_raw]
    else:
        names = [n.strip() for n in str(names_raw).split(",") if n.strip()]
    by_name = {f.name: f for f in all_fixtures}
    unknown = [n for n in names if n not in by_name]
    if unknown:
        raise UsageError(
            f"unknown fixtures {unknown}; available: {', '.join(sorted(by_name))}"
        )
    return tuple(by_name[n] for n in names)


def cmd_glacial(args, config: dict) -> int:
    fixtures = _chosen_fixtures(_setting(args, config, "fixtures"))
    window_w = _setting(args, config, "window_w", 5)
    seed = _setting(args, config, "seed", DEFAULT_SEED)
    report = run_battery(fixtures, window_w=window_w)
    rows = [
        {
            "name": o.name,
            "group": o.group_key,
            "expected": o.expected,
            "absorption": o.absorption,
            "grid": o.clopen,
            "invariance": o.invariance,
            "invariance_kind": o.invariance_kind,
            "agreement": o.agreement(),
            "matches_expected": o.matches_expected(),
        }
        for o in report.outcomes
    ]
    payload = {
        "command": "glacial",
        "parameters": {
            "fixtures": [f.name for f in fixtures],
            "window_w": window_w,
            "seed": seed,
        },
        "rows": rows,
        "summary": {
            "fixtures": len(report.outcomes),
            "total_cells": report.total_cells,
            "inconclusive_cells": report.inconclusive_cells,
            "inconclusive_rate": report.inconclusive_rate,
            "all_agree": report.all_agree(),
            "disagreements": report.disagreements(),
            "mismatches": report.mismatches(),
        },
    }
    _emit(payload, args)
    if not report.all_agree():
        return EXIT_ERROR
    if report.inconclusive_cells:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_almost_invariant(args, config: dict) -> int:
    set_name = _require(args, config, "set")
    by_name = {f.name: f for f in battery_fixtures()}
    if set_name not in by_name:
        raise UsageError(
            f"unknown set {set_name!r}; available: {', '.join(sorted(by_name))}"
        )
    fx = by_name[set_name]
    group_key = _setting(args, config, "group", fx.group_key)
    if group_key != fx.group_key:
        raise UsageError(f"set {set_name!r} lives on group {fx.group_key!r}")
    group = _lookup_group(fx.group_key)
    schedule_raw = _setting(args, config, "schedule")
    schedule = fx.schedule if schedule_raw is None else parse_schedule(schedule_raw)
    window_w = _setting(args, config, "window_w", 5)
    seed = _setting(args, config, "seed", DEFAULT_SEED)
    memory_cap = _setting(args, config, "memory_cap", DEFAULT_MEMORY_CAP)

    radius = max([fx.window_radius, *schedule]) if schedule else fx.window_radius
    payload = {
        "command": "almost-invariant",
        "parameters": {
            "group": fx.group_key,
            "set": fx.name,
            "schedule": schedule,
            "window_w": window_w,
            "seed": seed,
            "memory_cap": memory_cap,
            "window_radius": radius,
        },
    }
    try:
        window = generate_window(group, radius, memory_cap)
    except BallTooLarge as err:
        payload["verdict"] = {
            "kind": "Inconclusive",
            "witness": None,
            "reason": (
                "window generation exceeded the memory cap at radius "
                f"{err.radius_reached}"
            ),
        }
        _emit(payload, args)
        return EXIT_INCONCLUSIVE

    oracle = fx.make_oracle(window)
    report = almost_invariant_verdict(
        oracle, group, schedule, window=window, window_w=window_w, seed=seed
    )
    payload["set_description"] = oracle.description
    payload["verdict"] = {
        "kind": report.kind,
        "witness": report.witness,
        "reason": report.reason,
    }
    payload["traces"] = [
        {"label": t.label, "counts": t.counts, "max_diff_norm": t.max_diff_norm}
        for t in report.traces
    ]
    _emit(payload, args)
    return EXIT_OK if report.definitive() else EXIT_INCONCLUSIVE


COARSE_SPACES = {"Z": 30, "Z^2": 12, "Dinf": 30, "cross": 25}


def _coarse_scale(space: str, cut: int, memory_cap: int):
    """Build (scale, candidates, space info) for one named example space."""
    if space == "cross":
        arm = COARSE_SPACES[space]
        points, dist = cross_space(arm=arm)
        scale = ball_cover_scale(points, dist, (1, 2, 4, 8))
        candidates = [
            frozenset((a, i) for i in range(cut + 1, arm + 1))
            for a in ("n", "e", "s", "w")
        ]
        return scale, candidates, {"points": len(points), "arm": arm}
    radius = COARSE_SPACES[space]
    window = generate_window(_lookup_group(space), radius, memory_cap)
    scale = window_to_cover_scale(window)
    candidates = deep_component_candidates(window, cut)
    return scale, candidates, {"points": len(scale.points), "window_radius": radius}


def _boundary_trials(trials: int, seed: int) -> dict:
    """Randomized self-test of the star/boundary identities on a segment
    of 200 integers: intersections keep boundary control and stars keep
    the clopen overlap bounded after composing the covers."""
    points = tuple(range(-100, 100))
    scale = ball_cover_scale(points, lambda a, b: abs(a - b), (1, 2, 4))
    rng = random.Random(seed)
    violations = 0
    for _ in range(trials):
        a1 = {p for p in points if rng.random() < 0.5}
        a2 = {p for p in points if rng.random() < 0.5}
        cover = scale.covers[rng.randrange(scale.depth)]
        u = scale.covers[rng.randrange(scale.depth)]
        v = scale.covers[rng.randrange(scale.depth)]
        if not intersection_boundary_check(a1, a2, cover, points):
            violations += 1
        if not star_preserves_clopen_check(a1, u, v, points):
            violations += 1
    return {"trials": trials, "violations": violations}


def cmd_coarse(args, config: dict) -> int:
    space = _setting(args, config, "space", "Z")
    if space not in COARSE_SPACES:
        raise UsageError(
            f"unknown space {space!r}; available: {', '.join(sorted(COARSE_SPACES))}"
        )
    cut = _setting(args, config, "cut", 5)
    trials = _setting(args, config, "trials", 200)
    seed = _setting(args, config, "seed", DEFAULT_SEED)
    memory_cap = _setting(args, config, "memory_cap", DEFAULT_MEMORY_CAP)

    scale, candidates, info = _coarse_scale(space, cut, memory_cap)
    approx = approximate_ends(scale, candidates)
    candidate_reports = []
    for i, cand in enumerate(candidates, start=1):
        by_covers = cover_coarsely_clopen(cand, scale)
        candidate_reports.append(
            {
                "index": i,
                "size": len(cand),
                "accepted_at_deepest": by_covers.verdicts[-1].bounded,
                "bounded_per_cover": [v.bounded for v in by_covers.verdicts],
                "overlap_sizes": [v.overlap_size for v in by_covers.verdicts],
            }
        )
    selftest = _boundary_trials(trials, seed)
    payload = {
        "command": "coarse",
        "parameters": {
            "space": space,
            "cut": cut,
            "trials": trials,
            "seed": seed,
            "memory_cap": memory_cap,
            "cover_radii": [1, 2, 4, 8],
        },
        "space_info": info,
        "caveat": FINITE_CAVEAT,
        "candidates": candidate_reports,
        "atoms": {
            "count": approx.count,
            "sizes": [len(a) for a in approx.atoms],
            "samples": [sorted(map(str, a))[:4] for a in approx.atoms],
            "bounded_atoms": len(approx.bounded_atoms),
            "cover_index": approx.cover_index,
        },
        "boundary_selftest": selftest,
    }
    _emit(payload, args)
    return EXIT_ERROR if selftest["violations"] else EXIT_OK


def cmd_selftest(args, config: dict) -> int:
    seed = _setting(args, config, "seed", DEFAULT_SEED)
    groups = builtin_groups()
    checks = []

    tree = build_component_tree(groups["Z"], list(range(1, 9)))
    verdict = classify_ends(tree)
    checks.append(("line-has-two-ends", verdict.kind == "exactly" and verdict.count == 2))

    window = generate_window(groups["Z"], 20)
    scale = scale_from_balls(window, [2, 5], [3, 7])
    checks.append(("chain-links-within-step", is_s_chain([3, 6], scale, window)))
    checks.append(("chain-rejects-long-hop", not is_s_chain([1, 9], scale, window)))

    points = tuple(range(-40, 41))
    seg_scale = ball_cover_scale(points, lambda a, b: abs(a - b), (2,))
    cover = seg_scale.covers[0]
    rng = random.Random(seed)
    boundary_ok = all(
        intersection_boundary_check(
            {p for p in points if rng.random() < 0.5},
            {p for p in points if rng.random() < 0.5},
            cover,
            points,
        )
        for _ in range(100)
    )
    checks.append(("intersection-boundary-trials", boundary_ok))

    singletons = tuple(frozenset({p}) for p in points)
    composed = star_composition(singletons, singletons)
    checks.append(
        (
            "star-composition-identity",
            set(composed) == set(singletons)
            and star({0}, singletons) == {0},
        )
    )

    by_name = {f.name: f for f in battery_fixtures()}
    subset = tuple(by_name[n] for n in ("z-positives", "z-evens", "z-empty"))
    battery = run_battery(subset)
    checks.append(
        (
            "battery-subset-agrees",
            battery.all_agree()
            and not battery.mismatches()
            and battery.inconclusive_cells == 0,
        )
    )

    payload = {
        "command": "selftest",
        "parameters": {"seed": seed},
        "checks": [{"name": name, "passed": passed} for name, passed in checks],
        "all_passed": all(passed for _, passed in checks),
    }
    _emit(payload, args)
    return EXIT_OK if payload["all_passed"] else EXIT_ERROR


def build_parser() -> _Parser:
    parser = _Parser(
        prog="coarseends",
        description="End counting and coarse connectivity on finite group windows.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="also write the JSON report to this path")
        p.add_argument("--config", help="JSON file with option defaults; flags win")
        p.add_argument("--seed", type=int, help="sampling seed, recorded in the report")

    ends = sub.add_parser("ends", help="classify the end count of a group")
    common(ends)
    ends.add_argument("--group", help="group key, e.g. Z, F2, Dinf")
    ends.add_argument("--radii", help='cut radii: "1..20", "1,3,9" or "auto"')
    ends.add_argument("--horizon-factor", type=float, dest="horizon_factor")
    ends.add_argument("--window-w", type=int, dest="window_w")
    ends.add_argument("--step-cap", type=int, dest="step_cap")
    ends.add_argument("--memory-cap", type=int, dest="memory_cap")
    ends.add_argument("--dot", help="write the component tree here as DOT "
                                    "(a per-level table when the tree is large)")
    ends.set_defaults(func=cmd_ends)

    glacial = sub.add_parser("glacial", help="run the slow-scale battery")
    common(glacial)
    glacial.add_argument("--fixtures", help="comma list of fixture names (default all)")
    glacial.add_argument("--window-w", type=int, dest="window_w")
    glacial.set_defaults(func=cmd_glacial)

    inv = sub.add_parser("almost-invariant", help="translate-stability verdict for a named set")
    common(inv)
    inv.add_argument("--set", help="battery fixture name, e.g. z-positives")
    inv.add_argument("--group", help="group key; must match the set's group")
    inv.add_argument("--schedule", help='radius schedule, e.g. "24,28,32,36,40"')
    inv.add_argument("--window-w", type=int, dest="window_w")
    inv.add_argument("--memory-cap", type=int, dest="memory_cap")
    inv.set_defaults(func=cmd_almost_invariant)

    coarse = sub.add_parser("coarse", help="cover-based end approximation on example spaces")
    common(coarse)
    coarse.add_argument("--space", help="one of: " + ", ".join(sorted(COARSE_SPACES)))
    coarse.add_argument("--cut", type=int, help="drop the ball of this radius (default 5)")
    coarse.add_argument("--trials", type=int, help="randomized boundary self-test trials")
    coarse.set_defaults(func=cmd_coarse)

    selftest = sub.add_parser("selftest", help="quick wiring check of every pipeline")
    common(selftest)
    selftest.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(getattr(args, "config", None))
        return args.func(args, config)
    except (UsageError, CoarseEndsError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
