"""Named example sets and spaces: the equivalence battery fixtures, the
deliberately non-geodesic window, the two-adic override window, and the
four-armed cross space."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .almost_invariant import SetOracle, oracle_from_members
from .ends_tree import annulus_components
from .groups import IntLine, RestrictedSumZ2
from .windows import FiniteWindow, generate_window


@dataclass(frozen=True)
class BatteryFixture:
    """One battery entry: a named set on a named group window, with the
    expected accept/reject outcome and the radius schedule the
    translate-side verdict should use."""

    name: str
    group_key: str
    window_radius: int
    expected: bool
    schedule: tuple[int, ...]
    make_oracle: Callable[[FiniteWindow], SetOracle]


def _pred(fn, description):
    def build(window):
        return SetOracle(fn, description)

    return build


def _f2_branch(window: FiniteWindow) -> SetOracle:
    for node in annulus_components(window, 0, window.radius):
        if "a" in node.members:
            return oracle_from_members(
                node.members, "branch below the generator a", window.radius
            )
    raise LookupError("no component containing a; window too small")


def _sum_max(s) -> int:
    return max(s) if s else 0


Z_SCHEDULE = (24, 28, 32, 36, 40)
PLANE_SCHEDULE = (28, 33, 38, 43, 48)
F2_SCHEDULE = (4, 5, 6, 7, 8)
F2_BRANCH_SCHEDULE = (3, 4, 5, 6, 7)
SUM_SCHEDULE = (44, 48, 52, 56, 60)


def battery_fixtures() -> tuple[BatteryFixture, ...]:
    return (
        BatteryFixture(
            "z-positives", "Z", 40, True, Z_SCHEDULE,
            _pred(lambda x: x > 0, "positive ray"),
        ),
        BatteryFixture(
            "z-tail-seven", "Z", 40, True, Z_SCHEDULE,
            _pred(lambda x: x >= 7, "ray from 7"),
        ),
        BatteryFixture(
            "z-evens", "Z", 40, False, Z_SCHEDULE,
            _pred(lambda x: x % 2 == 0, "even integers"),
        ),
        BatteryFixture(
            "z-finite-block", "Z", 40, True, Z_SCHEDULE,
            _pred(lambda x: -3 <= x <= 7, "finite block -3..7"),
        ),
        BatteryFixture(
            "z-empty", "Z", 40, True, Z_SCHEDULE,
            _pred(lambda x: False, "empty set"),
        ),
        BatteryFixture(
            "z-full", "Z", 40, True, Z_SCHEDULE,
            _pred(lambda x: True, "whole group"),
        ),
        BatteryFixture(
            "z-mod-three", "Z", 40, False, Z_SCHEDULE,
            _pred(lambda x: x % 3 == 0, "multiples of three"),
        ),
        BatteryFixture(
            "plane-halfplane", "Z^2", 48, False, PLANE_SCHEDULE,
            _pred(lambda p: p[0] >= 1, "half-plane x >= 1"),
        ),
        BatteryFixture(
            "plane-quadrant", "Z^2", 48, False, PLANE_SCHEDULE,
            _pred(lambda p: p[0] >= 1 and p[1] >= 1, "open quadrant"),
        ),
        BatteryFixture(
            "plane-ball", "Z^2", 48, True, PLANE_SCHEDULE,
            _pred(lambda p: abs(p[0]) + abs(p[1]) <= 3, "ball of radius 3"),
        ),
        BatteryFixture(
            "free-initial-a", "F2", 8, True, F2_SCHEDULE,
            _pred(lambda w: w[:1] == "a", "words starting with a"),
        ),
        BatteryFixture(
            "free-identity", "F2", 8, True, F2_SCHEDULE,
            _pred(lambda w: w == "", "the identity alone"),
        ),
        BatteryFixture(
            "free-even-length", "F2", 8, False, F2_SCHEDULE,
            _pred(lambda w: len(w) % 2 == 0, "even-length words"),
        ),
        BatteryFixture(
            "free-branch-a", "F2", 8, True, F2_BRANCH_SCHEDULE, _f2_branch,
        ),
        BatteryFixture(
            "sum-first-coordinate", "sumZ/2", 60, False, SUM_SCHEDULE,
            _pred(lambda s: 1 in s, "sets containing index 1"),
        ),
        BatteryFixture(
            "sum-deep-support", "sumZ/2", 60, True, SUM_SCHEDULE,
            _pred(lambda s: _sum_max(s) >= 3, "support reaching index 3"),
        ),
    )


def non_geodesic_window(radius: int = 20) -> FiniteWindow:
    """The line with unit-weight steps of 1 and 5, where the graph keeps
    only the 5-steps but the metric keeps both. Points at distance 1 can
    then be graph-far, breaking the ball-in-one-component property that
    holds automatically on true Cayley windows."""
    group = IntLine(steps=((1, 1), (5, 1)), name="Z-two-speeds")
    window = generate_window(group, radius)
    jumps = [i for i, (g, _) in enumerate(window.consulted) if abs(g) == 5]
    return window.with_adjacency(jumps)


def two_adic_window(radius: int = 30) -> FiniteWindow:
    """Restricted-sum window re-metrized by the two-adic-style distance
    2^(largest differing index), which is an ultrametric."""
    window = generate_window(RestrictedSumZ2(), radius)

    def two_adic(s, t):
        diff = set(s) ^ set(t)
        return 2 ** max(diff) if diff else 0

    return window.with_metric(two_adic)


def cylinder_indicator() -> Callable:
    """Characteristic function of the sets supported inside {1, 2}: a
    cylinder fixing all higher coordinates to zero."""
    return lambda s: 1.0 if _sum_max(s) <= 2 else 0.0


def sin_log(n: int) -> float:
    """Slowly oscillating but not glacially oscillating test function."""
    return math.sin(math.log(1 + abs(n)))


def cross_space(arm: int = 25):
    """Four rays glued at a point, with the path metric through the hub.

    Returns (points, dist). Points are ('o',) for the hub and
    (arm_name, i) for the i-th vertex out each arm.
    """
    arms = ("n", "e", "s", "w")
    points = [("o", 0)] + [(a, i) for a in arms for i in range(1, arm + 1)]

    def dist(p, q):
        (pa, pi), (qa, qi) = p, q
        if pa == qa:
            return abs(pi - qi)
        return pi + qi

    return points, dist
