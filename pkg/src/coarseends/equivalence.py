"""Run the named set fixtures through three independent checks and
compare the verdicts pairwise.

The three checks are chain absorption against a canonical scale family,
the coarsely clopen window grid, and the almost invariance verdict. In
the limit they describe the same class of sets; on a finite window each
can also come back undecided, so agreement is asserted only between
definitive cells.
"""

from __future__ import annotations

from dataclasses import dataclass

from .almost_invariant import almost_invariant_verdict
from .fixtures import BatteryFixture, battery_fixtures
from .glacial import (
    canonical_scale_family,
    chain_absorption_check,
    coarsely_clopen_grid,
)
from .groups import builtin_groups
from .windows import FiniteWindow, generate_window


def absorbed_by_some_scale(a_set, window: FiniteWindow) -> bool:
    """Does any scale in the canonical family absorb chains for the set?"""
    family = canonical_scale_family(window)
    return any(
        chain_absorption_check(a_set, scale, window).absorbed
        for scale in family.values()
    )


@dataclass(frozen=True)
class FixtureOutcome:
    """One battery row: the three check results for one named set.

    ``absorption`` is always boolean; the grid and invariance checks can
    return ``None`` when the window was too small to decide.
    """

    name: str
    group_key: str
    expected: bool
    absorption: bool
    clopen: bool | None
    invariance: bool | None
    invariance_kind: str

    def cells(self) -> tuple[bool | None, bool | None, bool | None]:
        return (self.absorption, self.clopen, self.invariance)

    def definitive_cells(self) -> list[bool]:
        return [c for c in self.cells() if c is not None]

    def agreement(self) -> bool:
        """All definitive cells carry the same verdict."""
        cells = self.definitive_cells()
        return all(c == cells[0] for c in cells)

    def matches_expected(self) -> bool:
        return all(c == self.expected for c in self.definitive_cells())


@dataclass(frozen=True)
class BatteryReport:
    outcomes: tuple[FixtureOutcome, ...]

    @property
    def total_cells(self) -> int:
        return 3 * len(self.outcomes)

    @property
    def inconclusive_cells(self) -> int:
        return sum(
            1 for o in self.outcomes for c in o.cells() if c is None
        )

    @property
    def inconclusive_rate(self) -> float:
        return self.inconclusive_cells / self.total_cells if self.outcomes else 0.0

    def disagreements(self) -> tuple[str, ...]:
        return tuple(o.name for o in self.outcomes if not o.agreement())

    def mismatches(self) -> tuple[str, ...]:
        return tuple(o.name for o in self.outcomes if not o.matches_expected())

    def all_agree(self) -> bool:
        return not self.disagreements()


def run_battery(
    fixtures: tuple[BatteryFixture, ...] | None = None,
    window_cache: dict | None = None,
    window_w: int = 5,
) -> BatteryReport:
    """Evaluate every fixture under all three checks.

    Windows are cached by group and radius, so fixtures sharing a window
    pay for its generation once. Pass a dict to keep the cache across
    calls.
    """
    if fixtures is None:
        fixtures = battery_fixtures()
    catalog = builtin_groups()
    cache = {} if window_cache is None else window_cache
    outcomes = []
    for fx in fixtures:
        key = (fx.group_key, fx.window_radius)
        if key not in cache:
            cache[key] = generate_window(catalog[fx.group_key], fx.window_radius)
        window = cache[key]
        oracle = fx.make_oracle(window)
        a_set = {x for x in window.elements if oracle(x)}
        absorption = absorbed_by_some_scale(a_set, window)
        grid = coarsely_clopen_grid(a_set, window)
        report = almost_invariant_verdict(
            oracle, window.group, fx.schedule, window=window, window_w=window_w
        )
        outcomes.append(
            FixtureOutcome(
                name=fx.name,
                group_key=fx.group_key,
                expected=fx.expected,
                absorption=absorption,
                clopen=grid.accepted,
                invariance=report.accepted(),
                invariance_kind=report.kind,
            )
        )
    return BatteryReport(tuple(outcomes))
