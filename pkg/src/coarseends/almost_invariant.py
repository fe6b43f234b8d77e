"""Almost invariance of subsets: symmetric-difference traces against right
translates, stabilization verdicts, and certified counts of disjoint
unbounded branch sets.

A set is almost invariant when its symmetric difference with every right
translate is finite. On a finite window the evidence is a per-generator
trace of difference counts over a radius schedule: counts that stop
changing while the differences stay well inside the window support the
verdict; counts that keep growing refute it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .errors import BallTooLarge, CertificationFailed, PreconditionViolated
from .ends_tree import ComponentTree
from .groups import Element, GroupOracle
from .windows import DEFAULT_MEMORY_CAP, FiniteWindow, generate_window


@dataclass(frozen=True)
class SetOracle:
    """A deterministic membership predicate with a short description.

    ``domain_radius`` marks how far out the answers are trustworthy; None
    means everywhere. Sets read off from a finite window (branch sets,
    explicit element lists) only know membership inside that window, and
    verdicts must not consult them beyond it.
    """

    membership: Callable[[Element], bool]
    description: str
    domain_radius: int | None = None

    def __call__(self, x: Element) -> bool:
        return bool(self.membership(x))


def oracle_from_members(members, description: str, domain_radius: int) -> SetOracle:
    """Oracle backed by an explicit member set read off a finite window."""
    frozen = frozenset(members)
    return SetOracle(frozen.__contains__, description, domain_radius)


def symmetric_difference_window(A: SetOracle, g: Element, window: FiniteWindow) -> set:
    """Window trace of the symmetric difference between A and its right
    translate by g: the x in the window where membership of x and of
    x * g^-1 disagree."""
    group = window.group
    ginv = group.inverse(g)
    out = set()
    for x in window.elements:
        if A(x) != A(group.canonical(group.multiply(x, ginv))):
            out.add(x)
    return out


@dataclass(frozen=True)
class GeneratorTrace:
    """Difference counts for one translate over the radius schedule."""

    label: str
    counts: tuple[int, ...]
    max_diff_norm: int | None  # None when no differences at all

    def stabilized(self, schedule, window_w: int) -> bool:
        tail = self.counts[-window_w:]
        if any(c != tail[0] for c in tail):
            return False
        return self.max_diff_norm is None or self.max_diff_norm <= schedule[-window_w]

    def growing(self, window_w: int) -> bool:
        tail = self.counts[-window_w:]
        non_decreasing = all(a <= b for a, b in zip(tail, tail[1:]))
        return non_decreasing and tail[-1] > tail[0]


@dataclass(frozen=True)
class AlmostInvarianceReport:
    kind: str  # "AlmostInvariant" | "NotAlmostInvariant" | "Inconclusive"
    schedule: tuple[int, ...]
    traces: tuple[GeneratorTrace, ...]
    witness: str | None = None
    reason: str | None = None

    def definitive(self) -> bool:
        return self.kind != "Inconclusive"

    def accepted(self) -> bool | None:
        if self.kind == "AlmostInvariant":
            return True
        if self.kind == "NotAlmostInvariant":
            return False
        return None

    def __str__(self) -> str:
        if self.kind == "NotAlmostInvariant":
            return f"NotAlmostInvariant(witness={self.witness})"
        return self.kind


def _sample_products(group: GroupOracle, gens, count: int, seed: int):
    """A seeded sample of short products (two or three generators) used as
    extra translates; generator-level stability is the core evidence and
    the sample guards against oracles tuned to single generators.

    Products are capped in total weight at the heaviest single generator
    (or three unit steps, whichever is larger): a translate much heavier
    than any generator already checked shifts differences toward the
    horizon and would poison honest traces."""
    if count <= 0 or not gens:
        return []
    rng = random.Random(seed)
    weights = [w for _, w in gens]
    bound = max(3 * min(weights), max(weights))
    seen = {group.canonical(g) for g, _ in gens}
    seen.add(group.canonical(group.identity))
    out = []
    for _ in range(count * 8):
        if len(out) >= count:
            break
        parts = [rng.choice(gens) for _ in range(rng.choice((2, 3)))]
        if sum(w for _, w in parts) > bound:
            continue
        prod = group.identity
        for p, _ in parts:
            prod = group.multiply(prod, p)
        key = group.canonical(prod)
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


def almost_invariant_verdict(
    A: SetOracle,
    group: GroupOracle,
    radius_schedule,
    window: FiniteWindow | None = None,
    window_w: int = 5,
    generators=None,
    product_samples: int = 4,
    seed: int = 11,
    memory_cap: int = DEFAULT_MEMORY_CAP,
) -> AlmostInvarianceReport:
    """Trace symmetric differences against generator translates (plus a
    seeded sample of short products) over the schedule and classify.

    AlmostInvariant needs every trace constant over the last window_w
    radii with all differences at norm <= the first of those radii;
    NotAlmostInvariant needs some trace non-decreasing and strictly
    larger at the end. Anything else, including a window that cannot be
    generated, is Inconclusive.
    """
    schedule = tuple(radius_schedule)
    if window_w < 2 or len(schedule) < window_w:
        raise PreconditionViolated(f"need at least window_w={window_w} schedule radii")
    if any(b <= a for a, b in zip(schedule, schedule[1:])) or schedule[0] < 0:
        raise PreconditionViolated("schedule must be strictly increasing and non-negative")
    top = schedule[-1]
    if window is None:
        try:
            window = generate_window(group, top, memory_cap)
        except BallTooLarge as err:
            return AlmostInvarianceReport(
                "Inconclusive",
                schedule,
                (),
                reason=f"window generation exceeded the memory cap at radius {err.radius_reached}",
            )
    elif window.radius < top:
        raise PreconditionViolated("window smaller than the schedule top")
    if A.domain_radius is not None:
        gens_for_margin = generators if generators is not None else group.generators_within(top)
        margin = max((w for _, w in gens_for_margin), default=0)
        if A.domain_radius < top + margin:
            raise PreconditionViolated(
                f"oracle only answers to norm {A.domain_radius}; "
                f"schedule top {top} plus translate weight {margin} reaches past it"
            )
    if generators is None:
        generators = group.generators_within(top)
    labels = [(g, window.group.serialize(g)) for g, _ in generators]
    # Sampled products can be heavier than any single generator; against a
    # domain-limited oracle, keep only the ones whose translate never
    # consults membership past the trustworthy radius.
    sample_allowance = None if A.domain_radius is None else A.domain_radius - top
    for key in _sample_products(group, generators, product_samples, seed):
        if sample_allowance is not None:
            norm = window.norms.get(key)
            if norm is None or norm > sample_allowance:
                continue
        labels.append((key, "sample:" + window.group.serialize(key)))

    norms = window.norms
    traces = []
    for g, label in labels:
        diffs = _trace_diffs(A, g, window, top)
        counts = tuple(sum(1 for x in diffs if norms[x] <= r) for r in schedule)
        max_norm = max((norms[x] for x in diffs), default=None)
        traces.append(GeneratorTrace(label, counts, max_norm))
    traces = tuple(traces)

    if all(t.stabilized(schedule, window_w) for t in traces):
        return AlmostInvarianceReport("AlmostInvariant", schedule, traces)
    for t in traces:
        if t.growing(window_w):
            return AlmostInvarianceReport(
                "NotAlmostInvariant", schedule, traces, witness=t.label
            )
    return AlmostInvarianceReport(
        "Inconclusive", schedule, traces, reason="traces neither stabilize nor grow"
    )


def _trace_diffs(A, g, window, top):
    """Symmetric-difference trace restricted to norms <= top."""
    group = window.group
    ginv = group.inverse(g)
    norms = window.norms
    out = set()
    for x in window.elements:
        if norms[x] > top:
            continue
        if A(x) != A(group.canonical(group.multiply(x, ginv))):
            out.add(x)
    return out


@dataclass(frozen=True)
class BranchCertificate:
    rep: str
    size: int
    kind: str
    max_diff_norm: int | None


@dataclass(frozen=True)
class NccReport:
    """Certified lower bound on disjoint unbounded almost invariant sets."""

    count: int
    certificates: tuple[BranchCertificate, ...]
    certified: bool
    schedule: tuple[int, ...]
    skipped_reason: str | None = None


def disjoint_ncc_count(
    group: GroupOracle,
    tree: ComponentTree,
    window: FiniteWindow | None = None,
    window_w: int = 5,
    certify_limit: int = 16,
    memory_cap: int = DEFAULT_MEMORY_CAP,
) -> NccReport:
    """Count the deepest level's horizon-touching components and certify
    each as an almost invariant set.

    The branch sets are pairwise disjoint by construction (distinct
    components of one annulus). Certification consults the same adjacency
    generators the tree used, over a schedule kept one translate-weight
    short of the window so member-set oracles are never consulted beyond
    their data. Counts above ``certify_limit`` are reported uncertified;
    a certification failure raises CertificationFailed naming the branch.
    """
    if not tree.levels:
        return NccReport(0, (), True, (), skipped_reason="empty tree")
    deepest = tree.levels[-1]
    branches = [n for n in deepest.nodes if n.horizon_touching]
    if not branches:
        return NccReport(0, (), True, ())
    if window is None:
        window = generate_window(group, tree.window_radius, memory_cap)
    gens = window.adjacency_generators(tree.step_cap)
    margin = max(w for _, w in gens)
    hi = tree.window_radius - margin
    lo = deepest.cut + margin
    if hi <= lo:
        raise CertificationFailed("window leaves no room between cut and horizon")
    span = hi - lo
    if span + 1 < window_w:
        raise CertificationFailed(
            f"only {span + 1} usable radii between {lo} and {hi}, need {window_w}"
        )
    step = max(1, span // (window_w - 1))
    schedule = tuple(hi - step * i for i in range(window_w))[::-1]
    if len(branches) > certify_limit:
        return NccReport(
            len(branches),
            (),
            False,
            schedule,
            skipped_reason=f"branch count {len(branches)} above certify limit {certify_limit}",
        )
    certificates = []
    for node in branches:
        oracle = oracle_from_members(
            node.members, f"branch {node.rep}", tree.window_radius
        )
        report = almost_invariant_verdict(
            oracle,
            group,
            schedule,
            window=window,
            window_w=window_w,
            generators=gens,
            product_samples=2,
        )
        if report.kind != "AlmostInvariant":
            raise CertificationFailed(
                f"branch {node.rep}: window verdict {report.kind}; radii likely too small"
            )
        worst = max(
            (t.max_diff_norm for t in report.traces if t.max_diff_norm is not None),
            default=None,
        )
        certificates.append(
            BranchCertificate(node.rep, node.size, report.kind, worst)
        )
    return NccReport(len(branches), tuple(certificates), True, schedule)


@dataclass(frozen=True)
class CrosscheckReport:
    kind: str  # "Agreement" | "Disagreement" | "Inconclusive"
    clopen_accepted: bool | None
    invariance_kind: str
    details: str = ""

    def agreed(self) -> bool:
        return self.kind == "Agreement"


def crosscheck_clopen_vs_almost_invariant(
    A: SetOracle,
    group: GroupOracle,
    window: FiniteWindow,
    radius_schedule,
    reaches=(1, 2, 4, 8),
    cores=None,
    window_w: int = 5,
) -> CrosscheckReport:
    """Run the metric-side window check and the translate-side verdict on
    the same set and compare: both accept or both reject is Agreement."""
    from .glacial import coarsely_clopen_grid

    a_set = {x for x in window.elements if A(x)}
    grid = coarsely_clopen_grid(a_set, window, reaches, cores)
    verdict = almost_invariant_verdict(
        A, group, radius_schedule, window=window, window_w=window_w
    )
    ai = verdict.accepted()
    if grid.accepted is None or ai is None:
        return CrosscheckReport(
            "Inconclusive", grid.accepted, verdict.kind, details="one side undecided"
        )
    if grid.accepted == ai:
        return CrosscheckReport("Agreement", grid.accepted, verdict.kind)
    return CrosscheckReport(
        "Disagreement",
        grid.accepted,
        verdict.kind,
        details=f"window check {grid.accepted}, translates {verdict.kind}",
    )
