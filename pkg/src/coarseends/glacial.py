"""Glacial scales: admissible chains, chain components, oscillation and
chain-absorption checks on finite windows.

A scale is a finite nested list of (bounded set, step size) pairs with
strictly increasing step sizes. A step between two points is admissible
when some pair excludes both points while allowing the step length; a
set absorbs chains when no admissible step leaves it. These notions give
the finite-window reading of coarsely clopen sets, cross-checked against
plain component cuts and (elsewhere) almost invariance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    Exceeds,
    InvalidRadii,
    NotUltrametric,
    PointOutsideWindow,
    PreconditionViolated,
)
from .windows import FiniteWindow

EPS_SLACK = 1e-12


@dataclass(frozen=True)
class GlacialScale:
    """Finite truncation of a glacial scale: pairs (K_i, n_i).

    K_i are nested sets of window keys and n_i strictly increasing
    positive step sizes. A finite truncation stands in for the cofinality
    requirement of the limit object; every verdict computed against it is
    relative to the truncation depth.
    """

    pairs: tuple[tuple[frozenset, int], ...]

    def __post_init__(self):
        for (ka, na), (kb, nb) in zip(self.pairs, self.pairs[1:]):
            if not ka <= kb:
                raise PreconditionViolated("scale sets must be nested")
            if not na < nb:
                raise PreconditionViolated("scale steps must strictly increase")
        if any(n < 1 for _, n in self.pairs):
            raise PreconditionViolated("scale steps must be positive")

    @property
    def depth(self) -> int:
        return len(self.pairs)

    def max_step(self) -> int:
        return self.pairs[-1][1] if self.pairs else 0

    def first_in(self, x) -> int:
        """1-based index of the first set containing x; depth+1 if none.

        The sets are nested, so x lies in every set from this index on.
        """
        for i, (k, _) in enumerate(self.pairs):
            if x in k:
                return i + 1
        return self.depth + 1

    def step_allowance(self, x, y) -> int:
        """Largest admissible step length for the pair (x, y), or 0.

        A witnessing index m needs both points outside K_m; scanning from
        the largest such m downward, the first (largest) step size wins,
        and by monotonicity that is the step size at the deepest index
        excluding both points.
        """
        m = min(self.first_in(x), self.first_in(y)) - 1
        m = min(m, self.depth)
        return self.pairs[m - 1][1] if m >= 1 else 0


def _require_in_window(window: FiniteWindow, pts) -> None:
    for p in pts:
        if p not in window:
            raise PointOutsideWindow(f"{window.group.serialize(p)} not in window")


def _step_ok(scale: GlacialScale, window: FiniteWindow, x, y) -> bool:
    allowance = scale.step_allowance(x, y)
    if allowance == 0:
        return False
    d = window.distance(x, y)
    return not isinstance(d, Exceeds) and d <= allowance


def is_s_chain(path, scale: GlacialScale, window: FiniteWindow) -> bool:
    """True iff every consecutive pair of the path is an admissible step."""
    path = list(path)
    _require_in_window(window, path)
    return all(_step_ok(scale, window, a, b) for a, b in zip(path, path[1:]))


def _chain_neighbors(window: FiniteWindow, x, reach: int):
    """Candidate step partners of x within the maximal step size."""
    return window.ball_keys(x, reach)


def s_components(region, scale: GlacialScale, window: FiniteWindow) -> list[frozenset]:
    """Partition a region into maximal admissible-chain-connected classes.

    Returned components are sorted by their smallest member (norm, then
    serialized form), smallest first.
    """
    region = set(region)
    _require_in_window(window, region)
    parent = {x: x for x in region}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    reach = scale.max_step()
    for x in region:
        for y in _chain_neighbors(window, x, reach):
            if y in region and y != x and _step_ok(scale, window, x, y):
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[ry] = rx
    groups: dict = {}
    for x in window.sorted_keys(region):
        groups.setdefault(find(x), []).append(x)
    return [frozenset(g) for g in groups.values()]


def m_components(window: FiniteWindow, k_set, m: int) -> list[frozenset]:
    """Partition window minus k_set into classes joined by hops of
    distance at most m that stay outside k_set."""
    if m < 1:
        raise InvalidRadii("hop bound must be >= 1")
    k_set = set(k_set)
    region = [x for x in window.elements if x not in k_set]
    parent = {x: x for x in region}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for x in region:
        for y in window.ball_keys(x, m):
            if y != x and y in parent:
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[ry] = rx
    groups: dict = {}
    for x in region:  # window order: deterministic
        groups.setdefault(find(x), []).append(x)
    return [frozenset(g) for g in groups.values()]


@dataclass(frozen=True)
class OscillationVerdict:
    passed: bool
    witness: tuple | None = None
    chain: tuple | None = None
    spread: float = 0.0

    def __bool__(self) -> bool:
        return self.passed


def _connecting_chain(window, scale, component, start, goal):
    """Shortest admissible chain between two points of one component."""
    frontier = [start]
    prev = {start: None}
    reach = scale.max_step()
    while frontier and goal not in prev:
        nxt = []
        for x in frontier:
            for y in _chain_neighbors(window, x, reach):
                if y in component and y not in prev and _step_ok(scale, window, x, y):
                    prev[y] = x
                    nxt.append(y)
        frontier = nxt
    if goal not in prev:
        return (start, goal)  # unreachable only if the partition is buggy
    path = [goal]
    while path[-1] != start:
        path.append(prev[path[-1]])
    return tuple(reversed(path))


def glacial_oscillation_test(
    f, epsilon: float, scale: GlacialScale, window: FiniteWindow
) -> OscillationVerdict:
    """Pass iff every chain component of the window has f-spread < epsilon.

    A failure reports two points of one component at spread >= epsilon
    together with a connecting admissible chain.
    """
    if epsilon <= 0:
        raise InvalidRadii("epsilon must be positive")
    worst = 0.0
    for comp in s_components(window.elements, scale, window):
        ordered = window.sorted_keys(comp)
        values = {x: f(x) for x in ordered}
        lo = min(ordered, key=values.get)
        hi = max(ordered, key=values.get)
        spread = values[hi] - values[lo]
        worst = max(worst, spread)
        if spread >= epsilon - EPS_SLACK:
            chain = _connecting_chain(window, scale, comp, lo, hi)
            return OscillationVerdict(False, witness=(lo, hi), chain=chain, spread=spread)
    return OscillationVerdict(True, spread=worst)


@dataclass(frozen=True)
class AbsorptionVerdict:
    absorbed: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.absorbed


def chain_absorption_check(a_set, scale: GlacialScale, window: FiniteWindow) -> AbsorptionVerdict:
    """Absorbed iff no admissible step leads from a_set out of it.

    Chains are concatenations of steps, so checking single steps from
    every point of the set is equivalent to checking whole chains. The
    witness, when present, is the first offending step in (norm,
    serialized) order.
    """
    a_set = set(a_set)
    _require_in_window(window, a_set)
    reach = scale.max_step()
    for x in window.sorted_keys(a_set):
        outside = [y for y in _chain_neighbors(window, x, reach) if y not in a_set]
        for y in window.sorted_keys(outside):
            if _step_ok(scale, window, x, y):
                return AbsorptionVerdict(False, witness=(x, y))
    return AbsorptionVerdict(True)


def coarsely_clopen_window_check(a_set, window: FiniteWindow, m: int, core_radius: int) -> bool:
    """True iff every pair (a in the set, b outside) within distance m has
    both norms at most core_radius: the m-neighborhoods of the set and of
    its complement only meet inside the core ball."""
    if m < 1 or core_radius < 0 or core_radius + m > window.radius:
        raise InvalidRadii(f"need m >= 1 and core_radius + m <= {window.radius}")
    a_set = set(a_set)
    norms = window.norms
    for a in a_set:
        na = norms[a]
        for b in window.ball_keys(a, m):
            if b not in a_set and (na > core_radius or norms[b] > core_radius):
                return False
    return True


@dataclass(frozen=True)
class GridVerdict:
    """Outcome of the coarsely-clopen check over a parameter grid.

    accepted is True when every feasible reach m has a passing core
    radius, False when some feasible m fails at every core radius, and
    None when the window cannot host any (m, core) pair at all.
    """

    accepted: bool | None
    per_reach: tuple[tuple[int, int | None], ...]  # (m, passing core or None)
    reaches: tuple[int, ...]
    cores: tuple[int, ...]

    def definitive(self) -> bool:
        return self.accepted is not None


def default_cores(radius: int) -> tuple[int, ...]:
    cores = []
    c = 1
    while c <= radius // 2:
        cores.append(c)
        c *= 2
    return tuple(cores)


def coarsely_clopen_grid(
    a_set,
    window: FiniteWindow,
    reaches: tuple[int, ...] = (1, 2, 4, 8),
    cores: tuple[int, ...] | None = None,
) -> GridVerdict:
    """Grid acceptance rule for the window check.

    Core radii stay at most half the window radius, so acceptance
    witnesses a boundary confined to a core growing sublinearly with the
    window.
    """
    if cores is None:
        cores = default_cores(window.radius)
    rows = []
    feasible = False
    accepted: bool | None = True
    for m in reaches:
        usable = [r for r in cores if r + m <= window.radius]
        if not usable:
            continue
        feasible = True
        passing = None
        for r in usable:
            if coarsely_clopen_window_check(a_set, window, m, r):
                passing = r
                break
        rows.append((m, passing))
        if passing is None:
            accepted = False
    if not feasible:
        accepted = None
    return GridVerdict(accepted, tuple(rows), tuple(reaches), tuple(cores))


def boolean_ops(a_set, c_set) -> dict:
    a_set, c_set = set(a_set), set(c_set)
    return {
        "intersection": a_set & c_set,
        "difference": a_set - c_set,
        "union": a_set | c_set,
    }


def scale_from_balls(window: FiniteWindow, ball_radii, steps) -> GlacialScale:
    """Scale whose sets are norm balls around the identity."""
    ball_radii = list(ball_radii)
    steps = list(steps)
    if len(ball_radii) != len(steps):
        raise PreconditionViolated("need one step size per ball radius")
    norms = window.norms
    pairs = []
    for radius, n in zip(ball_radii, steps):
        pairs.append((frozenset(k for k in norms if norms[k] <= radius), n))
    return GlacialScale(tuple(pairs))


def canonical_scale_family(window: FiniteWindow, coarseness_grid=(1, 2, 4)) -> dict[int, GlacialScale]:
    """The standard truncated scales: for coarseness c, the k-th set is
    the ball of radius c * 2^k with step size k.

    Only scales whose deepest set stays inside half the window radius are
    returned; a scale whose sets swallow the window makes every verdict
    vacuous.
    """
    family = {}
    half = window.radius // 2
    for c in coarseness_grid:
        radii = []
        k = 1
        while c * 2**k <= half:
            radii.append(c * 2**k)
            k += 1
        if radii:
            family[c] = scale_from_balls(window, radii, list(range(1, len(radii) + 1)))
    return family


def component_cut_criterion(f, epsilon: float, window: FiniteWindow, cuts) -> bool:
    """Plain-components reading: some cut radius makes every adjacency
    component of the window beyond the cut have f-spread < epsilon."""
    from .ends_tree import annulus_components

    for cut in cuts:
        if cut >= window.radius:
            continue
        ok = True
        for node in annulus_components(window, cut, window.radius):
            values = [f(x) for x in node.members]
            if max(values) - min(values) >= epsilon - EPS_SLACK:
                ok = False
                break
        if ok:
            return True
    return False


def m_component_criterion(f, epsilon: float, window: FiniteWindow, reaches, cuts) -> bool:
    """Bounded-hop reading: for every hop bound some cut works."""
    norms = window.norms
    for m in reaches:
        found = False
        for cut in cuts:
            if cut >= window.radius:
                continue
            k_set = {x for x in window.elements if norms[x] <= cut}
            ok = True
            for comp in m_components(window, k_set, m):
                values = [f(x) for x in comp]
                if max(values) - min(values) >= epsilon - EPS_SLACK:
                    ok = False
                    break
            if ok:
                found = True
                break
        if not found:
            return False
    return True


def union_construction(a_sets, k_sets, steps, window: FiniteWindow) -> set:
    """Union of a compatible increasing family of chain-connected sets.

    Preconditions (checked, with the failing 1-based index attached to
    the error): the i-th set avoids the i-th core and is connected by
    hops of at most the i-th step size inside itself; outside the next
    core it is contained in the next set.
    """
    a_sets = [set(a) for a in a_sets]
    k_sets = [set(k) for k in k_sets]
    steps = list(steps)
    if not (len(a_sets) == len(k_sets) == len(steps)):
        raise PreconditionViolated("need matching numbers of sets, cores and steps")
    for ka, kb in zip(k_sets, k_sets[1:]):
        if not ka <= kb:
            raise PreconditionViolated("cores must be nested")
    if any(b <= a for a, b in zip(steps, steps[1:])):
        raise PreconditionViolated("step sizes must strictly increase")
    for i, (a, k, n) in enumerate(zip(a_sets, k_sets, steps), start=1):
        err = None
        if a & k:
            err = PreconditionViolated(f"set {i} meets its excluded core")
        elif a and not _hop_connected(a, n, window):
            err = PreconditionViolated(f"set {i} is not connected by hops of {n}")
        if err is not None:
            err.index = i
            raise err
    for i in range(len(a_sets) - 1):
        if not a_sets[i] - k_sets[i + 1] <= a_sets[i + 1]:
            err = PreconditionViolated(f"set {i + 1} leaks outside set {i + 2} beyond core {i + 2}")
            err.index = i + 1
            raise err
    out: set = set()
    for a in a_sets:
        out |= a
    return out


def _hop_connected(points: set, hop: int, window: FiniteWindow) -> bool:
    start = next(iter(window.sorted_keys(points)))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for y in window.ball_keys(x, hop):
                if y in points and y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen) == len(points)


def ultrametric_scale_builder(
    window: FiniteWindow, f, epsilon: float, depth_cap: int = 64
) -> GlacialScale:
    """Scale construction for ultrametric windows.

    First verifies the strong triangle inequality on every triple (the
    witness triple rides the error on failure). The scale then grows by
    repeated ball-thickening: the next set is the step-size-wide
    neighborhood of the previous one. The requirement that f oscillates
    slowly at the window's own scales is checked against each pair as it
    is built.
    """
    def val(d):
        # Exceeds(cap) is strictly above every realized distance; two such
        # values compare equal under the proxy, which can only hide, never
        # invent, a violation.
        return window.radius + 1 if isinstance(d, Exceeds) else d

    elements = window.elements
    for x in elements:
        for y in elements:
            dxy = window.distance(x, y)
            for z in elements:
                dxz = window.distance(x, z)
                dzy = window.distance(z, y)
                if val(dxy) > max(val(dxz), val(dzy)):
                    raise NotUltrametric((x, z, y), (dxy, dxz, dzy))
    e = window.group.canonical(window.group.identity)
    current = window.ball_keys(e, 1)
    pairs = []
    n = 1
    while len(current) < len(elements) and n <= depth_cap:
        expanded = set()
        for x in current:
            expanded |= window.ball_keys(x, n)
        _check_slow_at_scale(f, epsilon, expanded, n, window)
        pairs.append((frozenset(expanded), n))
        current = expanded
        n += 1
    if not pairs:
        pairs.append((frozenset(current), 1))
    return GlacialScale(tuple(pairs))


def _check_slow_at_scale(f, epsilon, k_set, n, window) -> None:
    outside = [x for x in window.elements if x not in k_set]
    for x in outside:
        for y in window.ball_keys(x, n):
            if y not in k_set and abs(f(x) - f(y)) >= epsilon - EPS_SLACK:
                raise PreconditionViolated(
                    f"f is not slowly oscillating at step {n}: "
                    f"|f({window.group.serialize(x)}) - f({window.group.serialize(y)})| >= {epsilon}"
                )


def multi_absorption_scale(scales) -> GlacialScale:
    """Combine scales by uniting their sets and taking the smallest step
    size at each depth (truncated to the shallowest input). Every step
    admissible for the combination is admissible for each input, so a set
    absorbed by its own input scale is absorbed by the combination."""
    scales = list(scales)
    if not scales:
        raise PreconditionViolated("need at least one scale")
    depth = min(s.depth for s in scales)
    pairs = []
    for i in range(depth):
        union: frozenset = frozenset()
        step = None
        for s in scales:
            k, n = s.pairs[i]
            union |= k
            step = n if step is None else min(step, n)
        pairs.append((union, step))
    return GlacialScale(tuple(pairs))


def slow_oscillation_profile(f, window: FiniteWindow, shell_bounds) -> list[float]:
    """Per-shell maximum of |f(x) - f(neighbor)| over generator edges,
    shells delimited by consecutive bounds (lower inclusive)."""
    bounds = list(shell_bounds)
    if len(bounds) < 2:
        raise InvalidRadii("need at least two shell bounds")
    group = window.group
    norms = window.norms
    out = []
    for lo, hi in zip(bounds, bounds[1:]):
        worst = 0.0
        for x in window.elements:
            if not lo <= norms[x] < hi:
                continue
            fx = f(x)
            for g, _ in window.adjacency_generators():
                y = group.canonical(group.multiply(x, g))
                if y in norms:
                    worst = max(worst, abs(fx - f(y)))
        out.append(worst)
    return out
