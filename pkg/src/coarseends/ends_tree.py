"""Component filtration of Cayley windows and the ends classification.

For each cut radius r the window's annulus from r out to a horizon
(a fixed multiple of r, capped by the window) is split into components
of the generator-adjacency graph. Components that can leave the horizon
are the finite-scale surrogate for unbounded complement components; the
branch structure across increasing cuts approximates the end space.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

from .errors import BallTooLarge, InvalidRadii, PreconditionViolated
from .groups import GroupOracle
from .windows import DEFAULT_MEMORY_CAP, FiniteWindow, generate_window


@dataclass(frozen=True)
class ComponentNode:
    """One adjacency component of an annulus.

    ``horizon_touching`` is the unboundedness surrogate: some member has a
    generator neighbor past the horizon (or outside the window entirely),
    or the group's generator stream continues past what the window
    consulted, in which case every element has untracked far neighbors.
    ``parents`` holds indices of the containing components one level up;
    it is a single index on well-behaved filtrations.
    """

    rep: str
    members: frozenset
    horizon_touching: bool
    parents: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class TreeLevel:
    cut: int
    horizon: int
    nodes: tuple[ComponentNode, ...]

    def horizon_count(self) -> int:
        return sum(1 for n in self.nodes if n.horizon_touching)


@dataclass
class ComponentTree:
    group_name: str
    radii: list[int]
    horizon_factor: float
    step_cap: int | None
    levels: list[TreeLevel]
    window_radius: int
    truncated: bool = False
    dropped_radii: list[int] = field(default_factory=list)

    def counts(self) -> list[int]:
        return [lv.horizon_count() for lv in self.levels]

    def total_nodes(self) -> int:
        return sum(len(lv.nodes) for lv in self.levels)


def _find(parent: dict, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def annulus_components(
    window: FiniteWindow,
    cut: int,
    horizon: int,
    step_cap: int | None = None,
) -> list[ComponentNode]:
    """Split {x : cut < norm(x) <= horizon} into adjacency components.

    Adjacency uses the window's generators, optionally only those of
    weight <= step_cap. An equal cut and horizon give the empty annulus;
    a cut beyond the horizon, or a horizon beyond the window, is an error.
    """
    if cut < 0 or cut > horizon or horizon > window.radius:
        raise InvalidRadii(f"need 0 <= cut <= horizon <= {window.radius}, got ({cut}, {horizon})")
    norms = window.norms
    group = window.group
    annulus = [k for k in window.elements if cut < norms[k] <= horizon]
    if not annulus:
        return []
    parent = {k: k for k in annulus}
    exits: set = set()
    gens = [g for g, _ in window.adjacency_generators(step_cap)]
    in_annulus = parent.__contains__
    for x in annulus:
        for g in gens:
            y = group.canonical(group.multiply(x, g))
            ny = norms.get(y)
            if ny is None or ny > horizon:
                exits.add(x)
            elif ny > cut:
                rx, ry = _find(parent, x), _find(parent, y)
                if rx != ry:
                    parent[ry] = rx
    all_touch = window.stream_unexhausted
    groups: dict = {}
    for k in annulus:  # window.elements order makes this deterministic
        groups.setdefault(_find(parent, k), []).append(k)
    touched_roots = {_find(parent, x) for x in exits}
    nodes = []
    for root, members in groups.items():
        nodes.append(
            ComponentNode(
                rep=group.serialize(members[0]),
                members=frozenset(members),
                horizon_touching=all_touch or root in touched_roots,
            )
        )
    return nodes


def _snap(occupied: list[int], raw: int) -> int:
    """Largest occupied norm <= raw (occupied is sorted, starts at 0)."""
    i = bisect_right(occupied, raw)
    return occupied[i - 1] if i else 0


def build_component_tree(
    group: GroupOracle,
    radii: list[int],
    horizon_factor: float = 3,
    step_cap: int | None = None,
    memory_cap: int = DEFAULT_MEMORY_CAP,
    window: FiniteWindow | None = None,
) -> ComponentTree:
    """Build the filtration tree over the given cut radii.

    The level at cut radius r covers norms r..horizon(r) (the cut handed
    to annulus_components is r-1; norms are integers), with horizon(r)
    the largest occupied norm at most min(ceil(r * horizon_factor),
    window radius). A ball that blows the memory cap is retried smaller;
    radii whose level no longer fits are dropped and the tree is marked
    truncated.
    """
    if not radii or any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise InvalidRadii(f"radii must be strictly increasing positive integers, got {radii}")
    if horizon_factor < 1:
        raise InvalidRadii("horizon_factor must be >= 1")
    truncated = False
    if window is None:
        want = math.ceil(radii[-1] * horizon_factor)
        while True:
            try:
                window = generate_window(group, want, memory_cap=memory_cap)
                break
            except BallTooLarge as err:
                reached = min(err.radius_reached, want - 1)
                if reached < math.ceil(radii[0] * horizon_factor):
                    raise
                want = reached
                truncated = True
    kept = [r for r in radii if r <= window.radius]
    dropped = [r for r in radii if r > window.radius]
    if dropped:
        truncated = True
    occupied = sorted(set(window.norms.values()))
    levels: list[TreeLevel] = []
    prev_index: dict | None = None
    for r in kept:
        horizon = _snap(occupied, min(math.ceil(r * horizon_factor), window.radius))
        if horizon < r:
            nodes: list[ComponentNode] = []
        else:
            nodes = annulus_components(window, r - 1, horizon, step_cap=step_cap)
        if prev_index is not None:
            linked = []
            for node in nodes:
                parents = sorted({prev_index[m] for m in node.members if m in prev_index})
                linked.append(
                    ComponentNode(
                        rep=node.rep,
                        members=node.members,
                        horizon_touching=node.horizon_touching,
                        parents=tuple(parents),
                    )
                )
            nodes = linked
        levels.append(TreeLevel(cut=r, horizon=horizon, nodes=tuple(nodes)))
        prev_index = {}
        for i, node in enumerate(nodes):
            for m in node.members:
                prev_index[m] = i
    return ComponentTree(
        group_name=group.name,
        radii=kept,
        horizon_factor=horizon_factor,
        step_cap=step_cap,
        levels=levels,
        window_radius=window.radius,
        truncated=truncated,
        dropped_radii=dropped,
    )


@dataclass(frozen=True)
class EndsVerdict:
    """Classification of the end count from a component tree.

    kind is "exactly", "growing" or "inconclusive"; count is set for
    "exactly". Verdicts are radius-bounded evidence relative to the
    tree's parameters, never proofs about the limit.
    """

    kind: str
    count: int | None
    stabilization_window: int
    counts: tuple[int, ...]

    def __str__(self) -> str:
        if self.kind == "exactly":
            return f"Exactly({self.count})"
        return self.kind.capitalize()

    def definitive(self) -> bool:
        return self.kind != "inconclusive"


def _persistent(levels: list[TreeLevel], tail: int) -> bool:
    """True when the horizon-touching branches over the last ``tail``
    levels form disjoint chains: each deeper horizon node has exactly one
    parent, that parent is horizon-touching, and the child-to-parent map
    is a bijection between consecutive horizon node sets."""
    for shallow, deep in zip(levels[-tail:], levels[-tail + 1 :]):
        shallow_touch = {i for i, n in enumerate(shallow.nodes) if n.horizon_touching}
        seen = set()
        for node in deep.nodes:
            if not node.horizon_touching:
                continue
            if len(node.parents) != 1:
                return False
            p = node.parents[0]
            if p not in shallow_touch or p in seen:
                return False
            seen.add(p)
        if seen != shallow_touch:
            return False
    return True


def classify_ends(tree: ComponentTree, window_w: int = 5) -> EndsVerdict:
    """Apply the stabilization rule to a component tree.

    Exactly(n) needs the horizon-touching count to equal n over the last
    window_w levels with every branch persisting; Growing needs the last
    count to beat the first with no decrease across the tail. Anything
    else is Inconclusive.
    """
    if window_w < 2:
        raise PreconditionViolated("window_w must be >= 2")
    if len(tree.levels) < window_w:
        raise PreconditionViolated(
            f"tree has {len(tree.levels)} levels, need at least window_w = {window_w}"
        )
    counts = tree.counts()
    stab = 1
    while stab < len(counts) and counts[-stab - 1] == counts[-1]:
        stab += 1
    tail = counts[-window_w:]
    if all(c == tail[0] for c in tail) and _persistent(tree.levels, window_w):
        return EndsVerdict("exactly", tail[0], stab, tuple(counts))
    if counts[-1] > counts[0] and all(a <= b for a, b in zip(tail, tail[1:])):
        return EndsVerdict("growing", None, stab, tuple(counts))
    return EndsVerdict("inconclusive", None, stab, tuple(counts))


def geodesic_coarse_check(window: FiniteWindow, k_radius: int, m: int) -> bool:
    """Check that every metric m-ball far from the k_radius-ball stays
    inside one adjacency component of the ball's complement.

    On unit-weight Cayley windows this always holds (short hops cannot
    jump between complement components); a window whose graph is coarser
    than its metric can fail it.
    """
    if m < 1 or k_radius < 0 or k_radius + m > window.radius:
        raise InvalidRadii(f"need m >= 1 and k_radius + m <= {window.radius}")
    norms = window.norms
    group = window.group
    complement = [k for k in window.elements if norms[k] > k_radius]
    parent = {k: k for k in complement}
    gens = [g for g, _ in window.adjacency_generators()]
    for x in complement:
        for g in gens:
            y = group.canonical(group.multiply(x, g))
            if norms.get(y, -1) > k_radius:
                rx, ry = _find(parent, x), _find(parent, y)
                if rx != ry:
                    parent[ry] = rx
    for x in complement:
        if norms[x] <= k_radius + m:
            continue
        roots = set()
        for y in window.ball_keys(x, m):
            if norms[y] > k_radius:
                roots.add(_find(parent, y))
                if len(roots) > 1:
                    return False
    return True
