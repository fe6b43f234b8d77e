"""Finite metric windows of Cayley graphs.

A window is the ball of a chosen radius around the identity, with exact
weighted word norms. Window generation only consults generators of weight
up to the radius: any factorization with total weight <= R can only use
such generators, so the window is a true norm ball and is norm-saturated.
"""

from __future__ import annotations

import heapq
from typing import Callable, Iterable

from .errors import BallTooLarge, Exceeds, PointOutsideWindow
from .groups import Element, GroupOracle

DEFAULT_MEMORY_CAP = 5_000_000


def _dijkstra_ball(
    group: GroupOracle,
    radius: int,
    gens: list[tuple[Element, int]],
    memory_cap: int,
    target: Element | None = None,
) -> dict[Element, int] | int:
    """Uniform-cost search from the identity out to ``radius``.

    Returns the dict of norms, or the norm of ``target`` if one is given
    and reached (Exceeds is signalled by the caller when it is not).
    Raises BallTooLarge with the last fully completed norm level when the
    element count passes ``memory_cap``.
    """
    start = group.canonical(group.identity)
    dist: dict[Element, int] = {start: 0}
    heap: list[tuple[int, Element]] = [(0, start)]
    completed = 0
    while heap:
        n, x = heapq.heappop(heap)
        if n > dist.get(x, n):
            continue
        completed = max(completed, n)
        if target is not None and x == target:
            return n
        for g, w in gens:
            m = n + w
            if m > radius:
                continue
            y = group.canonical(group.multiply(x, g))
            if m < dist.get(y, m + 1):
                dist[y] = m
                if len(dist) > memory_cap:
                    # the ball of radius completed-1 is a strict subset of
                    # what has been enumerated, so it fits under the cap
                    raise BallTooLarge(radius_reached=max(completed - 1, 0), cap=memory_cap)
                heapq.heappush(heap, (m, y))
    if target is not None:
        return -1
    return dist


def _bfs_ball(
    group: GroupOracle,
    radius: int,
    gens: list[tuple[Element, int]],
    weight: int,
    memory_cap: int,
) -> dict[Element, int]:
    """Layered search for the common case of a single generator weight."""
    start = group.canonical(group.identity)
    dist: dict[Element, int] = {start: 0}
    frontier = [start]
    norm = 0
    bare = [g for g, _ in gens]
    while frontier and norm + weight <= radius:
        norm += weight
        nxt = []
        for x in frontier:
            for g in bare:
                y = group.canonical(group.multiply(x, g))
                if y not in dist:
                    dist[y] = norm
                    nxt.append(y)
        if len(dist) > memory_cap:
            raise BallTooLarge(radius_reached=norm - weight, cap=memory_cap)
        frontier = nxt
    return dist


def word_norm(g: Element, group: GroupOracle, cap: int, memory_cap: int = DEFAULT_MEMORY_CAP) -> int | Exceeds:
    """Minimal total generator weight over factorizations of ``g``.

    Searches the implicit weighted Cayley graph out to total weight
    ``cap``; if ``g`` is not reached, every factorization costs more and
    Exceeds(cap) is returned as a normal verdict.
    """
    target = group.canonical(g)
    gens = group.generators_within(cap)
    got = _dijkstra_ball(group, cap, gens, memory_cap, target=target)
    if got == -1:
        return Exceeds(cap)
    return got


class FiniteWindow:
    """A finite norm ball with its induced metric.

    ``norms`` maps canonical keys to exact weighted word norms. Adjacency
    is implicit through generator multiplication; ``adjacency_indices``
    optionally restricts which consulted generators define adjacency
    (used by the deliberately non-geodesic test fixture, where the metric
    keeps all generators but the graph drops some).
    """

    def __init__(
        self,
        group: GroupOracle,
        radius: int,
        norms: dict[Element, int],
        consulted: list[tuple[Element, int]],
        adjacency_indices: list[int] | None = None,
        metric_override: Callable[[Element, Element], int] | None = None,
    ):
        self.group = group
        self.radius = radius
        self.norms = norms
        self.consulted = consulted
        self.adjacency_indices = adjacency_indices
        self.metric_override = metric_override
        if metric_override is not None:
            e = group.canonical(group.identity)
            self.norms = {k: (0 if k == e else metric_override(e, k)) for k in norms}
        self.elements = sorted(self.norms, key=self.sort_key)
        self._ball_cache: dict[int, list[Element]] = {}
        self.stream_unexhausted = group.has_generators_beyond(radius)

    def sort_key(self, k: Element) -> tuple[int, str]:
        return (self.norms[k], self.group.serialize(k))

    def __len__(self) -> int:
        return len(self.norms)

    def __contains__(self, k: Element) -> bool:
        return k in self.norms

    def norm(self, k: Element) -> int:
        try:
            return self.norms[k]
        except KeyError:
            raise PointOutsideWindow(f"{self.group.serialize(k)} has norm > {self.radius}") from None

    def distance(self, a: Element, b: Element) -> int | Exceeds:
        """Left-invariant distance: the norm of inverse(a) * b.

        The window is a true norm ball, so the product lies in it exactly
        when the distance is at most the radius; otherwise Exceeds.
        """
        if self.metric_override is not None:
            if a not in self.norms or b not in self.norms:
                raise PointOutsideWindow("both points must lie in the window")
            return self.metric_override(a, b) if a != b else 0
        if a not in self.norms or b not in self.norms:
            raise PointOutsideWindow("both points must lie in the window")
        g = self.group
        k = g.canonical(g.multiply(g.inverse(a), b))
        got = self.norms.get(k)
        return got if got is not None else Exceeds(self.radius)

    def adjacency_generators(self, step_cap: int | None = None) -> list[tuple[Element, int]]:
        gens = self.consulted
        if self.adjacency_indices is not None:
            gens = [gens[i] for i in self.adjacency_indices]
        if step_cap is not None:
            gens = [(g, w) for g, w in gens if w <= step_cap]
        return gens

    def neighbors(self, x: Element, step_cap: int | None = None) -> list[Element]:
        """Products x*g over the adjacency generators (not filtered to the
        window; callers decide how to treat products that fall outside)."""
        g = self.group
        return [g.canonical(g.multiply(x, h)) for h, _ in self.adjacency_generators(step_cap)]

    def _ball_elements(self, m: int) -> list[Element]:
        got = self._ball_cache.get(m)
        if got is None:
            got = [k for k, n in self.norms.items() if n <= m]
            self._ball_cache[m] = got
        return got

    def ball_keys(self, x: Element, m: int) -> set[Element]:
        """All window elements within distance m of x."""
        if self.metric_override is not None:
            return {y for y in self.norms if y == x or self.metric_override(x, y) <= m}
        g = self.group
        out = set()
        for z in self._ball_elements(m):
            y = g.canonical(g.multiply(x, z))
            if y in self.norms:
                out.add(y)
        return out

    def sorted_keys(self, keys: Iterable[Element]) -> list[Element]:
        return sorted(keys, key=self.sort_key)

    def with_metric(self, dist: Callable[[Element, Element], int]) -> "FiniteWindow":
        """Copy of this window carrying an overriding metric.

        Norms are recomputed as distances to the identity so the two stay
        consistent; balls fall back to full scans.
        """
        return FiniteWindow(
            self.group,
            self.radius,
            dict(self.norms),
            self.consulted,
            adjacency_indices=self.adjacency_indices,
            metric_override=dist,
        )

    def with_adjacency(self, indices: list[int]) -> "FiniteWindow":
        """Copy of this window whose graph uses only the given generators
        (by index into ``consulted``); the metric is unchanged."""
        return FiniteWindow(
            self.group,
            self.radius,
            dict(self.norms),
            self.consulted,
            adjacency_indices=indices,
            metric_override=self.metric_override,
        )


def generate_window(
    group: GroupOracle,
    radius: int,
    memory_cap: int = DEFAULT_MEMORY_CAP,
) -> FiniteWindow:
    """Materialize the ball of the given radius around the identity.

    Only generators of weight <= radius are consulted; heavier ones
    cannot appear in any factorization of total weight <= radius.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    gens = group.generators_within(radius)
    fast = getattr(group, "enumerate_ball", None)
    if fast is not None:
        norms = fast(radius, memory_cap)
    else:
        weights = {w for _, w in gens}
        if len(weights) == 1:
            norms = _bfs_ball(group, radius, gens, weights.pop(), memory_cap)
        else:
            norms = _dijkstra_ball(group, radius, gens, memory_cap)
    return FiniteWindow(group, radius, norms, gens)
