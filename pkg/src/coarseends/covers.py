"""Cover scales on finite point sets: stars, star composition,
cover-relative boundedness, and end approximation via the atoms of the
Boolean algebra generated by candidate sets.

On a finite point set nothing is unbounded outright, so "bounded" is
always relative to a cover: contained in a single member. Every verdict
names the cover index it was computed at.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyAlgebra, InvalidRadii, PreconditionViolated
from .windows import FiniteWindow

FINITE_CAVEAT = (
    "bounded here means contained in one member of the cover composed "
    "with itself; on a finite point set this under-approximates "
    "large-scale boundedness"
)


def _as_cover(cover):
    return tuple(frozenset(m) for m in cover)


@dataclass(frozen=True)
class CoverScale:
    """An ordered family of covers of one point set, coarser as the index
    grows: every member of a cover is contained in some member of the
    next one."""

    points: frozenset
    covers: tuple[tuple[frozenset, ...], ...]

    def __post_init__(self):
        if not self.covers:
            raise PreconditionViolated("need at least one cover")
        for i, cover in enumerate(self.covers):
            union = set()
            for m in cover:
                if not m <= self.points:
                    raise PreconditionViolated(f"cover {i} has a member outside the points")
                union |= m
            if union != self.points:
                raise PreconditionViolated(f"cover {i} does not cover the points")
        for i, (fine, coarse) in enumerate(zip(self.covers, self.covers[1:])):
            # a containing member must contain any one point of m, so only
            # the members through that point need checking
            through: dict = {}
            for big in coarse:
                for p in big:
                    through.setdefault(p, []).append(big)
            for m in fine:
                witness = next(iter(m), None)
                if witness is None:
                    continue
                if not any(m <= big for big in through.get(witness, ())):
                    raise PreconditionViolated(
                        f"cover {i} member not contained in any cover {i + 1} member"
                    )

    @property
    def depth(self) -> int:
        return len(self.covers)

    def deepest(self) -> tuple[frozenset, ...]:
        return self.covers[-1]


def star(a_set, cover) -> set:
    """Union of the cover members meeting the set, together with the set."""
    a_set = set(a_set)
    out = set(a_set)
    for m in cover:
        if not a_set.isdisjoint(m):
            out |= m
    return out


def star_composition(u, v) -> tuple[frozenset, ...]:
    """The cover whose members are the v-stars of the u-members."""
    out = []
    seen = set()
    for m in u:
        s = frozenset(star(m, v))
        if s not in seen:
            seen.add(s)
            out.append(s)
    return tuple(out)


def bounded_in(a_set, cover) -> bool:
    """Contained in a single cover member (the empty set trivially is)."""
    a_set = set(a_set)
    return not a_set or any(a_set <= m for m in cover)


@dataclass(frozen=True)
class CoverVerdict:
    index: int
    overlap_size: int
    bounded: bool


@dataclass(frozen=True)
class ClopenByCovers:
    """Per-index boundedness verdicts for one set, with the standing
    caveat about what bounded can mean on a finite point set."""

    verdicts: tuple[CoverVerdict, ...]
    caveat: str = FINITE_CAVEAT

    def bounded_at(self, index: int) -> bool:
        return self.verdicts[index].bounded

    def all_bounded(self) -> bool:
        return all(v.bounded for v in self.verdicts)


def _clopen_overlap_bounded(a_set, cover, points) -> tuple[set, bool]:
    overlap = star(a_set, cover) & star(set(points) - set(a_set), cover)
    # A set's boundary overlap is wider than a single member even for a
    # clean ray boundary (it collects members from both sides), so it is
    # measured against the cover composed with itself: the smallest
    # coarsening the large-scale structure is guaranteed to contain.
    return overlap, bounded_in(overlap, star_composition(cover, cover))


def cover_coarsely_clopen(a_set, scale: CoverScale) -> ClopenByCovers:
    """Per cover: is the overlap of the star of the set and the star of
    its complement bounded?"""
    a_set = set(a_set)
    if not a_set <= scale.points:
        raise PreconditionViolated("set must lie inside the points")
    out = []
    for i, cover in enumerate(scale.covers):
        overlap, bounded = _clopen_overlap_bounded(a_set, cover, scale.points)
        out.append(CoverVerdict(i, len(overlap), bounded))
    return ClopenByCovers(tuple(out))


def boundary_overlap(a_set, cover, points) -> set:
    """The star of the set intersected with the star of its complement."""
    a_set = set(a_set)
    return star(a_set, cover) & star(set(points) - a_set, cover)


def intersection_boundary_check(a1, a2, cover, points) -> bool:
    """Exact inclusion: the boundary overlap of an intersection sits
    inside the union of the two boundary overlaps. A falsification is a
    bug, not data; this is a self-test."""
    a1, a2 = set(a1), set(a2)
    left = boundary_overlap(a1 & a2, cover, points)
    right = boundary_overlap(a1, cover, points) | boundary_overlap(a2, cover, points)
    return left <= right


def star_preserves_clopen_check(a_set, u, v, points) -> bool:
    """Two exact inclusions behind star-stability of coarse clopenness:
    the double star lands in the star at the composed cover, and the
    starred set's boundary overlap at v lands in the original set's
    boundary overlap at the composed cover."""
    a_set = set(a_set)
    composed = star_composition(u, v)
    double = star(star(a_set, u), v)
    if not double <= star(a_set, composed):
        return False
    starred = star(a_set, u)
    return boundary_overlap(starred, v, points) <= boundary_overlap(a_set, composed, points)


@dataclass(frozen=True)
class CoarseEndApprox:
    """Unbounded atoms of the algebra generated by the candidates at the
    deepest cover; each atom is one end candidate."""

    atoms: tuple[frozenset, ...]
    bounded_atoms: tuple[frozenset, ...]
    cover_index: int

    @property
    def count(self) -> int:
        return len(self.atoms)


def approximate_ends(scale: CoverScale, candidates) -> CoarseEndApprox:
    """Split the points by their membership signature across the
    candidates (the atoms of the generated Boolean algebra), discard the
    atoms bounded relative to the deepest cover, and return the rest.

    Candidates must each have a bounded boundary overlap at the deepest
    cover; the 1-based index of an offender rides the error.
    """
    candidates = [frozenset(c) for c in candidates]
    if not candidates:
        raise EmptyAlgebra("no candidate sets to generate the algebra")
    deep = scale.deepest()
    for i, cand in enumerate(candidates, start=1):
        _, bounded = _clopen_overlap_bounded(cand, deep, scale.points)
        if not bounded:
            err = PreconditionViolated(
                f"candidate {i} is not coarsely clopen at the deepest cover"
            )
            err.index = i
            raise err
    by_signature: dict = {}
    for p in sorted(scale.points, key=str):
        sig = tuple(p in c for c in candidates)
        by_signature.setdefault(sig, set()).add(p)
    unbounded, bounded = [], []
    for sig in sorted(by_signature, reverse=True):
        atom = frozenset(by_signature[sig])
        if bounded_in(atom, deep):
            bounded.append(atom)
        else:
            unbounded.append(atom)
    return CoarseEndApprox(tuple(unbounded), tuple(bounded), scale.depth - 1)


def ball_cover_scale(points, dist, radii) -> CoverScale:
    """Covers by metric balls at each of the given radii."""
    radii = list(radii)
    if not radii or any(r < 0 for r in radii) or any(
        b <= a for a, b in zip(radii, radii[1:])
    ):
        raise InvalidRadii("radii must be non-negative and strictly increasing")
    points = list(points)
    covers = []
    for r in radii:
        members = []
        seen = set()
        for x in points:
            ball = frozenset(y for y in points if dist(x, y) <= r)
            if ball not in seen:
                seen.add(ball)
                members.append(ball)
        covers.append(tuple(members))
    return CoverScale(frozenset(points), tuple(covers))


def window_to_cover_scale(window: FiniteWindow, radii=(1, 2, 4, 8)) -> CoverScale:
    """Ball covers of a Cayley window at the given radii."""
    radii = list(radii)
    if not radii or any(r < 1 for r in radii) or any(
        b <= a for a, b in zip(radii, radii[1:])
    ):
        raise InvalidRadii("radii must be positive and strictly increasing")
    covers = []
    for r in radii:
        members = []
        seen = set()
        for x in window.elements:
            ball = frozenset(window.ball_keys(x, r))
            if ball not in seen:
                seen.add(ball)
                members.append(ball)
        covers.append(tuple(members))
    return CoverScale(frozenset(window.elements), tuple(covers))


def deep_component_candidates(window: FiniteWindow, cut: int) -> list[frozenset]:
    """Adjacency components of the window beyond the cut radius, as
    candidate unbounded coarsely clopen sets."""
    from .ends_tree import annulus_components

    return [
        frozenset(node.members)
        for node in annulus_components(window, cut, window.radius)
    ]
