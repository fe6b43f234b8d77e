"""Tests for cover scales, stars, cover-relative clopen detection, the
exact star-calculus inclusions, and end approximation by atoms."""

import random

import pytest

from coarseends.covers import (
    CoverScale,
    approximate_ends,
    ball_cover_scale,
    bounded_in,
    boundary_overlap,
    cover_coarsely_clopen,
    deep_component_candidates,
    intersection_boundary_check,
    star,
    star_composition,
    star_preserves_clopen_check,
    window_to_cover_scale,
)
from coarseends.errors import EmptyAlgebra, InvalidRadii, PreconditionViolated
from coarseends.fixtures import cross_space
from coarseends.windows import generate_window


def segment(lo, hi):
    return list(range(lo, hi + 1))


def interval_cover(points, radius):
    """Balls of the given radius around every point, deduplicated."""
    cover = []
    seen = set()
    for n in points:
        member = frozenset(x for x in points if abs(x - n) <= radius)
        if member not in seen:
            seen.add(member)
            cover.append(member)
    return tuple(cover)


def segment_scale(lo, hi, radii=(1, 2, 4, 8)):
    points = segment(lo, hi)
    return CoverScale(
        frozenset(points), tuple(interval_cover(points, r) for r in radii)
    )


# ---------------------------------------------------------------- covers


def test_cover_must_cover_the_points():
    points = frozenset(range(5))
    with pytest.raises(PreconditionViolated):
        CoverScale(points, ((frozenset({0, 1}), frozenset({2, 3})),))


def test_cover_member_must_stay_inside_points():
    points = frozenset(range(5))
    with pytest.raises(PreconditionViolated):
        CoverScale(points, ((frozenset(range(6)),),))


def test_refinement_must_be_monotone():
    points = frozenset(range(6))
    fine = (frozenset({0, 1, 2, 3}), frozenset({3, 4, 5}))
    coarse = (frozenset({0, 1, 2}), frozenset({2, 3, 4, 5}))
    with pytest.raises(PreconditionViolated):
        CoverScale(points, (fine, coarse))


def test_scale_needs_a_cover():
    with pytest.raises(PreconditionViolated):
        CoverScale(frozenset({1}), ())


# ----------------------------------------------------------------- stars


def test_star_with_singleton_cover_is_identity():
    points = segment(-5, 5)
    singletons = tuple(frozenset({p}) for p in points)
    assert star({0, 2}, singletons) == {0, 2}


def test_star_of_origin_under_interval_cover():
    points = segment(-10, 10)
    cover = interval_cover(points, 1)
    assert star({0}, cover) == set(range(-2, 3))


def test_star_of_everything_is_everything():
    points = segment(-10, 10)
    cover = interval_cover(points, 3)
    assert star(set(points), cover) == set(points)


def test_star_composition_with_singletons():
    points = segment(-6, 6)
    cover = interval_cover(points, 2)
    singletons = tuple(frozenset({p}) for p in points)
    assert set(star_composition(cover, singletons)) == set(cover)


def test_star_composition_of_interval_covers():
    points = segment(-10, 10)
    cover = interval_cover(points, 1)
    composed = star_composition(cover, cover)
    expected = set(interval_cover(points, 3))
    assert set(composed) == expected


def test_star_composition_still_covers():
    points = segment(-10, 10)
    u = interval_cover(points, 1)
    v = interval_cover(points, 2)
    union = set()
    for member in star_composition(u, v):
        union |= member
    assert union == set(points)


# ------------------------------------------------- clopen verdicts


def test_empty_set_is_bounded_at_every_scale():
    scale = segment_scale(-30, 30)
    report = cover_coarsely_clopen(set(), scale)
    assert report.all_bounded()
    assert all(v.overlap_size == 0 for v in report.verdicts)
    assert "finite" in report.caveat


def test_positive_ray_is_cover_clopen():
    scale = segment_scale(-30, 30)
    positives = {x for x in segment(-30, 30) if x > 0}
    report = cover_coarsely_clopen(positives, scale)
    assert report.all_bounded()
    # at the radius-1 cover the overlap is the four points nearest 0
    assert report.verdicts[0].overlap_size == 4
    assert boundary_overlap(positives, scale.covers[0], scale.points) == {-1, 0, 1, 2}


def test_even_set_is_cover_unbounded():
    scale = segment_scale(-30, 30)
    evens = {x for x in segment(-30, 30) if x % 2 == 0}
    report = cover_coarsely_clopen(evens, scale)
    assert not any(v.bounded for v in report.verdicts)
    # the overlap really is the whole segment
    assert report.verdicts[0].overlap_size == 61


def test_unbounded_at_coarse_means_unbounded_at_fine():
    scale = segment_scale(-30, 30)
    sets = [
        {x for x in segment(-30, 30) if x > 0},
        {x for x in segment(-30, 30) if x % 2 == 0},
        {0, 10},
        {x for x in segment(-30, 30) if -3 <= x <= 7},
        set(segment(-30, 30)),
    ]
    for a_set in sets:
        verdicts = cover_coarsely_clopen(a_set, scale).verdicts
        for coarse in range(len(verdicts)):
            if not verdicts[coarse].bounded:
                for fine in range(coarse):
                    assert not verdicts[fine].bounded


def test_set_must_lie_inside_points():
    scale = segment_scale(0, 10)
    with pytest.raises(PreconditionViolated):
        cover_coarsely_clopen({11}, scale)


def test_bounded_in_basics():
    cover = interval_cover(segment(0, 20), 2)
    assert bounded_in(set(), cover)
    assert bounded_in({3, 4}, cover)
    assert not bounded_in({0, 20}, cover)


# ------------------------------------- exact inclusion self-tests


def test_intersection_boundary_inclusion_on_random_trials():
    points = segment(0, 199)
    rng = random.Random(641)
    for trial in range(300):
        radius = rng.randint(1, 6)
        cover = interval_cover(points, radius)
        a1 = {x for x in points if rng.random() < 0.5}
        a2 = {x for x in points if rng.random() < 0.5}
        assert intersection_boundary_check(a1, a2, cover, points), trial


def test_intersection_boundary_equal_sets():
    points = segment(0, 50)
    cover = interval_cover(points, 2)
    ray = {x for x in points if x >= 30}
    assert intersection_boundary_check(ray, ray, cover, points)
    assert intersection_boundary_check(set(), ray, cover, points)


def test_intersection_of_clopen_sets_stays_clopen():
    scale = segment_scale(-30, 30)
    a = {x for x in segment(-30, 30) if x >= 0}
    c = {x for x in segment(-30, 30) if x >= 2}
    for cover in scale.covers:
        overlap_both = boundary_overlap(a & c, cover, scale.points)
        union = boundary_overlap(a, cover, scale.points) | boundary_overlap(
            c, cover, scale.points
        )
        assert overlap_both <= union
    assert cover_coarsely_clopen(a & c, scale).all_bounded()


def test_star_preservation_with_singleton_second_cover():
    points = segment(-10, 10)
    u = interval_cover(points, 2)
    singletons = tuple(frozenset({p}) for p in points)
    ray = {x for x in points if x > 0}
    assert star_preserves_clopen_check(ray, u, singletons, points)


def test_star_preservation_on_ray_and_full_set():
    points = segment(-30, 30)
    u = interval_cover(points, 2)
    v = interval_cover(points, 3)
    ray = {x for x in points if x > 0}
    assert star_preserves_clopen_check(ray, u, v, points)
    assert star_preserves_clopen_check(set(points), u, v, points)


def test_star_preservation_on_random_trials():
    points = segment(0, 99)
    rng = random.Random(643)
    for trial in range(200):
        u = interval_cover(points, rng.randint(1, 5))
        v = interval_cover(points, rng.randint(1, 5))
        a = {x for x in points if rng.random() < 0.4}
        assert star_preserves_clopen_check(a, u, v, points), trial


# -------------------------------------------------- end approximation


def test_ray_candidate_yields_two_atoms():
    scale = segment_scale(-30, 30)
    positives = frozenset(x for x in segment(-30, 30) if x > 0)
    approx = approximate_ends(scale, [positives])
    assert approx.count == 2
    assert set(approx.atoms) == {
        positives,
        frozenset(x for x in segment(-30, 30) if x <= 0),
    }
    assert approx.cover_index == scale.depth - 1


def test_no_candidates_raises_empty_algebra():
    scale = segment_scale(-10, 10)
    with pytest.raises(EmptyAlgebra):
        approximate_ends(scale, [])


def test_non_clopen_candidate_is_rejected_with_index():
    scale = segment_scale(-30, 30)
    evens = frozenset(x for x in segment(-30, 30) if x % 2 == 0)
    ray = frozenset(x for x in segment(-30, 30) if x > 0)
    with pytest.raises(PreconditionViolated) as info:
        approximate_ends(scale, [ray, evens])
    assert info.value.index == 2


def test_two_rays_give_disjoint_atoms_plus_bounded_core():
    scale = segment_scale(-30, 30)
    right = frozenset(x for x in segment(-30, 30) if x >= 6)
    left = frozenset(x for x in segment(-30, 30) if x <= -6)
    approx = approximate_ends(scale, [right, left])
    assert approx.count == 2
    assert set(approx.atoms) == {right, left}
    assert approx.bounded_atoms == (frozenset(range(-5, 6)),)
    for a in approx.atoms:
        for b in approx.atoms:
            assert a is b or a.isdisjoint(b)


def test_cross_space_has_four_atoms():
    points, dist = cross_space(arm=25)
    scale = ball_cover_scale(points, dist, (1, 2, 4, 8))
    rays = [
        frozenset(p for p in points if p[0] == a and p[1] >= 6)
        for a in ("n", "e", "s", "w")
    ]
    approx = approximate_ends(scale, rays)
    assert approx.count == 4
    assert set(approx.atoms) == set(rays)
    assert len(approx.bounded_atoms) == 1


def test_window_scale_atoms_on_the_line(catalog):
    window = generate_window(catalog["Z"], 30)
    scale = window_to_cover_scale(window)
    candidates = deep_component_candidates(window, 5)
    assert len(candidates) == 2
    approx = approximate_ends(scale, candidates)
    assert approx.count == 2


def test_window_scale_atoms_on_the_plane(z2_window_12):
    scale = window_to_cover_scale(z2_window_12)
    candidates = deep_component_candidates(z2_window_12, 5)
    assert len(candidates) == 1
    approx = approximate_ends(scale, candidates)
    assert approx.count == 1


def test_window_scale_atoms_infinite_dihedral(catalog):
    window = generate_window(catalog["Dinf"], 30)
    scale = window_to_cover_scale(window)
    candidates = deep_component_candidates(window, 5)
    approx = approximate_ends(scale, candidates)
    assert approx.count == 2


def test_ball_scale_radii_validation():
    points, dist = cross_space(arm=5)
    with pytest.raises(InvalidRadii):
        ball_cover_scale(points, dist, (2, 2, 4))
    with pytest.raises(InvalidRadii):
        ball_cover_scale(points, dist, ())


def test_window_scale_radii_validation(catalog):
    window = generate_window(catalog["Z"], 10)
    with pytest.raises(InvalidRadii):
        window_to_cover_scale(window, (0, 1, 2))
    with pytest.raises(InvalidRadii):
        window_to_cover_scale(window, (4, 2))
