"""Geometry tests.

The analytic projection is only trusted against brute_force_nearest, a
dense-sampling oracle that walks every segment in 10 micrometre steps.
The oracle deliberately shares no code with cutcoach.geometry.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutcoach.geometry import (
    MIN_INK_WIDTH_MM,
    DeviationMeasure,
    LinePath,
    PathError,
    ScissorsPose,
    circle_path,
    is_complete,
    l_shaped_path,
    load_path,
    nearest_point,
    progress,
    save_path,
    star_path,
    straight_line_path,
    wrap_degrees,
)


def brute_force_nearest(point, vertices, step=0.01):
    """Dense-sampling nearest-point search: the independent oracle.

    Samples every segment at <= `step` mm spacing and returns
    (distance, arc_position, point) of the closest sample.
    """
    px, py = point
    best_d = math.inf
    best_arc = 0.0
    best_pt = None
    arc0 = 0.0
    for (x0, y0), (x1, y1) in zip(vertices[:-1], vertices[1:]):
        seg_len = math.hypot(x1 - x0, y1 - y0)
        n = max(2, int(math.ceil(seg_len / step)) + 1)
        ts = np.linspace(0.0, 1.0, n)
        xs = x0 + ts * (x1 - x0)
        ys = y0 + ts * (y1 - y0)
        d = np.hypot(xs - px, ys - py)
        j = int(np.argmin(d))
        if d[j] < best_d:
            best_d = float(d[j])
            best_arc = arc0 + float(ts[j]) * seg_len
            best_pt = (float(xs[j]), float(ys[j]))
        arc0 += seg_len
    return best_d, best_arc, best_pt


def random_path_and_pose(rng):
    """One random (path, pose) pair with the pose near the path."""
    n = rng.integers(2, 7)
    while True:
        verts = rng.uniform(0.0, 100.0, size=(n, 2))
        if np.all(np.hypot(*np.diff(verts, axis=0).T) > 1.0):
            break
    path = LinePath(vertices=verts, ink_width=8.0)
    anchor = verts[rng.integers(0, n)]
    pos = anchor + rng.uniform(-30.0, 30.0, size=2)
    pose = ScissorsPose(
        position=(pos[0], pos[1]), heading=rng.uniform(0, 360), timestamp=0
    )
    return path, pose


# ---------------------------------------------------------------------------
# Construction invariants
# ---------------------------------------------------------------------------

class TestLinePathInvariants:
    def test_rejects_ink_width_below_floor(self):
        with pytest.raises(PathError):
            LinePath(vertices=[[0, 0], [100, 0]], ink_width=5.0)
        with pytest.raises(PathError):
            LinePath(vertices=[[0, 0], [100, 0]], ink_width=6.999999)

    def test_accepts_ink_width_at_floor(self):
        path = LinePath(vertices=[[0, 0], [100, 0]], ink_width=MIN_INK_WIDTH_MM)
        assert path.ink_width == 7.0

    def test_rejects_single_vertex(self):
        with pytest.raises(PathError):
            LinePath(vertices=[[0, 0]], ink_width=8.0)

    def test_rejects_duplicate_consecutive_vertices(self):
        with pytest.raises(PathError):
            LinePath(vertices=[[0, 0], [0, 0], [10, 0]], ink_width=8.0)

    def test_rejects_nonpositive_capture_radius(self):
        with pytest.raises(PathError):
            LinePath(vertices=[[0, 0], [10, 0]], ink_width=8.0, capture_radius=0.0)

    def test_vertices_are_immutable(self):
        path = straight_line_path()
        with pytest.raises(ValueError):
            path.vertices[0, 0] = 5.0

    def test_total_length(self):
        path = l_shaped_path(leg=50.0)
        assert path.total_length == pytest.approx(100.0)


class TestScissorsPose:
    def test_heading_normalized(self):
        assert ScissorsPose((0, 0), 370.0, 0).heading == pytest.approx(10.0)
        assert ScissorsPose((0, 0), -90.0, 0).heading == pytest.approx(270.0)

    def test_negative_timestamp_rejected(self):
        with pytest.raises(ValueError):
            ScissorsPose((0, 0), 0.0, -1)


# ---------------------------------------------------------------------------
# nearest_point
# ---------------------------------------------------------------------------

class TestNearestPoint:
    def test_on_line_aligned(self):
        path = LinePath(vertices=[[0, 0], [100, 0]], ink_width=8.0)
        m = nearest_point(ScissorsPose((50, 0), 0.0, 0), path)
        assert m.lateral_offset == pytest.approx(0.0)
        assert m.heading_deviation == pytest.approx(0.0)
        assert m.arc_position == pytest.approx(50.0)
        assert m.nearest_segment == 0

    def test_left_offset_positive(self):
        path = LinePath(vertices=[[0, 0], [100, 0]], ink_width=8.0)
        m = nearest_point(ScissorsPose((50, 3), 15.0, 0), path)
        assert m.lateral_offset == pytest.approx(3.0)
        assert m.heading_deviation == pytest.approx(15.0)

    def test_l_shape_against_brute_force(self):
        # Frozen from the 10 um dense-sampling oracle: pose (53, 3) projects
        # onto the vertical leg at (50, 3); travel there is +y, so +x is the
        # right-hand side and the offset is -3.
        verts = np.array([[0.0, 0.0], [50.0, 0.0], [50.0, 50.0]])
        path = LinePath(vertices=verts, ink_width=8.0)
        pose = ScissorsPose((53, 3), 90.0, 0)
        m = nearest_point(pose, path)

        d, arc, pt = brute_force_nearest((53, 3), verts)
        assert abs(m.lateral_offset) == pytest.approx(d, abs=0.01)
        assert m.arc_position == pytest.approx(arc, abs=0.01)
        assert m.lateral_offset == pytest.approx(-3.0)
        assert m.arc_position == pytest.approx(53.0)
        assert m.nearest_segment == 1

    def test_tie_breaks_to_lowest_segment(self):
        # Pose on the corner bisector of an L: both segments are equally
        # near; the first must win.
        path = LinePath(vertices=[[0, 0], [50, 0], [50, 50]], ink_width=8.0)
        m = nearest_point(ScissorsPose((50.0, 0.0), 0.0, 0), path)
        assert m.nearest_segment == 0
        assert m.arc_position == pytest.approx(50.0)

    def test_matches_brute_force_on_random_cases(self):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            path, pose = random_path_and_pose(rng)
            m = nearest_point(pose, path)
            d, _, _ = brute_force_nearest(pose.position, np.asarray(path.vertices))
            assert abs(m.lateral_offset) <= d + 1e-9
            assert d - abs(m.lateral_offset) <= 0.01


# ---------------------------------------------------------------------------
# progress / completion
# ---------------------------------------------------------------------------

class TestProgress:
    def test_start_is_zero(self):
        path = straight_line_path(length=100.0)
        m = nearest_point(ScissorsPose((0, 0), 0.0, 0), path)
        assert progress(m, path) == pytest.approx(0.0)

    def test_end_is_one_and_complete(self):
        path = straight_line_path(length=100.0)
        m = nearest_point(ScissorsPose((100, 0), 0.0, 0), path)
        assert progress(m, path) == pytest.approx(1.0)
        assert is_complete(m, path)

    def test_near_end_within_capture_radius(self):
        # 100 mm path, capture 5 mm: eps = 0.05, so 0.97 completes while
        # the lateral offset of 2 mm stays inside the capture radius.
        path = LinePath(vertices=[[0, 0], [100, 0]], ink_width=8.0, capture_radius=5.0)
        m = nearest_point(ScissorsPose((97, 2), 0.0, 0), path)
        assert progress(m, path) == pytest.approx(0.97)
        assert is_complete(m, path)

    def test_near_end_but_off_line_not_complete(self):
        path = LinePath(vertices=[[0, 0], [100, 0]], ink_width=8.0, capture_radius=5.0)
        m = nearest_point(ScissorsPose((97, 9), 0.0, 0), path)
        assert not is_complete(m, path)

    def test_progress_non_decreasing_on_advancing_trace(self):
        path = straight_line_path(length=200.0)
        rng = np.random.default_rng(7)
        fractions = []
        for i, x in enumerate(np.linspace(0.0, 200.0, 101)):
            pose = ScissorsPose((x, rng.uniform(-4, 4)), 0.0, i)
            fractions.append(progress(nearest_point(pose, path), path))
        assert all(b >= a for a, b in zip(fractions, fractions[1:]))


# ---------------------------------------------------------------------------
# Symmetry / equivariance properties
# ---------------------------------------------------------------------------

coord_st = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)
verts_st = st.lists(st.tuples(coord_st, coord_st), min_size=2, max_size=5).filter(
    lambda vs: all(
        math.hypot(b[0] - a[0], b[1] - a[1]) > 1.0 for a, b in zip(vs, vs[1:])
    )
)


@given(
    verts=verts_st,
    pos=st.tuples(coord_st, coord_st),
    heading=st.floats(min_value=0.0, max_value=359.0),
)
@settings(max_examples=150, deadline=None)
def test_mirror_symmetry_negates_offset_and_heading(verts, pos, heading):
    px, py = pos
    path = LinePath(vertices=verts, ink_width=8.0)
    mirrored = LinePath(vertices=[(x, -y) for x, y in verts], ink_width=8.0)
    m = nearest_point(ScissorsPose((px, py), heading, 0), path)
    mm = nearest_point(ScissorsPose((px, -py), -heading, 0), mirrored)
    assert abs(mm.lateral_offset) == abs(m.lateral_offset)  # exact by construction
    cum = np.concatenate(
        [[0.0], np.cumsum(np.hypot(*np.diff(np.asarray(verts), axis=0).T))]
    )
    at_vertex = bool(np.any(np.isclose(m.arc_position, cum, atol=1e-12)))
    if not at_vertex:
        # Interior projections have a well-defined side; vertex-clamped ones
        # can sit exactly on the extended tangent where the sign is moot.
        assert mm.lateral_offset == -m.lateral_offset
    if abs(abs(m.heading_deviation) - 180.0) > 1e-9:
        assert mm.heading_deviation == pytest.approx(-m.heading_deviation, abs=1e-9)
    assert mm.arc_position == pytest.approx(m.arc_position, abs=1e-9)


def test_rigid_motion_equivariance():
    rng = np.random.default_rng(99)
    for _ in range(300):
        path, pose = random_path_and_pose(rng)
        angle = rng.uniform(0, 2 * np.pi)
        shift = rng.uniform(-500, 500, size=2)
        c, s = np.cos(angle), np.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        moved_path = LinePath(
            vertices=np.asarray(path.vertices) @ rot.T + shift, ink_width=8.0
        )
        moved_pose = ScissorsPose(
            position=tuple(rot @ np.asarray(pose.position) + shift),
            heading=pose.heading + math.degrees(angle),
            timestamp=0,
        )
        m = nearest_point(pose, path)
        mm = nearest_point(moved_pose, moved_path)
        assert mm.lateral_offset == pytest.approx(m.lateral_offset, abs=1e-9)
        dh = wrap_degrees(mm.heading_deviation - m.heading_deviation)
        assert dh == pytest.approx(0.0, abs=1e-9)
        assert mm.arc_position == pytest.approx(m.arc_position, abs=1e-6)


# ---------------------------------------------------------------------------
# File round-trip and fixture shapes
# ---------------------------------------------------------------------------

class TestPathFiles:
    def test_round_trip(self, tmp_path):
        original = star_path()
        file = tmp_path / "star.json"
        save_path(original, file)
        loaded = load_path(file)
        assert np.allclose(loaded.vertices, original.vertices)
        assert loaded.ink_width == original.ink_width
        assert loaded.capture_radius == original.capture_radius

    def test_missing_field_reports_name(self, tmp_path):
        file = tmp_path / "bad.json"
        file.write_text('{"vertices": [[0,0],[1,0]], "ink_width_mm": 8.0}')
        with pytest.raises(PathError, match="capture_radius_mm"):
            load_path(file)

    def test_invalid_json_rejected(self, tmp_path):
        file = tmp_path / "bad.json"
        file.write_text("{nope")
        with pytest.raises(PathError, match="invalid JSON"):
            load_path(file)

    def test_fixture_shapes_construct(self):
        for path in (straight_line_path(), l_shaped_path(), star_path(), circle_path()):
            assert path.total_length > 0
            assert path.ink_width >= MIN_INK_WIDTH_MM
