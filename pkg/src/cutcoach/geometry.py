"""Planar cutting-line geometry.

A printed cutting line is a polyline with a uniform ink width. Everything
downstream (sensor simulation, severity grading, progress/completion) is
defined against the deviation between a scissors pose and this polyline,
so the projection math here is the ground truth for the whole engine.

Conventions:
  * coordinates are millimetres on the paper plane
  * headings are degrees in [0, 360), 0 pointing along +x, CCW positive
  * a positive lateral offset means the pose sits to the LEFT of the
    local direction of travel along the path
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

# Narrower lines are not reliably detectable by the reflectance sensors,
# so construction rejects them outright instead of warning.
MIN_INK_WIDTH_MM = 7.0

PATH_FORMAT_VERSION = 1


class PathError(ValueError):
    """Raised when a LinePath violates a construction invariant."""


def wrap_degrees(angle: float) -> float:
    """Wrap an angle in degrees into the half-open interval (-180, 180]."""
    wrapped = angle % 360.0
    if wrapped > 180.0:
        wrapped -= 360.0
    return wrapped


@dataclass(frozen=True)
class LinePath:
    """The printed cutting line: an immutable planar polyline.

    Attributes:
        vertices: (n, 2) float array of polyline vertices in mm.
        ink_width: printed stroke width in mm; must be >= MIN_INK_WIDTH_MM.
        capture_radius: end-detection tolerance in mm (how close to the
            final vertex, laterally and in arc length, counts as done).
    """

    vertices: np.ndarray
    ink_width: float
    capture_radius: float = 5.0

    def __post_init__(self) -> None:
        verts = np.array(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2:
            raise PathError("vertices must be an (n, 2) array of planar points")
        if verts.shape[0] < 2:
            raise PathError("a path needs at least 2 vertices")
        if not np.all(np.isfinite(verts)):
            raise PathError("vertices must be finite")
        if self.ink_width < MIN_INK_WIDTH_MM:
            raise PathError(
                f"ink_width {self.ink_width:g} mm is below the "
                f"{MIN_INK_WIDTH_MM:g} mm sensor detectability floor"
            )
        if self.capture_radius <= 0:
            raise PathError("capture_radius must be positive")

        seg_vec = np.diff(verts, axis=0)
        seg_len = np.hypot(seg_vec[:, 0], seg_vec[:, 1])
        if np.any(seg_len <= 0.0):
            raise PathError("consecutive vertices must be distinct")

        verts.setflags(write=False)
        seg_vec.setflags(write=False)
        seg_len.setflags(write=False)
        cum = np.concatenate([[0.0], np.cumsum(seg_len)])
        cum.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "_seg_vec", seg_vec)
        object.__setattr__(self, "_seg_len", seg_len)
        object.__setattr__(self, "_cum_len", cum)

    @property
    def total_length(self) -> float:
        """Total arc length in mm (always > 0)."""
        return float(self._cum_len[-1])

    @property
    def segment_count(self) -> int:
        return len(self._seg_len)

    def point_at(self, arc_position: float) -> np.ndarray:
        """Point on the polyline at a given arc length (clamped to the path)."""
        s = min(max(arc_position, 0.0), self.total_length)
        i = int(np.searchsorted(self._cum_len, s, side="right") - 1)
        i = min(i, self.segment_count - 1)
        t = (s - self._cum_len[i]) / self._seg_len[i]
        return self.vertices[i] + t * self._seg_vec[i]

    def tangent_heading_at(self, arc_position: float) -> float:
        """Heading (degrees in [0, 360)) of the segment containing arc_position."""
        s = min(max(arc_position, 0.0), self.total_length)
        i = int(np.searchsorted(self._cum_len, s, side="right") - 1)
        i = min(i, self.segment_count - 1)
        dx, dy = self._seg_vec[i]
        return math.degrees(math.atan2(dy, dx)) % 360.0

    def to_dict(self) -> dict:
        return {
            "format_version": PATH_FORMAT_VERSION,
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
            "ink_width_mm": float(self.ink_width),
            "capture_radius_mm": float(self.capture_radius),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LinePath":
        try:
            return cls(
                vertices=np.array(data["vertices"], dtype=float),
                ink_width=float(data["ink_width_mm"]),
                capture_radius=float(data["capture_radius_mm"]),
            )
        except KeyError as exc:
            raise PathError(f"path file missing field {exc.args[0]!r}") from exc


@dataclass(frozen=True)
class ScissorsPose:
    """Cut-point position, blade heading and timestamp of one input sample."""

    position: tuple[float, float]
    heading: float  # degrees, normalized to [0, 360)
    timestamp: int  # ms since session start

    def __post_init__(self) -> None:
        if self.timestamp < 0:
            raise ValueError("timestamp must be non-negative")
        object.__setattr__(
            self, "position", (float(self.position[0]), float(self.position[1]))
        )
        object.__setattr__(self, "heading", float(self.heading) % 360.0)
        object.__setattr__(self, "timestamp", int(self.timestamp))


@dataclass(frozen=True)
class DeviationMeasure:
    """How a pose deviates from the path.

    lateral_offset: signed mm, positive = left of the travel direction.
    heading_deviation: pose heading minus local tangent heading, wrapped
        to (-180, 180] degrees.
    arc_position: mm along the path of the nearest point.
    nearest_segment: index of the segment holding the nearest point.
    """

    lateral_offset: float
    heading_deviation: float
    arc_position: float
    nearest_segment: int


def _project(point: np.ndarray, path: LinePath):
    """Clamped projection of a point onto every segment.

    Returns (best_index, t_values, projections, squared_distances). Exact
    ties break toward the lowest segment index (np.argmin picks the first
    occurrence), which keeps replays deterministic on self-near paths.
    """
    a = path.vertices[:-1]
    b = path.vertices[1:]
    seg = path._seg_vec
    seg_len = path._seg_len

    t = np.einsum("ij,ij->i", point - a, seg) / (seg_len * seg_len)
    t = np.clip(t, 0.0, 1.0)
    proj = a + t[:, None] * seg
    # Pin clamped projections to the exact endpoint coordinates so that
    # equidistant neighbours at a shared vertex tie bitwise and the
    # lowest-index rule actually decides.
    proj[t == 0.0] = a[t == 0.0]
    proj[t == 1.0] = b[t == 1.0]

    d2 = np.einsum("ij,ij->i", point - proj, point - proj)
    return int(np.argmin(d2)), t, proj, d2


def distance_to_path(point, path: LinePath) -> float:
    """Unsigned distance from a planar point to the polyline, in mm."""
    i, _, _, d2 = _project(np.asarray(point, dtype=float), path)
    return math.sqrt(float(d2[i]))


def nearest_point(pose: ScissorsPose, path: LinePath) -> DeviationMeasure:
    """Project a pose onto the path and measure the deviation.

    The globally nearest point over all segments wins; exact ties are
    broken toward the lowest segment index so replays are deterministic
    even on self-near paths.
    """
    p = np.asarray(pose.position)
    i, t, proj, d2 = _project(p, path)
    seg = path._seg_vec
    seg_len = path._seg_len

    ux, uy = seg[i] / seg_len[i]
    off_vec = p - proj[i]
    # Magnitude is the full distance to the nearest point (beyond a segment
    # end that includes the along-track part); the sign comes from which
    # side of the local tangent the pose sits on.
    perp = float(off_vec[0] * -uy + off_vec[1] * ux)  # dot with left normal
    dist = math.sqrt(float(d2[i]))
    lateral = dist if perp >= 0.0 else -dist
    tangent_heading = math.degrees(math.atan2(uy, ux))
    heading_dev = wrap_degrees(pose.heading - tangent_heading)
    arc = float(path._cum_len[i] + t[i] * seg_len[i])
    return DeviationMeasure(
        lateral_offset=lateral,
        heading_deviation=heading_dev,
        arc_position=arc,
        nearest_segment=i,
    )


def progress(measure: DeviationMeasure, path: LinePath) -> float:
    """Fraction of the path's arc length covered, in [0, 1]."""
    return measure.arc_position / path.total_length


def is_complete(measure: DeviationMeasure, path: LinePath) -> bool:
    """End-of-exercise predicate.

    True once the projection has reached the final capture_radius of arc
    length and the pose is laterally within capture_radius of the line.
    """
    eps = path.capture_radius / path.total_length
    return (
        progress(measure, path) >= 1.0 - eps
        and abs(measure.lateral_offset) <= path.capture_radius
    )


# ---------------------------------------------------------------------------
# Path file format (JSON)
# ---------------------------------------------------------------------------

def load_path(source: str | Path) -> LinePath:
    """Load a path from a JSON file (see LinePath.to_dict for the schema)."""
    text = Path(source).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PathError(f"path file {source}: invalid JSON ({exc})") from exc
    return LinePath.from_dict(data)


def save_path(path: LinePath, destination: str | Path) -> None:
    Path(destination).write_text(
        json.dumps(path.to_dict(), indent=2) + "\n", encoding="utf-8"
    )


# ---------------------------------------------------------------------------
# Fixture shapes
# ---------------------------------------------------------------------------
# The exercise sheets ship with a straight line, a star and a polygonal
# circle approximation. Curves are represented by dense vertices; the
# engine itself only ever sees polylines.

def straight_line_path(
    length: float = 200.0, ink_width: float = 8.0, capture_radius: float = 5.0
) -> LinePath:
    return LinePath(
        vertices=np.array([[0.0, 0.0], [length, 0.0]]),
        ink_width=ink_width,
        capture_radius=capture_radius,
    )


def l_shaped_path(
    leg: float = 120.0, ink_width: float = 8.0, capture_radius: float = 5.0
) -> LinePath:
    return LinePath(
        vertices=np.array([[0.0, 0.0], [leg, 0.0], [leg, leg]]),
        ink_width=ink_width,
        capture_radius=capture_radius,
    )


def star_path(
    outer_radius: float = 80.0,
    inner_radius: float = 34.0,
    points: int = 5,
    ink_width: float = 8.0,
    capture_radius: float = 5.0,
) -> LinePath:
    """Closed five-pointed (by default) star, traversed once."""
    angles = np.linspace(0.0, 2.0 * np.pi, 2 * points, endpoint=False) - np.pi / 2
    radii = np.where(np.arange(2 * points) % 2 == 0, outer_radius, inner_radius)
    verts = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
    verts = np.vstack([verts, verts[0]])  # close the loop
    return LinePath(vertices=verts, ink_width=ink_width, capture_radius=capture_radius)


def circle_path(
    radius: float = 60.0,
    n_vertices: int = 64,
    ink_width: float = 8.0,
    capture_radius: float = 5.0,
) -> LinePath:
    """Closed polygonal approximation of a circle."""
    angles = np.linspace(0.0, 2.0 * np.pi, n_vertices, endpoint=False)
    verts = np.column_stack([radius * np.cos(angles), radius * np.sin(angles)])
    verts = np.vstack([verts, verts[0]])
    return LinePath(vertices=verts, ink_width=ink_width, capture_radius=capture_radius)
