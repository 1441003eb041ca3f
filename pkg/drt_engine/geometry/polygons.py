# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Planar polygon helpers working on (N, 2) arrays of in-plane coordinates."""

from typing import List, Sequence, Tuple

import numpy as np


def polygon_area(poly: np.ndarray) -> float:
    """Signed shoelace area (positive for counter-clockwise winding)."""
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def polygon_centroid(poly: np.ndarray) -> np.ndarray:
    """Area centroid of a simple polygon."""
    x, y = poly[:, 0], poly[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    c = x * yn - xn * y
    a = 0.5 * c.sum()
    if abs(a) < 1e-300:
        return poly.mean(axis=0)
    return np.array([((x + xn) * c).sum(), ((y + yn) * c).sum()]) / (6.0 * a)


def boundary_distance(point: Sequence[float], poly: np.ndarray) -> float:
    """Smallest distance from point to any polygon side."""
    p = np.asarray(point, dtype=float)
    a = poly
    b = np.roll(poly, -1, axis=0)
    ab = b - a
    ab2 = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", p - a, ab) / np.where(ab2 > 0, ab2, 1.0), 0.0, 1.0)
    closest = a + ab * t[:, None]
    return float(np.min(np.hypot(*(closest - p).T)))


def boundary_distances(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """boundary_distance for every row of an (N, 2) array."""
    p = np.asarray(points, dtype=float)[:, None, :]
    a = poly[None, :, :]
    ab = np.roll(poly, -1, axis=0)[None, :, :] - a
    ab2 = np.sum(ab * ab, axis=-1)
    t = np.clip(np.sum((p - a) * ab, axis=-1) / np.where(ab2 > 0, ab2, 1.0), 0.0, 1.0)
    closest = a + ab * t[..., None]
    return np.min(np.hypot(*np.moveaxis(closest - p, -1, 0)), axis=1)


def point_in_polygon(point: Sequence[float], poly: np.ndarray, eps: float = 0.0) -> bool:
    """Ray-cast crossing test; points within eps of the boundary count as inside."""
    x, y = float(point[0]), float(point[1])
    x1, y1 = poly[:, 0], poly[:, 1]
    x2, y2 = np.roll(x1, -1), np.roll(y1, -1)
    straddle = (y1 > y) != (y2 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xin = x1 + (x2 - x1) * (y - y1) / (y2 - y1)
    inside = bool(np.count_nonzero(straddle & (xin >= x)) % 2)
    if inside or eps <= 0.0:
        return inside
    return boundary_distance((x, y), poly) <= eps


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _segments_cross(p1, p2, q1, q2) -> bool:
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    return (d1 * d2 < 0) and (d3 * d4 < 0)


def is_simple(poly: np.ndarray) -> bool:
    """True when no two non-adjacent sides intersect."""
    n = len(poly)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]):
                return False
    return True


def clip_polygon(subject: np.ndarray, lo: Tuple[float, float], hi: Tuple[float, float]) -> np.ndarray:
    """Sutherland-Hodgman clip of `subject` against the box [lo, hi]."""
    out: List[np.ndarray] = [np.asarray(p, dtype=float) for p in subject]
    # (axis, bound, keep-if-greater)
    for axis, bound, greater in ((0, lo[0], True), (0, hi[0], False), (1, lo[1], True), (1, hi[1], False)):
        if not out:
            break
        src, out = out, []

        def inside(p):
            return p[axis] >= bound if greater else p[axis] <= bound

        prev = src[-1]
        for cur in src:
            if inside(cur):
                if not inside(prev):
                    out.append(_intersect(prev, cur, axis, bound))
                out.append(cur)
            elif inside(prev):
                out.append(_intersect(prev, cur, axis, bound))
            prev = cur
    return np.array(out).reshape(-1, 2)


def _intersect(p, q, axis, bound) -> np.ndarray:
    t = (bound - p[axis]) / (q[axis] - p[axis])
    return p + (q - p) * t


def points_in_polygon(points: np.ndarray, poly: np.ndarray, eps: float = 0.0) -> np.ndarray:
    """point_in_polygon for every row of an (N, 2) array; NaN rows are outside."""
    p = np.asarray(points, dtype=float)
    if len(p) == 0:
        return np.zeros(0, dtype=bool)
    x, y = p[:, 0:1], p[:, 1:2]
    x1, y1 = poly[None, :, 0], poly[None, :, 1]
    x2, y2 = np.roll(x1, -1, axis=1), np.roll(y1, -1, axis=1)
    straddle = (y1 > y) != (y2 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xin = x1 + (x2 - x1) * (y - y1) / (y2 - y1)
    inside = np.count_nonzero(straddle & (xin >= x), axis=1) % 2 == 1
    if eps <= 0.0:
        return inside
    near = ~inside & np.all(np.isfinite(p), axis=1)
    if np.any(near):
        inside[near] = boundary_distances(p[near], poly) <= eps
    return inside
