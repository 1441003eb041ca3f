# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Segment obstruction against random box scenes, checked by dense sampling."""

import numpy as np
import pytest

from drt_engine.rt.visibility import Occluders, OccluderSeries, segment_obstructed
from drt_engine.scene.builders import box_object, default_materials, terminal
from drt_engine.scene.model import Scene
from drt_engine.scene.timeline import SceneTimeline

SCENES = 100
SEGMENTS = 20
SAMPLES = 1000


def random_boxes(rng):
    boxes = []
    for _ in range(int(rng.integers(1, 6))):
        center = rng.uniform(-20.0, 20.0, size=3)
        size = rng.uniform(1.0, 10.0, size=3)
        boxes.append((center, size))
    return boxes


def scene_of(boxes):
    objects = tuple(box_object(f"box{i}", c, s) for i, (c, s) in enumerate(boxes))
    return Scene(
        objects,
        terminal("tx", "TX", (0.0, 0.0, 100.0), antenna="isotropic"),
        terminal("rx", "RX", (0.0, 0.0, -100.0), antenna="isotropic"),
        default_materials(),
    )


def inside(points, boxes, grow):
    """Any point strictly inside any box grown by `grow` on every side."""
    for center, size in boxes:
        half = 0.5 * size + grow
        if np.any(np.all(np.abs(points - center) < half, axis=1)):
            return True
    return False


def outside_all(rng, boxes, margin):
    while True:
        p = rng.uniform(-30.0, 30.0, size=3)
        if not inside(p[None, :], boxes, margin):
            return p


def dense_verdict(p, q, boxes):
    """True or False when 1000 samples along p-q settle it, None when the segment grazes a box."""
    points = p + np.linspace(0.0, 1.0, SAMPLES)[:, None] * (q - p)
    spacing = np.linalg.norm(q - p) / (SAMPLES - 1)
    # a segment through a box passes within `spacing` of its interior at some sample
    if not inside(points, boxes, spacing):
        return False
    if inside(points, boxes, -1e-3):
        return True
    return None


@pytest.mark.unit
class TestDenseSegmentOracle:
    """Occluders agree with a sampled segment on about a hundred random scenes."""

    def test_random_scenes(self):
        rng = np.random.default_rng(1234)
        decided = agreed = 0
        for _ in range(SCENES):
            boxes = random_boxes(rng)
            occluders = Occluders.of(scene_of(boxes).snapshot(0.0))
            for _ in range(SEGMENTS):
                p = outside_all(rng, boxes, 0.1)
                q = outside_all(rng, boxes, 0.1)
                expected = dense_verdict(p, q, boxes)
                if expected is None:
                    continue
                decided += 1
                agreed += occluders.obstructed(p, q) == expected
        assert decided >= 0.9 * SCENES * SEGMENTS
        assert agreed == decided

    def test_excluded_faces_are_ignored(self):
        boxes = [(np.zeros(3), np.full(3, 2.0))]
        snap = scene_of(boxes).snapshot(0.0)
        p, q = np.array([-5.0, 0.0, 0.0]), np.array([5.0, 0.0, 0.0])
        assert segment_obstructed(snap, p, q)
        # the segment enters through f4 (x = -1) and leaves through f5 (x = +1)
        assert segment_obstructed(snap, p, q, exclude={"box0/f4"})
        assert not segment_obstructed(snap, p, q, exclude={"box0/f4", "box0/f5"})

    def test_endpoint_on_face_is_not_a_hit(self):
        snap = scene_of([(np.zeros(3), np.full(3, 2.0))]).snapshot(0.0)
        assert not segment_obstructed(snap, np.array([-1.0, 0.0, 0.0]), np.array([-5.0, 0.3, 0.2]))


@pytest.mark.unit
class TestOccluderSeries:
    """Whole-timeline obstruction masks match one snapshot at a time."""

    def test_rows_match_snapshots(self, canyon):
        rng = np.random.default_rng(5)
        times = np.linspace(0.0, 6.0, 25)
        timeline = SceneTimeline(canyon, times)
        series = OccluderSeries.of(timeline)
        for _ in range(40):
            p = rng.uniform([-60.0, -14.0, 0.5], [60.0, 14.0, 5.0], size=(len(times), 3))
            q = rng.uniform([-60.0, -14.0, 0.5], [60.0, 14.0, 5.0], size=(len(times), 3))
            mask = series.obstructed(p, q)
            for k, t in enumerate(times):
                assert mask[k] == segment_obstructed(canyon.snapshot(float(t)), p[k], q[k])

    def test_rows_restrict_the_test(self, canyon):
        timeline = SceneTimeline(canyon, [0.0, 3.9])
        tx, rx = timeline.tx.position, timeline.rx.position
        assert list(OccluderSeries.of(timeline).obstructed(tx, rx)) == [False, True]
        rows = np.array([True, False])
        assert list(OccluderSeries.of(timeline).obstructed(tx, rx, rows=rows)) == [False, False]

    def test_cached_per_timeline(self, canyon):
        timeline = SceneTimeline(canyon, [0.0, 1.0])
        assert OccluderSeries.of(timeline) is OccluderSeries.of(timeline)
