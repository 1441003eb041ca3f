# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Complex field and received power of one ray path.

The field is carried as a complex 3-vector normalized so that a line-of-sight
ray has amplitude 1/d; the received power is then

    P = Pt * (lambda / 4 pi)^2 * polarization-weighted |E|^2

which is Friis' formula for a direct ray. Reflections multiply the field by
a Fresnel dyadic, diffractions by a UTD dyadic with the matching spreading
factor. Diffuse scattering is incoherent and is evaluated as a power density
with the Effective Roughness model.

The solver works on vertex positions sampled over a timeline, so a whole
DRT segment of one path is evaluated in a single pass; path_field is the
one-instant case.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..constants import SPEED_OF_LIGHT
from ..errors import InvalidPathError
from ..geometry.vectors import apply, norms, units
from ..rt.paths import InteractionKind, RayPath
from ..rt.tracer import validate_path
from ..scene.model import Scene, SceneSnapshot
from ..scene.timeline import SceneTimeline
from . import antennas
from .fresnel import (
    fresnel_coefficients,
    incidence_angle,
    reflection_dyadic,
    roughness_factor,
    unpolarized_power_factor,
)
from .roughness import er_scatter_field
from .utd import diffraction_dyadic, distance_parameter, edge_angles_at, wedge_coefficients

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RayField:
    """Received field of one ray at one instant."""

    path_id: str
    time: float
    power_w: float
    amplitude: complex
    e_field: np.ndarray
    length: float
    delay: float
    spreading: float
    coefficients: Tuple[Tuple[complex, complex], ...]

    @property
    def power_dbm(self) -> float:
        if self.power_w <= 0.0:
            return -math.inf
        return 10.0 * math.log10(self.power_w / 1e-3)


@dataclass(frozen=True, eq=False)
class FieldSeries:
    """RayField rows of one path over the steps of a timeline."""

    path_id: str
    times: np.ndarray
    power_w: np.ndarray
    amplitude: np.ndarray
    e_field: np.ndarray
    length: np.ndarray
    spreading: np.ndarray
    coefficients: Tuple[Tuple[np.ndarray, np.ndarray], ...]

    @property
    def delay(self) -> np.ndarray:
        return self.length / SPEED_OF_LIGHT

    def at(self, k: int) -> RayField:
        return RayField(
            path_id=self.path_id,
            time=float(self.times[k]),
            power_w=float(self.power_w[k]),
            amplitude=complex(self.amplitude[k]),
            e_field=self.e_field[k],
            length=float(self.length[k]),
            delay=float(self.length[k] / SPEED_OF_LIGHT),
            spreading=float(self.spreading[k]),
            coefficients=tuple((complex(a[k]), complex(b[k])) for a, b in self.coefficients),
        )


class _Solver:
    def __init__(self, path: RayPath, scene: Scene, timeline: SceneTimeline, positions: np.ndarray,
                 times: np.ndarray):
        self.path = path
        self.scene = scene
        self.timeline = timeline
        self.times = times
        self.frequency = scene.frequency
        self.k = 2.0 * math.pi * self.frequency / SPEED_OF_LIGHT
        self.wavelength = SPEED_OF_LIGHT / self.frequency
        self.points = positions
        segments = np.diff(positions, axis=0)
        self.dirs = units(segments)
        self.lengths = norms(segments)

    def material_of(self, face_id: str):
        return self.scene.material(self.scene.face(face_id))

    def reflection(self, i: int, face_id: str):
        normal = self.timeline.face_frame(face_id).axis(1)
        material = self.material_of(face_id)
        k_in, k_out = self.dirs[i - 1], self.dirs[i]
        te, tm = fresnel_coefficients(incidence_angle(k_in, normal), material, self.frequency)
        rough = roughness_factor(material.scattering)
        te, tm = te * rough, tm * rough
        return reflection_dyadic(k_in, k_out, normal, te, tm), (te, tm)

    def diffraction(self, i: int, edge_id: str, s_in: np.ndarray, s_out: np.ndarray):
        edge = self.scene.edge(edge_id)
        frame = self.timeline.edge_frame(edge_id)
        k_in, k_out = self.dirs[i - 1], self.dirs[i]
        beta0, phi_p, phi = edge_angles_at(
            frame.origin, frame.orientation, self.points[i - 1], self.points[i], self.points[i + 1]
        )
        length = distance_parameter(s_in, s_out, beta0)
        mat_a = self.material_of(edge.face_a)
        mat_n = self.material_of(edge.face_b) if edge.face_b else mat_a
        d_soft, d_hard = wedge_coefficients(
            self.k, edge.n, beta0, phi, phi_p, length,
            lambda th: fresnel_coefficients(th, mat_a, self.frequency),
            lambda th: fresnel_coefficients(th, mat_n, self.frequency),
        )
        return diffraction_dyadic(k_in, k_out, frame.axis(2), d_soft, d_hard), (d_soft, d_hard)

    def coherent(self) -> FieldSeries:
        path = self.path
        inters = path.interactions
        total = self.lengths.sum(axis=0)
        count = len(total)
        pivot = next((i for i, x in enumerate(inters, start=1) if x.kind is InteractionKind.DIFFRACTION), None)
        s_in = s_out = np.zeros(count)
        if pivot is None:
            spreading = 1.0 / total
        else:
            s_in = self.lengths[:pivot].sum(axis=0)
            s_out = self.lengths[pivot:].sum(axis=0)
            spreading = 1.0 / np.sqrt(s_in * s_out * (s_in + s_out))

        dyadic = np.broadcast_to(np.eye(3, dtype=complex), (count, 3, 3))
        coefficients = []
        for i, inter in enumerate(inters, start=1):
            if inter.kind is InteractionKind.REFLECTION:
                m, pair = self.reflection(i, inter.primitive_id)
            else:
                m, pair = self.diffraction(i, inter.primitive_id, s_in, s_out)
            dyadic = np.matmul(m, dyadic)
            coefficients.append(pair)

        tx_ant = self.scene.transmitter.antenna
        rx_ant = self.scene.receiver.antenna
        k_first, k_last = self.dirs[0], self.dirs[-1]
        received = np.zeros(count)
        coupling = np.zeros(count, dtype=complex)
        fields = []
        for weight, pol in antennas.tx_polarizations(tx_ant, k_first):
            field = spreading[:, None] * apply(dyadic, pol.astype(complex))
            fields.append(field)
            received = received + weight * antennas.rx_power_factor(rx_ant, k_last, field)
            c = antennas.rx_coupling(rx_ant, k_last, field)
            coupling = np.where(np.abs(c) > np.abs(coupling), c, coupling)
        power = self.scene.transmitter.power * (self.wavelength / (4.0 * math.pi)) ** 2 * received
        phase = -self.k * total + np.angle(coupling)
        e_field = math.sqrt(60.0 * self.scene.transmitter.power) * np.exp(-1j * self.k * total)[:, None] * fields[0]
        return FieldSeries(
            path_id=path.path_id,
            times=self.times,
            power_w=power,
            amplitude=np.sqrt(power) * np.exp(1j * phase),
            e_field=e_field,
            length=total,
            spreading=spreading,
            coefficients=tuple(coefficients),
        )

    def diffuse(self) -> FieldSeries:
        """Power of a path through one scattering tile, reflections on either side."""
        path = self.path
        inters = path.interactions
        j = next(i for i, x in enumerate(inters, start=1) if x.kind is InteractionKind.SCATTER)
        tile = inters[j - 1]
        face_id = tile.primitive_id.rsplit("/", 1)[0]
        material = self.material_of(face_id)
        r_in = self.lengths[:j].sum(axis=0)
        r_out = self.lengths[j:].sum(axis=0)
        count = len(r_in)

        loss_in = np.ones(count)
        loss_out = np.ones(count)
        coefficients = []
        for i, inter in enumerate(inters, start=1):
            if inter.kind is InteractionKind.SCATTER:
                s = np.full(count, complex(material.scattering))
                coefficients.append((s, s))
                continue
            _, (te, tm) = self.reflection(i, inter.primitive_id)
            coefficients.append((te, tm))
            if i < j:
                loss_in = loss_in * unpolarized_power_factor(te, tm)
            else:
                loss_out = loss_out * unpolarized_power_factor(te, tm)

        tx = self.scene.transmitter
        rx_ant = self.scene.receiver.antenna
        incident = tx.power * antennas.gain(tx.antenna, self.dirs[0]) / (4.0 * math.pi * r_in * r_in) * loss_in
        point = self.points[j]
        # unfolded distances place the virtual source and observer on the tile's own side
        source = point - self.dirs[j - 1] * r_in[:, None]
        observer = point + self.dirs[j] * r_out[:, None]
        normal = self.timeline.face_frame(face_id).axis(1)
        density = er_scatter_field(point, normal, tile.area, source, observer, material.scattering, incident) * loss_out
        aperture = antennas.gain(rx_ant, -self.dirs[-1]) * self.wavelength ** 2 / (4.0 * math.pi)
        power = density * aperture * antennas.unpolarized_fraction(rx_ant)
        total = r_in + r_out
        return FieldSeries(
            path_id=path.path_id,
            times=self.times,
            power_w=power,
            amplitude=np.sqrt(power) * np.exp(-1j * self.k * total),
            e_field=np.zeros((count, 3), dtype=complex),
            length=total,
            spreading=1.0 / (r_in * r_out),
            coefficients=tuple(coefficients),
        )

    def solve(self) -> FieldSeries:
        if self.path.count(InteractionKind.SCATTER):
            return self.diffuse()
        return self.coherent()


def field_series(path: RayPath, scene: Scene, timeline: SceneTimeline, positions: np.ndarray,
                 times: Optional[Sequence[float]] = None) -> FieldSeries:
    """Field of one path at every step of a timeline.

    `positions` holds the vertex positions (V, T, 3), TX first, as they are
    at timeline.times; the caller is responsible for their validity.
    """
    times = timeline.times if times is None else np.asarray(times, dtype=float)
    return _Solver(path, scene, timeline, np.asarray(positions, dtype=float), times).solve()


def path_field(path: RayPath, scene: Scene, t: Optional[float] = None,
               snapshot: Optional[SceneSnapshot] = None, validate: bool = True) -> RayField:
    """Field and received power of a path at time t (default: the path's own time).

    Raises:
        InvalidPathError: the path is expired or fails validation at t
    """
    t = path.time if t is None else t
    if path.expired:
        raise InvalidPathError(f"path {path.path_id} expired: {path.expiry_reason}")
    snap = snapshot if snapshot is not None else scene.snapshot(t)
    if validate:
        check = validate_path(path, scene, t, snapshot=snap)
        if not check:
            raise InvalidPathError(f"path {path.path_id} invalid at t={t}: {check.reason}")
    series = field_series(path, scene, SceneTimeline.of(snap), path.points[:, None, :], [path.time])
    return series.at(0)


def free_space_power(power: float, frequency: float, distance: float, gain_tx: float = 1.0, gain_rx: float = 1.0) -> float:
    """Friis received power."""
    wavelength = SPEED_OF_LIGHT / frequency
    return power * gain_tx * gain_rx * (wavelength / (4.0 * math.pi * distance)) ** 2
