# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Small-vector helpers on numpy arrays of shape (3,)."""

import math
from typing import Iterable, Union

import numpy as np

Vec3 = np.ndarray
VecLike = Union[np.ndarray, Iterable[float]]

ZERO = np.zeros(3)
X_AXIS = np.array([1.0, 0.0, 0.0])
Y_AXIS = np.array([0.0, 1.0, 0.0])
Z_AXIS = np.array([0.0, 0.0, 1.0])


def vec3(x: Union[float, VecLike], y: float = None, z: float = None) -> Vec3:
    """Build a float64 3-vector from three scalars or one iterable."""
    if y is None and z is None:
        v = np.asarray(x, dtype=float).reshape(3)
        return v.copy()
    return np.array([float(x), float(y), float(z)])


def as_finite_vec3(value: VecLike, name: str = "vector") -> Vec3:
    """Coerce to a 3-vector and reject NaN/inf components."""
    v = np.asarray(value, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"{name} must have 3 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite components: {v}")
    return v.copy()


def cross(a: Vec3, b: Vec3) -> Vec3:
    return np.array([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def dot(a: Vec3, b: Vec3) -> float:
    return float(a[0] * b[0] + a[1] * b[1] + a[2] * b[2])


def norm(v: Vec3) -> float:
    return math.sqrt(dot(v, v))


def unit(v: Vec3) -> Vec3:
    """Normalize v; raises ValueError on a zero-length vector."""
    n = norm(v)
    if n == 0.0:
        raise ValueError("cannot normalize a zero-length vector")
    return v / n


def normalized(v: Vec3, tol: float = 1e-12) -> Vec3:
    """Like unit, but returns v unchanged when it is already unit to tol."""
    n = norm(v)
    if abs(n - 1.0) <= tol:
        return np.asarray(v, dtype=float)
    return unit(v)


def skew(v: Vec3) -> np.ndarray:
    """Cross-product matrix [v]x such that skew(v) @ w == cross(v, w)."""
    return np.array([
        [0.0, -v[2], v[1]],
        [v[2], 0.0, -v[0]],
        [-v[1], v[0], 0.0],
    ])


def rotation_matrix(axis: Vec3, angle: float) -> np.ndarray:
    """Rodrigues rotation by `angle` (right-hand rule) about unit `axis`."""
    if angle == 0.0:
        return np.eye(3)
    k = skew(axis)
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


def is_rotation(matrix: np.ndarray, tol: float = 1e-12) -> bool:
    """True when matrix is orthonormal with determinant +1 (to tol)."""
    m = np.asarray(matrix, dtype=float)
    if m.shape != (3, 3):
        return False
    if np.max(np.abs(m.T @ m - np.eye(3))) > tol:
        return False
    return abs(np.linalg.det(m) - 1.0) <= tol


def perpendicular(v: Vec3) -> Vec3:
    """Some unit vector perpendicular to v."""
    a = X_AXIS if abs(v[0]) < 0.9 * norm(v) else Y_AXIS
    return unit(cross(v, a))


def mirror(point: Vec3, plane_point: Vec3, plane_normal: Vec3) -> Vec3:
    """Reflect point across the plane through plane_point with unit normal."""
    return point - 2.0 * dot(point - plane_point, plane_normal) * plane_normal


# -- row-wise helpers on (..., 3) arrays ------------------------------------


def dots(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise dot product over the last axis."""
    return np.sum(a * b, axis=-1)


def norms(v: np.ndarray) -> np.ndarray:
    return np.sqrt(dots(v, v))


def units(v: np.ndarray) -> np.ndarray:
    """Row-wise normalization; zero rows stay zero."""
    n = norms(v)[..., None]
    return v / np.where(n > 0.0, n, 1.0)


def apply(matrices: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """M v for stacks of (3, 3) matrices and (3,) vectors."""
    return np.matmul(matrices, vectors[..., None])[..., 0]


def apply_transposed(matrices: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """M^T v for stacks of (3, 3) matrices and (3,) vectors."""
    return np.matmul(vectors[..., None, :], matrices)[..., 0, :]


def rotation_matrices(axis: Vec3, angles: np.ndarray) -> np.ndarray:
    """Stack of Rodrigues rotations about one unit axis, shape (N, 3, 3)."""
    angles = np.asarray(angles, dtype=float)
    k = skew(axis)
    s = np.sin(angles)[:, None, None]
    c = (1.0 - np.cos(angles))[:, None, None]
    return np.eye(3) + s * k + c * (k @ k)


def perpendiculars(v: np.ndarray) -> np.ndarray:
    """Row-wise unit vectors perpendicular to v, choosing axes like perpendicular()."""
    use_x = np.abs(v[..., 0]) < 0.9 * norms(v)
    a = np.where(use_x[..., None], X_AXIS, Y_AXIS)
    return units(np.cross(v, a))
