"""Quaternion helpers (w, x, y, z convention) used by the simulator and rewards."""

import math

import numpy as np

from .errors import InvalidInputError


def quat_identity():
    return np.array([1.0, 0.0, 0.0, 0.0])


def quat_mul(a, b):
    """Hamilton product a*b (apply b first, then a)."""
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def quat_conj(q):
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_normalize(q):
    n = math.sqrt(float(np.dot(q, q)))
    if n == 0.0:
        raise InvalidInputError("cannot normalize a zero quaternion")
    return np.asarray(q, dtype=np.float64) / n


def quat_from_axis_angle(axis, angle):
    axis = np.asarray(axis, dtype=np.float64)
    n = math.sqrt(float(np.dot(axis, axis)))
    if n == 0.0:
        return quat_identity()
    half = 0.5 * angle
    s = math.sin(half) / n
    return np.array([math.cos(half), axis[0] * s, axis[1] * s, axis[2] * s])


def quat_to_axis_angle(q):
    """Axis-angle 3-vector (axis * angle), angle in [0, pi]."""
    w, x, y, z = q
    if w < 0.0:  # pick the short arc
        w, x, y, z = -w, -x, -y, -z
    s = math.sqrt(x * x + y * y + z * z)
    angle = 2.0 * math.atan2(s, w)
    if s < 1e-12:
        return np.zeros(3)
    return np.array([x, y, z]) * (angle / s)


def quat_rotate(q, v):
    """Rotate vector v by quaternion q."""
    w, x, y, z = q
    u = np.array([x, y, z])
    uxv = np.cross(u, v)
    return np.asarray(v) + 2.0 * (w * uxv + np.cross(u, uxv))


def rotation_angle(qa, qb):
    """Geodesic angle (radians) between two unit quaternions.

    Inputs must be unit-norm within 1e-6.
    """
    qa = np.asarray(qa, dtype=np.float64)
    qb = np.asarray(qb, dtype=np.float64)
    for q in (qa, qb):
        if abs(float(np.dot(q, q)) - 1.0) > 2e-6:
            raise InvalidInputError("rotation_angle expects unit quaternions")
    rel = quat_mul(qa, quat_conj(qb))
    s = math.sqrt(rel[1] ** 2 + rel[2] ** 2 + rel[3] ** 2)
    return 2.0 * math.atan2(s, abs(rel[0]))


def tilt_from_normal(n):
    """Minimal rotation taking +z onto the unit normal n."""
    nx, ny, nz = n
    s = math.hypot(nx, ny)
    if s < 1e-15:
        return quat_identity()
    angle = math.atan2(s, nz)
    axis = np.array([-ny / s, nx / s, 0.0])
    return quat_from_axis_angle(axis, angle)
