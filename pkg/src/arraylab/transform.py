"""Frequency-domain action pipeline on 5x5 pillar patches.

The policy emits six low-frequency coefficients; this module turns them into
executable per-pillar height deltas via an orthonormal 2D DCT pair (type II
forward, type III inverse), JPEG-style zig-zag channel ordering, zero-padding
of the 19 high-frequency channels, and spatial clamping to the actuator's
per-step travel budget.

All functions are pure and operate on plain float64 arrays.
"""

import numpy as np

from .errors import ConfigError, InvalidInputError

PATCH_SIZE = 5
NUM_ACTION_CHANNELS = 6


def _cosine_matrix(n):
    # Orthonormal DCT-II basis: row k is the k-th frequency sampled at the
    # half-integer grid, so C @ C.T == I and Parseval holds exactly.
    k = np.arange(n)[:, None]
    x = np.arange(n)[None, :]
    c = np.sqrt(2.0 / n) * np.cos(np.pi * (2 * x + 1) * k / (2.0 * n))
    c[0, :] = np.sqrt(1.0 / n)
    return c


_C = _cosine_matrix(PATCH_SIZE)


def _as_patch(values, name):
    a = np.asarray(values, dtype=np.float64)
    if a.shape != (PATCH_SIZE, PATCH_SIZE):
        raise InvalidInputError(
            f"{name} must be {PATCH_SIZE}x{PATCH_SIZE}, got shape {a.shape}"
        )
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return a


def dct2(patch):
    """Orthonormal 2D DCT-II of a 5x5 spatial patch."""
    p = _as_patch(patch, "patch")
    return _C @ p @ _C.T


def idct2(coeffs):
    """Orthonormal 2D inverse DCT (exact inverse of :func:`dct2`)."""
    s = _as_patch(coeffs, "coeffs")
    return _C.T @ s @ _C


def zigzag_order(n=PATCH_SIZE):
    """JPEG-style low-to-high frequency traversal of an n x n channel grid.

    Returns a list of (u, v) index pairs covering every channel exactly once,
    starting at the DC channel (0, 0) and nondecreasing in u + v.
    """
    if n < 1:
        raise InvalidInputError(f"grid side must be >= 1, got {n}")
    order = []
    for s in range(2 * n - 1):
        diag = [(u, s - u) for u in range(min(s, n - 1), max(0, s - n + 1) - 1, -1)]
        if s % 2:
            diag.reverse()
        order.extend(diag)
    return order


_ZIGZAG5 = zigzag_order(PATCH_SIZE)


def _as_action(action):
    a = np.asarray(action, dtype=np.float64).reshape(-1)
    if a.shape != (NUM_ACTION_CHANNELS,):
        raise InvalidInputError(
            f"action must have {NUM_ACTION_CHANNELS} coefficients, got {a.shape}"
        )
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("action contains non-finite entries")
    return a


def embed_truncated(action):
    """Place 6 low-frequency coefficients on a 5x5 spectrum, zero elsewhere."""
    a = _as_action(action)
    coeffs = np.zeros((PATCH_SIZE, PATCH_SIZE))
    for value, (u, v) in zip(a, _ZIGZAG5):
        coeffs[u, v] = value
    return coeffs


def extract_truncated(coeffs):
    """Read the 6 lowest-frequency channels back out of a 5x5 spectrum."""
    s = _as_patch(coeffs, "coeffs")
    return np.array([s[u, v] for u, v in _ZIGZAG5[:NUM_ACTION_CHANNELS]])


def decode_action(action, scale):
    """Turn a 6-coefficient action into a clamped 5x5 height-delta patch.

    `scale` is the per-step travel budget in meters; every spatial entry of
    the decoded patch is clamped to [-scale, +scale] after the inverse
    transform, so spectral magnitudes themselves are unconstrained.
    """
    if not np.isfinite(scale) or scale <= 0.0:
        raise ConfigError(f"action scale must be positive, got {scale}")
    patch = idct2(embed_truncated(action))
    return np.clip(patch, -scale, scale)


def basis_image(u, v):
    """Spatial image of the (u, v) cosine basis function (unit coefficient)."""
    if not (0 <= u < PATCH_SIZE and 0 <= v < PATCH_SIZE):
        raise InvalidInputError(f"basis index out of range: ({u}, {v})")
    return np.outer(_C[u], _C[v])
