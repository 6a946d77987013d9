"""Deterministic quasi-static physics of a pillar array supporting one rigid object.

The heavy lifting happens in a kernel (compiled or pure Python, selected by
`arraylab.backend`); this module owns the user-facing state container, object
construction, and convenience accessors used by perception and the task
environments.
"""

from dataclasses import dataclass

import numpy as np

from . import _layout as L
from .backend import kernel
from .config import SimConfig
from .errors import InvalidInputError
from .rotations import quat_normalize

STATUS_OK = L.STATUS_OK
STATUS_UNSUPPORTED = L.STATUS_UNSUPPORTED
STATUS_OUT_OF_BORDER = L.STATUS_OUT_OF_BORDER

LAP_SPAN = 5


def params_vector(cfg: SimConfig):
    p = np.zeros(L.PAR_LEN)
    p[L.PAR_GRID_N] = cfg.grid_n
    p[L.PAR_PITCH] = cfg.pitch
    p[L.PAR_JOINT_RANGE] = cfg.joint_range
    p[L.PAR_MAX_SPEED] = cfg.max_speed
    p[L.PAR_SIM_DT] = cfg.sim_dt
    p[L.PAR_SUBSTEPS] = cfg.substeps_per_control
    p[L.PAR_GRAVITY] = cfg.gravity
    p[L.PAR_FRICTION_MU] = cfg.friction_mu
    p[L.PAR_CONTACT_TOL] = cfg.contact_tol
    p[L.PAR_V_STICK] = cfg.v_stick
    p[L.PAR_TOPPLE_MARGIN] = cfg.topple_margin
    p[L.PAR_TOPPLE_RATE] = cfg.topple_rate
    return p


def rect_footprint(half_x, half_y):
    """CCW rectangle footprint centered on the object origin."""
    return np.array(
        [[-half_x, -half_y], [half_x, -half_y], [half_x, half_y], [-half_x, half_y]]
    )


def ngon_footprint(radius_x, radius_y, n=16):
    """CCW elliptical n-gon footprint (circular when the radii match)."""
    ang = 2.0 * np.pi * np.arange(n) / n
    return np.stack([radius_x * np.cos(ang), radius_y * np.sin(ang)], axis=1)


def _validate_footprint(fp):
    fp = np.asarray(fp, dtype=np.float64)
    if fp.ndim != 2 or fp.shape[1] != 2 or fp.shape[0] < 3:
        raise InvalidInputError(f"footprint must be (K>=3, 2), got {fp.shape}")
    if not np.all(np.isfinite(fp)):
        raise InvalidInputError("footprint contains non-finite vertices")
    # convexity and CCW order: every cross product nonnegative
    k = fp.shape[0]
    for m in range(k):
        ax, ay = fp[(m + 1) % k] - fp[m]
        bx, by = fp[(m + 2) % k] - fp[(m + 1) % k]
        if ax * by - ay * bx < -1e-12:
            raise InvalidInputError("footprint must be convex and CCW ordered")
    return fp


@dataclass
class SimState:
    """Mutable simulation state: pillar field plus one supported object."""

    cfg: SimConfig
    heights: np.ndarray
    targets: np.ndarray
    obj: np.ndarray
    footprint: np.ndarray
    forces: np.ndarray
    params: np.ndarray

    @classmethod
    def create(cls, cfg, footprint, half_height, mass, position_xy, yaw=0.0,
               boxlike=False, initial_height=None):
        cfg.validate()
        n = cfg.grid_n
        level = cfg.joint_range / 2.0 if initial_height is None else initial_height
        heights = np.full((n, n), level, dtype=np.float64)
        targets = heights.copy()
        obj = np.zeros(L.OBJ_LEN)
        obj[L.OBJ_POS_X] = position_xy[0]
        obj[L.OBJ_POS_Y] = position_xy[1]
        obj[L.OBJ_YAW] = yaw
        obj[L.OBJ_HALF_HEIGHT] = half_height
        obj[L.OBJ_MASS] = mass
        obj[L.OBJ_BOXLIKE] = 1.0 if boxlike else 0.0
        obj[L.OBJ_NPREV + 2] = 1.0
        obj[L.OBJ_QEXP + 0] = 1.0
        # yaw lives in its own slot; fold it into the base orientation too
        obj[L.OBJ_QBASE + 0] = np.cos(yaw / 2.0)
        obj[L.OBJ_QBASE + 3] = np.sin(yaw / 2.0)
        state = cls(
            cfg=cfg,
            heights=heights,
            targets=targets,
            obj=obj,
            footprint=_validate_footprint(footprint),
            forces=np.zeros((n, n)),
            params=params_vector(cfg),
        )
        return state

    # --- accessors -------------------------------------------------------

    @property
    def position(self):
        return self.obj[L.OBJ_POS_X:L.OBJ_POS_Z + 1].copy()

    @property
    def velocity(self):
        return self.obj[L.OBJ_VEL_X:L.OBJ_VEL_Y + 1].copy()

    @property
    def quaternion(self):
        """Exposed orientation including the transient support tilt."""
        return quat_normalize(self.obj[L.OBJ_QEXP:L.OBJ_QEXP + 4].copy())

    @property
    def support_plane(self):
        """(a, b, c) of the support plane z = a*x + b*y + c."""
        return (
            float(self.obj[L.OBJ_PLANE_A]),
            float(self.obj[L.OBJ_PLANE_B]),
            float(self.obj[L.OBJ_PLANE_C]),
        )

    @property
    def toppling(self):
        return self.obj[L.OBJ_TOPPLE_ACTIVE] != 0.0

    @property
    def topple_step_angle(self):
        return float(self.obj[L.OBJ_TOPPLE_STEP_ANGLE])

    def contacts(self):
        """List of (i, j, force, tip_point) for currently loaded pillars."""
        out = []
        pitch = self.cfg.pitch
        idx = np.argwhere(self.forces > 0.0)
        for i, j in idx:
            out.append(
                (
                    int(i),
                    int(j),
                    float(self.forces[i, j]),
                    (
                        (i + 0.5) * pitch,
                        (j + 0.5) * pitch,
                        float(self.heights[i, j]),
                    ),
                )
            )
        return out

    def lap_heights(self, window):
        i0, j0 = window
        return self.heights[i0:i0 + LAP_SPAN, j0:j0 + LAP_SPAN].copy()

    # --- stepping ----------------------------------------------------------

    def settle(self):
        """Place the object statically on the current pillar field."""
        return int(kernel.settle(self.heights, self.obj, self.footprint,
                                 self.forces, self.params))

    def control_step(self, deltas, window):
        """Run one control command: add deltas to the 5x5 window targets, then substep."""
        deltas = np.asarray(deltas, dtype=np.float64)
        if deltas.shape != (LAP_SPAN, LAP_SPAN):
            raise InvalidInputError(f"deltas must be 5x5, got {deltas.shape}")
        if not np.all(np.isfinite(deltas)):
            raise InvalidInputError("deltas contain non-finite entries")
        i0, j0 = int(window[0]), int(window[1])
        n = self.cfg.grid_n
        if not (0 <= i0 <= n - LAP_SPAN and 0 <= j0 <= n - LAP_SPAN):
            raise InvalidInputError(f"window origin {window} outside the grid")
        return int(
            kernel.control_step(
                self.heights, self.targets, deltas, i0, j0,
                self.obj, self.footprint, self.forces, self.params,
            )
        )
