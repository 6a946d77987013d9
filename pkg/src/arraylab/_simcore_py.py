"""Pure-Python physics kernel for the pillar-array simulator.

One rigid convex-footprint object rests on an N x N field of vertically
sliding pillars. Contact is quasi-static: each substep fits a support plane
to the highest pillar tips under the footprint, distributes the object's
weight over the contacting tips, then advances tilt-driven sliding with
Coulomb friction, plus edge-pivot toppling when the center of mass leaves
the support hull.

This module is the reference twin of the compiled kernel in `_simcore.pyx`;
the two keep identical per-cell arithmetic so either can back the simulator.
State travels in packed float64 vectors whose offsets live in `_layout`.
"""

import math

import numpy as np

from ._layout import (
    OBJ_POS_X, OBJ_POS_Y, OBJ_POS_Z, OBJ_VEL_X, OBJ_VEL_Y, OBJ_QBASE, OBJ_YAW,
    OBJ_HALF_HEIGHT, OBJ_MASS, OBJ_BOXLIKE, OBJ_NPREV, OBJ_TOPPLE_ACTIVE,
    OBJ_TOPPLE_ANGLE, OBJ_TOPPLE_AXIS_X, OBJ_TOPPLE_AXIS_Y, OBJ_PIVOT,
    OBJ_QPRE, OBJ_POS_PRE, OBJ_PLANE_A, OBJ_PLANE_B, OBJ_PLANE_C,
    OBJ_TOPPLE_STEP_ANGLE, OBJ_TOPPLE_AXIS3, OBJ_QEXP,
    PAR_GRID_N, PAR_PITCH, PAR_JOINT_RANGE, PAR_MAX_SPEED, PAR_SIM_DT,
    PAR_SUBSTEPS, PAR_GRAVITY, PAR_FRICTION_MU, PAR_CONTACT_TOL, PAR_V_STICK,
    PAR_TOPPLE_MARGIN, PAR_TOPPLE_RATE,
    STATUS_OK, STATUS_UNSUPPORTED, STATUS_OUT_OF_BORDER,
    LAYOUT_VERSION,
)

KERNEL_NAME = "python"

_CAPTURE_EPS = 1e-9    # relative slack so float accumulation cannot add a phantom substep
_AREA_EPS = 1e-12      # m^2: three tips closer than this to a line count as collinear
_DET_EPS = 1e-20       # determinant floor for the tiny 2x2 solves
_HALF_PI = 0.5 * math.pi


# --- small quaternion helpers (w, x, y, z), mirrored in the compiled twin ---

def _quat_mul(aw, ax, ay, az, bw, bx, by, bz):
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def _quat_axis_angle(ux, uy, uz, angle):
    half = 0.5 * angle
    s = math.sin(half)
    return (math.cos(half), ux * s, uy * s, uz * s)


def _rotate_about_axis(ux, uy, uz, angle, vx, vy, vz):
    # Rodrigues rotation of v about unit axis u.
    c = math.cos(angle)
    s = math.sin(angle)
    dot = ux * vx + uy * vy + uz * vz
    cx = uy * vz - uz * vy
    cy = uz * vx - ux * vz
    cz = ux * vy - uy * vx
    return (
        vx * c + cx * s + ux * dot * (1.0 - c),
        vy * c + cy * s + uy * dot * (1.0 - c),
        vz * c + cz * s + uz * dot * (1.0 - c),
    )


# --- servo ------------------------------------------------------------------

def _servo(heights, targets, step, joint_range):
    gap = targets - heights
    cap = np.abs(gap) <= step * (1.0 + _CAPTURE_EPS)
    stepped = heights + np.where(gap >= 0.0, step, -step)
    out = np.where(cap, targets, stepped)
    np.clip(out, 0.0, joint_range, out=out)
    heights[:, :] = out


# --- support solve -----------------------------------------------------------

def _point_in_poly(px, py, wx, wy):
    k = len(wx)
    for m in range(k):
        x1 = wx[m]
        y1 = wy[m]
        x2 = wx[(m + 1) % k]
        y2 = wy[(m + 1) % k]
        if (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1) < -1e-12:
            return False
    return True


def _ls_plane(pts):
    m = len(pts)
    sx = sy = sh = 0.0
    for (_, _, x, y, h) in pts:
        sx += x
        sy += y
        sh += h
    mx = sx / m
    my = sy / m
    mh = sh / m
    sxx = sxy = syy = shx = shy = 0.0
    for (_, _, x, y, h) in pts:
        dx = x - mx
        dy = y - my
        dh = h - mh
        sxx += dx * dx
        sxy += dx * dy
        syy += dy * dy
        shx += dx * dh
        shy += dy * dh
    det = sxx * syy - sxy * sxy
    if det < _DET_EPS:
        return None
    a = (syy * shx - sxy * shy) / det
    b = (sxx * shy - sxy * shx) / det
    return (a, b, mh - a * mx - b * my)


def _exact3_plane(cand, order, forced):
    seq = list(order)
    if forced is not None:
        seq.remove(forced)
        seq.insert(0, forced)
    x1, y1, h1 = cand[seq[0]][2], cand[seq[0]][3], cand[seq[0]][4]
    if len(seq) == 1:
        return (0.0, 0.0, h1)
    x2, y2, h2 = cand[seq[1]][2], cand[seq[1]][3], cand[seq[1]][4]
    for idx in seq[2:]:
        x3, y3, h3 = cand[idx][2], cand[idx][3], cand[idx][4]
        det = (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1)
        if abs(det) > _AREA_EPS:
            a = ((h2 - h1) * (y3 - y1) - (y2 - y1) * (h3 - h1)) / det
            b = ((x2 - x1) * (h3 - h1) - (h2 - h1) * (x3 - x1)) / det
            return (a, b, h1 - a * x1 - b * y1)
    # every tip on one line: slope along the line, flat across it
    ux = x2 - x1
    uy = y2 - y1
    length = math.sqrt(ux * ux + uy * uy)
    if length < 1e-12:
        return (0.0, 0.0, h1)
    s = (h2 - h1) / length
    a = s * ux / length
    b = s * uy / length
    return (a, b, h1 - a * x1 - b * y1)


def _height_order(cand):
    return sorted(range(len(cand)), key=lambda k: (-cand[k][4], k))


def _fit_support_plane(cand, tol):
    hmax = cand[0][4]
    for t in cand:
        if t[4] > hmax:
            hmax = t[4]
    top = [t for t in cand if t[4] >= hmax - tol]
    plane = _ls_plane(top) if len(top) >= 3 else None
    if plane is None:
        plane = _exact3_plane(cand, _height_order(cand), None)
    # the plane must rest on top of every tip; swap the worst violator in
    for _ in range(6):
        worst = -1
        worst_v = tol
        for idx, (_, _, x, y, h) in enumerate(cand):
            v = h - (plane[0] * x + plane[1] * y + plane[2])
            if v > worst_v:
                worst_v = v
                worst = idx
        if worst < 0:
            break
        plane = _exact3_plane(cand, _height_order(cand), worst)
    return plane


def _solve_support(heights, obj, footprint, forces, params):
    n_grid = int(params[PAR_GRID_N])
    pitch = params[PAR_PITCH]
    tol = params[PAR_CONTACT_TOL]
    hh = obj[OBJ_HALF_HEIGHT]
    bx = obj[OBJ_POS_X] - hh * obj[OBJ_NPREV + 0]
    by = obj[OBJ_POS_Y] - hh * obj[OBJ_NPREV + 1]
    cyw = math.cos(obj[OBJ_YAW])
    syw = math.sin(obj[OBJ_YAW])
    k = footprint.shape[0]
    wx = [0.0] * k
    wy = [0.0] * k
    for m in range(k):
        fx = footprint[m, 0]
        fy = footprint[m, 1]
        wx[m] = cyw * fx - syw * fy + bx
        wy[m] = syw * fx + cyw * fy + by
    i_lo = max(0, int(math.floor(min(wx) / pitch - 0.5)))
    i_hi = min(n_grid - 1, int(math.ceil(max(wx) / pitch - 0.5)))
    j_lo = max(0, int(math.floor(min(wy) / pitch - 0.5)))
    j_hi = min(n_grid - 1, int(math.ceil(max(wy) / pitch - 0.5)))
    forces[:, :] = 0.0
    cand = []
    for i in range(i_lo, i_hi + 1):
        x = (i + 0.5) * pitch
        for j in range(j_lo, j_hi + 1):
            y = (j + 0.5) * pitch
            if _point_in_poly(x, y, wx, wy):
                cand.append((i, j, x, y, heights[i, j]))
    if not cand:
        return STATUS_UNSUPPORTED, None
    a, b, c = _fit_support_plane(cand, tol)
    obj[OBJ_PLANE_A] = a
    obj[OBJ_PLANE_B] = b
    obj[OBJ_PLANE_C] = c
    contacts = [t for t in cand if t[4] >= a * t[2] + b * t[3] + c - tol]
    _weights_into_forces(contacts, obj, forces, params[PAR_GRAVITY])
    return STATUS_OK, contacts


def _weights_into_forces(contacts, obj, forces, gravity):
    # Minimum-norm weights under sum-to-one and center-of-mass moment
    # constraints, clamped nonnegative and renormalized: symmetric patterns
    # get equal shares and the total always equals the object's weight.
    m = len(contacts)
    weight = obj[OBJ_MASS] * gravity
    if m == 1:
        forces[contacts[0][0], contacts[0][1]] = weight
        return
    cx = obj[OBJ_POS_X]
    cy = obj[OBJ_POS_Y]
    sx = sy = 0.0
    for (_, _, x, y, _) in contacts:
        sx += x
        sy += y
    mx = sx / m
    my = sy / m
    sxx = sxy = syy = 0.0
    for (_, _, x, y, _) in contacts:
        dx = x - mx
        dy = y - my
        sxx += dx * dx
        sxy += dx * dy
        syy += dy * dy
    det = sxx * syy - sxy * sxy
    ex = cx - mx
    ey = cy - my
    w = [0.0] * m
    if det > _DET_EPS:
        l1 = (syy * ex - sxy * ey) / det
        l2 = (sxx * ey - sxy * ex) / det
        for idx, (_, _, x, y, _) in enumerate(contacts):
            w[idx] = 1.0 / m + (x - mx) * l1 + (y - my) * l2
    else:
        # collinear contacts: minimum-norm along the line direction only
        ux = contacts[m - 1][2] - contacts[0][2]
        uy = contacts[m - 1][3] - contacts[0][3]
        length = math.sqrt(ux * ux + uy * uy)
        if length < 1e-12:
            for idx in range(m):
                w[idx] = 1.0 / m
        else:
            ux /= length
            uy /= length
            st2 = 0.0
            ts = [0.0] * m
            for idx, (_, _, x, y, _) in enumerate(contacts):
                t = (x - mx) * ux + (y - my) * uy
                ts[idx] = t
                st2 += t * t
            if st2 < _DET_EPS:
                for idx in range(m):
                    w[idx] = 1.0 / m
            else:
                tc = ex * ux + ey * uy
                for idx in range(m):
                    w[idx] = 1.0 / m + ts[idx] * tc / st2
    s = 0.0
    for idx in range(m):
        if w[idx] < 0.0:
            w[idx] = 0.0
        s += w[idx]
    if s <= 0.0:
        for idx in range(m):
            w[idx] = 1.0 / m
        s = 1.0
    for idx, (i, j, _, _, _) in enumerate(contacts):
        forces[i, j] = w[idx] * weight / s


# --- topple -------------------------------------------------------------------

def _convex_hull(pts):
    # Andrew monotone chain; returns CCW hull without the repeated endpoint.
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2:
            ox = lower[-1][0] - lower[-2][0]
            oy = lower[-1][1] - lower[-2][1]
            if ox * (p[1] - lower[-2][1]) - oy * (p[0] - lower[-2][0]) <= 0.0:
                lower.pop()
            else:
                break
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2:
            ox = upper[-1][0] - upper[-2][0]
            oy = upper[-1][1] - upper[-2][1]
            if ox * (p[1] - upper[-2][1]) - oy * (p[0] - upper[-2][0]) <= 0.0:
                upper.pop()
            else:
                break
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _point_segment(px, py, x1, y1, x2, y2):
    dx = x2 - x1
    dy = y2 - y1
    l2 = dx * dx + dy * dy
    if l2 <= 0.0:
        t = 0.0
    else:
        t = ((px - x1) * dx + (py - y1) * dy) / l2
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    qx = x1 + t * dx
    qy = y1 + t * dy
    return math.sqrt((px - qx) * (px - qx) + (py - qy) * (py - qy)), qx, qy


def _outside_distance(contacts, cx, cy):
    """Distance of (cx, cy) outside the contact hull, outward unit, nearest point."""
    hull = _convex_hull([(t[2], t[3]) for t in contacts])
    k = len(hull)
    if k == 1:
        px, py = hull[0]
        d = math.sqrt((cx - px) * (cx - px) + (cy - py) * (cy - py))
        if d <= 0.0:
            return 0.0, 0.0, 0.0, px, py
        return d, (cx - px) / d, (cy - py) / d, px, py
    if k == 2:
        d, qx, qy = _point_segment(cx, cy, hull[0][0], hull[0][1], hull[1][0], hull[1][1])
        if d <= 0.0:
            return 0.0, 0.0, 0.0, qx, qy
        return d, (cx - qx) / d, (cy - qy) / d, qx, qy
    inside = True
    for m in range(k):
        x1, y1 = hull[m]
        x2, y2 = hull[(m + 1) % k]
        if (x2 - x1) * (cy - y1) - (y2 - y1) * (cx - x1) < 0.0:
            inside = False
            break
    if inside:
        return 0.0, 0.0, 0.0, cx, cy
    best = (math.inf, cx, cy)
    for m in range(k):
        x1, y1 = hull[m]
        x2, y2 = hull[(m + 1) % k]
        d, qx, qy = _point_segment(cx, cy, x1, y1, x2, y2)
        if d < best[0]:
            best = (d, qx, qy)
    d, qx, qy = best
    if d <= 0.0:
        return 0.0, 0.0, 0.0, qx, qy
    return d, (cx - qx) / d, (cy - qy) / d, qx, qy


def _maybe_start_topple(obj, contacts, params):
    cx = obj[OBJ_POS_X]
    cy = obj[OBJ_POS_Y]
    dist, ox, oy, px, py = _outside_distance(contacts, cx, cy)
    if dist <= params[PAR_TOPPLE_MARGIN]:
        return False
    # rotation axis u = z x outward, so the object falls away from the hull
    ax = -oy
    ay = ox
    obj[OBJ_TOPPLE_ACTIVE] = 1.0
    obj[OBJ_TOPPLE_ANGLE] = 0.0
    obj[OBJ_TOPPLE_AXIS_X] = ax
    obj[OBJ_TOPPLE_AXIS_Y] = ay
    obj[OBJ_PIVOT + 0] = px
    obj[OBJ_PIVOT + 1] = py
    obj[OBJ_PIVOT + 2] = obj[OBJ_PLANE_A] * px + obj[OBJ_PLANE_B] * py + obj[OBJ_PLANE_C]
    for d in range(4):
        obj[OBJ_QPRE + d] = obj[OBJ_QEXP + d]
    obj[OBJ_POS_PRE + 0] = obj[OBJ_POS_X]
    obj[OBJ_POS_PRE + 1] = obj[OBJ_POS_Y]
    obj[OBJ_POS_PRE + 2] = obj[OBJ_POS_Z]
    obj[OBJ_TOPPLE_AXIS3 + 0] = ax
    obj[OBJ_TOPPLE_AXIS3 + 1] = ay
    obj[OBJ_TOPPLE_AXIS3 + 2] = 0.0
    obj[OBJ_VEL_X] = 0.0
    obj[OBJ_VEL_Y] = 0.0
    return True


def _remap_box(obj, footprint):
    # After a 90-degree topple, the body extent along the fallen direction
    # trades places with the half height (box-like footprints only).
    cyw = math.cos(obj[OBJ_YAW])
    syw = math.sin(obj[OBJ_YAW])
    ax = obj[OBJ_TOPPLE_AXIS_X]
    ay = obj[OBJ_TOPPLE_AXIS_Y]
    ulx = cyw * ax + syw * ay
    uly = -syw * ax + cyw * ay
    hx = 0.0
    hy = 0.0
    for m in range(footprint.shape[0]):
        hx = max(hx, abs(footprint[m, 0]))
        hy = max(hy, abs(footprint[m, 1]))
    hh = obj[OBJ_HALF_HEIGHT]
    if abs(ulx) >= abs(uly):
        obj[OBJ_HALF_HEIGHT] = hy
        hy = hh
    else:
        obj[OBJ_HALF_HEIGHT] = hx
        hx = hh
    footprint[0, 0] = -hx
    footprint[0, 1] = -hy
    footprint[1, 0] = hx
    footprint[1, 1] = -hy
    footprint[2, 0] = hx
    footprint[2, 1] = hy
    footprint[3, 0] = -hx
    footprint[3, 1] = hy


def _advance_topple(obj, footprint, params, dt):
    theta = obj[OBJ_TOPPLE_ANGLE]
    new = theta + params[PAR_TOPPLE_RATE] * dt
    if new > _HALF_PI:
        new = _HALF_PI
    obj[OBJ_TOPPLE_STEP_ANGLE] += new - theta
    obj[OBJ_TOPPLE_ANGLE] = new
    ax = obj[OBJ_TOPPLE_AXIS_X]
    ay = obj[OBJ_TOPPLE_AXIS_Y]
    rx = obj[OBJ_POS_PRE + 0] - obj[OBJ_PIVOT + 0]
    ry = obj[OBJ_POS_PRE + 1] - obj[OBJ_PIVOT + 1]
    rz = obj[OBJ_POS_PRE + 2] - obj[OBJ_PIVOT + 2]
    vx, vy, vz = _rotate_about_axis(ax, ay, 0.0, new, rx, ry, rz)
    obj[OBJ_POS_X] = obj[OBJ_PIVOT + 0] + vx
    obj[OBJ_POS_Y] = obj[OBJ_PIVOT + 1] + vy
    obj[OBJ_POS_Z] = obj[OBJ_PIVOT + 2] + vz
    qw, qx, qy, qz = _quat_axis_angle(ax, ay, 0.0, new)
    ew, ex, ey, ez = _quat_mul(
        qw, qx, qy, qz,
        obj[OBJ_QPRE + 0], obj[OBJ_QPRE + 1], obj[OBJ_QPRE + 2], obj[OBJ_QPRE + 3],
    )
    norm = math.sqrt(ew * ew + ex * ex + ey * ey + ez * ez)
    obj[OBJ_QEXP + 0] = ew / norm
    obj[OBJ_QEXP + 1] = ex / norm
    obj[OBJ_QEXP + 2] = ey / norm
    obj[OBJ_QEXP + 3] = ez / norm
    if new >= _HALF_PI - 1e-12:
        for d in range(4):
            obj[OBJ_QBASE + d] = obj[OBJ_QEXP + d]
        if obj[OBJ_BOXLIKE] != 0.0 and footprint.shape[0] == 4:
            _remap_box(obj, footprint)
        obj[OBJ_TOPPLE_ACTIVE] = 0.0
        obj[OBJ_TOPPLE_ANGLE] = 0.0
        obj[OBJ_VEL_X] = 0.0
        obj[OBJ_VEL_Y] = 0.0
        obj[OBJ_NPREV + 0] = 0.0
        obj[OBJ_NPREV + 1] = 0.0
        obj[OBJ_NPREV + 2] = 1.0


# --- dynamics -----------------------------------------------------------------

def _write_exposed(obj):
    a = obj[OBJ_PLANE_A]
    b = obj[OBJ_PLANE_B]
    norm = math.sqrt(1.0 + a * a + b * b)
    nx = -a / norm
    ny = -b / norm
    nz = 1.0 / norm
    s = math.sqrt(nx * nx + ny * ny)
    if s < 1e-15:
        tw, tx, ty, tz = 1.0, 0.0, 0.0, 0.0
    else:
        angle = math.atan2(s, nz)
        tw, tx, ty, tz = _quat_axis_angle(-ny / s, nx / s, 0.0, angle)
    ew, ex, ey, ez = _quat_mul(
        tw, tx, ty, tz,
        obj[OBJ_QBASE + 0], obj[OBJ_QBASE + 1], obj[OBJ_QBASE + 2], obj[OBJ_QBASE + 3],
    )
    qn = math.sqrt(ew * ew + ex * ex + ey * ey + ez * ez)
    obj[OBJ_QEXP + 0] = ew / qn
    obj[OBJ_QEXP + 1] = ex / qn
    obj[OBJ_QEXP + 2] = ey / qn
    obj[OBJ_QEXP + 3] = ez / qn
    return nx, ny, nz


def _place_on_plane(obj, nx, ny, nz):
    hh = obj[OBJ_HALF_HEIGHT]
    bx = obj[OBJ_POS_X] - hh * nx
    by = obj[OBJ_POS_Y] - hh * ny
    obj[OBJ_POS_Z] = obj[OBJ_PLANE_A] * bx + obj[OBJ_PLANE_B] * by + obj[OBJ_PLANE_C] + hh * nz
    obj[OBJ_NPREV + 0] = nx
    obj[OBJ_NPREV + 1] = ny
    obj[OBJ_NPREV + 2] = nz


def _slide(obj, params, dt, nx, ny, nz):
    # Down-slope pull g*sin(phi) with Coulomb friction mu*g*cos(phi); static
    # stick inside the friction cone at low speed, no friction-induced reversal.
    g = params[PAR_GRAVITY]
    mu = params[PAR_FRICTION_MU]
    v_stick = params[PAR_V_STICK]
    a = obj[OBJ_PLANE_A]
    b = obj[OBJ_PLANE_B]
    slope = math.sqrt(a * a + b * b)
    gx = g * nx
    gy = g * ny
    vx = obj[OBJ_VEL_X]
    vy = obj[OBJ_VEL_Y]
    speed = math.sqrt(vx * vx + vy * vy)
    if speed < v_stick and slope <= mu:
        vx = 0.0
        vy = 0.0
    else:
        fmag = mu * g * nz
        pull = math.sqrt(gx * gx + gy * gy)
        if speed >= v_stick:
            fx = -fmag * vx / speed
            fy = -fmag * vy / speed
        elif pull > 0.0:
            fx = -fmag * gx / pull
            fy = -fmag * gy / pull
        else:
            fx = 0.0
            fy = 0.0
        nvx = vx + (gx + fx) * dt
        nvy = vy + (gy + fy) * dt
        if slope <= mu and nvx * vx + nvy * vy <= 0.0:
            nvx = 0.0
            nvy = 0.0
        vx = nvx
        vy = nvy
    obj[OBJ_VEL_X] = vx
    obj[OBJ_VEL_Y] = vy
    obj[OBJ_POS_X] += vx * dt
    obj[OBJ_POS_Y] += vy * dt


def _border_status(obj, params):
    ext = params[PAR_GRID_N] * params[PAR_PITCH]
    x = obj[OBJ_POS_X]
    y = obj[OBJ_POS_Y]
    if x < 0.0 or x > ext or y < 0.0 or y > ext:
        return STATUS_OUT_OF_BORDER
    return STATUS_OK


# --- public entry points --------------------------------------------------------

def _substep(heights, targets, obj, footprint, forces, params):
    dt = params[PAR_SIM_DT]
    _servo(heights, targets, params[PAR_MAX_SPEED] * dt, params[PAR_JOINT_RANGE])
    if obj[OBJ_TOPPLE_ACTIVE] != 0.0:
        _advance_topple(obj, footprint, params, dt)
        return _border_status(obj, params)
    status, contacts = _solve_support(heights, obj, footprint, forces, params)
    if status != STATUS_OK:
        return status
    nx, ny, nz = _write_exposed(obj)
    if _maybe_start_topple(obj, contacts, params):
        return _border_status(obj, params)
    _slide(obj, params, dt, nx, ny, nz)
    _place_on_plane(obj, nx, ny, nz)
    return _border_status(obj, params)


def control_step(heights, targets, deltas, win_i, win_j, obj, footprint, forces, params):
    """Apply one 5 Hz control command and run the physics substeps.

    Mutates heights/targets/obj/footprint/forces in place and returns a
    STATUS_* code; on a non-OK status the remaining substeps are skipped.
    """
    jr = params[PAR_JOINT_RANGE]
    window = targets[win_i:win_i + 5, win_j:win_j + 5]
    np.clip(window + deltas, 0.0, jr, out=window)
    obj[OBJ_TOPPLE_STEP_ANGLE] = 0.0
    status = STATUS_OK
    for _ in range(int(params[PAR_SUBSTEPS])):
        status = _substep(heights, targets, obj, footprint, forces, params)
        if status != STATUS_OK:
            break
    return status


def settle(heights, obj, footprint, forces, params):
    """Static placement used at reset: fit support, set z/tilt/forces only."""
    status, _ = _solve_support(heights, obj, footprint, forces, params)
    if status != STATUS_OK:
        return status
    nx, ny, nz = _write_exposed(obj)
    _place_on_plane(obj, nx, ny, nz)
    return _border_status(obj, params)
