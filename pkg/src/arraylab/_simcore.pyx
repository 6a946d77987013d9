# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled physics kernel; the arithmetic twin of `_simcore_py`.

Keep every expression in lock-step with the Python reference so the two
backends stay interchangeable (the parity test suite compares them step by
step). Layout offsets mirror `arraylab._layout`.
"""

from libc.math cimport atan2, ceil, cos, fabs, floor, sin, sqrt
from libc.stdlib cimport free, malloc

KERNEL_NAME = "cython"
LAYOUT_VERSION = 1

cdef enum:
    OBJ_POS_X = 0
    OBJ_POS_Y = 1
    OBJ_POS_Z = 2
    OBJ_VEL_X = 3
    OBJ_VEL_Y = 4
    OBJ_QBASE = 5
    OBJ_YAW = 9
    OBJ_HALF_HEIGHT = 10
    OBJ_MASS = 11
    OBJ_BOXLIKE = 12
    OBJ_NPREV = 13
    OBJ_TOPPLE_ACTIVE = 16
    OBJ_TOPPLE_ANGLE = 17
    OBJ_TOPPLE_AXIS_X = 18
    OBJ_TOPPLE_AXIS_Y = 19
    OBJ_PIVOT = 20
    OBJ_QPRE = 23
    OBJ_POS_PRE = 27
    OBJ_PLANE_A = 30
    OBJ_PLANE_B = 31
    OBJ_PLANE_C = 32
    OBJ_TOPPLE_STEP_ANGLE = 33
    OBJ_TOPPLE_AXIS3 = 34
    OBJ_QEXP = 37

cdef enum:
    PAR_GRID_N = 0
    PAR_PITCH = 1
    PAR_JOINT_RANGE = 2
    PAR_MAX_SPEED = 3
    PAR_SIM_DT = 4
    PAR_SUBSTEPS = 5
    PAR_GRAVITY = 6
    PAR_FRICTION_MU = 7
    PAR_CONTACT_TOL = 8
    PAR_V_STICK = 9
    PAR_TOPPLE_MARGIN = 10
    PAR_TOPPLE_RATE = 11

cdef enum:
    STATUS_OK = 0
    STATUS_UNSUPPORTED = 1
    STATUS_OUT_OF_BORDER = 2

cdef double _CAPTURE_EPS = 1e-9
cdef double _AREA_EPS = 1e-12
cdef double _DET_EPS = 1e-20
cdef double _HALF_PI = 1.5707963267948966
cdef double _INF = 1e300


cdef struct Scratch:
    int* ci
    int* cj
    double* cx
    double* cy
    double* ch
    int* order
    int* seq
    int* cidx
    double* w
    double* ts
    double* sx
    double* sy
    double* hx
    double* hy
    double* wx
    double* wy
    int cap


cdef int _alloc_scratch(Scratch* s, int cap, int kmax) nogil:
    s.cap = cap
    s.ci = <int*> malloc(cap * sizeof(int))
    s.cj = <int*> malloc(cap * sizeof(int))
    s.order = <int*> malloc(cap * sizeof(int))
    s.seq = <int*> malloc(cap * sizeof(int))
    s.cidx = <int*> malloc(cap * sizeof(int))
    s.cx = <double*> malloc(cap * sizeof(double))
    s.cy = <double*> malloc(cap * sizeof(double))
    s.ch = <double*> malloc(cap * sizeof(double))
    s.w = <double*> malloc(cap * sizeof(double))
    s.ts = <double*> malloc(cap * sizeof(double))
    s.sx = <double*> malloc(cap * sizeof(double))
    s.sy = <double*> malloc(cap * sizeof(double))
    s.hx = <double*> malloc((2 * cap + 2) * sizeof(double))
    s.hy = <double*> malloc((2 * cap + 2) * sizeof(double))
    s.wx = <double*> malloc(kmax * sizeof(double))
    s.wy = <double*> malloc(kmax * sizeof(double))
    if (s.ci == NULL or s.cj == NULL or s.order == NULL or s.seq == NULL or
            s.cidx == NULL or s.cx == NULL or s.cy == NULL or s.ch == NULL or
            s.w == NULL or s.ts == NULL or s.sx == NULL or s.sy == NULL or
            s.hx == NULL or s.hy == NULL or s.wx == NULL or s.wy == NULL):
        return 0
    return 1


cdef void _free_scratch(Scratch* s) nogil:
    free(s.ci); free(s.cj); free(s.order); free(s.seq); free(s.cidx)
    free(s.cx); free(s.cy); free(s.ch); free(s.w); free(s.ts)
    free(s.sx); free(s.sy); free(s.hx); free(s.hy); free(s.wx); free(s.wy)


# --- small quaternion helpers -------------------------------------------------

cdef inline void _quat_mul(double aw, double ax, double ay, double az,
                           double bw, double bx, double by, double bz,
                           double* out) nogil:
    out[0] = aw * bw - ax * bx - ay * by - az * bz
    out[1] = aw * bx + ax * bw + ay * bz - az * by
    out[2] = aw * by - ax * bz + ay * bw + az * bx
    out[3] = aw * bz + ax * by - ay * bx + az * bw


cdef inline void _quat_axis_angle(double ux, double uy, double uz,
                                  double angle, double* out) nogil:
    cdef double half = 0.5 * angle
    cdef double s = sin(half)
    out[0] = cos(half)
    out[1] = ux * s
    out[2] = uy * s
    out[3] = uz * s


cdef inline void _rotate_about_axis(double ux, double uy, double uz, double angle,
                                    double vx, double vy, double vz,
                                    double* out) nogil:
    cdef double c = cos(angle)
    cdef double s = sin(angle)
    cdef double dot = ux * vx + uy * vy + uz * vz
    cdef double cx = uy * vz - uz * vy
    cdef double cy = uz * vx - ux * vz
    cdef double cz = ux * vy - uy * vx
    out[0] = vx * c + cx * s + ux * dot * (1.0 - c)
    out[1] = vy * c + cy * s + uy * dot * (1.0 - c)
    out[2] = vz * c + cz * s + uz * dot * (1.0 - c)


# --- servo ---------------------------------------------------------------------

cdef void _servo(double[:, ::1] heights, double[:, ::1] targets,
                 double step, double joint_range, int n) nogil:
    cdef int i, j
    cdef double g, h
    cdef double slack = step * (1.0 + _CAPTURE_EPS)
    for i in range(n):
        for j in range(n):
            g = targets[i, j] - heights[i, j]
            if fabs(g) <= slack:
                h = targets[i, j]
            elif g >= 0.0:
                h = heights[i, j] + step
            else:
                h = heights[i, j] - step
            if h < 0.0:
                h = 0.0
            elif h > joint_range:
                h = joint_range
            heights[i, j] = h


# --- support solve ----------------------------------------------------------------

cdef bint _point_in_poly(double px, double py, double* wx, double* wy, int k) nogil:
    cdef int m, m2
    cdef double x1, y1, x2, y2
    for m in range(k):
        m2 = m + 1
        if m2 == k:
            m2 = 0
        x1 = wx[m]; y1 = wy[m]
        x2 = wx[m2]; y2 = wy[m2]
        if (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1) < -1e-12:
            return 0
    return 1


cdef bint _ls_plane(Scratch* s, int* top, int nt,
                    double* pa, double* pb, double* pc) nogil:
    cdef int k, idx
    cdef double sx = 0.0, sy = 0.0, sh = 0.0
    cdef double mx, my, mh
    cdef double sxx = 0.0, sxy = 0.0, syy = 0.0, shx = 0.0, shy = 0.0
    cdef double dx, dy, dh, det, a, b
    for k in range(nt):
        idx = top[k]
        sx += s.cx[idx]
        sy += s.cy[idx]
        sh += s.ch[idx]
    mx = sx / nt
    my = sy / nt
    mh = sh / nt
    for k in range(nt):
        idx = top[k]
        dx = s.cx[idx] - mx
        dy = s.cy[idx] - my
        dh = s.ch[idx] - mh
        sxx += dx * dx
        sxy += dx * dy
        syy += dy * dy
        shx += dx * dh
        shy += dy * dh
    det = sxx * syy - sxy * sxy
    if det < _DET_EPS:
        return 0
    a = (syy * shx - sxy * shy) / det
    b = (sxx * shy - sxy * shx) / det
    pa[0] = a
    pb[0] = b
    pc[0] = mh - a * mx - b * my
    return 1


cdef void _height_order(Scratch* s, int m) nogil:
    # stable insertion sort: height descending, candidate index ascending
    cdef int k, pos, cur
    for k in range(m):
        s.order[k] = k
    for k in range(1, m):
        cur = s.order[k]
        pos = k - 1
        while pos >= 0 and (s.ch[s.order[pos]] < s.ch[cur] or
                            (s.ch[s.order[pos]] == s.ch[cur] and s.order[pos] > cur)):
            s.order[pos + 1] = s.order[pos]
            pos -= 1
        s.order[pos + 1] = cur
    return


cdef void _exact3_plane(Scratch* s, int m, int forced,
                        double* pa, double* pb, double* pc) nogil:
    cdef int t = 0, k, idx
    cdef double x1, y1, h1, x2, y2, h2, x3, y3, h3, det, a, b
    cdef double ux, uy, length, sl
    if forced >= 0:
        s.seq[0] = forced
        t = 1
        for k in range(m):
            if s.order[k] != forced:
                s.seq[t] = s.order[k]
                t += 1
    else:
        for k in range(m):
            s.seq[k] = s.order[k]
    x1 = s.cx[s.seq[0]]; y1 = s.cy[s.seq[0]]; h1 = s.ch[s.seq[0]]
    if m == 1:
        pa[0] = 0.0; pb[0] = 0.0; pc[0] = h1
        return
    x2 = s.cx[s.seq[1]]; y2 = s.cy[s.seq[1]]; h2 = s.ch[s.seq[1]]
    for k in range(2, m):
        idx = s.seq[k]
        x3 = s.cx[idx]; y3 = s.cy[idx]; h3 = s.ch[idx]
        det = (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1)
        if fabs(det) > _AREA_EPS:
            a = ((h2 - h1) * (y3 - y1) - (y2 - y1) * (h3 - h1)) / det
            b = ((x2 - x1) * (h3 - h1) - (h2 - h1) * (x3 - x1)) / det
            pa[0] = a
            pb[0] = b
            pc[0] = h1 - a * x1 - b * y1
            return
    ux = x2 - x1
    uy = y2 - y1
    length = sqrt(ux * ux + uy * uy)
    if length < 1e-12:
        pa[0] = 0.0; pb[0] = 0.0; pc[0] = h1
        return
    sl = (h2 - h1) / length
    a = sl * ux / length
    b = sl * uy / length
    pa[0] = a
    pb[0] = b
    pc[0] = h1 - a * x1 - b * y1


cdef void _fit_support_plane(Scratch* s, int m, double tol,
                             double* pa, double* pb, double* pc) nogil:
    cdef int k, nt, it, worst
    cdef double hmax, v, worst_v
    cdef bint ok = 0
    hmax = s.ch[0]
    for k in range(1, m):
        if s.ch[k] > hmax:
            hmax = s.ch[k]
    nt = 0
    for k in range(m):
        if s.ch[k] >= hmax - tol:
            s.cidx[nt] = k
            nt += 1
    if nt >= 3:
        ok = _ls_plane(s, s.cidx, nt, pa, pb, pc)
    if not ok:
        _height_order(s, m)
        _exact3_plane(s, m, -1, pa, pb, pc)
    for it in range(6):
        worst = -1
        worst_v = tol
        for k in range(m):
            v = s.ch[k] - (pa[0] * s.cx[k] + pb[0] * s.cy[k] + pc[0])
            if v > worst_v:
                worst_v = v
                worst = k
        if worst < 0:
            break
        _height_order(s, m)
        _exact3_plane(s, m, worst, pa, pb, pc)


cdef void _weights_into_forces(Scratch* s, int nc, double[::1] obj,
                               double[:, ::1] forces, double gravity) nogil:
    cdef int idx, k
    cdef double weight = obj[OBJ_MASS] * gravity
    cdef double cx, cy, sx, sy, mx, my, sxx, sxy, syy, det, ex, ey
    cdef double l1, l2, ux, uy, length, st2, t, tc, total, x, y
    if nc == 1:
        idx = s.cidx[0]
        forces[s.ci[idx], s.cj[idx]] = weight
        return
    cx = obj[OBJ_POS_X]
    cy = obj[OBJ_POS_Y]
    sx = 0.0
    sy = 0.0
    for k in range(nc):
        idx = s.cidx[k]
        sx += s.cx[idx]
        sy += s.cy[idx]
    mx = sx / nc
    my = sy / nc
    sxx = 0.0
    sxy = 0.0
    syy = 0.0
    for k in range(nc):
        idx = s.cidx[k]
        x = s.cx[idx] - mx
        y = s.cy[idx] - my
        sxx += x * x
        sxy += x * y
        syy += y * y
    det = sxx * syy - sxy * sxy
    ex = cx - mx
    ey = cy - my
    if det > _DET_EPS:
        l1 = (syy * ex - sxy * ey) / det
        l2 = (sxx * ey - sxy * ex) / det
        for k in range(nc):
            idx = s.cidx[k]
            s.w[k] = 1.0 / nc + (s.cx[idx] - mx) * l1 + (s.cy[idx] - my) * l2
    else:
        ux = s.cx[s.cidx[nc - 1]] - s.cx[s.cidx[0]]
        uy = s.cy[s.cidx[nc - 1]] - s.cy[s.cidx[0]]
        length = sqrt(ux * ux + uy * uy)
        if length < 1e-12:
            for k in range(nc):
                s.w[k] = 1.0 / nc
        else:
            ux /= length
            uy /= length
            st2 = 0.0
            for k in range(nc):
                idx = s.cidx[k]
                t = (s.cx[idx] - mx) * ux + (s.cy[idx] - my) * uy
                s.ts[k] = t
                st2 += t * t
            if st2 < _DET_EPS:
                for k in range(nc):
                    s.w[k] = 1.0 / nc
            else:
                tc = ex * ux + ey * uy
                for k in range(nc):
                    s.w[k] = 1.0 / nc + s.ts[k] * tc / st2
    total = 0.0
    for k in range(nc):
        if s.w[k] < 0.0:
            s.w[k] = 0.0
        total += s.w[k]
    if total <= 0.0:
        for k in range(nc):
            s.w[k] = 1.0 / nc
        total = 1.0
    for k in range(nc):
        idx = s.cidx[k]
        forces[s.ci[idx], s.cj[idx]] = s.w[k] * weight / total


cdef int _solve_support(double[:, ::1] heights, double[::1] obj,
                        double[:, ::1] footprint, double[:, ::1] forces,
                        double[::1] params, Scratch* s, int* nc_out) nogil:
    cdef int n_grid = <int> params[PAR_GRID_N]
    cdef double pitch = params[PAR_PITCH]
    cdef double tol = params[PAR_CONTACT_TOL]
    cdef double hh = obj[OBJ_HALF_HEIGHT]
    cdef double bx = obj[OBJ_POS_X] - hh * obj[OBJ_NPREV + 0]
    cdef double by = obj[OBJ_POS_Y] - hh * obj[OBJ_NPREV + 1]
    cdef double cyw = cos(obj[OBJ_YAW])
    cdef double syw = sin(obj[OBJ_YAW])
    cdef int k = footprint.shape[0]
    cdef int m, i, j, i_lo, i_hi, j_lo, j_hi, nm, nc
    cdef double fx, fy, x, y, wxmin, wxmax, wymin, wymax, a, b, c
    for m in range(k):
        fx = footprint[m, 0]
        fy = footprint[m, 1]
        s.wx[m] = cyw * fx - syw * fy + bx
        s.wy[m] = syw * fx + cyw * fy + by
    wxmin = s.wx[0]; wxmax = s.wx[0]; wymin = s.wy[0]; wymax = s.wy[0]
    for m in range(1, k):
        if s.wx[m] < wxmin:
            wxmin = s.wx[m]
        if s.wx[m] > wxmax:
            wxmax = s.wx[m]
        if s.wy[m] < wymin:
            wymin = s.wy[m]
        if s.wy[m] > wymax:
            wymax = s.wy[m]
    i_lo = <int> floor(wxmin / pitch - 0.5)
    if i_lo < 0:
        i_lo = 0
    i_hi = <int> ceil(wxmax / pitch - 0.5)
    if i_hi > n_grid - 1:
        i_hi = n_grid - 1
    j_lo = <int> floor(wymin / pitch - 0.5)
    if j_lo < 0:
        j_lo = 0
    j_hi = <int> ceil(wymax / pitch - 0.5)
    if j_hi > n_grid - 1:
        j_hi = n_grid - 1
    for i in range(n_grid):
        for j in range(n_grid):
            forces[i, j] = 0.0
    nm = 0
    for i in range(i_lo, i_hi + 1):
        x = (i + 0.5) * pitch
        for j in range(j_lo, j_hi + 1):
            y = (j + 0.5) * pitch
            if _point_in_poly(x, y, s.wx, s.wy, k):
                s.ci[nm] = i
                s.cj[nm] = j
                s.cx[nm] = x
                s.cy[nm] = y
                s.ch[nm] = heights[i, j]
                nm += 1
    if nm == 0:
        return STATUS_UNSUPPORTED
    _fit_support_plane(s, nm, tol, &a, &b, &c)
    obj[OBJ_PLANE_A] = a
    obj[OBJ_PLANE_B] = b
    obj[OBJ_PLANE_C] = c
    nc = 0
    for m in range(nm):
        if s.ch[m] >= a * s.cx[m] + b * s.cy[m] + c - tol:
            s.cidx[nc] = m
            nc += 1
    _weights_into_forces(s, nc, obj, forces, params[PAR_GRAVITY])
    nc_out[0] = nc
    return STATUS_OK


# --- topple ------------------------------------------------------------------------

cdef int _convex_hull(Scratch* s, int nc) nogil:
    # monotone chain over the contact tips; sx/sy get the sorted copy,
    # hx/hy the CCW hull. Contact tips are distinct grid points.
    cdef int k, m, pos, nh
    cdef double px, py, ox, oy
    for k in range(nc):
        s.sx[k] = s.cx[s.cidx[k]]
        s.sy[k] = s.cy[s.cidx[k]]
    # insertion sort by (x, y)
    for k in range(1, nc):
        px = s.sx[k]
        py = s.sy[k]
        pos = k - 1
        while pos >= 0 and (s.sx[pos] > px or (s.sx[pos] == px and s.sy[pos] > py)):
            s.sx[pos + 1] = s.sx[pos]
            s.sy[pos + 1] = s.sy[pos]
            pos -= 1
        s.sx[pos + 1] = px
        s.sy[pos + 1] = py
    if nc <= 2:
        for k in range(nc):
            s.hx[k] = s.sx[k]
            s.hy[k] = s.sy[k]
        return nc
    nh = 0
    for k in range(nc):
        px = s.sx[k]
        py = s.sy[k]
        while nh >= 2:
            ox = s.hx[nh - 1] - s.hx[nh - 2]
            oy = s.hy[nh - 1] - s.hy[nh - 2]
            if ox * (py - s.hy[nh - 2]) - oy * (px - s.hx[nh - 2]) <= 0.0:
                nh -= 1
            else:
                break
        s.hx[nh] = px
        s.hy[nh] = py
        nh += 1
    cdef int lower = nh + 1
    for k in range(nc - 2, -1, -1):
        px = s.sx[k]
        py = s.sy[k]
        while nh >= lower:
            ox = s.hx[nh - 1] - s.hx[nh - 2]
            oy = s.hy[nh - 1] - s.hy[nh - 2]
            if ox * (py - s.hy[nh - 2]) - oy * (px - s.hx[nh - 2]) <= 0.0:
                nh -= 1
            else:
                break
        s.hx[nh] = px
        s.hy[nh] = py
        nh += 1
    return nh - 1


cdef double _point_segment(double px, double py, double x1, double y1,
                           double x2, double y2, double* qx, double* qy) nogil:
    cdef double dx = x2 - x1
    cdef double dy = y2 - y1
    cdef double l2 = dx * dx + dy * dy
    cdef double t
    if l2 <= 0.0:
        t = 0.0
    else:
        t = ((px - x1) * dx + (py - y1) * dy) / l2
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    qx[0] = x1 + t * dx
    qy[0] = y1 + t * dy
    return sqrt((px - qx[0]) * (px - qx[0]) + (py - qy[0]) * (py - qy[0]))


cdef double _outside_distance(Scratch* s, int nc, double cx, double cy,
                              double* ox, double* oy, double* px, double* py) nogil:
    cdef int nh = _convex_hull(s, nc)
    cdef int m, m2
    cdef double d, qx, qy, x1, y1, x2, y2, best, bqx, bqy
    cdef bint inside
    ox[0] = 0.0
    oy[0] = 0.0
    if nh == 1:
        px[0] = s.hx[0]
        py[0] = s.hy[0]
        d = sqrt((cx - px[0]) * (cx - px[0]) + (cy - py[0]) * (cy - py[0]))
        if d <= 0.0:
            return 0.0
        ox[0] = (cx - px[0]) / d
        oy[0] = (cy - py[0]) / d
        return d
    if nh == 2:
        d = _point_segment(cx, cy, s.hx[0], s.hy[0], s.hx[1], s.hy[1], &qx, &qy)
        px[0] = qx
        py[0] = qy
        if d <= 0.0:
            return 0.0
        ox[0] = (cx - qx) / d
        oy[0] = (cy - qy) / d
        return d
    inside = 1
    for m in range(nh):
        m2 = m + 1
        if m2 == nh:
            m2 = 0
        x1 = s.hx[m]; y1 = s.hy[m]
        x2 = s.hx[m2]; y2 = s.hy[m2]
        if (x2 - x1) * (cy - y1) - (y2 - y1) * (cx - x1) < 0.0:
            inside = 0
            break
    if inside:
        px[0] = cx
        py[0] = cy
        return 0.0
    best = _INF
    bqx = cx
    bqy = cy
    for m in range(nh):
        m2 = m + 1
        if m2 == nh:
            m2 = 0
        d = _point_segment(cx, cy, s.hx[m], s.hy[m], s.hx[m2], s.hy[m2], &qx, &qy)
        if d < best:
            best = d
            bqx = qx
            bqy = qy
    px[0] = bqx
    py[0] = bqy
    if best <= 0.0:
        return 0.0
    ox[0] = (cx - bqx) / best
    oy[0] = (cy - bqy) / best
    return best


cdef bint _maybe_start_topple(double[::1] obj, Scratch* s, int nc,
                              double[::1] params) nogil:
    cdef double cx = obj[OBJ_POS_X]
    cdef double cy = obj[OBJ_POS_Y]
    cdef double ox, oy, px, py, dist, ax, ay
    cdef int d
    dist = _outside_distance(s, nc, cx, cy, &ox, &oy, &px, &py)
    if dist <= params[PAR_TOPPLE_MARGIN]:
        return 0
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
    return 1


cdef void _remap_box(double[::1] obj, double[:, ::1] footprint) nogil:
    cdef double cyw = cos(obj[OBJ_YAW])
    cdef double syw = sin(obj[OBJ_YAW])
    cdef double ax = obj[OBJ_TOPPLE_AXIS_X]
    cdef double ay = obj[OBJ_TOPPLE_AXIS_Y]
    cdef double ulx = cyw * ax + syw * ay
    cdef double uly = -syw * ax + cyw * ay
    cdef double hx = 0.0
    cdef double hy = 0.0
    cdef double hh = obj[OBJ_HALF_HEIGHT]
    cdef int m
    for m in range(footprint.shape[0]):
        if fabs(footprint[m, 0]) > hx:
            hx = fabs(footprint[m, 0])
        if fabs(footprint[m, 1]) > hy:
            hy = fabs(footprint[m, 1])
    if fabs(ulx) >= fabs(uly):
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


cdef void _advance_topple(double[::1] obj, double[:, ::1] footprint,
                          double[::1] params, double dt) nogil:
    cdef double theta = obj[OBJ_TOPPLE_ANGLE]
    cdef double new = theta + params[PAR_TOPPLE_RATE] * dt
    cdef double ax, ay, rx, ry, rz, norm
    cdef double rot[3]
    cdef double q[4]
    cdef double e[4]
    cdef int d
    if new > _HALF_PI:
        new = _HALF_PI
    obj[OBJ_TOPPLE_STEP_ANGLE] += new - theta
    obj[OBJ_TOPPLE_ANGLE] = new
    ax = obj[OBJ_TOPPLE_AXIS_X]
    ay = obj[OBJ_TOPPLE_AXIS_Y]
    rx = obj[OBJ_POS_PRE + 0] - obj[OBJ_PIVOT + 0]
    ry = obj[OBJ_POS_PRE + 1] - obj[OBJ_PIVOT + 1]
    rz = obj[OBJ_POS_PRE + 2] - obj[OBJ_PIVOT + 2]
    _rotate_about_axis(ax, ay, 0.0, new, rx, ry, rz, rot)
    obj[OBJ_POS_X] = obj[OBJ_PIVOT + 0] + rot[0]
    obj[OBJ_POS_Y] = obj[OBJ_PIVOT + 1] + rot[1]
    obj[OBJ_POS_Z] = obj[OBJ_PIVOT + 2] + rot[2]
    _quat_axis_angle(ax, ay, 0.0, new, q)
    _quat_mul(q[0], q[1], q[2], q[3],
              obj[OBJ_QPRE + 0], obj[OBJ_QPRE + 1], obj[OBJ_QPRE + 2], obj[OBJ_QPRE + 3],
              e)
    norm = sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2] + e[3] * e[3])
    for d in range(4):
        obj[OBJ_QEXP + d] = e[d] / norm
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


# --- dynamics -----------------------------------------------------------------------

cdef void _write_exposed(double[::1] obj, double* nx, double* ny, double* nz) nogil:
    cdef double a = obj[OBJ_PLANE_A]
    cdef double b = obj[OBJ_PLANE_B]
    cdef double norm = sqrt(1.0 + a * a + b * b)
    cdef double s, angle, qn
    cdef double t[4]
    cdef double e[4]
    cdef int d
    nx[0] = -a / norm
    ny[0] = -b / norm
    nz[0] = 1.0 / norm
    s = sqrt(nx[0] * nx[0] + ny[0] * ny[0])
    if s < 1e-15:
        t[0] = 1.0
        t[1] = 0.0
        t[2] = 0.0
        t[3] = 0.0
    else:
        angle = atan2(s, nz[0])
        _quat_axis_angle(-ny[0] / s, nx[0] / s, 0.0, angle, t)
    _quat_mul(t[0], t[1], t[2], t[3],
              obj[OBJ_QBASE + 0], obj[OBJ_QBASE + 1], obj[OBJ_QBASE + 2], obj[OBJ_QBASE + 3],
              e)
    qn = sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2] + e[3] * e[3])
    for d in range(4):
        obj[OBJ_QEXP + d] = e[d] / qn


cdef void _place_on_plane(double[::1] obj, double nx, double ny, double nz) nogil:
    cdef double hh = obj[OBJ_HALF_HEIGHT]
    cdef double bx = obj[OBJ_POS_X] - hh * nx
    cdef double by = obj[OBJ_POS_Y] - hh * ny
    obj[OBJ_POS_Z] = obj[OBJ_PLANE_A] * bx + obj[OBJ_PLANE_B] * by + obj[OBJ_PLANE_C] + hh * nz
    obj[OBJ_NPREV + 0] = nx
    obj[OBJ_NPREV + 1] = ny
    obj[OBJ_NPREV + 2] = nz


cdef void _slide(double[::1] obj, double[::1] params, double dt,
                 double nx, double ny, double nz) nogil:
    cdef double g = params[PAR_GRAVITY]
    cdef double mu = params[PAR_FRICTION_MU]
    cdef double v_stick = params[PAR_V_STICK]
    cdef double a = obj[OBJ_PLANE_A]
    cdef double b = obj[OBJ_PLANE_B]
    cdef double slope = sqrt(a * a + b * b)
    cdef double gx = g * nx
    cdef double gy = g * ny
    cdef double vx = obj[OBJ_VEL_X]
    cdef double vy = obj[OBJ_VEL_Y]
    cdef double speed = sqrt(vx * vx + vy * vy)
    cdef double fmag, pull, fx, fy, nvx, nvy
    if speed < v_stick and slope <= mu:
        vx = 0.0
        vy = 0.0
    else:
        fmag = mu * g * nz
        pull = sqrt(gx * gx + gy * gy)
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


cdef int _border_status(double[::1] obj, double[::1] params) nogil:
    cdef double ext = params[PAR_GRID_N] * params[PAR_PITCH]
    cdef double x = obj[OBJ_POS_X]
    cdef double y = obj[OBJ_POS_Y]
    if x < 0.0 or x > ext or y < 0.0 or y > ext:
        return STATUS_OUT_OF_BORDER
    return STATUS_OK


# --- entry points --------------------------------------------------------------------

cdef int _substep(double[:, ::1] heights, double[:, ::1] targets, double[::1] obj,
                  double[:, ::1] footprint, double[:, ::1] forces,
                  double[::1] params, Scratch* s) nogil:
    cdef double dt = params[PAR_SIM_DT]
    cdef int n = <int> params[PAR_GRID_N]
    cdef int status, nc
    cdef double nx, ny, nz
    _servo(heights, targets, params[PAR_MAX_SPEED] * dt, params[PAR_JOINT_RANGE], n)
    if obj[OBJ_TOPPLE_ACTIVE] != 0.0:
        _advance_topple(obj, footprint, params, dt)
        return _border_status(obj, params)
    nc = 0
    status = _solve_support(heights, obj, footprint, forces, params, s, &nc)
    if status != STATUS_OK:
        return status
    _write_exposed(obj, &nx, &ny, &nz)
    if _maybe_start_topple(obj, s, nc, params):
        return _border_status(obj, params)
    _slide(obj, params, dt, nx, ny, nz)
    _place_on_plane(obj, nx, ny, nz)
    return _border_status(obj, params)


def control_step(double[:, ::1] heights, double[:, ::1] targets,
                 double[:, ::1] deltas, int win_i, int win_j,
                 double[::1] obj, double[:, ::1] footprint,
                 double[:, ::1] forces, double[::1] params):
    """Apply one control command and run the physics substeps (see _simcore_py)."""
    cdef double jr = params[PAR_JOINT_RANGE]
    cdef int substeps = <int> params[PAR_SUBSTEPS]
    cdef int n = <int> params[PAR_GRID_N]
    cdef int kmax = footprint.shape[0]
    cdef int status = STATUS_OK
    cdef int i, j, u
    cdef double t
    cdef Scratch s
    if not _alloc_scratch(&s, n * n, kmax):
        _free_scratch(&s)
        raise MemoryError("physics scratch allocation failed")
    try:
        with nogil:
            for i in range(5):
                for j in range(5):
                    t = targets[win_i + i, win_j + j] + deltas[i, j]
                    if t < 0.0:
                        t = 0.0
                    elif t > jr:
                        t = jr
                    targets[win_i + i, win_j + j] = t
            obj[OBJ_TOPPLE_STEP_ANGLE] = 0.0
            for u in range(substeps):
                status = _substep(heights, targets, obj, footprint, forces, params, &s)
                if status != STATUS_OK:
                    break
    finally:
        _free_scratch(&s)
    return status


def settle(double[:, ::1] heights, double[::1] obj, double[:, ::1] footprint,
           double[:, ::1] forces, double[::1] params):
    """Static placement used at reset (see _simcore_py.settle)."""
    cdef int n = <int> params[PAR_GRID_N]
    cdef int kmax = footprint.shape[0]
    cdef int status, nc
    cdef double nx, ny, nz
    cdef Scratch s
    if not _alloc_scratch(&s, n * n, kmax):
        _free_scratch(&s)
        raise MemoryError("physics scratch allocation failed")
    try:
        with nogil:
            nc = 0
            status = _solve_support(heights, obj, footprint, forces, params, &s, &nc)
            if status == STATUS_OK:
                _write_exposed(obj, &nx, &ny, &nz)
                _place_on_plane(obj, nx, ny, nz)
                status = _border_status(obj, params)
    finally:
        _free_scratch(&s)
    return status
