# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled stencil kernels. Same signatures and stencils as ``_kernels_py``."""
import numpy as np

cdef double[4] W1 = [1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0]
cdef int[4] O1 = [-2, -1, 1, 2]
cdef double[5] W2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0]


def _offsets(int n, bint periodic):
    """Row ``o + 2`` holds the index of ``i + o`` (or -1 outside a zero box)."""
    tbl = np.empty((5, n), dtype=np.intc)
    cdef int[:, ::1] t = tbl
    cdef int o, i, j
    for o in range(-2, 3):
        for i in range(n):
            j = i + o
            if periodic:
                j = j % n
                if j < 0:
                    j += n
            elif j < 0 or j >= n:
                j = -1
            t[o + 2, i] = j
    return tbl


cdef void _d1_axis(double[:, :, ::1] f, double[:, :, ::1] g, int[:, ::1] ix, int axis, double ih) nogil:
    """``g = D1 f`` along ``axis`` (index table ``ix`` encodes the boundary)."""
    cdef int n = f.shape[0]
    cdef int p, q, r, k, j
    cdef double acc, v
    for p in range(n):
        for q in range(n):
            for r in range(n):
                acc = 0.0
                for k in range(4):
                    if axis == 0:
                        j = ix[2 + O1[k], p]
                        v = f[j, q, r] if j >= 0 else 0.0
                    elif axis == 1:
                        j = ix[2 + O1[k], q]
                        v = f[p, j, r] if j >= 0 else 0.0
                    else:
                        j = ix[2 + O1[k], r]
                        v = f[p, q, j] if j >= 0 else 0.0
                    acc = acc + W1[k] * v
                g[p, q, r] = acc * ih


cdef void _d2_axis(double[:, :, ::1] f, double[:, :, ::1] g, int[:, ::1] ix, int axis, double ih2) nogil:
    cdef int n = f.shape[0]
    cdef int p, q, r, k, j
    cdef double acc, v
    for p in range(n):
        for q in range(n):
            for r in range(n):
                acc = 0.0
                for k in range(5):
                    if axis == 0:
                        j = ix[k, p]
                        v = f[j, q, r] if j >= 0 else 0.0
                    elif axis == 1:
                        j = ix[k, q]
                        v = f[p, j, r] if j >= 0 else 0.0
                    else:
                        j = ix[k, r]
                        v = f[p, q, j] if j >= 0 else 0.0
                    acc = acc + W2[k] * v
                g[p, q, r] = acc * ih2


# unique second-derivative slots (l, m) with l <= m, in the order stored in Hu
cdef int[6] PL = [0, 1, 2, 0, 0, 1]
cdef int[6] PM = [0, 1, 2, 1, 2, 2]


def box_rhs(u, double c1sq, double c2sq, B27, double h, bint periodic, out=None):
    cdef double[:, :, :, ::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef int n = uv.shape[1]
    if not (uv.shape[1] == uv.shape[2] == uv.shape[3]):
        raise ValueError("box kernels need a cubic grid")
    if out is None:
        out = np.empty((3, n, n, n))
    cdef double[:, :, :, ::1] ov = out
    cdef int[:, ::1] ix = _offsets(n, periodic)
    cdef bint nonlinear = B27 is not None
    cdef double ih = 1.0 / h, ih2 = 1.0 / (h * h)
    Garr = np.empty((9, n, n, n))
    Harr = np.empty((18, n, n, n))
    cdef double[:, :, :, ::1] G = Garr
    cdef double[:, :, :, ::1] Hu = Harr
    cdef double[:, ::1] Bs
    cdef int c, a, s, row, col, p, q, r, i
    if nonlinear:
        # fold the (l, m) symmetry of the Hessian into an 27 x 18 matrix
        Bfull = np.asarray(B27, dtype=np.float64).reshape(27, 3, 3, 3)
        B18 = np.empty((27, 18))
        for c in range(3):
            for s in range(6):
                if PL[s] == PM[s]:
                    B18[:, c * 6 + s] = Bfull[:, c, PL[s], PM[s]]
                else:
                    B18[:, c * 6 + s] = Bfull[:, c, PL[s], PM[s]] + Bfull[:, c, PM[s], PL[s]]
        Bs = B18
    cdef double Hl[18]
    cdef double Gl[9]
    cdef double acc, lap, gd, tot
    with nogil:
        for c in range(3):
            for a in range(3):
                _d1_axis(uv[c], G[c * 3 + a], ix, a, ih)
                _d2_axis(uv[c], Hu[c * 6 + a], ix, a, ih2)
            _d1_axis(G[c * 3 + 0], Hu[c * 6 + 3], ix, 1, ih)
            _d1_axis(G[c * 3 + 0], Hu[c * 6 + 4], ix, 2, ih)
            _d1_axis(G[c * 3 + 1], Hu[c * 6 + 5], ix, 2, ih)
        for p in range(n):
            for q in range(n):
                for r in range(n):
                    for s in range(18):
                        Hl[s] = Hu[s, p, q, r]
                    # A_h u: c2^2 lap u + (c1^2 - c2^2) grad div u
                    for i in range(3):
                        lap = Hl[i * 6 + 0] + Hl[i * 6 + 1] + Hl[i * 6 + 2]
                        gd = 0.0
                        for c in range(3):
                            if c == i:
                                gd = gd + Hl[c * 6 + i]
                            elif c + i == 1:
                                gd = gd + Hl[c * 6 + 3]
                            elif c + i == 2:
                                gd = gd + Hl[c * 6 + 4]
                            else:
                                gd = gd + Hl[c * 6 + 5]
                        ov[i, p, q, r] = c2sq * lap + (c1sq - c2sq) * gd
                    if nonlinear:
                        for s in range(9):
                            Gl[s] = G[s, p, q, r]
                        for i in range(3):
                            tot = 0.0
                            for col in range(9):
                                row = i * 9 + col
                                acc = 0.0
                                for s in range(18):
                                    acc = acc + Bs[row, s] * Hl[s]
                                tot = tot + acc * Gl[col]
                            ov[i, p, q, r] += 2.0 * tot
    return out


def box_step(u_prev, u, double c1sq, double c2sq, B27, double h, double dt, bint periodic, out=None):
    res = box_rhs(u, c1sq, c2sq, B27, h, periodic)
    cdef double[:, :, :, ::1] rv = res
    cdef double[:, :, :, ::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef double[:, :, :, ::1] pv = np.ascontiguousarray(u_prev, dtype=np.float64)
    if out is None:
        out = np.empty_like(res)
    cdef double[:, :, :, ::1] ov = out
    cdef double dt2 = dt * dt
    cdef Py_ssize_t c, p, q, r
    with nogil:
        for c in range(3):
            for p in range(rv.shape[1]):
                for q in range(rv.shape[2]):
                    for r in range(rv.shape[3]):
                        ov[c, p, q, r] = 2.0 * uv[c, p, q, r] - pv[c, p, q, r] + dt2 * rv[c, p, q, r]
    return out


def planewave_rhs(U, Axi, bhat, double h, out=None):
    cdef double[:, ::1] Uv = np.ascontiguousarray(U, dtype=np.float64)
    cdef int n = Uv.shape[1]
    cdef double[:, ::1] Av = np.ascontiguousarray(Axi, dtype=np.float64)
    cdef bint nonlinear = bhat is not None
    cdef double[:, :, ::1] bv
    if nonlinear:
        bv = np.ascontiguousarray(bhat, dtype=np.float64)
    if out is None:
        out = np.empty((3, n))
    cdef double[:, ::1] ov = out
    cdef double ih = 1.0 / h, ih2 = 1.0 / (h * h)
    cdef double Us[3]
    cdef double Uss[3]
    cdef int p, c, k, i, j, jm2, jm1, jp1, jp2
    cdef double acc
    with nogil:
        for p in range(n):
            jm2 = (p - 2 + n) % n
            jm1 = (p - 1 + n) % n
            jp1 = (p + 1) % n
            jp2 = (p + 2) % n
            for c in range(3):
                Us[c] = (W1[0] * Uv[c, jm2] + W1[1] * Uv[c, jm1] + W1[2] * Uv[c, jp1] + W1[3] * Uv[c, jp2]) * ih
                Uss[c] = (W2[0] * Uv[c, jm2] + W2[1] * Uv[c, jm1] + W2[2] * Uv[c, p]
                          + W2[3] * Uv[c, jp1] + W2[4] * Uv[c, jp2]) * ih2
            for i in range(3):
                acc = Av[i, 0] * Uss[0] + Av[i, 1] * Uss[1] + Av[i, 2] * Uss[2]
                if nonlinear:
                    for j in range(3):
                        for k in range(3):
                            acc = acc + 2.0 * bv[i, j, k] * Uss[j] * Us[k]
                ov[i, p] = acc
    return out


def planewave_step(U_prev, U, Axi, bhat, double h, double dt, out=None):
    res = planewave_rhs(U, Axi, bhat, h)
    cdef double[:, ::1] rv = res
    cdef double[:, ::1] uv = np.ascontiguousarray(U, dtype=np.float64)
    cdef double[:, ::1] pv = np.ascontiguousarray(U_prev, dtype=np.float64)
    if out is None:
        out = np.empty_like(res)
    cdef double[:, ::1] ov = out
    cdef double dt2 = dt * dt
    cdef Py_ssize_t c, p
    with nogil:
        for c in range(3):
            for p in range(rv.shape[1]):
                ov[c, p] = 2.0 * uv[c, p] - pv[c, p] + dt2 * rv[c, p]
    return out
