"""numpy implementation of the stencil kernels.

Fourth-order centred differences on cell-centred grids. Arrays carry the
vector component first: ``u[c, i1, i2, i3]`` in 3D, ``U[c, i]`` in 1D.
``periodic=False`` means values outside the box are zero.
"""
import numpy as np

W1 = ((-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0))
W2 = ((-2, -1.0 / 12.0), (-1, 16.0 / 12.0), (0, -30.0 / 12.0), (1, 16.0 / 12.0), (2, -1.0 / 12.0))


def _shift(f, off, axis, periodic):
    """``g[i] = f[i + off]`` along ``axis``."""
    if off == 0:
        return f
    if periodic:
        return np.roll(f, -off, axis=axis)
    g = np.zeros_like(f)
    n = f.shape[axis]
    src = [slice(None)] * f.ndim
    dst = [slice(None)] * f.ndim
    if off > 0:
        src[axis] = slice(off, n)
        dst[axis] = slice(0, n - off)
    else:
        src[axis] = slice(0, n + off)
        dst[axis] = slice(-off, n)
    g[tuple(dst)] = f[tuple(src)]
    return g


def d1(f, axis, h, periodic=True):
    out = np.zeros_like(f)
    for off, w in W1:
        out += w * _shift(f, off, axis, periodic)
    return out / h


def d2(f, axis, h, periodic=True):
    out = np.zeros_like(f)
    for off, w in W2:
        out += w * _shift(f, off, axis, periodic)
    return out / (h * h)


def gradient(u, h, periodic=True):
    """``G[k, n] = d_n u^k`` for ``u`` of shape (3, n, n, n)."""
    return np.stack([np.stack([d1(u[k], a, h, periodic) for a in range(3)]) for k in range(3)])


def hessian(u, h, periodic=True):
    """``H[j, l, m] = d_l d_m u^j``; diagonal entries use the D2 stencil."""
    n3 = u.shape[1:]
    H = np.empty((3, 3, 3) + n3)
    for j in range(3):
        first = [d1(u[j], a, h, periodic) for a in range(3)]
        for a in range(3):
            H[j, a, a] = d2(u[j], a, h, periodic)
            for b in range(a + 1, 3):
                H[j, a, b] = H[j, b, a] = d1(first[a], b, h, periodic)
    return H


def bilinear_N(B27, G_u, H_u, G_v, H_v):
    """``N(u, v)^i = B^{ijk}_{lmn} (d_l d_m u^j d_n v^k + d_m u^j d_l d_n v^k)``.

    ``B27`` is the (27, 27) matrix ``M[(i,k,n), (j,l,m)] = B[i,j,k,l,m,n]``.
    """
    shp = G_u.shape[2:]
    npts = int(np.prod(shp))
    G_u = G_u.reshape(3, 3, npts)
    G_v = G_v.reshape(3, 3, npts)
    M = (B27 @ H_u.reshape(27, npts)).reshape(3, 3, 3, npts)
    out = np.einsum("iknp,knp->ip", M, G_v)
    M = (B27 @ H_v.reshape(27, npts)).reshape(3, 3, 3, npts)
    # second term: B^{ijk}_{lmn} du^j_m d2v^k_{ln}; swap roles via the pair symmetry of B
    out += np.einsum("iknp,knp->ip", M, G_u)
    return out.reshape((3,) + shp)


def box_rhs(u, c1sq, c2sq, B27, h, periodic, out=None):
    """``A_h u + N_h(u, u)`` for the 3D box (``B27=None`` drops the nonlinearity)."""
    H = hessian(u, h, periodic)
    res = np.empty_like(u) if out is None else out
    lap = H[:, 0, 0] + H[:, 1, 1] + H[:, 2, 2]
    for i in range(3):
        graddiv = H[0, i, 0] + H[1, i, 1] + H[2, i, 2]
        res[i] = c2sq * lap[i] + (c1sq - c2sq) * graddiv
    if B27 is not None:
        G = gradient(u, h, periodic)
        npts = u[0].size
        M = (B27 @ H.reshape(27, npts)).reshape(3, 9, npts)
        res += 2.0 * np.einsum("ikp,kp->ip", M, G.reshape(9, npts)).reshape(u.shape)
    return res


def box_step(u_prev, u, c1sq, c2sq, B27, h, dt, periodic, out=None):
    res = box_rhs(u, c1sq, c2sq, B27, h, periodic)
    if out is None:
        out = np.empty_like(u)
    np.multiply(res, dt * dt, out=out)
    out += 2.0 * u
    out -= u_prev
    return out


def planewave_rhs(U, Axi, bhat, h, out=None):
    """``A(xi) U_ss + bhat d_s(U_s (x) U_s)`` on a periodic 1D lattice."""
    Us = d1(U, 1, h, True)
    Uss = d2(U, 1, h, True)
    res = Axi @ Uss
    if bhat is not None:
        res += 2.0 * np.einsum("ijk,jp,kp->ip", bhat, Uss, Us)
    if out is not None:
        out[...] = res
        return out
    return res


def planewave_step(U_prev, U, Axi, bhat, h, dt, out=None):
    res = planewave_rhs(U, Axi, bhat, h)
    if out is None:
        out = np.empty_like(U)
    np.multiply(res, dt * dt, out=out)
    out += 2.0 * U
    out -= U_prev
    return out
