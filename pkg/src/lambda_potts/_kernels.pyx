# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: boundary-law iteration and exact configuration enumeration."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, fabs

cnp.import_array()


cdef inline void _step(double* u, double a, double b, double c, double d,
                       double* num) noexcept nogil:
    num[0] = u[2] * b * d + u[3] * c + u[4] * b
    num[1] = u[5] * a * d + u[6] * b + u[7] * c
    num[2] = c + u[0] * b * d + u[1] * a
    num[3] = u[2] * b + u[3] * c * d + u[4] * b
    num[4] = u[5] * a + u[6] * b * d + u[7] * c
    num[5] = c + u[0] * b + u[1] * a * d
    num[6] = u[2] * b + u[3] * c + u[4] * b * d
    num[7] = u[5] * a + u[6] * b + u[7] * c * d


def numerators(u, a, b, c, d):
    u = np.ascontiguousarray(u, dtype=np.float64)
    flat = u.reshape(-1, 8)
    out = np.empty_like(flat)
    cdef double[:, ::1] uv = flat
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t i
    for i in range(uv.shape[0]):
        _step(&uv[i, 0], a, b, c, d, &ov[i, 0])
    return out.reshape(u.shape)


def damped_iterate(v, weights, int k, double t, int maxiter, double tol):
    cdef double a = weights[0], b = weights[1], c = weights[2], d = weights[3]
    out = np.array(v, dtype=np.float64, copy=True, order="C")
    cdef double[:, ::1] vv = out
    cdef Py_ssize_t n = vv.shape[0], i, j
    iters = np.zeros(n, dtype=np.int64)
    done = np.zeros(n, dtype=np.bool_)
    cdef long long[::1] it_v = iters
    cdef cnp.npy_bool[::1] done_v = done
    cdef double u[8]
    cdef double num[8]
    cdef double den, logden, new, step
    cdef int it
    with nogil:
        for i in range(n):
            for it in range(1, maxiter + 1):
                for j in range(8):
                    u[j] = exp(vv[i, j])
                _step(u, a, b, c, d, num)
                den = u[0] * b + u[1] * a + c * d
                logden = log(den)
                step = 0.0
                for j in range(8):
                    new = (1.0 - t) * vv[i, j] + t * k * (log(num[j]) - logden)
                    if fabs(new - vv[i, j]) > step:
                        step = fabs(new - vv[i, j])
                    vv[i, j] = new
                it_v[i] = it
                if step < tol:
                    done_v[i] = 1
                    break
    return out, iters, done


def log_weights(parent, grandparent, pair_tab, double nnn):
    """Built digit by digit: adding vertex v extends the sums over digits < v.

    Parents and grandparents precede their descendants in BFS order, so the
    terms brought in by vertex v only read lower digits.
    """
    cdef long long[::1] par = np.ascontiguousarray(parent, dtype=np.int64)
    cdef long long[::1] gp = np.ascontiguousarray(grandparent, dtype=np.int64)
    cdef double[:, :, ::1] tab = np.ascontiguousarray(pair_tab, dtype=np.float64)
    cdef Py_ssize_t m = par.shape[0]
    cdef Py_ssize_t total = <Py_ssize_t>(3 ** int(m))
    out = np.zeros(total, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t v, j, size = 1, pp, gg, pstride, gstride
    cdef int s, ds_p, ds_g
    cdef double extra
    for v in range(1, m):
        if par[v] < 0 or par[v] >= v or gp[v] >= v:
            raise ValueError("vertices must be listed after their ancestors")
    with nogil:
        size = 3
        for v in range(1, m):
            pp = par[v]
            gg = gp[v]
            pstride = 1
            for j in range(pp):
                pstride *= 3
            gstride = 1
            if gg >= 0:
                for j in range(gg):
                    gstride *= 3
            for s in range(2, -1, -1):
                for j in range(size):
                    ds_p = (j // pstride) % 3
                    extra = tab[v, ds_p, s]
                    if gg >= 0:
                        ds_g = (j // gstride) % 3
                        if ds_g == s:
                            extra = extra + nnn
                    ov[s * size + j] = ov[j] + extra
            size *= 3
    return out


def marginal_sum(weights, Py_ssize_t inner):
    """Neumaier-compensated sums over the outer digits."""
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t outer = w.shape[0] // inner, i, o
    out = np.zeros(inner, dtype=np.float64)
    comp = np.zeros(inner, dtype=np.float64)
    cdef double[::1] s = out
    cdef double[::1] cc = comp
    cdef double x, tsum
    with nogil:
        for o in range(outer):
            for i in range(inner):
                x = w[o * inner + i]
                tsum = s[i] + x
                if fabs(s[i]) >= fabs(x):
                    cc[i] += (s[i] - tsum) + x
                else:
                    cc[i] += (x - tsum) + s[i]
                s[i] = tsum
    return out + comp
