# cython: language_level=3
"""Compiled ridge moment kernel; same partition and rules as ``_ridge_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport ceil, exp, fabs, pow, sin, sqrt, M_PI, INFINITY

cnp.import_array()

cdef enum:
    MAXCUT = 128

cdef inline double _phi(int kind, const double* prm, double s) noexcept nogil:
    cdef double h0, h1, h2, t
    cdef int d, k
    if kind == 0:
        t = fabs(s)
        if t > prm[2]:
            t = prm[2]
        return prm[0] * pow(t, prm[1])
    elif kind == 1:
        return prm[0] * sin(prm[1] * s + prm[2])
    else:
        d = <int>prm[1]
        h0 = 1.0
        h1 = s
        if d == 0:
            h1 = 1.0
        else:
            for k in range(1, d):
                h2 = s * h1 - k * h0
                h0 = h1
                h1 = h2
        if d % 2 == 1:
            h1 = -h1
        return prm[0] * h1 * exp(-0.5 * s * s)


def ridge_moments(int kind, double[::1] params, double[::1] bps, signed char[::1] sing,
                  double[::1] a, double[::1] b, double half_width, int n_fixed,
                  double[::1] gl_x, double[::1] gl_w, double[::1] ts_x, double[::1] ts_w,
                  int nmom=4, double scale=INFINITY, int max_fixed=96):
    """Hermite moments E[phi(a + b eta) He_k(eta)] for a built-in profile kind.

    Returns ``(moments, mass)``, both of shape (N, nmom).
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef int nb = bps.shape[0]
    cdef int ncut, nf
    if max_fixed + 1 + nb > MAXCUT:
        raise ValueError("too many breakpoints for the compiled kernel")
    if nmom < 1 or nmom > 6:
        raise ValueError("nmom must be in 1..6")
    out_arr = np.zeros((n, nmom))
    mass_arr = np.zeros((n, nmom))
    cdef double[:, ::1] out = out_arr
    cdef double[:, ::1] mass = mass_arr
    cdef double cuts[MAXCUT]
    cdef int flags[MAXCUT]
    cdef double acc[6]
    cdef double macc[6]
    cdef double he[6]
    cdef double* prm = &params[0]
    cdef double inv = 1.0 / sqrt(2.0 * M_PI)
    cdef Py_ssize_t i, j, q
    cdef int k, m, nq, fl
    cdef double ai, bi, e, lo, hi, ell, eta, val, base, tmp
    cdef const double* fx
    cdef const double* fw
    with nogil:
        for i in range(n):
            ai = a[i]
            bi = b[i]
            if bi <= 0.0:
                val = _phi(kind, prm, ai)
                out[i, 0] = val
                mass[i, 0] = fabs(val)
                continue
            nf = n_fixed
            if bi > scale:
                nf = <int>ceil(n_fixed * (bi / scale))
                if nf > max_fixed:
                    nf = max_fixed
            ncut = nf + 1 + nb
            for j in range(nf + 1):
                cuts[j] = -half_width + 2.0 * half_width * j / nf
                flags[j] = 0
            ell = 2.0 * half_width / nf
            for j in range(nb):
                e = (bps[j] - ai) / bi
                if e < -half_width:
                    e = -half_width
                elif e > half_width:
                    e = half_width
                cuts[nf + 1 + j] = e
                flags[nf + 1 + j] = sing[j]
                if sing[j] and fabs(e) < half_width:
                    for m in range(1, nf):
                        if fabs(cuts[m] - e) < 0.5 * ell:
                            cuts[m] = e
                            flags[m] = 1
            # stable insertion sort (matches numpy's stable argsort)
            for j in range(1, ncut):
                tmp = cuts[j]
                fl = flags[j]
                m = <int>j - 1
                while m >= 0 and cuts[m] > tmp:
                    cuts[m + 1] = cuts[m]
                    flags[m + 1] = flags[m]
                    m -= 1
                cuts[m + 1] = tmp
                flags[m + 1] = fl
            for j in range(ncut):
                if flags[j] and fabs(cuts[j]) >= half_width:
                    flags[j] = 0
            for k in range(nmom):
                acc[k] = 0.0
                macc[k] = 0.0
            for j in range(ncut - 1):
                lo = cuts[j]
                hi = cuts[j + 1]
                if hi <= lo:
                    continue
                ell = hi - lo
                if flags[j] or flags[j + 1]:
                    fx = &ts_x[0]
                    fw = &ts_w[0]
                    nq = ts_x.shape[0]
                else:
                    fx = &gl_x[0]
                    fw = &gl_w[0]
                    nq = gl_x.shape[0]
                for q in range(nq):
                    eta = lo + ell * fx[q]
                    val = _phi(kind, prm, ai + bi * eta)
                    base = val * exp(-0.5 * eta * eta) * fw[q] * ell * inv
                    he[0] = 1.0
                    if nmom > 1:
                        he[1] = eta
                    for k in range(2, nmom):
                        he[k] = eta * he[k - 1] - (k - 1) * he[k - 2]
                    for k in range(nmom):
                        acc[k] += base * he[k]
                        macc[k] += fabs(base * he[k])
            for k in range(nmom):
                out[i, k] = acc[k]
                mass[i, k] = macc[k]
    return out_arr, mass_arr
