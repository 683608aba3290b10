# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled parallel-transport kernel (Dormand-Prince 5(4)).

Mirrors _kernel_py.transport_path: geometry-driven fixed step schedule
h * mu = s_scale, embedded error accumulation.  The per-stage scalar
work (positions, velocities, pole distances, term coefficients) runs in
C; dense matrix products go through BLAS via numpy.
"""

import numpy as np

cimport cython
cimport numpy as cnp
from libc.complex cimport cabs, cexp, cimag, creal

from .errors import StepUnderflow

cnp.import_array()

cdef double[7] C_NODES
cdef double[7][6] A_TAB
cdef double[7] B5
cdef double[7] BD

C_NODES = [0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0]
_a_py = [
    [0, 0, 0, 0, 0, 0],
    [1 / 5., 0, 0, 0, 0, 0],
    [3 / 40., 9 / 40., 0, 0, 0, 0],
    [44 / 45., -56 / 15., 32 / 9., 0, 0, 0],
    [19372 / 6561., -25360 / 2187., 64448 / 6561., -212 / 729., 0, 0],
    [9017 / 3168., -355 / 33., 46732 / 5247., 49 / 176., -5103 / 18656., 0],
    [35 / 384., 0., 500 / 1113., 125 / 192., -2187 / 6784., 11 / 84.],
]
_b5_py = [35 / 384., 0., 500 / 1113., 125 / 192., -2187 / 6784., 11 / 84., 0.]
_b4_py = [5179 / 57600., 0., 7571 / 16695., 393 / 640., -92097 / 339200.,
          187 / 2100., 1 / 40.]
for _i in range(7):
    B5[_i] = _b5_py[_i]
    BD[_i] = _b5_py[_i] - _b4_py[_i]
    for _j in range(6):
        A_TAB[_i][_j] = _a_py[_i][_j]


cdef void _positions(double complex[:, :] seg, double s,
                     double complex[:] z, double complex[:] dz) noexcept:
    cdef Py_ssize_t c
    cdef int kind
    cdef double complex a, b, cen, e
    cdef double r, th0, th1, dth
    for c in range(seg.shape[0]):
        kind = <int> creal(seg[c, 0])
        if kind == 0:
            z[c] = seg[c, 1]
            dz[c] = 0
        elif kind == 1:
            a = seg[c, 1]
            b = seg[c, 2]
            z[c] = a + (b - a) * s
            dz[c] = b - a
        else:
            cen = seg[c, 1]
            r = creal(seg[c, 2])
            th0 = creal(seg[c, 3])
            th1 = creal(seg[c, 4])
            dth = th1 - th0
            e = cexp(1j * (th0 + dth * s))
            z[c] = cen + r * e
            dz[c] = 1j * dth * r * e


cdef double _mu_and_coeffs(long[:] tco, long[:] tki,
                           double complex[:] tpo,
                           double complex[:] z, double complex[:] dz,
                           double complex[:] coef, bint want_coef) noexcept:
    cdef Py_ssize_t j
    cdef long i
    cdef double complex p
    cdef double d, mu = 0.0
    for j in range(tco.shape[0]):
        i = tco[j]
        if tki[j] == 0:
            p = tpo[j]
        else:
            p = z[<long> creal(tpo[j])]
        d = cabs(z[i] - p)
        if d == 0.0:
            return -1.0
        mu += cabs(dz[i]) / d
        if want_coef:
            coef[j] = dz[i] / (z[i] - p)
    return mu


def transport_path(mats, term_coord, term_kind, term_pole, segments,
                   double s_scale, double h_max=0.05,
                   double min_step=1e-12):
    """Same contract as _kernel_py.transport_path."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] m3 = \
        np.ascontiguousarray(mats, dtype=np.complex128)
    cdef long[:] tco = np.ascontiguousarray(term_coord, dtype=np.int64)
    cdef long[:] tki = np.ascontiguousarray(term_kind, dtype=np.int64)
    cdef double complex[:] tpo = \
        np.ascontiguousarray(term_pole, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] segs = \
        np.ascontiguousarray(segments, dtype=np.complex128)
    cdef Py_ssize_t nterms = m3.shape[0]
    cdef Py_ssize_t n = m3.shape[1]
    cdef Py_ssize_t ncoords = segs.shape[1]
    cdef Py_ssize_t iseg, st, idx, j, a_i, b_i

    cdef cnp.ndarray[cnp.complex128_t, ndim=2] f_arr = \
        np.eye(n, dtype=np.complex128)
    cdef double complex[:, :] f = f_arr
    cdef double err = 0.0
    cdef long nsteps = 0
    cdef double s, h, h_geom, mu, de2
    cdef double complex[:] z = np.empty(ncoords, dtype=np.complex128)
    cdef double complex[:] dz = np.empty(ncoords, dtype=np.complex128)
    cdef double complex[:] coef = np.empty(nterms, dtype=np.complex128)
    cdef double complex[:, :] a_v = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, :, :] ks = \
        np.empty((7, n, n), dtype=np.complex128)
    cdef double complex[:, :] y_v = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, :, :] m_v = m3
    cdef double complex cj, acc, de_ab
    cdef double w
    cdef double complex[:, :, :] segs_v = segs
    cdef double complex[:, :] seg

    for iseg in range(segs.shape[0]):
        seg = segs_v[iseg]
        s = 0.0
        while s < 1.0 - 1e-14:
            _positions(seg, s, z, dz)
            mu = _mu_and_coeffs(tco, tki, tpo, z, dz, coef, False)
            if mu < 0.0:
                raise StepUnderflow("contour hit a pole")
            if mu == 0.0:
                h = 1.0 - s
            else:
                h_geom = s_scale / mu
                if h_geom < min_step:
                    raise StepUnderflow(
                        f"step size {h_geom:.3e} below {min_step:.1e}; the "
                        "contour passes too close to a pole")
                h = min(h_geom, min(h_max, 1.0 - s))
            for st in range(7):
                _positions(seg, s + C_NODES[st] * h, z, dz)
                mu = _mu_and_coeffs(tco, tki, tpo, z, dz, coef, True)
                if mu < 0.0:
                    raise StepUnderflow("contour hit a pole")
                # a_mat = sum_j coef[j] * mats[j]
                for a_i in range(n):
                    for b_i in range(n):
                        a_v[a_i, b_i] = 0
                for j in range(nterms):
                    cj = coef[j]
                    if cj != 0:
                        for a_i in range(n):
                            for b_i in range(n):
                                a_v[a_i, b_i] = a_v[a_i, b_i] \
                                    + cj * m_v[j, a_i, b_i]
                # y = f + h * sum_idx A[st][idx] * ks[idx]
                for a_i in range(n):
                    for b_i in range(n):
                        acc = f[a_i, b_i]
                        for idx in range(st):
                            w = A_TAB[st][idx]
                            if w != 0.0:
                                acc = acc + (h * w) * ks[idx, a_i, b_i]
                        y_v[a_i, b_i] = acc
                # ks[st] = a_mat @ y
                for a_i in range(n):
                    for b_i in range(n):
                        acc = 0
                        for j in range(n):
                            acc = acc + a_v[a_i, j] * y_v[j, b_i]
                        ks[st, a_i, b_i] = acc
            de2 = 0.0
            for a_i in range(n):
                for b_i in range(n):
                    acc = 0
                    de_ab = 0
                    for st in range(7):
                        if B5[st] != 0.0:
                            acc = acc + B5[st] * ks[st, a_i, b_i]
                        if BD[st] != 0.0:
                            de_ab = de_ab + BD[st] * ks[st, a_i, b_i]
                    f[a_i, b_i] = f[a_i, b_i] + h * acc
                    de2 += creal(de_ab) ** 2 + cimag(de_ab) ** 2
            err += h * de2 ** 0.5
            s += h
            nsteps += 1
    return f_arr, err, nsteps
