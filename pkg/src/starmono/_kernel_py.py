"""Pure-numpy parallel-transport kernel (Dormand-Prince 5(4)).

The connection generator along a path segment is a linear combination

    A(s) = sum_j  (dz_{i_j}/ds) / (z_{i_j}(s) - p_j(s)) * M_j

with p_j either a constant pole or another moving coordinate.  Steps are
chosen from the geometry alone:  h * mu(s) = s_scale with
mu = sum_j |dz_{i_j}| / |z_{i_j} - p_j|,  so the transported matrix is a
smooth function of the M_j and the accumulated error scales like
s_scale^5.  The embedded fourth-order solution provides a running error
estimate.

Motions are encoded per segment and coordinate as 5 complex slots:
kind (0 fixed / 1 line / 2 arc) followed by the motion parameters.
"""

from __future__ import annotations

import numpy as np

from .errors import StepUnderflow

# Dormand-Prince coefficients
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
       187 / 2100, 1 / 40)
_BD = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))


def _positions(seg_enc, s):
    """(z, dz) arrays for all coordinates at local time s of one segment."""
    ncoords = seg_enc.shape[0]
    z = np.empty(ncoords, dtype=complex)
    dz = np.empty(ncoords, dtype=complex)
    for c in range(ncoords):
        kind = int(seg_enc[c, 0].real)
        if kind == 0:
            z[c] = seg_enc[c, 1]
            dz[c] = 0.0
        elif kind == 1:
            a, b = seg_enc[c, 1], seg_enc[c, 2]
            z[c] = a + (b - a) * s
            dz[c] = b - a
        else:
            cen = seg_enc[c, 1]
            r = seg_enc[c, 2].real
            th0 = seg_enc[c, 3].real
            th1 = seg_enc[c, 4].real
            dth = th1 - th0
            e = np.exp(1j * (th0 + dth * s))
            z[c] = cen + r * e
            dz[c] = 1j * dth * r * e
    return z, dz


def _coeffs(term_coord, term_kind, term_pole, z, dz):
    """Scalar weights dz_i / (z_i - p) of each connection term."""
    nterms = len(term_coord)
    out = np.empty(nterms, dtype=complex)
    for j in range(nterms):
        i = term_coord[j]
        if term_kind[j] == 0:
            p = term_pole[j]
        else:
            p = z[int(term_pole[j].real)]
        out[j] = dz[i] / (z[i] - p)
    return out


def _mu(term_coord, term_kind, term_pole, z, dz):
    mu = 0.0
    for j in range(len(term_coord)):
        i = term_coord[j]
        if term_kind[j] == 0:
            p = term_pole[j]
        else:
            p = z[int(term_pole[j].real)]
        d = abs(z[i] - p)
        if d == 0.0:
            return np.inf
        mu += abs(dz[i]) / d
    return mu


def transport_path(mats, term_coord, term_kind, term_pole, segments,
                   s_scale, h_max=0.05, min_step=1e-12):
    """Transport the identity along all segments; returns (F, err, nsteps).

    mats: (nterms, N, N) complex; term_coord/term_kind int arrays;
    term_pole complex (constant pole value, or coordinate index in the
    real part when term_kind == 1); segments: (nseg, ncoords, 5) complex.
    """
    mats = np.ascontiguousarray(mats, dtype=complex)
    n = mats.shape[1]
    f = np.eye(n, dtype=complex)
    err = 0.0
    nsteps = 0
    ks = [None] * 7
    for seg_enc in segments:
        s = 0.0
        while s < 1.0 - 1e-14:
            z, dz = _positions(seg_enc, s)
            mu = _mu(term_coord, term_kind, term_pole, z, dz)
            if mu == 0.0:
                h = 1.0 - s
            else:
                h_geom = s_scale / mu
                if h_geom < min_step:
                    raise StepUnderflow(
                        f"step size {h_geom:.3e} below {min_step:.1e}; the "
                        "contour passes too close to a pole")
                h = min(h_geom, h_max, 1.0 - s)
            for st in range(7):
                zs, dzs = _positions(seg_enc, s + _C[st] * h)
                coef = _coeffs(term_coord, term_kind, term_pole, zs, dzs)
                a_mat = np.tensordot(coef, mats, axes=(0, 0))
                y = f
                row = _A[st]
                for idx in range(len(row)):
                    if row[idx]:
                        y = y + (h * row[idx]) * ks[idx]
                ks[st] = a_mat @ y
            df = np.zeros_like(f)
            de = np.zeros_like(f)
            for st in range(7):
                if _B5[st]:
                    df = df + _B5[st] * ks[st]
                if _BD[st]:
                    de = de + _BD[st] * ks[st]
            f = f + h * df
            err += h * float(np.linalg.norm(de))
            s += h
            nsteps += 1
    return f, err, nsteps
