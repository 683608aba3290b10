"""Parallel transport of flat connections along configuration paths.

The compiled kernel is used when available; setting STARMONO_PURE_PYTHON=1
in the environment forces the pure-numpy fallback.  Both expose the same
``transport_path`` contract and produce matching results.

The ``tol`` knob sets the geometric step density (h * mu = c0 * tol with
mu the summed pole proximity rate), so the fifth-order accumulated error
scales like tol^5: halving tol buys a factor of 32.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeMismatch, ToleranceNotMet
from .paths import ConfigPath

if os.environ.get("STARMONO_PURE_PYTHON"):
    from . import _kernel_py as _kernel
    BACKEND = "python"
else:
    try:
        from . import _kernel_cy as _kernel
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - build-environment dependent
        from . import _kernel_py as _kernel
        BACKEND = "python"


@dataclass(frozen=True)
class Term:
    """One summand  M * dz_i / (z_i - p)  of a logarithmic connection."""

    coord: int
    pole: tuple  # ("const", value) or ("coord", index)
    mat: np.ndarray


@dataclass
class TransportResult:
    matrix: np.ndarray
    error_estimate: float
    steps: int
    backend: str
    meta: dict = field(default_factory=dict)


def encode_terms(terms):
    mats = np.array([np.asarray(t.mat, dtype=complex) for t in terms])
    coord = np.array([t.coord for t in terms], dtype=np.int64)
    kind = np.array([0 if t.pole[0] == "const" else 1 for t in terms],
                    dtype=np.int64)
    pole = np.array([complex(t.pole[1]) if t.pole[0] == "const"
                     else complex(t.pole[1]) for t in terms],
                    dtype=complex)
    return mats, coord, kind, pole


def encode_path(path: ConfigPath):
    nseg = len(path.segments)
    enc = np.zeros((nseg, path.ncoords, 5), dtype=complex)
    for a, motions in enumerate(path.segments):
        for c, m in enumerate(motions):
            if m[0] == "fixed":
                enc[a, c, 0] = 0
                enc[a, c, 1] = m[1]
            elif m[0] == "line":
                enc[a, c, 0] = 1
                enc[a, c, 1] = m[1]
                enc[a, c, 2] = m[2]
            elif m[0] == "arc":
                enc[a, c, 0] = 2
                enc[a, c, 1] = m[1]
                enc[a, c, 2] = m[2]
                enc[a, c, 3] = m[3]
                enc[a, c, 4] = m[4]
            else:
                raise ShapeMismatch(f"unknown motion {m[0]!r}")
    return enc


def parallel_transport(terms, path: ConfigPath, tol=0.02, c0=1.0,
                       h_max=0.05, certify=False, cert_factor=4.0,
                       cert_tol=1e-8) -> TransportResult:
    """Solve F' = A(s) F along the path starting from the identity.

    With ``certify`` the transport is repeated at tol/cert_factor and the
    two results must agree within cert_tol (ToleranceNotMet otherwise);
    the finer matrix is returned.
    """
    if not terms:
        raise ShapeMismatch("connection has no terms")
    ncoords = max(t.coord for t in terms) + 1
    for t in terms:
        if t.pole[0] == "coord" and t.pole[1] >= path.ncoords:
            raise ShapeMismatch("term references a missing coordinate")
    if ncoords > path.ncoords:
        raise ShapeMismatch("connection references a missing coordinate")
    mats, coord, kind, pole = encode_terms(terms)
    enc = encode_path(path)
    f, err, steps = _kernel.transport_path(mats, coord, kind, pole, enc,
                                           c0 * tol, h_max)
    result = TransportResult(matrix=f, error_estimate=err, steps=steps,
                             backend=BACKEND,
                             meta={"tol": tol, "c0": c0})
    if certify:
        f2, err2, steps2 = _kernel.transport_path(
            mats, coord, kind, pole, enc, c0 * tol / cert_factor, h_max)
        diff = float(np.linalg.norm(f - f2))
        if diff > cert_tol:
            raise ToleranceNotMet(
                f"transport at tol and tol/{cert_factor:g} differ by "
                f"{diff:.3e} > {cert_tol:.1e}")
        result = TransportResult(matrix=f2, error_estimate=err2,
                                 steps=steps2, backend=BACKEND,
                                 meta={"tol": tol / cert_factor, "c0": c0,
                                       "certified_diff": diff})
    return result
