"""JSON helpers for the on-disk formats.

Conventions:
  * complex numbers -> [re, im] pairs of decimal strings,
  * exact rationals -> "p/q" strings,
  * matrices        -> row-major nested lists of complex pairs.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .exactnum import QQc


def _num_to_str(x: Fraction) -> str:
    return str(x)


def scalar_to_json(x):
    """Serialize a scalar (QQc, Fraction, int, float, complex)."""
    if isinstance(x, QQc):
        return [_num_to_str(x.re), _num_to_str(x.im)]
    if isinstance(x, Fraction):
        return [_num_to_str(x), "0"]
    if isinstance(x, int):
        return [str(x), "0"]
    z = complex(x)
    return [repr(z.real), repr(z.imag)]


def scalar_from_json(v):
    """Parse a scalar serialized by scalar_to_json.

    Returns QQc when both parts parse as exact rationals ("p/q" or decimal
    strings without exponent weirdness), otherwise a python complex.
    """
    if isinstance(v, (int, float)):
        return complex(v)
    re_s, im_s = v
    try:
        return QQc(Fraction(str(re_s)), Fraction(str(im_s)))
    except (ValueError, ZeroDivisionError):
        return complex(float(re_s), float(im_s))


def matrix_to_json(m) -> list:
    a = np.asarray(m, dtype=complex)
    return [[scalar_to_json(a[i, j]) for j in range(a.shape[1])]
            for i in range(a.shape[0])]


def matrix_from_json(rows) -> np.ndarray:
    n = len(rows)
    k = len(rows[0]) if n else 0
    out = np.zeros((n, k), dtype=complex)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = complex(scalar_from_json(v))
    return out


def dump_json(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_json(path):
    with open(path) as fh:
        return json.load(fh)
