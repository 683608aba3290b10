"""Flat logarithmic connections attached to representations.

Three builders share the Term encoding of transport.py:

  * the rational multi-point connection of a rank-n representation
    (marked points z_i against fixed punctures alpha_k),
  * its one-pole degeneration for the cyclotomic algebra (pole at 0),
  * the scalar-variable Fuchsian system sum_k x_k / (z - alpha_k).

Flatness of the multi-point systems is certified from the closed-form
mixed partials of the term encoding.
"""

from __future__ import annotations

import itertools

import numpy as np

from .algebra import MatrixRep
from .errors import (RelationResidualTooLarge, ShapeMismatch, SumNotZero)
from .transport import Term


def kz_connection(rep: MatrixRep, alphas, nu):
    """Terms of A_i = sum_k Y_{i,k}/(z_i - alpha_k)
    - sum_{p != i} nu s_{ip}/(z_i - z_p) for a rank-n representation."""
    n = rep.meta["n"]
    m = rep.meta["graph"].m
    if len(alphas) != m:
        raise ShapeMismatch(f"need {m} punctures, got {len(alphas)}")
    nu = complex(nu)
    terms = []
    for i in range(n):
        for k in range(m):
            terms.append(Term(i, ("const", complex(alphas[k])),
                              rep.gens[f"Y_{i + 1}_{k + 1}"]))
        for p in range(n):
            if p != i:
                lo, hi = min(i, p), max(i, p)
                terms.append(Term(i, ("coord", p),
                                  -nu * rep.gens[f"s_{lo + 1}_{hi + 1}"]))
    return terms


def cyclotomic_connection(rep: MatrixRep, nu):
    """Terms of A_i = Y_i/z_i - sum_{p != i} nu s_{ip}/(z_i - z_p) for a
    cyclotomic-algebra representation (all punctures merged at 0)."""
    n = rep.meta["n"]
    nu = complex(nu)
    terms = []
    for i in range(n):
        terms.append(Term(i, ("const", 0j), rep.gens[f"Y_{i + 1}"]))
        for p in range(n):
            if p != i:
                lo, hi = min(i, p), max(i, p)
                terms.append(Term(i, ("coord", p),
                                  -nu * rep.gens[f"s_{lo + 1}_{hi + 1}"]))
    return terms


def fuchsian_connection(mats, alphas, check_sum=True, tol=1e-8):
    """Terms of the one-variable system  sum_k x_k / (z - alpha_k).

    Residue matrices must sum to zero (no pole at infinity in the chosen
    normalization); SumNotZero otherwise.
    """
    if len(mats) != len(alphas):
        raise ShapeMismatch("one residue matrix per puncture required")
    total = sum(np.asarray(x, dtype=complex) for x in mats)
    if check_sum and np.linalg.norm(total) > tol:
        raise SumNotZero(
            f"residues sum to {np.linalg.norm(total):.3e} != 0")
    return [Term(0, ("const", complex(a)), np.asarray(x, dtype=complex))
            for x, a in zip(mats, alphas)]


def _eval_connection(terms, z):
    """A_i matrices at the configuration z (list of coordinates)."""
    ncoords = max(t.coord for t in terms) + 1
    dim = terms[0].mat.shape[0]
    out = [np.zeros((dim, dim), dtype=complex) for _ in range(ncoords)]
    for t in terms:
        p = t.pole[1] if t.pole[0] == "const" else z[t.pole[1]]
        out[t.coord] += t.mat / (z[t.coord] - complex(p))
    return out


def _eval_partials(terms, z):
    """d A_i / d z_j in closed form from the term encoding."""
    ncoords = max(t.coord for t in terms) + 1
    dim = terms[0].mat.shape[0]
    out = [[np.zeros((dim, dim), dtype=complex) for _ in range(ncoords)]
           for _ in range(ncoords)]
    for t in terms:
        i = t.coord
        p = t.pole[1] if t.pole[0] == "const" else z[t.pole[1]]
        g = t.mat / (z[i] - complex(p)) ** 2
        out[i][i] -= g
        if t.pole[0] == "coord":
            out[i][t.pole[1]] += g
    return out


def curvature(terms, z):
    """Largest norm of d_j A_i - d_i A_j + [A_j, A_i] over pairs i < j.

    Zero exactly when the system dF = (sum_i A_i dz_i) F is flat at z.
    """
    a = _eval_connection(terms, z)
    da = _eval_partials(terms, z)
    worst = 0.0
    for i, j in itertools.combinations(range(len(a)), 2):
        f = da[i][j] - da[j][i] + a[i] @ a[j] - a[j] @ a[i]
        worst = max(worst, float(np.linalg.norm(f)))
    return worst


def check_flat(terms, configs, tol=1e-10):
    """Certify flatness at several sample configurations."""
    worst = max(curvature(terms, z) for z in configs)
    if worst > tol:
        raise RelationResidualTooLarge(
            f"curvature {worst:.3e} exceeds {tol:.1e}")
    return worst
