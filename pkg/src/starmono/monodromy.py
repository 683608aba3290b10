"""Monodromy of the flat connections: from rational to multiplicative data.

Conventions (fixed once, validated against the defining relations):

  * the transport operator maps the fiber at the start of a path to the
    fiber at its end; for concatenation "p then q" it composes as
    T(q) @ T(p),
  * generator loops dip below the real axis from a base configuration to
    the right of all punctures; U_k is the transport around puncture k,
  * the braid generator includes the symmetric-group action on the fiber:
    T_i = s_{i,i+1} @ transport(exchange braid of z_i, z_{i+1}),
  * with these choices the product relation holds literally as
    (U_1 .. U_m)(T_1 .. T_{n-1} T_{n-1} .. T_1) = 1 in left-to-right
    matrix order.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .algebra import MatrixRep
from .connection import cyclotomic_connection, kz_connection
from .errors import NotD4, ShapeMismatch
from .params import sahi_parameters_inverse
from .paths import exchange_braid, puncture_loop
from .presentations import hn_presentation, hnl_presentation
from .transport import parallel_transport


def default_base_config(alphas, n, spacing=1.0):
    """Real base configuration to the right of all punctures."""
    right = max(a.real for a in map(complex, alphas))
    pad = max(spacing, 0.5 * (right - min(a.real
                                          for a in map(complex, alphas))))
    return [right + pad + spacing * i for i in range(n)]


@dataclass
class MonodromyData:
    """Monodromy generators of a flat system, with provenance."""

    u_mats: list
    t_mats: list
    alphas: list
    zs: list
    meta: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.u_mats[0].shape[0]


def _loops_monodromy(terms, alphas, zs, n, perm_mats, tol, certify, delta):
    u_mats = []
    steps = 0
    err = 0.0
    for k in range(1, len(alphas) + 1):
        loop = puncture_loop(alphas, zs, k, delta=delta)
        res = parallel_transport(terms, loop, tol=tol, certify=certify)
        u_mats.append(res.matrix)
        steps += res.steps
        err = max(err, res.error_estimate)
    t_mats = []
    for i in range(1, n):
        br = exchange_braid(zs, i)
        res = parallel_transport(terms, br, tol=tol, certify=certify)
        t_mats.append(perm_mats[i - 1] @ res.matrix)
        steps += res.steps
        err = max(err, res.error_estimate)
    return u_mats, t_mats, steps, err


def monodromy_functor(rep: MatrixRep, alphas, nu, zs=None, tol=0.02,
                      certify=False, delta=None) -> MonodromyData:
    """Monodromy of the multi-point system of a rank-n representation.

    Returns U_1..U_m (puncture loops of z_1) and T_1..T_{n-1} (braid
    transport composed with the fiber permutation action).
    """
    graph = rep.meta["graph"]
    n = rep.meta["n"]
    alphas = [complex(a) for a in alphas]
    if len(alphas) != graph.m:
        raise ShapeMismatch(f"need {graph.m} punctures")
    if zs is None:
        zs = default_base_config(alphas, n)
    terms = kz_connection(rep, alphas, nu)
    perm_mats = [rep.gens[f"s_{i}_{i + 1}"] for i in range(1, n)]
    u_mats, t_mats, steps, err = _loops_monodromy(
        terms, alphas, zs, n, perm_mats, tol, certify, delta)
    gamma = rep.meta.get("gamma")
    u_table = None
    if gamma is not None:
        u_table = tuple(tuple(cmath.exp(2j * cmath.pi * complex(x))
                              for x in leg) for leg in gamma)
    return MonodromyData(
        u_mats=u_mats, t_mats=t_mats, alphas=alphas, zs=list(zs),
        meta={"kind": "star", "graph": graph, "n": n, "tol": tol,
              "steps": steps, "error_estimate": err, "nu": complex(nu),
              "t": cmath.exp(-1j * cmath.pi * complex(nu)),
              "u_table": u_table})


def cyclotomic_monodromy(rep: MatrixRep, nu, zs=None, tol=0.02,
                         certify=False, delta=None) -> MonodromyData:
    """Monodromy of the one-pole system of a cyclotomic representation.

    Returns the single U (loop of z_1 around 0) and T_1..T_{n-1}; these
    generate an Ariki-Koike algebra with v_j = exp(2 pi i lambda_j) and
    t = exp(-pi i nu).
    """
    n = rep.meta["n"]
    if zs is None:
        zs = [1.0 + float(i) for i in range(n)]
    terms = cyclotomic_connection(rep, nu)
    perm_mats = [rep.gens[f"s_{i}_{i + 1}"] for i in range(1, n)]
    u_mats, t_mats, steps, err = _loops_monodromy(
        terms, [0j], zs, n, perm_mats, tol, certify, delta)
    lam = rep.meta.get("lam")
    v = None
    if lam is not None:
        v = tuple(cmath.exp(2j * cmath.pi * complex(x)) for x in lam)
    return MonodromyData(
        u_mats=u_mats, t_mats=t_mats, alphas=[0j], zs=list(zs),
        meta={"kind": "cyclotomic", "n": n, "tol": tol, "steps": steps,
              "error_estimate": err, "nu": complex(nu),
              "t": cmath.exp(-1j * cmath.pi * complex(nu)), "v": v})


def monodromy_rep(data: MonodromyData) -> MatrixRep:
    """Package monodromy generators with the presentation they should
    satisfy (multiplicative star algebra or Ariki-Koike)."""
    t = data.meta["t"]
    n = data.meta["n"]
    if data.meta["kind"] == "star":
        graph = data.meta["graph"]
        u = data.meta["u_table"]
        if u is None:
            raise ShapeMismatch("monodromy data carries no u-table")
        pres = hn_presentation(graph, n, u, t)
        gens = {f"U_{k + 1}": m for k, m in enumerate(data.u_mats)}
    else:
        v = data.meta["v"]
        if v is None:
            raise ShapeMismatch("monodromy data carries no v-table")
        pres = hnl_presentation(n, len(v), v, t)
        gens = {"U": data.u_mats[0]}
    for i, m in enumerate(data.t_mats, start=1):
        gens[f"T_{i}"] = m
    return MatrixRep(presentation=pres, gens=gens, dim=data.dim,
                     exact=False, meta=dict(data.meta))


def ariki_koike_x(data: MonodromyData, i=1) -> np.ndarray:
    """The commuting element X_i = T_{i-1}..T_1 U T_1..T_{i-1} (X_n uses
    the full chain T_{n-1}..T_1 U T_1..T_{n-1})."""
    if data.meta["kind"] != "cyclotomic":
        raise ShapeMismatch("X elements live in the one-pole monodromy")
    x = data.u_mats[0]
    for j in range(1, i):
        t = data.t_mats[j - 1]
        x = t @ x @ t
    return x


@dataclass
class SahiReport:
    quad_residuals: dict
    commutator_residuals: dict
    parameters: tuple  # (t0, tn, u0, un, q)

    @property
    def max(self):
        vals = list(self.quad_residuals.values()) \
            + list(self.commutator_residuals.values())
        return max(vals) if vals else 0.0


def sahi_relation_check(data: MonodromyData) -> SahiReport:
    """Verify the double-affine presentation hidden in four-puncture
    monodromy.

    Requires the (2,2,2,2) star and a u-table in the special position
    u_{k1} u_{k2} in {-q^2, -1}.  Checks the quadratic relations of
        T_0 = q^-1 U_1, T_0' = U_2, T_n' = S^-1 U_3 S, T_n = S^-1 U_4 S
    (S = T_1 .. T_{n-1}) and commutativity of the lattice part
        X_1 = q T_0 T_0', X_{i+1} = T_i X_i T_i.
    """
    if data.meta["kind"] != "star" or data.meta["graph"].d != (2, 2, 2, 2):
        raise NotD4("the double-affine check needs the (2,2,2,2) star")
    u = data.meta["u_table"]
    t0, tn, u0, un, q = sahi_parameters_inverse(u)
    n = data.meta["n"]
    dim = data.dim
    eye = np.eye(dim, dtype=complex)
    s = eye
    for tmat in data.t_mats:
        s = s @ tmat
    s_inv = np.linalg.inv(s)
    gens = {
        "T0": data.u_mats[0] / q,
        "T0v": data.u_mats[1],
        "Tnv": s_inv @ data.u_mats[2] @ s,
        "Tn": s_inv @ data.u_mats[3] @ s,
    }
    roots = {"T0": t0, "T0v": u0, "Tnv": un, "Tn": tn}
    quads = {}
    for name, mat in gens.items():
        r = roots[name]
        quads[name] = float(np.linalg.norm(
            (mat - r * eye) @ (mat + eye / r)))
    xs = [q * gens["T0"] @ gens["T0v"]]
    for i in range(1, n):
        t = data.t_mats[i - 1]
        xs.append(t @ xs[-1] @ t)
    comms = {}
    for i in range(n):
        for j in range(i + 1, n):
            comms[f"[X_{i + 1},X_{j + 1}]"] = float(np.linalg.norm(
                xs[i] @ xs[j] - xs[j] @ xs[i]))
    return SahiReport(quad_residuals=quads, commutator_residuals=comms,
                      parameters=(t0, tn, u0, un, q))
