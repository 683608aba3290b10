"""Rank reduction, the Riemann-Hilbert map, and isomonodromic flow.

Two compression maps send star-algebra data to puncture-indexed tuples:

  * the additive map restricts the distinguished-strand generators of a
    rank-n representation to the subspace cut out by triviality of the
    first n-1 strands and the top cyclotomic eigenvalue, producing m
    residue matrices of size n*ell with zero sum,
  * the multiplicative map restricts conjugated monodromy generators to
    the analogous eigenvalue subspace, producing m monodromy matrices.

The Riemann-Hilbert map transports the one-variable Fuchsian system of a
residue tuple around each puncture; with loops based to the right of all
punctures, the product of the monodromies taken in ascending order of
puncture real part (leftmost factor first) is the identity.

The two squares agree: compressing first and solving the Fuchsian system
gives the same multiplicative tuple, up to overall conjugation, as
computing the full monodromy and compressing afterwards.  The flow
module moves one puncture along a cross-ratio path while matching the
trace invariants of the monodromy tuple, which realizes the higher-rank
isomonodromic deformation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .algebra import (MatrixRep, Subspace, isotypic_subspace, nullspace,
                      restricted_operator)
from .connection import fuchsian_connection
from .errors import (ContinuationStall, NoConvergence, NotInvariant,
                     ShapeMismatch, WrongIsotypicDimension)
from .monodromy import MonodromyData, default_base_config
from .paths import puncture_loop
from .transport import parallel_transport

# ---------------------------------------------------------------------------
# compression maps


@dataclass
class PunctureTuple:
    """One matrix per puncture, with the certificates of its construction."""

    matrices: list
    kind: str  # "additive" or "multiplicative"
    subspace: Subspace = None
    leakage: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def size(self):
        return self.matrices[0].shape[0]


def additive_compression(rep: MatrixRep, tol=1e-8) -> PunctureTuple:
    """Residue tuple of a rank-n star representation.

    The carrier subspace V' is the joint eigenspace where s_{ij} = 1 for
    i < j < n and Y_{i,m} = gamma_{m,ell} for i < n; its dimension is
    n * ell.  On V' the compressed generators are
        x_k = Y_{n,k}             for k < m,
        x_m = Y_{n,m} - nu * sum_{j<n} s_{jn},
    and sum_k x_k = 0.
    """
    graph = rep.meta["graph"]
    n = rep.meta["n"]
    nu = complex(rep.meta.get("nu", 0))
    m, ell = graph.m, graph.ell
    gamma = rep.meta.get("gamma")
    if gamma is None:
        raise ShapeMismatch("representation carries no gamma table")
    top = complex(gamma[m - 1][ell - 1])
    conditions = []
    for i in range(1, n):
        for j in range(i + 1, n):
            conditions.append(((f"s_{i}_{j}",), 1))
    for i in range(1, n):
        conditions.append(((f"Y_{i}_{m}",), top))
    if conditions:
        sub = isotypic_subspace(rep, conditions, expected_dim=n * ell,
                                tol=tol)
    else:
        sub = Subspace(basis=np.eye(rep.dim, dtype=complex))
        if rep.dim != n * ell:
            raise WrongIsotypicDimension(
                f"carrier dimension {rep.dim} != {n * ell}")
    mats = []
    leak = 0.0
    for k in range(1, m):
        r, lk = restricted_operator(rep.gens[f"Y_{n}_{k}"], sub, tol=tol)
        mats.append(r)
        leak = max(leak, lk)
    last = rep.gens[f"Y_{n}_{m}"].astype(complex).copy()
    for j in range(1, n):
        last = last - nu * rep.gens[f"s_{j}_{n}"]
    r, lk = restricted_operator(last, sub, tol=tol)
    mats.append(r)
    leak = max(leak, lk)
    return PunctureTuple(matrices=mats, kind="additive", subspace=sub,
                         leakage=leak,
                         meta={"n": n, "graph": graph, "nu": nu})


def multiplicative_compression(data: MonodromyData,
                               tol=1e-6) -> PunctureTuple:
    """Monodromy tuple of star monodromy data.

    The carrier V' is the joint eigenspace where T_i = t for i <= n - 2
    and U_m = u_{m,ell} (no condition when n = 1); its dimension is
    n * ell.  With C = T_{n-1} .. T_1 and D = T_1 .. T_{n-1}, the
    compressed generators are
        X_k = C U_k C^-1   for k < m,
        X_m = C U_m D,
    and X_1 .. X_m = 1 in ascending puncture order.
    """
    if data.meta["kind"] != "star":
        raise ShapeMismatch("multi-puncture monodromy data required")
    graph = data.meta["graph"]
    n = data.meta["n"]
    m, ell = graph.m, graph.ell
    t = data.meta["t"]
    u = data.meta["u_table"]
    if u is None:
        raise ShapeMismatch("monodromy data carries no u-table")
    dim = data.dim
    eye = np.eye(dim, dtype=complex)
    blocks = [data.t_mats[i - 1] - t * eye for i in range(1, n - 1)]
    if n >= 2:
        blocks.append(data.u_mats[m - 1] - complex(u[m - 1][ell - 1]) * eye)
    if blocks:
        basis = nullspace(np.vstack(blocks), tol=tol)
    else:
        basis = np.eye(dim, dtype=complex)
    if basis.shape[1] != n * ell:
        raise WrongIsotypicDimension(
            f"carrier dimension {basis.shape[1]} != {n * ell}")
    sub = Subspace(basis=basis)
    c = eye
    for tm in reversed(data.t_mats):
        c = c @ tm  # T_{n-1} .. T_1 read left to right
    d = eye
    for tm in data.t_mats:
        d = d @ tm
    c_inv = np.linalg.inv(c)
    mats = []
    leak = 0.0
    for k in range(m - 1):
        r, lk = restricted_operator(c @ data.u_mats[k] @ c_inv, sub, tol=tol)
        mats.append(r)
        leak = max(leak, lk)
    r, lk = restricted_operator(c @ data.u_mats[m - 1] @ d, sub, tol=tol)
    mats.append(r)
    leak = max(leak, lk)
    return PunctureTuple(matrices=mats, kind="multiplicative", subspace=sub,
                         leakage=leak,
                         meta={"n": n, "graph": graph, "t": t,
                               "alphas": list(data.alphas)})


# ---------------------------------------------------------------------------
# Riemann-Hilbert map


@dataclass
class RHResult:
    """Monodromy tuple of a residue tuple, with transport certificates."""

    matrices: list
    alphas: list
    zs: list
    meta: dict = field(default_factory=dict)

    @property
    def product_residual(self):
        return self.meta["product_residual"]


def ordered_product(mats, alphas):
    """Product of the per-puncture matrices in ascending order of
    puncture real part, leftmost factor first."""
    order = sorted(range(len(alphas)), key=lambda k: complex(alphas[k]).real)
    size = mats[0].shape[0]
    acc = np.eye(size, dtype=complex)
    for k in order:
        acc = acc @ mats[k]
    return acc


def riemann_hilbert(mats, alphas, zs=None, tol=0.02, delta=None,
                    certify=False, check_sum=True) -> RHResult:
    """Monodromy of  d/dz = sum_k x_k / (z - alpha_k)  around every
    puncture, from a base point to the right of all of them.

    The result records the defect of the ordered product from the
    identity; it converges to zero with the transport tolerance as long
    as the configuration is not too ill-conditioned.
    """
    alphas = [complex(a) for a in alphas]
    if zs is None:
        zs = default_base_config(alphas, 1)
    terms = fuchsian_connection(mats, alphas, check_sum=check_sum)
    out = []
    steps = 0
    err = 0.0
    for k in range(1, len(alphas) + 1):
        loop = puncture_loop(alphas, zs, k, delta=delta)
        res = parallel_transport(terms, loop, tol=tol, certify=certify)
        out.append(res.matrix)
        steps += res.steps
        err = max(err, res.error_estimate)
    size = mats[0].shape[0]
    prod = ordered_product(out, alphas)
    return RHResult(
        matrices=out, alphas=alphas, zs=list(zs),
        meta={"tol": tol, "steps": steps, "error_estimate": err,
              "product_residual": float(np.linalg.norm(
                  prod - np.eye(size)))})


# ---------------------------------------------------------------------------
# conjugacy invariants and matching


def _cyclic_words(m, max_len):
    seen = set()
    words = []
    for length in range(1, max_len + 1):
        for w in itertools.product(range(m), repeat=length):
            canon = min(w[i:] + w[:i] for i in range(length))
            if canon not in seen:
                seen.add(canon)
                words.append(canon)
    return words


def conjugation_invariants(mats, max_len=4):
    """Traces of all products of the tuple up to the given word length,
    one entry per cyclic word, in a fixed deterministic order."""
    m = len(mats)
    size = mats[0].shape[0]
    vals = []
    for w in _cyclic_words(m, max_len):
        acc = np.eye(size, dtype=complex)
        for i in w:
            acc = acc @ mats[i]
        vals.append(np.trace(acc))
    return np.array(vals)


@dataclass
class MatchReport:
    matched: bool
    g: np.ndarray
    residual: float
    g_condition: float


def match_up_to_conjugacy(a_mats, b_mats, tol=1e-6) -> MatchReport:
    """Find g with a_k g = g b_k for all k, certifying simultaneous
    conjugacy.  The intertwiner is the smallest singular direction of the
    stacked Sylvester operators; matched requires both a small relative
    residual and an invertible g."""
    if len(a_mats) != len(b_mats):
        raise ShapeMismatch("tuples must have equal length")
    size = a_mats[0].shape[0]
    eye = np.eye(size)
    blocks = []
    for a, b in zip(a_mats, b_mats):
        if a.shape != (size, size) or b.shape != (size, size):
            raise ShapeMismatch("all matrices must share one square size")
        blocks.append(np.kron(eye, a) - np.kron(b.T, eye))
    stack = np.vstack(blocks)
    _, s, vh = np.linalg.svd(stack)
    rel = float(s[-1] / max(s[0], 1e-300))
    g = vh[-1].conj().reshape(size, size, order="F")
    gs = np.linalg.svd(g, compute_uv=False)
    cond = float(gs[0] / max(gs[-1], 1e-300))
    matched = rel <= tol and cond <= 1.0 / tol
    return MatchReport(matched=matched, g=g, residual=rel, g_condition=cond)


# ---------------------------------------------------------------------------
# the commuting square


@dataclass
class DiagramReport:
    invariant_gap: float
    match: MatchReport
    additive: PunctureTuple
    multiplicative: PunctureTuple
    rh: RHResult


def commuting_diagram_check(rep: MatrixRep, alphas, tol=0.02,
                            match_tol=1e-5) -> DiagramReport:
    """Compare the two routes from a rank-n representation to a
    multiplicative puncture tuple:

      * compress additively, then take Fuchsian monodromy,
      * take the full multi-point monodromy, then compress.

    Both the trace-invariant gap and an explicit intertwiner certify
    agreement up to overall conjugation.
    """
    from .monodromy import monodromy_functor

    nu = complex(rep.meta.get("nu", 0))
    add = additive_compression(rep)
    rh = riemann_hilbert(add.matrices, alphas, tol=tol)
    data = monodromy_functor(rep, alphas, nu, tol=tol)
    mult = multiplicative_compression(data)
    inv_a = conjugation_invariants(rh.matrices)
    inv_b = conjugation_invariants(mult.matrices)
    gap = float(np.max(np.abs(inv_a - inv_b)))
    match = match_up_to_conjugacy(rh.matrices, mult.matrices, tol=match_tol)
    return DiagramReport(invariant_gap=gap, match=match, additive=add,
                         multiplicative=mult, rh=rh)


# ---------------------------------------------------------------------------
# isomonodromic flow


def cross_ratio(alphas):
    """(a4 - a1)(a3 - a2) / ((a3 - a4)(a2 - a1))."""
    a1, a2, a3, a4 = (complex(a) for a in alphas)
    return (a4 - a1) * (a3 - a2) / ((a3 - a4) * (a2 - a1))


def positions_of_cross_ratio(kappa, anchor=6.0):
    """The configuration (0, 1, anchor, kappa') whose cross ratio is
    kappa; the moving puncture is kappa' = kappa * anchor /
    (anchor - 1 + kappa)."""
    kappa = complex(kappa)
    moving = kappa * anchor / (anchor - 1 + kappa)
    return [0j, 1 + 0j, complex(anchor), moving]


@dataclass
class FlowTrajectory:
    """Samples of an isomonodromic deformation over a cross-ratio path."""

    kappas: list
    matrices: list  # one residue tuple per sample
    residuals: list  # matching residual accepted at each sample
    drifts: list  # invariant drift measured at a finer transport tolerance
    target_invariants: np.ndarray
    meta: dict = field(default_factory=dict)

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("kappa_re,kappa_im,residual,drift\n")
            for k, r, d in zip(self.kappas, self.residuals, self.drifts):
                k = complex(k)
                fh.write(f"{k.real:.16e},{k.imag:.16e},{r:.6e},{d:.6e}\n")


def _theta_from_matrices(mats, specs):
    """Recover the gauge parametrization (g_1 = 1) of a residue tuple by
    eigendecomposition, conjugating the whole tuple so the first matrix
    is exactly in diagonal position."""
    size = mats[0].shape[0]

    def gauge_for(x, spec):
        vals, vecs = np.linalg.eig(x)
        cols = []
        used = set()
        for want in np.diag(spec.diagonal()):
            j = min((jj for jj in range(size) if jj not in used),
                    key=lambda jj: abs(vals[jj] - want))
            used.add(j)
            cols.append(vecs[:, j])
        return np.array(cols).T

    g1 = gauge_for(mats[0], specs[0])
    g1_inv = np.linalg.inv(g1)
    conj = [g1_inv @ x @ g1 for x in mats]
    per = 2 * size * size
    theta = np.zeros((len(specs) - 1) * per)
    for k in range(1, len(specs)):
        g = gauge_for(conj[k], specs[k]) - np.eye(size)
        theta[(k - 1) * per:(k - 1) * per + per // 2] = g.real.ravel()
        theta[(k - 1) * per + per // 2:k * per] = g.imag.ravel()
    return theta


def isomonodromic_flow(specs, x0_mats, kappas, anchor=6.0, tol=0.02,
                       fit_tol=1e-7, sum_weight=10.0, max_halvings=6,
                       max_nfev=400) -> FlowTrajectory:
    """Deform a zero-sum residue tuple along a path of cross ratios while
    holding the monodromy trace invariants fixed.

    ``kappas[0]`` is the starting cross ratio, where ``x0_mats`` must
    already solve the zero-sum problem in the classes ``specs``; the
    target invariants are measured there.  At each subsequent sample the
    gauges are refit by least squares against [zero sum; invariant
    match], warm-started from the previous sample; intervals that fail
    to converge are bisected, and ContinuationStall is raised after
    ``max_halvings`` bisections of a single interval.
    """
    from .ds import _gauges_to_matrices

    size = x0_mats[0].shape[0]
    zs = [2.0 * anchor]
    kappas = [complex(k) for k in kappas]

    def invariants_at(mats, kappa, transport_tol):
        rh = riemann_hilbert(mats, positions_of_cross_ratio(kappa, anchor),
                             zs=zs, tol=transport_tol, check_sum=False)
        return conjugation_invariants(rh.matrices)

    target = invariants_at(x0_mats, kappas[0], tol)
    theta = _theta_from_matrices(x0_mats, specs)
    nres = 2 * size * size + 2 * len(target)

    def residual(theta, kappa):
        try:
            _, xs = _gauges_to_matrices(theta, specs, size)
            r1 = sum_weight * sum(xs)
            r2 = invariants_at(xs, kappa, tol) - target
        except np.linalg.LinAlgError:
            return np.full(nres, 1e6)
        return np.concatenate([r1.real.ravel(), r1.imag.ravel(),
                               r2.real, r2.imag])

    r0 = residual(theta, kappas[0])
    start_resid = float(np.linalg.norm(r0))
    if start_resid > fit_tol:
        raise NoConvergence(
            f"starting tuple misses its own invariants by "
            f"{start_resid:.3e}", best_residual=start_resid)
    out_kappas = [kappas[0]]
    out_mats = [[x.copy() for x in x0_mats]]
    out_resid = [start_resid]
    out_drift = [float(np.max(np.abs(
        invariants_at(x0_mats, kappas[0], tol / 2) - target)))]

    for kappa_next in kappas[1:]:
        kappa_prev = out_kappas[-1]
        pending = [kappa_next]
        halvings = 0
        while pending:
            kappa = pending[-1]
            res = least_squares(residual, theta, args=(kappa,),
                                method="trf", xtol=3e-16, ftol=3e-16,
                                gtol=3e-16, max_nfev=max_nfev)
            resid = float(np.linalg.norm(res.fun))
            if resid <= fit_tol:
                theta = res.x
                _, xs = _gauges_to_matrices(theta, specs, size)
                drift = float(np.max(np.abs(
                    invariants_at(xs, kappa, tol / 2) - target)))
                out_kappas.append(kappa)
                out_mats.append(xs)
                out_resid.append(resid)
                out_drift.append(drift)
                kappa_prev = kappa
                pending.pop()
            else:
                halvings += 1
                if halvings > max_halvings:
                    raise ContinuationStall(
                        f"flow stalled between {kappa_prev} and {kappa} "
                        f"(residual {resid:.3e})")
                pending.append((kappa_prev + kappa) / 2)

    return FlowTrajectory(
        kappas=out_kappas, matrices=out_mats, residuals=out_resid,
        drifts=out_drift, target_invariants=target,
        meta={"anchor": anchor, "tol": tol, "fit_tol": fit_tol,
              "zs": zs, "specs": list(specs)})
