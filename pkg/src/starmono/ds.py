"""Additive and multiplicative Deligne-Simpson solvers.

The additive problem asks for matrices x_1..x_m in prescribed conjugacy
classes with x_1 + .. + x_m = 0; the multiplicative problem for X_1..X_m
in prescribed classes with X_1 .. X_m = 1.  Class prescriptions derived
from a star-graph parameter pack encode the expected spectra of rank-n
representations; solvers work over the class parametrization
x_k = g_k L_k g_k^{-1} with gauge g_1 = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .algebra import MatrixRep, nullspace
from .errors import (ContinuationStall, DetObstruction, NoConvergence,
                     NonZeroHbar, RankAmbiguous, ShapeMismatch, SizeMismatch,
                     TraceObstruction)
from .params import MultiplicativeParams, RationalParams, hbar_of
from .presentations import bn_presentation


@dataclass(frozen=True)
class ConjugacyClassSpec:
    """A diagonalizable conjugacy class: eigenvalues with multiplicities."""

    eigenvalues: tuple  # ((value, multiplicity), ...)

    @property
    def size(self) -> int:
        return sum(m for _, m in self.eigenvalues)

    def diagonal(self) -> np.ndarray:
        vals = [complex(v) for v, mult in self.eigenvalues
                for _ in range(int(mult))]
        return np.diag(vals)

    def trace(self) -> complex:
        return sum(complex(v) * m for v, m in self.eigenvalues)

    def det(self) -> complex:
        out = 1 + 0j
        for v, mult in self.eigenvalues:
            out *= complex(v) ** int(mult)
        return out

    def centralizer_dim(self) -> int:
        return sum(int(m) ** 2 for _, m in self.eigenvalues)


def additive_class_specs(params: RationalParams, n: int):
    """Class prescriptions of the additive problem for rank-n data.

    Matrix size N = n * ell.  Leg k < m contributes gamma_{kj} with
    multiplicity n * ell / d_k; the distinguished leg contributes
    lam_ell - nu(n-1) once, lam_ell + nu (n-1 times) and lam_j (j < ell)
    n times each.  Raises NonZeroHbar when the trace obstruction
    sum_k tr x_k = n * hbar is nonzero.
    """
    g = params.graph
    hbar = hbar_of(params)
    if hbar:
        raise NonZeroHbar(f"hbar = {complex(hbar)} != 0: the additive "
                          "problem has no solution")
    ell = g.ell
    specs = []
    for k in range(g.m - 1):
        mult = n * ell // g.d[k]
        specs.append(ConjugacyClassSpec(
            tuple((complex(x), mult) for x in params.gamma[k])))
    lam = [complex(x) for x in params.lam]
    nu = complex(params.nu)
    last = [(lam[-1] - nu * (n - 1), 1)]
    if n > 1:
        last.append((lam[-1] + nu, n - 1))
    last.extend((lam[j], n) for j in range(ell - 1))
    specs.append(ConjugacyClassSpec(tuple(last)))
    return specs


def multiplicative_class_specs(mparams: MultiplicativeParams, n: int,
                               tol=1e-10):
    """Class prescriptions of the multiplicative problem for rank-n data.

    Mirrors the additive prescription with u_{kj} in place of gamma_{kj}
    and v_ell t^{2e} in place of lam_ell - nu e.  Raises DetObstruction
    when prod_k det X_k != 1.
    """
    g = mparams.graph
    ell = g.ell
    specs = []
    for k in range(g.m - 1):
        mult = n * ell // g.d[k]
        specs.append(ConjugacyClassSpec(
            tuple((complex(x), mult) for x in mparams.u[k])))
    v = [complex(x) for x in mparams.v]
    t = complex(mparams.t)
    last = [(v[-1] * t ** (2 * (n - 1)), 1)]
    if n > 1:
        last.append((v[-1] * t ** (-2), n - 1))
    last.extend((v[j], n) for j in range(ell - 1))
    specs.append(ConjugacyClassSpec(tuple(last)))
    det = 1 + 0j
    for spec in specs:
        det *= spec.det()
    if abs(det - 1) > tol:
        raise DetObstruction(f"prod det X_k = {det} != 1")
    return specs


@dataclass
class DSSolution:
    """Matrices solving a Deligne-Simpson problem, with certificates."""

    matrices: list
    specs: list
    residual: float
    multiplicative: bool
    meta: dict = field(default_factory=dict)


def _gauges_to_matrices(theta, specs, size):
    """Unpack the real parameter vector into (g_k, x_k) with g_1 = 1."""
    m = len(specs)
    per = 2 * size * size
    gs = [np.eye(size, dtype=complex)]
    for k in range(1, m):
        chunk = theta[(k - 1) * per:k * per]
        gs.append(np.eye(size, dtype=complex)
                  + (chunk[:per // 2] + 1j * chunk[per // 2:])
                  .reshape(size, size))
    xs = []
    for g, spec in zip(gs, specs):
        xs.append(g @ spec.diagonal() @ np.linalg.inv(g))
    return gs, xs


def _solve_ds(specs, multiplicative, seed, tol, max_starts, spread):
    sizes = {spec.size for spec in specs}
    if len(sizes) != 1:
        raise ShapeMismatch("conjugacy classes have mixed sizes")
    size = sizes.pop()
    if not multiplicative:
        tr = sum(spec.trace() for spec in specs)
        if abs(tr) > 1e-10 * max(1.0, max(abs(spec.trace())
                                          for spec in specs)):
            raise TraceObstruction(f"sum of class traces = {tr} != 0")
    m = len(specs)
    nvar = (m - 1) * 2 * size * size
    rng = np.random.default_rng(seed)

    def fun(theta):
        _, xs = _gauges_to_matrices(theta, specs, size)
        if multiplicative:
            acc = np.eye(size, dtype=complex)
            for x in xs:
                acc = acc @ x
            r = acc - np.eye(size)
        else:
            r = sum(xs)
        return np.concatenate([r.real.ravel(), r.imag.ravel()])

    best = None
    for start in range(max_starts):
        theta0 = spread * rng.standard_normal(nvar)
        res = least_squares(fun, theta0, method="trf", xtol=3e-16,
                            ftol=3e-16, gtol=3e-16, max_nfev=400)
        resid = float(np.linalg.norm(res.fun))
        if best is None or resid < best[0]:
            best = (resid, res.x, start)
        if resid <= tol:
            break
    resid, theta, start = best
    if resid > tol:
        raise NoConvergence(
            f"Deligne-Simpson solve stalled at residual {resid:.3e} "
            f"after {max_starts} starts", best_residual=resid)
    _, xs = _gauges_to_matrices(theta, specs, size)
    return DSSolution(matrices=xs, specs=list(specs), residual=resid,
                      multiplicative=multiplicative,
                      meta={"seed": seed, "start_used": start, "tol": tol})


def solve_additive_ds(specs, seed=0, tol=1e-10, max_starts=12, spread=0.5):
    """Find x_k in the prescribed classes with sum x_k = 0."""
    return _solve_ds(specs, False, seed, tol, max_starts, spread)


def solve_multiplicative_ds(specs, seed=0, tol=1e-10, max_starts=12,
                            spread=0.35):
    """Find X_k in the prescribed classes with X_1 .. X_m = 1."""
    return _solve_ds(specs, True, seed, tol, max_starts, spread)


# ---------------------------------------------------------------------------
# local geometry of the solution set


def _rank_with_guard(sv, rel_cut=1e-7, guard=10.0):
    cut = rel_cut * max(1.0, sv[0] if len(sv) else 0.0)
    near = [s for s in sv if cut / guard < s < cut * guard]
    if near:
        raise RankAmbiguous(
            f"singular value {near[0]:.3e} within a factor {guard:g} of the "
            f"rank cutoff {cut:.3e}")
    return int(np.sum(sv > cut))


@dataclass
class TangentReport:
    kernel_dim: int
    centralizer_sum: int
    tangent_var: int
    moduli: int


def tangent_dimension(solution: DSSolution, rel_cut=1e-7) -> TangentReport:
    """Dimension bookkeeping of the class-constrained variety at a point.

    The linearization sends tangent directions P = (P_1..P_m) of the
    conjugacy-class orbits to the derivative of the moment condition,
    d(sum x_k) = sum [P_k, x_k]  or
    d(prod X_k) = sum X_1..X_{k-1} [P_k, X_k] X_{k+1}..X_m.
    tangent_var = dim ker - sum_k dim Z(x_k) removes the per-class gauge;
    moduli additionally removes simultaneous conjugation (dim N^2 - 1 for
    an irreducible tuple).
    """
    xs = solution.matrices
    size = xs[0].shape[0]
    m = len(xs)
    eye = np.eye(size)
    blocks = []
    for k in range(m):
        if solution.multiplicative:
            left = np.eye(size, dtype=complex)
            for j in range(k):
                left = left @ xs[j]
            right = np.eye(size, dtype=complex)
            for j in range(k + 1, m):
                right = right @ xs[j]
            a, b = left, xs[k] @ right
            a2, b2 = left @ xs[k], right
            blocks.append(np.kron(b.T, a) - np.kron(b2.T, a2))
        else:
            blocks.append(np.kron(xs[k].T, eye) - np.kron(eye, xs[k]))
    lin = np.hstack(blocks)
    sv = np.linalg.svd(lin, compute_uv=False)
    rank = _rank_with_guard(sv, rel_cut=rel_cut)
    kernel = m * size * size - rank
    zsum = sum(spec.centralizer_dim() for spec in solution.specs)
    tangent_var = kernel - zsum
    moduli = tangent_var - (size * size - 1)
    return TangentReport(kernel_dim=kernel, centralizer_sum=zsum,
                         tangent_var=tangent_var, moduli=moduli)


def joint_centralizer_dim(mats, tol=1e-9) -> int:
    """Dimension of {P : [P, x_k] = 0 for all k}; 1 for irreducible tuples."""
    size = mats[0].shape[0]
    eye = np.eye(size)
    blocks = [np.kron(x.T, eye) - np.kron(eye, x) for x in mats]
    return nullspace(np.vstack(blocks), tol=tol).shape[1]


def irreducibility_check(mats, tol=1e-9) -> bool:
    """True when the tuple generates the full matrix algebra.

    Iterates the span of {1} under left multiplication by the tuple until
    stable; irreducible (in the absence of a proper invariant subspace
    certificate, 'generates M_N') iff the span reaches dimension N^2.
    """
    size = mats[0].shape[0]
    basis = [np.eye(size, dtype=complex).reshape(-1) / np.sqrt(size)]
    queue = list(basis)
    while queue and len(basis) < size * size:
        v = queue.pop()
        for x in mats:
            w = (x @ v.reshape(size, size)).reshape(-1)
            for b in basis:
                w = w - (b.conj() @ w) * b
            nw = np.linalg.norm(w)
            if nw > tol:
                w = w / nw
                basis.append(w)
                queue.append(w)
    return len(basis) == size * size


# ---------------------------------------------------------------------------
# continuation of rank-n representations in nu


def _relation_residual_and_jac(gens, relation, unknowns, dim):
    """Value of one relation and its holomorphic Jacobian blocks.

    Returns (R, {label: dR/dY_label as (dim^2 x dim^2) complex matrix})
    using vec(A P B) = (B^T kron A) vec(P) with column-major vec.
    """
    val = np.zeros((dim, dim), dtype=complex)
    jac = {}
    eye = np.eye(dim, dtype=complex)
    for coeff, word in relation.terms:
        mats = [gens[a] for a in word]
        c = complex(coeff)
        prefix = [eye]
        for mmat in mats:
            prefix.append(prefix[-1] @ mmat)
        val += c * prefix[-1]
        suffix = [eye]
        for mmat in reversed(mats):
            suffix.append(mmat @ suffix[-1])
        suffix.reverse()
        for pos, atom in enumerate(word):
            if atom in unknowns:
                blk = c * np.kron(suffix[pos + 1].T, prefix[pos])
                if atom in jac:
                    jac[atom] = jac[atom] + blk
                else:
                    jac[atom] = blk
    return val, jac


def _lm_polish(gens, relations, unknowns, dim, tol, max_iter=60):
    """Levenberg-Marquardt on the stacked relation residuals.

    The residuals are holomorphic in the unknown matrices, so the normal
    equations are solved over the complex field directly.
    """
    labels = list(unknowns)
    nun = len(labels) * dim * dim

    def pack():
        return np.concatenate([gens[lb].reshape(-1, order="F")
                               for lb in labels])

    def unpack(vec):
        for i, lb in enumerate(labels):
            gens[lb] = vec[i * dim * dim:(i + 1) * dim * dim] \
                .reshape(dim, dim, order="F")

    def residual_and_jac():
        rs, jrows = [], []
        for rel in relations:
            val, jac = _relation_residual_and_jac(gens, rel, set(labels),
                                                  dim)
            rs.append(val.reshape(-1, order="F"))
            row = np.zeros((dim * dim, nun), dtype=complex)
            for i, lb in enumerate(labels):
                if lb in jac:
                    row[:, i * dim * dim:(i + 1) * dim * dim] = jac[lb]
            jrows.append(row)
        return np.concatenate(rs), np.vstack(jrows)

    lam = 1e-8
    vec = pack()
    r, j = residual_and_jac()
    norm = float(np.linalg.norm(r))
    for _ in range(max_iter):
        if norm <= tol:
            break
        jh = j.conj().T
        a = jh @ j
        g = jh @ r
        for _ in range(30):
            step = np.linalg.solve(a + lam * np.eye(nun), -g)
            unpack(vec + step)
            r2, j2 = residual_and_jac()
            n2 = float(np.linalg.norm(r2))
            if n2 < norm:
                vec = vec + step
                r, j, norm = r2, j2, n2
                lam = max(lam / 3, 1e-14)
                break
            lam *= 10
        else:
            break
    unpack(vec)
    return norm


def continue_bn_representation(rep0: MatrixRep, nu_target, steps=8,
                               tol=1e-12, max_halvings=8) -> MatrixRep:
    """Deform a rank-n representation from nu = 0 to nu_target.

    The symmetric-group matrices stay fixed; all Y matrices are corrected
    by Levenberg-Marquardt on the defining relations at each nu along the
    segment [0, nu_target], with adaptive step halving on stalls.
    """
    graph = rep0.meta["graph"]
    n = rep0.meta["n"]
    dim = rep0.dim
    cap = 16
    fact = 1
    for i in range(1, n + 1):
        fact *= i
    if fact * graph.ell ** n > cap:
        raise SizeMismatch(
            f"continuation guard: n! ell^n = {fact * graph.ell ** n} > {cap}")
    gamma = [[complex(x) for x in leg]
             for leg in rep0.meta.get("gamma", [])] or None
    if gamma is None:
        raise ShapeMismatch("rep0.meta must carry the gamma table")
    gens = {k: np.array(v, dtype=complex) for k, v in rep0.gens.items()}
    unknowns = [lb for lb in gens if lb.startswith("Y_")]
    nu_target = complex(nu_target)
    cur = 0.0 + 0j
    step = nu_target / steps
    halvings = 0
    while abs(cur - nu_target) > 0:
        nxt = cur + step
        if abs(nxt - cur) >= abs(nu_target - cur):
            nxt = nu_target
        pres = bn_presentation(graph, n, gamma, nxt)
        rels = [rel for rel in pres.relations
                if any(a in unknowns for _, w in rel.terms for a in w)]
        trial = {k: v.copy() for k, v in gens.items()}
        norm = _lm_polish(trial, rels, unknowns, dim, tol)
        if norm <= tol:
            gens = trial
            cur = nxt
        else:
            step /= 2
            halvings += 1
            if halvings > max_halvings:
                raise ContinuationStall(
                    f"continuation stalled at nu = {cur} "
                    f"(residual {norm:.3e})")
    pres = bn_presentation(graph, n, gamma, nu_target)
    meta = dict(rep0.meta)
    meta["nu"] = nu_target
    return MatrixRep(presentation=pres, gens=gens, dim=dim, exact=False,
                     exact_gens=None, meta=meta)
