"""Exact matrix realizations of the star-graph algebras.

The degenerate cyclotomic algebra on S_n with generators Y_1..Y_n has a
normal basis of monomials w * Y_1^{a_1} .. Y_n^{a_n} (group part leftmost,
exponents below ell).  A memoized straightening recursion rewrites any
product into this basis, which yields the left regular representation with
exactly rational matrix entries.  The same machinery provides induced
representations at nu = 0, isotypic subspaces, restricted operators and
exact characteristic polynomials for spectrum certificates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (EmptySubspace, NonGenericParameters, NotInvariant,
                     RelationResidualTooLarge, ShapeMismatch, SizeMismatch,
                     SpecMismatch, WrongIsotypicDimension)
from .exactnum import QQc, is_exact
from .presentations import Presentation, bn_presentation, bnl_presentation

# ---------------------------------------------------------------------------
# permutations: tuples of images, 0-indexed (p[i] = image of i)


def perm_identity(n):
    return tuple(range(n))


def perm_compose(p, q):
    """(p o q)[i] = p[q[i]]."""
    return tuple(p[x] for x in q)


def perm_inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def transposition(n, i, j):
    out = list(range(n))
    out[i], out[j] = j, i
    return tuple(out)


# ---------------------------------------------------------------------------
# exact dense matrices


class ExactMatrix:
    """A dense matrix of Gaussian-rational entries (small sizes only)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [[QQc.from_any(x) for x in row] for row in rows]

    @classmethod
    def zeros(cls, r, c):
        m = cls.__new__(cls)
        m.rows = [[QQc(0) for _ in range(c)] for _ in range(r)]
        return m

    @classmethod
    def identity(cls, n):
        m = cls.zeros(n, n)
        for i in range(n):
            m.rows[i][i] = QQc(1)
        return m

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __matmul__(self, other):
        r, k = self.shape
        k2, c = other.shape
        if k != k2:
            raise SizeMismatch(f"matmul {self.shape} @ {other.shape}")
        out = ExactMatrix.zeros(r, c)
        for i in range(r):
            ri = self.rows[i]
            oi = out.rows[i]
            for p in range(k):
                a = ri[p]
                if not a:
                    continue
                op = other.rows[p]
                for j in range(c):
                    if op[j]:
                        oi[j] = oi[j] + a * op[j]
        return out

    def __add__(self, other):
        return ExactMatrix([[a + b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return ExactMatrix([[a - b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        return ExactMatrix([[-a for a in row] for row in self.rows])

    def scale(self, c):
        c = QQc.from_any(c)
        return ExactMatrix([[c * a for a in row] for row in self.rows])

    def is_zero(self):
        return all(not a for row in self.rows for a in row)

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.rows == other.rows

    def trace(self):
        return sum((self.rows[i][i] for i in range(self.shape[0])), QQc(0))

    def to_numpy(self):
        return np.array([[complex(a) for a in row] for row in self.rows],
                        dtype=complex)

    def float_norm(self):
        return float(np.linalg.norm(self.to_numpy()))

    def __repr__(self):
        return f"ExactMatrix({self.shape[0]}x{self.shape[1]})"


def exact_kernel(mat: ExactMatrix):
    """Basis of the right kernel, as a list of QQc column vectors."""
    r, c = mat.shape
    rows = [list(row) for row in mat.rows]
    pivots = []  # (row, col)
    prow = 0
    for col in range(c):
        piv = next((i for i in range(prow, r) if rows[i][col]), None)
        if piv is None:
            continue
        rows[prow], rows[piv] = rows[piv], rows[prow]
        inv = QQc(1) / rows[prow][col]
        rows[prow] = [inv * x for x in rows[prow]]
        for i in range(r):
            if i != prow and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[prow])]
        pivots.append((prow, col))
        prow += 1
        if prow == r:
            break
    pivot_cols = {col for _, col in pivots}
    basis = []
    for free in range(c):
        if free in pivot_cols:
            continue
        v = [QQc(0)] * c
        v[free] = QQc(1)
        for prow_i, col in pivots:
            v[col] = -rows[prow_i][free]
        basis.append(v)
    return basis


def exact_charpoly(mat: ExactMatrix):
    """Monic characteristic polynomial coefficients, constant term first.

    Faddeev-LeVerrier: all divisions are by integers, hence exact.
    """
    n = mat.shape[0]
    if mat.shape[1] != n:
        raise SizeMismatch("charpoly of a non-square matrix")
    coeffs = [QQc(0)] * n + [QQc(1)]
    m = ExactMatrix.identity(n)
    for k in range(1, n + 1):
        m = mat @ m
        ck = -(m.trace() / k)
        coeffs[n - k] = ck
        for i in range(n):
            m.rows[i][i] = m.rows[i][i] + ck
    return coeffs


def poly_from_roots(roots):
    """Monic polynomial with the given roots, constant term first."""
    coeffs = [QQc(1)]
    for r in roots:
        r = QQc.from_any(r)
        nxt = [QQc(0)] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            nxt[d + 1] = nxt[d + 1] + c
            nxt[d] = nxt[d] - c * r
        coeffs = nxt
    return coeffs


# ---------------------------------------------------------------------------
# the straightening engine for the degenerate cyclotomic algebra


class CyclotomicAlgebra:
    """Normal-form arithmetic in the algebra on S_n and Y_1..Y_n.

    Elements are dicts {(perm, exps): coeff} over the normal basis
    w * Y^exps with 0 <= exps_i < ell.  Rewrites used:

        Y_j Y_i   = Y_i Y_j - nu s_ij Y_j + nu s_ij Y_i     (i < j)
        Y_i sigma = sigma Y_{sigma^-1(i)}
        Y_i^ell   = -(c_0 + c_1 Y_i + ... + c_{ell-1} Y_i^{ell-1})

    with c_r the non-leading coefficients of prod_j (Y - lambda_j).
    """

    def __init__(self, n, lam, nu, exact=None):
        if exact is None:
            exact = all(is_exact(x) for x in lam) and is_exact(nu)
        conv = QQc.from_any if exact else complex
        self.n = n
        self.ell = len(lam)
        self.lam = [conv(x) for x in lam]
        self.nu = conv(nu)
        self.exact = exact
        self.zero = QQc(0) if exact else 0j
        self.one = QQc(1) if exact else 1 + 0j
        if exact:
            self.reduction = [-c for c in poly_from_roots(self.lam)[:-1]]
        else:
            cs = [complex(c) for c in poly_from_roots(self.lam)[:-1]]
            self.reduction = [-c for c in cs]
        self._y_left_cache = {}

    # -- element plumbing --------------------------------------------
    def _add_into(self, dst, key, coeff):
        cur = dst.get(key)
        cur = coeff if cur is None else cur + coeff
        if cur:
            dst[key] = cur
        elif key in dst:
            del dst[key]

    def _merge(self, dst, src, scale):
        if not scale:
            return
        for key, c in src.items():
            self._add_into(dst, key, c * scale)

    def element(self, items):
        out = {}
        for key, c in items:
            self._add_into(out, key, c)
        return out

    def gen_s(self, i, j):
        """The transposition s_ij (0-indexed) as an element."""
        return {(transposition(self.n, i, j), (0,) * self.n): self.one}

    def gen_y(self, i):
        e = [0] * self.n
        e[i] = 1
        return {(perm_identity(self.n), tuple(e)): self.one}

    # -- monomial reduction ------------------------------------------
    def _reduce_mono(self, exps):
        """Normalize a commutative exponent vector: clip powers >= ell.

        Valid in place because Y_i^ell is a polynomial in Y_i alone.
        Returns {exps: coeff}.
        """
        hot = next((i for i, a in enumerate(exps) if a >= self.ell), None)
        if hot is None:
            return {tuple(exps): self.one}
        out = {}
        base = list(exps)
        for r, cr in enumerate(self.reduction):
            if not cr:
                continue
            base[hot] = exps[hot] - self.ell + r
            for key, c in self._reduce_mono(tuple(base)).items():
                self._add_into(out, key, c * cr)
        return out

    # -- the straightening recursion ---------------------------------
    def y_left(self, j, exps):
        """Normal form of Y_j * Y^exps as {(perm, exps): coeff}."""
        key = (j, exps)
        cached = self._y_left_cache.get(key)
        if cached is not None:
            return cached
        ident = perm_identity(self.n)
        i = next((p for p, a in enumerate(exps) if a), None)
        if i is None or j <= i:
            # already ordered: bump the exponent and clip at ell
            bumped = list(exps)
            bumped[j] += 1
            out = {(ident, e): c for e, c in
                   self._reduce_mono(tuple(bumped)).items()}
        else:
            # Y_j Y_i = Y_i Y_j - nu s_ij Y_j + nu s_ij Y_i, s moved left
            rest = list(exps)
            rest[i] -= 1
            rest = tuple(rest)
            e_j = self.y_left(j, rest)
            e_i = self.y_left(i, rest)
            out = self.mul_y(i, e_j)
            s = transposition(self.n, i, j)
            for (sig, e), c in e_j.items():
                self._add_into(out, (perm_compose(s, sig), e), -self.nu * c)
            for (sig, e), c in e_i.items():
                self._add_into(out, (perm_compose(s, sig), e), self.nu * c)
        self._y_left_cache[key] = out
        return out

    def mul_y(self, i, elem):
        """Left-multiply an element by Y_i (0-indexed)."""
        out = {}
        for (sig, exps), c in elem.items():
            sub = self.y_left(perm_inverse(sig)[i], exps)
            for (tau, e), c2 in sub.items():
                self._add_into(out, (perm_compose(sig, tau), e), c * c2)
        return out

    def mul(self, e1, e2):
        """Product of two normal-form elements."""
        out = {}
        for (sig, a), c1 in e1.items():
            for (tau, b), c2 in e2.items():
                scale = c1 * c2
                # Y_1^{a_1}..Y_n^{a_n} tau = tau Y_{tau^-1(1)}^{a_1}.. with
                # the factor order preserved (the relabeled factors need not
                # be normal-ordered, so apply them one by one, rightmost
                # first)
                tinv = perm_inverse(tau)
                seq = [tinv[i] for i in range(self.n) for _ in range(a[i])]
                part = {(perm_identity(self.n), b): self.one}
                for idx in reversed(seq):
                    part = self.mul_y(idx, part)
                prefix = perm_compose(sig, tau)
                for (rho, e), c3 in part.items():
                    self._add_into(out, (perm_compose(prefix, rho), e),
                                   scale * c3)
        return out

    def basis(self):
        perms = sorted(itertools.permutations(range(self.n)))
        exps = list(itertools.product(range(self.ell), repeat=self.n))
        return [(p, e) for p in perms for e in exps]


# ---------------------------------------------------------------------------
# matrix representations


@dataclass
class MatrixRep:
    """A matrix realization: generator label -> matrix, plus its relations."""

    presentation: Presentation
    gens: dict
    dim: int
    exact: bool = False
    exact_gens: dict = None
    meta: dict = field(default_factory=dict)

    def gen(self, label):
        return self.gens[label]

    def copy_float(self):
        return MatrixRep(presentation=self.presentation,
                         gens={k: np.array(v) for k, v in self.gens.items()},
                         dim=self.dim, exact=False, exact_gens=None,
                         meta=dict(self.meta))


def evaluate_word(rep: MatrixRep, word, exact=False):
    """Evaluate a word of atoms (labels or ("inv", label)) to a matrix."""
    if exact:
        out = ExactMatrix.identity(rep.dim)
        for atom in word:
            if isinstance(atom, tuple) and atom[0] == "inv":
                raise SizeMismatch("exact inverse evaluation is unsupported")
            out = out @ rep.exact_gens[atom]
        return out
    out = np.eye(rep.dim, dtype=complex)
    for atom in word:
        if isinstance(atom, tuple) and atom[0] == "inv":
            out = out @ np.linalg.inv(rep.gens[atom[1]])
        else:
            out = out @ rep.gens[atom]
    return out


def relation_residuals(rep: MatrixRep, exact=None):
    """Frobenius norm of each relation evaluated in the representation."""
    if exact is None:
        exact = rep.exact
    out = {}
    for rel in rep.presentation.relations:
        if exact:
            acc = ExactMatrix.zeros(rep.dim, rep.dim)
            for coeff, word in rel.terms:
                acc = acc + evaluate_word(rep, word, exact=True).scale(coeff)
            out[rel.name] = 0.0 if acc.is_zero() else acc.float_norm()
        else:
            acc = np.zeros((rep.dim, rep.dim), dtype=complex)
            for coeff, word in rel.terms:
                acc += complex(coeff) * evaluate_word(rep, word)
            out[rel.name] = float(np.linalg.norm(acc))
    return out


def check_relations(rep: MatrixRep, tol=1e-9, exact=None):
    res = relation_residuals(rep, exact=exact)
    worst = max(res.values(), default=0.0)
    if worst > tol:
        bad = max(res, key=res.get)
        raise RelationResidualTooLarge(
            f"relation '{bad}' has residual {worst:.3e} > {tol:.1e}")
    return worst


def check_generic_cyclotomic(lam, nu, n, span=None, tol=1e-8):
    """Reject parameter packs on the documented degeneracy locus.

    Requires distinct lambda and lambda_i - lambda_j not an integer
    multiple k*nu for 0 < |k| <= span (default 2n).  Exact inputs are
    tested exactly; floats within tol of the locus are rejected too.
    """
    span = 2 * n if span is None else span
    exact = all(is_exact(x) for x in lam) and is_exact(nu)
    lamc = [complex(x) for x in lam]
    for a in range(len(lam)):
        for b in range(a + 1, len(lam)):
            diff = lamc[a] - lamc[b]
            if abs(diff) <= tol:
                raise NonGenericParameters(
                    f"lambda_{a+1} and lambda_{b+1} coincide")
            if complex(nu) == 0:
                continue
            for k in range(-span, span + 1):
                if k == 0:
                    continue
                if exact:
                    hit = (QQc.from_any(lam[a]) - QQc.from_any(lam[b])
                           == QQc.from_any(nu) * k)
                else:
                    hit = abs(diff - k * complex(nu)) <= tol
                if hit:
                    raise NonGenericParameters(
                        f"lambda_{a+1} - lambda_{b+1} = {k} * nu")


def degenerate_regular_rep(n, lam, nu, exact=None, max_dim=512) -> MatrixRep:
    """Left regular representation of the cyclotomic algebra, rank n! ell^n."""
    alg = CyclotomicAlgebra(n, lam, nu, exact=exact)
    dim = 1
    for i in range(1, n + 1):
        dim *= i
    dim *= alg.ell ** n
    if dim > max_dim:
        raise SizeMismatch(f"regular representation dim {dim} > cap {max_dim}")
    basis = alg.basis()
    index = {b: i for i, b in enumerate(basis)}

    def columns_of(elem_of):
        exact_m = ExactMatrix.zeros(dim, dim) if alg.exact else None
        m = np.zeros((dim, dim), dtype=complex)
        for col, (sig, exps) in enumerate(basis):
            for (tau, e), c in elem_of(sig, exps).items():
                row = index[(tau, e)]
                m[row, col] = complex(c)
                if exact_m is not None:
                    exact_m.rows[row][col] = c
        return m, exact_m

    gens, exact_gens = {}, {} if alg.exact else None
    for i, j in itertools.combinations(range(n), 2):
        t = transposition(n, i, j)

        def act_s(sig, exps, t=t):
            return {(perm_compose(t, sig), exps): alg.one}

        label = f"s_{i + 1}_{j + 1}"
        gens[label], em = columns_of(act_s)
        if exact_gens is not None:
            exact_gens[label] = em
    for i in range(n):

        def act_y(sig, exps, i=i):
            out = {}
            for (tau, e), c in alg.y_left(perm_inverse(sig)[i], exps).items():
                out[(perm_compose(sig, tau), e)] = c
            return out

        label = f"Y_{i + 1}"
        gens[label], em = columns_of(act_y)
        if exact_gens is not None:
            exact_gens[label] = em
    pres = bnl_presentation(n, alg.ell, alg.lam, alg.nu)
    return MatrixRep(presentation=pres, gens=gens, dim=dim, exact=alg.exact,
                     exact_gens=exact_gens,
                     meta={"algebra": alg, "basis": basis, "kind": "regular",
                           "n": n, "ell": alg.ell, "lam": list(alg.lam),
                           "nu": alg.nu})


def induced_rep_nu_zero(graph, n, gamma, modules) -> MatrixRep:
    """Representation of the rank-n star algebra at nu = 0 induced from
    rank-1 data.

    modules[p] is a list of m matrices (ExactMatrix or arrays) y_1..y_m
    of common size, satisfying sum_k y_k = 0 and the per-leg minimal
    polynomials.  The carrier is C S_n tensor (V_1 x .. x V_n) with
        s.(w x v)       = (s w) x v
        Y_{i,k}.(w x v) = w x (y_k of slot p applied at p),  p = w^-1(i).
    """
    m = graph.m
    if len(modules) != n:
        raise ShapeMismatch(f"need {n} rank-1 modules, got {len(modules)}")
    exact = all(isinstance(mat, ExactMatrix)
                for mod in modules for mat in mod)
    dims = []
    for mod in modules:
        if len(mod) != m:
            raise ShapeMismatch("each module needs one matrix per leg")
        sz = mod[0].shape
        if sz[0] != sz[1] or any(mat.shape != sz for mat in mod):
            raise ShapeMismatch("module matrices must be square, equal size")
        dims.append(sz[0])
    perms = sorted(itertools.permutations(range(n)))
    slots = list(itertools.product(*[range(d) for d in dims]))
    basis = [(p, b) for p in perms for b in slots]
    index = {b: i for i, b in enumerate(basis)}
    dim = len(basis)
    one = QQc(1) if exact else 1 + 0j

    gens, exact_gens = {}, {} if exact else None

    def new_mats():
        return (np.zeros((dim, dim), dtype=complex),
                ExactMatrix.zeros(dim, dim) if exact else None)

    def put(mats, row, col, val):
        mats[0][row, col] += complex(val)
        if mats[1] is not None:
            mats[1].rows[row][col] = mats[1].rows[row][col] + val

    for i, j in itertools.combinations(range(n), 2):
        t = transposition(n, i, j)
        mats = new_mats()
        for col, (sig, b) in enumerate(basis):
            put(mats, index[(perm_compose(t, sig), b)], col, one)
        label = f"s_{i + 1}_{j + 1}"
        gens[label] = mats[0]
        if exact:
            exact_gens[label] = mats[1]
    for i in range(n):
        for k in range(m):
            mats = new_mats()
            for col, (sig, b) in enumerate(basis):
                p = perm_inverse(sig)[i]
                mat = modules[p][k]
                for r in range(dims[p]):
                    val = (mat.rows[r][b[p]] if exact
                           else np.asarray(mat)[r, b[p]])
                    if val:
                        nb = list(b)
                        nb[p] = r
                        put(mats, index[(sig, tuple(nb))], col, val)
            label = f"Y_{i + 1}_{k + 1}"
            gens[label] = mats[0]
            if exact:
                exact_gens[label] = mats[1]
    zero_nu = QQc(0) if exact else 0j
    pres = bn_presentation(graph, n, gamma, zero_nu)
    return MatrixRep(presentation=pres, gens=gens, dim=dim, exact=exact,
                     exact_gens=exact_gens,
                     meta={"kind": "induced", "n": n, "graph": graph,
                           "gamma": [list(leg) for leg in gamma],
                           "module_dims": dims})


def exact_rank1_modules_d4(gamma, flip=()):
    """An exact rank-1 module of the four-legged star algebra at nu = 0.

    For the (2,2,2,2) profile with sum(gamma) = 0, take
        y_1 = diag(g_11, g_12), y_2 = diag(g_21, g_22),
        y_3 = a_3 I + w,        y_4 = a_4 I + w',
    with w = x (1,1)^T rank one of trace g_32 - g_31, and w' = M - w forced
    rank one by a linear condition; M = -y_1 - y_2 - (a_3 + a_4) I.
    ``flip`` lists legs (1-based, among 1 and 2) whose eigenvalue order is
    swapped, giving inequivalent modules from the same parameters.
    """
    g = [[QQc.from_any(x) for x in leg] for leg in gamma]
    if len(g) != 4 or any(len(leg) != 2 for leg in g):
        raise ShapeMismatch("expected a 4x2 gamma table")
    total = sum((x for leg in g for x in leg), QQc(0))
    if total:
        raise NonGenericParameters(
            "rank-1 construction needs sum of all gamma entries = 0")
    for k in (1, 2):
        if k in flip:
            g[k - 1] = [g[k - 1][1], g[k - 1][0]]
    a3, b3 = g[2]
    a4, _b4 = g[3]
    t3 = b3 - a3
    m1 = -g[0][0] - g[1][0] - a3 - a4
    m2 = -g[0][1] - g[1][1] - a3 - a4
    det = m1 - m2
    if not det:
        raise NonGenericParameters(
            "degenerate diagonal (m1 = m2); perturb gamma or flip a leg")
    # solve x1 + x2 = t3, m2 x1 + m1 x2 = m1 m2  (makes M - w rank one)
    x1 = (m1 * t3 - m1 * m2) / det
    x2 = (m1 * m2 - m2 * t3) / det
    y1 = ExactMatrix([[g[0][0], 0], [0, g[0][1]]])
    y2 = ExactMatrix([[g[1][0], 0], [0, g[1][1]]])
    w = ExactMatrix([[x1, x1], [x2, x2]])
    y3 = ExactMatrix([[a3, 0], [0, a3]]) + w
    y4 = ExactMatrix([[m1 - x1, -x1], [-x2, m2 - x2]]) \
        + ExactMatrix([[a4, 0], [0, a4]])
    assert (y1 + y2 + y3 + y4).is_zero()
    return [y1, y2, y3, y4]


# ---------------------------------------------------------------------------
# subspaces, restrictions, spectra


@dataclass
class Subspace:
    """A subspace with an orthonormal float basis (columns) and, when
    available, an exact rational basis (list of QQc column vectors)."""

    basis: np.ndarray
    exact_basis: list = None

    @property
    def dim(self):
        return self.basis.shape[1]


def nullspace(a: np.ndarray, tol=1e-9):
    """Orthonormal basis of the numerical null space of a."""
    if a.shape[0] == 0:
        return np.eye(a.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(a)
    cut = tol * max(1.0, s[0] if len(s) else 0.0)
    rank = int(np.sum(s > cut))
    return vh[rank:].conj().T.copy()


def isotypic_subspace(rep: MatrixRep, conditions, expected_dim=None,
                      tol=1e-9) -> Subspace:
    """Joint eigenspace: vectors v with word(v) = chi * v for each
    (word, chi) in conditions."""
    blocks = []
    for word, chi in conditions:
        blocks.append(evaluate_word(rep, word)
                      - complex(chi) * np.eye(rep.dim))
    basis = nullspace(np.vstack(blocks), tol=tol)
    exact_basis = None
    if rep.exact and all(is_exact(chi) or isinstance(chi, QQc)
                         for _, chi in conditions):
        stacked = []
        for word, chi in conditions:
            m = evaluate_word(rep, word, exact=True)
            chi = QQc.from_any(chi)
            for i in range(rep.dim):
                row = list(m.rows[i])
                row[i] = row[i] - chi
                stacked.append(row)
        exact_basis = exact_kernel(ExactMatrix(stacked))
        if len(exact_basis) != basis.shape[1]:
            raise WrongIsotypicDimension(
                f"exact kernel dim {len(exact_basis)} != "
                f"float kernel dim {basis.shape[1]}")
        if exact_basis:
            raw = np.array([[complex(x) for x in v]
                            for v in exact_basis]).T
            basis, _ = np.linalg.qr(raw)
    if basis.shape[1] == 0:
        raise EmptySubspace("isotypic subspace is zero")
    if expected_dim is not None and basis.shape[1] != expected_dim:
        raise WrongIsotypicDimension(
            f"isotypic dimension {basis.shape[1]} != expected {expected_dim}")
    return Subspace(basis=basis, exact_basis=exact_basis)


def restricted_operator(mat: np.ndarray, sub: Subspace, tol=1e-8):
    """Compress mat to the subspace; certify invariance (leakage <= tol)."""
    b = sub.basis
    r = b.conj().T @ mat @ b
    leak = float(np.linalg.norm(mat @ b - b @ r))
    scale = max(1.0, float(np.linalg.norm(mat)))
    if leak > tol * scale:
        raise NotInvariant(f"subspace leakage {leak:.3e} exceeds tolerance")
    return r, leak


def restricted_operator_exact(mat: ExactMatrix, sub: Subspace) -> ExactMatrix:
    """Exact compression: solve mat @ B = B @ R over the rationals."""
    if not sub.exact_basis:
        raise NotInvariant("subspace carries no exact basis")
    vecs = sub.exact_basis
    dim = len(vecs[0])
    r = len(vecs)
    b = ExactMatrix([[vecs[j][i] for j in range(r)] for i in range(dim)])
    mb = mat @ b
    # row-reduce [B | MB] together; consistency certifies invariance
    aug = [b.rows[i] + mb.rows[i] for i in range(dim)]
    prow = 0
    pivots = []
    for col in range(r):
        piv = next((i for i in range(prow, dim) if aug[i][col]), None)
        if piv is None:
            raise NotInvariant("exact basis is rank-deficient")
        aug[prow], aug[piv] = aug[piv], aug[prow]
        inv = QQc(1) / aug[prow][col]
        aug[prow] = [inv * x for x in aug[prow]]
        for i in range(dim):
            if i != prow and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[prow])]
        pivots.append(prow)
        prow += 1
    for i in range(prow, dim):
        if any(aug[i][r:]):
            raise NotInvariant("subspace is not exactly invariant")
    return ExactMatrix([aug[p][r:] for p in pivots])


def spectrum_match(mat, expected, tol=1e-8):
    """Greatest matched distance between eig(mat) and the expected
    multiset; expected is a list of (value, multiplicity) pairs."""
    want = [complex(v) for v, mult in expected for _ in range(int(mult))]
    eig = np.linalg.eigvals(np.asarray(mat, dtype=complex))
    if len(want) != len(eig):
        raise SpecMismatch(
            f"expected {len(want)} eigenvalues, matrix has {len(eig)}")
    cost = np.abs(eig[:, None] - np.array(want)[None, :])
    rows, cols = linear_sum_assignment(cost)
    worst = float(cost[rows, cols].max()) if len(rows) else 0.0
    if worst > tol:
        raise SpecMismatch(f"spectrum mismatch {worst:.3e} > {tol:.1e}")
    return worst
