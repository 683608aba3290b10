"""Acceptance gate: twelve end-to-end criteria, one report line each.

Every criterion prints a single "ACCEPTANCE nn: PASS/FAIL" line before
asserting, so the final verdicts can be read off a captured run with -s.
"""

import cmath
import math
from fractions import Fraction as F

import numpy as np
import pytest
from click.testing import CliRunner

from starmono.algebra import (CyclotomicAlgebra, MatrixRep,
                              degenerate_regular_rep, exact_charpoly,
                              exact_rank1_modules_d4, induced_rep_nu_zero,
                              isotypic_subspace, poly_from_roots,
                              relation_residuals, restricted_operator,
                              restricted_operator_exact, spectrum_match)
from starmono.cli import main as cli_main
from starmono.connection import curvature, fuchsian_connection, kz_connection
from starmono.ds import (additive_class_specs, continue_bn_representation,
                         irreducibility_check, multiplicative_class_specs,
                         solve_additive_ds, solve_multiplicative_ds,
                         tangent_dimension)
from starmono.exactnum import QQc
from starmono.monodromy import (ariki_koike_x, cyclotomic_monodromy,
                                monodromy_functor, monodromy_rep)
from starmono.params import (build_star_graph, exponentiate_params,
                             gamma_to_mu_xi)
from starmono.paths import puncture_loop
from starmono.presentations import bn_presentation
from starmono.rhflow import (additive_compression, commuting_diagram_check,
                             conjugation_invariants, isomonodromic_flow,
                             match_up_to_conjugacy, riemann_hilbert)
from starmono.transport import parallel_transport
from tests.conftest import GAMMA_D4_ZERO, NU_D4

GAMMA_E6 = [[F(1, 5), F(-1, 3), F(1, 7)],
            [F(1, 11), F(-2, 7), F(1, 9)],
            [F(2, 13), F(-1, 4), None]]
GAMMA_E6[2][2] = -sum(x for leg in GAMMA_E6 for x in leg if x is not None)

# the group-algebra point: gamma_kj = j/d_k shifted by integers to total 0
GAMMA_GROUP = [[F(1, 2), F(0)], [F(1, 2), F(0)],
               [F(1, 2), F(-1)], [F(1, 2), F(-1)]]

ALPHAS_D4 = [0.0, 1.0, 3.0, 4.5]
ALPHAS_E6 = [0.0, 1.0, 3.0]


def report(num, ok, text):
    print(f"ACCEPTANCE {num:02d}: {'PASS' if ok else 'FAIL'} - {text}")
    assert ok, f"criterion {num} failed: {text}"


@pytest.fixture(scope="module")
def graph_d4a():
    return build_star_graph((2, 2, 2, 2))


@pytest.fixture(scope="module")
def graph_e6():
    return build_star_graph((3, 3, 3))


@pytest.fixture(scope="module")
def params_d4(graph_d4a):
    return gamma_to_mu_xi(graph_d4a, GAMMA_D4_ZERO, NU_D4)


@pytest.fixture(scope="module")
def params_e6(graph_e6):
    return gamma_to_mu_xi(graph_e6, GAMMA_E6, NU_D4)


@pytest.fixture(scope="module")
def ds_d4_rank1(params_d4):
    return solve_additive_ds(additive_class_specs(params_d4, 1), seed=7)


@pytest.fixture(scope="module")
def rep2_continued(graph_d4a):
    mods = exact_rank1_modules_d4(GAMMA_D4_ZERO)
    mods2 = exact_rank1_modules_d4(GAMMA_D4_ZERO, flip=(1, 2))
    rep0 = induced_rep_nu_zero(graph_d4a, 2, GAMMA_D4_ZERO, [mods, mods2])
    return continue_bn_representation(rep0, 0.05, steps=6)


def test_criterion_01_regular_representations():
    cases = [(1, [F(1, 3), F(-2, 5)]),
             (1, [F(1, 7), F(2, 7), F(-5, 11)]),
             (2, [F(1, 3), F(-2, 5)]),
             (2, [F(1, 7), F(2, 7), F(-5, 11)]),
             (3, [F(1, 3), F(-2, 5)])]
    nu = F(1, 5)
    ok = True
    for n, lam in cases:
        ell = len(lam)
        rep = degenerate_regular_rep(n, lam, nu)
        ok = ok and rep.dim == math.factorial(n) * ell ** n
        res = relation_residuals(rep, exact=True)
        ok = ok and all(v == 0.0 for v in res.values())
        alg = CyclotomicAlgebra(n, lam, nu)
        gens = [alg.gen_y(i) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                gens.append(alg.gen_s(i, j))
        for a in gens:
            for b in gens:
                left = alg.mul(alg.mul(a, b), a)
                right = alg.mul(a, alg.mul(b, a))
                ok = ok and left == right
    report(1, ok, "regular representations: exact rank n!*ell^n, exact "
           "relations, associativity on generator pairs")


def test_criterion_02_restricted_spectrum_exact():
    nu = QQc.from_any(F(1, 5))
    cases = []
    # (n, ell) = (2, 2)
    lam = [F(1, 3), F(-2, 5)]
    l1, l2 = [QQc.from_any(x) for x in lam]
    cases.append((2, lam, [(("Y_1",), l2)],
                  [l2 - nu, l2 + nu, l1, l1]))
    # (n, ell) = (2, 3)
    lam = [F(1, 7), F(2, 7), F(-5, 11)]
    l1, l2, l3 = [QQc.from_any(x) for x in lam]
    cases.append((2, lam, [(("Y_1",), l3)],
                  [l3 - nu, l3 + nu, l1, l1, l2, l2]))
    # (n, ell) = (3, 2)
    lam = [F(1, 3), F(-2, 5)]
    l1, l2 = [QQc.from_any(x) for x in lam]
    cases.append((3, lam,
                  [(("s_1_2",), 1), (("Y_1",), l2), (("Y_2",), l2)],
                  [l2 - QQc(2) * nu, l2 + nu, l2 + nu, l1, l1, l1]))
    ok = True
    for n, lam, conditions, roots in cases:
        ell = len(lam)
        rep = degenerate_regular_rep(n, lam, F(1, 5))
        sub = isotypic_subspace(rep, conditions, expected_dim=n * ell)
        x = rep.exact_gens[f"Y_{n}"]
        for j in range(1, n):
            x = x - rep.exact_gens[f"s_{j}_{n}"].scale(nu)
        r = restricted_operator_exact(x, sub)
        ok = ok and exact_charpoly(r) == poly_from_roots(roots)
    report(2, ok, "restricted element on the trivial-isotypic subspace "
           "has the predicted exact characteristic polynomial")


def _additive_instance(params, n, seed):
    specs = additive_class_specs(params, n)
    trace = abs(sum(sp.trace() for sp in specs))
    sol = solve_additive_ds(specs, seed=seed)
    for x, sp in zip(sol.matrices, specs):
        spectrum_match(x, list(sp.eigenvalues), tol=1e-8)
    return (trace < 1e-12 and sol.residual < 1e-10
            and irreducibility_check(sol.matrices)
            and tangent_dimension(sol).moduli == 2 * n)


def test_criterion_03_additive_deligne_simpson(params_d4, params_e6):
    ok = (_additive_instance(params_d4, 1, 7)
          and _additive_instance(params_d4, 2, 0)
          and _additive_instance(params_e6, 1, 1))
    report(3, ok, "additive zero-sum tuples at hbar=0: residual, spectra, "
           "irreducibility, moduli dimension 2n")


def _multiplicative_instance(params, n, seed):
    mp = exponentiate_params(params)
    specs = multiplicative_class_specs(mp, n)
    det = 1 + 0j
    for sp in specs:
        det *= sp.det()
    sol = solve_multiplicative_ds(specs, seed=seed)
    for x, sp in zip(sol.matrices, specs):
        spectrum_match(x, list(sp.eigenvalues), tol=1e-8)
    return (abs(det - 1) < 1e-12 and sol.residual < 1e-10
            and tangent_dimension(sol).moduli == 2 * n)


def test_criterion_04_multiplicative_deligne_simpson(params_d4, params_e6):
    ok = (_multiplicative_instance(params_d4, 1, 7)
          and _multiplicative_instance(params_d4, 2, 0)
          and _multiplicative_instance(params_e6, 1, 1))
    report(4, ok, "multiplicative product-one tuples at q=1: residual, "
           "determinant condition, moduli dimension 2n")


def test_criterion_05_transport_oracle():
    a = np.array([[0.3 + 0.1j]])
    terms = fuchsian_connection([a, -a], [0.0, 5.0])
    loop = puncture_loop([0.0, 5.0], [7.0], 1)
    want = cmath.exp(2j * cmath.pi * (0.3 + 0.1j))
    res = parallel_transport(terms, loop, tol=0.02)
    scalar_ok = abs(res.matrix[0, 0] - want) < 1e-10
    closed = loop.then(loop.reversed())
    res2 = parallel_transport(terms, closed, tol=0.02)
    contractible_ok = abs(res2.matrix[0, 0] - 1) < 1e-10
    errs = []
    for tol in (0.08, 0.04, 0.02):
        errs.append(abs(parallel_transport(terms, loop,
                                           tol=tol).matrix[0, 0] - want))
    halving_ok = errs[1] <= errs[0] / 16 and errs[2] <= errs[1] / 16
    report(5, scalar_ok and contractible_ok and halving_ok,
           "scalar monodromy oracle, contractible loop, and 2^4 gain per "
           "tolerance halving")


def test_criterion_06_flatness(graph_d4a, rep2_continued):
    mods = exact_rank1_modules_d4(GAMMA_D4_ZERO)
    mods2 = exact_rank1_modules_d4(GAMMA_D4_ZERO, flip=(1, 2))
    rep0 = induced_rep_nu_zero(graph_d4a, 2, GAMMA_D4_ZERO,
                               [mods, mods2]).copy_float()
    rng = np.random.default_rng(11)
    worst = 0.0
    for rep, nu in ((rep0, 0.0), (rep2_continued, 0.05)):
        terms = kz_connection(rep, ALPHAS_D4, nu)
        for _ in range(20):
            z = rng.uniform(5.0, 9.0, 2) + 1j * rng.uniform(0.5, 2.0, 2)
            worst = max(worst, curvature(terms, list(z)))
    report(6, worst < 1e-10,
           f"multi-point connection curvature {worst:.2e} < 1e-10 at 20 "
           "random configurations (nu = 0 and nu = 0.05)")


def _rank1_rep(graph, gamma, matrices):
    gens = {f"Y_1_{k + 1}": m for k, m in enumerate(matrices)}
    pres = bn_presentation(graph, 1,
                           [[complex(x) for x in leg] for leg in gamma], 0j)
    return MatrixRep(presentation=pres, gens=gens,
                     dim=matrices[0].shape[0], exact=False,
                     meta={"kind": "tuple", "graph": graph, "n": 1,
                           "gamma": gamma, "nu": 0j})


def test_criterion_07_rank1_monodromy_functor(graph_d4a, graph_e6):
    ok = True
    for graph, gamma, alphas in (
            (graph_d4a, GAMMA_D4_ZERO, ALPHAS_D4),
            (graph_e6, GAMMA_E6, ALPHAS_E6),
            (graph_d4a, GAMMA_GROUP, ALPHAS_D4)):
        params = gamma_to_mu_xi(graph, gamma, F(0))
        sol = solve_additive_ds(additive_class_specs(params, 1), seed=2)
        rep = _rank1_rep(graph, gamma, sol.matrices)
        data = monodromy_functor(rep, alphas, 0j, tol=0.02)
        res = max(relation_residuals(monodromy_rep(data)).values())
        ok = ok and res < 1e-8
        if gamma is GAMMA_GROUP:
            worst = max(np.linalg.norm(np.linalg.matrix_power(u, dk)
                                       - np.eye(2))
                        for u, dk in zip(data.u_mats, graph.d))
            ok = ok and worst < 1e-8
    report(7, ok, "rank-1 monodromy: polynomial and product relations for "
           "two affine shapes; finite group algebra at the special point")


def test_criterion_08_cyclotomic_monodromy():
    lam = [F(1, 3), F(-1, 5)]
    nu = F(1, 7)
    rep = degenerate_regular_rep(2, lam, nu).copy_float()
    rep.meta["lam"] = lam
    data = cyclotomic_monodromy(rep, complex(nu))
    mrep = monodromy_rep(data)
    res = max(relation_residuals(mrep).values())
    v1, v2 = [cmath.exp(2j * cmath.pi * complex(x)) for x in lam]
    t = data.meta["t"]
    sub = isotypic_subspace(mrep, [(("U",), v2)], expected_dim=4, tol=1e-7)
    x = ariki_koike_x(data, 2)
    xr, leak = restricted_operator(x, sub, tol=1e-6)
    spectrum_match(xr, [(v2 * t ** 2, 1), (v2 * t ** (-2), 1), (v1, 2)],
                   tol=1e-6)
    # the non-top part is a true eigenspace: the polynomial projector
    # killing the top block satisfies X q = v1 q
    eye = np.eye(4)
    q = ((xr - v2 * t ** 2 * eye) @ (xr - v2 * t ** (-2) * eye)
         / ((v1 - v2 * t ** 2) * (v1 - v2 * t ** (-2))))
    scalar_defect = np.linalg.norm(xr @ q - v1 * q)
    rank_ok = np.linalg.matrix_rank(q, tol=1e-6) == 2
    ok = res < 1e-6 and leak < 1e-6 and scalar_defect < 1e-6 and rank_ok
    report(8, ok, "one-pole monodromy: cyclotomic Hecke relations, "
           "restricted spectrum, scalar action off the top block")


def test_criterion_09_commuting_diagram(graph_d4a):
    ok = True
    for flip in ((), (1,), (2,)):
        mods = exact_rank1_modules_d4(GAMMA_D4_ZERO, flip=flip)
        rep0 = induced_rep_nu_zero(graph_d4a, 1, GAMMA_D4_ZERO, [mods])
        rep = continue_bn_representation(rep0, complex(NU_D4))
        for alphas in (ALPHAS_D4, [0.0, 2.0, 5.0, 9.0]):
            d = commuting_diagram_check(rep, alphas)
            ok = (ok and d.invariant_gap < 1e-6 and d.match.matched
                  and d.match.residual < 1e-6)
    # puncture positions matter only through their cross ratio: a
    # fractional-linear move of the alphas conjugates the output
    params = gamma_to_mu_xi(graph_d4a, GAMMA_D4_ZERO, NU_D4)
    sol = solve_additive_ds(additive_class_specs(params, 1), seed=7)
    moved = [a / (a + 10.0) for a in ALPHAS_D4]
    r1 = riemann_hilbert(sol.matrices, ALPHAS_D4, tol=0.02)
    r2 = riemann_hilbert(sol.matrices, moved, tol=0.02)
    m = match_up_to_conjugacy(r1.matrices, r2.matrices, tol=1e-6)
    gap = np.abs(conjugation_invariants(r1.matrices)
                 - conjugation_invariants(r2.matrices)).max()
    ok = ok and m.matched and gap < 1e-6
    report(9, ok, "compress-then-solve equals monodromy-then-compress for "
           "3 modules x 2 configurations; fractional-linear equivalence")


def test_criterion_10_continuation(graph_d4a, rep2_continued):
    res = max(relation_residuals(rep2_continued).values())
    out = additive_compression(rep2_continued)
    params = gamma_to_mu_xi(graph_d4a, GAMMA_D4_ZERO, F(1, 20))
    specs = additive_class_specs(params, 2)
    for x, sp in zip(out.matrices, specs):
        spectrum_match(x, list(sp.eigenvalues), tol=1e-6)
    zero = np.linalg.norm(sum(out.matrices))
    ok = res < 1e-8 and zero < 1e-6 and out.leakage < 1e-6
    report(10, ok, "deformation to nu = 0.05: relation residual "
           f"{res:.2e}, compressed tuple in the additive classes")


def test_criterion_11_isomonodromic_flow(params_d4, ds_d4_rank1, graph_d4a):
    specs = additive_class_specs(params_d4, 1)

    def half_circle(nsteps):
        return [0.4 + 0.1 * cmath.exp(1j * cmath.pi * j / nsteps)
                for j in range(nsteps + 1)]

    fine = isomonodromic_flow(specs, ds_d4_rank1.matrices, half_circle(20),
                              tol=0.05)
    coarse = isomonodromic_flow(specs, ds_d4_rank1.matrices,
                                half_circle(10), tol=0.05)
    drift_fine = max(fine.drifts)
    drift_coarse = max(coarse.drifts)
    stable = drift_fine <= 2 * drift_coarse + 1e-9
    # nu = 0 block decoupling: the rank-2 compression carries the
    # invariants of the direct sum of its rank-1 constituents
    from scipy.linalg import block_diag
    mods = exact_rank1_modules_d4(GAMMA_D4_ZERO)
    mods2 = exact_rank1_modules_d4(GAMMA_D4_ZERO, flip=(1, 2))
    rep = induced_rep_nu_zero(graph_d4a, 2, GAMMA_D4_ZERO,
                              [mods, mods2]).copy_float()
    out = additive_compression(rep)
    summed = [block_diag(np.asarray(a.to_numpy()), np.asarray(b.to_numpy()))
              for a, b in zip(mods, mods2)]
    block_gap = np.abs(conjugation_invariants(out.matrices)
                       - conjugation_invariants(summed)).max()
    ok = drift_fine < 1e-6 and stable and block_gap < 1e-5
    report(11, ok, f"flow over 20 cross-ratio steps: drift "
           f"{drift_fine:.2e} < 1e-6, stable under step halving, "
           "nu = 0 block decoupling")


def test_criterion_12_determinism(tmp_path):
    runner = CliRunner()
    gamma = "1/5,-2/5;1/7,-3/7;1/3,-1/4;1/2,-41/420"
    base = ["--d", "2,2,2,2", "--gamma", gamma, "--nu", "1/5"]
    outs = []
    for tag in ("a", "b"):
        ds = tmp_path / f"ds_{tag}.json"
        rh = tmp_path / f"rh_{tag}.json"
        r1 = runner.invoke(cli_main, ["solve-ds", *base, "--seed", "7",
                                      "-o", str(ds)])
        r2 = runner.invoke(cli_main, ["rh", "--input", str(ds),
                                      "--alphas", "0,1,3,4.5",
                                      "-o", str(rh)])
        assert r1.exit_code == 0 and r2.exit_code == 0
        outs.append(ds.read_bytes() + rh.read_bytes())
    report(12, outs[0] == outs[1],
           "seeded pipeline replay reproduces all output files byte for "
           "byte")
