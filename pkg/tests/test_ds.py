from fractions import Fraction as F

import numpy as np
import pytest

from starmono.algebra import (exact_rank1_modules_d4, induced_rep_nu_zero,
                              relation_residuals, spectrum_match)
from starmono.ds import (ConjugacyClassSpec, _rank_with_guard,
                         additive_class_specs, continue_bn_representation,
                         irreducibility_check, joint_centralizer_dim,
                         multiplicative_class_specs, solve_additive_ds,
                         solve_multiplicative_ds, tangent_dimension)
from starmono.errors import (DetObstruction, NoConvergence, NonZeroHbar,
                             RankAmbiguous, SizeMismatch, TraceObstruction)
from starmono.params import (build_star_graph, exponentiate_params,
                             gamma_to_mu_xi)
from tests.conftest import GAMMA_D4_ZERO, NU_D4


class TestClassSpecs:
    def test_additive_d4_rank1(self, params_d4_zero):
        specs = additive_class_specs(params_d4_zero, 1)
        assert len(specs) == 4
        assert all(s.size == 2 for s in specs)
        assert abs(sum(s.trace() for s in specs)) < 1e-14

    def test_additive_d4_rank2(self, params_d4_zero):
        specs = additive_class_specs(params_d4_zero, 2)
        assert all(s.size == 4 for s in specs)
        # distinguished leg: lam2 - nu once, lam2 + nu once, lam1 twice
        lam = [complex(x) for x in params_d4_zero.lam]
        nu = complex(params_d4_zero.nu)
        got = dict(specs[-1].eigenvalues)
        assert got[lam[1] - nu] == 1
        assert got[lam[1] + nu] == 1
        assert got[lam[0]] == 2
        assert abs(sum(s.trace() for s in specs)) < 1e-13

    def test_nonzero_hbar_rejected(self, graph_d4):
        bad = gamma_to_mu_xi(graph_d4, [[F(1, 4), F(1, 4)]] * 4, F(1, 5))
        with pytest.raises(NonZeroHbar):
            additive_class_specs(bad, 1)

    def test_multiplicative_d4_rank1(self, params_d4_zero):
        mp = exponentiate_params(params_d4_zero)
        specs = multiplicative_class_specs(mp, 1)
        det = np.prod([s.det() for s in specs])
        assert abs(det - 1) < 1e-12

    def test_det_obstruction(self, graph_d4):
        # hbar = 0.8 is not an integer, so q != 1 and prod det X_k != 1
        bad = gamma_to_mu_xi(graph_d4, [[F(1, 10), F(1, 10)]] * 4, F(1, 5))
        mp = exponentiate_params(bad)
        with pytest.raises(DetObstruction):
            multiplicative_class_specs(mp, 1)


class TestAdditiveSolver:
    def test_rank1_solution(self, params_d4_zero):
        specs = additive_class_specs(params_d4_zero, 1)
        sol = solve_additive_ds(specs, seed=7)
        assert sol.residual <= 1e-10
        assert np.linalg.norm(sum(sol.matrices)) <= 2e-10
        for x, spec in zip(sol.matrices, specs):
            spectrum_match(x, spec.eigenvalues, tol=1e-8)

    def test_irreducible(self, params_d4_zero):
        specs = additive_class_specs(params_d4_zero, 1)
        sol = solve_additive_ds(specs, seed=7)
        assert irreducibility_check(sol.matrices)
        assert joint_centralizer_dim(sol.matrices) == 1

    def test_moduli_dimension_rank1(self, params_d4_zero):
        specs = additive_class_specs(params_d4_zero, 1)
        sol = solve_additive_ds(specs, seed=7)
        rep = tangent_dimension(sol)
        assert rep.moduli == 2
        assert rep.tangent_var == 2 + (4 - 1)

    def test_trace_obstruction(self):
        specs = [ConjugacyClassSpec(((1.0, 2),)),
                 ConjugacyClassSpec(((-0.5, 2),))]
        with pytest.raises(TraceObstruction):
            solve_additive_ds(specs)

    def test_no_convergence_reports_best(self):
        # sum of two fixed nonzero scalars can never vanish
        specs = [ConjugacyClassSpec(((1.0, 1),)),
                 ConjugacyClassSpec(((-0.5, 1),)),
                 ConjugacyClassSpec(((-0.5 + 0.3, 1),))]
        with pytest.raises(TraceObstruction):
            solve_additive_ds(specs)
        specs = [ConjugacyClassSpec(((1.0, 1), (-1.0, 1))),
                 ConjugacyClassSpec(((0.6, 1), (-0.6, 1))),
                 ConjugacyClassSpec(((2.5, 2),))]
        with pytest.raises((NoConvergence, TraceObstruction)):
            solve_additive_ds(specs, max_starts=2)


class TestMultiplicativeSolver:
    def test_rank1_solution(self, params_d4_zero):
        mp = exponentiate_params(params_d4_zero)
        specs = multiplicative_class_specs(mp, 1)
        sol = solve_multiplicative_ds(specs, seed=3)
        assert sol.residual <= 1e-10
        acc = np.eye(2, dtype=complex)
        for x in sol.matrices:
            acc = acc @ x
        assert np.linalg.norm(acc - np.eye(2)) <= 2e-10
        for x, spec in zip(sol.matrices, specs):
            spectrum_match(x, spec.eigenvalues, tol=1e-8)

    def test_moduli_dimension_rank1(self, params_d4_zero):
        mp = exponentiate_params(params_d4_zero)
        specs = multiplicative_class_specs(mp, 1)
        sol = solve_multiplicative_ds(specs, seed=3)
        rep = tangent_dimension(sol)
        assert rep.moduli == 2

    def test_determinism(self, params_d4_zero):
        mp = exponentiate_params(params_d4_zero)
        specs = multiplicative_class_specs(mp, 1)
        a = solve_multiplicative_ds(specs, seed=11)
        b = solve_multiplicative_ds(specs, seed=11)
        for x, y in zip(a.matrices, b.matrices):
            assert np.array_equal(x, y)


class TestRankGuard:
    def test_ambiguous(self):
        sv = np.array([1.0, 5e-7, 1e-12])
        with pytest.raises(RankAmbiguous):
            _rank_with_guard(sv)

    def test_clean(self):
        sv = np.array([1.0, 0.5, 1e-12])
        assert _rank_with_guard(sv) == 2


class TestContinuation:
    def test_rank1(self, graph_d4):
        mods = exact_rank1_modules_d4(GAMMA_D4_ZERO)
        rep0 = induced_rep_nu_zero(graph_d4, 1, GAMMA_D4_ZERO, [mods])
        rep = continue_bn_representation(rep0, complex(NU_D4))
        res = relation_residuals(rep)
        assert max(res.values()) <= 1e-12

    def test_rank2(self, graph_d4):
        mods = exact_rank1_modules_d4(GAMMA_D4_ZERO)
        mods2 = exact_rank1_modules_d4(GAMMA_D4_ZERO, flip=(1, 2))
        rep0 = induced_rep_nu_zero(graph_d4, 2, GAMMA_D4_ZERO,
                                   [mods, mods2])
        rep = continue_bn_representation(rep0, complex(NU_D4), steps=6)
        res = relation_residuals(rep)
        assert max(res.values()) <= 1e-12
        # spectra of the Y matrices persist along the continuation
        for k, leg in enumerate(GAMMA_D4_ZERO, start=1):
            spectrum_match(rep.gens[f"Y_1_{k}"],
                           [(complex(x), 4) for x in leg], tol=1e-7)

    def test_size_guard(self, graph_d4):
        mods = exact_rank1_modules_d4(GAMMA_D4_ZERO)
        rep0 = induced_rep_nu_zero(graph_d4, 3, GAMMA_D4_ZERO, [mods] * 3)
        with pytest.raises(SizeMismatch):
            continue_bn_representation(rep0, 0.1)
