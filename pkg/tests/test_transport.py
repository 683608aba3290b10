import cmath
import math

import numpy as np
import pytest
from scipy.linalg import expm

from starmono import _kernel_py
from starmono.algebra import degenerate_regular_rep
from starmono.connection import (check_flat, curvature,
                                 cyclotomic_connection, fuchsian_connection)
from starmono.errors import (ShapeMismatch, StepUnderflow, SumNotZero,
                             ToleranceNotMet)
from starmono.paths import ConfigPath, puncture_loop
from starmono.transport import (Term, encode_path, encode_terms,
                                parallel_transport)

try:
    from starmono import _kernel_cy
except ImportError:
    _kernel_cy = None


def circle_path(center=0j, radius=1.0):
    return ConfigPath(1, [(("arc", center, radius, 0.0, 2 * math.pi),)])


class TestSinglePoleOracle:
    """One log pole: the transport around a circle is exactly exp(2 pi i M)
    because the generator commutes with itself along the path."""

    def test_matrix_exponential(self):
        rng = np.random.default_rng(5)
        m = 0.3 * (rng.standard_normal((3, 3))
                   + 1j * rng.standard_normal((3, 3)))
        terms = [Term(0, ("const", 0j), m)]
        res = parallel_transport(terms, circle_path(), tol=0.01)
        want = expm(2j * math.pi * m)
        assert np.linalg.norm(res.matrix - want) < 1e-10
        assert res.error_estimate < 1e-8

    def test_two_pole_scalar(self):
        a = np.array([[0.3 + 0.1j]])
        terms = fuchsian_connection([a, -a], [0.0, 5.0])
        loop = puncture_loop([0.0, 5.0], [7.0], 1)
        res = parallel_transport(terms, loop, tol=0.02)
        want = cmath.exp(2j * cmath.pi * (0.3 + 0.1j))
        assert abs(res.matrix[0, 0] - want) < 1e-11


class TestOrderScaling:
    def test_halving_tol_improves_by_16(self):
        a = np.array([[0.4 + 0.2j]])
        terms = fuchsian_connection([a, -a], [0.0, 5.0])
        loop = puncture_loop([0.0, 5.0], [7.0], 1)
        want = cmath.exp(2j * cmath.pi * (0.4 + 0.2j))
        errs = []
        for tol in (0.08, 0.04, 0.02):
            res = parallel_transport(terms, loop, tol=tol)
            errs.append(abs(res.matrix[0, 0] - want))
        assert errs[1] <= errs[0] / 16
        assert errs[2] <= errs[1] / 16

    def test_error_estimate_bounds_defect(self):
        a = np.array([[0.25 - 0.15j]])
        terms = fuchsian_connection([a, -a], [0.0, 5.0])
        loop = puncture_loop([0.0, 5.0], [7.0], 1)
        want = cmath.exp(2j * cmath.pi * (0.25 - 0.15j))
        res = parallel_transport(terms, loop, tol=0.02)
        assert abs(res.matrix[0, 0] - want) <= 10 * res.error_estimate


class TestBackends:
    @pytest.mark.skipif(_kernel_cy is None, reason="compiled kernel absent")
    def test_agreement(self):
        rng = np.random.default_rng(2)
        mats = 0.2 * (rng.standard_normal((2, 3, 3))
                      + 1j * rng.standard_normal((2, 3, 3)))
        terms = [Term(0, ("const", 0j), mats[0]),
                 Term(0, ("const", 4.0 + 0j), mats[1])]
        loop = puncture_loop([0.0, 4.0], [6.0], 1)
        tm, co, ki, po = encode_terms(terms)
        enc = encode_path(loop)
        f1, e1, n1 = _kernel_py.transport_path(tm, co, ki, po, enc, 0.02)
        f2, e2, n2 = _kernel_cy.transport_path(tm, co, ki, po, enc, 0.02)
        assert n1 == n2
        assert np.linalg.norm(f1 - f2) < 1e-12
        assert abs(e1 - e2) < 1e-12


class TestCertification:
    def test_certify_passes(self):
        a = np.array([[0.3 + 0.1j]])
        terms = fuchsian_connection([a, -a], [0.0, 5.0])
        loop = puncture_loop([0.0, 5.0], [7.0], 1)
        res = parallel_transport(terms, loop, tol=0.02, certify=True)
        assert "certified_diff" in res.meta

    def test_certify_fails_on_tiny_budget(self):
        a = np.array([[0.3 + 0.1j]])
        terms = fuchsian_connection([a, -a], [0.0, 5.0])
        loop = puncture_loop([0.0, 5.0], [7.0], 1)
        with pytest.raises(ToleranceNotMet):
            parallel_transport(terms, loop, tol=0.4, certify=True,
                               cert_tol=1e-16)

    def test_step_underflow_at_pole(self):
        a = np.array([[1.0 + 0j]])
        terms = [Term(0, ("const", 0j), a)]
        through = ConfigPath(1, [(("line", -1.0 + 0j, 1.0 + 0j),)])
        with pytest.raises(StepUnderflow):
            parallel_transport(terms, through, tol=0.02)

    def test_empty_terms(self):
        with pytest.raises(ShapeMismatch):
            parallel_transport([], circle_path())


class TestFlatness:
    def test_cyclotomic_connection_flat(self):
        rep = degenerate_regular_rep(2, [0.3 + 0.1j, -0.7], 0.2)
        terms = cyclotomic_connection(rep, 0.2)
        configs = [[1.0 + 0.3j, 2.5 - 0.4j], [0.7j, -1.3 + 0.1j]]
        assert check_flat(terms, configs, tol=1e-10) < 1e-12

    def test_curvature_detects_broken_relations(self):
        rep = degenerate_regular_rep(2, [0.3 + 0.1j, -0.7], 0.2)
        rep.gens["Y_2"] = rep.gens["Y_2"] + 0.05 * np.eye(rep.dim)
        rep.gens["Y_2"][0, 1] += 0.1
        terms = cyclotomic_connection(rep, 0.2)
        assert curvature(terms, [1.0 + 0.3j, 2.5 - 0.4j]) > 1e-4

    def test_sum_not_zero(self):
        a = np.array([[1.0 + 0j]])
        with pytest.raises(SumNotZero):
            fuchsian_connection([a, a], [0.0, 1.0])
