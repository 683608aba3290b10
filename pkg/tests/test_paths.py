import math

import pytest

from starmono.errors import (BadOrdering, DeltaTooLarge, PathTooCoarse,
                             ShapeMismatch)
from starmono.paths import (ConfigPath, exchange_braid, min_pole_distance,
                            puncture_loop, winding_number)

ALPHAS = [0.0, 1.0, 3.0, 4.5]
ZS = [6.0, 7.0]


class TestPunctureLoop:
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_winding_certificate(self, k):
        loop = puncture_loop(ALPHAS, ZS, k)
        for j, a in enumerate(ALPHAS, start=1):
            assert winding_number(loop, 0, a) == (1 if j == k else 0)
        # the stationary coordinate winds around nothing
        for a in ALPHAS:
            assert winding_number(loop, 1, a) == 0

    def test_closed(self):
        loop = puncture_loop(ALPHAS, ZS, 2)
        assert max(abs(a - b) for a, b in zip(loop.start, loop.end)) < 1e-14

    def test_clearance(self):
        loop = puncture_loop(ALPHAS, ZS, 3)
        delta = loop.meta["delta"]
        assert min_pole_distance(loop, ALPHAS) >= delta / 2

    def test_bad_ordering(self):
        with pytest.raises(BadOrdering):
            puncture_loop(ALPHAS, [2.0], 1)
        with pytest.raises(BadOrdering):
            puncture_loop(ALPHAS, [7.0, 6.0], 1)
        with pytest.raises(BadOrdering):
            puncture_loop(ALPHAS, [6.0 + 0.5j], 1)

    def test_delta_too_large(self):
        with pytest.raises(DeltaTooLarge):
            puncture_loop(ALPHAS, ZS, 1, delta=0.5)

    def test_complex_puncture(self):
        alphas = [0.0, 1.0, 100.0, 0.4 + 0.3j]
        loop = puncture_loop(alphas, [101.0], 4)
        for j, a in enumerate(alphas, start=1):
            assert winding_number(loop, 0, a) == (1 if j == 4 else 0)
        assert max(abs(a - b) for a, b in zip(loop.start, loop.end)) < 1e-14

    def test_reverse_cancels(self):
        loop = puncture_loop(ALPHAS, ZS, 1)
        closed = loop.then(loop.reversed())
        assert winding_number(closed, 0, ALPHAS[0]) == 0


class TestExchange:
    def test_endpoints_swap(self):
        br = exchange_braid(ZS, 1)
        assert abs(br.start[0] - ZS[0]) < 1e-14
        assert abs(br.end[0] - ZS[1]) < 1e-14
        assert abs(br.end[1] - ZS[0]) < 1e-14

    def test_half_turn_is_ccw(self):
        br = exchange_braid(ZS, 1)
        mid = (ZS[0] + ZS[1]) / 2
        # both strands stay on the circle and move counterclockwise
        z0 = br.position(0, 0.25)[0] - mid
        z1 = br.position(0, 0.5)[0] - mid
        assert math.atan2(z1.imag, z1.real) > math.atan2(z0.imag, z0.real)

    def test_bad_index(self):
        with pytest.raises(ShapeMismatch):
            exchange_braid(ZS, 2)

    def test_bad_ordering(self):
        with pytest.raises(BadOrdering):
            exchange_braid([7.0, 6.0], 1)


class TestCertificates:
    def test_too_coarse(self):
        loop = puncture_loop(ALPHAS, ZS, 1)
        with pytest.raises(PathTooCoarse):
            winding_number(loop, 0, ALPHAS[0], samples=2)

    def test_concat_mismatch(self):
        a = puncture_loop(ALPHAS, ZS, 1)
        b = exchange_braid(ZS, 1)
        with pytest.raises(ShapeMismatch):
            b.then(b)  # endpoints permuted: does not close up

    def test_position_velocity_consistency(self):
        loop = puncture_loop(ALPHAS, ZS, 2)
        eps = 1e-7
        for seg in range(len(loop.segments)):
            z0 = loop.position(seg, 0.3)[0]
            z1 = loop.position(seg, 0.3 + eps)[0]
            v = loop.velocity(seg, 0.3)[0]
            assert abs((z1 - z0) / eps - v) < 1e-5
