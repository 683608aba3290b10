"""Piecewise-analytic paths in configuration space.

A path moves n marked points through segments; each segment prescribes one
motion per coordinate:

    ("fixed", z)               stationary at z
    ("line", a, b)             a + (b - a) s
    ("arc", c, r, th0, th1)    c + r exp(i(th0 + (th1 - th0) s))

with local time s in [0, 1].  Builders produce the standard generator
loops below the real axis (with a vertical riser for punctures off the
axis) and certify their winding numbers by discrete argument accumulation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import BadOrdering, DeltaTooLarge, PathTooCoarse, ShapeMismatch


def motion_at(motion, s):
    kind = motion[0]
    if kind == "fixed":
        return motion[1]
    if kind == "line":
        return motion[1] + (motion[2] - motion[1]) * s
    if kind == "arc":
        _, c, r, th0, th1 = motion
        return c + r * cmath.exp(1j * (th0 + (th1 - th0) * s))
    raise ShapeMismatch(f"unknown motion kind {kind!r}")


def motion_velocity(motion, s):
    kind = motion[0]
    if kind == "fixed":
        return 0j
    if kind == "line":
        return motion[2] - motion[1]
    if kind == "arc":
        _, c, r, th0, th1 = motion
        dth = th1 - th0
        return 1j * dth * r * cmath.exp(1j * (th0 + dth * s))
    raise ShapeMismatch(f"unknown motion kind {kind!r}")


@dataclass
class ConfigPath:
    """A concatenation of segments moving ``ncoords`` marked points."""

    ncoords: int
    segments: list  # each entry: tuple of ncoords motions
    meta: dict = field(default_factory=dict)

    def position(self, seg: int, s: float):
        return [motion_at(m, s) for m in self.segments[seg]]

    def velocity(self, seg: int, s: float):
        return [motion_velocity(m, s) for m in self.segments[seg]]

    @property
    def start(self):
        return self.position(0, 0.0)

    @property
    def end(self):
        return self.position(len(self.segments) - 1, 1.0)

    def then(self, other: "ConfigPath") -> "ConfigPath":
        """This path first, then ``other`` (endpoints must agree)."""
        if other.ncoords != self.ncoords:
            raise ShapeMismatch("coordinate count mismatch")
        if max(abs(a - b) for a, b in zip(self.end, other.start)) > 1e-12:
            raise ShapeMismatch("paths do not concatenate: endpoint mismatch")
        return ConfigPath(self.ncoords, self.segments + other.segments,
                          meta={"concat": [self.meta, other.meta]})

    def reversed(self) -> "ConfigPath":
        segs = []
        for motions in reversed(self.segments):
            rev = []
            for m in motions:
                if m[0] == "fixed":
                    rev.append(m)
                elif m[0] == "line":
                    rev.append(("line", m[2], m[1]))
                else:
                    rev.append(("arc", m[1], m[2], m[4], m[3]))
            segs.append(tuple(rev))
        return ConfigPath(self.ncoords, segs,
                          meta={"reversed": self.meta})


def _hold(points, skip=()):
    return {i: ("fixed", z) for i, z in enumerate(points) if i not in skip}


def _seg(ncoords, fixed, moving):
    out = []
    for i in range(ncoords):
        out.append(moving.get(i, fixed[i]))
    return tuple(out)


def _excursion_segments(points, coord, target, delta):
    """Move one coordinate from its slot, loop ccw around ``target``, return.

    Route: straight down to the sub-axis corridor Im = -delta, along the
    corridor to Re(target), up a vertical riser to just below the target,
    a full counterclockwise circle of radius delta, then retrace.
    """
    z0 = complex(points[coord])
    fixed = {i: ("fixed", complex(z)) for i, z in enumerate(points)}
    n = len(points)
    corridor = -1j * delta
    w0 = z0
    w1 = complex(z0.real, corridor.imag)
    w2 = complex(target.real, corridor.imag)
    w3 = target - 1j * delta
    legs = [("line", w0, w1), ("line", w1, w2)]
    if abs(w2 - w3) > 1e-15:
        legs.append(("line", w2, w3))
    circle = ("arc", complex(target), delta,
              -math.pi / 2, 3 * math.pi / 2)
    outward = legs + [circle]
    back = [("line", b, a) for _, a, b in reversed(legs)]
    segs = [_seg(n, fixed, {coord: mv}) for mv in outward + back]
    return segs


def puncture_loop(alphas, zs, k, delta=None) -> ConfigPath:
    """Loop of the first marked point around the k-th puncture (1-based).

    Punctures with nonzero imaginary part are reached via a riser from the
    sub-axis corridor; everything on the axis must be separated, and the
    excursion depth delta may not exceed a quarter of the smallest gap.
    """
    alphas = [complex(a) for a in alphas]
    zs = [complex(z) for z in zs]
    # snap punctures with a roundoff-level imaginary part onto the axis,
    # so the corridor/riser routing never aims at a zero-radius circle
    snap = 1e-12 * max([1.0] + [abs(v) for v in alphas + zs])
    alphas = [complex(a.real) if abs(a.imag) <= snap else a for a in alphas]
    if any(z.imag != 0 for z in zs):
        raise BadOrdering("marked points must start on the real axis")
    if any(b.real <= a.real for a, b in zip(zs, zs[1:])):
        raise BadOrdering("marked points must be strictly increasing")
    real_alphas = [a.real for a in alphas if a.imag == 0]
    if real_alphas and min(z.real for z in zs) <= max(real_alphas):
        raise BadOrdering("marked points must lie to the right of the "
                          "real punctures")
    real_marks = sorted(real_alphas + [z.real for z in zs])
    gaps = [b - a for a, b in zip(real_marks, real_marks[1:])]
    target = alphas[k - 1]
    if target.imag:
        gaps.append(target.imag)
        gaps.extend(abs(target.real - x) for x in real_marks)
    min_gap = min(gaps)
    if min_gap <= 0:
        raise BadOrdering("marked points and punctures must be distinct "
                          "and ordered")
    if delta is None:
        delta = 0.25 * min_gap
    elif delta > 0.25 * min_gap:
        raise DeltaTooLarge(
            f"delta = {delta:g} exceeds a quarter of the min gap "
            f"{min_gap:g}")
    segs = _excursion_segments(zs, 0, target, delta)
    return ConfigPath(len(zs), segs,
                      meta={"kind": "puncture_loop", "k": k, "delta": delta,
                            "alphas": alphas, "zs": zs})


def exchange_braid(zs, i, delta=None) -> ConfigPath:
    """Counterclockwise half-turn of z_i and z_{i+1} (1-based) about their
    midpoint; the other marked points stay put."""
    zs = [complex(z) for z in zs]
    n = len(zs)
    if not 1 <= i < n:
        raise ShapeMismatch(f"exchange index {i} out of range")
    if any(z.imag != 0 for z in zs):
        raise BadOrdering("marked points must start on the real axis")
    if any(b.real <= a.real for a, b in zip(zs, zs[1:])):
        raise BadOrdering("marked points must be strictly increasing")
    a, b = zs[i - 1], zs[i]
    c = (a + b) / 2
    r = abs(b - a) / 2
    fixed = {j: ("fixed", z) for j, z in enumerate(zs)}
    seg = _seg(n, fixed, {
        i - 1: ("arc", c, r, math.pi, 2 * math.pi),
        i: ("arc", c, r, 0.0, math.pi),
    })
    return ConfigPath(n, [seg], meta={"kind": "exchange", "i": i, "zs": zs})


# ---------------------------------------------------------------------------
# certificates


def winding_number(path: ConfigPath, coord: int, pole, samples=256) -> int:
    """Winding of coordinate ``coord`` around ``pole`` by discrete argument
    accumulation; raises when sampling is too coarse to be trustworthy."""
    pole = complex(pole)
    total = 0.0
    for seg in range(len(path.segments)):
        prev = path.position(seg, 0.0)[coord] - pole
        for j in range(1, samples + 1):
            cur = path.position(seg, j / samples)[coord] - pole
            if abs(prev) == 0 or abs(cur) == 0:
                raise PathTooCoarse("path sample hit the pole")
            dphi = cmath.phase(cur / prev)
            if abs(dphi) > 2.5:
                raise PathTooCoarse(
                    "argument jump too large; increase sampling")
            total += dphi
            prev = cur
    turns = total / (2 * math.pi)
    if abs(turns - round(turns)) > 1e-6:
        raise PathTooCoarse(f"winding {turns} is not close to an integer")
    return int(round(turns))


def min_pole_distance(path: ConfigPath, poles, samples=256) -> float:
    """Smallest sampled distance between any moving coordinate and any pole
    (fixed poles plus pairwise coordinate separations)."""
    best = math.inf
    for seg in range(len(path.segments)):
        for j in range(samples + 1):
            pos = path.position(seg, j / samples)
            for z in pos:
                for p in poles:
                    best = min(best, abs(z - complex(p)))
            for a in range(len(pos)):
                for b in range(a + 1, len(pos)):
                    if path.segments[seg][a][0] == "fixed" \
                            and path.segments[seg][b][0] == "fixed":
                        continue
                    best = min(best, abs(pos[a] - pos[b]))
    return best
