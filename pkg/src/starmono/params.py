"""Star-shaped diagrams and parameter packs.

Two coordinate systems are supported: the rational pack (gamma, nu) with its
derived (mu, xi, hbar), and the multiplicative pack (u, t, q).  Parameters
are kept exact (Gaussian rationals) whenever the inputs are exact; float
views are derived on demand.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (FiniteDynkin, NotAffine, ShapeMismatch, ZeroParameter)
from .exactnum import QQc, exactify, is_exact

#: leg profiles of the affine star graphs, sorted ascending
AFFINE_PROFILES = {(2, 2, 2, 2), (3, 3, 3), (2, 4, 4), (2, 3, 6)}


@dataclass(frozen=True)
class StarGraph:
    """A star-shaped tree with one m-valent node and legs of d_k vertices.

    Legs are stored sorted ascending, so the m-th leg is always a longest
    one and ell == d[-1].  Vertex labels: "i0" is the node, ("leg", k, j)
    is the j-th vertex (from the node, 1-based) of leg k.
    """

    d: tuple
    affine: bool

    @property
    def m(self) -> int:
        return len(self.d)

    @property
    def ell(self) -> int:
        return self.d[-1]

    def leg_vertices(self, k: int):
        """Labels of the k-th leg's non-node vertices, nearest first."""
        return [("leg", k, j) for j in range(1, self.d[k - 1])]

    def vertices(self):
        out = ["i0"]
        for k in range(1, self.m + 1):
            out.extend(self.leg_vertices(k))
        return out


def build_star_graph(d) -> StarGraph:
    """Validate a leg profile and return the graph.

    Rejects finite Dynkin shapes: star graphs with sum(1/d_k) > m - 2,
    fewer than three legs, or a leg of length < 2.  The affine flag is set
    exactly on the four critical profiles.
    """
    d = tuple(int(x) for x in d)
    if not d:
        raise FiniteDynkin("empty leg profile")
    if len(d) < 3 or any(x < 2 for x in d):
        raise FiniteDynkin(f"leg profile {d} is a finite Dynkin diagram (type A/D)")
    d = tuple(sorted(d))
    m = len(d)
    s = sum(Fraction(1, x) for x in d)
    if s > m - 2:
        raise FiniteDynkin(
            f"leg profile {d} has sum(1/d_k)={s} > m-2={m - 2}: finite Dynkin type")
    affine = s == m - 2
    assert affine == (d in AFFINE_PROFILES)
    return StarGraph(d=d, affine=affine)


def _coerce_pack(gamma, nu):
    """Return (gamma, nu, exact_flag) with uniform scalar types."""
    flat = [x for leg in gamma for x in leg] + [nu]
    if all(is_exact(x) for x in flat):
        return ([[exactify(x) for x in leg] for leg in gamma],
                exactify(nu), True)
    return ([[complex(x) for x in leg] for leg in gamma], complex(nu), False)


@dataclass(frozen=True)
class RationalParams:
    """The rational parameter pack (gamma, nu) and its derived quantities.

    gamma[k-1][j-1] is gamma_{kj}; mu is keyed by vertex labels; xi has one
    entry per leg and sums to zero.  lambda (the cyclotomic subalgebra
    parameters) is an alias for the m-th leg of gamma.
    """

    graph: StarGraph
    gamma: tuple
    nu: object
    mu: dict = field(compare=False)
    xi: tuple = field(compare=False)
    exact: bool = True

    @property
    def lam(self):
        """Cyclotomic parameters of the m-th leg: lambda_j = gamma_{m j}."""
        return self.gamma[-1]

    def gamma_float(self):
        return [[complex(x) for x in leg] for leg in self.gamma]

    def nu_float(self) -> complex:
        return complex(self.nu)


def gamma_to_mu_xi(graph: StarGraph, gamma, nu) -> RationalParams:
    """Solve the linear change of coordinates gamma -> (mu, xi).

    The unique solution with sum(xi) = 0 is
        mu_node     = sum_k gamma_{k1},
        xi_k        = gamma_{k1} - mu_node / m,
        mu_{leg k,j} = gamma_{k,j+1} - gamma_{k,j}.
    """
    if len(gamma) != graph.m or any(len(leg) != dk for leg, dk in zip(gamma, graph.d)):
        raise ShapeMismatch(
            f"gamma shape {[len(leg) for leg in gamma]} != legs {graph.d}")
    gamma, nu, exact = _coerce_pack(gamma, nu)
    m = graph.m
    mu_node = sum((leg[0] for leg in gamma),
                  QQc(0) if exact else 0j)
    mu = {"i0": mu_node}
    xi = []
    for k in range(1, m + 1):
        leg = gamma[k - 1]
        xi.append(leg[0] - mu_node / m)
        for j in range(1, graph.d[k - 1]):
            mu[("leg", k, j)] = leg[j] - leg[j - 1]
    return RationalParams(graph=graph, gamma=tuple(tuple(l) for l in gamma),
                          nu=nu, mu=mu, xi=tuple(xi), exact=exact)


def mu_xi_to_gamma(graph: StarGraph, mu: dict, xi, nu) -> RationalParams:
    """Inverse of gamma_to_mu_xi: rebuild gamma from (mu, xi)."""
    if len(xi) != graph.m:
        raise ShapeMismatch("xi length != leg count")
    gamma = []
    for k in range(1, graph.m + 1):
        leg = []
        acc = mu["i0"] / graph.m + xi[k - 1]
        leg.append(acc)
        for j in range(1, graph.d[k - 1]):
            acc = acc + mu[("leg", k, j)]
            leg.append(acc)
        gamma.append(leg)
    return gamma_to_mu_xi(graph, gamma, nu)


def hbar_of(params: RationalParams):
    """The affine obstruction hbar = ell * sum_{k,j} gamma_{kj} / d_k."""
    g = params.graph
    if not g.affine:
        raise NotAffine(f"graph {g.d} is not affine")
    acc = QQc(0) if params.exact else 0j
    for dk, leg in zip(g.d, params.gamma):
        leg_sum = sum(leg, QQc(0) if params.exact else 0j)
        weight = Fraction(g.ell, dk) if params.exact else g.ell / dk
        acc = acc + leg_sum * weight
    return acc


@dataclass(frozen=True)
class MultiplicativeParams:
    """The multiplicative pack (u, t, q); u[k-1][j-1] is u_{kj}."""

    graph: StarGraph
    u: tuple
    t: complex
    q: complex

    @property
    def v(self):
        """Ariki-Koike parameters: v_j = u_{mj}."""
        return self.u[-1]

    def validate(self) -> None:
        if any(x == 0 for leg in self.u for x in leg) or self.t == 0:
            raise ZeroParameter("u and t entries must be nonzero")


def q_of_u(graph: StarGraph, u) -> complex:
    """q = prod_{k,j} u_{kj}^(-ell/d_k); requires the affine divisibility."""
    if not graph.affine:
        raise NotAffine("q is defined for affine graphs")
    q = 1.0 + 0j
    for dk, leg in zip(graph.d, u):
        e = graph.ell // dk
        assert e * dk == graph.ell
        for x in leg:
            q *= complex(x) ** (-e)
    return q


def exponentiate_params(params: RationalParams) -> MultiplicativeParams:
    """Map (gamma, nu) -> (u, t, q): u = exp(2 pi i gamma), t = exp(-pi i nu).

    For affine graphs q is evaluated as exp(-2 pi i hbar), which agrees with
    the product formula for u built this way; for non-affine graphs q is
    set to None.
    """
    g = params.graph
    u = tuple(tuple(cmath.exp(2j * cmath.pi * complex(x)) for x in leg)
              for leg in params.gamma)
    t = cmath.exp(-1j * cmath.pi * complex(params.nu))
    q = cmath.exp(-2j * cmath.pi * complex(hbar_of(params))) if g.affine else None
    return MultiplicativeParams(graph=g, u=u, t=t, q=q)


def sahi_parameters(t0, tn, u0, un, q):
    """The 4x2 u-table of the D4-tilde specialization.

    u_{11} = q t0, u_{12} = -q/t0, u_{21} = u0, u_{22} = -1/u0,
    u_{31} = un, u_{32} = -1/un, u_{41} = tn, u_{42} = -1/tn.
    """
    vals = [complex(x) for x in (t0, tn, u0, un, q)]
    if any(x == 0 for x in vals):
        raise ZeroParameter("sahi parameters must be nonzero")
    t0, tn, u0, un, q = vals
    return ((q * t0, -q / t0),
            (u0, -1 / u0),
            (un, -1 / un),
            (tn, -1 / tn))


def sahi_parameters_inverse(u):
    """Recover (t0, tn, u0, un, q) from a Sahi u-table.

    The branch of q = sqrt(-u11*u12) is chosen so that the table is
    reproduced; raises ShapeMismatch when no branch does.
    """
    if len(u) != 4 or any(len(leg) != 2 for leg in u):
        raise ShapeMismatch("a Sahi table has 4 legs of 2 entries")
    u = [[complex(x) for x in leg] for leg in u]
    q2 = -u[0][0] * u[0][1]
    for q in (cmath.sqrt(q2), -cmath.sqrt(q2)):
        t0 = u[0][0] / q
        cand = (t0, u[3][0], u[1][0], u[2][0], q)
        got = sahi_parameters(*cand)
        err = max(abs(a - b) for lg, lh in zip(got, u) for a, b in zip(lg, lh))
        if err < 1e-9 * max(1.0, max(abs(x) for leg in u for x in leg)):
            return cand
    raise ShapeMismatch("u-table is not of Sahi form")


# ---------------------------------------------------------------------------
# parameter files

def params_to_json(params: RationalParams) -> dict:
    from .serialize import scalar_to_json
    return {
        "d": list(params.graph.d),
        "gamma": [[scalar_to_json(x) for x in leg] for leg in params.gamma],
        "nu": scalar_to_json(params.nu),
    }


def params_from_json(doc: dict) -> RationalParams:
    from .serialize import scalar_from_json
    graph = build_star_graph(doc["d"])
    gamma = [[scalar_from_json(x) for x in leg] for leg in doc["gamma"]]
    nu = scalar_from_json(doc.get("nu", ["0", "0"]))
    return gamma_to_mu_xi(graph, gamma, nu)
