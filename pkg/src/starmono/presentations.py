"""Formal presentations: generator labels and relation word-polynomials.

A relation is a finite sum of terms ``coeff * word`` asserted to vanish,
where a word is a tuple of atoms.  An atom is a generator label or
``("inv", label)`` for its inverse (only meaningful in float mode).

Generator label conventions (all indices 1-based):
    "s_i_j"  transposition (i j), i < j
    "Y_i"    cyclotomic generator of B_{n,ell}
    "Y_i_k"  leg-k generator of the rational algebra of rank n
    "T_i"    finite Hecke generators
    "U"      Ariki-Koike cyclic generator
    "U_k"    puncture generators of the multiplicative algebra
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations


def s_label(i: int, j: int) -> str:
    i, j = min(i, j), max(i, j)
    return f"s_{i}_{j}"


def inv(label: str):
    return ("inv", label)


@dataclass(frozen=True)
class Relation:
    name: str
    terms: tuple  # of (coeff, word)


@dataclass(frozen=True)
class Presentation:
    name: str
    generators: tuple
    relations: tuple
    invertible: frozenset = field(default_factory=frozenset)


def _rel(name, *terms):
    return Relation(name=name, terms=tuple((c, tuple(w)) for c, w in terms))


def _poly_in(label: str, roots, name: str) -> Relation:
    """prod_j (X - r_j) = 0 expanded into monomials of X = label."""
    coeffs = [1]  # coeffs[d] multiplies X^d, built by sequential root folding
    for r in roots:
        nxt = [0] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            nxt[d + 1] = nxt[d + 1] + c
            nxt[d] = nxt[d] - c * r
        coeffs = nxt
    terms = [(c, (label,) * d) for d, c in enumerate(coeffs)]
    return _rel(name, *terms)


def _symmetric_group_relations(n: int):
    rels = []
    for i, j in combinations(range(1, n + 1), 2):
        s = s_label(i, j)
        rels.append(_rel(f"{s}^2=1", (1, (s, s)), (-1, ())))
    for (i, j), (k, l) in combinations(combinations(range(1, n + 1), 2), 2):
        a, b = s_label(i, j), s_label(k, l)
        if {i, j} & {k, l}:
            # overlapping transpositions: s_ij s_jk s_ij = s_ik etc.
            (c,) = {i, j} & {k, l}
            p = ({i, j} - {c}).pop()
            q = ({k, l} - {c}).pop()
            rels.append(_rel(f"{a}{b}{a}={s_label(p, q)}",
                             (1, (a, b, a)), (-1, (s_label(p, q),))))
        else:
            rels.append(_rel(f"[{a},{b}]=0", (1, (a, b)), (-1, (b, a))))
    return rels


def bnl_presentation(n: int, ell: int, lam, nu) -> Presentation:
    """The degenerate cyclotomic Hecke algebra on S_n and Y_1..Y_n."""
    gens = [s_label(i, j) for i, j in combinations(range(1, n + 1), 2)]
    gens += [f"Y_{i}" for i in range(1, n + 1)]
    rels = _symmetric_group_relations(n)
    for i, j in combinations(range(1, n + 1), 2):
        s = s_label(i, j)
        rels.append(_rel(f"{s}Y_{i}=Y_{j}{s}",
                         (1, (s, f"Y_{i}")), (-1, (f"Y_{j}", s))))
        rels.append(_rel(f"{s}Y_{j}=Y_{i}{s}",
                         (1, (s, f"Y_{j}")), (-1, (f"Y_{i}", s))))
        for h in range(1, n + 1):
            if h not in (i, j):
                rels.append(_rel(f"[{s},Y_{h}]=0",
                                 (1, (s, f"Y_{h}")), (-1, (f"Y_{h}", s))))
        rels.append(_rel(
            f"[Y_{i},Y_{j}]=nu(Y_{i}-Y_{j}){s}",
            (1, (f"Y_{i}", f"Y_{j}")), (-1, (f"Y_{j}", f"Y_{i}")),
            (-nu, (f"Y_{i}", s)), (nu, (f"Y_{j}", s))))
    for i in range(1, n + 1):
        rels.append(_poly_in(f"Y_{i}", lam, f"prod(Y_{i}-lambda_j)=0"))
    return Presentation(name=f"B_{n},{ell}", generators=tuple(gens),
                        relations=tuple(rels))


def bn_presentation(graph, n: int, gamma, nu) -> Presentation:
    """The rational star-graph algebra of rank n (generators Y_{i,k}, S_n)."""
    m = graph.m
    gens = [s_label(i, j) for i, j in combinations(range(1, n + 1), 2)]
    gens += [f"Y_{i}_{k}" for i in range(1, n + 1) for k in range(1, m + 1)]
    rels = _symmetric_group_relations(n)
    for i, j in combinations(range(1, n + 1), 2):
        s = s_label(i, j)
        for k in range(1, m + 1):
            rels.append(_rel(f"{s}Y_{i}_{k}=Y_{j}_{k}{s}",
                             (1, (s, f"Y_{i}_{k}")), (-1, (f"Y_{j}_{k}", s))))
            rels.append(_rel(f"{s}Y_{j}_{k}=Y_{i}_{k}{s}",
                             (1, (s, f"Y_{j}_{k}")), (-1, (f"Y_{i}_{k}", s))))
            for h in range(1, n + 1):
                if h not in (i, j):
                    rels.append(_rel(f"[{s},Y_{h}_{k}]=0",
                                     (1, (s, f"Y_{h}_{k}")),
                                     (-1, (f"Y_{h}_{k}", s))))
            rels.append(_rel(
                f"[Y_{i}_{k},Y_{j}_{k}]=nu(Y_{i}_{k}-Y_{j}_{k}){s}",
                (1, (f"Y_{i}_{k}", f"Y_{j}_{k}")),
                (-1, (f"Y_{j}_{k}", f"Y_{i}_{k}")),
                (-nu, (f"Y_{i}_{k}", s)), (nu, (f"Y_{j}_{k}", s))))
            for l in range(1, m + 1):
                if l != k:
                    rels.append(_rel(f"[Y_{i}_{k},Y_{j}_{l}]=0",
                                     (1, (f"Y_{i}_{k}", f"Y_{j}_{l}")),
                                     (-1, (f"Y_{j}_{l}", f"Y_{i}_{k}"))))
    for i in range(1, n + 1):
        for k in range(1, m + 1):
            rels.append(_poly_in(f"Y_{i}_{k}", gamma[k - 1],
                                 f"prod(Y_{i}_{k}-gamma_{k}j)=0"))
        sum_terms = [(1, (f"Y_{i}_{k}",)) for k in range(1, m + 1)]
        sum_terms += [(-nu, (s_label(i, j),))
                      for j in range(1, n + 1) if j != i]
        rels.append(_rel(f"sum_k Y_{i}_k=nu sum s", *sum_terms))
    return Presentation(name=f"B_{n}({graph.d})", generators=tuple(gens),
                        relations=tuple(rels))


def _hecke_t_relations(n: int, t):
    rels = []
    for i in range(1, n - 1):
        rels.append(_rel(f"T_{i}T_{i+1}T_{i}=T_{i+1}T_{i}T_{i+1}",
                         (1, (f"T_{i}", f"T_{i+1}", f"T_{i}")),
                         (-1, (f"T_{i+1}", f"T_{i}", f"T_{i+1}"))))
    for i, j in combinations(range(1, n), 2):
        if j - i > 1:
            rels.append(_rel(f"[T_{i},T_{j}]=0",
                             (1, (f"T_{i}", f"T_{j}")),
                             (-1, (f"T_{j}", f"T_{i}"))))
    for i in range(1, n):
        # T - T^{-1} = t - t^{-1}, multiplied through by T
        rels.append(_rel(f"T_{i}^2-(t-1/t)T_{i}-1=0",
                         (1, (f"T_{i}", f"T_{i}")),
                         (-(t - 1 / t), (f"T_{i}",)), (-1, ())))
    return rels


def hnl_presentation(n: int, ell: int, v, t) -> Presentation:
    """The Ariki-Koike algebra on T_1..T_{n-1} and U."""
    gens = [f"T_{i}" for i in range(1, n)] + ["U"]
    rels = _hecke_t_relations(n, t)
    for j in range(2, n):
        rels.append(_rel(f"[U,T_{j}]=0",
                         (1, ("U", f"T_{j}")), (-1, (f"T_{j}", "U"))))
    if n >= 2:
        rels.append(_rel("UT_1UT_1=T_1UT_1U",
                         (1, ("U", "T_1", "U", "T_1")),
                         (-1, ("T_1", "U", "T_1", "U"))))
    rels.append(_poly_in("U", v, "prod(U-v_j)=0"))
    return Presentation(name=f"H_{n},{ell}", generators=tuple(gens),
                        relations=tuple(rels), invertible=frozenset(gens))


def hn_presentation(graph, n: int, u, t) -> Presentation:
    """The multiplicative star-graph algebra on U_1..U_m, T_1..T_{n-1}."""
    m = graph.m
    gens = [f"U_{k}" for k in range(1, m + 1)] + [f"T_{i}" for i in range(1, n)]
    rels = []
    prod_word = [f"U_{k}" for k in range(1, m + 1)]
    prod_word += [f"T_{i}" for i in range(1, n)]
    prod_word += [f"T_{i}" for i in range(n - 1, 0, -1)]
    rels.append(_rel("(U_1..U_m)(T_1..T_{n-1}^2..T_1)=1",
                     (1, tuple(prod_word)), (-1, ())))
    rels.extend(_hecke_t_relations(n, t))
    for j in range(1, m + 1):
        for i in range(2, n):
            rels.append(_rel(f"[U_{j},T_{i}]=0",
                             (1, (f"U_{j}", f"T_{i}")),
                             (-1, (f"T_{i}", f"U_{j}"))))
        if n >= 2:
            w = (f"T_1", f"U_{j}", f"T_1")
            rels.append(_rel(f"[U_{j},T_1U_{j}T_1]=0",
                             (1, (f"U_{j}",) + w), (-1, w + (f"U_{j}",))))
    if n >= 2:
        for k in range(1, m + 1):
            for j in range(k + 1, m + 1):
                w = (inv("T_1"), f"U_{j}", "T_1")
                rels.append(_rel(f"[U_{k},T_1^-1U_{j}T_1]=0",
                                 (1, (f"U_{k}",) + w), (-1, w + (f"U_{k}",))))
    for k in range(1, m + 1):
        rels.append(_poly_in(f"U_{k}", u[k - 1], f"prod(U_{k}-u_{k}j)=0"))
    return Presentation(name=f"H_{n}({graph.d})", generators=tuple(gens),
                        relations=tuple(rels), invertible=frozenset(gens))
