"""Command-line interface.

Every command reads rational parameters in exact form ("p/q" strings),
embeds its seed, tolerances, and contour data in the output, and writes
deterministic files: replaying a command reproduces the output byte for
byte.

Exit codes: 0 success, 2 invalid parameters or inputs, 3 a numerical
procedure failed to converge, 4 a certification check failed.
"""

from __future__ import annotations

import sys
from fractions import Fraction

import click

from .algebra import (MatrixRep, check_relations, degenerate_regular_rep,
                      exact_rank1_modules_d4, induced_rep_nu_zero,
                      relation_residuals, spectrum_match)
from .ds import (additive_class_specs, continue_bn_representation,
                 multiplicative_class_specs, solve_additive_ds,
                 solve_multiplicative_ds, irreducibility_check,
                 tangent_dimension)
from .errors import (CertificationError, NumericalError, ObstructionError,
                     ShapeMismatch, ValidationError)
from .monodromy import monodromy_functor, monodromy_rep
from .params import (build_star_graph, exponentiate_params, gamma_to_mu_xi,
                     hbar_of, params_to_json)
from .presentations import bn_presentation
from .rhflow import (commuting_diagram_check, isomonodromic_flow,
                     riemann_hilbert)
from .serialize import (dump_json, load_json, matrix_from_json,
                        matrix_to_json, scalar_from_json, scalar_to_json)


def _parse_fraction(text):
    return Fraction(text.strip())


def _parse_gamma(text):
    return [[_parse_fraction(x) for x in leg.split(",")]
            for leg in text.strip().split(";")]


def _parse_complex(text):
    return complex(text.strip().replace("i", "j"))


def _parse_complex_list(text):
    return [_parse_complex(x) for x in text.strip().split(",")]


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (ValidationError, ObstructionError) as exc:
            click.echo(f"invalid input: {exc}", err=True)
            sys.exit(2)
        except NumericalError as exc:
            click.echo(f"no convergence: {exc}", err=True)
            sys.exit(3)
        except CertificationError as exc:
            click.echo(f"certification failed: {exc}", err=True)
            sys.exit(4)


@click.group(cls=_Group)
def main():
    """Star-graph algebras, Deligne-Simpson problems, monodromy, and
    isomonodromic flow."""


_OPT_D = click.option("--d", "d_text", required=True,
                      help="leg profile, e.g. 2,2,2,2")
_OPT_GAMMA = click.option("--gamma", "gamma_text", required=True,
                          help="gamma table; legs split by ';', entries "
                               "by ',', exact fractions, e.g. "
                               "1/5,-2/5;1/7,-3/7;...")
_OPT_NU = click.option("--nu", "nu_text", default="0", show_default=True,
                       help="deformation parameter, exact fraction")


def _params_from_options(d_text, gamma_text, nu_text):
    graph = build_star_graph(int(x) for x in d_text.split(","))
    return gamma_to_mu_xi(graph, _parse_gamma(gamma_text),
                          _parse_fraction(nu_text))


@main.command("params")
@_OPT_D
@_OPT_GAMMA
@_OPT_NU
@click.option("-o", "--output", type=click.Path(), default=None)
def params_cmd(d_text, gamma_text, nu_text, output):
    """Validate a rational parameter pack and print its derived data."""
    params = _params_from_options(d_text, gamma_text, nu_text)
    mult = exponentiate_params(params)
    doc = params_to_json(params)
    doc["mu"] = {str(k): scalar_to_json(v)
                 for k, v in sorted(params.mu.items(), key=lambda kv:
                                    str(kv[0]))}
    doc["xi"] = [scalar_to_json(x) for x in params.xi]
    doc["hbar"] = scalar_to_json(hbar_of(params))
    doc["affine"] = params.graph.affine
    doc["u"] = [[scalar_to_json(x) for x in leg] for leg in mult.u]
    doc["t"] = scalar_to_json(mult.t)
    doc["q"] = scalar_to_json(mult.q) if mult.q is not None else None
    if output:
        dump_json(doc, output)
    click.echo(f"ok: {params.graph.d} affine={params.graph.affine} "
               f"hbar={complex(hbar_of(params))}")


@main.command("algebra")
@click.option("--n", type=int, required=True)
@click.option("--lam", "lam_text", required=True,
              help="cyclotomic parameters, e.g. 1/3,-1/5")
@_OPT_NU
def algebra_cmd(n, lam_text, nu_text):
    """Build the regular representation of the degenerate cyclotomic
    algebra and certify its defining relations exactly."""
    lam = [_parse_fraction(x) for x in lam_text.split(",")]
    rep = degenerate_regular_rep(n, lam, _parse_fraction(nu_text))
    check_relations(rep, exact=True)
    click.echo(f"ok: dimension {rep.dim}, relations hold exactly")


@main.command("solve-ds")
@_OPT_D
@_OPT_GAMMA
@_OPT_NU
@click.option("--rank", type=int, default=1, show_default=True)
@click.option("--kind", type=click.Choice(["additive", "multiplicative"]),
              default="additive", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("-o", "--output", type=click.Path(), default=None)
def solve_ds_cmd(d_text, gamma_text, nu_text, rank, kind, seed, tol, output):
    """Solve the additive or multiplicative Deligne-Simpson problem in
    the classes prescribed by the parameters."""
    params = _params_from_options(d_text, gamma_text, nu_text)
    if kind == "additive":
        specs = additive_class_specs(params, rank)
        sol = solve_additive_ds(specs, seed=seed, tol=tol)
    else:
        specs = multiplicative_class_specs(exponentiate_params(params), rank)
        sol = solve_multiplicative_ds(specs, seed=seed, tol=tol)
    for x, spec in zip(sol.matrices, specs):
        spectrum_match(x, list(spec.eigenvalues), tol=1e-7)
    irr = irreducibility_check(sol.matrices)
    report = tangent_dimension(sol)
    doc = {
        "kind": kind,
        "d": list(params.graph.d),
        "rank": rank,
        "seed": seed,
        "tol": tol,
        "residual": sol.residual,
        "irreducible": irr,
        "moduli_dimension": report.moduli,
        "matrices": [matrix_to_json(x) for x in sol.matrices],
        "classes": [[[scalar_to_json(v), int(m)]
                     for v, m in spec.eigenvalues] for spec in specs],
    }
    if output:
        dump_json(doc, output)
    click.echo(f"ok: residual {sol.residual:.3e}, irreducible={irr}, "
               f"moduli dimension {report.moduli}")


def _rep_to_json(rep):
    return {
        "d": list(rep.meta["graph"].d),
        "n": rep.meta["n"],
        "gamma": [[scalar_to_json(x) for x in leg]
                  for leg in rep.meta["gamma"]],
        "nu": scalar_to_json(rep.meta["nu"]),
        "dim": rep.dim,
        "gens": {k: matrix_to_json(v) for k, v in sorted(rep.gens.items())},
    }


def _rep_from_json(doc):
    graph = build_star_graph(doc["d"])
    gamma = [[scalar_from_json(x) for x in leg] for leg in doc["gamma"]]
    nu = scalar_from_json(doc["nu"])
    gens = {k: matrix_from_json(v) for k, v in doc["gens"].items()}
    pres = bn_presentation(graph, doc["n"],
                           [[complex(x) for x in leg] for leg in gamma],
                           complex(nu))
    return MatrixRep(presentation=pres, gens=gens, dim=doc["dim"],
                     exact=False,
                     meta={"kind": "loaded", "graph": graph, "n": doc["n"],
                           "gamma": gamma, "nu": complex(nu)})


def _build_continued_rep(params, rank, steps):
    gamma = params.gamma
    flips = [(), (1, 2), (1,), (2,)]
    modules = [exact_rank1_modules_d4(gamma, flip=flips[i % 4])
               for i in range(rank)]
    rep0 = induced_rep_nu_zero(params.graph, rank, gamma, modules)
    nu = complex(params.nu)
    if nu == 0:
        return rep0.copy_float()
    return continue_bn_representation(rep0, nu, steps=steps)


@main.command("continue-rep")
@_OPT_D
@_OPT_GAMMA
@_OPT_NU
@click.option("--rank", type=int, default=1, show_default=True)
@click.option("--steps", type=int, default=8, show_default=True)
@click.option("-o", "--output", type=click.Path(), required=True)
def continue_rep_cmd(d_text, gamma_text, nu_text, rank, steps, output):
    """Induce a representation from exact rank-1 data and continue it
    from nu = 0 to the requested nu."""
    params = _params_from_options(d_text, gamma_text, nu_text)
    rep = _build_continued_rep(params, rank, steps)
    res = max(relation_residuals(rep).values())
    doc = _rep_to_json(rep)
    doc["max_relation_residual"] = res
    doc["steps"] = steps
    dump_json(doc, output)
    click.echo(f"ok: dimension {rep.dim}, relation residual {res:.3e}")


@main.command("monodromy")
@click.option("--rep", "rep_path", type=click.Path(exists=True),
              required=True, help="output of continue-rep")
@click.option("--alphas", "alphas_text", required=True,
              help="puncture positions, e.g. 0,1,3,4.5")
@click.option("--tol", type=float, default=0.02, show_default=True)
@click.option("--check", "check_tol", type=float, default=1e-6,
              show_default=True,
              help="largest admissible relation residual of the result")
@click.option("-o", "--output", type=click.Path(), default=None)
def monodromy_cmd(rep_path, alphas_text, tol, check_tol, output):
    """Transport the multi-point system of a representation and certify
    the multiplicative relations of its monodromy."""
    rep = _rep_from_json(load_json(rep_path))
    alphas = _parse_complex_list(alphas_text)
    data = monodromy_functor(rep, alphas, rep.meta["nu"], tol=tol)
    res = max(relation_residuals(monodromy_rep(data)).values())
    if res > check_tol:
        raise CertificationError(
            f"monodromy relation residual {res:.3e} > {check_tol:g}")
    doc = {
        "alphas": [scalar_to_json(a) for a in data.alphas],
        "zs": [scalar_to_json(z) for z in data.zs],
        "tol": tol,
        "steps": data.meta["steps"],
        "error_estimate": data.meta["error_estimate"],
        "max_relation_residual": res,
        "u": [matrix_to_json(x) for x in data.u_mats],
        "t": [matrix_to_json(x) for x in data.t_mats],
    }
    if output:
        dump_json(doc, output)
    click.echo(f"ok: {data.meta['steps']} steps, relation residual "
               f"{res:.3e}")


@main.command("rh")
@click.option("--input", "input_path", type=click.Path(exists=True),
              required=True, help="output of solve-ds --kind additive")
@click.option("--alphas", "alphas_text", required=True)
@click.option("--tol", type=float, default=0.02, show_default=True)
@click.option("--max-defect", type=float, default=1e-6, show_default=True,
              help="largest admissible defect of the ordered product")
@click.option("-o", "--output", type=click.Path(), default=None)
def rh_cmd(input_path, alphas_text, tol, max_defect, output):
    """Monodromy of the Fuchsian system of a zero-sum residue tuple."""
    doc = load_json(input_path)
    if doc.get("kind") != "additive":
        raise ShapeMismatch("input must be an additive residue tuple")
    mats = [matrix_from_json(m) for m in doc["matrices"]]
    alphas = _parse_complex_list(alphas_text)
    rh = riemann_hilbert(mats, alphas, tol=tol)
    if rh.product_residual > max_defect:
        raise CertificationError(
            f"ordered product defect {rh.product_residual:.3e} "
            f"> {max_defect:g}")
    out = {
        "alphas": [scalar_to_json(a) for a in rh.alphas],
        "zs": [scalar_to_json(z) for z in rh.zs],
        "tol": tol,
        "steps": rh.meta["steps"],
        "error_estimate": rh.meta["error_estimate"],
        "product_residual": rh.product_residual,
        "matrices": [matrix_to_json(x) for x in rh.matrices],
    }
    if output:
        dump_json(out, output)
    click.echo(f"ok: product defect {rh.product_residual:.3e}")


@main.command("diagram")
@_OPT_D
@_OPT_GAMMA
@_OPT_NU
@click.option("--rank", type=int, default=1, show_default=True)
@click.option("--alphas", "alphas_text", required=True)
@click.option("--tol", type=float, default=0.02, show_default=True)
@click.option("--gap-tol", type=float, default=1e-6, show_default=True)
def diagram_cmd(d_text, gamma_text, nu_text, rank, alphas_text, tol,
                gap_tol):
    """Certify that compressing then solving the Fuchsian system equals
    taking full monodromy then compressing, up to conjugation."""
    params = _params_from_options(d_text, gamma_text, nu_text)
    rep = _build_continued_rep(params, rank, steps=8)
    alphas = _parse_complex_list(alphas_text)
    report = commuting_diagram_check(rep, alphas, tol=tol)
    if report.invariant_gap > gap_tol or not report.match.matched:
        raise CertificationError(
            f"diagram mismatch: invariant gap {report.invariant_gap:.3e}, "
            f"conjugacy residual {report.match.residual:.3e}")
    click.echo(f"ok: invariant gap {report.invariant_gap:.3e}, "
               f"conjugacy residual {report.match.residual:.3e}")


@main.command("flow")
@_OPT_D
@_OPT_GAMMA
@_OPT_NU
@click.option("--kappas", "kappas_text", required=True,
              help="cross-ratio path, e.g. 0.5,0.47+0.07i,0.4+0.1i")
@click.option("--anchor", type=float, default=6.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=0.04, show_default=True)
@click.option("--fit-tol", type=float, default=1e-7, show_default=True)
@click.option("-o", "--output", type=click.Path(), required=True,
              help="CSV trajectory file")
def flow_cmd(d_text, gamma_text, nu_text, kappas_text, anchor, seed, tol,
             fit_tol, output):
    """Isomonodromic deformation of the rank-1 additive solution along a
    path of cross ratios."""
    params = _params_from_options(d_text, gamma_text, nu_text)
    specs = additive_class_specs(params, 1)
    sol = solve_additive_ds(specs, seed=seed)
    kappas = _parse_complex_list(kappas_text)
    traj = isomonodromic_flow(specs, sol.matrices, kappas, anchor=anchor,
                              tol=tol, fit_tol=fit_tol)
    traj.to_csv(output)
    click.echo(f"ok: {len(traj.kappas)} samples, max residual "
               f"{max(traj.residuals):.3e}, max drift "
               f"{max(traj.drifts):.3e}")


if __name__ == "__main__":
    main()
