"""Command-line surface: every pipeline, scriptable I/O, deterministic seeds.

Exit status: 0 on success, 1 on a domain error (machine-readable code on
stderr), 2 on usage errors.  Numeric output uses 17 significant digits; exact
scalars print as fractions.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import jsonio
from .autom import (
    AffineGL,
    AffineSL2,
    FourierR,
    FourierZero,
    GeneratorWord,
    OpTriangular,
    Phi,
    Triangular,
    crossed_M,
    crossed_N,
    is_reduced,
    is_symplectic,
    project_Q0,
    word_q0_factorization,
)
from .errors import DomainError, ParseError
from .exprs import (
    cycsum_str,
    letterpoly_str,
    parse_cycsum,
    parse_letterpoly,
    parse_ncpoly,
    poly_str,
)
from .navigator import NavTrace, connect, reduce_rank_once, reduce_to_rank1, replay
from .necklace import (
    abstract_alphabet,
    moment_element,
    necklace_derivative,
    op_triangular_alphabet,
    poisson_bracket,
    triangular_alphabet,
)
from .polymat import PolyMat, ScalarMat, Transvection, UniPoly, pm_factor, psi_embed
from .primitive import solve_primitive
from .quiver import build_quiver, to_necklace
from .repspace import (
    RepPoint,
    act,
    eval_poly,
    flow_elementary,
    flow_ode,
    hamiltonian,
    moment_residual,
    orbit_equal,
    random_fiber_point,
)
from .scalars import Gauss


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _fmt_cmat(m) -> str:
    m = np.atleast_2d(m)
    return "\n".join("  ".join(_fmt_complex(complex(z)) for z in row) for row in m)


def _emit(args, text: str | None = None, data=None):
    """Primary artifact: files always get the JSON form when one exists;
    stdout prints the human text unless --json is set."""
    if getattr(args, "output", None):
        payload = json.dumps(data, indent=2) if data is not None else text
        with open(args.output, "w") as fh:
            fh.write(payload + "\n")
        return
    if (args.json and data is not None) or text is None:
        print(json.dumps(data, indent=2))
    else:
        print(text)


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _load_point(path: str, tol: float) -> RepPoint:
    return jsonio.reppoint_from_json(_load_json(path), tol)


def _load_word(path: str, spec) -> GeneratorWord:
    return jsonio.word_from_json(_load_json(path), spec)


def _parse_tau(text: str) -> complex:
    return complex(text.replace(" ", ""))


def _parse_polymat(text: str, var: str) -> PolyMat:
    al = abstract_alphabet([var])
    rows = [row for row in text.split(";") if row.strip()]
    entries = []
    for row in rows:
        er = []
        for cell in row.split(","):
            lp = parse_letterpoly(cell, al)
            deg = max((len(w) for w in lp.terms), default=0)
            coeffs = [Gauss(0)] * (deg + 1)
            for w, c in lp.terms.items():
                coeffs[len(w)] = c
            er.append(UniPoly(coeffs, var))
        entries.append(er)
    return PolyMat(entries, var)


def _polymat_str(A: PolyMat) -> str:
    return "; ".join(", ".join(str(e) for e in row) for row in A.entries)


def _nc_matrix_str(mat) -> str:
    return "\n".join("[" + " | ".join(poly_str(e) for e in row) + "]" for row in mat)


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_nc_mul(args):
    spec = build_quiver(args.r, args.orientation)
    p = parse_ncpoly(args.lhs, spec)
    q = parse_ncpoly(args.rhs, spec)
    out = p * q
    _emit(args, poly_str(out), {"result": poly_str(out)})


def cmd_nc_derive(args):
    spec = build_quiver(args.r, args.orientation)
    alphabet = op_triangular_alphabet(spec) if args.star else triangular_alphabet(spec)
    f = parse_cycsum(args.f, alphabet)
    d = necklace_derivative(f, args.g)
    text = letterpoly_str(d)
    expanded = poly_str(d.expand(spec))
    _emit(args, expanded, {"letters": text, "arrows": expanded})


def cmd_nc_bracket(args):
    spec = build_quiver(args.r, args.orientation)
    w1 = to_necklace(parse_ncpoly(args.lhs, spec))
    w2 = to_necklace(parse_ncpoly(args.rhs, spec))
    out = poisson_bracket(w1, w2, spec)
    _emit(args, poly_str(out), {"result": poly_str(out)})


def cmd_nc_moment(args):
    spec = build_quiver(args.r, args.orientation)
    c, c1, c2 = moment_element(spec)
    text = f"c  = {poly_str(c)}\nc1 = {poly_str(c1)}\nc2 = {poly_str(c2)}"
    _emit(args, text, {"c": poly_str(c), "c1": poly_str(c1), "c2": poly_str(c2)})


def _gens_from_args(args, spec) -> list:
    gens = []
    for kind, value in args.gen or []:
        if kind == "triangular":
            gens.append(Triangular(parse_cycsum(value, triangular_alphabet(spec))))
        elif kind == "op-triangular":
            gens.append(
                OpTriangular(parse_cycsum(value, op_triangular_alphabet(spec)))
            )
        elif kind == "affine-gl":
            T = _parse_polymat(value, "a")
            gens.append(AffineGL(T.to_scalars()))
        elif kind == "affine-sl2":
            parts = value.split("|")
            A = _parse_polymat(parts[0], "a").to_scalars()
            B = (
                tuple(
                    jsonio.gauss_from_json(c) for c in parts[1].split(",")
                )
                if len(parts) > 1
                else (Gauss(0), Gauss(0))
            )
            gens.append(AffineSL2((tuple(A[0]), tuple(A[1])), B))
        elif kind == "fourier":
            gens.append(FourierR())
        elif kind == "fourier0":
            gens.append(FourierZero())
        elif kind == "phi":
            gens.append(Phi())
    return gens


class _GenAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string):
        kind = option_string.lstrip("-")
        items = getattr(namespace, "gen", None) or []
        items.append((kind, values))
        namespace.gen = items


def _add_gen_flags(sp):
    sp.add_argument("--triangular", action=_GenAction, metavar="EXPR", dest="gen")
    sp.add_argument("--op-triangular", action=_GenAction, metavar="EXPR", dest="gen")
    sp.add_argument("--affine-gl", action=_GenAction, metavar="MAT", dest="gen")
    sp.add_argument("--affine-sl2", action=_GenAction, metavar="MAT[|B]", dest="gen")
    sp.add_argument(
        "--fourier", action=_GenAction, nargs=0, dest="gen", default=None
    )
    sp.add_argument("--fourier0", action=_GenAction, nargs=0, dest="gen")
    sp.add_argument("--phi", action=_GenAction, nargs=0, dest="gen")


def cmd_auto_build(args):
    spec = build_quiver(args.r, args.orientation)
    word = GeneratorWord(tuple(_gens_from_args(args, spec)))
    endo = word.expand(spec)
    images = {n: poly_str(endo.images[n]) for n in spec.arrow_names}
    text = "\n".join(f"{n} -> {img}" for n, img in images.items())
    _emit(args, text, jsonio.word_to_json(word))


def cmd_auto_compose(args):
    spec = build_quiver(args.r, args.orientation)
    word = GeneratorWord()
    for path in args.word:
        word = word + _load_word(path, spec)
    _emit(args, None, jsonio.word_to_json(word))


def cmd_auto_invert(args):
    spec = build_quiver(args.r, args.orientation)
    word = _load_word(args.word[0], spec)
    _emit(args, None, jsonio.word_to_json(word.inverse()))


def cmd_auto_check(args):
    spec = build_quiver(args.r, args.orientation)
    word = _load_word(args.word[0], spec)
    endo = word.expand(spec)
    ok, residual = is_symplectic(endo)
    red = is_reduced(endo)
    text = f"symplectic: {str(ok).lower()}\nreduced: {str(red).lower()}"
    if not ok:
        text += f"\nresidual: {poly_str(residual)}"
    _emit(
        args,
        text,
        {"symplectic": ok, "reduced": red, "residual": poly_str(residual)},
    )
    if not ok:
        sys.exit(1)


def cmd_auto_matrices(args):
    spec = build_quiver(args.r, args.orientation)
    endo = _load_word(args.word[0], spec).expand(spec)
    N = crossed_N(endo)
    M = crossed_M(endo)
    text = f"N =\n{_nc_matrix_str(N)}\nM =\n{_nc_matrix_str(M)}"
    data = {
        "N": [[poly_str(e) for e in row] for row in N],
        "M": [[poly_str(e) for e in row] for row in M],
    }
    _emit(args, text, data)


def cmd_auto_project0(args):
    spec = build_quiver(args.r, args.orientation)
    word = _load_word(args.word[0], spec)
    endo = word.expand(spec)
    a_img, astar_img = project_Q0(endo)
    kappa, pi = word_q0_factorization(word, spec)
    data = {
        "a": poly_str(a_img),
        "a*": poly_str(astar_img),
        "kappa": jsonio.word_to_json(kappa),
        "pi": jsonio.word_to_json(pi),
    }
    _emit(args, f"a -> {data['a']}\na* -> {data['a*']}", data)


def cmd_gl_factor(args):
    A = _parse_polymat(args.matrix, args.var)
    factors = pm_factor(A)
    items = []
    for f in factors:
        if isinstance(f, Transvection):
            items.append(
                {"kind": "transvection", "alpha": f.alpha, "beta": f.beta, "p": str(f.p)}
            )
        else:
            items.append({"kind": "scalar", "T": jsonio.scalar_matrix_to_json(f.T)})
    text = "\n".join(json.dumps(it) for it in items)
    _emit(args, text, {"factors": items})


def cmd_gl_psi(args):
    A = _parse_polymat(args.matrix, args.var)
    spec = build_quiver(args.r if args.r else A.r, args.orientation)
    word = psi_embed(A, spec)
    _emit(args, None, jsonio.word_to_json(word))


def cmd_primitive_solve(args):
    names = [g.strip() for g in args.generators.split(",") if g.strip()]
    alphabet = abstract_alphabet(names)
    u = [parse_letterpoly(text, alphabet) for text in args.u]
    f = solve_primitive(names, u, alphabet)
    _emit(args, cycsum_str(f), {"primitive": cycsum_str(f)})


def cmd_rep_random(args):
    pt = random_fiber_point(
        args.n, args.r, _parse_tau(args.tau), args.seed, args.kind, args.tol
    )
    _emit(args, None, jsonio.reppoint_to_json(pt))


def cmd_rep_moment(args):
    pt = _load_point(args.point, args.tol)
    res = moment_residual(pt)
    _emit(args, f"{res:.17g}", {"residual": res})


def cmd_rep_eval(args):
    pt = _load_point(args.point, args.tol)
    spec = build_quiver(pt.r, args.orientation)
    p = parse_ncpoly(args.expr, spec)
    m = eval_poly(p, pt)
    _emit(args, _fmt_cmat(m), {"matrix": jsonio.cmat_to_json(m)})


def cmd_rep_act(args):
    pt = _load_point(args.point, args.tol)
    spec = build_quiver(pt.r, args.orientation)
    word = _load_word(args.word[0], spec)
    out = act(pt, word, spec)
    _emit(args, None, jsonio.reppoint_to_json(out))


def cmd_rep_orbit_eq(args):
    p = _load_point(args.point, args.tol)
    q = _load_point(args.other, args.tol)
    eq = orbit_equal(p, q)
    _emit(args, str(eq).lower(), {"equal": eq})


def cmd_rep_flow(args):
    pt = _load_point(args.point, args.tol)
    out = flow_elementary(args.k, args.alpha, args.beta, _parse_tau(args.t), pt)
    _emit(args, None, jsonio.reppoint_to_json(out))


def cmd_rep_flow_ode(args):
    pt = _load_point(args.point, args.tol)
    m = _parse_polymat(args.m, "a").to_scalars()
    mc = np.array([[c.to_complex() for c in row] for row in m])
    out = flow_ode(args.k, mc, _parse_tau(args.t), pt, args.steps)
    _emit(args, None, jsonio.reppoint_to_json(out))


def cmd_rep_hamiltonian(args):
    pt = _load_point(args.point, args.tol)
    m = _parse_polymat(args.m, "a").to_scalars()
    mc = np.array([[c.to_complex() for c in row] for row in m])
    val = hamiltonian(args.k, mc, pt)
    _emit(args, _fmt_complex(val), {"value": jsonio.complex_to_json(val)})


def cmd_nav_reduce(args):
    pt = _load_point(args.point, args.tol)
    spec = build_quiver(pt.r, args.orientation)
    trace = NavTrace(pt)
    out, word = reduce_rank_once(pt, spec, trace=trace)
    trace.word = word
    trace.final = out
    _emit(args, None, jsonio.trace_to_json(trace))


def cmd_nav_reduce1(args):
    pt = _load_point(args.point, args.tol)
    spec = build_quiver(pt.r, args.orientation)
    trace = reduce_to_rank1(pt, spec)
    _emit(args, None, jsonio.trace_to_json(trace))


def cmd_nav_connect(args):
    p = _load_point(args.point, args.tol)
    q = _load_point(args.other, args.tol)
    spec = build_quiver(p.r, args.orientation)
    word = connect(p, q, spec)
    _emit(args, None, jsonio.word_to_json(word))


def cmd_nav_replay(args):
    pt = _load_point(args.point, args.tol)
    spec = build_quiver(pt.r, args.orientation)
    word = _load_word(args.word[0], spec)
    out = replay(pt, word, spec)
    _emit(args, None, jsonio.reppoint_to_json(out))


# ---------------------------------------------------------------------------
# parser assembly


def _global_flags(sp, need_r=False):
    sp.add_argument("--r", type=int, default=None if not need_r else None)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--tau", default="1")
    sp.add_argument("--orientation", default="zigzag",
                    choices=["zigzag", "single_x", "all_d"])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("-o", "--output", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ghquiver",
        description="Noncommutative symplectic toolkit for doubled zigzag quivers",
    )
    top = ap.add_subparsers(dest="group", required=True)

    nc = top.add_parser("nc", help="path-algebra and necklace calculus")
    ncs = nc.add_subparsers(dest="cmd", required=True)
    sp = ncs.add_parser("mul")
    sp.add_argument("lhs")
    sp.add_argument("rhs")
    _global_flags(sp)
    sp.set_defaults(func=cmd_nc_mul)
    sp = ncs.add_parser("derive")
    sp.add_argument("-f", required=True)
    sp.add_argument("-g", required=True)
    sp.add_argument("--star", action="store_true")
    _global_flags(sp)
    sp.set_defaults(func=cmd_nc_derive)
    sp = ncs.add_parser("bracket")
    sp.add_argument("lhs")
    sp.add_argument("rhs")
    _global_flags(sp)
    sp.set_defaults(func=cmd_nc_bracket)
    sp = ncs.add_parser("moment")
    _global_flags(sp)
    sp.set_defaults(func=cmd_nc_moment)

    auto = top.add_parser("auto", help="symplectomorphism words")
    autos = auto.add_subparsers(dest="cmd", required=True)
    sp = autos.add_parser("build")
    _add_gen_flags(sp)
    _global_flags(sp)
    sp.set_defaults(func=cmd_auto_build)
    for name, fn, nargs in (
        ("compose", cmd_auto_compose, "+"),
        ("invert", cmd_auto_invert, 1),
        ("check", cmd_auto_check, 1),
        ("matrices", cmd_auto_matrices, 1),
        ("project0", cmd_auto_project0, 1),
    ):
        sp = autos.add_parser(name)
        sp.add_argument("-w", "--word", action="append", required=True)
        _global_flags(sp)
        sp.set_defaults(func=fn)

    gl = top.add_parser("gl", help="polynomial matrices")
    gls = gl.add_subparsers(dest="cmd", required=True)
    for name, fn in (("factor", cmd_gl_factor), ("psi", cmd_gl_psi)):
        sp = gls.add_parser(name)
        sp.add_argument("-m", "--matrix", required=True)
        sp.add_argument("--var", default="a", choices=["a", "a*"])
        _global_flags(sp)
        sp.set_defaults(func=fn)

    prim = top.add_parser("primitive", help="commutator-primitive solver")
    prims = prim.add_subparsers(dest="cmd", required=True)
    sp = prims.add_parser("solve")
    sp.add_argument("-G", "--generators", required=True)
    sp.add_argument("-u", action="append", required=True)
    _global_flags(sp)
    sp.set_defaults(func=cmd_primitive_solve)

    rep = top.add_parser("rep", help="numerical representation layer")
    reps = rep.add_subparsers(dest="cmd", required=True)
    sp = reps.add_parser("random")
    sp.add_argument("--kind", default="Cprime", choices=["Cprime", "Cdoubleprime"])
    _global_flags(sp)
    sp.set_defaults(func=cmd_rep_random)
    sp = reps.add_parser("moment")
    sp.add_argument("-p", "--point", required=True)
    _global_flags(sp)
    sp.set_defaults(func=cmd_rep_moment)
    sp = reps.add_parser("eval")
    sp.add_argument("-p", "--point", required=True)
    sp.add_argument("-e", "--expr", required=True)
    _global_flags(sp)
    sp.set_defaults(func=cmd_rep_eval)
    sp = reps.add_parser("act")
    sp.add_argument("-p", "--point", required=True)
    sp.add_argument("-w", "--word", action="append", required=True)
    _global_flags(sp)
    sp.set_defaults(func=cmd_rep_act)
    sp = reps.add_parser("orbit-eq")
    sp.add_argument("-p", "--point", required=True)
    sp.add_argument("-q", "--other", required=True)
    _global_flags(sp)
    sp.set_defaults(func=cmd_rep_orbit_eq)
    sp = reps.add_parser("flow")
    sp.add_argument("-p", "--point", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--alpha", type=int, required=True)
    sp.add_argument("--beta", type=int, required=True)
    sp.add_argument("--t", required=True)
    _global_flags(sp)
    sp.set_defaults(func=cmd_rep_flow)
    sp = reps.add_parser("flow-ode")
    sp.add_argument("-p", "--point", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("-m", required=True)
    sp.add_argument("--t", required=True)
    sp.add_argument("--steps", type=int, default=10_000)
    _global_flags(sp)
    sp.set_defaults(func=cmd_rep_flow_ode)
    sp = reps.add_parser("hamiltonian")
    sp.add_argument("-p", "--point", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("-m", required=True)
    _global_flags(sp)
    sp.set_defaults(func=cmd_rep_hamiltonian)

    nav = top.add_parser("nav", help="point navigation")
    navs = nav.add_subparsers(dest="cmd", required=True)
    sp = navs.add_parser("reduce")
    sp.add_argument("-p", "--point", required=True)
    _global_flags(sp)
    sp.set_defaults(func=cmd_nav_reduce)
    sp = navs.add_parser("reduce1")
    sp.add_argument("-p", "--point", required=True)
    _global_flags(sp)
    sp.set_defaults(func=cmd_nav_reduce1)
    sp = navs.add_parser("connect")
    sp.add_argument("-p", "--point", required=True)
    sp.add_argument("-q", "--other", required=True)
    _global_flags(sp)
    sp.set_defaults(func=cmd_nav_connect)
    sp = navs.add_parser("replay")
    sp.add_argument("-p", "--point", required=True)
    sp.add_argument("-w", "--word", action="append", required=True)
    _global_flags(sp)
    sp.set_defaults(func=cmd_nav_replay)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "r", None) is None:
        args.r = 2
    try:
        args.func(args)
    except SystemExit as e:
        return int(e.code or 0)
    except DomainError as e:
        print(json.dumps({"error": e.code, "message": str(e)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
