"""Command-line front end: ``sl2quant <group> <name> [options]``.

Exit status is 0 when every check passes, 1 when a check fails and 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import enveloping, poisson, quantize, repmod
from .exactnum import ParamPoly
from .report import Report

ANCHOR_IDENTITIES = "classical identities on the orbit"
ANCHOR_QH2 = "form of Q(h^2)"
ANCHOR_DEG2 = "degree-2 quantization formulas"
ANCHOR_CONSTRAINTS = "quantized cubic identities"
ANCHOR_NILPOTENT = "nilpotent orbit: trivial quantization forced"
ANCHOR_NOGO = "semisimple orbit: no polynomial quantization"
ANCHOR_BASIS = "normal-form basis independence"
ANCHOR_RECURSION = "eigenvalue recursion for Q(h^2)"
ANCHOR_TRIVIAL = "trivial quantization on the nilpotent cone"
ANCHOR_REWRITE = "plumbing"
ANCHOR_MODULE = "weight module and quantum Casimir"

a_, c_, C_ = ParamPoly.var("alpha"), ParamPoly.var("c"), ParamPoly.var("C")
EXPECTED_CONSTRAINTS = (
    (a_ * a_ * (C_ + 3) - c_, "alpha^2*(C + 3) - c"),
    (a_ * (a_ * a_ * (C_ + 9) - c_), "alpha*(alpha^2*(C + 9) - c)"),
)


class UsageError(Exception):
    pass


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


# --- commands -----------------------------------------------------------------


def cmd_classical_identities(args):
    rep = Report("verify classical-identities")
    ids = quantize.load_identities()
    for name in ("h2_level", "cubic_h", "cubic_ladder"):
        entry = ids[name]
        with rep.timed() as t:
            r = poisson.verify_identity(entry["lhs"], entry["rhs"], entry.get("casimir", "c"), name)
        rep.add(name, ANCHOR_IDENTITIES, r.holds, r.residual, t["ms"], lhs=entry["lhs"], rhs=entry["rhs"])
    template = ids["h_power"]
    for l in range(2, args.l_max + 1):
        lhs = template["lhs"].replace("{l}", str(l))
        rhs = template["rhs"].replace("{l-2}", str(l - 2)).replace("{2l+2}", str(2 * l + 2))
        with rep.timed() as t:
            r = poisson.verify_identity(lhs, rhs, 0, f"h^{l}")
        rep.add(f"h^{l}", ANCHOR_IDENTITIES + " (c = 0)", r.holds, r.residual, t["ms"], lhs=lhs, rhs=rhs)
    return rep


def cmd_qh2(args):
    rep = Report("derive qh2")
    with rep.timed() as t:
        res = quantize.derive_qh2(args.max_degree)
    r = args.max_degree
    powers = [(k, 0) for k in range(r + 1)]
    rep.add("commutant of H is spanned by powers of H", ANCHOR_QH2, res.commutant == powers, elapsed_ms=t["ms"])
    others = {k: v for k, v in res.coefficients.items() if k not in ("a0", "a2")}
    nonzero = {k: str(v) for k, v in others.items() if v}
    rep.add("ansatz coefficients a_k = 0 for k not in {0, 2}", ANCHOR_QH2, not nonzero, ", ".join(nonzero.values()) or "0")
    rep.add("a_2 stays free (= alpha)", ANCHOR_QH2, res.coefficients["a2"] == a_)
    rel = res.gamma_relation - (3 * ParamPoly.var("gamma") - c_ + a_ * C_)
    rep.add("3 gamma = c - alpha C", ANCHOR_QH2, not rel, rel)
    s = ParamPoly.var("s")
    in_s = res.eq_gamma_in_s() - (3 * ParamPoly.var("gamma") - a_ * (s * s - 1) - c_)
    rep.add("with C = 1 - s^2: 3 gamma = alpha (s^2 - 1) + c", ANCHOR_QH2, not in_s, in_s)
    for k, f in res.leading_factors.items():
        want = 3 - Fraction(k * (k + 1), 2)
        got = f.constant_value() if f.is_constant() else None
        rep.add(f"leading factor of a_{k} is 3 - k(k+1)/2", ANCHOR_QH2, got == want, "0" if got == want else f"{f} vs {want}")
    rep.data.update(res.as_dict())
    rep.data["gamma_relation_in_s"] = "3*gamma = alpha*(s^2 - 1) + c"
    return rep


def cmd_constraints(args):
    rep = Report("derive constraints")
    with rep.timed() as t:
        qmap = quantize.extend_to_degree2()
    expected = quantize.expected_degree2()
    for key, want in expected.items():
        got = qmap.assignments[key]
        name = quantize._MONO_NAMES[key]
        rep.add(f"Q({name})", ANCHOR_DEG2, got == want, got - want, t["ms"], value=str(got))
    with rep.timed() as t:
        cs = quantize.derive_constraints(qmap)
    for label, eq, (want, shown), key in zip(cs.labels, cs.equations, EXPECTED_CONSTRAINTS, ("cubic_h", "cubic_ladder")):
        diff = eq - want
        rep.add(label, ANCHOR_CONSTRAINTS, not diff, diff, t["ms"], equation=f"{eq} = 0", factored=f"{shown} = 0")
        d = cs.details[key]
        rep.add(f"{key}: other normal-monomial coefficients vanish", ANCHOR_CONSTRAINTS, d["other_coefficients_zero"])
    rep.data["constraints"] = {lab: f"{shown} = 0" for lab, (_, shown) in zip(cs.labels, EXPECTED_CONSTRAINTS)}
    rep.data["expanded"] = {lab: f"{eq} = 0" for lab, eq in zip(cs.labels, cs.equations)}
    rep.data["side_conditions"] = cs.side_conditions
    rep.data["Q"] = qmap.describe()
    return rep


def cmd_verdict(args):
    casimir = args.casimir.strip()
    if casimir == "c":
        zero, label = False, "c"
    else:
        try:
            value = Fraction(casimir)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--casimir: expected 'c', '0' or a rational, got {casimir!r}")
        zero, label = value == 0, casimir
    rep = Report(f"verdict --casimir {label}")
    with rep.timed() as t:
        cs = quantize.derive_constraints()
        if zero or casimir == "c":
            v = quantize.case_analysis(cs, zero)
        else:
            cs.equations = [e.substitute({"c": value}) for e in cs.equations]
            v = quantize.case_analysis(cs, False)
            v.casimir = label
    if zero:
        ok = v.verdict == "consistent_trivial" and v.alpha == ParamPoly() and v.gamma == ParamPoly()
        rep.add("case analysis forces alpha = gamma = 0", ANCHOR_NILPOTENT, ok, elapsed_ms=t["ms"], verdict=v.verdict)
        with rep.timed() as t:
            prop = quantize.triviality_propagation(args.l_max)
        for link in prop["links"]:
            rep.add(link["link"], ANCHOR_NILPOTENT, link["passed"], link.get("residual", "0"), t["ms"] / len(prop["links"]))
        rep.data["conclusion"] = "Q(P_(2)(M)) = {0}" if prop["passed"] and ok else "not established"
    else:
        ok = v.verdict == "inconsistent"
        rep.add("case analysis is inconsistent", ANCHOR_NOGO, ok, elapsed_ms=t["ms"], verdict=v.verdict)
        rep.data["conclusion"] = "there is no polynomial quantization" if ok else "not established"
    rep.data["outcome"] = v.verdict
    rep.data["alpha"] = None if v.alpha is None else str(v.alpha)
    rep.data["gamma"] = None if v.gamma is None else str(v.gamma)
    rep.data["narrative"] = v.narrative
    rep.data["branches"] = v.as_dict()["branches"]
    rep.data["side_conditions"] = cs.side_conditions
    return rep


def cmd_basis(args):
    rep = Report("check basis")
    module = repmod.build_module(args.s, args.levels)
    try:
        with rep.timed() as t:
            res = enveloping.basis_independence_check(args.r, module)
    except enveloping.TruncationError as exc:
        raise UsageError(f"--levels: {exc}")
    rep.add(f"rank of S_{args.r} images = (r+1)^2", ANCHOR_BASIS, res["passed"], res["expected"] - res["rank"], t["ms"], rank=res["rank"])
    rep.data.update(res)
    return rep


def cmd_recursion(args):
    s = args.s
    if s <= 0 or s % 2:
        raise UsageError(f"--s: the digamma family needs an even positive integer, got {s}")
    rng = random.Random(args.seed)
    alpha = args.alpha if args.alpha is not None else repmod.random_rational(rng)
    beta = args.beta if args.beta is not None else repmod.random_rational(rng)
    c = args.c if args.c is not None else repmod.random_rational(rng)
    n_max = args.n_max if args.n_max is not None else s + 99
    rep = Report("check recursion")
    with rep.timed() as t:
        formal = repmod.formal_polynomial_residual()
    rep.add("gamma - alpha n^2 solves the recursion identically", ANCHOR_RECURSION, not formal, formal, t["ms"])
    with rep.timed() as t:
        suite = repmod.recursion_suite(s, alpha, beta, c, n_max)
    bad = {n: str(r) for n, r in suite.residuals.items() if r}
    rep.add(
        f"digamma family, n = {s + 3}..{n_max}",
        ANCHOR_RECURSION,
        suite.passed,
        "; ".join(f"n={n}: {r}" for n, r in bad.items()) or "0",
        t["ms"],
        equations=len(suite.residuals),
    )
    rank_indices = list(range(s + 1, s + 12, 2))
    fam_rank = repmod.solution_family_rank(s, rank_indices)
    expected_rank = 1 if s == 2 else 2
    rep.add("solution family rank", ANCHOR_RECURSION, fam_rank == expected_rank, expected_rank - fam_rank, rank=fam_rank)
    rep.data.update(
        {
            "s": s,
            "alpha": str(alpha),
            "beta": str(beta),
            "c": str(c),
            "gamma": str(suite.gamma),
            "boundary_residual_n=s+1": str(suite.boundary),
            "note": "the n = s + 1 equation has no xi_{n-2} term; the digamma part leaves (s-2)(s-1)s*beta there",
        }
    )
    return rep


def cmd_trivial(args):
    rep = Report("build trivial-quantization")
    module = repmod.build_module(args.s, args.levels)
    with rep.timed() as t:
        res = quantize.trivial_quantization_checks(module, args.pairs, args.seed, args.degree)
    rep.add("Q(1) = I", ANCHOR_TRIVIAL, res["Q2"], elapsed_ms=t["ms"])
    rep.add(
        f"Q({{f,g}}) = i[Q(f),Q(g)] on {args.pairs} random pairs",
        ANCHOR_TRIVIAL,
        not res["Q1_failures"],
        len(res["Q1_failures"]),
        t["ms"],
    )
    cols = set(module.interior(1))
    agree = True
    for f in (poisson.h, poisson.ep, poisson.em, poisson.h + 3 * poisson.ep - poisson.em):
        lin = enveloping.NcPoly()
        for key, coeff in f.terms.items():
            lin = lin + quantize._GEN_NC[key] * coeff
        diff = quantize.trivial_quantization(f, module) - enveloping.eval_in_module(lin, module)
        agree = agree and not diff.restrict_columns(cols).entries
    rep.add("on degree <= 1 it is the module action", ANCHOR_TRIVIAL, agree)
    rep.data.update({"s": str(module.s), "levels": module.levels, "degree": args.degree, "seed": args.seed})
    return rep


def cmd_confluence(args):
    rep = Report("check confluence")
    with rep.timed() as t:
        res = enveloping.confluence_check(args.trials, args.seed, args.max_length)
    rep.add(f"rewriting strategies agree on {args.trials} words", ANCHOR_REWRITE, res["passed"], len(res["failures"]), t["ms"])
    module = repmod.build_module(Fraction(7, 3), max(24, 2 * args.max_length + 4))
    with rep.timed() as t:
        hom = enveloping.homomorphism_check(module, min(args.trials, 300), args.seed, args.max_length)
    rep.add("evaluation is a homomorphism on margin-safe columns", ANCHOR_REWRITE, hom["passed"], len(hom["failures"]), t["ms"])
    with rep.timed() as t:
        cen = enveloping.casimir_centrality_by_reduction()
    for name, ok in cen["results"].items():
        rep.add(name, ANCHOR_MODULE, ok, elapsed_ms=t["ms"])
    rep.data.update({"trials": args.trials, "seed": args.seed, "max_length": args.max_length})
    return rep


def cmd_module(args):
    rep = Report("check module")
    rng = random.Random(args.seed)
    samples = [Fraction(2)] + [repmod.random_rational(rng) for _ in range(args.samples)]
    bad = []
    with rep.timed() as t:
        for s in samples:
            m = repmod.build_module(s, args.levels)
            if not repmod.check_relations(m).passed or repmod.casimir_value(m) != 1 - s * s:
                bad.append(str(s))
    rep.add(f"relations and Casimir = 1 - s^2 for {len(samples)} values of s", ANCHOR_MODULE, not bad, ", ".join(bad) or "0", t["ms"])
    v = repmod.casimir_value(repmod.build_module(2, args.levels))
    rep.add("s = 2 gives C = -3", ANCHOR_MODULE, v == -3, str(v))
    return rep


# --- argument parsing ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="sl2quant", description="Exact checks for polynomial quantizations of sl(2,R) coadjoint orbits.")
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    verify = groups.add_parser("verify").add_subparsers(dest="name", required=True, parser_class=_Parser)
    q = verify.add_parser("classical-identities", parents=[common])
    q.add_argument("--l-max", type=int, default=6)
    q.set_defaults(func=cmd_classical_identities)

    derive = groups.add_parser("derive").add_subparsers(dest="name", required=True, parser_class=_Parser)
    q = derive.add_parser("qh2", parents=[common])
    q.add_argument("--max-degree", type=int, default=2)
    q.set_defaults(func=cmd_qh2)
    q = derive.add_parser("constraints", parents=[common])
    q.set_defaults(func=cmd_constraints)

    q = groups.add_parser("verdict", parents=[common])
    q.add_argument("--casimir", required=True, help="'c' for a formal nonzero value, '0' for the cone, or a rational")
    q.add_argument("--l-max", type=int, default=6)
    q.set_defaults(func=cmd_verdict)

    check = groups.add_parser("check").add_subparsers(dest="name", required=True, parser_class=_Parser)
    q = check.add_parser("basis", parents=[common])
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--s", type=_rational, default=Fraction(7, 3))
    q.add_argument("--levels", type=int, required=True)
    q.set_defaults(func=cmd_basis)
    q = check.add_parser("recursion", parents=[common])
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--n-max", type=int)
    q.add_argument("--alpha", type=_rational)
    q.add_argument("--beta", type=_rational)
    q.add_argument("--c", type=_rational)
    q.set_defaults(func=cmd_recursion)
    q = check.add_parser("confluence", parents=[common])
    q.add_argument("--trials", type=int, default=1000)
    q.add_argument("--max-length", type=int, default=8)
    q.set_defaults(func=cmd_confluence)
    q = check.add_parser("module", parents=[common])
    q.add_argument("--samples", type=int, default=20)
    q.add_argument("--levels", type=int, default=8)
    q.set_defaults(func=cmd_module)

    build = groups.add_parser("build").add_subparsers(dest="name", required=True, parser_class=_Parser)
    q = build.add_parser("trivial-quantization", parents=[common])
    q.add_argument("--degree", type=int, default=4)
    q.add_argument("--s", type=_rational, default=Fraction(7, 3))
    q.add_argument("--levels", type=int, default=24)
    q.add_argument("--pairs", type=int, default=200)
    q.set_defaults(func=cmd_trivial)
    return p


def run_command(argv):
    """Run one subcommand; returns ``(exit_code, report_or_None)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(args)
        report = args.func(args)
    except UsageError as exc:
        print(f"sl2quant: usage error: {exc}", file=sys.stderr)
        return 2, None
    out = report.to_json() if args.format == "json" else report.to_text()
    print(out)
    return (0 if report.verdict == "pass" else 1), report


def _validate(args):
    for flag in ("max_degree",):
        if getattr(args, flag, 2) < 2:
            raise UsageError("--max-degree must be at least 2")
    for flag in ("r", "levels", "trials", "pairs", "degree", "samples", "l_max", "max_length"):
        v = getattr(args, flag, None)
        if v is not None and v < (2 if flag == "l_max" else 1 if flag != "r" else 0):
            raise UsageError(f"--{flag.replace('_', '-')} out of range: {v}")
    if getattr(args, "levels", None) is not None and args.levels < 3:
        raise UsageError("--levels must be at least 3")


def main(argv=None):
    code, _ = run_command(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
