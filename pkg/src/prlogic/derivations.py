"""Bundled proof scripts reproducing the inconsistency and derivability
results, plus the loader used by the command line and the tests.

Scripts ship as .prf files next to this module; each is regenerable from
its builder function, and a manifest records name, theory, target, and
whether the script is a reconstruction of an argument delegated to
external sources.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .builder import (
    ScriptBuilder,
    anddot,
    code_of,
    disjupto,
    negdot,
    numsub,
    ordot,
    pr1dot,
    priter,
)
from .calculus import TheorySpec, check_proof, get_theory
from .coding import code_op, encode, pr1dot_value
from .diagonal import named_fixed_points
from .proofs import Proof, Verdict, parse_script, render_script
from .syntax import (
    And,
    Arith,
    BewAtom,
    BOT,
    CodeConst,
    Eq,
    Exists,
    ForAll,
    Formula,
    Iff,
    Implies,
    Leq,
    NatAtom,
    Not,
    Or,
    PrAtom,
    Rat,
    SentAtom,
    Var,
    conj,
    formula_str,
    lt,
    substitute,
)
from .parser import parse_formula


@dataclass(frozen=True)
class BundledDerivation:
    name: str
    theory: str
    target: Formula
    proof: Proof
    summary: str
    reconstruction: bool = False


def _plus1(t) -> Arith:
    return Arith("+", t, Rat(1))


def _minus(a, b) -> Arith:
    return Arith("-", a, b)


def _times(a, b) -> Arith:
    return Arith("*", a, b)


# ---------------------------------------------------------------------------
# Shared sub-derivations


def _flip_to_neg(b: ScriptBuilder, src: int, cx, src_val, out_val) -> int:
    """From Pr(cx, src_val) derive Pr(#neg, out_val) for the negation code."""

    from .coding import eval_term

    neg_code = code_op("neg", int(eval_term(cx)))
    kf7 = b.ax("kf7", Iff(PrAtom(cx, src_val), PrAtom(negdot(cx), _minus(Rat(1), src_val))))
    eq = b.ax("code", Eq(negdot(cx), CodeConst(neg_code)))
    sub = b.ax(
        "eq_sub",
        Implies(
            Eq(negdot(cx), CodeConst(neg_code)),
            Implies(
                PrAtom(negdot(cx), _minus(Rat(1), src_val)),
                PrAtom(CodeConst(neg_code), _minus(Rat(1), src_val)),
            ),
        ),
    )
    return b.lra(PrAtom(CodeConst(neg_code), out_val), kf7, eq, sub, src)


def _flip_from_neg(b: ScriptBuilder, src: int, cx, neg_code: int, src_val, out_val) -> int:
    """From Pr(#neg, src_val) derive Pr(cx, out_val)."""

    kf7 = b.ax("kf7", Iff(PrAtom(cx, out_val), PrAtom(negdot(cx), _minus(Rat(1), out_val))))
    eq = b.ax("code", Eq(CodeConst(neg_code), negdot(cx)))
    sub = b.ax(
        "eq_sub",
        Implies(
            Eq(CodeConst(neg_code), negdot(cx)),
            Implies(
                PrAtom(CodeConst(neg_code), src_val),
                PrAtom(negdot(cx), src_val),
            ),
        ),
    )
    return b.lra(PrAtom(cx, out_val), kf7, eq, sub, src)


def _spec_inst(b: ScriptBuilder, forall_line: int, t) -> int:
    """Instantiate a (possibly context-wrapped) universal line at term t."""

    f = b.formula(forall_line)
    inner = f.right if isinstance(f, Implies) and isinstance(f.right, ForAll) else f
    assert isinstance(inner, ForAll)
    instance = substitute(inner.body, inner.var, t)
    ui = b.ax("ui", Implies(inner, instance))
    return b.taut(instance, forall_line, ui)


def _eq_symm(b: ScriptBuilder, line: int, a, c) -> int:
    """From a derivation of a = c, derive c = a."""

    refl = b.ax("eq_refl", Eq(a, a))
    sub = b.ax("eq_sub", Implies(Eq(a, c), Implies(Eq(a, a), Eq(c, a))))
    return b.taut(Eq(c, a), line, refl, sub)


def _forall_intro(b: ScriptBuilder, line: int, var: str) -> int:
    """From ctx -> p derive ctx -> forall var p (var not free in ctx)."""

    f = b.formula(line)
    if not b.ctx:
        return b.gen(line, var)
    assert isinstance(f, Implies)
    g = b.gen(line, var)
    shift = b.ax(
        "all_imp", Implies(b.formula(g), Implies(f.left, ForAll(var, f.right)))
    )
    return b.mp(shift, g)


# ---------------------------------------------------------------------------
# Monotonicity (the basic derived law)


def build_monotonicity() -> BundledDerivation:
    a = parse_formula("0 = 0")
    bf = parse_formula("0 <= 0")
    i = Implies(a, bf)
    ca, cb, ci = code_of(a), code_of(bf), code_of(i)
    u, v = Var("u"), Var("v")

    b = ScriptBuilder("m")
    h1, h2, h3 = PrAtom(ci, Rat(1)), PrAtom(ca, u), PrAtom(cb, v)
    b.push(h1)
    b.push(h2)
    b.push(h3)

    sv, tv = b.fresh("es"), b.fresh("et")
    matrix = And(
        And(PrAtom(ordot(ci, ca), Var(sv)), PrAtom(anddot(ci, ca), Var(tv))),
        Eq(Arith("+", Var(sv), Var(tv)), Arith("+", Rat(1), u)),
    )
    kf6 = b.ax(
        "kf6",
        Implies(And(h1, h2), Exists(sv, Exists(tv, matrix))),
    )
    exline = b.taut(Exists(sv, Exists(tv, matrix)), kf6)
    kf3 = b.ax(
        "kf3",
        Implies(
            PrAtom(ordot(ci, ca), Var(sv)),
            And(
                SentAtom(ordot(ci, ca)),
                And(Leq(Rat(0), Var(sv)), Leq(Var(sv), Rat(1))),
            ),
        ),
    )
    b.push(matrix)
    px = b.taut(PrAtom(anddot(ci, ca), Var(tv)))
    py = b.taut(PrAtom(cb, v))
    o_thm = b.steps_taut_theorem(Or(Not(And(i, a)), bf))
    tr = b.transfer(And(i, a), bf, anddot(ci, ca), cb, o_thm, px, py, Var(tv), v)
    goal_in = b.lra(Leq(u, v), kf3, tr)
    b.pop()
    out = b.exists_elim(exline, [sv, tv], matrix, goal_in, Leq(u, v))
    b.pop()
    b.pop()
    b.pop()
    g1 = b.gen(out, "v")
    g2 = b.gen(g1, "u")
    return BundledDerivation(
        name="monotonicity",
        theory="RKf",
        target=b.formula(g2),
        proof=b.proof(),
        summary="certain implications transfer probability bounds",
    )


# ---------------------------------------------------------------------------
# Inconsistency of positive introspection


def build_pr4_incon() -> BundledDerivation:
    fp = named_fixed_points()["pr4_liar"]
    lam = fp.delta
    l = encode(lam)
    cl = CodeConst(l)
    p_atom = PrAtom(cl, Rat(1))
    a1 = Not(p_atom)
    h = pr1dot_value(l)
    ch = CodeConst(h)

    b = ScriptBuilder("p")
    bic = b.diag("pr4_liar", fp.biconditional)
    o1 = Or(a1, Not(lam))
    o1_line = b.steps_taut_theorem(o1, bic)
    p_o1 = b.nec(o1_line)
    o1c = encode(o1)
    pr4 = b.ax("pr4", Implies(p_atom, PrAtom(ch, Rat(1))))

    b.push(p_atom)
    q1 = b.taut(PrAtom(ch, Rat(1)), pr4)
    kf7h = b.ax("kf7", Iff(PrAtom(ch, Rat(1)), PrAtom(negdot(ch), _minus(Rat(1), Rat(1)))))
    q3 = b.taut(PrAtom(negdot(ch), _minus(Rat(1), Rat(1))), kf7h, q1)
    kf7l = b.ax("kf7", Iff(PrAtom(cl, Rat(1)), PrAtom(negdot(cl), _minus(Rat(1), Rat(1)))))
    q5 = b.taut(PrAtom(negdot(cl), _minus(Rat(1), Rat(1))), kf7l)
    sv, tv = b.fresh("es"), b.fresh("et")
    zero = _minus(Rat(1), Rat(1))
    matrix = And(
        And(
            PrAtom(ordot(negdot(ch), negdot(cl)), Var(sv)),
            PrAtom(anddot(negdot(ch), negdot(cl)), Var(tv)),
        ),
        Eq(Arith("+", Var(sv), Var(tv)), Arith("+", zero, zero)),
    )
    kf6 = b.ax(
        "kf6",
        Implies(
            And(PrAtom(negdot(ch), zero), PrAtom(negdot(cl), zero)),
            Exists(sv, Exists(tv, matrix)),
        ),
    )
    exline = b.taut(Exists(sv, Exists(tv, matrix)), kf6, q3, q5)
    b.push(matrix)
    r1 = b.ax("code", Eq(ordot(negdot(ch), negdot(cl)), CodeConst(o1c)))
    r2 = b.ax(
        "eq_sub",
        Implies(
            Eq(ordot(negdot(ch), negdot(cl)), CodeConst(o1c)),
            Implies(
                PrAtom(ordot(negdot(ch), negdot(cl)), Var(sv)),
                PrAtom(CodeConst(o1c), Var(sv)),
            ),
        ),
    )
    r3 = b.ax(
        "kf3",
        Implies(
            PrAtom(anddot(negdot(ch), negdot(cl)), Var(tv)),
            And(
                SentAtom(anddot(negdot(ch), negdot(cl))),
                And(Leq(Rat(0), Var(tv)), Leq(Var(tv), Rat(1))),
            ),
        ),
    )
    r4 = b.lra(BOT, r1, r2, r3, p_o1)
    b.pop()
    q8 = b.exists_elim(exline, [sv, tv], matrix, r4, BOT)
    b.pop()

    p5 = b.steps_lra_theorem(a1, q8)
    p6 = b.steps_taut_theorem(lam, p5, bic)
    p7 = b.nec(p6)
    p8 = b.steps_taut_theorem(BOT, p5, p7)
    return BundledDerivation(
        name="pr4_incon",
        theory="RKf+Pr4",
        target=b.formula(p8),
        proof=b.proof(),
        summary="luminosity of certainty collapses on the certainty liar",
    )


# ---------------------------------------------------------------------------
# Negative introspection, first form


def build_negintro1_incon() -> BundledDerivation:
    fp = named_fixed_points()["negintro1_fp"]
    lam = fp.delta
    l = encode(lam)
    cl = CodeConst(l)
    b1_f = fp.biconditional.right  # exists y (Pr(#l, y) & y < 1)
    b1c = CodeConst(encode(b1_f))
    assert isinstance(b1_f, Exists)
    yvar = b1_f.var
    matrix = b1_f.body

    b = ScriptBuilder("n")
    bic = b.diag("negintro1_fp", fp.biconditional)
    ni1 = b.ax("negintro1", Implies(b1_f, PrAtom(b1c, Rat(1))))

    b.push(b1_f)
    o1 = b.taut(PrAtom(b1c, Rat(1)), ni1)
    hyp_ex = b.taut(b1_f)
    b.push(matrix)
    o2 = b.taut(PrAtom(cl, Var(yvar)))
    o_thm = b.steps_taut_theorem(Or(Not(b1_f), lam), bic)
    tr = b.transfer(b1_f, lam, b1c, cl, o_thm, o1, o2, Rat(1), Var(yvar))
    o4 = b.lra(BOT, tr)
    b.pop()
    o5 = b.exists_elim(hyp_ex, [yvar], matrix, o4, BOT)
    b.pop()

    n5 = b.steps_lra_theorem(Not(b1_f), o5)
    n6 = b.steps_taut_theorem(Not(lam), n5, bic)
    n7 = b.nec(n6)
    n10 = _flip_from_neg(b, n7, cl, encode(Not(lam)), Rat(1), Rat(0))
    inst0 = substitute(matrix, yvar, Rat(0))
    ei = b.ax("ei", Implies(inst0, b1_f))
    n12 = b.lra(inst0.right if isinstance(inst0, And) else inst0)  # 0 < 1
    n13 = b.steps_taut_theorem(b1_f, ei, n10, n12)
    n14 = b.steps_taut_theorem(BOT, n5, n13)
    return BundledDerivation(
        name="negintro1_incon",
        theory="RKf+NegIntro-1",
        target=b.formula(n14),
        proof=b.proof(),
        summary="luminosity of uncertainty collapses on the uncertainty liar",
        reconstruction=True,
    )


# ---------------------------------------------------------------------------
# Negative introspection, converse form


def build_negintro2_incon() -> BundledDerivation:
    fp = named_fixed_points()["negintro2_fp"]
    lam = fp.delta
    l = encode(lam)
    cl = CodeConst(l)
    b_f = fp.biconditional.right
    bc = CodeConst(encode(b_f))
    assert isinstance(b_f, Exists)
    yvar = b_f.var
    matrix = b_f.body

    b = ScriptBuilder("q")
    bic = b.diag("negintro2_fp", fp.biconditional)
    ni2 = b.ax("negintro2", Implies(PrAtom(bc, Rat(1)), b_f))

    # the certainty of the uncertainty sentence is refutable
    b.push(PrAtom(bc, Rat(1)))
    w1 = b.taut(b_f, ni2)
    b.push(matrix)
    w2 = b.taut(PrAtom(cl, Var(yvar)))
    w3 = b.taut(PrAtom(bc, Rat(1)))
    o_thm = b.steps_taut_theorem(Or(Not(b_f), lam), bic)
    tr = b.transfer(b_f, lam, bc, cl, o_thm, w3, w2, Rat(1), Var(yvar))
    w4 = b.lra(BOT, tr)
    b.pop()
    w5 = b.exists_elim(w1, [yvar], matrix, w4, BOT)
    b.pop()
    notp = b.steps_lra_theorem(Not(PrAtom(bc, Rat(1))), w5)

    # totality lines
    sv, tv = "s", "t"
    tot_b = b.ax("pr_total", Exists(sv, PrAtom(bc, Var(sv))))
    tot_l = b.ax("pr_total", Exists(tv, PrAtom(cl, Var(tv))))

    # under Pr(#b, s) & Pr(#l, t): s = value of the twin, t < 1, so B holds
    mat2 = PrAtom(cl, Var(tv))
    b.push(PrAtom(bc, Var(sv)))
    b.push(mat2)
    px = b.taut(PrAtom(cl, Var(tv)))
    py = b.taut(PrAtom(bc, Var(sv)))
    oth1 = b.steps_taut_theorem(Or(Not(lam), b_f), bic)
    tr1 = b.transfer(lam, b_f, cl, bc, oth1, px, py, Var(tv), Var(sv))
    sub1 = b.ax(
        "eq_sub",
        Implies(Eq(Var(sv), Rat(1)), Implies(PrAtom(bc, Var(sv)), PrAtom(bc, Rat(1)))),
    )
    ne1 = b.taut(Not(Eq(Var(sv), Rat(1))), sub1, notp)
    kf3b = b.ax(
        "kf3",
        Implies(
            PrAtom(bc, Var(sv)),
            And(SentAtom(bc), And(Leq(Rat(0), Var(sv)), Leq(Var(sv), Rat(1)))),
        ),
    )
    ltline = b.lra(lt(Var(tv), Rat(1)), tr1, ne1, kf3b)
    ei = b.ax(
        "ei",
        Implies(substitute(matrix, yvar, Var(tv)), b_f),
    )
    bline = b.taut(b_f, ei, ltline)
    b.pop()
    inner1 = b.exists_elim(b.taut(Exists(tv, mat2), tot_l), [tv], mat2, bline, b_f)
    b.pop()
    got_b = b.exists_elim(tot_b, [sv], PrAtom(bc, Var(sv)), inner1, b_f)

    lam_line = b.steps_taut_theorem(lam, got_b, bic)
    nec_lam = b.nec(lam_line)

    # final clash: the uncertainty witness contradicts certainty
    b.push(matrix)
    kf2 = b.ax(
        "kf2",
        Implies(And(PrAtom(cl, Var(yvar)), PrAtom(cl, Rat(1))), Eq(Var(yvar), Rat(1))),
    )
    bot_in = b.lra(BOT, kf2, nec_lam)
    b.pop()
    final = b.exists_elim(got_b, [yvar], matrix, bot_in, BOT)
    return BundledDerivation(
        name="negintro2_incon",
        theory="RKf+NegIntro-2",
        target=b.formula(final),
        proof=b.proof(),
        summary="transparency of uncertainty collapses on the uncertainty liar",
        reconstruction=True,
    )


# ---------------------------------------------------------------------------
# Synchronic reflection


def build_rv_incon() -> BundledDerivation:
    fp = named_fixed_points()["pr4_liar"]
    lam = fp.delta
    l = encode(lam)
    cl = CodeConst(l)
    p_atom = PrAtom(cl, Rat(1))  # the condition sentence H
    h = encode(p_atom)
    chc = CodeConst(h)
    n_f = And(lam, p_atom)
    nc = CodeConst(encode(n_f))
    a1 = Not(p_atom)
    a1c = code_op("neg", h)

    b = ScriptBuilder("v")
    bic = b.diag("pr4_liar", fp.biconditional)
    v2 = b.steps_taut_theorem(Not(n_f), bic)
    v3 = b.nec(v2)
    kf7n = b.ax("kf7", Iff(PrAtom(nc, Rat(0)), PrAtom(negdot(nc), _minus(Rat(1), Rat(0)))))
    eq_n = b.ax("code", Eq(CodeConst(encode(Not(n_f))), negdot(nc)))
    sub_n = b.ax(
        "eq_sub",
        Implies(
            Eq(CodeConst(encode(Not(n_f))), negdot(nc)),
            Implies(
                PrAtom(CodeConst(encode(Not(n_f))), Rat(1)),
                PrAtom(negdot(nc), Rat(1)),
            ),
        ),
    )
    v6 = b.lra(PrAtom(nc, Rat(0)), kf7n, eq_n, sub_n, v3)

    u0, w0 = b.fresh("u"), b.fresh("w")
    rv_matrix = And(
        And(And(PrAtom(nc, Var(u0)), PrAtom(chc, Var(w0))), Not(Eq(Var(w0), Rat(0)))),
        Eq(Var(u0), _times(Rat(1), Var(w0))),
    )
    rv = b.ax(
        "rv",
        Implies(Not(PrAtom(chc, Rat(0))), Exists(u0, Exists(w0, rv_matrix))),
    )

    b.push(Not(PrAtom(chc, Rat(0))))
    w1 = b.taut(Exists(u0, Exists(w0, rv_matrix)), rv)
    b.push(rv_matrix)
    ratio_src = b.taut(And(Eq(Var(u0), _times(Rat(1), Var(w0))), Not(Eq(Var(w0), Rat(0)))))
    ratio = b.defn(Eq(Arith("/", Var(u0), Var(w0)), Rat(1)), ratio_src)
    kf2n = b.ax(
        "kf2",
        Implies(And(PrAtom(nc, Var(u0)), PrAtom(nc, Rat(0))), Eq(Var(u0), Rat(0))),
    )
    sub_h = b.ax(
        "eq_sub",
        Implies(Eq(Var(w0), Rat(0)), Implies(PrAtom(chc, Var(w0)), PrAtom(chc, Rat(0)))),
    )
    bot_in = b.lra(BOT, kf2n, v6, sub_h, ratio)
    b.pop()
    case1 = b.exists_elim(w1, [u0, w0], rv_matrix, bot_in, BOT)
    b.pop()
    v8 = b.steps_lra_theorem(PrAtom(chc, Rat(0)), case1)

    v9 = _flip_to_neg(b, v8, chc, Rat(0), Rat(1))  # Pr(#~P, 1)
    tot = b.ax("pr_total", Exists("t", PrAtom(cl, Var("t"))))
    tmat = PrAtom(cl, Var("t"))
    b.push(tmat)
    px = b.taut(PrAtom(CodeConst(a1c), Rat(1)), v9)
    py = b.taut(PrAtom(cl, Var("t")))
    oth = b.steps_taut_theorem(Or(Not(a1), lam), bic)
    tr = b.transfer(a1, lam, CodeConst(a1c), cl, oth, px, py, Rat(1), Var("t"))
    kf3l = b.ax(
        "kf3",
        Implies(
            PrAtom(cl, Var("t")),
            And(SentAtom(cl), And(Leq(Rat(0), Var("t")), Leq(Var("t"), Rat(1)))),
        ),
    )
    got1 = b.lra(p_atom, tr, kf3l)
    b.pop()
    x5 = b.exists_elim(tot, ["t"], tmat, got1, p_atom)

    v12 = b.steps_taut_theorem(Not(lam), bic, x5)
    v13 = b.nec(v12)
    v14 = _flip_from_neg(b, v13, cl, encode(Not(lam)), Rat(1), Rat(0))
    kf2l = b.ax(
        "kf2",
        Implies(And(PrAtom(cl, Rat(1)), PrAtom(cl, Rat(0))), Eq(Rat(1), Rat(0))),
    )
    final = b.lra(BOT, x5, v14, kf2l)
    return BundledDerivation(
        name="rv_incon",
        theory="RKf+RV",
        target=b.formula(final),
        proof=b.proof(),
        summary="the synchronic reflection principle collapses on the certainty liar",
    )


# ---------------------------------------------------------------------------
# Interval reflection at the point interval


def build_vstar_incon() -> BundledDerivation:
    fp = named_fixed_points()["vstar_liar"]
    lam = fp.delta
    l = encode(lam)
    cl = CodeConst(l)
    yv = "y"
    g_f = Exists(
        yv,
        And(
            And(PrAtom(cl, Var(yv)), Leq(Rat(1), Var(yv))),
            Leq(Var(yv), Rat(1)),
        ),
    )
    gc = CodeConst(encode(g_f))
    n_f = And(lam, g_f)
    nc = CodeConst(encode(n_f))
    p_atom = PrAtom(cl, Rat(1))
    a1 = Not(p_atom)

    b = ScriptBuilder("w")
    bic = b.diag("vstar_liar", fp.biconditional)

    # ~(lam & G): a witness for G forces certainty, refuting lam
    g_matrix = And(And(PrAtom(cl, Var(yv)), Leq(Rat(1), Var(yv))), Leq(Var(yv), Rat(1)))
    b.push(And(lam, g_f))
    ge = b.taut(g_f)
    b.push(g_matrix)
    suby = b.ax(
        "eq_sub",
        Implies(Eq(Var(yv), Rat(1)), Implies(PrAtom(cl, Var(yv)), p_atom)),
    )
    notl = b.taut(a1, bic)
    in_bot = b.lra(BOT, suby, notl)
    b.pop()
    s1_in = b.exists_elim(ge, [yv], g_matrix, in_bot, BOT)
    b.pop()
    v2 = b.steps_lra_theorem(Not(n_f), s1_in)
    v3 = b.nec(v2)
    kf7n = b.ax("kf7", Iff(PrAtom(nc, Rat(0)), PrAtom(negdot(nc), _minus(Rat(1), Rat(0)))))
    eq_n = b.ax("code", Eq(CodeConst(encode(Not(n_f))), negdot(nc)))
    sub_n = b.ax(
        "eq_sub",
        Implies(
            Eq(CodeConst(encode(Not(n_f))), negdot(nc)),
            Implies(
                PrAtom(CodeConst(encode(Not(n_f))), Rat(1)),
                PrAtom(negdot(nc), Rat(1)),
            ),
        ),
    )
    prn0 = b.lra(PrAtom(nc, Rat(0)), kf7n, eq_n, sub_n, v3)

    u0, w0 = b.fresh("u"), b.fresh("w")
    vs_matrix = And(
        And(And(PrAtom(nc, Var(u0)), PrAtom(gc, Var(w0))), Not(Eq(Var(w0), Rat(0)))),
        And(
            Leq(_times(Rat(1), Var(w0)), Var(u0)),
            Leq(Var(u0), _times(Rat(1), Var(w0))),
        ),
    )
    vstar = b.ax(
        "vstar",
        Implies(Not(PrAtom(gc, Rat(0))), Exists(u0, Exists(w0, vs_matrix))),
    )
    b.push(Not(PrAtom(gc, Rat(0))))
    e1 = b.taut(Exists(u0, Exists(w0, vs_matrix)), vstar)
    b.push(vs_matrix)
    kf2n = b.ax(
        "kf2",
        Implies(And(PrAtom(nc, Var(u0)), PrAtom(nc, Rat(0))), Eq(Var(u0), Rat(0))),
    )
    sub_g = b.ax(
        "eq_sub",
        Implies(Eq(Var(w0), Rat(0)), Implies(PrAtom(gc, Var(w0)), PrAtom(gc, Rat(0)))),
    )
    kf3g = b.ax(
        "kf3",
        Implies(
            PrAtom(gc, Var(w0)),
            And(SentAtom(gc), And(Leq(Rat(0), Var(w0)), Leq(Var(w0), Rat(1)))),
        ),
    )
    bot_in = b.lra(BOT, kf2n, prn0, sub_g, kf3g)
    b.pop()
    case1 = b.exists_elim(e1, [u0, w0], vs_matrix, bot_in, BOT)
    b.pop()
    prg0 = b.steps_lra_theorem(PrAtom(gc, Rat(0)), case1)

    # Pr(~G) = 1 and the provable ~G -> lam chain force certainty in lam
    prng = _flip_to_neg(b, prg0, gc, Rat(0), Rat(1))
    ngc = code_op("neg", encode(g_f))

    # Pr(#l, 1) -> G (witness y := 1)
    b.push(p_atom)
    ei_g = b.ax("ei", Implies(substitute(g_matrix, yv, Rat(1)), g_f))
    lraone = b.lra(Leq(Rat(1), Rat(1)))
    got_g = b.taut(g_f, ei_g, lraone)
    b.pop()
    imp_pg = b.steps_taut_theorem(Implies(p_atom, g_f), got_g)
    imp_ngl = b.steps_taut_theorem(Implies(Not(g_f), lam), imp_pg, bic)

    tot = b.ax("pr_total", Exists("t", PrAtom(cl, Var("t"))))
    tmat = PrAtom(cl, Var("t"))
    b.push(tmat)
    px = b.taut(PrAtom(CodeConst(ngc), Rat(1)), prng)
    py = b.taut(PrAtom(cl, Var("t")))
    tr = b.transfer(Not(g_f), lam, CodeConst(ngc), cl, imp_ngl, px, py, Rat(1), Var("t"))
    kf3l = b.ax(
        "kf3",
        Implies(
            PrAtom(cl, Var("t")),
            And(SentAtom(cl), And(Leq(Rat(0), Var("t")), Leq(Var("t"), Rat(1)))),
        ),
    )
    got1 = b.lra(p_atom, tr, kf3l)
    b.pop()
    certain = b.exists_elim(tot, ["t"], tmat, got1, p_atom)

    notlam = b.steps_taut_theorem(Not(lam), bic, certain)
    necn = b.nec(notlam)
    flip = _flip_from_neg(b, necn, cl, encode(Not(lam)), Rat(1), Rat(0))
    kf2l = b.ax(
        "kf2",
        Implies(And(PrAtom(cl, Rat(1)), PrAtom(cl, Rat(0))), Eq(Rat(1), Rat(0))),
    )
    final = b.lra(BOT, certain, flip, kf2l)
    return BundledDerivation(
        name="vstar_incon",
        theory="RKf+Vstar",
        target=b.formula(final),
        proof=b.proof(),
        summary="interval reflection at the point interval collapses like the synchronic principle",
        reconstruction=True,
    )


# ---------------------------------------------------------------------------
# Reflection with a provability predicate


def build_reflection_partial() -> BundledDerivation:
    fp = named_fixed_points()["reflection_fp"]
    phi = fp.delta
    f = encode(phi)
    cf = CodeConst(f)

    b = ScriptBuilder("r")
    bic = b.diag("reflection_fp", fp.biconditional)
    refl = b.ax("reflection", Implies(BewAtom("S", cf), PrAtom(cf, Rat(1))))
    r3 = b.steps_taut_theorem(Not(phi), bic, refl)
    r4 = b.nec(r3)
    r5 = _flip_from_neg(b, r4, cf, encode(Not(phi)), Rat(1), Rat(0))
    kf2 = b.ax(
        "kf2",
        Implies(And(PrAtom(cf, Rat(1)), PrAtom(cf, Rat(0))), Eq(Rat(1), Rat(0))),
    )
    r6 = b.lra(Not(PrAtom(cf, Rat(1))), r5, kf2)
    r7 = b.steps_taut_theorem(Not(BewAtom("S", cf)), refl, r6)
    final = b.steps_taut_theorem(
        conj(Not(phi), PrAtom(cf, Rat(0)), Not(BewAtom("S", cf))), r3, r5, r7
    )
    return BundledDerivation(
        name="reflection_partial",
        theory="RKf+Reflection+HBL",
        target=b.formula(final),
        proof=b.proof(),
        summary="reflection refutes its fixed point and its own applicability to it",
    )


# ---------------------------------------------------------------------------
# The omega-level witness for the sigma-additive calculus


def build_mcgee_witness() -> BundledDerivation:
    fp = named_fixed_points()["mcgee"]
    delta = fp.delta
    d = encode(delta)
    cd = CodeConst(d)
    e_f = fp.biconditional.right
    assert isinstance(delta, Exists)
    nvar = delta.var  # 'n'
    body = delta.body  # N(n) & ~Pr(priter(S, n), 1)
    assert isinstance(body, And)
    psi = body.right  # the generator, S-form
    assert isinstance(psi, Not) and isinstance(psi.body, PrAtom)
    s_term = psi.body.code.args[0]  # the self-substitution gadget
    g = encode(psi)
    cg = CodeConst(g)

    def pr_it(t, idx):
        return PrAtom(priter(t, idx), Rat(1))

    kvar = "k"
    theta = PrAtom(disjupto(cg, Var(kvar)), Rat(0))

    b = ScriptBuilder("g")
    bic = b.diag("mcgee", fp.biconditional)

    b.push(Not(delta))
    # the internally quantified certainty of every iterate
    ei0 = b.ax("ei", Implies(body, delta))
    z1 = b.taut(Implies(NatAtom(Var(nvar)), pr_it(s_term, Var(nvar))), ei0)
    l_all = _forall_intro(b, z1, nvar)

    # the zeroth iterate: certainty in the fixed point itself
    inst0 = _spec_inst(b, l_all, Rat(0))
    natz = b.ax("nat_zero", NatAtom(Rat(0)))
    pr_s0 = b.taut(pr_it(s_term, Rat(0)), inst0, natz)
    code0 = b.ax("code", Eq(priter(s_term, Rat(0)), cd))
    sub0 = b.ax(
        "eq_sub",
        Implies(
            Eq(priter(s_term, Rat(0)), cd),
            Implies(pr_it(s_term, Rat(0)), PrAtom(cd, Rat(1))),
        ),
    )
    prd1 = b.taut(PrAtom(cd, Rat(1)), pr_s0, code0, sub0)

    # base case: the zeroth stage has probability zero
    w1 = _spec_inst(b, l_all, _plus1(Rat(0)))
    ns0 = b.ax("nat_succ", Implies(NatAtom(Rat(0)), NatAtom(_plus1(Rat(0)))))
    n01 = b.steps_taut_theorem(NatAtom(_plus1(Rat(0))), natz, ns0)
    pr_s1 = b.taut(pr_it(s_term, _plus1(Rat(0))), w1, n01)
    psucc0 = b.ax(
        "priter_succ",
        Implies(
            NatAtom(Rat(0)),
            Eq(priter(s_term, _plus1(Rat(0))), pr1dot(priter(s_term, Rat(0)))),
        ),
    )
    eq1 = b.steps_taut_theorem(
        Eq(priter(s_term, _plus1(Rat(0))), pr1dot(priter(s_term, Rat(0)))), psucc0, natz
    )
    sub1 = b.ax(
        "eq_sub",
        Implies(
            Eq(priter(s_term, _plus1(Rat(0))), pr1dot(priter(s_term, Rat(0)))),
            Implies(
                pr_it(s_term, _plus1(Rat(0))),
                PrAtom(pr1dot(priter(s_term, Rat(0))), Rat(1)),
            ),
        ),
    )
    pr_p1 = b.taut(PrAtom(pr1dot(priter(s_term, Rat(0))), Rat(1)), pr_s1, eq1, sub1)
    kf7b = b.ax(
        "kf7",
        Iff(
            PrAtom(pr1dot(priter(s_term, Rat(0))), Rat(1)),
            PrAtom(negdot(pr1dot(priter(s_term, Rat(0)))), _minus(Rat(1), Rat(1))),
        ),
    )
    prneg0 = b.lra(PrAtom(negdot(pr1dot(priter(s_term, Rat(0)))), Rat(0)), kf7b, pr_p1)
    codeb = b.ax(
        "code",
        Eq(negdot(pr1dot(priter(s_term, Rat(0)))), numsub(cg, Rat(0))),
    )
    subb = b.ax(
        "eq_sub",
        Implies(
            Eq(negdot(pr1dot(priter(s_term, Rat(0)))), numsub(cg, Rat(0))),
            Implies(
                PrAtom(negdot(pr1dot(priter(s_term, Rat(0)))), Rat(0)),
                PrAtom(numsub(cg, Rat(0)), Rat(0)),
            ),
        ),
    )
    prns0 = b.taut(PrAtom(numsub(cg, Rat(0)), Rat(0)), prneg0, codeb, subb)
    dz = b.ax("disj_zero", Eq(disjupto(cg, Rat(0)), numsub(cg, Rat(0))))
    dz_sym = _eq_symm(b, dz, disjupto(cg, Rat(0)), numsub(cg, Rat(0)))
    subd = b.ax(
        "eq_sub",
        Implies(
            Eq(numsub(cg, Rat(0)), disjupto(cg, Rat(0))),
            Implies(
                PrAtom(numsub(cg, Rat(0)), Rat(0)),
                PrAtom(disjupto(cg, Rat(0)), Rat(0)),
            ),
        ),
    )
    base = b.taut(substitute(theta, kvar, Rat(0)), prns0, dz_sym, subd)

    # induction step
    kv = Var(kvar)
    b.push(NatAtom(kv))
    b.push(theta)
    sA = _spec_inst(b, l_all, _plus1(_plus1(kv)))
    nsk = b.ax("nat_succ", Implies(NatAtom(kv), NatAtom(_plus1(kv))))
    natk1 = b.taut(NatAtom(_plus1(kv)), nsk)
    nsk2 = b.ax("nat_succ", Implies(NatAtom(_plus1(kv)), NatAtom(_plus1(_plus1(kv)))))
    natk2 = b.taut(NatAtom(_plus1(_plus1(kv))), nsk2, natk1)
    pr_s2 = b.taut(pr_it(s_term, _plus1(_plus1(kv))), sA, natk2)
    psucc = b.ax(
        "priter_succ",
        Implies(
            NatAtom(_plus1(kv)),
            Eq(priter(s_term, _plus1(_plus1(kv))), pr1dot(priter(s_term, _plus1(kv)))),
        ),
    )
    eqs = b.taut(
        Eq(priter(s_term, _plus1(_plus1(kv))), pr1dot(priter(s_term, _plus1(kv)))),
        psucc,
        natk1,
    )
    subs = b.ax(
        "eq_sub",
        Implies(
            Eq(priter(s_term, _plus1(_plus1(kv))), pr1dot(priter(s_term, _plus1(kv)))),
            Implies(
                pr_it(s_term, _plus1(_plus1(kv))),
                PrAtom(pr1dot(priter(s_term, _plus1(kv))), Rat(1)),
            ),
        ),
    )
    pr_pk = b.taut(PrAtom(pr1dot(priter(s_term, _plus1(kv))), Rat(1)), pr_s2, eqs, subs)
    kf7s = b.ax(
        "kf7",
        Iff(
            PrAtom(pr1dot(priter(s_term, _plus1(kv))), Rat(1)),
            PrAtom(negdot(pr1dot(priter(s_term, _plus1(kv)))), _minus(Rat(1), Rat(1))),
        ),
    )
    prnegs = b.lra(PrAtom(negdot(pr1dot(priter(s_term, _plus1(kv)))), Rat(0)), kf7s, pr_pk)
    bridge = b.ax(
        "numsub_bridge",
        Implies(
            NatAtom(_plus1(kv)),
            Eq(numsub(cg, _plus1(kv)), negdot(pr1dot(priter(s_term, _plus1(kv))))),
        ),
    )
    eqb = b.taut(
        Eq(numsub(cg, _plus1(kv)), negdot(pr1dot(priter(s_term, _plus1(kv))))),
        bridge,
        natk1,
    )
    eqb_sym = _eq_symm(
        b, eqb, numsub(cg, _plus1(kv)), negdot(pr1dot(priter(s_term, _plus1(kv))))
    )
    subb2 = b.ax(
        "eq_sub",
        Implies(
            Eq(negdot(pr1dot(priter(s_term, _plus1(kv)))), numsub(cg, _plus1(kv))),
            Implies(
                PrAtom(negdot(pr1dot(priter(s_term, _plus1(kv)))), Rat(0)),
                PrAtom(numsub(cg, _plus1(kv)), Rat(0)),
            ),
        ),
    )
    prinst = b.taut(PrAtom(numsub(cg, _plus1(kv)), Rat(0)), prnegs, eqb_sym, subb2)
    sv2, tv2 = b.fresh("es"), b.fresh("et")
    matrix6 = And(
        And(
            PrAtom(ordot(disjupto(cg, kv), numsub(cg, _plus1(kv))), Var(sv2)),
            PrAtom(anddot(disjupto(cg, kv), numsub(cg, _plus1(kv))), Var(tv2)),
        ),
        Eq(Arith("+", Var(sv2), Var(tv2)), Arith("+", Rat(0), Rat(0))),
    )
    kf6s = b.ax(
        "kf6",
        Implies(
            And(theta, PrAtom(numsub(cg, _plus1(kv)), Rat(0))),
            Exists(sv2, Exists(tv2, matrix6)),
        ),
    )
    exl = b.taut(Exists(sv2, Exists(tv2, matrix6)), kf6s, prinst)
    b.push(matrix6)
    kf3o = b.ax(
        "kf3",
        Implies(
            PrAtom(ordot(disjupto(cg, kv), numsub(cg, _plus1(kv))), Var(sv2)),
            And(
                SentAtom(ordot(disjupto(cg, kv), numsub(cg, _plus1(kv)))),
                And(Leq(Rat(0), Var(sv2)), Leq(Var(sv2), Rat(1))),
            ),
        ),
    )
    kf3a = b.ax(
        "kf3",
        Implies(
            PrAtom(anddot(disjupto(cg, kv), numsub(cg, _plus1(kv))), Var(tv2)),
            And(
                SentAtom(anddot(disjupto(cg, kv), numsub(cg, _plus1(kv)))),
                And(Leq(Rat(0), Var(tv2)), Leq(Var(tv2), Rat(1))),
            ),
        ),
    )
    dsucc = b.ax(
        "disj_succ",
        Implies(
            NatAtom(kv),
            Eq(
                disjupto(cg, _plus1(kv)),
                ordot(disjupto(cg, kv), numsub(cg, _plus1(kv))),
            ),
        ),
    )
    eqd = b.taut(
        Eq(disjupto(cg, _plus1(kv)), ordot(disjupto(cg, kv), numsub(cg, _plus1(kv)))),
        dsucc,
    )
    eqd_sym = _eq_symm(
        b, eqd, disjupto(cg, _plus1(kv)), ordot(disjupto(cg, kv), numsub(cg, _plus1(kv)))
    )
    subd2 = b.ax(
        "eq_sub",
        Implies(
            Eq(ordot(disjupto(cg, kv), numsub(cg, _plus1(kv))), disjupto(cg, _plus1(kv))),
            Implies(
                PrAtom(ordot(disjupto(cg, kv), numsub(cg, _plus1(kv))), Var(sv2)),
                PrAtom(disjupto(cg, _plus1(kv)), Var(sv2)),
            ),
        ),
    )
    goal_in = b.lra(substitute(theta, kvar, _plus1(kv)), kf3o, kf3a, eqd_sym, subd2)
    b.pop()
    stepline = b.exists_elim(
        exl, [sv2, tv2], matrix6, goal_in, substitute(theta, kvar, _plus1(kv))
    )
    b.pop()
    b.pop()
    stepimpl = b.taut(
        Implies(And(NatAtom(kv), theta), substitute(theta, kvar, _plus1(kv))), stepline
    )
    stepall = _forall_intro(b, stepimpl, kvar)
    ind = b.ax(
        "ind",
        Implies(
            And(substitute(theta, kvar, Rat(0)), b.formula(stepall).right
                if isinstance(b.formula(stepall), Implies)
                else b.formula(stepall)),
            ForAll(kvar, Implies(NatAtom(kv), theta)),
        ),
    )
    dall = b.taut(ForAll(kvar, Implies(NatAtom(kv), theta)), ind, base, stepall)

    # the sup axiom forces the stages to carry the existential's certainty
    xs, ss = "xs", "ss"
    inner = And(
        PrAtom(disjupto(cg, Var(xs)), Var(ss)),
        Leq(Rat(1), Arith("+", Var(ss), Rat(1, 2))),
    )
    mat_a = And(NatAtom(Var(xs)), Exists(ss, inner))
    sigb = b.ax(
        "sig_b",
        Implies(
            And(PrAtom(cd, Rat(1)), Not(Leq(Rat(1, 2), Rat(0)))),
            Exists(xs, mat_a),
        ),
    )
    half = b.lra(Not(Leq(Rat(1, 2), Rat(0))))
    exs = b.taut(Exists(xs, mat_a), sigb, prd1, half)
    b.push(mat_a)
    exinner = b.taut(Exists(ss, inner))
    b.push(inner)
    dinst = _spec_inst(b, dall, Var(xs))
    thxs = b.taut(PrAtom(disjupto(cg, Var(xs)), Rat(0)), dinst)
    kf2d = b.ax(
        "kf2",
        Implies(
            And(PrAtom(disjupto(cg, Var(xs)), Var(ss)), PrAtom(disjupto(cg, Var(xs)), Rat(0))),
            Eq(Var(ss), Rat(0)),
        ),
    )
    botin = b.lra(BOT, thxs, kf2d)
    b.pop()
    inner_bot = b.exists_elim(exinner, [ss], inner, botin, BOT)
    b.pop()
    outer_bot = b.exists_elim(exs, [xs], mat_a, inner_bot, BOT)
    b.pop()
    delta_line = b.steps_lra_theorem(delta, outer_bot)
    e_line = b.steps_taut_theorem(e_f, delta_line, bic)

    # certainty of every iterate, instance by instance
    insts = []
    cur = delta_line
    from .coding import priter_value

    for n in range(11):
        nec_n = b.nec(cur)
        cn = priter_value(d, n)
        code_n = b.ax("code", Eq(CodeConst(cn), priter(cd, Rat(n))))
        sub_n = b.ax(
            "eq_sub",
            Implies(
                Eq(CodeConst(cn), priter(cd, Rat(n))),
                Implies(
                    PrAtom(CodeConst(cn), Rat(1)), PrAtom(priter(cd, Rat(n)), Rat(1))
                ),
            ),
        )
        pr_n = b.taut(PrAtom(priter(cd, Rat(n)), Rat(1)), nec_n, code_n, sub_n)
        gamma_n = Not(PrAtom(priter(cd, Rat(n)), Rat(1)))
        notg = b.taut(Not(gamma_n), pr_n)
        insts.append(notg)
        cur = nec_n

    final = b.steps_taut_theorem(
        conj(e_f, *[b.formula(i) for i in insts]), e_line, *insts
    )
    return BundledDerivation(
        name="mcgee_witness",
        theory="RKsigma",
        target=b.formula(final),
        proof=b.proof(),
        summary="the sup axiom proves the iterate existential while every instance is refuted",
        reconstruction=True,
    )


# ---------------------------------------------------------------------------
# Catalog, serialization, and the runner

_BUILDERS = {
    "monotonicity": build_monotonicity,
    "pr4_incon": build_pr4_incon,
    "negintro1_incon": build_negintro1_incon,
    "negintro2_incon": build_negintro2_incon,
    "rv_incon": build_rv_incon,
    "vstar_incon": build_vstar_incon,
    "reflection_partial": build_reflection_partial,
    "mcgee_witness": build_mcgee_witness,
}


def build_all() -> dict[str, BundledDerivation]:
    return {name: fn() for name, fn in _BUILDERS.items()}


def bundled_names() -> list[str]:
    return list(_BUILDERS)


def _data_dir() -> Path:
    return Path(__file__).resolve().parent / "derivations"


def write_bundle(target_dir: Path | None = None) -> None:
    """Regenerate the shipped .prf files and the manifest."""

    out = Path(target_dir) if target_dir else _data_dir()
    out.mkdir(parents=True, exist_ok=True)
    manifest = {}
    for name, deriv in build_all().items():
        (out / f"{name}.prf").write_text(render_script(deriv.proof))
        manifest[name] = {
            "theory": deriv.theory,
            "target": formula_str(deriv.target),
            "summary": deriv.summary,
            "reconstruction": deriv.reconstruction,
            "steps": len(deriv.proof),
        }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def load_bundled(name: str) -> BundledDerivation:
    data = _data_dir()
    manifest_path = data / "manifest.json"
    if not manifest_path.exists():
        if name not in _BUILDERS:
            raise KeyError(f"unknown bundled derivation {name!r}")
        return _BUILDERS[name]()
    manifest = json.loads(manifest_path.read_text())
    if name not in manifest:
        raise KeyError(f"unknown bundled derivation {name!r}")
    entry = manifest[name]
    proof = parse_script((data / f"{name}.prf").read_text())
    return BundledDerivation(
        name=name,
        theory=entry["theory"],
        target=parse_formula(entry["target"]),
        proof=proof,
        summary=entry["summary"],
        reconstruction=entry.get("reconstruction", False),
    )


def run_bundled(name: str) -> tuple[Verdict, BundledDerivation]:
    deriv = load_bundled(name)
    theory = get_theory(deriv.theory)
    verdict = check_proof(theory, deriv.proof)
    if verdict.accepted and deriv.proof.steps[-1].formula != deriv.target:
        raise AssertionError(f"{name}: final line differs from the recorded target")
    return verdict, deriv
