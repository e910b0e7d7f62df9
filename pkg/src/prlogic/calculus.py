"""Theory specifications, axiom-schema matching, and Hilbert proof checking.

Schemas come in two styles: template schemas (a formula pattern over term
metavariables, matched up to renaming of bound variables) and procedural
schemas (code-sensitive side conditions, checked computationally).  The
probability axioms are rendered relationally; where an axiom's equational
reading asserts that a probability exists, the rendering carries the
existential explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections import Counter
from fractions import Fraction
from typing import Callable, Optional

from . import coding
from .coding import (
    NotACodeError,
    TermEvalError,
    decode,
    decode_formula,
    encode,
    eval_term,
)
from .diagonal import named_fixed_points
from .lra import NonlinearTermError, NotLinearFragmentError, lra_check
from .parser import parse_formula
from .proofs import Proof, Justification, Step, StepFailure, Verdict
from .syntax import (
    And,
    Arith,
    BewAtom,
    BExists,
    BForAll,
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
    SynApp,
    Term,
    TrueAtom,
    Var,
    formula_str,
    free_vars,
    is_sentence,
    subformulas,
    subst_in_term,
    substitute,
    term_vars,
)
from .taut import AtomBudgetError, taut_check

Binding = dict[str, Term]


# ---------------------------------------------------------------------------
# Template matching

_META_NAMES = {"X", "Y", "Z", "U", "V", "S", "W", "EPS", "C1", "C2", "F1", "F2"}


def _match_term(pat: Term, t: Term, b: Binding, bound: dict[str, str]) -> bool:
    if isinstance(pat, Var):
        if pat.name in bound:
            return isinstance(t, Var) and t.name == bound[pat.name]
        if pat.name in _META_NAMES:
            # capture check: matched term may not mention instance-bound vars
            if term_vars(t) & set(bound.values()):
                return False
            if pat.name in b:
                return b[pat.name] == t
            b[pat.name] = t
            return True
        return isinstance(t, Var) and t.name == pat.name
    if isinstance(pat, Rat):
        return isinstance(t, Rat) and pat == t
    if isinstance(pat, CodeConst):
        return isinstance(t, CodeConst) and pat == t
    if isinstance(pat, Arith):
        return (
            isinstance(t, Arith)
            and pat.op == t.op
            and _match_term(pat.left, t.left, b, bound)
            and _match_term(pat.right, t.right, b, bound)
        )
    if isinstance(pat, SynApp):
        return (
            isinstance(t, SynApp)
            and pat.fn == t.fn
            and all(_match_term(p, a, b, bound) for p, a in zip(pat.args, t.args))
        )
    raise TypeError(pat)


def _match_formula(pat: Formula, phi: Formula, b: Binding, bound: dict[str, str]) -> bool:
    if isinstance(pat, (Eq, Leq)):
        return (
            type(phi) is type(pat)
            and _match_term(pat.left, phi.left, b, bound)
            and _match_term(pat.right, phi.right, b, bound)
        )
    if isinstance(pat, (NatAtom, SentAtom)):
        return type(phi) is type(pat) and _match_term(pat.arg, phi.arg, b, bound)
    if isinstance(pat, PrAtom):
        return (
            isinstance(phi, PrAtom)
            and _match_term(pat.code, phi.code, b, bound)
            and _match_term(pat.value, phi.value, b, bound)
        )
    if isinstance(pat, BewAtom):
        return (
            isinstance(phi, BewAtom)
            and pat.tag == phi.tag
            and _match_term(pat.code, phi.code, b, bound)
        )
    if isinstance(pat, TrueAtom):
        return isinstance(phi, TrueAtom) and _match_term(pat.code, phi.code, b, bound)
    if isinstance(pat, Not):
        return isinstance(phi, Not) and _match_formula(pat.body, phi.body, b, bound)
    if isinstance(pat, (And, Or, Implies, Iff)):
        return (
            type(phi) is type(pat)
            and _match_formula(pat.left, phi.left, b, bound)
            and _match_formula(pat.right, phi.right, b, bound)
        )
    if isinstance(pat, (ForAll, Exists)):
        if type(phi) is not type(pat):
            return False
        inner = dict(bound)
        inner[pat.var] = phi.var
        return _match_formula(pat.body, phi.body, b, inner)
    if isinstance(pat, (BForAll, BExists)):
        if type(phi) is not type(pat):
            return False
        if not _match_term(pat.bound, phi.bound, b, bound):
            return False
        inner = dict(bound)
        inner[pat.var] = phi.var
        return _match_formula(pat.body, phi.body, b, inner)
    raise TypeError(pat)


def match_template(pattern: Formula, phi: Formula) -> Optional[Binding]:
    b: Binding = {}
    if _match_formula(pattern, phi, b, {}):
        return b
    return None


# ---------------------------------------------------------------------------
# Substitution inference (for the quantifier schemas)


def infer_subst(body: Formula, v: str, target: Formula) -> Optional[Term]:
    """Find t with substitute(body, v, t) == target, if one exists."""

    candidates: set[Term] = set()

    def wt(p: Term, q: Term) -> bool:
        if p == Var(v):
            candidates.add(q)
            return True
        if isinstance(p, Var):
            return p == q
        if isinstance(p, (Rat, CodeConst)):
            return p == q
        if isinstance(p, Arith):
            return (
                isinstance(q, Arith)
                and p.op == q.op
                and wt(p.left, q.left)
                and wt(p.right, q.right)
            )
        if isinstance(p, SynApp):
            return (
                isinstance(q, SynApp)
                and p.fn == q.fn
                and all(wt(a, c) for a, c in zip(p.args, q.args))
            )
        raise TypeError(p)

    def wf(p: Formula, q: Formula) -> bool:
        if type(p) is not type(q):
            return False
        if isinstance(p, (Eq, Leq)):
            return wt(p.left, q.left) and wt(p.right, q.right)
        if isinstance(p, (NatAtom, SentAtom)):
            return wt(p.arg, q.arg)
        if isinstance(p, PrAtom):
            return wt(p.code, q.code) and wt(p.value, q.value)
        if isinstance(p, BewAtom):
            return p.tag == q.tag and wt(p.code, q.code)
        if isinstance(p, TrueAtom):
            return wt(p.code, q.code)
        if isinstance(p, Not):
            return wf(p.body, q.body)
        if isinstance(p, (And, Or, Implies, Iff)):
            return wf(p.left, q.left) and wf(p.right, q.right)
        if isinstance(p, (ForAll, Exists)):
            if p.var != q.var:
                return False
            if p.var == v:
                return p == q
            return wf(p.body, q.body)
        if isinstance(p, (BForAll, BExists)):
            if p.var != q.var or not wt(p.bound, q.bound):
                return False
            if p.var == v:
                return p.body == q.body
            return wf(p.body, q.body)
        raise TypeError(p)

    if not wf(body, target):
        return None
    if not candidates:
        return Var(v) if body == target else None
    if len(candidates) > 1:
        return None
    t = candidates.pop()
    if substitute(body, v, t) != target:
        return None
    return t


# ---------------------------------------------------------------------------
# Schema registry


@dataclass(frozen=True)
class Schema:
    schema_id: str
    description: str
    matcher: Callable[[Formula], tuple[Optional[Binding], str]]


SCHEMAS: dict[str, Schema] = {}


def _register(schema_id: str, description: str):
    def deco(fn):
        SCHEMAS[schema_id] = Schema(schema_id, description, fn)
        return fn

    return deco


def _template_schema(schema_id: str, description: str, *patterns: str):
    pats = [parse_formula(p) for p in patterns]

    @_register(schema_id, description)
    def matcher(phi: Formula, _pats=pats) -> tuple[Optional[Binding], str]:
        for pat in _pats:
            b = match_template(pat, phi)
            if b is not None:
                return b, ""
        return None, f"not an instance of {schema_id}"

    return matcher


# -- first-order logic

@_register("ui", "universal instantiation: forall v p -> p[v:=t]")
def _ui(phi: Formula):
    if isinstance(phi, Implies) and isinstance(phi.left, ForAll):
        t = infer_subst(phi.left.body, phi.left.var, phi.right)
        if t is not None:
            return {"t": t}, ""
    return None, "not a universal-instantiation instance"


@_register("ei", "existential introduction: p[v:=t] -> exists v p")
def _ei(phi: Formula):
    if isinstance(phi, Implies) and isinstance(phi.right, Exists):
        t = infer_subst(phi.right.body, phi.right.var, phi.left)
        if t is not None:
            return {"t": t}, ""
    return None, "not an existential-introduction instance"


@_register("all_imp", "forall v (p -> q) -> (p -> forall v q), v not free in p")
def _all_imp(phi: Formula):
    if (
        isinstance(phi, Implies)
        and isinstance(phi.left, ForAll)
        and isinstance(phi.left.body, Implies)
        and isinstance(phi.right, Implies)
        and isinstance(phi.right.right, ForAll)
    ):
        v = phi.left.var
        ante, cons = phi.left.body.left, phi.left.body.right
        if (
            phi.right.left == ante
            and phi.right.right.var == v
            and phi.right.right.body == cons
            and v not in free_vars(ante)
        ):
            return {}, ""
    return None, "not a quantifier-shift instance"


@_register("ex_imp", "forall v (p -> q) -> (exists v p -> q), v not free in q")
def _ex_imp(phi: Formula):
    if (
        isinstance(phi, Implies)
        and isinstance(phi.left, ForAll)
        and isinstance(phi.left.body, Implies)
        and isinstance(phi.right, Implies)
        and isinstance(phi.right.left, Exists)
    ):
        v = phi.left.var
        ante, cons = phi.left.body.left, phi.left.body.right
        if (
            phi.right.left.var == v
            and phi.right.left.body == ante
            and phi.right.right == cons
            and v not in free_vars(cons)
        ):
            return {}, ""
    return None, "not an existential-elimination instance"


@_register("eq_refl", "t = t")
def _eq_refl(phi: Formula):
    if isinstance(phi, Eq) and phi.left == phi.right:
        return {"t": phi.left}, ""
    return None, "not a reflexivity instance"


@_register("eq_sub", "s = t -> (p[v:=s] -> p[v:=t])")
def _eq_sub(phi: Formula):
    if not (
        isinstance(phi, Implies)
        and isinstance(phi.left, Eq)
        and isinstance(phi.right, Implies)
    ):
        return None, "not a substitution instance"
    s, t = phi.left.left, phi.left.right
    a, a2 = phi.right.left, phi.right.right

    def wt(p: Term, q: Term) -> bool:
        if p == q:
            return True
        if p == s and q == t:
            return True
        if type(p) is not type(q):
            return False
        if isinstance(p, Arith):
            return p.op == q.op and wt(p.left, q.left) and wt(p.right, q.right)
        if isinstance(p, SynApp):
            return p.fn == q.fn and all(wt(x, y) for x, y in zip(p.args, q.args))
        return False

    def wf(p: Formula, q: Formula) -> bool:
        if type(p) is not type(q):
            return False
        if isinstance(p, (Eq, Leq)):
            return wt(p.left, q.left) and wt(p.right, q.right)
        if isinstance(p, (NatAtom, SentAtom)):
            return wt(p.arg, q.arg)
        if isinstance(p, PrAtom):
            return wt(p.code, q.code) and wt(p.value, q.value)
        if isinstance(p, BewAtom):
            return p.tag == q.tag and wt(p.code, q.code)
        if isinstance(p, TrueAtom):
            return wt(p.code, q.code)
        if isinstance(p, Not):
            return wf(p.body, q.body)
        if isinstance(p, (And, Or, Implies, Iff)):
            return wf(p.left, q.left) and wf(p.right, q.right)
        if isinstance(p, (ForAll, Exists)):
            # no replacement under binders that could capture; require equality
            return p == q
        if isinstance(p, (BForAll, BExists)):
            return p == q
        raise TypeError(p)

    if wf(a, a2):
        return {"s": s, "t": t}, ""
    return None, "right side is not a replacement of the left"


# -- arithmetic base

_template_schema("nat_zero", "0 is a natural number", "N(0)")
_template_schema("nat_succ", "naturals closed under successor", "N(X) -> N(X + 1)")
_template_schema("nat_nonneg", "naturals are nonnegative", "N(X) -> 0 <= X")


@_register("ind", "induction over the full language, relativized to N")
def _ind(phi: Formula):
    if not (
        isinstance(phi, Implies)
        and isinstance(phi.left, And)
        and isinstance(phi.left.right, ForAll)
        and isinstance(phi.right, ForAll)
    ):
        return None, "not an induction instance"
    concl = phi.right
    v = concl.var
    if not (isinstance(concl.body, Implies) and concl.body.left == NatAtom(Var(v))):
        return None, "conclusion must be forall v (N(v) -> p)"
    body = concl.body.right
    base = phi.left.left
    stepq = phi.left.right
    if stepq.var != v or not isinstance(stepq.body, Implies):
        return None, "step quantifier mismatch"
    if stepq.body.left != And(NatAtom(Var(v)), body):
        return None, "step hypothesis must be N(v) & p"
    if base != substitute(body, v, Rat(0)):
        return None, "base case mismatch"
    if stepq.body.right != substitute(body, v, Arith("+", Var(v), Rat(1))):
        return None, "step conclusion mismatch"
    return {"var": Var(v)}, ""


@_register("code", "true variable-free equation between code terms")
def _code(phi: Formula):
    if not isinstance(phi, Eq):
        return None, "not an equation"
    if term_vars(phi.left) or term_vars(phi.right):
        return None, "equation must be variable-free"
    try:
        lv, rv = eval_term(phi.left), eval_term(phi.right)
    except TermEvalError as exc:
        return None, f"evaluation failed: {exc}"
    if lv == rv:
        return {"value": Rat(lv.numerator, lv.denominator)}, ""
    return None, f"sides evaluate to {lv} and {rv}"


@_register("sent", "Sent(t) for closed t coding a sentence")
def _sent(phi: Formula):
    if not isinstance(phi, SentAtom) or term_vars(phi.arg):
        return None, "not a closed sentence-hood claim"
    try:
        v = eval_term(phi.arg)
    except TermEvalError as exc:
        return None, f"evaluation failed: {exc}"
    if v.denominator != 1 or v < 0:
        return None, "argument is not a natural number"
    try:
        f = decode_formula(int(v))
    except NotACodeError as exc:
        return None, str(exc)
    if not is_sentence(f):
        return None, "coded formula has free variables"
    return {"code": CodeConst(int(v))}, ""


# -- coding-function recursion axioms

_template_schema("priter_zero", "priter at zero", "priter(Z, 0) = Z")
_template_schema(
    "priter_succ",
    "priter recursion step",
    "N(X) -> priter(Z, X + 1) = pr1dot(priter(Z, X))",
)
_template_schema("disj_zero", "disjupto at zero", "disjupto(Z, 0) = numsub(Z, 0)")
_template_schema(
    "disj_succ",
    "disjupto recursion step",
    "N(X) -> disjupto(Z, X + 1) = ordot(disjupto(Z, X), numsub(Z, X + 1))",
)


@_register("numsub_bridge", "instance codes of a ~Pr(F(v),1) template")
def _numsub_bridge(phi: Formula):
    # N(X) -> numsub(#g, X) = negdot(pr1dot(F[v:=X]))
    if not (
        isinstance(phi, Implies)
        and isinstance(phi.left, NatAtom)
        and isinstance(phi.right, Eq)
    ):
        return None, "not a bridge instance"
    x = phi.left.arg
    lhs, rhs = phi.right.left, phi.right.right
    if not (
        isinstance(lhs, SynApp)
        and lhs.fn == "numsub"
        and isinstance(lhs.args[0], CodeConst)
        and lhs.args[1] == x
    ):
        return None, "left side must be numsub(#g, X)"
    g = lhs.args[0].code
    try:
        tmpl = decode_formula(g)
    except NotACodeError as exc:
        return None, str(exc)
    if not (
        isinstance(tmpl, Not)
        and isinstance(tmpl.body, PrAtom)
        and tmpl.body.value == Rat(1)
        and isinstance(tmpl.body.code, SynApp)
    ):
        return None, "template must be ~Pr(F(v), 1) with F a syntax function"
    fv = free_vars(tmpl)
    if len(fv) != 1:
        return None, "template must have exactly one free variable"
    v = next(iter(fv))
    expected = SynApp("negdot", (SynApp("pr1dot", (subst_in_term(tmpl.body.code, v, x),)),))
    if rhs == expected:
        return {"g": CodeConst(g), "x": x}, ""
    return None, "right side does not spell the instance code"


# -- probability axioms

_template_schema("kf2", "Pr is functional", "Pr(X, Y) & Pr(X, Z) -> Y = Z")
_template_schema(
    "kf3",
    "Pr holds of sentence codes with values in [0,1]",
    "Pr(X, Y) -> Sent(X) & (0 <= Y & Y <= 1)",
)


@_register("kf4", "Pr(q(p), 1) <-> p, for closed p without Pr/T/Bew")
def _kf4(phi: Formula):
    if not (
        isinstance(phi, Iff)
        and isinstance(phi.left, PrAtom)
        and isinstance(phi.left.code, CodeConst)
        and phi.left.value == Rat(1)
    ):
        return None, "left side must be Pr(#c, 1)"
    psi = phi.right
    if not is_sentence(psi):
        return None, "right side must be a sentence"
    for sub in subformulas(psi):
        if isinstance(sub, (PrAtom, TrueAtom, BewAtom)):
            return None, "right side must be in the base language"
    if encode(psi) != phi.left.code.code:
        return None, "code does not match the right-hand sentence"
    return {"code": phi.left.code}, ""


_template_schema(
    "kf5",
    "a disjunction is at least as probable as its disjuncts",
    "Pr(X, U) & Sent(Z) -> exists v (Pr(ordot(X, Z), v) & U <= v)",
    "Pr(Z, U) & Sent(X) -> exists v (Pr(ordot(X, Z), v) & U <= v)",
)
_template_schema(
    "kf6",
    "inclusion-exclusion for coded disjunction/conjunction",
    "Pr(X, U) & Pr(Z, V) -> exists s (exists t (Pr(ordot(X, Z), s)"
    " & Pr(anddot(X, Z), t) & s + t = U + V))",
)
_template_schema(
    "kf7",
    "complementation for coded negation",
    "Pr(X, Y) <-> Pr(negdot(X), 1 - Y)",
)


# -- sigma-additivity (sup characterization)


def _sig_codes(e_const: Term, g_const: Term) -> tuple[Optional[tuple[int, int]], str]:
    if not (isinstance(e_const, CodeConst) and isinstance(g_const, CodeConst)):
        return None, "generator and existential must be code constants"
    e, g = e_const.code, g_const.code
    try:
        ex = decode_formula(e)
        gen = decode_formula(g)
    except NotACodeError as exc:
        return None, str(exc)
    if not (
        isinstance(ex, Exists)
        and isinstance(ex.body, And)
        and ex.body.left == NatAtom(Var(ex.var))
        and ex.body.right == gen
    ):
        return None, "existential code must be exists v (N(v) & generator)"
    if free_vars(gen) != {ex.var}:
        return None, "generator must have exactly the existential's variable free"
    return (e, g), ""


@_register("sig_def", "the existential and all its finite stages have probabilities")
def _sig_def(phi: Formula):
    # exists u Pr(#e, u) & forall x (N(x) -> exists s Pr(disjupto(#g, x), s))
    if not (
        isinstance(phi, And)
        and isinstance(phi.left, Exists)
        and isinstance(phi.left.body, PrAtom)
        and isinstance(phi.right, ForAll)
    ):
        return None, "shape mismatch"
    exl = phi.left
    if exl.body.value != Var(exl.var):
        return None, "left conjunct must be exists u Pr(#e, u)"
    fa = phi.right
    if not (
        isinstance(fa.body, Implies)
        and fa.body.left == NatAtom(Var(fa.var))
        and isinstance(fa.body.right, Exists)
        and isinstance(fa.body.right.body, PrAtom)
    ):
        return None, "right conjunct must be forall x (N(x) -> exists s Pr(...))"
    inner = fa.body.right
    atom = inner.body
    if atom.value != Var(inner.var):
        return None, "stage value must be the inner bound variable"
    if not (
        isinstance(atom.code, SynApp)
        and atom.code.fn == "disjupto"
        and atom.code.args[1] == Var(fa.var)
    ):
        return None, "stage code must be disjupto(#g, x)"
    codes, msg = _sig_codes(exl.body.code, atom.code.args[0])
    if codes is None:
        return None, msg
    return {"e": CodeConst(codes[0]), "g": CodeConst(codes[1])}, ""


@_register("sig_a", "finite stages bound the existential's probability")
def _sig_a(phi: Formula):
    pat = parse_formula("N(X) & Pr(disjupto(C1, X), S) & Pr(C2, U) -> S <= U")
    b = match_template(pat, phi)
    if b is None:
        return None, "shape mismatch"
    codes, msg = _sig_codes(b["C2"], b["C1"])
    if codes is None:
        return None, msg
    return b, ""


@_register("sig_b", "the stages approach the existential's probability")
def _sig_b(phi: Formula):
    pat = parse_formula(
        "Pr(C2, U) & 0 < EPS ->"
        " exists x (N(x) & exists s (Pr(disjupto(C1, x), s) & U <= s + EPS))"
    )
    b = match_template(pat, phi)
    if b is None:
        return None, "shape mismatch"
    codes, msg = _sig_codes(b["C2"], b["C1"])
    if codes is None:
        return None, msg
    return b, ""


# -- truth axioms (FS without quantifier commutation)


@_register("fs4", "T(q(p)) <-> p, for closed p without Pr/T/Bew")
def _fs4(phi: Formula):
    if not (
        isinstance(phi, Iff)
        and isinstance(phi.left, TrueAtom)
        and isinstance(phi.left.code, CodeConst)
    ):
        return None, "left side must be T(#c)"
    psi = phi.right
    if not is_sentence(psi):
        return None, "right side must be a sentence"
    for sub in subformulas(psi):
        if isinstance(sub, (PrAtom, TrueAtom, BewAtom)):
            return None, "right side must be in the base language"
    if encode(psi) != phi.left.code.code:
        return None, "code does not match the right-hand sentence"
    return {"code": phi.left.code}, ""


_template_schema(
    "t_neg", "truth commutes with negation", "Sent(X) -> (T(negdot(X)) <-> ~T(X))"
)
_template_schema(
    "t_and",
    "truth commutes with conjunction",
    "Sent(X) & Sent(Z) -> (T(anddot(X, Z)) <-> T(X) & T(Z))",
)
_template_schema(
    "t_or",
    "truth commutes with disjunction",
    "Sent(X) & Sent(Z) -> (T(ordot(X, Z)) <-> T(X) | T(Z))",
)


# -- optional strengthenings and the principles under investigation

_template_schema("two_valued", "probabilities are 0 or 1", "Pr(X, Y) -> Y = 0 | Y = 1")


@_register("pr_total", "every sentence of the cluster has a probability")
def _pr_total(phi: Formula):
    if not (
        isinstance(phi, Exists)
        and isinstance(phi.body, PrAtom)
        and phi.body.value == Var(phi.var)
        and isinstance(phi.body.code, CodeConst)
    ):
        return None, "must be exists y Pr(#f, y)"
    try:
        f = decode_formula(phi.body.code.code)
    except NotACodeError as exc:
        return None, str(exc)
    if not is_sentence(f):
        return None, "code must name a sentence"
    return {"f": phi.body.code}, ""


def _pr_of_pr_schema(phi: Formula, converse: bool):
    if not isinstance(phi, Implies):
        return None, "not an implication"
    inner, outer = (phi.left, phi.right) if not converse else (phi.right, phi.left)
    if not (
        isinstance(inner, PrAtom)
        and isinstance(inner.code, CodeConst)
        and inner.value == Rat(1)
        and isinstance(outer, PrAtom)
        and isinstance(outer.code, CodeConst)
        and outer.value == Rat(1)
    ):
        return None, "both sides must be Pr(#c, 1)"
    if outer.code.code != coding.pr1dot_value(inner.code.code):
        return None, "outer code must code the inner ascription"
    try:
        f = decode_formula(inner.code.code)
    except NotACodeError as exc:
        return None, str(exc)
    if not is_sentence(f):
        return None, "inner code must name a sentence"
    return {"f": inner.code}, ""


@_register("pr4", "certainty is luminous: Pr(f,1) -> Pr(q(Pr(f,1)), 1)")
def _pr4(phi: Formula):
    return _pr_of_pr_schema(phi, converse=False)


@_register("cpr4", "certainty is transparent: Pr(q(Pr(f,1)), 1) -> Pr(f,1)")
def _cpr4(phi: Formula):
    return _pr_of_pr_schema(phi, converse=True)


def _uncertainty_sentence(b_code: int) -> Optional[int]:
    """If b codes 'exists y (Pr(#f, y) & y < 1)', return f."""

    try:
        b = decode_formula(b_code)
    except NotACodeError:
        return None
    if not (isinstance(b, Exists) and isinstance(b.body, And)):
        return None
    y = b.var
    atom, cmp = b.body.left, b.body.right
    if not (
        isinstance(atom, PrAtom)
        and isinstance(atom.code, CodeConst)
        and atom.value == Var(y)
        and cmp == Not(Leq(Rat(1), Var(y)))
    ):
        return None
    return atom.code.code


@_register("negintro1", "uncertainty is luminous")
def _negintro1(phi: Formula):
    # B_f -> Pr(#b, 1) with B_f = exists y (Pr(#f, y) & y < 1), b = code(B_f)
    if not (
        isinstance(phi, Implies)
        and isinstance(phi.right, PrAtom)
        and isinstance(phi.right.code, CodeConst)
        and phi.right.value == Rat(1)
    ):
        return None, "consequent must be Pr(#b, 1)"
    b = phi.right.code.code
    f = _uncertainty_sentence(b)
    if f is None or encode(phi.left) != b:
        return None, "antecedent must be the uncertainty sentence coded by b"
    return {"f": CodeConst(f), "b": phi.right.code}, ""


@_register("negintro2", "uncertainty is transparent")
def _negintro2(phi: Formula):
    if not (
        isinstance(phi, Implies)
        and isinstance(phi.left, PrAtom)
        and isinstance(phi.left.code, CodeConst)
        and phi.left.value == Rat(1)
    ):
        return None, "antecedent must be Pr(#b, 1)"
    b = phi.left.code.code
    f = _uncertainty_sentence(b)
    if f is None or encode(phi.right) != b:
        return None, "consequent must be the uncertainty sentence coded by b"
    return {"f": CodeConst(f), "b": phi.left.code}, ""


def _ratio_consequent(phi: Formula) -> Optional[tuple[Term, Term, Formula, Formula]]:
    """Parse exists u exists w (Pr(#n,u) & Pr(#h,w) & ~w=0 & <bounds>)."""

    if not (isinstance(phi, Exists) and isinstance(phi.body, Exists)):
        return None
    u, w = phi.var, phi.body.var
    body = phi.body.body
    # left-nested conjunction: ((Pr(#n,u) & Pr(#h,w)) & ~(w=0)) & bounds
    if not (isinstance(body, And) and isinstance(body.left, And)):
        return None
    bounds = body.right
    guard = body.left.right
    if not isinstance(body.left.left, And):
        return None
    pr_n, pr_h = body.left.left.left, body.left.left.right
    if not (
        isinstance(pr_n, PrAtom)
        and pr_n.value == Var(u)
        and isinstance(pr_h, PrAtom)
        and pr_h.value == Var(w)
        and guard == Not(Eq(Var(w), Rat(0)))
    ):
        return None
    return pr_n.code, pr_h.code, bounds, body


def _check_condprob_codes(n_t: Term, h_t: Term, cond: Formula) -> tuple[bool, str]:
    if not (isinstance(n_t, CodeConst) and isinstance(h_t, CodeConst)):
        return False, "numerator and condition must be code constants"
    if encode(cond) != h_t.code:
        return False, "condition code mismatch"
    try:
        n_f = decode_formula(n_t.code)
    except NotACodeError as exc:
        return False, str(exc)
    if not (isinstance(n_f, And) and n_f.right == cond):
        return False, "numerator must code F & condition"
    return True, ""


@_register("rv", "synchronic reflection: Pr(f | Pr(f)=a) = a, ratio form")
def _rv(phi: Formula):
    if not (isinstance(phi, Implies) and isinstance(phi.left, Not)):
        return None, "antecedent must be ~Pr(#h, 0)"
    ante = phi.left.body
    if not (
        isinstance(ante, PrAtom)
        and ante.value == Rat(0)
        and isinstance(ante.code, CodeConst)
    ):
        return None, "antecedent must be ~Pr(#h, 0)"
    parsed = _ratio_consequent(phi.right)
    if parsed is None:
        return None, "consequent must be the guarded ratio existential"
    n_t, h_t, bounds, _ = parsed
    if h_t != ante.code:
        return None, "condition codes differ between antecedent and consequent"
    h = ante.code.code
    try:
        cond = decode_formula(h)
    except NotACodeError as exc:
        return None, str(exc)
    if not (isinstance(cond, PrAtom) and isinstance(cond.value, Rat)):
        return None, "condition must be Pr(#f, a) with a rational a"
    a = cond.value
    ok, msg = _check_condprob_codes(n_t, h_t, cond)
    if not ok:
        return None, msg
    # bounds: u = a * w  (u, w are the two existential variables)
    if not (
        isinstance(phi.right, Exists)
        and isinstance(phi.right.body, Exists)
    ):
        return None, "shape"
    u, w = phi.right.var, phi.right.body.var
    if bounds != Eq(Var(u), Arith("*", a, Var(w))):
        return None, "bound must be u = a * w"
    return {"h": h_t, "n": n_t, "a": a}, ""


@_register("vstar", "interval reflection at n = 0, ratio form")
def _vstar(phi: Formula):
    if not (isinstance(phi, Implies) and isinstance(phi.left, Not)):
        return None, "antecedent must be ~Pr(#g, 0)"
    ante = phi.left.body
    if not (
        isinstance(ante, PrAtom)
        and ante.value == Rat(0)
        and isinstance(ante.code, CodeConst)
    ):
        return None, "antecedent must be ~Pr(#g, 0)"
    parsed = _ratio_consequent(phi.right)
    if parsed is None:
        return None, "consequent must be the guarded ratio existential"
    n_t, g_t, bounds, _ = parsed
    if g_t != ante.code:
        return None, "condition codes differ between antecedent and consequent"
    try:
        cond = decode_formula(ante.code.code)
    except NotACodeError as exc:
        return None, str(exc)
    # condition: exists y (Pr(#f, y) & a <= y & y <= b), left-nested
    if not (
        isinstance(cond, Exists)
        and isinstance(cond.body, And)
        and isinstance(cond.body.left, And)
    ):
        return None, "condition must be the interval sentence"
    y = cond.var
    atom = cond.body.left.left
    lo_c = cond.body.left.right
    hi_c = cond.body.right
    if not (
        isinstance(atom, PrAtom)
        and atom.value == Var(y)
        and isinstance(atom.code, CodeConst)
        and isinstance(lo_c, Leq)
        and isinstance(hi_c, Leq)
        and isinstance(lo_c.left, Rat)
        and lo_c.right == Var(y)
        and hi_c.left == Var(y)
        and isinstance(hi_c.right, Rat)
    ):
        return None, "condition must be exists y (Pr(#f,y) & a <= y & y <= b)"
    a, b = lo_c.left, hi_c.right
    if not a.value <= b.value:
        return None, "empty interval"
    ok, msg = _check_condprob_codes(n_t, g_t, cond)
    if not ok:
        return None, msg
    u, w = phi.right.var, phi.right.body.var
    expected = And(
        Leq(Arith("*", a, Var(w)), Var(u)), Leq(Var(u), Arith("*", b, Var(w)))
    )
    if bounds != expected:
        return None, "bounds must be a*w <= u & u <= b*w"
    return {"g": g_t, "n": n_t, "a": a, "b": b}, ""


_template_schema(
    "reflection", "provability entails certainty", "Bew[S](X) -> Pr(X, 1)"
)
_template_schema(
    "bew_k",
    "provability distributes over implication",
    "Bew[S](impldot(X, Z)) -> (Bew[S](X) -> Bew[S](Z))",
)


def match_schema(schema_id: str, phi: Formula) -> tuple[Optional[Binding], str]:
    """Try to read phi as an instance of the named schema."""

    if schema_id not in SCHEMAS:
        return None, f"unknown schema {schema_id!r}"
    return SCHEMAS[schema_id].matcher(phi)


# ---------------------------------------------------------------------------
# Theories

LOGIC_SCHEMAS = frozenset({"ui", "ei", "all_imp", "ex_imp", "eq_refl", "eq_sub"})
QBASE_SCHEMAS = frozenset(
    {
        "nat_zero",
        "nat_succ",
        "nat_nonneg",
        "ind",
        "code",
        "sent",
        "priter_zero",
        "priter_succ",
        "disj_zero",
        "disj_succ",
        "numsub_bridge",
    }
)
KF_SCHEMAS = frozenset({"kf2", "kf3", "kf4", "kf5", "kf6", "kf7"})
SIGMA_SCHEMAS = frozenset({"sig_def", "sig_a", "sig_b"})
FS_SCHEMAS = frozenset({"fs4", "t_neg", "t_and", "t_or"})


@dataclass(frozen=True)
class TheorySpec:
    name: str
    base_language: str  # LQ | LR | LT
    schemas: frozenset[str]
    rules: frozenset[str]
    allow_bew: bool = False
    description: str = ""

    def extend(self, name: str, extra: frozenset[str], description: str = "",
               allow_bew: bool | None = None) -> "TheorySpec":
        return TheorySpec(
            name=name,
            base_language=self.base_language,
            schemas=self.schemas | extra,
            rules=self.rules | ({"NEC_BEW"} if allow_bew else frozenset()),
            allow_bew=self.allow_bew if allow_bew is None else allow_bew,
            description=description,
        )


_PR_RULES = frozenset({"MP", "GEN", "NEC_PR", "DIAG", "TAUT", "LRA", "DEFN"})
_T_RULES = frozenset({"MP", "GEN", "NEC_T", "DIAG", "TAUT", "LRA", "DEFN"})


def builtin_theories() -> dict[str, TheorySpec]:
    rkf = TheorySpec(
        name="RKf",
        base_language="LQ",
        schemas=LOGIC_SCHEMAS | QBASE_SCHEMAS | KF_SCHEMAS,
        rules=_PR_RULES,
        description="finitely additive typefree probability over the rationals",
    )
    rks = TheorySpec(
        name="RKsigma",
        base_language="LR",
        schemas=rkf.schemas | SIGMA_SCHEMAS,
        rules=_PR_RULES,
        description="sigma-additive typefree probability (sup characterization)",
    )
    fsm = TheorySpec(
        name="FS-",
        base_language="LT",
        schemas=LOGIC_SCHEMAS | QBASE_SCHEMAS | FS_SCHEMAS,
        rules=_T_RULES,
        description="compositional typefree truth without quantifier commutation",
    )
    out = {
        "RKf": rkf,
        "RKsigma": rks,
        "FS-": fsm,
        "RKf+Pr4": rkf.extend("RKf+Pr4", frozenset({"pr4"}),
                              "with probabilistic positive introspection"),
        "RKf+CPr4": rkf.extend("RKf+CPr4", frozenset({"cpr4"}),
                               "with the converse of positive introspection"),
        "RKf+NegIntro-1": rkf.extend(
            "RKf+NegIntro-1", frozenset({"negintro1"}),
            "with luminous uncertainty"),
        "RKf+NegIntro-2": rkf.extend(
            "RKf+NegIntro-2", frozenset({"negintro2", "pr_total"}),
            "with transparent uncertainty (plus the totality reading)"),
        "RKf+RV": rkf.extend(
            "RKf+RV", frozenset({"rv", "pr_total"}),
            "with the synchronic reflection principle"),
        "RKf+Vstar": rkf.extend(
            "RKf+Vstar", frozenset({"vstar", "pr_total"}),
            "with the interval reflection principle at n = 0"),
        "RKf+Reflection+HBL": rkf.extend(
            "RKf+Reflection+HBL", frozenset({"reflection", "bew_k"}),
            "with a provability predicate, its K axiom, and reflection",
            allow_bew=True),
        "RKf+": rkf.extend(
            "RKf+", frozenset({"two_valued", "pr_total"}),
            "two-valued strengthening used by the interpretation theorems"),
        "RKsigma+": rks.extend(
            "RKsigma+", frozenset({"two_valued", "pr_total"}),
            "two-valued strengthening used by the interpretation theorems"),
    }
    return out


_ALIASES = {
    "rkf": "RKf",
    "rksigma": "RKsigma",
    "rks": "RKsigma",
    "rkσ": "RKsigma",
    "fs-": "FS-",
    "fsminus": "FS-",
    "rkf+vstar": "RKf+Vstar",
    "rkf+v*": "RKf+Vstar",
    "rkf+v*(n=0)": "RKf+Vstar",
    "rkf+negintro1": "RKf+NegIntro-1",
    "rkf+negintro2": "RKf+NegIntro-2",
}


def get_theory(name: str) -> TheorySpec:
    cat = builtin_theories()
    if name in cat:
        return cat[name]
    key = name.lower()
    if key in _ALIASES:
        return cat[_ALIASES[key]]
    for k in cat:
        if k.lower() == key:
            return cat[k]
    raise KeyError(f"unknown theory {name!r}")


# ---------------------------------------------------------------------------
# Language discipline


def _language_ok(phi: Formula, theory: TheorySpec) -> str:
    for sub in subformulas(phi):
        if isinstance(sub, TrueAtom) and theory.base_language != "LT":
            return "truth atoms are not part of this theory's language"
        if isinstance(sub, PrAtom) and theory.base_language == "LT":
            return "probability atoms are not part of this theory's language"
        if isinstance(sub, BewAtom) and not theory.allow_bew:
            return "provability atoms are not part of this theory's language"
    return ""


# ---------------------------------------------------------------------------
# Proof checking


def _conjoin(formulas: list[Formula]) -> Formula:
    out = formulas[0]
    for f in formulas[1:]:
        out = And(out, f)
    return out


def _unfold_ratios(phi: Formula) -> Formula:
    """Definitional reading of ratio equations: t1/t2 = t3 as guarded product."""

    if isinstance(phi, Eq) and isinstance(phi.left, Arith) and phi.left.op == "/":
        num, den = phi.left.left, phi.left.right
        return And(Eq(num, Arith("*", phi.right, den)), Not(Eq(den, Rat(0))))
    if isinstance(phi, Not):
        return Not(_unfold_ratios(phi.body))
    if isinstance(phi, (And, Or, Implies, Iff)):
        return type(phi)(_unfold_ratios(phi.left), _unfold_ratios(phi.right))
    return phi


def check_proof(theory: TheorySpec, proof: Proof) -> Verdict:
    """Validate every step; verdicts never raise on mere invalidity."""

    failures: list[StepFailure] = []
    usage: Counter[str] = Counter()
    fixed_points = None  # built lazily; DIAG is rare

    for idx, step in enumerate(proof.steps):
        reason = _check_step(theory, proof, idx, usage)
        if reason:
            failures.append(StepFailure(idx, step.label, reason))

    # language discipline is a per-step property too
    for idx, step in enumerate(proof.steps):
        msg = _language_ok(step.formula, theory)
        if msg:
            failures.append(StepFailure(idx, step.label, msg))

    failures.sort(key=lambda f: f.index)
    return Verdict(
        accepted=not failures,
        first_failure=failures[0] if failures else None,
        failures=tuple(failures),
        step_count=len(proof.steps),
        schema_usage=tuple(sorted(usage.items())),
    )


_FIXED_POINTS_CACHE: dict[str, object] | None = None


def _fixed_points():
    global _FIXED_POINTS_CACHE
    if _FIXED_POINTS_CACHE is None:
        _FIXED_POINTS_CACHE = named_fixed_points()
    return _FIXED_POINTS_CACHE


def _check_step(theory: TheorySpec, proof: Proof, idx: int, usage: Counter) -> str:
    step = proof.steps[idx]
    j = step.justification
    phi = step.formula

    def line(i: int) -> Formula:
        return proof.steps[i].formula

    if any(p >= idx for p in j.premises):
        return "premise references a later step"

    if j.kind == "AX":
        if j.schema not in theory.schemas:
            return f"schema {j.schema!r} is not part of {theory.name}"
        binding, msg = match_schema(j.schema, phi)
        if binding is None:
            return f"schema {j.schema}: {msg}"
        usage[f"AX:{j.schema}"] += 1
        return ""

    if j.kind == "MP":
        if "MP" not in theory.rules:
            return "MP is not a rule of this theory"
        a, b = line(j.premises[0]), line(j.premises[1])
        for imp, ante in ((a, b), (b, a)):
            if isinstance(imp, Implies) and imp.left == ante and imp.right == phi:
                usage["MP"] += 1
                return ""
        return "modus ponens does not apply to the cited lines"

    if j.kind == "GEN":
        if "GEN" not in theory.rules:
            return "GEN is not a rule of this theory"
        if phi == ForAll(j.var, line(j.premises[0])):
            usage["GEN"] += 1
            return ""
        return "generalization result mismatch"

    if j.kind == "NEC":
        prem = line(j.premises[0])
        if not is_sentence(prem):
            return "necessitation applies to sentences only"
        code = CodeConst(encode(prem))
        if "NEC_PR" in theory.rules and phi == PrAtom(code, Rat(1)):
            usage["NEC_PR"] += 1
            return ""
        if "NEC_T" in theory.rules and phi == TrueAtom(code):
            usage["NEC_T"] += 1
            return ""
        if "NEC_BEW" in theory.rules and isinstance(phi, BewAtom) and phi.code == code:
            usage["NEC_BEW"] += 1
            return ""
        return "necessitation result mismatch"

    if j.kind == "DIAG":
        if "DIAG" not in theory.rules:
            return "DIAG is not a rule of this theory"
        fps = _fixed_points()
        if j.name not in fps:
            return f"unknown fixed point {j.name!r}"
        if phi == fps[j.name].biconditional:
            usage["DIAG"] += 1
            return ""
        return "not the recorded diagonal biconditional"

    if j.kind == "TAUT":
        if "TAUT" not in theory.rules:
            return "TAUT is not a rule of this theory"
        goal = phi
        if j.premises:
            goal = Implies(_conjoin([line(p) for p in j.premises]), phi)
        try:
            res = taut_check(goal)
        except AtomBudgetError as exc:
            return str(exc)
        if not res.tautology:
            return "not a propositional consequence of the cited lines"
        usage["TAUT"] += 1
        return ""

    if j.kind == "LRA":
        if "LRA" not in theory.rules:
            return "LRA is not a rule of this theory"
        goal = phi
        if j.premises:
            goal = Implies(_conjoin([line(p) for p in j.premises]), phi)
        try:
            res = lra_check(goal)
        except (NonlinearTermError, NotLinearFragmentError) as exc:
            return str(exc)
        if not res.valid:
            return "not valid in the linear-rational reading"
        usage["LRA"] += 1
        return ""

    if j.kind == "DEFN":
        if "DEFN" not in theory.rules:
            return "DEFN is not a rule of this theory"
        prem = _unfold_ratios(line(j.premises[0]))
        goal = Implies(prem, _unfold_ratios(phi))
        try:
            res = lra_check(goal)
        except (NonlinearTermError, NotLinearFragmentError) as exc:
            return str(exc)
        if not res.valid:
            return "ratio unfolding does not follow from the cited line"
        usage["DEFN"] += 1
        return ""

    return f"unknown justification {j.kind!r}"
