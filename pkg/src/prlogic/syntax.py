"""Abstract syntax for the probability/truth languages.

Terms denote rationals; a distinguished subsort of naturals acts as codes
of expressions.  Formulas cover the ordered-field vocabulary, the natural
number predicate N, the sentence-hood predicate Sent, the two-place
probability predicate Pr, the truth predicate T, and provability
predicates Bew[TAG].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Rat(Term):
    """Rational constant, kept in lowest terms with positive denominator."""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den == 0:
            raise ValueError("zero denominator")
        f = Fraction(self.num, self.den)
        object.__setattr__(self, "num", f.numerator)
        object.__setattr__(self, "den", f.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)


@dataclass(frozen=True)
class CodeConst(Term):
    """Constant naming a natural number used as the code of an expression."""

    code: int

    def __post_init__(self):
        if self.code < 0:
            raise ValueError("codes are naturals")


ARITH_OPS = ("+", "-", "*", "/")


@dataclass(frozen=True)
class Arith(Term):
    op: str
    left: Term
    right: Term

    def __post_init__(self):
        if self.op not in ARITH_OPS:
            raise ValueError(f"unknown arithmetic op {self.op!r}")


# Syntax-function symbols: name -> arity.  These act on codes; `ssub` is the
# diagonal substitution function, the *dot functions mirror connectives on
# codes, pr1dot/priter build codes of iterated probability ascriptions,
# numsub substitutes numerals into a one-variable template (normalizing
# closed syntax subterms), disjupto builds codes of initial disjunctions of
# a template's instances.
SYNTAX_FNS = {
    "ssub": 1,
    "negdot": 1,
    "pr1dot": 1,
    "anddot": 2,
    "ordot": 2,
    "impldot": 2,
    "numsub": 2,
    "priter": 2,
    "disjupto": 2,
}


@dataclass(frozen=True)
class SynApp(Term):
    fn: str
    args: tuple[Term, ...]

    def __post_init__(self):
        if self.fn not in SYNTAX_FNS:
            raise ValueError(f"unknown syntax function {self.fn!r}")
        if len(self.args) != SYNTAX_FNS[self.fn]:
            raise ValueError(f"{self.fn} expects {SYNTAX_FNS[self.fn]} args")


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Leq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class NatAtom(Formula):
    arg: Term


@dataclass(frozen=True)
class SentAtom(Formula):
    """Sent(t): t codes a sentence of the ambient language."""

    arg: Term


@dataclass(frozen=True)
class PrAtom(Formula):
    code: Term
    value: Term


@dataclass(frozen=True)
class BewAtom(Formula):
    tag: str
    code: Term


@dataclass(frozen=True)
class TrueAtom(Formula):
    code: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ForAll(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class BForAll(Formula):
    var: str
    bound: Term
    body: Formula


@dataclass(frozen=True)
class BExists(Formula):
    var: str
    bound: Term
    body: Formula


Expr = Union[Term, Formula]

ZERO = Rat(0)
ONE = Rat(1)
# Canonical falsum: the refutable identity.
BOT = Not(Eq(ZERO, ZERO))
TOP = Eq(ZERO, ZERO)


def numeral(n: int) -> Rat:
    return Rat(n)


def rat_term(q) -> Rat:
    f = Fraction(q)
    return Rat(f.numerator, f.denominator)


# ---------------------------------------------------------------------------
# Variable bookkeeping


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Rat, CodeConst)):
        return set()
    if isinstance(t, Arith):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, SynApp):
        out: set[str] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    raise TypeError(t)


def free_vars(phi: Formula) -> set[str]:
    if isinstance(phi, (Eq, Leq)):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, (NatAtom, SentAtom)):
        return term_vars(phi.arg)
    if isinstance(phi, PrAtom):
        return term_vars(phi.code) | term_vars(phi.value)
    if isinstance(phi, (BewAtom, TrueAtom)):
        return term_vars(phi.code)
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or, Implies, Iff)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (ForAll, Exists)):
        return free_vars(phi.body) - {phi.var}
    if isinstance(phi, (BForAll, BExists)):
        return term_vars(phi.bound) | (free_vars(phi.body) - {phi.var})
    raise TypeError(phi)


def is_sentence(phi: Formula) -> bool:
    return not free_vars(phi)


def fresh_var(base: str, avoid: set[str]) -> str:
    if base not in avoid:
        return base
    i = 1
    while f"{base}_{i}" in avoid:
        i += 1
    return f"{base}_{i}"


# ---------------------------------------------------------------------------
# Substitution


def subst_in_term(t: Term, v: str, s: Term) -> Term:
    if isinstance(t, Var):
        return s if t.name == v else t
    if isinstance(t, (Rat, CodeConst)):
        return t
    if isinstance(t, Arith):
        return Arith(t.op, subst_in_term(t.left, v, s), subst_in_term(t.right, v, s))
    if isinstance(t, SynApp):
        return SynApp(t.fn, tuple(subst_in_term(a, v, s) for a in t.args))
    raise TypeError(t)


def substitute(phi: Formula, v: str, s: Term) -> Formula:
    """Capture-avoiding substitution of term s for free occurrences of v."""

    if isinstance(phi, Eq):
        return Eq(subst_in_term(phi.left, v, s), subst_in_term(phi.right, v, s))
    if isinstance(phi, Leq):
        return Leq(subst_in_term(phi.left, v, s), subst_in_term(phi.right, v, s))
    if isinstance(phi, NatAtom):
        return NatAtom(subst_in_term(phi.arg, v, s))
    if isinstance(phi, SentAtom):
        return SentAtom(subst_in_term(phi.arg, v, s))
    if isinstance(phi, PrAtom):
        return PrAtom(subst_in_term(phi.code, v, s), subst_in_term(phi.value, v, s))
    if isinstance(phi, BewAtom):
        return BewAtom(phi.tag, subst_in_term(phi.code, v, s))
    if isinstance(phi, TrueAtom):
        return TrueAtom(subst_in_term(phi.code, v, s))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, v, s))
    if isinstance(phi, And):
        return And(substitute(phi.left, v, s), substitute(phi.right, v, s))
    if isinstance(phi, Or):
        return Or(substitute(phi.left, v, s), substitute(phi.right, v, s))
    if isinstance(phi, Implies):
        return Implies(substitute(phi.left, v, s), substitute(phi.right, v, s))
    if isinstance(phi, Iff):
        return Iff(substitute(phi.left, v, s), substitute(phi.right, v, s))
    if isinstance(phi, (ForAll, Exists)):
        cls = type(phi)
        if phi.var == v:
            return phi
        if phi.var in term_vars(s) and v in free_vars(phi.body):
            w = fresh_var(phi.var, term_vars(s) | free_vars(phi.body) | {v})
            renamed = substitute(phi.body, phi.var, Var(w))
            return cls(w, substitute(renamed, v, s))
        return cls(phi.var, substitute(phi.body, v, s))
    if isinstance(phi, (BForAll, BExists)):
        cls = type(phi)
        bound = subst_in_term(phi.bound, v, s)
        if phi.var == v:
            return cls(phi.var, bound, phi.body)
        if phi.var in term_vars(s) and v in free_vars(phi.body):
            w = fresh_var(phi.var, term_vars(s) | free_vars(phi.body) | {v})
            renamed = substitute(phi.body, phi.var, Var(w))
            return cls(w, bound, substitute(renamed, v, s))
        return cls(phi.var, bound, substitute(phi.body, v, s))
    raise TypeError(phi)


# ---------------------------------------------------------------------------
# Printing (matches the concrete grammar in parser.py)

_ARITH_LEVEL = {"+": 1, "-": 1, "*": 2, "/": 2}


def term_str(t: Term, level: int = 0) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Rat):
        if t.num < 0:
            s = f"-{-t.num}" if t.den == 1 else f"-{-t.num}/{t.den}"
            return s if level == 0 else f"({s})"
        return str(t.num) if t.den == 1 else f"{t.num}/{t.den}"
    if isinstance(t, CodeConst):
        return f"#{t.code}"
    if isinstance(t, Arith):
        lv = _ARITH_LEVEL[t.op]
        left = term_str(t.left, lv - 1)
        right = term_str(t.right, lv)  # left-assoc: right child needs higher level
        s = f"{left} {t.op} {right}"
        return s if level < lv else f"({s})"
    if isinstance(t, SynApp):
        return f"{t.fn}({', '.join(term_str(a) for a in t.args)})"
    raise TypeError(t)


_CONN_LEVEL = {"<->": 1, "->": 2, "|": 3, "&": 4}


def formula_str(phi: Formula, level: int = 0) -> str:
    def wrap(s: str, lv: int) -> str:
        return s if level < lv else f"({s})"

    if isinstance(phi, Eq):
        return wrap(f"{term_str(phi.left)} = {term_str(phi.right)}", 5)
    if isinstance(phi, Leq):
        return wrap(f"{term_str(phi.left)} <= {term_str(phi.right)}", 5)
    if isinstance(phi, NatAtom):
        return f"N({term_str(phi.arg)})"
    if isinstance(phi, SentAtom):
        return f"Sent({term_str(phi.arg)})"
    if isinstance(phi, PrAtom):
        return f"Pr({term_str(phi.code)}, {term_str(phi.value)})"
    if isinstance(phi, BewAtom):
        return f"Bew[{phi.tag}]({term_str(phi.code)})"
    if isinstance(phi, TrueAtom):
        return f"T({term_str(phi.code)})"
    if isinstance(phi, Not):
        return f"~{formula_str(phi.body, 4)}"
    if isinstance(phi, And):
        # left-associative: a nested right conjunct needs parentheses
        return wrap(f"{formula_str(phi.left, 3)} & {formula_str(phi.right, 4)}", 4)
    if isinstance(phi, Or):
        return wrap(f"{formula_str(phi.left, 2)} | {formula_str(phi.right, 3)}", 3)
    if isinstance(phi, Implies):
        # right-associative
        return wrap(f"{formula_str(phi.left, 2)} -> {formula_str(phi.right, 1)}", 2)
    if isinstance(phi, Iff):
        return wrap(f"{formula_str(phi.left, 1)} <-> {formula_str(phi.right, 0)}", 1)
    if isinstance(phi, ForAll):
        return f"forall {phi.var} ({formula_str(phi.body)})"
    if isinstance(phi, Exists):
        return f"exists {phi.var} ({formula_str(phi.body)})"
    if isinstance(phi, BForAll):
        return f"forall {phi.var} <= {term_str(phi.bound)} ({formula_str(phi.body)})"
    if isinstance(phi, BExists):
        return f"exists {phi.var} <= {term_str(phi.bound)} ({formula_str(phi.body)})"
    raise TypeError(phi)


# Convenience constructors used throughout scripts and tests.


def lt(a: Term, b: Term) -> Formula:
    """Strict order as derived notation: a < b  :=  ~(b <= a)."""

    return Not(Leq(b, a))


def conj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def impl(*parts: Formula) -> Formula:
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Implies(p, out)
    return out


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    if isinstance(phi, Not):
        yield from subformulas(phi.body)
    elif isinstance(phi, (And, Or, Implies, Iff)):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)
    elif isinstance(phi, (ForAll, Exists, BForAll, BExists)):
        yield from subformulas(phi.body)
