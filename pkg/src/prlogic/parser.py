"""Parser for the concrete formula/term grammar.

Connectives: ~  &  |  ->  <->   (tightest to loosest; -> and <-> associate
to the right).  Quantifiers: `forall x (...)`, `exists x (...)`, bounded
forms `forall x <= t (...)`.  Atoms: `t1 = t2`, `t1 <= t2`, `t1 < t2`
(sugar for ~(t2 <= t1)), `N(t)`, `Sent(t)`, `Pr(t1, t2)`, `T(t)`,
`Bew[TAG](t)`, `true`, `false`.

Terms: identifiers, integer literals, rational literals `p/q` (no spaces),
code constants `#n`, arithmetic + - * /, unary -, the syntax functions
(ssub, negdot, anddot, ordot, impldot, pr1dot, priter, numsub, disjupto),
quotation `q(<formula>)` and `qt(<term>)` which elaborate to the code
constant of the quoted expression.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import coding
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
    SYNTAX_FNS,
    Term,
    TrueAtom,
    Var,
    free_vars,
)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class UnboundVariableError(ParseError):
    pass


_KEYWORDS = {"forall", "exists", "N", "Sent", "Pr", "T", "Bew", "q", "qt", "true", "false"}
_RESERVED = _KEYWORDS | set(SYNTAX_FNS)

_SYMBOLS = ["<->", "->", "<=", "(", ")", ",", "=", "<", "~", "&", "|", "+", "-", "*", "/", "[", "]"]


@dataclass
class _Tok:
    kind: str  # 'ident' | 'int' | 'rat' | 'code' | symbol literal | 'eof'
    text: str
    pos: int


def _lex(src: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "#":
            j = i + 1
            while j < n and src[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("expected digits after '#'", i)
            toks.append(_Tok("code", src[i + 1 : j], i))
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            # contiguous p/q is a rational literal
            if j < n and src[j] == "/" and j + 1 < n and src[j + 1].isdigit():
                k = j + 1
                while k < n and src[k].isdigit():
                    k += 1
                toks.append(_Tok("rat", src[i:k], i))
                i = k
            else:
                toks.append(_Tok("int", src[i:j], i))
                i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] in "_'"):
                j += 1
            toks.append(_Tok("ident", src[i:j], i))
            i = j
            continue
        for sym in _SYMBOLS:
            if src.startswith(sym, i):
                toks.append(_Tok(sym, sym, i))
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(_Tok("eof", "", n))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _lex(src)
        self.i = 0

    # -- token helpers

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, kind: str) -> _Tok | None:
        if self.peek().kind == kind:
            return self.next()
        return None

    def expect(self, kind: str) -> _Tok:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {t.text or 'end of input'!r}", t.pos)
        return self.next()

    # -- formulas

    def formula(self) -> Formula:
        left = self.implies()
        if self.accept("<->"):
            return Iff(left, self.formula())
        return left

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.implies())
        return left

    def disjunction(self) -> Formula:
        out = self.conjunction()
        while self.accept("|"):
            out = Or(out, self.conjunction())
        return out

    def conjunction(self) -> Formula:
        out = self.unary()
        while self.accept("&"):
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        if self.accept("~"):
            return Not(self.unary())
        return self.atom()

    def _quantifier(self, tok: _Tok) -> Formula:
        var = self.expect("ident").text
        if var in _RESERVED:
            raise ParseError(f"{var!r} is reserved and cannot be a variable", tok.pos)
        bound: Term | None = None
        if self.accept("<="):
            bound = self.term()
        self.expect("(")
        body = self.formula()
        self.expect(")")
        if tok.text == "forall":
            return BForAll(var, bound, body) if bound is not None else ForAll(var, body)
        return BExists(var, bound, body) if bound is not None else Exists(var, body)

    def atom(self) -> Formula:
        t = self.peek()
        if t.kind == "ident" and t.text in ("forall", "exists"):
            self.next()
            return self._quantifier(t)
        if t.kind == "ident" and t.text == "true":
            self.next()
            return Eq(Rat(0), Rat(0))
        if t.kind == "ident" and t.text == "false":
            self.next()
            return Not(Eq(Rat(0), Rat(0)))
        if t.kind == "ident" and t.text in ("N", "Sent", "T"):
            self.next()
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return {"N": NatAtom, "Sent": SentAtom, "T": TrueAtom}[t.text](arg)
        if t.kind == "ident" and t.text == "Pr":
            self.next()
            self.expect("(")
            c = self.term()
            self.expect(",")
            v = self.term()
            self.expect(")")
            return PrAtom(c, v)
        if t.kind == "ident" and t.text == "Bew":
            self.next()
            self.expect("[")
            tag = self.expect("ident").text
            self.expect("]")
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return BewAtom(tag, arg)
        if t.kind == "(":
            # may open a parenthesized formula or a parenthesized term
            mark = self.i
            self.next()
            try:
                inner = self.formula()
                self.expect(")")
                return inner
            except ParseError:
                self.i = mark
                return self.comparison()
        return self.comparison()

    def comparison(self) -> Formula:
        left = self.term()
        t = self.next()
        if t.kind == "=":
            return Eq(left, self.term())
        if t.kind == "<=":
            return Leq(left, self.term())
        if t.kind == "<":
            right = self.term()
            return Not(Leq(right, left))
        raise ParseError(f"expected a comparison operator, found {t.text!r}", t.pos)

    # -- terms

    def term(self) -> Term:
        out = self.product()
        while True:
            if self.accept("+"):
                out = Arith("+", out, self.product())
            elif self.accept("-"):
                out = Arith("-", out, self.product())
            else:
                return out

    def product(self) -> Term:
        out = self.factor()
        while True:
            if self.accept("*"):
                out = Arith("*", out, self.factor())
            elif self.accept("/"):
                out = Arith("/", out, self.factor())
            else:
                return out

    def factor(self) -> Term:
        t = self.next()
        if t.kind == "-":
            inner = self.factor()
            if isinstance(inner, Rat):
                return Rat(-inner.num, inner.den)
            return Arith("-", Rat(0), inner)
        if t.kind == "int":
            return Rat(int(t.text))
        if t.kind == "rat":
            num, den = t.text.split("/")
            return Rat(int(num), int(den))
        if t.kind == "code":
            return CodeConst(int(t.text))
        if t.kind == "(":
            inner = self.term()
            self.expect(")")
            return inner
        if t.kind == "ident":
            if t.text == "q":
                self.expect("(")
                phi = self.formula()
                self.expect(")")
                return CodeConst(coding.encode(phi))
            if t.text == "qt":
                self.expect("(")
                inner = self.term()
                self.expect(")")
                return CodeConst(coding.encode(inner))
            if t.text in SYNTAX_FNS:
                self.expect("(")
                args = [self.term()]
                while self.accept(","):
                    args.append(self.term())
                self.expect(")")
                if len(args) != SYNTAX_FNS[t.text]:
                    raise ParseError(
                        f"{t.text} expects {SYNTAX_FNS[t.text]} arguments", t.pos
                    )
                return SynApp(t.text, tuple(args))
            if t.text in _RESERVED:
                raise ParseError(f"{t.text!r} cannot start a term", t.pos)
            return Var(t.text)
        raise ParseError(f"unexpected token {t.text or 'end of input'!r}", t.pos)


def parse_formula(text: str, require_sentence: bool = False) -> Formula:
    p = _Parser(text)
    phi = p.formula()
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.pos)
    if require_sentence:
        fv = free_vars(phi)
        if fv:
            raise UnboundVariableError(f"unbound variables {sorted(fv)}", 0)
    return phi


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.pos)
    return t
