"""Numbering of expressions and the evaluation of code-manipulating terms.

Every term and formula receives a unique positive integer code.  The scheme
writes each node as a self-delimiting bit string (tag, then payloads;
embedded naturals in Elias-delta form) and reads the whole string, behind a
sentinel bit, as an integer.  Embedding a code inside a larger expression
therefore costs only logarithmic overhead, which keeps iterated
code-of-code constructions (pr1dot/priter towers) small.

0 is reserved as a non-code.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .syntax import (
    And,
    Arith,
    ARITH_OPS,
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
    numeral,
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
    substitute,
    subst_in_term,
    term_vars,
)

Expr = Union[Term, Formula]


class NotACodeError(ValueError):
    """The given number is not the code of a well-formed expression."""


class TermEvalError(ValueError):
    pass


class OpenTermError(TermEvalError):
    pass


class DivisionByZeroError(TermEvalError):
    pass


class WrongFreeVarsError(ValueError):
    """A template code does not have exactly one free variable."""


# ---------------------------------------------------------------------------
# Bit-level primitives

_ALPHA = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_'"
_CHAR_INDEX = {ch: i + 1 for i, ch in enumerate(_ALPHA)}
_BASE = len(_ALPHA)


def _name_to_nat(name: str) -> int:
    if not name:
        raise ValueError("empty name")
    n = 0
    for ch in name:
        if ch not in _CHAR_INDEX:
            raise ValueError(f"character {ch!r} not in the identifier alphabet")
        n = n * _BASE + (_CHAR_INDEX[ch] - 1)
    # prefix with length marker via bijective trick: pair (len, digits)
    return n * 64 + len(name) if len(name) < 64 else _long_name(name)


def _long_name(name: str) -> int:
    raise ValueError("identifier longer than 63 characters")


def _nat_to_name(n: int) -> str:
    length = n % 64
    if length == 0:
        raise NotACodeError("bad identifier payload")
    digits = n // 64
    chars = []
    for _ in range(length):
        chars.append(_ALPHA[digits % _BASE])
        digits //= _BASE
    if digits:
        raise NotACodeError("bad identifier payload")
    return "".join(reversed(chars))


def _zigzag(n: int) -> int:
    return 2 * n if n >= 0 else -2 * n - 1


def _unzigzag(n: int) -> int:
    return n // 2 if n % 2 == 0 else -(n + 1) // 2


def _delta_bits(n: int) -> str:
    """Elias-delta code of a natural, self-delimiting."""

    if n < 0:
        raise ValueError("negative")
    m = n + 1
    body = bin(m)[2:]
    k = len(body)  # >= 1
    kl = bin(k)[2:]
    return "0" * (len(kl) - 1) + kl + body[1:]


class _Reader:
    __slots__ = ("bits", "pos")

    def __init__(self, bits: str):
        self.bits = bits
        self.pos = 0

    def take(self, n: int) -> str:
        if self.pos + n > len(self.bits):
            raise NotACodeError("truncated code")
        out = self.bits[self.pos : self.pos + n]
        self.pos += n
        return out

    def read_delta(self) -> int:
        bits = self.bits
        i = self.pos
        zeros = 0
        while i < len(bits) and bits[i] == "0":
            zeros += 1
            i += 1
        if i >= len(bits):
            raise NotACodeError("truncated code")
        self.pos = i
        kl = self.take(zeros + 1)
        k = int(kl, 2)
        if k < 1:
            raise NotACodeError("bad length field")
        body = "1" + self.take(k - 1)
        return int(body, 2) - 1

    def done(self) -> bool:
        return self.pos == len(self.bits)


# ---------------------------------------------------------------------------
# Node tags

_T_VAR = 0
_T_RAT = 1
_T_CODECONST = 2
_T_ARITH = 3
_T_SYNAPP = 4
_F_EQ = 5
_F_LEQ = 6
_F_NAT = 7
_F_SENT = 8
_F_PR = 9
_F_BEW = 10
_F_TRUE = 11
_F_NOT = 12
_F_AND = 13
_F_OR = 14
_F_IMPLIES = 15
_F_IFF = 16
_F_FORALL = 17
_F_EXISTS = 18
_F_BFORALL = 19
_F_BEXISTS = 20

_SYNTAX_FN_LIST = sorted(SYNTAX_FNS)
_SYNTAX_FN_INDEX = {fn: i for i, fn in enumerate(_SYNTAX_FN_LIST)}

_BIN_TAGS = {And: _F_AND, Or: _F_OR, Implies: _F_IMPLIES, Iff: _F_IFF}
_BIN_CLASSES = {v: k for k, v in _BIN_TAGS.items()}


def _emit(e: Expr, out: list[str]) -> None:
    if isinstance(e, Var):
        out.append(_delta_bits(_T_VAR))
        out.append(_delta_bits(_name_to_nat(e.name)))
    elif isinstance(e, Rat):
        out.append(_delta_bits(_T_RAT))
        out.append(_delta_bits(_zigzag(e.num)))
        out.append(_delta_bits(e.den))
    elif isinstance(e, CodeConst):
        out.append(_delta_bits(_T_CODECONST))
        out.append(_delta_bits(e.code))
    elif isinstance(e, Arith):
        out.append(_delta_bits(_T_ARITH))
        out.append(_delta_bits(ARITH_OPS.index(e.op)))
        _emit(e.left, out)
        _emit(e.right, out)
    elif isinstance(e, SynApp):
        out.append(_delta_bits(_T_SYNAPP))
        out.append(_delta_bits(_SYNTAX_FN_INDEX[e.fn]))
        for a in e.args:
            _emit(a, out)
    elif isinstance(e, Eq):
        out.append(_delta_bits(_F_EQ))
        _emit(e.left, out)
        _emit(e.right, out)
    elif isinstance(e, Leq):
        out.append(_delta_bits(_F_LEQ))
        _emit(e.left, out)
        _emit(e.right, out)
    elif isinstance(e, NatAtom):
        out.append(_delta_bits(_F_NAT))
        _emit(e.arg, out)
    elif isinstance(e, SentAtom):
        out.append(_delta_bits(_F_SENT))
        _emit(e.arg, out)
    elif isinstance(e, PrAtom):
        out.append(_delta_bits(_F_PR))
        _emit(e.code, out)
        _emit(e.value, out)
    elif isinstance(e, BewAtom):
        out.append(_delta_bits(_F_BEW))
        out.append(_delta_bits(_name_to_nat(e.tag)))
        _emit(e.code, out)
    elif isinstance(e, TrueAtom):
        out.append(_delta_bits(_F_TRUE))
        _emit(e.code, out)
    elif isinstance(e, Not):
        out.append(_delta_bits(_F_NOT))
        _emit(e.body, out)
    elif isinstance(e, (And, Or, Implies, Iff)):
        out.append(_delta_bits(_BIN_TAGS[type(e)]))
        _emit(e.left, out)
        _emit(e.right, out)
    elif isinstance(e, ForAll):
        out.append(_delta_bits(_F_FORALL))
        out.append(_delta_bits(_name_to_nat(e.var)))
        _emit(e.body, out)
    elif isinstance(e, Exists):
        out.append(_delta_bits(_F_EXISTS))
        out.append(_delta_bits(_name_to_nat(e.var)))
        _emit(e.body, out)
    elif isinstance(e, BForAll):
        out.append(_delta_bits(_F_BFORALL))
        out.append(_delta_bits(_name_to_nat(e.var)))
        _emit(e.bound, out)
        _emit(e.body, out)
    elif isinstance(e, BExists):
        out.append(_delta_bits(_F_BEXISTS))
        out.append(_delta_bits(_name_to_nat(e.var)))
        _emit(e.bound, out)
        _emit(e.body, out)
    else:
        raise TypeError(e)


def _read(r: _Reader) -> Expr:
    tag = r.read_delta()
    if tag == _T_VAR:
        return Var(_nat_to_name(r.read_delta()))
    if tag == _T_RAT:
        num = _unzigzag(r.read_delta())
        den = r.read_delta()
        if den < 1:
            raise NotACodeError("bad denominator")
        f = Fraction(num, den)
        if f.numerator != num or f.denominator != den:
            raise NotACodeError("rational not in lowest terms")
        return Rat(num, den)
    if tag == _T_CODECONST:
        return CodeConst(r.read_delta())
    if tag == _T_ARITH:
        op = r.read_delta()
        if op >= len(ARITH_OPS):
            raise NotACodeError("bad arithmetic op")
        left, right = _read(r), _read(r)
        if not isinstance(left, Term) or not isinstance(right, Term):
            raise NotACodeError("arithmetic over non-terms")
        return Arith(ARITH_OPS[op], left, right)
    if tag == _T_SYNAPP:
        idx = r.read_delta()
        if idx >= len(_SYNTAX_FN_LIST):
            raise NotACodeError("bad syntax function")
        fn = _SYNTAX_FN_LIST[idx]
        args = []
        for _ in range(SYNTAX_FNS[fn]):
            a = _read(r)
            if not isinstance(a, Term):
                raise NotACodeError("syntax function over non-term")
            args.append(a)
        return SynApp(fn, tuple(args))
    if tag in (_F_EQ, _F_LEQ, _F_PR):
        left, right = _read(r), _read(r)
        if not isinstance(left, Term) or not isinstance(right, Term):
            raise NotACodeError("atom over non-terms")
        return {_F_EQ: Eq, _F_LEQ: Leq, _F_PR: PrAtom}[tag](left, right)
    if tag in (_F_NAT, _F_SENT, _F_TRUE):
        a = _read(r)
        if not isinstance(a, Term):
            raise NotACodeError("atom over non-term")
        return {_F_NAT: NatAtom, _F_SENT: SentAtom, _F_TRUE: TrueAtom}[tag](a)
    if tag == _F_BEW:
        name = _nat_to_name(r.read_delta())
        a = _read(r)
        if not isinstance(a, Term):
            raise NotACodeError("atom over non-term")
        return BewAtom(name, a)
    if tag == _F_NOT:
        b = _read(r)
        if not isinstance(b, Formula):
            raise NotACodeError("connective over non-formula")
        return Not(b)
    if tag in _BIN_CLASSES:
        left, right = _read(r), _read(r)
        if not isinstance(left, Formula) or not isinstance(right, Formula):
            raise NotACodeError("connective over non-formulas")
        return _BIN_CLASSES[tag](left, right)
    if tag in (_F_FORALL, _F_EXISTS):
        var = _nat_to_name(r.read_delta())
        b = _read(r)
        if not isinstance(b, Formula):
            raise NotACodeError("quantifier over non-formula")
        return (ForAll if tag == _F_FORALL else Exists)(var, b)
    if tag in (_F_BFORALL, _F_BEXISTS):
        var = _nat_to_name(r.read_delta())
        bound = _read(r)
        b = _read(r)
        if not isinstance(bound, Term) or not isinstance(b, Formula):
            raise NotACodeError("bad bounded quantifier")
        return (BForAll if tag == _F_BFORALL else BExists)(var, bound, b)
    raise NotACodeError(f"unknown tag {tag}")


def encode(e: Expr) -> int:
    """Injective code of a term or formula; always >= 1."""

    chunks: list[str] = []
    _emit(e, chunks)
    return int("1" + "".join(chunks), 2)


def decode(c: int) -> Expr:
    """Inverse of encode on its image; NotACodeError elsewhere."""

    if c < 1:
        raise NotACodeError(f"{c} is not a code")
    bits = bin(c)[3:]  # strip '0b' and the sentinel bit
    r = _Reader(bits)
    try:
        e = _read(r)
    except NotACodeError:
        raise
    except ValueError as exc:
        raise NotACodeError(str(exc)) from exc
    if not r.done():
        raise NotACodeError("trailing bits")
    return e


def decode_formula(c: int) -> Formula:
    e = decode(c)
    if not isinstance(e, Formula):
        raise NotACodeError(f"{c} codes a term, not a formula")
    return e


def is_formula_code(c: int) -> bool:
    try:
        decode_formula(c)
        return True
    except NotACodeError:
        return False


# ---------------------------------------------------------------------------
# Structural operations on codes

_CODE_OPS = {"neg": 1, "disj": 2, "conj": 2, "impl": 2}
_CODE_OP_TAG = {"neg": _F_NOT, "disj": _F_OR, "conj": _F_AND, "impl": _F_IMPLIES}


def _payload_bits(c: int) -> str:
    return bin(c)[3:]


def code_op(op: str, c1: int, c2: int | None = None) -> int:
    """Connective on codes: code_op('neg', encode(p)) == encode(~p), etc.

    Computed by direct bit surgery on the codes; arguments are checked to
    be formula codes.
    """

    if op not in _CODE_OPS:
        raise ValueError(f"unknown code operation {op!r}")
    arity = _CODE_OPS[op]
    if arity == 2 and c2 is None:
        raise ValueError(f"{op} needs two codes")
    decode_formula(c1)
    parts = ["1", _delta_bits(_CODE_OP_TAG[op]), _payload_bits(c1)]
    if arity == 2:
        assert c2 is not None
        decode_formula(c2)
        parts.append(_payload_bits(c2))
    return int("".join(parts), 2)


def pr1dot_value(c: int) -> int:
    """Code of the sentence Pr(#c, 1)."""

    if c < 0:
        raise NotACodeError("codes are naturals")
    return encode(PrAtom(CodeConst(c), Rat(1)))


def priter_value(c: int, n: int) -> int:
    """n-fold pr1dot applied to c (n = 0 gives c back)."""

    if n < 0:
        raise TermEvalError("negative iteration count")
    for _ in range(n):
        c = pr1dot_value(c)
    return c


def _single_free_var(phi: Formula) -> str:
    fv = free_vars(phi)
    if len(fv) != 1:
        raise WrongFreeVarsError(
            f"template must have exactly one free variable, found {sorted(fv)}"
        )
    return next(iter(fv))


def self_sub_value(c: int) -> int:
    """encode(p[v := #c]) for the formula p coded by c with sole free var v."""

    phi = decode_formula(c)
    v = _single_free_var(phi)
    return encode(substitute(phi, v, CodeConst(c)))


def normalize_closed_syntax(e: Expr) -> Expr:
    """Replace closed syntax-function subterms by their code constants."""

    def norm_term(t: Term) -> Term:
        if isinstance(t, SynApp):
            if not term_vars(t):
                return CodeConst(int(eval_term(t)))
            return SynApp(t.fn, tuple(norm_term(a) for a in t.args))
        if isinstance(t, Arith):
            return Arith(t.op, norm_term(t.left), norm_term(t.right))
        return t

    def norm(phi: Formula) -> Formula:
        if isinstance(phi, Eq):
            return Eq(norm_term(phi.left), norm_term(phi.right))
        if isinstance(phi, Leq):
            return Leq(norm_term(phi.left), norm_term(phi.right))
        if isinstance(phi, NatAtom):
            return NatAtom(norm_term(phi.arg))
        if isinstance(phi, SentAtom):
            return SentAtom(norm_term(phi.arg))
        if isinstance(phi, PrAtom):
            return PrAtom(norm_term(phi.code), norm_term(phi.value))
        if isinstance(phi, BewAtom):
            return BewAtom(phi.tag, norm_term(phi.code))
        if isinstance(phi, TrueAtom):
            return TrueAtom(norm_term(phi.code))
        if isinstance(phi, Not):
            return Not(norm(phi.body))
        if isinstance(phi, (And, Or, Implies, Iff)):
            return type(phi)(norm(phi.left), norm(phi.right))
        if isinstance(phi, (ForAll, Exists)):
            return type(phi)(phi.var, norm(phi.body))
        if isinstance(phi, (BForAll, BExists)):
            return type(phi)(phi.var, norm_term(phi.bound), norm(phi.body))
        raise TypeError(phi)

    if isinstance(e, Term):
        return norm_term(e)
    return norm(e)


def num_sub_value(c: int, n: int) -> int:
    """Code of the n-th numeral instance of the one-variable template c.

    Closed syntax-function subterms created by the substitution are
    normalized to code constants, so instance codes match the codes built
    by the structural operations above.
    """

    if n < 0:
        raise TermEvalError("negative instance index")
    phi = decode_formula(c)
    v = _single_free_var(phi)
    inst = substitute(phi, v, numeral(n))
    return encode(normalize_closed_syntax(inst))


def disj_upto_value(c: int, n: int) -> int:
    """Code of instance(0) | ... | instance(n) of template c, left-nested."""

    out = num_sub_value(c, 0)
    for k in range(1, n + 1):
        out = code_op("disj", out, num_sub_value(c, k))
    return out


# ---------------------------------------------------------------------------
# Term evaluation

_SYNTAX_SEMANTICS = {
    "ssub": self_sub_value,
    "negdot": lambda c: code_op("neg", c),
    "pr1dot": pr1dot_value,
    "anddot": lambda a, b: code_op("conj", a, b),
    "ordot": lambda a, b: code_op("disj", a, b),
    "impldot": lambda a, b: code_op("impl", a, b),
    "numsub": num_sub_value,
    "priter": priter_value,
    "disjupto": disj_upto_value,
}


def eval_term(t: Term) -> Fraction:
    """Exact value of a variable-free term."""

    if isinstance(t, Var):
        raise OpenTermError(f"open term: variable {t.name}")
    if isinstance(t, Rat):
        return t.value
    if isinstance(t, CodeConst):
        return Fraction(t.code)
    if isinstance(t, Arith):
        a, b = eval_term(t.left), eval_term(t.right)
        if t.op == "+":
            return a + b
        if t.op == "-":
            return a - b
        if t.op == "*":
            return a * b
        if b == 0:
            raise DivisionByZeroError(f"division by zero in {t}")
        return a / b
    if isinstance(t, SynApp):
        vals = []
        for a in t.args:
            v = eval_term(a)
            if v.denominator != 1 or v < 0:
                raise TermEvalError(
                    f"syntax function {t.fn} applied to non-natural {v}"
                )
            vals.append(int(v))
        return Fraction(_SYNTAX_SEMANTICS[t.fn](*vals))
    raise TypeError(t)
