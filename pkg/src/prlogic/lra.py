"""Exact validity checking for linear rational (in)equality steps.

Probability ascriptions are read functionally: Pr(c, t) contributes the
constraint  v_c = t  with an opaque variable v_c per syntactically
distinct code term c.  Non-arithmetic atoms (N, Sent, T, Bew) are opaque
booleans.  Validity is decided by refuting the negation branch-wise with
Fourier-Motzkin elimination over exact rationals.

Products of two non-constant terms are rejected (nonlinear); division by
a non-constant term is abstracted as an opaque quantity, which is sound
for validity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

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
    term_str,
    formula_str,
)

_OPAQUE_ATOMS = (NatAtom, SentAtom, TrueAtom, BewAtom, ForAll, Exists, BForAll, BExists)


class NonlinearTermError(ValueError):
    pass


class NotLinearFragmentError(ValueError):
    pass


# Linear form: mapping var-key -> coefficient, plus constant.
Linear = tuple[dict[str, Fraction], Fraction]


def _lin_add(a: Linear, b: Linear, sign: int = 1) -> Linear:
    coeffs = dict(a[0])
    for k, v in b[0].items():
        coeffs[k] = coeffs.get(k, Fraction(0)) + sign * v
        if coeffs[k] == 0:
            del coeffs[k]
    return coeffs, a[1] + sign * b[1]


def _lin_scale(a: Linear, c: Fraction) -> Linear:
    if c == 0:
        return {}, Fraction(0)
    return {k: v * c for k, v in a[0].items()}, a[1] * c


def _linearize(t: Term) -> Linear:
    if isinstance(t, Var):
        return {f"v:{t.name}": Fraction(1)}, Fraction(0)
    if isinstance(t, Rat):
        return {}, t.value
    if isinstance(t, CodeConst):
        return {}, Fraction(t.code)
    if isinstance(t, SynApp):
        return {f"t:{term_str(t)}": Fraction(1)}, Fraction(0)
    if isinstance(t, Arith):
        if t.op in ("+", "-"):
            return _lin_add(_linearize(t.left), _linearize(t.right), 1 if t.op == "+" else -1)
        left = _linearize(t.left)
        right = _linearize(t.right)
        if t.op == "*":
            if not left[0]:
                return _lin_scale(right, left[1])
            if not right[0]:
                return _lin_scale(left, right[1])
            raise NonlinearTermError(f"product of non-constant terms: {term_str(t)}")
        # division
        if not right[0]:
            if right[1] == 0:
                raise NonlinearTermError(f"division by zero constant: {term_str(t)}")
            return _lin_scale(left, 1 / right[1])
        # non-constant divisor: opaque quantity
        return {f"t:{term_str(t)}": Fraction(1)}, Fraction(0)
    raise TypeError(t)


# Constraint: coeffs . x + const  >= 0   (strict -> > 0)
@dataclass
class _Constraint:
    coeffs: dict[str, Fraction]
    const: Fraction
    strict: bool


def _diff(a: Term, b: Term) -> Linear:
    return _lin_add(_linearize(a), _linearize(b), -1)


@dataclass(frozen=True)
class LraResult:
    valid: bool
    eliminated: tuple[str, ...] = ()
    reason: str = ""


def _branches(phi: Formula, positive: bool) -> list[list[tuple[Formula, bool]]]:
    """DNF branches of phi (or of ~phi when positive is False) as literals."""

    if isinstance(phi, Not):
        return _branches(phi.body, not positive)
    if isinstance(phi, And) if positive else isinstance(phi, Or):
        left = _branches(phi.left, positive)
        right = _branches(phi.right, positive)
        return [l + r for l in left for r in right]
    if isinstance(phi, Or) if positive else isinstance(phi, And):
        return _branches(phi.left, positive) + _branches(phi.right, positive)
    if isinstance(phi, Implies):
        if positive:
            return _branches(phi.left, False) + _branches(phi.right, True)
        return [l + r for l in _branches(phi.left, True) for r in _branches(phi.right, False)]
    if isinstance(phi, Iff):
        a, b = phi.left, phi.right
        if positive:
            pos = [l + r for l in _branches(a, True) for r in _branches(b, True)]
            neg = [l + r for l in _branches(a, False) for r in _branches(b, False)]
            return pos + neg
        x = [l + r for l in _branches(a, True) for r in _branches(b, False)]
        y = [l + r for l in _branches(a, False) for r in _branches(b, True)]
        return x + y
    return [[(phi, positive)]]


def _fourier_motzkin(cons: list[_Constraint]) -> tuple[bool, list[str]]:
    """Whether the constraint set is satisfiable over the rationals."""

    eliminated: list[str] = []
    while True:
        vars_left = sorted({v for c in cons for v in c.coeffs})
        if not vars_left:
            break
        v = vars_left[0]
        eliminated.append(v)
        lower, upper, rest = [], [], []
        for c in cons:
            a = c.coeffs.get(v, Fraction(0))
            if a > 0:
                lower.append(c)
            elif a < 0:
                upper.append(c)
            else:
                rest.append(c)
        new = rest
        for lo in lower:
            for hi in upper:
                a, b = lo.coeffs[v], -hi.coeffs[v]
                # b*lo + a*hi eliminates v
                coeffs: dict[str, Fraction] = {}
                for k, val in lo.coeffs.items():
                    coeffs[k] = coeffs.get(k, Fraction(0)) + b * val
                for k, val in hi.coeffs.items():
                    coeffs[k] = coeffs.get(k, Fraction(0)) + a * val
                coeffs = {k: val for k, val in coeffs.items() if val != 0}
                new.append(
                    _Constraint(coeffs, b * lo.const + a * hi.const, lo.strict or hi.strict)
                )
        cons = new
    for c in cons:
        if c.strict:
            if not c.const > 0:
                return False, eliminated
        elif not c.const >= 0:
            return False, eliminated
    return True, eliminated


def _branch_satisfiable(literals: list[tuple[Formula, bool]]) -> tuple[bool, list[str]]:
    cons: list[_Constraint] = []
    bools: dict[Formula, bool] = {}
    split_queue: list[Linear] = []
    for atom, pos in literals:
        if isinstance(atom, Leq):
            d = _diff(atom.right, atom.left)  # right - left >= 0
            if pos:
                cons.append(_Constraint(dict(d[0]), d[1], strict=False))
            else:
                neg = _lin_scale(d, Fraction(-1))  # left - right > 0
                cons.append(_Constraint(dict(neg[0]), neg[1], strict=True))
        elif isinstance(atom, Eq):
            d = _diff(atom.left, atom.right)
            if pos:
                cons.append(_Constraint(dict(d[0]), d[1], strict=False))
                neg = _lin_scale(d, Fraction(-1))
                cons.append(_Constraint(dict(neg[0]), neg[1], strict=False))
            else:
                split_queue.append(d)
        elif isinstance(atom, PrAtom):
            prvar = f"p:{term_str(atom.code)}"
            d = _lin_add(({prvar: Fraction(1)}, Fraction(0)), _linearize(atom.value), -1)
            if pos:
                cons.append(_Constraint(dict(d[0]), d[1], strict=False))
                neg = _lin_scale(d, Fraction(-1))
                cons.append(_Constraint(dict(neg[0]), neg[1], strict=False))
            else:
                split_queue.append(d)
        elif isinstance(atom, _OPAQUE_ATOMS):
            # quantified subformulas and non-arithmetic atoms are opaque
            if atom in bools and bools[atom] != pos:
                return False, []
            bools[atom] = pos
        else:
            raise NotLinearFragmentError(
                f"atom outside the linear fragment: {formula_str(atom)}"
            )

    def solve(pending: list[Linear], acc: list[_Constraint]) -> tuple[bool, list[str]]:
        if not pending:
            return _fourier_motzkin(acc)
        d, rest = pending[0], pending[1:]
        # d != 0 splits into d > 0 or d < 0
        pos_branch = acc + [_Constraint(dict(d[0]), d[1], strict=True)]
        ok, elim = solve(rest, pos_branch)
        if ok:
            return ok, elim
        neg = _lin_scale(d, Fraction(-1))
        neg_branch = acc + [_Constraint(dict(neg[0]), neg[1], strict=True)]
        return solve(rest, neg_branch)

    return solve(split_queue, cons)


def lra_check(phi: Formula) -> LraResult:
    """Decide whether phi is valid in the opaque-variable linear reading."""

    eliminated: list[str] = []
    for branch in _branches(phi, positive=False):
        sat, elim = _branch_satisfiable(branch)
        eliminated.extend(e for e in elim if e not in eliminated)
        if sat:
            return LraResult(False, tuple(eliminated), "negation satisfiable")
    return LraResult(True, tuple(eliminated))
