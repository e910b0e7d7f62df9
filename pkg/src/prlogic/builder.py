"""Toolkit for constructing Hilbert-style proof scripts programmatically.

The builder tracks a stack of hypotheses; lines derived under hypotheses
are emitted as implications from the conjunction of the active hypotheses
(propositional or linear steps cite their premise lines, and the checker
re-verifies the implication).  Axiom, necessitation, generalization, and
diagonal steps always emit unconditional theorem lines.

A handful of derived moves encapsulate recurring patterns: existential
elimination, case analysis, and the transfer of probability bounds along
provable implications.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coding import encode
from .proofs import Justification, Proof, Step
from .syntax import (
    And,
    Arith,
    BOT,
    CodeConst,
    Eq,
    Exists,
    ForAll,
    Formula,
    Iff,
    Implies,
    Leq,
    Not,
    Or,
    PrAtom,
    Rat,
    SentAtom,
    SynApp,
    Term,
    Var,
    conj,
    free_vars,
    term_vars,
)


def negdot(t: Term) -> Term:
    return SynApp("negdot", (t,))


def ordot(a: Term, b: Term) -> Term:
    return SynApp("ordot", (a, b))


def anddot(a: Term, b: Term) -> Term:
    return SynApp("anddot", (a, b))


def pr1dot(t: Term) -> Term:
    return SynApp("pr1dot", (t,))


def priter(t: Term, n: Term) -> Term:
    return SynApp("priter", (t, n))


def numsub(t: Term, n: Term) -> Term:
    return SynApp("numsub", (t, n))


def disjupto(t: Term, n: Term) -> Term:
    return SynApp("disjupto", (t, n))


def code_of(phi: Formula) -> CodeConst:
    return CodeConst(encode(phi))


class ScriptBuilder:
    def __init__(self, prefix: str = "s"):
        self.steps: list[Step] = []
        self.prefix = prefix
        self.ctx: list[Formula] = []

    # -- core emission

    def _emit(self, formula: Formula, just: Justification) -> int:
        label = f"{self.prefix}{len(self.steps) + 1}"
        self.steps.append(Step(label, formula, just))
        return len(self.steps) - 1

    def formula(self, i: int) -> Formula:
        return self.steps[i].formula

    def proof(self) -> Proof:
        return Proof(tuple(self.steps))

    def _wrap(self, phi: Formula) -> Formula:
        if not self.ctx:
            return phi
        return Implies(conj(*self.ctx), phi)

    # -- primitive steps (always unconditional)

    def ax(self, schema: str, formula: Formula, **hints: Term) -> int:
        return self._emit(
            formula, Justification("AX", schema=schema, hints=tuple(hints.items()))
        )

    def diag(self, name: str, formula: Formula) -> int:
        return self._emit(formula, Justification("DIAG", name=name))

    def nec(self, i: int, atom=PrAtom) -> int:
        phi = self.formula(i)
        assert not free_vars(phi), "necessitation needs a sentence"
        code = CodeConst(encode(phi))
        out = atom(code, Rat(1)) if atom is PrAtom else atom(code)
        return self._emit(out, Justification("NEC", premises=(i,)))

    def gen(self, i: int, var: str) -> int:
        return self._emit(
            ForAll(var, self.formula(i)), Justification("GEN", premises=(i,), var=var)
        )

    def mp(self, imp: int, ante: int) -> int:
        f = self.formula(imp)
        assert isinstance(f, Implies) and f.left == self.formula(ante)
        return self._emit(f.right, Justification("MP", premises=(imp, ante)))

    # -- context-aware derivations

    def have(self, phi: Formula, kind: str, *premises: int) -> int:
        """Derive phi under the active hypotheses by TAUT or LRA."""

        assert kind in ("TAUT", "LRA")
        return self._emit(self._wrap(phi), Justification(kind, premises=tuple(premises)))

    def taut(self, phi: Formula, *premises: int) -> int:
        return self.have(phi, "TAUT", *premises)

    def lra(self, phi: Formula, *premises: int) -> int:
        return self.have(phi, "LRA", *premises)

    def defn(self, phi: Formula, premise: int) -> int:
        return self._emit(self._wrap(phi), Justification("DEFN", premises=(premise,)))

    # -- hypothesis management

    def push(self, hyp: Formula) -> None:
        self.ctx.append(hyp)

    def pop(self) -> Formula:
        return self.ctx.pop()

    def fresh(self, base: str) -> str:
        used = set()
        for h in self.ctx:
            used |= free_vars(h)
        for s in self.steps:
            used |= free_vars(s.formula)
        if base not in used:
            return base
        i = 1
        while f"{base}{i}" in used:
            i += 1
        return f"{base}{i}"

    # -- existential elimination
    #
    # Given ex_line: ctx -> exists v1 ... exists vk (matrix), and a line
    # derived under ctx + [matrix] concluding ctx&matrix -> goal, discharge
    # the existentials.  The variables must be fresh for ctx and goal.

    def exists_elim(self, ex_line: int, ex_vars: list[str], matrix: Formula,
                    inner_goal_line: int, goal: Formula) -> int:
        wrapped_goal = self._wrap(goal)  # ctx -> goal
        # reshape the inner line to: matrix -> (ctx -> goal)
        cond = self._emit(
            Implies(matrix, wrapped_goal),
            Justification("TAUT", premises=(inner_goal_line,)),
        )
        body = matrix
        for v in reversed(ex_vars):
            quantified = Exists(v, body)
            allv = self._emit(
                ForAll(v, self.formula(cond)),
                Justification("GEN", premises=(cond,), var=v),
            )
            shift = self.ax(
                "ex_imp",
                Implies(
                    self.formula(allv), Implies(quantified, wrapped_goal)
                ),
            )
            cond = self.mp(shift, allv)
            body = quantified
        # cond: (exists ... matrix) -> (ctx -> goal)
        return self._emit(
            wrapped_goal, Justification("TAUT", premises=(cond, ex_line))
        )

    # -- case analysis: from ctx -> (c1 | c2) and per-case goal lines

    def cases(self, disj_line: int, case_lines: list[int], goal: Formula) -> int:
        return self.taut(goal, disj_line, *case_lines)

    # -- probability-transfer lemma
    #
    # Given a provable implication  X -> Y  (theorem line), a line giving
    # Pr(cx, S), and a line giving Pr(cy, T), conclude S <= T.  cx and cy
    # are closed code terms whose values code X and Y.

    def transfer(self, x: Formula, y: Formula, cx: Term, cy: Term,
                 impl_line: int, px_line: int, py_line: int,
                 s: Term, t: Term) -> int:
        o = Or(Not(x), y)
        o_line = self.steps_taut_theorem(o, impl_line)
        p_o = self.nec(o_line)
        oc = self.formula(p_o)
        assert isinstance(oc, PrAtom)
        kf7 = self.ax("kf7", Iff(PrAtom(cx, s), PrAtom(negdot(cx), Arith("-", Rat(1), s))))
        pnx = self.have(PrAtom(negdot(cx), Arith("-", Rat(1), s)), "TAUT", kf7, px_line)
        sv = self.fresh("es")
        tv = self.fresh("et")
        or_term = ordot(negdot(cx), cy)
        and_term = anddot(negdot(cx), cy)
        matrix = And(
            And(PrAtom(or_term, Var(sv)), PrAtom(and_term, Var(tv))),
            Eq(
                Arith("+", Var(sv), Var(tv)),
                Arith("+", Arith("-", Rat(1), s), t),
            ),
        )
        kf6 = self.ax(
            "kf6",
            Implies(
                And(PrAtom(negdot(cx), Arith("-", Rat(1), s)), PrAtom(cy, t)),
                Exists(sv, Exists(tv, matrix)),
            ),
        )
        exline = self.have(Exists(sv, Exists(tv, matrix)), "TAUT", kf6, pnx, py_line)
        code_eq = self.ax("code", Eq(or_term, oc.code))
        sub = self.ax(
            "eq_sub",
            Implies(
                Eq(or_term, oc.code),
                Implies(PrAtom(or_term, Var(sv)), PrAtom(oc.code, Var(sv))),
            ),
        )
        kf3 = self.ax(
            "kf3",
            Implies(
                PrAtom(and_term, Var(tv)),
                And(
                    SentAtom(and_term),
                    And(Leq(Rat(0), Var(tv)), Leq(Var(tv), Rat(1))),
                ),
            ),
        )
        self.push(matrix)
        goal_in = self.lra(Leq(s, t), code_eq, sub, kf3, p_o)
        self.pop()
        return self.exists_elim(exline, [sv, tv], matrix, goal_in, Leq(s, t))

    def steps_taut_theorem(self, phi: Formula, *premises: int) -> int:
        """Unconditional tautological consequence of unconditional lines."""

        return self._emit(phi, Justification("TAUT", premises=premises))

    def steps_lra_theorem(self, phi: Formula, *premises: int) -> int:
        """Unconditional linear-arithmetic consequence of unconditional lines."""

        return self._emit(phi, Justification("LRA", premises=premises))
