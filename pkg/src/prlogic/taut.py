"""Propositional reasoning over abstracted formulas.

Maximal non-propositional subformulas (atoms, quantified formulas) are
treated as propositional atoms; tautology checking enumerates valuations.
A small DPLL over Tseitin clauses serves the satisfiability queries made
by the model-construction code, where atom counts are too large for
truth tables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import And, Formula, Iff, Implies, Not, Or

_CONNECTIVES = (Not, And, Or, Implies, Iff)


class AtomBudgetError(ValueError):
    pass


def prop_atoms(phi: Formula) -> list[Formula]:
    """Maximal non-propositional subformulas, in first-occurrence order."""

    seen: dict[Formula, None] = {}

    def walk(p: Formula) -> None:
        if isinstance(p, Not):
            walk(p.body)
        elif isinstance(p, (And, Or, Implies, Iff)):
            walk(p.left)
            walk(p.right)
        else:
            seen.setdefault(p, None)

    walk(phi)
    return list(seen)


def eval_prop(phi: Formula, val: dict[Formula, bool]) -> bool:
    if isinstance(phi, Not):
        return not eval_prop(phi.body, val)
    if isinstance(phi, And):
        return eval_prop(phi.left, val) and eval_prop(phi.right, val)
    if isinstance(phi, Or):
        return eval_prop(phi.left, val) or eval_prop(phi.right, val)
    if isinstance(phi, Implies):
        return (not eval_prop(phi.left, val)) or eval_prop(phi.right, val)
    if isinstance(phi, Iff):
        return eval_prop(phi.left, val) == eval_prop(phi.right, val)
    return val[phi]


@dataclass(frozen=True)
class TautResult:
    tautology: bool
    atoms: tuple[Formula, ...]
    counterexample: dict[Formula, bool] | None = None


def taut_check(phi: Formula, max_atoms: int = 20) -> TautResult:
    """Exhaustive-valuation tautology check after propositional abstraction."""

    atoms = prop_atoms(phi)
    if len(atoms) > max_atoms:
        raise AtomBudgetError(
            f"{len(atoms)} propositional atoms exceed the budget of {max_atoms}"
        )
    n = len(atoms)
    for mask in range(1 << n):
        val = {a: bool(mask >> i & 1) for i, a in enumerate(atoms)}
        if not eval_prop(phi, val):
            return TautResult(False, tuple(atoms), val)
    return TautResult(True, tuple(atoms))


# ---------------------------------------------------------------------------
# Clause-level satisfiability (for large atom counts)


def _tseitin(formulas: list[Formula]) -> tuple[list[list[int]], dict[Formula, int]]:
    atom_ids: dict[Formula, int] = {}
    clauses: list[list[int]] = []
    counter = [0]

    def new_var() -> int:
        counter[0] += 1
        return counter[0]

    def lit(p: Formula) -> int:
        if isinstance(p, Not):
            return -lit(p.body)
        if isinstance(p, (And, Or, Implies, Iff)):
            a = lit(p.left)
            b = lit(p.right)
            v = new_var()
            if isinstance(p, And):
                clauses.extend([[-v, a], [-v, b], [v, -a, -b]])
            elif isinstance(p, Or):
                clauses.extend([[-v, a, b], [v, -a], [v, -b]])
            elif isinstance(p, Implies):
                clauses.extend([[-v, -a, b], [v, a], [v, -b]])
            else:  # Iff
                clauses.extend([[-v, -a, b], [-v, a, -b], [v, a, b], [v, -a, -b]])
            return v
        if p not in atom_ids:
            atom_ids[p] = new_var()
        return atom_ids[p]

    for f in formulas:
        clauses.append([lit(f)])
    return clauses, atom_ids


def _dpll(clauses: list[list[int]], assign: dict[int, bool]) -> dict[int, bool] | None:
    clauses = [list(c) for c in clauses]
    while True:
        unit = None
        simplified: list[list[int]] = []
        for c in clauses:
            lits = []
            sat = False
            for l in c:
                v = assign.get(abs(l))
                if v is None:
                    lits.append(l)
                elif (l > 0) == v:
                    sat = True
                    break
            if sat:
                continue
            if not lits:
                return None
            if len(lits) == 1 and unit is None:
                unit = lits[0]
            simplified.append(lits)
        clauses = simplified
        if unit is None:
            break
        assign = dict(assign)
        assign[abs(unit)] = unit > 0
    if not clauses:
        return assign
    pivot = abs(clauses[0][0])
    for choice in (True, False):
        trial = dict(assign)
        trial[pivot] = choice
        out = _dpll(clauses, trial)
        if out is not None:
            return out
    return None


def sat_assignment(formulas: list[Formula]) -> dict[Formula, bool] | None:
    """A truth assignment on abstracted atoms satisfying all formulas, if any."""

    clauses, atom_ids = _tseitin(formulas)
    model = _dpll(clauses, {})
    if model is None:
        return None
    return {atom: model.get(idx, False) for atom, idx in atom_ids.items()}


def jointly_satisfiable(formulas: list[Formula]) -> bool:
    return sat_assignment(formulas) is not None
