"""Finite semantics: sentence pools, revision sequences, induced models,
the three-valued witness model for transparent certainty, and axiom audits.

Evaluation covers the decidable fragment: bounded quantifiers enumerate
naturals up to the bound; unbounded quantifiers must be relativized to N
and are enumerated up to an explicit cap, with cap-dependent verdicts
flagged.  Probability atoms read the model; codes absent from a
two-valued model default to 0 and are flagged.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .coding import NotACodeError, decode_formula, encode
from .diagonal import named_fixed_points
from .parser import parse_formula
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
)
from .taut import jointly_satisfiable


class UndecidableFormError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Pools


@dataclass(frozen=True)
class SentencePool:
    sentences: tuple[Formula, ...]
    params: tuple[tuple[str, object], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "_codes", {encode(s): s for s in self.sentences})

    def __len__(self) -> int:
        return len(self.sentences)

    def __contains__(self, phi: Formula) -> bool:
        return encode(phi) in self._codes

    @property
    def codes(self) -> dict[int, Formula]:
        return self._codes

    def member(self, code: int) -> Optional[Formula]:
        return self._codes.get(code)


def _closure(sentences: Iterable[Formula]) -> list[Formula]:
    """Close under immediate closed subsentences, negation of non-negated
    members, and the sibling binary combination (so that additivity
    instances over the pool are instantiable)."""

    seen: dict[Formula, None] = {}
    work = list(sentences)
    while work:
        phi = work.pop()
        if phi in seen or not is_sentence(phi):
            continue
        seen[phi] = None
        if isinstance(phi, Not):
            work.append(phi.body)
        elif isinstance(phi, (And, Or)):
            work.append(phi.left)
            work.append(phi.right)
            sibling = Or(phi.left, phi.right) if isinstance(phi, And) else And(phi.left, phi.right)
            work.append(sibling)
        elif isinstance(phi, (Implies, Iff)):
            work.append(phi.left)
            work.append(phi.right)
    out = list(seen)
    for phi in out:
        if not isinstance(phi, Not) and Not(phi) not in seen:
            seen[Not(phi)] = None
    return list(seen)


_GRID = (Fraction(0), Fraction(1, 2), Fraction(1))


def generate_pool(
    size: int = 40,
    depth: int = 4,
    seed: int = 0,
    include_liar: bool = True,
    language: str = "LQ",
) -> SentencePool:
    """Seeded pool of closed sentences, closed under the pool operations."""

    rng = random.Random(seed)
    base: list[Formula] = []
    for _ in range(max(6, size // 6)):
        a = Rat(rng.randint(-2, 2), rng.randint(1, 3))
        bterm = Rat(rng.randint(-2, 2), rng.randint(1, 3))
        base.append(Eq(a, bterm) if rng.random() < 0.5 else Leq(a, bterm))
    pool: list[Formula] = []
    seen: set[Formula] = set()

    def add(phi: Formula) -> None:
        if phi not in seen:
            seen.add(phi)
            pool.append(phi)

    for s in base:
        add(s)
    if include_liar:
        lam = named_fixed_points()["pr4_liar"].delta
        lc = encode(lam)
        add(lam)
        add(lam.body)  # the certainty ascription inside the liar
        # the reflection cluster around the liar: conditions and conjunctions
        for val in (Rat(1), Rat(0)):
            cond = PrAtom(CodeConst(lc), val)
            add(cond)
            add(And(lam, cond))
    while len(_closure(pool)) < size:
        kind = rng.random()
        if not pool:
            break
        if kind < 0.25:
            add(Not(rng.choice(pool)))
        elif kind < 0.45:
            add(And(rng.choice(pool), rng.choice(pool)))
        elif kind < 0.65:
            add(Or(rng.choice(pool), rng.choice(pool)))
        elif kind < 0.75:
            add(Implies(rng.choice(pool), rng.choice(pool)))
        else:
            target = rng.choice(pool)
            value = rng.choice(_GRID)
            if language == "LT":
                add(TrueAtom(CodeConst(encode(target))))
            else:
                add(PrAtom(CodeConst(encode(target)), Rat(value.numerator, value.denominator)))
    closed = _closure(pool)
    return SentencePool(
        tuple(closed),
        params=(("size", size), ("depth", depth), ("seed", seed),
                ("include_liar", include_liar), ("language", language)),
    )


def pool_from_formulas(formulas: Iterable[Formula], **params) -> SentencePool:
    return SentencePool(tuple(_closure(formulas)), params=tuple(params.items()))


# ---------------------------------------------------------------------------
# Models


@dataclass(frozen=True)
class PrModel:
    assignment: tuple[tuple[int, Fraction], ...]
    mode: str = "two-valued"  # two-valued | three-valued | general | truth
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "_map", dict(self.assignment))
        for _, v in self.assignment:
            if not 0 <= v <= 1:
                raise ValueError("probability values must lie in [0, 1]")
            if self.mode in ("two-valued", "truth") and v not in (0, 1):
                raise ValueError("two-valued model with a non-extreme value")
            if self.mode == "three-valued" and v not in (0, Fraction(1, 2), 1):
                raise ValueError("three-valued model with a foreign value")

    def value(self, code: int) -> Optional[Fraction]:
        return self._map.get(code)

    def items(self):
        return self.assignment


def model_from_dict(d: dict[int, Fraction], mode: str = "two-valued",
                    notes: tuple[str, ...] = ()) -> PrModel:
    return PrModel(tuple(sorted(d.items())), mode=mode, notes=notes)


# ---------------------------------------------------------------------------
# Evaluation


@dataclass
class EvalFlags:
    defaulted: set[int] = field(default_factory=set)
    cap_dependent: bool = False


def _term_value(t: Term, env: dict[str, Fraction]) -> Fraction:
    if isinstance(t, Var):
        if t.name not in env:
            raise UndecidableFormError(f"free variable {t.name} in evaluation")
        return env[t.name]
    if isinstance(t, Rat):
        return t.value
    if isinstance(t, CodeConst):
        return Fraction(t.code)
    if isinstance(t, Arith):
        a = _term_value(t.left, env)
        c = _term_value(t.right, env)
        if t.op == "+":
            return a + c
        if t.op == "-":
            return a - c
        if t.op == "*":
            return a * c
        if c == 0:
            raise UndecidableFormError("division by zero under evaluation")
        return a / c
    if isinstance(t, SynApp):
        from .coding import _SYNTAX_SEMANTICS

        vals = []
        for a in t.args:
            v = _term_value(a, env)
            if v.denominator != 1 or v < 0:
                raise UndecidableFormError("syntax function applied to a non-natural")
            vals.append(int(v))
        return Fraction(_SYNTAX_SEMANTICS[t.fn](*vals))
    raise TypeError(t)


def _is_nat(v: Fraction) -> bool:
    return v.denominator == 1 and v >= 0


def eval_formula(
    model: PrModel,
    phi: Formula,
    cap: int = 64,
    env: Optional[dict[str, Fraction]] = None,
    flags: Optional[EvalFlags] = None,
) -> bool:
    """Classical truth value over the standard rationals and the model."""

    env = env or {}
    flags = flags if flags is not None else EvalFlags()

    def ev(p: Formula, env: dict[str, Fraction]) -> bool:
        if isinstance(p, Eq):
            return _term_value(p.left, env) == _term_value(p.right, env)
        if isinstance(p, Leq):
            return _term_value(p.left, env) <= _term_value(p.right, env)
        if isinstance(p, NatAtom):
            return _is_nat(_term_value(p.arg, env))
        if isinstance(p, SentAtom):
            v = _term_value(p.arg, env)
            if not _is_nat(v):
                return False
            try:
                return is_sentence(decode_formula(int(v)))
            except NotACodeError:
                return False
        if isinstance(p, PrAtom):
            c = _term_value(p.code, env)
            if not _is_nat(c):
                return False
            stored = model.value(int(c))
            if stored is None:
                flags.defaulted.add(int(c))
                stored = Fraction(0)
            return stored == _term_value(p.value, env)
        if isinstance(p, TrueAtom):
            c = _term_value(p.code, env)
            if not _is_nat(c):
                return False
            stored = model.value(int(c))
            if stored is None:
                flags.defaulted.add(int(c))
                stored = Fraction(0)
            return stored == 1
        if isinstance(p, BewAtom):
            raise UndecidableFormError("provability atoms have no finite semantics here")
        if isinstance(p, Not):
            return not ev(p.body, env)
        if isinstance(p, And):
            return ev(p.left, env) and ev(p.right, env)
        if isinstance(p, Or):
            return ev(p.left, env) or ev(p.right, env)
        if isinstance(p, Implies):
            return (not ev(p.left, env)) or ev(p.right, env)
        if isinstance(p, Iff):
            return ev(p.left, env) == ev(p.right, env)
        if isinstance(p, (BForAll, BExists)):
            bound = _term_value(p.bound, env)
            top = int(bound) if bound >= 0 else -1
            vals = (Fraction(i) for i in range(top + 1))
            if isinstance(p, BForAll):
                return all(ev(p.body, {**env, p.var: v}) for v in vals)
            return any(ev(p.body, {**env, p.var: v}) for v in vals)
        if isinstance(p, ForAll):
            body = p.body
            if not (isinstance(body, Implies) and body.left == NatAtom(Var(p.var))):
                raise UndecidableFormError(
                    "unbounded universal must be relativized to N"
                )
            for i in range(cap + 1):
                if not ev(body.right, {**env, p.var: Fraction(i)}):
                    return False
            flags.cap_dependent = True
            return True
        if isinstance(p, Exists):
            body = p.body
            if not (isinstance(body, And) and body.left == NatAtom(Var(p.var))):
                raise UndecidableFormError(
                    "unbounded existential must be relativized to N"
                )
            for i in range(cap + 1):
                if ev(body.right, {**env, p.var: Fraction(i)}):
                    return True
            flags.cap_dependent = True
            return False
        raise TypeError(p)

    return ev(phi, env)


# ---------------------------------------------------------------------------
# Revision sequences


@dataclass(frozen=True)
class RevisionTrace:
    pool: SentencePool
    stages: tuple[frozenset[int], ...]
    stable_in: frozenset[int]
    stable_out: frozenset[int]
    unstable: frozenset[int]

    def stage_members(self, k: int) -> list[Formula]:
        return [self.pool.codes[c] for c in sorted(self.stages[k])]


def _stage_model(pool: SentencePool, current: frozenset[int]) -> PrModel:
    assignment = {c: Fraction(1) if c in current else Fraction(0) for c in pool.codes}
    return model_from_dict(assignment, mode="two-valued")


def revise(pool: SentencePool, k: int, cap: int = 64) -> RevisionTrace:
    """Iterated redefinition of the truth set, starting from the empty set."""

    if k < 1:
        raise ValueError("at least one stage is required")
    stages: list[frozenset[int]] = [frozenset()]
    for _ in range(k):
        model = _stage_model(pool, stages[-1])
        new = frozenset(
            c for c, s in pool.codes.items() if _safe_eval(model, s, cap)
        )
        stages.append(new)
    window = min(len(pool), k)
    tail = stages[-window:]
    stable_in = frozenset(c for c in pool.codes if all(c in t for t in tail))
    stable_out = frozenset(c for c in pool.codes if all(c not in t for t in tail))
    unstable = frozenset(pool.codes) - stable_in - stable_out
    return RevisionTrace(pool, tuple(stages), stable_in, stable_out, unstable)


def _safe_eval(model: PrModel, phi: Formula, cap: int) -> bool:
    try:
        return eval_formula(model, phi, cap=cap)
    except UndecidableFormError:
        return False


# ---------------------------------------------------------------------------
# The induced two-valued model


def induced_pr_model(trace: RevisionTrace, cap: int = 64) -> PrModel:
    """Greedy maximal-consistent extension of the stable truths."""

    pool = trace.pool
    asserted: list[Formula] = [pool.codes[c] for c in sorted(trace.stable_in)]
    asserted += [Not(pool.codes[c]) for c in sorted(trace.stable_out)]
    if not jointly_satisfiable(asserted):
        raise ValueError("stable truths are propositionally inconsistent")
    values: dict[int, Fraction] = {}
    for c in sorted(trace.stable_in):
        values[c] = Fraction(1)
    for c in sorted(trace.stable_out):
        values[c] = Fraction(0)
    for c, phi in sorted(pool.codes.items()):
        if c in values:
            continue
        if jointly_satisfiable(asserted + [phi]):
            asserted.append(phi)
            values[c] = Fraction(1)
        else:
            asserted.append(Not(phi))
            values[c] = Fraction(0)
    return model_from_dict(values, mode="two-valued", notes=("induced-from-revision",))


# ---------------------------------------------------------------------------
# The three-valued witness model for transparent certainty


@dataclass(frozen=True)
class ClosureFailure(Exception):
    reason: str


def cpr4_model(pool: SentencePool, upward_rounds: int = 2, budget: int = 50,
               cap: int = 64) -> PrModel:
    """Belief-set iteration: seed with standard base truths, close under
    propositional consequence within the pool and downward reflection;
    upward reflection is applied a bounded number of rounds."""

    base_model = model_from_dict({}, mode="two-valued")
    believed: set[Formula] = set()
    for phi in pool.sentences:
        if any(isinstance(s, (PrAtom, TrueAtom, BewAtom)) for s in _atoms(phi)):
            continue
        if _safe_eval(base_model, phi, cap):
            believed.add(phi)

    ups = 0
    for _round in range(budget):
        changed = False
        # propositional consequence within the pool
        for phi in pool.sentences:
            if phi in believed:
                continue
            if not jointly_satisfiable(list(believed) + [Not(phi)]):
                believed.add(phi)
                changed = True
        # downward reflection: certainty ascriptions reveal their content
        for phi in pool.sentences:
            if (
                isinstance(phi, PrAtom)
                and phi in believed
                and isinstance(phi.code, CodeConst)
                and phi.value == Rat(1)
            ):
                inner = pool.member(phi.code.code)
                if inner is not None and inner not in believed:
                    believed.add(inner)
                    changed = True
        # bounded upward reflection
        if ups < upward_rounds:
            ups += 1
            for phi in list(believed):
                ascription = PrAtom(CodeConst(encode(phi)), Rat(1))
                if ascription in pool.codes.values() and ascription not in believed:
                    believed.add(ascription)
                    changed = True
        if not jointly_satisfiable(list(believed)):
            raise ClosureFailure("belief closure became inconsistent")
        if not changed and ups >= upward_rounds:
            break
    else:
        raise ClosureFailure("belief closure did not stabilize within budget")

    def disbelieved(phi: Formula) -> bool:
        if isinstance(phi, Not):
            if phi.body in believed:
                return True
        return Not(phi) in believed

    values: dict[int, Fraction] = {}
    for c, phi in pool.codes.items():
        if phi in believed:
            values[c] = Fraction(1)
        elif disbelieved(phi):
            values[c] = Fraction(0)
        else:
            values[c] = Fraction(1, 2)
    return model_from_dict(values, mode="three-valued", notes=("belief-iteration",))


def _atoms(phi: Formula):
    from .syntax import subformulas

    for sub in subformulas(phi):
        if not isinstance(sub, (Not, And, Or, Implies, Iff, ForAll, Exists, BForAll, BExists)):
            yield sub


# ---------------------------------------------------------------------------
# Audits


@dataclass(frozen=True)
class AuditEntry:
    schema: str
    instance: str
    holds: bool
    witness: str = ""


@dataclass(frozen=True)
class AuditReport:
    entries: tuple[AuditEntry, ...]

    @property
    def failures(self) -> tuple[AuditEntry, ...]:
        return tuple(e for e in self.entries if not e.holds)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        per_schema: dict[str, list[int]] = {}
        for e in self.entries:
            per_schema.setdefault(e.schema, [0, 0])
            per_schema[e.schema][0] += 1
            per_schema[e.schema][1] += 0 if e.holds else 1
        return {
            "total": len(self.entries),
            "failures": len(self.failures),
            "per_schema": {k: {"instances": v[0], "failures": v[1]} for k, v in per_schema.items()},
        }

    def to_dict(self) -> dict:
        return {
            "summary": self.summary(),
            "failing": [
                {"schema": e.schema, "instance": e.instance, "witness": e.witness}
                for e in self.failures
            ],
        }


def _v(model: PrModel, code: int) -> Fraction:
    stored = model.value(code)
    return stored if stored is not None else Fraction(0)


def audit(theory_schemas: Iterable[str], model: PrModel, pool: SentencePool,
          cap: int = 64) -> AuditReport:
    """Check every instantiable axiom instance over the pool against the
    model, value-wise.  Failures are data, not errors."""

    from .coding import code_op

    schemas = set(theory_schemas)
    entries: list[AuditEntry] = []
    codes = pool.codes

    def note(schema: str, instance: str, holds: bool, witness: str = "") -> None:
        entries.append(AuditEntry(schema, instance, holds, witness))

    neg_of = {}
    for c, phi in codes.items():
        nc = code_op("neg", c)
        if nc in codes:
            neg_of[c] = nc

    if "kf3" in schemas:
        for c in codes:
            val = _v(model, c)
            note(
                "kf3",
                f"0 <= Pr({c}) <= 1 and Sent({c})",
                0 <= val <= 1,
                f"value {val}",
            )

    if "kf4" in schemas:
        base_model = model
        for c, phi in codes.items():
            if any(isinstance(a, (PrAtom, TrueAtom, BewAtom)) for a in _atoms(phi)):
                continue
            try:
                truth = eval_formula(model_from_dict({}), phi, cap=cap)
            except UndecidableFormError:
                continue
            holds = (_v(model, c) == 1) == truth
            note("kf4", f"Pr(q({formula_str(phi)}), 1) <-> {formula_str(phi)}", holds,
                 f"value {_v(model, c)}, truth {truth}")

    if "kf5" in schemas or "kf6" in schemas:
        for c, phi in codes.items():
            if not isinstance(phi, Or):
                continue
            a, bq = encode(phi.left), encode(phi.right)
            if a not in codes or bq not in codes:
                continue
            if "kf5" in schemas:
                ok = _v(model, a) <= _v(model, c) and _v(model, bq) <= _v(model, c)
                note("kf5", f"Pr({a}), Pr({bq}) <= Pr({c})", ok,
                     f"{_v(model, a)}, {_v(model, bq)} vs {_v(model, c)}")
            if "kf6" in schemas:
                andc = code_op("conj", a, bq)
                if andc in codes:
                    ok = _v(model, c) + _v(model, andc) == _v(model, a) + _v(model, bq)
                    note(
                        "kf6",
                        f"Pr({c}) + Pr({andc}) = Pr({a}) + Pr({bq})",
                        ok,
                        f"{_v(model, c)}+{_v(model, andc)} vs {_v(model, a)}+{_v(model, bq)}",
                    )

    if "kf7" in schemas:
        for c, nc in neg_of.items():
            ok = _v(model, nc) == 1 - _v(model, c)
            note("kf7", f"Pr({nc}) = 1 - Pr({c})", ok,
                 f"{_v(model, nc)} vs 1 - {_v(model, c)}")

    if "two_valued" in schemas:
        for c in codes:
            ok = _v(model, c) in (Fraction(0), Fraction(1))
            note("two_valued", f"Pr({c}) in {{0, 1}}", ok, f"value {_v(model, c)}")

    def ascription_code(c: int) -> Optional[int]:
        asc = PrAtom(CodeConst(c), Rat(1))
        ac = encode(asc)
        return ac if ac in codes else None

    if "pr4" in schemas:
        for c in codes:
            ac = ascription_code(c)
            if ac is None:
                continue
            ok = not (_v(model, c) == 1) or (_v(model, ac) == 1)
            note("pr4", f"Pr({c}) = 1 -> Pr({ac}) = 1", ok,
                 f"{_v(model, c)}, {_v(model, ac)}")

    if "cpr4" in schemas:
        for c in codes:
            ac = ascription_code(c)
            if ac is None:
                continue
            ok = not (_v(model, ac) == 1) or (_v(model, c) == 1)
            note("cpr4", f"Pr({ac}) = 1 -> Pr({c}) = 1", ok,
                 f"{_v(model, ac)}, {_v(model, c)}")

    if "rv" in schemas:
        for c in codes:
            for a in _GRID:
                cond = PrAtom(CodeConst(c), Rat(a.numerator, a.denominator))
                h = encode(cond)
                phi = codes[c]
                n = encode(And(phi, cond))
                if h not in codes or n not in codes:
                    continue
                if _v(model, h) == 0:
                    continue
                ok = _v(model, n) == a * _v(model, h)
                note("rv", f"Pr({n}) = {a} * Pr({h})", ok,
                     f"{_v(model, n)} vs {a} * {_v(model, h)}")

    if "negintro1" in schemas or "negintro2" in schemas:
        for c in codes:
            unc = Exists("y", And(PrAtom(CodeConst(c), Var("y")),
                                  Not(Leq(Rat(1), Var("y")))))
            bcode = encode(unc)
            if bcode not in codes:
                continue
            uncertain = _v(model, c) < 1
            if "negintro1" in schemas:
                ok = (not uncertain) or (_v(model, bcode) == 1)
                note("negintro1", f"Pr({c}) < 1 -> Pr({bcode}) = 1", ok,
                     f"{_v(model, c)}, {_v(model, bcode)}")
            if "negintro2" in schemas:
                ok = (_v(model, bcode) != 1) or uncertain
                note("negintro2", f"Pr({bcode}) = 1 -> Pr({c}) < 1", ok,
                     f"{_v(model, bcode)}, {_v(model, c)}")

    return AuditReport(tuple(entries))


# ---------------------------------------------------------------------------
# Brute-force revision oracle (kept deliberately independent of eval_formula)


def revise_bruteforce(pool: SentencePool, k: int, cap: int = 64) -> list[set[Formula]]:
    """Re-evaluates stages by direct recursion over sentence syntax."""

    def truth(phi: Formula, current: set[Formula], env: dict[str, Fraction]) -> bool:
        if isinstance(phi, Eq):
            return _term_value(phi.left, env) == _term_value(phi.right, env)
        if isinstance(phi, Leq):
            return _term_value(phi.left, env) <= _term_value(phi.right, env)
        if isinstance(phi, NatAtom):
            return _is_nat(_term_value(phi.arg, env))
        if isinstance(phi, SentAtom):
            v = _term_value(phi.arg, env)
            if not _is_nat(v):
                return False
            try:
                return is_sentence(decode_formula(int(v)))
            except NotACodeError:
                return False
        if isinstance(phi, PrAtom):
            cval = _term_value(phi.code, env)
            want = _term_value(phi.value, env)
            if not _is_nat(cval):
                return False
            member = pool.member(int(cval))
            inside = member is not None and member in current
            return want == (1 if inside else 0)
        if isinstance(phi, TrueAtom):
            cval = _term_value(phi.code, env)
            if not _is_nat(cval):
                return False
            member = pool.member(int(cval))
            return member is not None and member in current
        if isinstance(phi, Not):
            return not truth(phi.body, current, env)
        if isinstance(phi, And):
            return truth(phi.left, current, env) and truth(phi.right, current, env)
        if isinstance(phi, Or):
            return truth(phi.left, current, env) or truth(phi.right, current, env)
        if isinstance(phi, Implies):
            return not truth(phi.left, current, env) or truth(phi.right, current, env)
        if isinstance(phi, Iff):
            return truth(phi.left, current, env) == truth(phi.right, current, env)
        if isinstance(phi, (BForAll, BExists)):
            bound = _term_value(phi.bound, env)
            rng = [Fraction(i) for i in range(int(bound) + 1)] if bound >= 0 else []
            results = (truth(phi.body, current, {**env, phi.var: v}) for v in rng)
            return all(results) if isinstance(phi, BForAll) else any(results)
        if isinstance(phi, ForAll):
            assert isinstance(phi.body, Implies)
            return all(
                truth(phi.body.right, current, {**env, phi.var: Fraction(i)})
                for i in range(cap + 1)
            )
        if isinstance(phi, Exists):
            assert isinstance(phi.body, And)
            return any(
                truth(phi.body.right, current, {**env, phi.var: Fraction(i)})
                for i in range(cap + 1)
            )
        raise TypeError(phi)

    stages: list[set[Formula]] = [set()]
    for _ in range(k):
        cur = stages[-1]
        stages.append({s for s in pool.sentences if truth(s, cur, {})})
    return stages
