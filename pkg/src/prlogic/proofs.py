"""Proof objects, justifications, verdicts, and the .prf script format.

A script is line-oriented:

    # comment
    <label>: <formula> ; <justification>

with justifications

    AX <schema-id> {x=<term>, ...}     axiom-schema instance (hints optional)
    MP <l1> <l2>                       modus ponens (either order)
    GEN <l> <var>                      universal generalization
    NEC <l>                            theory-appropriate necessitation
    DIAG <fixed-point-name>            diagonal biconditional
    TAUT [<l> ...]                     propositional validity / consequence
    LRA [<l> ...]                      linear rational validity / consequence
    DEFN condprob <l>                  guarded ratio unfolding of line l
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .parser import ParseError, parse_formula, parse_term
from .syntax import Formula, Term, formula_str, term_str


@dataclass(frozen=True)
class Justification:
    kind: str  # AX | MP | GEN | NEC | DIAG | TAUT | LRA | DEFN
    schema: str = ""
    premises: tuple[int, ...] = ()
    var: str = ""
    name: str = ""
    hints: tuple[tuple[str, Term], ...] = ()


@dataclass(frozen=True)
class Step:
    label: str
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Proof:
    steps: tuple[Step, ...]

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class StepFailure:
    index: int
    label: str
    reason: str


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    first_failure: StepFailure | None
    failures: tuple[StepFailure, ...]
    step_count: int
    schema_usage: tuple[tuple[str, int], ...]

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "step_count": self.step_count,
            "first_failure": None
            if self.first_failure is None
            else {
                "index": self.first_failure.index,
                "label": self.first_failure.label,
                "reason": self.first_failure.reason,
            },
            "failures": [
                {"index": f.index, "label": f.label, "reason": f.reason}
                for f in self.failures
            ],
            "schema_usage": dict(self.schema_usage),
        }


class ScriptError(ValueError):
    pass


def _parse_hints(text: str) -> tuple[tuple[str, Term], ...]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ScriptError(f"malformed hint block {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return ()
    out = []
    for part in inner.split(","):
        if "=" not in part:
            raise ScriptError(f"malformed hint {part!r}")
        k, v = part.split("=", 1)
        out.append((k.strip(), parse_term(v.strip())))
    return tuple(out)


def parse_justification(text: str, labels: dict[str, int]) -> Justification:
    parts = text.strip().split()
    if not parts:
        raise ScriptError("empty justification")
    kind = parts[0].upper()

    def ref(label: str) -> int:
        if label not in labels:
            raise ScriptError(f"reference to unknown or later label {label!r}")
        return labels[label]

    if kind == "AX":
        if len(parts) < 2:
            raise ScriptError("AX needs a schema id")
        rest = text.strip()[len(parts[0]) :].strip()[len(parts[1]) :].strip()
        hints = _parse_hints(rest) if rest else ()
        return Justification("AX", schema=parts[1], hints=hints)
    if kind == "MP":
        if len(parts) != 3:
            raise ScriptError("MP needs two labels")
        return Justification("MP", premises=(ref(parts[1]), ref(parts[2])))
    if kind == "GEN":
        if len(parts) != 3:
            raise ScriptError("GEN needs a label and a variable")
        return Justification("GEN", premises=(ref(parts[1]),), var=parts[2])
    if kind == "NEC":
        if len(parts) != 2:
            raise ScriptError("NEC needs one label")
        return Justification("NEC", premises=(ref(parts[1]),))
    if kind == "DIAG":
        if len(parts) != 2:
            raise ScriptError("DIAG needs a fixed-point name")
        return Justification("DIAG", name=parts[1])
    if kind in ("TAUT", "LRA"):
        return Justification(kind, premises=tuple(ref(p) for p in parts[1:]))
    if kind == "DEFN":
        if len(parts) != 3 or parts[1] != "condprob":
            raise ScriptError("DEFN justification is 'DEFN condprob <label>'")
        return Justification("DEFN", premises=(ref(parts[2]),))
    raise ScriptError(f"unknown justification kind {parts[0]!r}")


def parse_script(text: str) -> Proof:
    steps: list[Step] = []
    labels: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            head, just_text = line.rsplit(";", 1)
            label, formula_text = head.split(":", 1)
        except ValueError:
            raise ScriptError(f"line {lineno}: expected 'label: formula ; justification'")
        label = label.strip()
        if not label or label in labels:
            raise ScriptError(f"line {lineno}: missing or duplicate label {label!r}")
        try:
            formula = parse_formula(formula_text.strip())
        except ParseError as exc:
            raise ScriptError(f"line {lineno}: {exc}") from exc
        just = parse_justification(just_text, labels)
        steps.append(Step(label, formula, just))
        labels[label] = len(steps) - 1
    if not steps:
        raise ScriptError("empty script")
    return Proof(tuple(steps))


def render_script(proof: Proof) -> str:
    lines = []
    for step in proof.steps:
        j = step.justification
        if j.kind == "AX":
            hint = ""
            if j.hints:
                hint = " {" + ", ".join(f"{k}={term_str(v)}" for k, v in j.hints) + "}"
            jt = f"AX {j.schema}{hint}"
        elif j.kind == "MP":
            jt = f"MP {proof.steps[j.premises[0]].label} {proof.steps[j.premises[1]].label}"
        elif j.kind == "GEN":
            jt = f"GEN {proof.steps[j.premises[0]].label} {j.var}"
        elif j.kind == "NEC":
            jt = f"NEC {proof.steps[j.premises[0]].label}"
        elif j.kind == "DIAG":
            jt = f"DIAG {j.name}"
        elif j.kind in ("TAUT", "LRA"):
            jt = j.kind + "".join(f" {proof.steps[p].label}" for p in j.premises)
        elif j.kind == "DEFN":
            jt = f"DEFN condprob {proof.steps[j.premises[0]].label}"
        else:
            raise ValueError(j.kind)
        lines.append(f"{step.label}: {formula_str(step.formula)} ; {jt}")
    return "\n".join(lines) + "\n"
