"""Construction of self-referential sentences via the substitution function.

diagonalize(p, v) builds the fixed point of the one-variable formula p:
replace v by ssub(v), code the result as c, and plug in #c.  The value of
the ssub term is then exactly the code of the resulting sentence, so the
sentence is equivalent to p applied to its own code.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coding import WrongFreeVarsError, encode
from .parser import parse_formula
from .syntax import (
    CodeConst,
    Formula,
    Iff,
    SynApp,
    Var,
    free_vars,
    is_sentence,
    substitute,
)


@dataclass(frozen=True)
class DiagonalResult:
    delta: Formula
    biconditional: Formula
    construction_trace: tuple[Formula, ...]
    generator: Formula
    var: str

    @property
    def code(self) -> int:
        return encode(self.delta)


def diagonalize(phi: Formula, v: str) -> DiagonalResult:
    """Fixed point delta with delta <-> phi[v := #code(delta)]."""

    fv = free_vars(phi)
    if fv != {v}:
        raise WrongFreeVarsError(
            f"generator must have exactly the free variable {v!r}, found {sorted(fv)}"
        )
    psi = substitute(phi, v, SynApp("ssub", (Var(v),)))
    c = encode(psi)
    delta = substitute(psi, v, CodeConst(c))
    assert is_sentence(delta)
    bic = Iff(delta, substitute(phi, v, CodeConst(encode(delta))))
    return DiagonalResult(
        delta=delta,
        biconditional=bic,
        construction_trace=(phi, psi, delta),
        generator=phi,
        var=v,
    )


# ---------------------------------------------------------------------------
# The bundled fixed points used by the proof scripts.

_GENERATORS: dict[str, str] = {
    # certainty liar: equivalent to the claim that it is not certain
    "pr4_liar": "~Pr(x, 1)",
    # liar asserting its own probability is below 1 (witnessed form)
    "rv_liar": "exists y (Pr(x, y) & y < 1)",
    # fixed point for the reflection argument
    "reflection_fp": "~(Bew[S](x) -> Pr(x, 1))",
    # negative-introspection fixed points; both principles collapse on the
    # same witnessed-uncertainty liar
    "negintro1_fp": "exists y (Pr(x, y) & y < 1)",
    "negintro2_fp": "exists y (Pr(x, y) & y < 1)",
    # sequence formula: some probability iterate of this sentence fails
    "mcgee": "exists n (N(n) & ~Pr(priter(x, n), 1))",
    # interval liar for the point-interval coordination principle
    "vstar_liar": "~Pr(x, 1)",
}


def named_fixed_points() -> dict[str, DiagonalResult]:
    """Catalog of the fixed points the bundled derivations rely on."""

    out = {}
    for name, text in _GENERATORS.items():
        out[name] = diagonalize(parse_formula(text), "x")
    return out
