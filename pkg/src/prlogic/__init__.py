"""Workbench for typefree subjective probability calculi.

Provides the formula/term language with exact coding, the diagonal
construction, Hilbert-style proof checking for the bundled calculi, the
bundled derivations, finite revision semantics with axiom audits, and the
syntactic interpretation machinery.
"""

from .syntax import (
    Formula,
    Term,
    formula_str,
    term_str,
    substitute,
    free_vars,
    is_sentence,
    numeral,
)
from .parser import parse_formula, parse_term, ParseError
from .coding import (
    encode,
    decode,
    code_op,
    self_sub_value,
    eval_term,
    NotACodeError,
)
from .diagonal import diagonalize, named_fixed_points, DiagonalResult
from .taut import taut_check
from .lra import lra_check
from .calculus import (
    TheorySpec,
    builtin_theories,
    get_theory,
    match_schema,
    check_proof,
)
from .proofs import Proof, Step, Justification, Verdict, parse_script, render_script
from .derivations import (
    BundledDerivation,
    bundled_names,
    build_all,
    load_bundled,
    run_bundled,
    write_bundle,
)

__all__ = [
    "Formula",
    "Term",
    "formula_str",
    "term_str",
    "substitute",
    "free_vars",
    "is_sentence",
    "numeral",
    "parse_formula",
    "parse_term",
    "ParseError",
    "encode",
    "decode",
    "code_op",
    "self_sub_value",
    "eval_term",
    "NotACodeError",
    "diagonalize",
    "named_fixed_points",
    "DiagonalResult",
    "taut_check",
    "lra_check",
    "TheorySpec",
    "builtin_theories",
    "get_theory",
    "match_schema",
    "check_proof",
    "Proof",
    "Step",
    "Justification",
    "Verdict",
    "parse_script",
    "render_script",
    "BundledDerivation",
    "bundled_names",
    "build_all",
    "load_bundled",
    "run_bundled",
    "write_bundle",
]

__version__ = "0.1.0"
