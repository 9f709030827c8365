"""JSON problem files.

Example::

    {
      "alphabet_size": 2,
      "block_length": 2,
      "lower": ["0.4", "0.4"],
      "upper": ["0.6", "0.6"],
      "matrices": [[[1, 1], [0, 1]], [[1, 0], [1, 1]]],
      "omega": [[0, 1], [1, 0]]
    }

Frequencies must be strings (decimal or ``p/q``) so they are read exactly.
``target``, ``matrices`` and ``omega`` are optional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .blocks import FrequencyConstraint
from .errors import ConstraintError, InvalidMatrix
from .spectral import MatrixSet
from .subshift import MarkovWords


class ProblemError(ValueError):
    pass


@dataclass(frozen=True)
class Problem:
    constraint: FrequencyConstraint
    matrices: MatrixSet | None = None
    omega: MarkovWords | None = None


def _int_field(doc: dict, name: str) -> int:
    if name not in doc:
        raise ProblemError(f"missing field '{name}'")
    v = doc[name]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise ProblemError(f"field '{name}': expected a positive integer, got {v!r}")
    return v


def _freq_field(doc: dict, name: str, r: int, required: bool = True) -> list[str] | None:
    if name not in doc:
        if required:
            raise ProblemError(f"missing field '{name}'")
        return None
    v = doc[name]
    if not isinstance(v, list) or len(v) != r:
        raise ProblemError(f"field '{name}': expected a list of {r} strings")
    for i, x in enumerate(v):
        if not isinstance(x, str):
            raise ProblemError(f"field '{name}[{i}]': frequencies must be strings, got {x!r}")
    return v


def parse_problem(doc) -> Problem:
    if not isinstance(doc, dict):
        raise ProblemError("top level must be a JSON object")
    r = _int_field(doc, "alphabet_size")
    ell = _int_field(doc, "block_length")
    lower = _freq_field(doc, "lower", r)
    upper = _freq_field(doc, "upper", r)
    target = _freq_field(doc, "target", r, required=False)
    try:
        constraint = FrequencyConstraint(r, ell, lower, upper, target)
    except ConstraintError as exc:
        raise ProblemError(f"fields 'lower'/'upper'/'target': {exc}") from None

    matrices = None
    if doc.get("matrices") is not None:
        try:
            matrices = MatrixSet(doc["matrices"])
        except InvalidMatrix as exc:
            raise ProblemError(f"field 'matrices': {exc}") from None
        if matrices.r != r:
            raise ProblemError(f"field 'matrices': expected {r} matrices, got {matrices.r}")

    omega = None
    if doc.get("omega") is not None:
        try:
            omega = MarkovWords(doc["omega"])
        except (ValueError, TypeError) as exc:
            raise ProblemError(f"field 'omega': {exc}") from None
        if omega.alphabet_size != r:
            raise ProblemError(f"field 'omega': expected a {r}x{r} matrix")
    return Problem(constraint, matrices, omega)


def load_problem(path: str | Path) -> Problem:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ProblemError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_problem(doc)


def problem_to_json(constraint: FrequencyConstraint, matrices=None, omega=None) -> str:
    """Serialize back to the file format; frequencies as exact ``p/q`` strings."""
    doc = {
        "alphabet_size": constraint.r,
        "block_length": constraint.ell,
        "lower": [str(x) for x in constraint.lower],
        "upper": [str(x) for x in constraint.upper],
    }
    if constraint.target is not None:
        doc["target"] = [str(x) for x in constraint.target]
    if matrices is not None:
        stack = matrices.matrices if isinstance(matrices, MatrixSet) else matrices
        doc["matrices"] = [[[float(v) for v in row] for row in m] for m in stack]
    if omega is not None:
        rows = omega.omega if isinstance(omega, MarkovWords) else omega
        doc["omega"] = [[int(v) for v in row] for row in rows]
    return json.dumps(doc, indent=2) + "\n"
