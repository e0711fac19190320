"""JSON input documents and coefficient-table serialization.

Input document schema (all vectors row-major decimal):

    {
      "dimension": 2,
      "basis": [[1.0, 0.0]],                     # one row per generator
      "alpha": [0.5],                            # optional generator phases
      "phase_table": [                           # optional raw character input;
          {"coords": [1], "phase": 0.5}, ...     # validated for additivity
      ],
      "nu": 6.283185307179586,                   # optional, default 2*pi
      "theta": {                                 # for the eval-theta command
          "omega": {"re": [[1.0]], "im": [[1.0]]},
          "alpha": [0.0], "beta": [0.0],         # optional characteristics
          "points": [{"re": [0.0], "im": [0.0]}, ...]
      },
      "basis_eval": {                            # for the eval-basis command
          "indices": [{"gamma_star": [1], "k": [0]}, ...],
          "points": [[0.5, 0.3], ...]
      },
      "bargmann": {                              # for the bargmann command
          "indices": [{"gamma_star": [0], "k": [1]}, ...],
          "points": [{"re": [0.1, 0.0], "im": [0.0, 0.2]}, ...]
      }
    }

When both "alpha" and "phase_table" are present the table is validated
against the phases; a table violating additivity raises ``NotACharacter``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import SpecError
from .lattice import Character, LatticeSpec, character_from_alpha, character_from_phase_table
from .space import DualIndex, FiniteExpansion, SpaceParams


@dataclass(frozen=True)
class InputDocument:
    space: SpaceParams
    raw: dict

    @property
    def theta_section(self) -> dict | None:
        return self.raw.get("theta")

    @property
    def basis_eval_section(self) -> dict | None:
        return self.raw.get("basis_eval")

    @property
    def bargmann_section(self) -> dict | None:
        return self.raw.get("bargmann")


def load_document(source) -> InputDocument:
    """Parse and validate a JSON document from a path, file object or dict."""
    if isinstance(source, dict):
        raw = source
    else:
        text = Path(source).read_text() if isinstance(source, (str, Path)) else source.read()
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"input document is not valid JSON: {exc}") from exc
    if "dimension" not in raw or "basis" not in raw:
        raise SpecError('input document must contain "dimension" and "basis"')
    try:
        dimension = int(raw["dimension"])
        basis_rows = [list(map(float, row)) for row in raw["basis"]]
    except (TypeError, ValueError) as exc:
        raise SpecError(f"malformed dimension or basis: {exc}") from exc
    lattice = LatticeSpec(dimension=dimension, rank=len(basis_rows), basis=np.array(basis_rows).reshape(len(basis_rows), dimension))

    chi = _load_character(lattice, raw)
    nu = float(raw.get("nu", 2.0 * np.pi))
    if nu <= 0:
        raise SpecError(f"nu must be positive, got {nu}")
    return InputDocument(space=SpaceParams.build(lattice, alpha=chi, nu=nu), raw=raw)


def _load_character(lattice: LatticeSpec, raw: dict) -> Character:
    table = raw.get("phase_table")
    alpha = raw.get("alpha")
    if table is not None:
        entries = [(e["coords"], e["phase"]) for e in table]
        chi = character_from_phase_table(lattice, entries)
        if alpha is not None and np.max(np.abs(np.mod(np.asarray(alpha, dtype=float), 1.0) - chi.alpha)) > 1e-9:
            raise SpecError('"alpha" and "phase_table" disagree')
        return chi
    if alpha is not None:
        return character_from_alpha(lattice, alpha)
    return character_from_alpha(lattice, np.zeros(lattice.rank))


def parse_complex_vector(entry: dict, length: int) -> np.ndarray:
    re = np.asarray(entry.get("re", np.zeros(length)), dtype=float).reshape(length)
    im = np.asarray(entry.get("im", np.zeros(length)), dtype=float).reshape(length)
    return re + 1j * im


def parse_indices(entries, rank: int, complement_dim: int) -> list[DualIndex]:
    out = []
    for e in entries:
        gs = tuple(int(v) for v in e.get("gamma_star", ()))
        k = tuple(int(v) for v in e.get("k", ()))
        if len(gs) != rank or len(k) != complement_dim:
            raise SpecError(
                f"index lengths must be rank={rank} and complement={complement_dim}, "
                f"got gamma_star={gs}, k={k}"
            )
        out.append(DualIndex(gs, k))
    return out


def expansion_to_json(expansion: FiniteExpansion) -> list[dict]:
    """Coefficient table as a JSON-ready list of terms."""
    return [
        {"gamma_star_coords": list(idx.gamma_star_coords), "k": list(idx.k), "re": a.real, "im": a.imag}
        for idx, a in expansion.terms
    ]


def expansion_from_json(params: SpaceParams, entries) -> FiniteExpansion:
    terms = []
    for e in entries:
        idx = DualIndex(tuple(e["gamma_star_coords"]), tuple(e["k"]))
        terms.append((idx, complex(float(e.get("re", 0.0)), float(e.get("im", 0.0)))))
    return FiniteExpansion(params=params, terms=tuple(terms))
