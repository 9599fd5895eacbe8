"""
JSON file format for encoding matrices.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from src.codes.encoding_matrix import SCHEMES, EncodingMatrix
from src.errors import IndexCodingError, MatrixFileError
from src.fields.field_matrix import FieldMatrix

logger = logging.getLogger(__name__)


class EncodingMatrixFile(BaseModel):
    """On-disk form of an EncodingMatrix"""

    p: int = Field(..., description="Prime field modulus")
    m_rows: int = Field(..., ge=0, description="Number of broadcast rows")
    ell: int = Field(..., ge=1, description="Symbols per message (columns per vertex)")
    delta: int = Field(1, ge=1, description="Common denominator of the cover weights")
    scheme: str = Field(..., description=f"Provenance tag: one of {', '.join(SCHEMES)}")
    rows: List[List[int]] = Field(..., description="G, row by row")
    assign: Dict[int, List[int]] = Field(..., description="Vertex -> owned column indices")
    functionals: Dict[int, List[List[int]]] = Field(
        default_factory=dict, description="Vertex -> decoding rows (ell x m_rows)"
    )
    seed: Optional[int] = Field(None, description="Seed the matrix was built with")

    @model_validator(mode="after")
    def _shape_matches(self):
        if len(self.rows) != self.m_rows:
            raise ValueError(f"m_rows={self.m_rows} but {len(self.rows)} rows given")
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError("rows have different lengths")
        return self

    @classmethod
    def from_matrix(cls, e: EncodingMatrix) -> "EncodingMatrixFile":
        return cls(
            p=e.p,
            m_rows=e.m_rows,
            ell=e.ell,
            delta=e.delta,
            scheme=e.scheme,
            rows=e.G.to_lists(),
            assign={v: list(cols) for v, cols in e.assign.items()},
            functionals={v: lam.to_lists() for v, lam in e.functionals.items()},
            seed=e.seed,
        )

    def to_matrix(self) -> EncodingMatrix:
        cols = sum(len(c) for c in self.assign.values())
        entries = np.array(self.rows, dtype=np.int64).reshape(self.m_rows, cols)
        G = FieldMatrix(self.p, entries)
        functionals = {
            v: FieldMatrix(self.p, np.array(rows, dtype=np.int64).reshape(self.ell, self.m_rows))
            for v, rows in self.functionals.items()
        }
        return EncodingMatrix(
            self.p,
            G,
            {v: tuple(c) for v, c in self.assign.items()},
            self.ell,
            self.delta,
            self.scheme,
            functionals,
            self.seed,
        )


def dumps_matrix(e: EncodingMatrix) -> str:
    return EncodingMatrixFile.from_matrix(e).model_dump_json(indent=2)


def loads_matrix(text: str) -> EncodingMatrix:
    try:
        return EncodingMatrixFile.model_validate_json(text).to_matrix()
    except ValidationError as exc:
        raise MatrixFileError(f"invalid matrix file: {exc.error_count()} validation error(s)\n{exc}") from exc
    except ValueError as exc:  # reshape failures and FieldError
        raise MatrixFileError(f"inconsistent matrix file: {exc}") from exc
    except IndexCodingError as exc:
        raise MatrixFileError(f"inconsistent matrix file: {exc}") from exc


def save_matrix(e: EncodingMatrix, path) -> Path:
    path = Path(path)
    path.write_text(dumps_matrix(e), encoding="utf-8")
    logger.info("wrote %s matrix (%dx%d over GF(%d)) to %s", e.scheme, e.m_rows, e.G.cols, e.p, path)
    return path


def load_matrix(path) -> EncodingMatrix:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixFileError(f"cannot read matrix file {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise MatrixFileError(f"{path} is not UTF-8 text: {exc.reason}") from exc
    try:
        json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"{path} is not JSON: {exc.msg} (line {exc.lineno})") from exc
    return loads_matrix(text)
