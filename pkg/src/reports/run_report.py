"""
Run reports for the command-line workbench.
Rationals are serialized as "p/q" strings, integers as "p".
"""

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class CoverSetModel(BaseModel):
    """One selected set of a cover"""

    members: List[int] = Field(..., description="Vertex indices, sorted")
    k: int = Field(..., description="Partial-clique degree of the set")
    weight: str = Field(..., description="rho_S as an exact rational")
    cap: str = Field(..., description="Per-vertex coefficient ceiling")


class SchemeResult(BaseModel):
    """Optimum of one covering program"""

    scheme: str = Field(..., description="Program name")
    relaxed: bool = Field(..., description="LP relaxation (weights in [0, 1])")
    optimum: str = Field(..., description="Optimal value as an exact rational")
    sets: List[CoverSetModel] = Field(default_factory=list, description="Selected sets")
    subproblems: Optional[int] = Field(None, description="Memoized subproblems (recursive programs)")


class VertexCheck(BaseModel):
    vertex: int = Field(..., description="Vertex index")
    ok: bool = Field(..., description="Alignment holds / decoding succeeded")
    failing_columns: List[int] = Field(default_factory=list, description="Owned columns inside the interference span")


class VerificationSummary(BaseModel):
    """Alignment check of an encoding matrix against a graph"""

    passed: bool = Field(..., description="Every vertex can decode")
    scheme: str = Field(..., description="Matrix provenance tag")
    p: int = Field(..., description="Field modulus")
    m_rows: int = Field(..., description="Broadcast rows")
    ell: int = Field(..., description="Symbols per message")
    rate: str = Field(..., description="m_rows / ell as an exact rational")
    rank: int = Field(..., description="Rank of G")
    vertices: List[VertexCheck] = Field(default_factory=list, description="Per-vertex outcomes")


class SimulationSummary(BaseModel):
    """Random-data encode/decode trials"""

    trials: int = Field(..., description="Number of trials")
    passed: int = Field(..., description="Trials where every vertex decoded exactly")
    width: int = Field(1, description="Payload columns per message block")
    seed: int = Field(..., description="Data RNG seed")
    failures: Dict[str, List[int]] = Field(default_factory=dict, description="Trial index -> wrong vertices")


class OracleSummary(BaseModel):
    """Brute-force reference value"""

    oracle: str = Field(..., description="Oracle name")
    value: str = Field(..., description="Optimal value as an exact rational")
    witness: Any = Field(None, description="Matrix, partition or vertex set achieving the value")
    enumerated: int = Field(0, description="Objects examined")


class GicSummary(BaseModel):
    """GIC structure check, code and round trip"""

    valid: bool = Field(..., description="Structure passes every condition")
    n: int = Field(..., description="Inner vertices")
    k: int = Field(..., description="Slack parameter")
    vertices: int = Field(..., description="Vertices of D_n")
    violations: List[Dict[str, Any]] = Field(default_factory=list, description="Violated conditions with witnesses")
    subtree_coincidence: Optional[bool] = Field(None, description="Shared subtrees agree across trees")
    q: Optional[int] = Field(None, description="Field size of the code")
    vectors: Dict[str, List[int]] = Field(default_factory=dict, description="Vertex -> u vector")
    transmissions: Optional[int] = Field(None, description="Broadcast symbols")
    expected_transmissions: Optional[int] = Field(None, description="(k+1) + sum min(|N|, k+1)")
    trials: Optional[int] = Field(None, description="Round-trip trials")
    passed: Optional[int] = Field(None, description="Round-trip trials decoded at every vertex")


class RunReport(BaseModel):
    """Everything one CLI invocation produced"""

    command: str = Field(..., description="CLI command")
    input_file: Optional[str] = Field(None, description="Primary input path")
    input_digest: Optional[str] = Field(None, description="SHA-256 of the input file bytes")
    n: Optional[int] = Field(None, description="Vertex count of the input graph")
    seed: Optional[int] = Field(None, description="Seed used for randomized steps")
    schemes: List[SchemeResult] = Field(default_factory=list, description="Program optima")
    artifacts: Dict[str, str] = Field(default_factory=dict, description="Written files")
    verification: Optional[VerificationSummary] = Field(None, description="Alignment check")
    simulation: Optional[SimulationSummary] = Field(None, description="Encode/decode trials")
    oracles: List[OracleSummary] = Field(default_factory=list, description="Brute-force values")
    gic: Optional[GicSummary] = Field(None, description="GIC results")
    success: bool = Field(True, description="Command outcome")
    timestamp: str = Field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(), description="Report creation time"
    )
    timing_seconds: Optional[float] = Field(None, description="Wall-clock time of the command")

    def machine_readable(self) -> str:
        """Deterministic JSON: sorted keys, no timing fields"""
        data = self.model_dump(mode="json", exclude={"timing_seconds", "timestamp"})
        return json.dumps(data, sort_keys=True, indent=2)

    def save(self, path) -> Path:
        path = Path(path)
        path.write_text(self.machine_readable() + "\n", encoding="utf-8")
        return path


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
