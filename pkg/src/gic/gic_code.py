"""
Index code for (k, n)-GIC structures.

The inner vertices share one transmission w_I = sum_i v_i x_i built from the
columns v_i of an [n, k+1] MDS generator. Every non-inner vertex j sends

    w_j = sum_{l in N(j)} u_l (x_j + x_l)     when |N(j)| >= k + 1
    w_j = (x_j + x_l for l in N(j))           otherwise

where the u vectors come from sink-first propagation u_j = -sum_{l in N(j)} u_l.
All u vectors live in F_q^(k+1). Message blocks are 1 x width rows.
"""

import logging
import random
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional

import numpy as np

from config import Config
from src.errors import FieldError, GicDecodeError, GicStructureError, InputError
from src.fields.field_matrix import FieldMatrix, grs_generator
from src.gic.structure import GicStructure, require_valid

logger = logging.getLogger(__name__)


@dataclass
class GicCode:
    structure: GicStructure
    q: int
    mds: FieldMatrix  # (k+1) x n, column c belongs to structure.inner[c]
    u: Dict[int, FieldMatrix]  # vertex -> (k+1) x 1

    @property
    def dim(self) -> int:
        return self.structure.k + 1

    def uses_combined(self, v: int) -> bool:
        """Non-inner v sends the (k+1)-symbol combination"""
        return len(self.structure.graph.neighbors(v)) >= self.dim


@dataclass
class Transmissions:
    inner: FieldMatrix  # (k+1) x width
    non_inner: Dict[int, FieldMatrix]  # vertex -> min(|N|, k+1) x width

    @property
    def count(self) -> int:
        """Broadcast symbols per unit of payload width"""
        return self.inner.rows + sum(w.rows for w in self.non_inner.values())


def expected_count(s: GicStructure) -> int:
    return (s.k + 1) + sum(min(len(s.graph.neighbors(v)), s.k + 1) for v in s.non_inner)


# ===========================================
# VECTOR ASSIGNMENT
# ===========================================

def assign_vectors(s: GicStructure, mds: FieldMatrix) -> Dict[int, FieldMatrix]:
    """Inner vertices take their MDS column; non-inner vertices are filled sink-first"""
    if mds.shape != (s.k + 1, s.n):
        raise FieldError(f"expected a {(s.k + 1, s.n)} generator, got {mds.shape}")
    u = {v: mds.columns([c]) for c, v in enumerate(s.inner)}
    pending = set(s.non_inner)
    while pending:
        ready = [v for v in sorted(pending) if not (s.graph.neighbors(v) & pending)]
        if not ready:
            raise GicStructureError(f"no sink-first order for non-inner vertices {sorted(pending)}")
        v = ready[0]
        total = FieldMatrix.zeros(mds.p, s.k + 1, 1)
        for l in sorted(s.graph.neighbors(v)):
            total = total + u[l]
        u[v] = -total
        pending.discard(v)
    return u


def build_gic_code(s: GicStructure, q: int, seed: Optional[int] = None) -> GicCode:
    """
    Draw GRS generators over GF(q) until every vertex using the combined
    transmission has a nonzero u vector (its decoding coefficient).
    """
    require_valid(s)
    if s.n > q + 1:
        raise FieldError(f"no [{s.n}, {s.k + 1}] MDS code over GF({q})")
    rng = random.Random(Config.DEFAULT_SEED if seed is None else seed)
    combined = [v for v in s.non_inner if len(s.graph.neighbors(v)) >= s.k + 1]
    for attempt in range(Config.ALPHA_RETRIES):
        mds = grs_generator(s.n, s.k + 1, q, rng)
        u = assign_vectors(s, mds)
        zero = [v for v in combined if u[v].is_zero()]
        if not zero:
            logger.debug("GIC code over GF(%d) after %d redraws", q, attempt)
            return GicCode(s, q, mds, u)
        logger.debug("u vectors vanish at %s; redrawing", zero)
    raise GicStructureError(
        f"no GRS generator over GF({q}) gave nonzero decoding coefficients in {Config.ALPHA_RETRIES} draws"
    )


# ===========================================
# ENCODE / DECODE
# ===========================================

def _row(code: GicCode, value, v: int) -> FieldMatrix:
    block = np.atleast_1d(np.array(value.to_numpy() if isinstance(value, FieldMatrix) else value, dtype=np.int64))
    if block.ndim == 2 and block.shape[0] == 1:
        block = block[0]
    if block.ndim != 1:
        raise InputError(f"message of vertex {v} must be a scalar or a 1-D row, got shape {block.shape}")
    return FieldMatrix(code.q, block.reshape(1, -1))


def gic_encode(code: GicCode, data: Mapping[int, object]) -> Transmissions:
    s = code.structure
    missing = [v for v in range(s.graph.n) if v not in data]
    if missing:
        raise InputError(f"no data for vertices {missing}")
    x = {v: _row(code, data[v], v) for v in range(s.graph.n)}
    widths = {r.cols for r in x.values()}
    if len(widths) != 1:
        raise InputError(f"messages have different widths: {sorted(widths)}")
    width = widths.pop()

    w_inner = FieldMatrix.zeros(code.q, code.dim, width)
    for v in s.inner:
        w_inner = w_inner + code.u[v] @ x[v]

    non_inner = {}
    for v in s.non_inner:
        nbrs = sorted(s.graph.neighbors(v))
        if code.uses_combined(v):
            w = FieldMatrix.zeros(code.q, code.dim, width)
            for l in nbrs:
                w = w + code.u[l] @ (x[v] + x[l])
        else:
            w = FieldMatrix(code.q, np.vstack([(x[v] + x[l]).to_numpy() for l in nbrs])
                            if nbrs else np.zeros((0, width), dtype=np.int64))
        non_inner[v] = w
    return Transmissions(w_inner, non_inner)


def _lifted(code: GicCode, tx: Transmissions, l: int) -> FieldMatrix:
    """w'_l = sum_{c in N(l)} u_c (x_l + x_c) for either transmission form"""
    if code.uses_combined(l):
        return tx.non_inner[l]
    nbrs = sorted(code.structure.graph.neighbors(l))
    stacked = FieldMatrix.hstack([code.u[c] for c in nbrs])
    return stacked @ tx.non_inner[l]


def _check_side(code: GicCode, v: int, side: Mapping[int, object]) -> Dict[int, FieldMatrix]:
    nbrs = code.structure.graph.neighbors(v)
    missing = sorted(u for u in nbrs if u not in side)
    if missing:
        raise InputError(f"vertex {v} lacks side information for {missing}")
    return {u: _row(code, side[u], u) for u in nbrs}


def gic_decode(code: GicCode, v: int, tx: Transmissions, side: Mapping[int, object]) -> FieldMatrix:
    """x_v (1 x width) from the transmissions and the messages of N(v, D_n)"""
    s = code.structure
    if not 0 <= v < s.graph.n:
        raise InputError(f"vertex {v} outside [0, {s.graph.n})")
    known = _check_side(code, v, side)
    if s.is_inner(v):
        return _decode_inner(code, v, tx, known)

    nbrs = sorted(s.graph.neighbors(v))
    if not nbrs:
        raise GicDecodeError(f"non-inner vertex {v} has no out-neighbors")
    w = tx.non_inner[v]
    if not code.uses_combined(v):
        return FieldMatrix(code.q, w.to_numpy()[:1]) - known[nbrs[0]]

    # w_v = -u_v x_v + sum_l u_l x_l
    rest = w
    for l in nbrs:
        rest = rest - code.u[l] @ known[l]
    coeff = -code.u[v]
    solution = coeff.solve(rest)
    if solution is None or coeff.is_zero():
        raise GicDecodeError(f"vertex {v} has a zero decoding coefficient")
    return solution


def _decode_inner(code: GicCode, v: int, tx: Transmissions, known: Dict[int, FieldMatrix]) -> FieldMatrix:
    s = code.structure
    tree = s.trees[v]
    for l in tree:
        if not s.is_inner(l) and s.graph.neighbors(l) != frozenset(s.children(v, l)):
            raise GicDecodeError(f"out-neighbors of {l} differ from its children in T_{v}")

    residual = tx.inner
    for l in sorted(tree):
        if not s.is_inner(l):
            residual = residual - _lifted(code, tx, l)
    for c in s.children(v, v):
        residual = residual - code.u[c] @ known[c]

    leaves = set(s.inner_leaves(v))
    unknown = [v] + [i for i in s.inner if i != v and i not in leaves]
    if len(unknown) > code.dim:
        raise GicDecodeError(f"{len(unknown)} unknown inner terms exceed dimension {code.dim}")
    system = FieldMatrix.hstack([code.u[i] for i in unknown])
    if system.rank() < len(unknown):
        raise GicDecodeError(f"residual system at vertex {v} is singular")
    solution = system.solve(residual)
    if solution is None:
        raise GicDecodeError(f"residual at vertex {v} is inconsistent")
    return FieldMatrix(code.q, solution.to_numpy()[:1])


def gic_round_trip(code: GicCode, data: Mapping[int, object]) -> List[int]:
    """Vertices whose decoded message differs from the original"""
    tx = gic_encode(code, data)
    s = code.structure
    wrong = []
    for v in range(s.graph.n):
        side = {u: data[u] for u in s.graph.neighbors(v)}
        if gic_decode(code, v, tx, side) != _row(code, data[v], v):
            wrong.append(v)
    return wrong
