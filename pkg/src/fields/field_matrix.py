"""
Dense linear algebra over prime fields GF(p), backed by galois.
"""

import logging
import random
from functools import lru_cache
from itertools import combinations
from typing import List, Optional, Sequence

import galois
import numpy as np

from src.errors import FieldError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def prime_field(p: int):
    """The galois FieldArray class for GF(p); p must be prime"""
    if p < 2 or not galois.is_prime(p):
        raise FieldError(f"field modulus must be prime, got {p}")
    return galois.GF(p)


def smallest_prime_at_least(x: int) -> int:
    x = max(x, 2)
    return x if galois.is_prime(x) else int(galois.next_prime(x))


class FieldMatrix:
    """Immutable rows x cols matrix over GF(p)"""

    __slots__ = ("p", "_array")

    def __init__(self, p: int, entries):
        field = prime_field(p)
        array = np.array(entries, dtype=np.int64)
        if array.ndim != 2:
            raise FieldError(f"expected a 2-D entry table, got shape {array.shape}")
        array = field(np.mod(array, p))
        array.setflags(write=False)
        self.p = p
        self._array = array

    # ==== CONSTRUCTION ====

    @classmethod
    def from_array(cls, array) -> "FieldMatrix":
        """Wrap a galois FieldArray (2-D) without changing its field"""
        return cls(type(array).characteristic, np.array(array, dtype=np.int64))

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FieldMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "FieldMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def column(cls, p: int, values: Sequence[int]) -> "FieldMatrix":
        return cls(p, np.array(values, dtype=np.int64).reshape(-1, 1))

    @classmethod
    def random(cls, p: int, rows: int, cols: int, rng: random.Random) -> "FieldMatrix":
        return cls(p, [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)])

    @classmethod
    def hstack(cls, blocks: Sequence["FieldMatrix"]) -> "FieldMatrix":
        if not blocks:
            raise FieldError("cannot stack an empty block list")
        _same_field(*blocks)
        rows = {b.rows for b in blocks}
        if len(rows) != 1:
            raise FieldError(f"row counts differ: {sorted(rows)}")
        return cls(blocks[0].p, np.concatenate([b.to_numpy() for b in blocks], axis=1))

    @classmethod
    def block_diagonal(cls, blocks: Sequence["FieldMatrix"]) -> "FieldMatrix":
        p = blocks[0].p
        _same_field(*blocks)
        out = np.zeros((sum(b.rows for b in blocks), sum(b.cols for b in blocks)), dtype=np.int64)
        r = c = 0
        for b in blocks:
            out[r:r + b.rows, c:c + b.cols] = b.to_numpy()
            r += b.rows
            c += b.cols
        return cls(p, out)

    # ==== ACCESS ====

    @property
    def rows(self) -> int:
        return self._array.shape[0]

    @property
    def cols(self) -> int:
        return self._array.shape[1]

    @property
    def shape(self):
        return self._array.shape

    @property
    def field(self):
        return type(self._array)

    @property
    def array(self):
        """Read-only galois view"""
        return self._array

    def to_numpy(self) -> np.ndarray:
        return np.array(self._array, dtype=np.int64)

    def to_lists(self) -> List[List[int]]:
        return self.to_numpy().tolist()

    def columns(self, indices: Sequence[int]) -> "FieldMatrix":
        return FieldMatrix(self.p, self.to_numpy()[:, list(indices)].reshape(self.rows, len(indices)))

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.p, self.to_numpy().T)

    T = property(transpose)

    def is_zero(self) -> bool:
        return not np.any(self.to_numpy())

    # ==== ARITHMETIC ====

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        _same_field(self, other)
        if self.cols != other.rows:
            raise FieldError(f"cannot multiply {self.shape} by {other.shape}")
        if 0 in (self.rows, self.cols, other.cols):
            return FieldMatrix.zeros(self.p, self.rows, other.cols)
        return FieldMatrix.from_array(self._array @ other._array)

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        _same_field(self, other)
        self._same_shape(other)
        return FieldMatrix.from_array(self._array + other._array)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        _same_field(self, other)
        self._same_shape(other)
        return FieldMatrix.from_array(self._array - other._array)

    def __neg__(self) -> "FieldMatrix":
        return FieldMatrix.from_array(-self._array)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and np.array_equal(self.to_numpy(), other.to_numpy())

    def __hash__(self):
        return hash((self.p, self.shape, self.to_numpy().tobytes()))

    def __repr__(self) -> str:
        return f"FieldMatrix(p={self.p}, {self.to_lists()})"

    def _same_shape(self, other: "FieldMatrix"):
        if self.shape != other.shape:
            raise FieldError(f"shape mismatch: {self.shape} vs {other.shape}")

    # ==== LINEAR ALGEBRA ====

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return int(np.linalg.matrix_rank(self._array))

    def rref(self) -> "FieldMatrix":
        if self.rows == 0 or self.cols == 0:
            return self
        return FieldMatrix.from_array(self._array.row_reduce())

    def in_span(self, v: "FieldMatrix") -> bool:
        """True iff column v lies in the column span of self"""
        _same_field(self, v)
        if v.rows != self.rows:
            raise FieldError(f"vector length {v.rows} does not match {self.rows} rows")
        if self.cols == 0:
            return v.is_zero()
        return FieldMatrix.hstack([self, v]).rank() == self.rank()

    def solve(self, b: "FieldMatrix") -> Optional["FieldMatrix"]:
        """Some x with self @ x == b (free variables set to 0), or None"""
        _same_field(self, b)
        if b.rows != self.rows:
            raise FieldError(f"right-hand side has {b.rows} rows, matrix has {self.rows}")
        if self.cols == 0:
            return FieldMatrix.zeros(self.p, 0, b.cols) if b.is_zero() else None
        reduced = FieldMatrix.hstack([self, b]).rref().to_numpy()
        x = np.zeros((self.cols, b.cols), dtype=np.int64)
        for row in reduced:
            nonzero = np.flatnonzero(row)
            if nonzero.size == 0:
                continue
            pivot = int(nonzero[0])
            if pivot >= self.cols:
                return None
            x[pivot] = row[self.cols:]
        return FieldMatrix(self.p, x)

    def is_mds(self) -> bool:
        """Every rows x rows submatrix is nonsingular (exhaustive)"""
        if self.rows > self.cols:
            raise FieldError(f"MDS test needs rows <= cols, got {self.shape}")
        return all(
            self.columns(subset).rank() == self.rows
            for subset in combinations(range(self.cols), self.rows)
        )


def _same_field(*matrices: FieldMatrix):
    primes = {m.p for m in matrices}
    if len(primes) != 1:
        raise FieldError(f"matrices over different fields: {sorted(primes)}")


# ===========================================
# MODULE-LEVEL OPERATIONS
# ===========================================

def power_matrix(rows: int, alphas: Sequence[int], p: int) -> FieldMatrix:
    """Entry (i, c) = alphas[c]^i; columns independent when rows >= len(alphas)"""
    return FieldMatrix(p, [[pow(a, i, p) for a in alphas] for i in range(rows)] or np.zeros((0, len(alphas))))


def vandermonde(n: int, k: int, alphas: Sequence[int], p: int) -> FieldMatrix:
    """k x n generator of an [n, k] MDS code; first row all ones"""
    alphas = [a % p for a in alphas]
    prime_field(p)
    if len(alphas) != n:
        raise FieldError(f"expected {n} evaluation points, got {len(alphas)}")
    if len(set(alphas)) != n:
        raise FieldError(f"evaluation points must be distinct: {alphas}")
    if k > n:
        raise FieldError(f"dimension {k} exceeds length {n}")
    if n > p:
        raise FieldError(f"length {n} exceeds field size {p}")
    return power_matrix(k, alphas, p)


def grs_generator(n: int, k: int, p: int, rng: random.Random) -> FieldMatrix:
    """
    Random generalized Reed-Solomon generator (k x n, MDS).

    Evaluation points are random distinct field elements; when n = p + 1 the
    point at infinity (column e_k) is added. Columns are scaled by random
    nonzero multipliers.
    """
    if k < 1 or k > n:
        raise FieldError(f"need 1 <= k <= n, got k={k}, n={n}")
    if n > p + 1:
        raise FieldError(f"no [{n}, {k}] Reed-Solomon code over GF({p})")
    finite = min(n, p)
    points = rng.sample(range(p), finite)
    base = power_matrix(k, points, p).to_numpy()
    if n == p + 1:
        infinity = np.zeros((k, 1), dtype=np.int64)
        infinity[k - 1, 0] = 1
        base = np.concatenate([base, infinity], axis=1)
    multipliers = np.array([rng.randrange(1, p) for _ in range(n)], dtype=np.int64)
    return FieldMatrix(p, (base * multipliers) % p)


def is_mds(m: FieldMatrix) -> bool:
    return m.is_mds()


def rank(m: FieldMatrix) -> int:
    return m.rank()


def in_span(m: FieldMatrix, v: FieldMatrix) -> bool:
    return m.in_span(v)


def solve(m: FieldMatrix, b: FieldMatrix) -> Optional[FieldMatrix]:
    return m.solve(b)


def rref(m: FieldMatrix) -> FieldMatrix:
    return m.rref()


def serialize_matrix(m: FieldMatrix) -> str:
    """Structured text: 'p P', 'shape R C', then one row per line"""
    lines = [f"p {m.p}", f"shape {m.rows} {m.cols}"]
    lines.extend(" ".join(str(x) for x in row) for row in m.to_lists())
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> FieldMatrix:
    lines = [line.split() for line in text.splitlines() if line.strip()]
    try:
        p = int(lines[0][1])
        rows, cols = int(lines[1][1]), int(lines[1][2])
        body = [[int(x) for x in line] for line in lines[2:2 + rows]]
    except (IndexError, ValueError) as exc:
        raise FieldError(f"malformed matrix text: {exc}") from exc
    if len(body) != rows or any(len(r) != cols for r in body):
        raise FieldError("matrix body does not match its declared shape")
    return FieldMatrix(p, np.array(body, dtype=np.int64).reshape(rows, cols))


def distinct_points(count: int, p: int, rng: random.Random) -> List[int]:
    if count > p:
        raise FieldError(f"GF({p}) has fewer than {count} distinct elements")
    return rng.sample(range(p), count)
