"""
Closed-form diagnostics: a sufficient field size for the two-level
construction, and the Gilbert-Varshamov code-size estimate for small
alphabets. Neither is used by the builders.
"""

import math
from dataclasses import dataclass

from src.errors import InputError
from src.optimization.cover_programs import Cover


def _binom(n: int, r: int) -> int:
    return math.comb(n, r) if 0 <= r <= n else 0


def field_size_bound(cover: Cover) -> int:
    """
    max over cover sets of sum_{r=1}^{k_j+1} k_j C(n - n_j, m - r) C(n_j, r - 1) + n_j

    m is the cover objective (must be an integer).
    """
    if not cover.sets:
        raise InputError("field size bound of an empty cover")
    if cover.objective.denominator != 1:
        raise InputError(f"field size bound needs an integer objective, got {cover.objective}")
    n, m = cover.n, int(cover.objective)
    best = 0
    for s in cover.sets:
        n_j, k_j = len(s.members), s.k
        total = sum(k_j * _binom(n - n_j, m - r) * _binom(n_j, r - 1) for r in range(1, k_j + 2))
        best = max(best, total + n_j)
    return best


@dataclass(frozen=True)
class GvEstimate:
    """log_q(argument): redundancy of a q-ary length-m code with distance chi_l + 2"""

    m: int
    chi_l: int
    q: int
    argument: int  # sum_{j=0}^{chi_l+1} C(m, j) (q-1)^j

    @property
    def value(self) -> float:
        return math.log(self.argument, self.q)


def gv_code_size(m: int, chi_l: int, q: int) -> GvEstimate:
    if q < 2:
        raise InputError(f"alphabet size must be at least 2, got {q}")
    if chi_l < 0:
        raise InputError(f"local chromatic number must be nonnegative, got {chi_l}")
    if m < chi_l + 2:
        raise InputError(f"code length {m} is shorter than the distance {chi_l + 2}")
    argument = sum(math.comb(m, j) * (q - 1) ** j for j in range(chi_l + 2))
    return GvEstimate(m, chi_l, q, argument)
