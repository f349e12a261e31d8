"""Multi-index bookkeeping: lengths, factorials, binomials, monomial derivatives."""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from ..errors import DimensionMismatchError

__all__ = ["MultiIndex", "multiindex_calc", "multi_indices", "multi_indices_of_order"]


@dataclass(frozen=True)
class MultiIndex:
    """A tuple of non-negative integer exponents."""

    entries: tuple

    def __post_init__(self):
        ent = tuple(int(e) for e in self.entries)
        if any(e < 0 for e in ent):
            raise ValueError(f"negative entry in multi-index {ent}")
        object.__setattr__(self, "entries", ent)

    @property
    def dim(self):
        return len(self.entries)

    @property
    def length(self):
        """|alpha| = sum of entries."""
        return sum(self.entries)

    @property
    def factorial(self):
        """alpha! = product of entry factorials."""
        out = 1
        for e in self.entries:
            out *= math.factorial(e)
        return out

    def _check_dim(self, other):
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"multi-index dimensions differ: {self.dim} vs {other.dim}",
                expected=self.dim,
                got=other.dim,
            )

    def __le__(self, other):
        self._check_dim(other)
        return all(a <= b for a, b in zip(self.entries, other.entries))

    def __add__(self, other):
        self._check_dim(other)
        return MultiIndex(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        self._check_dim(other)
        if not (other <= self):
            raise ValueError(f"{other.entries} is not componentwise <= {self.entries}")
        return MultiIndex(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def binom(self, beta):
        """binom(alpha, beta) componentwise; beta <= alpha required."""
        self._check_dim(beta)
        if not (beta <= self):
            raise ValueError(f"binom undefined: {beta.entries} not <= {self.entries}")
        out = 1
        for a, b in zip(self.entries, beta.entries):
            out *= math.comb(a, b)
        return out


@dataclass(frozen=True)
class MultiIndexRecord:
    len: int
    factorial: int
    binom: int | None
    monomial_derivative_coeff: int


def multiindex_calc(alpha, beta):
    """Combinatorics for a pair of multi-indices.

    Returns |alpha|, alpha!, binom(alpha, beta) when beta <= alpha (None
    otherwise), and the coefficient of d^alpha applied to the monomial
    xi^beta, i.e. beta!/(beta-alpha)! when alpha <= beta and 0 otherwise.
    """
    if not isinstance(alpha, MultiIndex):
        alpha = MultiIndex(tuple(alpha))
    if not isinstance(beta, MultiIndex):
        beta = MultiIndex(tuple(beta))
    alpha._check_dim(beta)
    b = alpha.binom(beta) if beta <= alpha else None
    if alpha <= beta:
        coeff = beta.factorial // (beta - alpha).factorial
    else:
        coeff = 0
    return MultiIndexRecord(
        len=alpha.length, factorial=alpha.factorial, binom=b, monomial_derivative_coeff=coeff
    )


@lru_cache(maxsize=None)
def multi_indices(dim, order):
    """All exponent tuples with |alpha| <= order, graded, as plain tuples."""
    out = []
    for total in range(order + 1):
        out.extend(multi_indices_of_order(dim, total))
    return tuple(out)


@lru_cache(maxsize=None)
def multi_indices_of_order(dim, total):
    """All exponent tuples with |alpha| == total."""
    if dim == 1:
        return ((total,),)
    out = []
    for head in range(total + 1):
        for tail in multi_indices_of_order(dim - 1, total - head):
            out.append((head,) + tail)
    return tuple(out)


def _mi_factorial(t):
    out = 1
    for e in t:
        out *= math.factorial(e)
    return out
