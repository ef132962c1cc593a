"""Quasi-unipotence, unipotent reduction and Jordan block sizes.

An automorphism has finite polynomial growth exactly when its action on
H^{1,1} is quasi-unipotent.  We certify that by splitting the characteristic
polynomial into cyclotomic factors; the least unipotent power is the lcm of
their orders.  Jordan block sizes of the unipotent part come from the rank
sequence of ``N = F^M - Id``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

from .exact import (
    PreconditionError,
    QPoly,
    RatMatrix,
    char_poly,
    lcm,
    strip_cyclotomic_factors,
)


class NotQuasiUnipotentError(ValueError):
    """Raised when an operation needs a quasi-unipotent action but got none.

    ``witness`` is a monic factor of the characteristic polynomial that is not
    a product of cyclotomic polynomials.
    """

    def __init__(self, witness: QPoly):
        self.witness = witness
        super().__init__(
            f"not quasi-unipotent; Plov = infinity; witness {witness.to_string('x')}"
        )


class SingularActionError(ValueError):
    pass


@dataclass(frozen=True)
class QuasiUnipotence:
    """Outcome of :func:`certify_quasi_unipotent`.

    Exactly one of ``order`` and ``witness`` is set.
    """

    order: int | None
    witness: QPoly | None
    charpoly: QPoly
    cyclotomic_factors: dict[int, int] = field(default_factory=dict)

    @property
    def is_quasi_unipotent(self) -> bool:
        return self.order is not None

    def require(self) -> int:
        if self.order is None:
            raise NotQuasiUnipotentError(self.witness)
        return self.order


@dataclass(frozen=True)
class UnipotentCert:
    order_M: int
    nilpotent_N: RatMatrix
    k: int
    jordan_partition: tuple[int, ...]
    rank_sequence: tuple[int, ...]

    @property
    def k_is_even(self) -> bool:
        return self.k % 2 == 0


def certify_quasi_unipotent(F: RatMatrix) -> QuasiUnipotence:
    if not F.is_square:
        raise PreconditionError("action matrix must be square")
    chi = char_poly(F)
    if chi.coefficient(0) == 0:
        raise SingularActionError("automorphisms act invertibly; matrix is singular")
    factors, rest = strip_cyclotomic_factors(chi)
    if rest.degree != 0:
        return QuasiUnipotence(None, rest, chi, factors)
    order = reduce(lcm, factors, 1)
    return QuasiUnipotence(order, None, chi, factors)


def rank_sequence(N: RatMatrix) -> tuple[int, ...]:
    """rank(N^0), rank(N^1), ... up to and including the first zero."""
    ranks = [N.rows]
    P = RatMatrix.identity(N.rows)
    while ranks[-1] > 0:
        P = P @ N
        r = P.rank()
        if r == ranks[-1]:
            raise PreconditionError("matrix is not nilpotent")
        ranks.append(r)
    return tuple(ranks)


def partition_from_ranks(ranks: tuple[int, ...]) -> tuple[int, ...]:
    # #{blocks of size >= j} = rank(N^{j-1}) - rank(N^j)
    at_least = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]
    sizes = []
    for j, cnt in enumerate(at_least, start=1):
        nxt = at_least[j] if j < len(at_least) else 0
        sizes += [j] * (cnt - nxt)
    return tuple(sorted(sizes, reverse=True))


def jordan_partition(N: RatMatrix) -> tuple[int, ...]:
    """Jordan block sizes of a nilpotent matrix, largest first."""
    return partition_from_ranks(rank_sequence(N))


def unipotent_structure(F: RatMatrix, M: int) -> UnipotentCert:
    G = F ** M
    N = G - RatMatrix.identity(F.rows)
    try:
        ranks = rank_sequence(N)
    except PreconditionError:
        raise PreconditionError(f"F^{M} is not unipotent") from None
    part = partition_from_ranks(ranks)
    return UnipotentCert(
        order_M=M,
        nilpotent_N=N,
        k=len(ranks) - 2,
        jordan_partition=part,
        rank_sequence=ranks,
    )


def unipotent_reduction(F: RatMatrix) -> UnipotentCert:
    """Certify ``F`` and return the structure of its least unipotent power."""
    return unipotent_structure(F, certify_quasi_unipotent(F).require())
