"""Random torus automorphisms with a prescribed H^{1,0} Jordan type.

A = T U T^-1 where U is block upper-triangular unipotent (nonzero
superdiagonal inside each block, so the block stays a single Jordan block)
and T is a bounded product of integer elementary matrices, hence in GL(d, Z)
with an integral inverse.
"""

from __future__ import annotations

import random
from typing import Sequence

from .exact import RatMatrix


def random_partition(d: int, rng: random.Random) -> tuple[int, ...]:
    parts = []
    left = d
    while left:
        k = rng.randint(1, left)
        parts.append(k)
        left -= k
    return tuple(sorted(parts, reverse=True))


def random_block_unipotent(partition: Sequence[int], rng: random.Random, spread: int = 2) -> list[list[int]]:
    d = sum(partition)
    U = [[int(i == j) for j in range(d)] for i in range(d)]
    off = 0
    for k in partition:
        for i in range(k):
            for j in range(i + 1, k):
                if j == i + 1:
                    U[off + i][off + j] = rng.choice([v for v in range(-spread, spread + 1) if v])
                else:
                    U[off + i][off + j] = rng.randint(-spread, spread)
        off += k
    return U


def random_unimodular(d: int, rng: random.Random, steps: int = 6) -> tuple[list[list[int]], list[list[int]]]:
    """(T, T^-1) as a product of ``steps`` elementary row operations."""
    T = [[int(i == j) for j in range(d)] for i in range(d)]
    Tinv = [row[:] for row in T]
    if d == 1:
        return T, Tinv
    for _ in range(steps):
        i, j = rng.sample(range(d), 2)
        c = rng.choice([-1, 1])
        # T <- E T with E = I + c e_ij ; T^-1 <- T^-1 E^-1
        T[i] = [a + c * b for a, b in zip(T[i], T[j])]
        for row in Tinv:
            row[j] -= c * row[i]
    return T, Tinv


def random_torus_matrix(d: int, seed: int, partition: Sequence[int] | None = None) -> tuple[RatMatrix, tuple[int, ...]]:
    rng = random.Random(seed)
    part = tuple(partition) if partition is not None else random_partition(d, rng)
    U = RatMatrix(random_block_unipotent(part, rng))
    T, Tinv = random_unimodular(d, rng)
    A = RatMatrix(T) @ U @ RatMatrix(Tinv)
    return A, part
