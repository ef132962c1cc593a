"""Intersection models: a rational stand-in for H^{1,1} with its top product.

A model is a coordinate space V of dimension h, a symmetric d-linear form I
on V and a distinguished class omega with I(omega, ..., omega) > 0.  Four
kinds are provided:

* :class:`TorusModel` for E^d, evaluated by wedge accumulation over pairs of
  index subsets (never by expanding h**d tuples);
* :class:`FujikiModel` for hyper-Kaehler type forms I(x^{2m}) = c q(x)^m;
* :class:`ProductModel` for V1 + V2 carrying the product form;
* :class:`SparseModel` for file-defined tensors.

Every model evaluates I incrementally: ``start()`` gives an empty state,
``extend(state, c)`` multiplies in one class, ``finish(state)`` reads off the
number once d classes have been used.  The growth engine relies on this to
share work between multisets with a common prefix.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb, factorial
from typing import Sequence

from .exact import (
    DimensionError,
    PreconditionError,
    RatMatrix,
    to_rational,
)
from .spectral import (
    QuasiUnipotence,
    UnipotentCert,
    certify_quasi_unipotent,
    unipotent_structure,
)

ClassVec = tuple  # tuple of Fractions, length h


class ModelError(ValueError):
    """A model or automorphism failed a structural requirement."""


def as_class(coords: Sequence, h: int | None = None) -> ClassVec:
    v = tuple(to_rational(x) for x in coords)
    if h is not None and len(v) != h:
        raise DimensionError(f"class has {len(v)} coordinates, model has h={h}")
    return v


def basis_vector(h: int, i: int) -> ClassVec:
    z, one = Fraction(0), Fraction(1)
    return tuple(one if t == i else z for t in range(h))


def _popcount_above(mask: int, i: int) -> int:
    return bin(mask >> (i + 1)).count("1")


class IntersectionModel:
    """Base class; subclasses override evaluation and may override the state protocol."""

    kind = "abstract"

    def __init__(self, d: int, labels: Sequence[str], omega: Sequence, geometric: bool):
        if d < 1:
            raise ModelError("complex dimension must be positive")
        self.d = d
        self.labels = tuple(labels)
        self.h = len(self.labels)
        self.omega = as_class(omega, self.h)
        self.geometric = geometric

    # -- evaluation protocol ------------------------------------------------

    def start(self):
        return ()

    def extend(self, state, c: ClassVec):
        return state + (c,)

    def finish(self, state) -> Fraction:
        return self._eval_full(state)

    def _eval_full(self, classes) -> Fraction:
        raise NotImplementedError

    def eval_I(self, classes: Sequence[Sequence]) -> Fraction:
        if len(classes) != self.d:
            raise DimensionError(f"I takes exactly d={self.d} classes, got {len(classes)}")
        state = self.start()
        for c in classes:
            state = self.extend(state, as_class(c, self.h))
        return self.finish(state)

    def volume(self, c: Sequence | None = None) -> Fraction:
        c = self.omega if c is None else as_class(c, self.h)
        return self.eval_I([c] * self.d)

    # -- numerical equivalence ----------------------------------------------

    def product_coords(self, classes: Sequence[ClassVec]) -> dict:
        """Coordinates of the product of ``classes`` modulo numerical triviality.

        The default pairs the product with every multiset of basis classes of
        complementary size; the product is numerically trivial exactly when
        all returned values vanish.  Zero entries are dropped.
        """
        m = len(classes)
        if m > self.d:
            return {}
        state = self.start()
        for c in classes:
            state = self.extend(state, c)
        basis = [basis_vector(self.h, i) for i in range(self.h)]
        out = {}
        for gamma in itertools.combinations_with_replacement(range(self.h), self.d - m):
            st = state
            for g in gamma:
                st = self.extend(st, basis[g])
            val = self.finish(st)
            if val:
                out[gamma] = val
        return out

    def is_numerically_trivial(self, classes: Sequence[ClassVec]) -> bool:
        return not self.product_coords(classes)

    def basis_multisets(self, size: int | None = None):
        return itertools.combinations_with_replacement(range(self.h), self.d if size is None else size)

    def eval_basis(self, idx: Sequence[int]) -> Fraction:
        return self.eval_I([basis_vector(self.h, i) for i in idx])

    def __repr__(self):
        return f"{type(self).__name__}(d={self.d}, h={self.h})"


class TorusModel(IntersectionModel):
    """H^{1,1} of a d-dimensional complex torus with basis b_ij = e_i ^ conj(e_j).

    I(b_{i1 j1}, ..., b_{id jd}) = sgn(sigma) sgn(tau) when (i_l) = sigma and
    (j_l) = tau are permutations, else 0.  This fixes I(omega^d) = d! for
    omega = sum b_ii; the reordering sign (-1)^{d(d-1)/2} and the powers of
    sqrt(-1) are absorbed into that normalization.  Index of b_ij is i*d + j.
    """

    kind = "torus"

    def __init__(self, d: int, omega: Sequence | None = None):
        labels = [f"b{i + 1},{j + 1}" for i in range(d) for j in range(d)]
        if omega is None:
            omega = [Fraction(int(i == j)) for i in range(d) for j in range(d)]
        super().__init__(d, labels, omega, geometric=True)
        self._full = (1 << d) - 1

    def coefficient_matrix(self, c: Sequence) -> RatMatrix:
        d = self.d
        return RatMatrix([[c[i * d + j] for j in range(d)] for i in range(d)])

    def start(self):
        return {(0, 0): Fraction(1)}

    def extend(self, state, c):
        d = self.d
        entries = [(a // d, a % d, x) for a, x in enumerate(c) if x]
        new: dict = {}
        for (S, T), v in state.items():
            for i, j, x in entries:
                bi, bj = 1 << i, 1 << j
                if S & bi or T & bj:
                    continue
                s = _popcount_above(S, i) + _popcount_above(T, j)
                key = (S | bi, T | bj)
                term = v * x
                new[key] = new.get(key, 0) + (-term if s & 1 else term)
        return {k: v for k, v in new.items() if v}

    def finish(self, state) -> Fraction:
        return Fraction(state.get((self._full, self._full), 0))

    def _eval_full(self, classes):
        st = self.start()
        for c in classes:
            st = self.extend(st, c)
        return self.finish(st)

    def product_coords(self, classes):
        # Products of (1,1)-classes span every H^{m,m} of a torus, and the top
        # pairing is perfect, so the wedge state itself is a faithful
        # coordinate vector modulo numerical triviality.
        if len(classes) > self.d:
            return {}
        st = self.start()
        for c in classes:
            st = self.extend(st, c)
        return st

    def to_sparse(self) -> "SparseModel":
        """Export the same form as an explicit symmetric tensor (small d only)."""
        d = self.d
        tensor: dict = {}
        for sigma in itertools.permutations(range(d)):
            for tau in itertools.permutations(range(d)):
                idx = tuple(sorted(sigma[t] * d + tau[t] for t in range(d)))
                if idx in tensor:
                    continue
                tensor[idx] = self.eval_basis(idx)
        return SparseModel(d, self.labels, tensor, self.omega, geometric=True)


class SparseModel(IntersectionModel):
    """Form given by its values on sorted d-multisets of basis indices."""

    kind = "sparse"

    def __init__(self, d, labels, tensor: dict, omega, geometric: bool = False):
        super().__init__(d, labels, omega, geometric)
        clean = {}
        for idx, val in tensor.items():
            idx = tuple(idx)
            if len(idx) != d or list(idx) != sorted(idx):
                raise ModelError(f"tensor index {idx} must be a sorted {d}-multiset")
            if any(not 0 <= i < self.h for i in idx):
                raise ModelError(f"tensor index {idx} out of range for h={self.h}")
            val = to_rational(val)
            if val:
                clean[idx] = val
        self.tensor = clean

    def start(self):
        return dict(self.tensor)

    def extend(self, state, c):
        # T'(rest) = sum_i c_i T(rest + {i})
        new: dict = {}
        for key, v in state.items():
            prev = None
            for pos, i in enumerate(key):
                if i == prev or not c[i]:
                    prev = i
                    continue
                prev = i
                rest = key[:pos] + key[pos + 1:]
                new[rest] = new.get(rest, 0) + c[i] * v
        return {k: v for k, v in new.items() if v}

    def finish(self, state):
        return Fraction(state.get((), 0))

    def _eval_full(self, classes):
        st = self.start()
        for c in classes:
            st = self.extend(st, c)
        return self.finish(st)

    def product_coords(self, classes):
        # the contracted tensor's entries are exactly the basis pairings
        if len(classes) > self.d:
            return {}
        st = self.start()
        for c in classes:
            st = self.extend(st, c)
        return st


def _perfect_pairings(items: tuple):
    if not items:
        yield ()
        return
    a = items[0]
    for t in range(1, len(items)):
        rest = items[1:t] + items[t + 1:]
        for p in _perfect_pairings(rest):
            yield ((a, items[t]),) + p


def symmetric_inertia(m: RatMatrix) -> tuple[int, int, int]:
    """(positive, negative, zero) counts by exact congruence diagonalization."""
    if not m.is_square:
        raise DimensionError("inertia of a non-square matrix")
    a = m.tolist()
    n = len(a)
    for i in range(n):
        for j in range(n):
            if a[i][j] != a[j][i]:
                raise PreconditionError("matrix is not symmetric")
    pos = neg = 0
    idx = list(range(n))
    while idx:
        p = next((i for i in idx if a[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in idx for j in idx if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # e_i -> e_i + e_j makes the (i, i) entry 2 a_ij
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            p = i
        piv = a[p][p]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        idx.remove(p)
        for r in idx:
            f = a[r][p] / piv
            if f:
                for s in idx:
                    a[r][s] -= f * a[p][s]
    return pos, neg, n - pos - neg


class FujikiModel(IntersectionModel):
    """Form on H^{1,1} of a hyper-Kaehler manifold of dimension 2m.

    I is the symmetric 2m-linear form with I(x, ..., x) = c q(x, x)^m:
    I(x_1..x_2m) = c * 2^m m! / (2m)! * sum over perfect pairings of the
    product of q over the pairs.  There are (2m)!/(2^m m!) pairings, which
    is where the normalization comes from.
    """

    kind = "fujiki"

    def __init__(self, q: RatMatrix, c, half_dim: int, omega, labels=None):
        if not q.is_square:
            raise ModelError("q must be square")
        h = q.rows
        if q != q.T:
            raise ModelError("q must be symmetric")
        c = to_rational(c)
        if c <= 0:
            raise ModelError("Fujiki constant must be positive")
        pos, neg, zero = symmetric_inertia(q)
        if (pos, neg, zero) != (1, h - 1, 0):
            raise ModelError(f"q must have signature (1, {h - 1}); got ({pos}, {neg}) with {zero} null")
        labels = labels or [f"x{i + 1}" for i in range(h)]
        super().__init__(2 * half_dim, labels, omega, geometric=True)
        self.q = q
        self.c = c
        self.half_dim = half_dim
        if self.qform(self.omega, self.omega) <= 0:
            raise ModelError("q(omega, omega) must be positive")
        self._norm = c * Fraction(2 ** half_dim * factorial(half_dim), factorial(2 * half_dim))

    def qform(self, x, y) -> Fraction:
        qy = self.q.apply(y)
        return sum((a * b for a, b in zip(x, qy)), Fraction(0))

    def _eval_full(self, classes):
        m = len(classes)
        gram = [[None] * m for _ in range(m)]
        total = Fraction(0)
        for pairing in _perfect_pairings(tuple(range(m))):
            prod = Fraction(1)
            for a, b in pairing:
                if gram[a][b] is None:
                    gram[a][b] = self.qform(classes[a], classes[b])
                prod *= gram[a][b]
                if not prod:
                    break
            total += prod
        return self._norm * total


class ProductModel(IntersectionModel):
    """Product form on the carrier V1 + V2 (Kuenneth cross terms omitted).

    I(g_1..g_d) = sum over d1-subsets S of I1(p1 g_S) * I2(p2 g_rest).
    The carrier contains the orbit of omega1 + omega2, which is all that
    growth needs; it is too small to read off k of the product, so such
    queries are refused.
    """

    kind = "product"
    supports_k = False

    def __init__(self, m1: IntersectionModel, m2: IntersectionModel):
        labels = [f"1:{l}" for l in m1.labels] + [f"2:{l}" for l in m2.labels]
        super().__init__(
            m1.d + m2.d,
            labels,
            m1.omega + m2.omega,
            geometric=m1.geometric and m2.geometric,
        )
        self.first = m1
        self.second = m2

    def _eval_full(self, classes):
        h1 = self.first.h
        d1 = self.first.d
        total = Fraction(0)
        idx = range(len(classes))
        for S in itertools.combinations(idx, d1):
            left = [classes[i][:h1] for i in S]
            right = [classes[i][h1:] for i in idx if i not in S]
            a = self.first.eval_I(left)
            if a:
                total += a * self.second.eval_I(right)
        return total


# --- automorphisms -----------------------------------------------------------


class AutoAction:
    """Matrix of f* on the model's V (coordinates, columns are images).

    For tori ``h10`` keeps the action on H^{1,0}.
    """

    def __init__(self, F: RatMatrix, h10: RatMatrix | None = None, name: str = ""):
        if not F.is_square:
            raise ModelError("automorphism matrix must be square")
        self.F = F
        self.h10 = h10
        self.name = name

    @cached_property
    def quasi(self) -> QuasiUnipotence:
        return certify_quasi_unipotent(self.F)

    @cached_property
    def cert(self) -> UnipotentCert:
        return unipotent_structure(self.F, self.quasi.require())

    @property
    def order(self) -> int:
        return self.quasi.require()

    @cached_property
    def unipotent(self) -> RatMatrix:
        return self.F ** self.order

    @cached_property
    def inverse(self) -> "AutoAction":
        h10 = self.h10.inverse() if self.h10 is not None else None
        return AutoAction(self.F.inverse(), h10, name=f"{self.name}^-1" if self.name else "")

    def power(self, e: int) -> "AutoAction":
        h10 = self.h10 ** e if self.h10 is not None else None
        return AutoAction(self.F ** e, h10, name=f"{self.name}^{e}" if self.name else "")

    def h10_partition(self) -> tuple[int, ...]:
        """Jordan block sizes of the unipotent part of the H^{1,0} action."""
        if self.h10 is None:
            raise ModelError("no H^{1,0} action recorded")
        from .spectral import unipotent_reduction

        return unipotent_reduction(self.h10).jordan_partition

    def __repr__(self):
        return f"AutoAction({self.name or 'F'}, h={self.F.rows})"


# --- builders --------------------------------------------------------------


def _as_matrix(m) -> RatMatrix:
    return m if isinstance(m, RatMatrix) else RatMatrix(m)


def build_torus(A, omega: Sequence | None = None) -> tuple[TorusModel, AutoAction]:
    """Torus model of E^d and the action induced by an integer matrix A on H^{1,0}.

    Row p of A holds the image of dz_p: f* dz_p = sum_i A[p][i] dz_i.  Then
    f* b_pq = sum_ij A[p][i] A[q][j] b_ij, i.e. F = kron(A^T, A^T).
    """
    A = _as_matrix(A)
    if not A.is_square:
        raise ModelError("H^{1,0} matrix must be square")
    if not A.is_integral():
        raise ModelError("H^{1,0} matrix must have integer entries")
    det = A.det()
    if abs(det) != 1:
        raise ModelError(f"|det A| must be 1 for a torus automorphism, got {det}")
    model = TorusModel(A.rows, omega)
    F = A.T.kron(A.T)
    return model, AutoAction(F, h10=A, name="torus")


def jordan_block(size: int) -> list[list[int]]:
    """Lower bidiagonal unipotent block: f* dz_j = dz_j + dz_{j-1}."""
    return [[int(i == j or j == i - 1) for j in range(size)] for i in range(size)]


def block_diagonal(blocks: Sequence[Sequence[Sequence[int]]]) -> list[list[int]]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def jordan_torus(partition: Sequence[int]) -> tuple[TorusModel, AutoAction]:
    return build_torus(block_diagonal([jordan_block(k) for k in partition]))


def trinomial(q: int, i: int, j: int) -> int:
    return factorial(q) // (factorial(i) * factorial(j) * factorial(q - i - j))


def pascal_prediction(d: int, q: int) -> ClassVec:
    """sum_{i+j<=q} (q; i, j, q-i-j) b_{(d-q+i)(d-q+j)}, out-of-range terms dropped."""
    v = [Fraction(0)] * (d * d)
    for i in range(q + 1):
        for j in range(q + 1 - i):
            r, s = d - q + i, d - q + j
            if 1 <= r <= d and 1 <= s <= d:
                v[(r - 1) * d + (s - 1)] += trinomial(q, i, j)
    return tuple(v)


def pascal_check(model: TorusModel, auto: AutoAction, q: int) -> bool:
    """Compare N^q(b_dd) with the trinomial pyramid; A must be a single Jordan block."""
    d = model.d
    N = auto.F - RatMatrix.identity(model.h)
    v = basis_vector(model.h, d * d - 1)
    for _ in range(q):
        v = N.apply(v)
    return v == pascal_prediction(d, q)


def build_product(m1, a1, m2, a2) -> tuple[ProductModel, AutoAction]:
    model = ProductModel(m1, m2)
    return model, AutoAction(RatMatrix.block_diag(a1.F, a2.F), name=f"({a1.name})x({a2.name})")


def build_fujiki(q, c, half_dim: int, omega) -> FujikiModel:
    return FujikiModel(_as_matrix(q), c, half_dim, omega)


# --- validation --------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    witness: object = None


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def _multisets_to_check(model, max_tuples, rng):
    total = comb(model.h + model.d - 1, model.d)
    if total <= max_tuples:
        return list(model.basis_multisets()), True
    picks = set()
    while len(picks) < max_tuples:
        picks.add(tuple(sorted(rng.randrange(model.h) for _ in range(model.d))))
    return sorted(picks), False


def validate(model: IntersectionModel, auto: AutoAction, max_tuples: int = 20000, seed: int = 0) -> ValidationReport:
    """Structural checks only; quasi-unipotence is not examined here.

    Preservation of I by F is checked on every basis d-multiset when there
    are at most ``max_tuples`` of them, otherwise on a seeded sample (the
    report says which).
    """
    rng = random.Random(seed)
    rep = ValidationReport()
    if auto.F.rows != model.h:
        rep.checks.append(Check("dimensions", False, f"F is {auto.F.rows}x{auto.F.cols}, h={model.h}"))
        return rep

    if model.kind in ("torus", "fujiki", "product"):
        ok, witness = True, None
        sample = list(itertools.islice(model.basis_multisets(), 0, None, max(1, comb(model.h + model.d - 1, model.d) // 200)))
        extra = [tuple(rng.randrange(model.h) for _ in range(model.d)) for _ in range(20)]
        for idx in sample + extra:
            base = model.eval_basis(idx)
            for perm in set(itertools.permutations(idx)):
                if model.eval_basis(perm) != base:
                    ok, witness = False, perm
                    break
            if not ok:
                break
        rep.checks.append(Check("symmetry", ok, "permutations of basis tuples", witness))

    tuples, exhaustive = _multisets_to_check(model, max_tuples, rng)
    images = [auto.F.column(i) for i in range(model.h)]
    ok, witness = True, None
    for idx in tuples:
        lhs = model.eval_I([images[i] for i in idx])
        rhs = model.eval_basis(idx)
        if lhs != rhs:
            ok, witness = False, idx
            break
    scope = "all basis multisets" if exhaustive else f"{len(tuples)} sampled basis multisets"
    rep.checks.append(Check("preservation", ok, scope, witness))

    vol = model.volume()
    rep.checks.append(Check("volume", vol > 0, f"I(omega^d) = {vol}"))

    if model.kind == "torus" and auto.h10 is not None:
        det = auto.h10.det()
        rep.checks.append(Check("torus-det", abs(det) == 1, f"det A = {det}"))
    return rep


def torus_positivity(model: IntersectionModel, c: Sequence) -> str:
    """Classify a real (1,1)-class on a torus: positive, semidefinite or indefinite.

    "semidefinite" means positive semidefinite but singular; every class that
    is not positive semidefinite is reported as "indefinite".
    """
    if model.kind != "torus":
        raise ModelError("positivity classification is only available for torus models")
    C = model.coefficient_matrix(as_class(c, model.h))
    if C != C.T:
        raise PreconditionError("coefficient matrix of the class is not symmetric")
    pos, neg, zero = symmetric_inertia(C)
    if neg:
        return "indefinite"
    return "positive" if zero == 0 else "semidefinite"
