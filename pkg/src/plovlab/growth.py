"""Growth of the orbit sums Delta_n = omega + F omega + ... + F^n omega.

For a unipotent action with N = F - Id,

    Delta_n = sum_j C(n+1, j+1) N^j omega,

so P(n) = I(Delta_n, ..., Delta_n) is a polynomial and Plov is its degree.
P(n) is expanded over multisets of orbit indices with multinomial weights;
the evaluation state of each multiset prefix is shared by all its
extensions.  Two independent routes recompute the degree: the two-sided sum
through N_j = N^j + N'^j, and exact interpolation of sampled orbit sums.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .exact import (
    QPoly,
    RatMatrix,
    interpolate,
    multinomial,
    vec_add,
    vec_is_zero,
    vec_scale,
)
from .models import (
    AutoAction,
    ClassVec,
    IntersectionModel,
    ModelError,
    as_class,
    basis_vector,
    torus_positivity,
)
from .spectral import NotQuasiUnipotentError, certify_quasi_unipotent

InfinitePlov = NotQuasiUnipotentError


class HilbertRefusal(ValueError):
    """Delta_{m-1} is not positive, so h^0 = chi is not guaranteed."""

    def __init__(self, m: int, status: str):
        self.m = m
        super().__init__(f"Delta_{m - 1} is {status}; dim B_{m} not computable as chi")


# --- multiset expansion ----------------------------------------------------


def _dead(state) -> bool:
    return isinstance(state, dict) and not state


def expand_power(
    model: IntersectionModel,
    terms: Sequence[tuple[QPoly, ClassVec]],
    power: int,
    tail: Sequence[ClassVec] = (),
) -> QPoly:
    """I(D, ..., D, tail) as a polynomial, where D = sum_t poly_t * class_t.

    ``power + len(tail)`` must equal the model dimension.
    """
    if power + len(tail) != model.d:
        raise ValueError("power plus tail length must equal d")
    terms = [(p, c) for p, c in terms if not p.is_zero() and not vec_is_zero(c)]
    t = len(terms)
    weights: dict[tuple[int, ...], Fraction] = {}
    counts = [0] * t

    def leaf(state):
        for c in tail:
            if _dead(state):
                return
            state = model.extend(state, c)
        val = model.finish(state)
        if val:
            key = tuple(counts)
            weights[key] = weights.get(key, 0) + val

    def dfs(first: int, depth: int, state):
        if _dead(state):
            return
        if depth == power:
            leaf(state)
            return
        for idx in range(first, t):
            counts[idx] += 1
            dfs(idx, depth + 1, model.extend(state, terms[idx][1]))
            counts[idx] -= 1

    dfs(0, 0, model.start())

    pow_cache: dict[tuple[int, int], QPoly] = {}

    def ppow(idx, e):
        key = (idx, e)
        if key not in pow_cache:
            pow_cache[key] = terms[idx][0] ** e
        return pow_cache[key]

    total = QPoly()
    for key in sorted(weights):
        poly = QPoly([weights[key] * multinomial(key)])
        for idx, e in enumerate(key):
            if e:
                poly = poly * ppow(idx, e)
        total = total + poly
    return total


def degree_of(p: QPoly) -> int:
    if p.is_zero():
        raise ArithmeticError("growth polynomial vanished identically")
    return p.degree


# --- orbit data ----------------------------------------------------------------


def nilpotent_orbit(N: RatMatrix, v: ClassVec) -> list[ClassVec]:
    """[v, Nv, N^2 v, ...] up to the last nonzero vector."""
    out = [v]
    while True:
        w = N.apply(out[-1])
        if vec_is_zero(w):
            return out
        out.append(w)
        if len(out) > N.rows + 1:
            raise ArithmeticError("operator is not nilpotent on this orbit")


@dataclass(frozen=True)
class DeltaPoly:
    """Delta_n = sum_j C(n+1, j+1) N^j omega, stored as the classes N^j omega."""

    classes: tuple[ClassVec, ...]

    @property
    def k(self) -> int:
        return len(self.classes) - 1

    def terms(self) -> list[tuple[QPoly, ClassVec]]:
        return [(QPoly.binomial(1, j + 1), c) for j, c in enumerate(self.classes)]

    def __call__(self, n: int) -> ClassVec:
        h = len(self.classes[0])
        out = tuple(Fraction(0) for _ in range(h))
        for j, c in enumerate(self.classes):
            out = vec_add(out, vec_scale(comb(n + 1, j + 1), c))
        return out


def unipotent_data(auto: AutoAction) -> tuple[RatMatrix, RatMatrix, RatMatrix]:
    """(G, N, N') for the least unipotent power G = F^M."""
    G = auto.unipotent
    ident = RatMatrix.identity(G.rows)
    return G, G - ident, G.inverse() - ident


def delta_poly(model, auto, omega=None) -> DeltaPoly:
    _, N, _ = unipotent_data(auto)
    w = model.omega if omega is None else as_class(omega, model.h)
    return DeltaPoly(tuple(nilpotent_orbit(N, w)))


def two_sided_classes(auto: AutoAction, omega: ClassVec, length: int | None = None) -> list[ClassVec]:
    """[N_0 omega, N_1 omega, ...] with N_j = N^j + N'^j (so N_0 = 2 Id).

    Trailing zeros are dropped unless ``length`` asks for a fixed size.
    """
    _, N, Np = unipotent_data(auto)
    a = nilpotent_orbit(N, omega)
    b = nilpotent_orbit(Np, omega)
    zero = tuple(Fraction(0) for _ in omega)
    out = []
    for j in range(max(len(a), len(b))):
        u = a[j] if j < len(a) else zero
        v = b[j] if j < len(b) else zero
        out.append(vec_add(u, v))
    while len(out) > 1 and vec_is_zero(out[-1]):
        out.pop()
    if length is not None:
        out = (out + [zero] * length)[:length]
    return out


# --- reports ---------------------------------------------------------------------


@dataclass
class GrowthReport:
    plov: int
    gkdim: int
    P: QPoly
    order_M: int
    k_orbit: int
    partial_degrees: list[int] = field(default_factory=list)
    plov_two_sided: int | None = None
    primed_partial_degrees: list[int] = field(default_factory=list)
    d_pol: int | None = None
    d_pol_bound: int | None = None
    oracle_poly: QPoly | None = None
    oracle_agreed: bool | None = None

    @property
    def ladder_strict(self) -> bool:
        ds = self.partial_degrees
        return all(a < b for a, b in zip(ds, ds[1:]))

    @property
    def primed_ladder_strict(self) -> bool:
        ds = self.primed_partial_degrees
        return all(a < b for a, b in zip(ds, ds[1:]))


def _require_qu(auto: AutoAction) -> int:
    # on tori the H^{1,0} matrix gives the more readable witness; A is
    # quasi-unipotent iff A (x) A is, since the latter has eigenvalues l_i l_j
    if auto.h10 is not None:
        q10 = certify_quasi_unipotent(auto.h10)
        if not q10.is_quasi_unipotent:
            raise InfinitePlov(q10.witness)
    q = auto.quasi
    if not q.is_quasi_unipotent:
        raise InfinitePlov(q.witness)
    return q.order


def growth_polynomial(model, auto, omega=None) -> QPoly:
    """P(n) = I(Delta_n^d) on the unipotent reduction."""
    _require_qu(auto)
    return expand_power(model, delta_poly(model, auto, omega).terms(), model.d)


def ladder(model, auto, omega=None, primed: bool = False) -> list[int]:
    """deg_n I(D_n^i, omega^{d-i}) for i = 1..d, D_n one- or two-sided."""
    _require_qu(auto)
    w = model.omega if omega is None else as_class(omega, model.h)
    if primed:
        cls = two_sided_classes(auto, w)
        terms = [(QPoly.binomial(1, j + 1), c) for j, c in enumerate(cls)]
    else:
        terms = delta_poly(model, auto, w).terms()
    return [degree_of(expand_power(model, terms, i, (w,) * (model.d - i))) for i in range(1, model.d + 1)]


def plov_two_sided_poly(model, auto, omega=None) -> QPoly:
    """I(Delta'_n^d) with Delta'_n = omega + sum_{|i|<=n} F^i omega."""
    _require_qu(auto)
    w = model.omega if omega is None else as_class(omega, model.h)
    cls = two_sided_classes(auto, w)
    terms = [(QPoly.binomial(1, j + 1), c) for j, c in enumerate(cls)]
    return expand_power(model, terms, model.d)


def plov_two_sided(model, auto, omega=None) -> int:
    return degree_of(plov_two_sided_poly(model, auto, omega))


def d_pol_poly(model, auto, omega=None) -> QPoly:
    """I((G^n omega + G^-n omega)^d) = I((sum_j C(n, j) N_j omega)^d)."""
    _require_qu(auto)
    w = model.omega if omega is None else as_class(omega, model.h)
    cls = two_sided_classes(auto, w)
    terms = [(QPoly.binomial(0, j), c) for j, c in enumerate(cls)]
    return expand_power(model, terms, model.d)


def d_pol(model, auto, omega=None) -> int:
    return degree_of(d_pol_poly(model, auto, omega))


def oracle_plov(model, auto, omega=None, closed_form: QPoly | None = None) -> tuple[QPoly, bool | None]:
    """Interpolate s_n = I(v_n^d), v_n = sum_{i<=n} G^i omega, sampled directly.

    d(k+1)+2 samples suffice since every binomial factor has degree <= k+1.
    ``agreed`` compares against ``closed_form`` when one is given.
    """
    _require_qu(auto)
    G, N, _ = unipotent_data(auto)
    w = model.omega if omega is None else as_class(omega, model.h)
    k = len(nilpotent_orbit(N, w)) - 1
    samples = model.d * (k + 1) + 2
    points = []
    v = w
    power = w
    for n in range(samples):
        points.append((n, model.eval_I([v] * model.d)))
        power = G.apply(power)
        v = vec_add(v, power)
    poly = interpolate(points)
    agreed = None if closed_form is None else poly == closed_form
    return poly, agreed


def plov(
    model: IntersectionModel,
    auto: AutoAction,
    omega=None,
    *,
    ladders: bool = True,
    two_sided: bool = True,
    oracle: bool = True,
) -> GrowthReport:
    """Plov and the associated degrees; raises InfinitePlov when not quasi-unipotent."""
    M = _require_qu(auto)
    w = model.omega if omega is None else as_class(omega, model.h)
    dp = delta_poly(model, auto, w)
    P = expand_power(model, dp.terms(), model.d)
    deg = degree_of(P)
    rep = GrowthReport(plov=deg, gkdim=deg + 1, P=P, order_M=M, k_orbit=dp.k)
    if ladders:
        rep.partial_degrees = ladder(model, auto, w)
    if two_sided:
        rep.plov_two_sided = plov_two_sided(model, auto, w)
        if ladders:
            rep.primed_partial_degrees = ladder(model, auto, w, primed=True)
        rep.d_pol = d_pol(model, auto, w)
        k = auto.cert.k if getattr(model, "supports_k", True) else dp.k
        rep.d_pol_bound = k * (model.d // 2)
    if oracle:
        rep.oracle_poly, rep.oracle_agreed = oracle_plov(model, auto, w, closed_form=P)
    return rep


# --- abelian-only quantities ------------------------------------------------------


def _orbit_sums(auto: AutoAction, L: ClassVec):
    s = L
    cur = L
    yield s
    while True:
        cur = auto.F.apply(cur)
        s = vec_add(s, cur)
        yield s


def hilbert_sequence(model, auto, n_max: int) -> list[Fraction]:
    """[dim B_0, ..., dim B_{n_max}] with dim B_m = I(Delta_{m-1}^d) / d!.

    Valid on abelian models only, where an ample class has h^0 = chi
    (Riemann-Roch plus Kodaira vanishing).  Uses the raw action F.
    """
    if model.kind != "torus":
        raise ModelError("Hilbert sequences are only computed on torus models")
    out = [Fraction(1)]
    sums = _orbit_sums(auto, model.omega)
    df = factorial(model.d)
    for m in range(1, n_max + 1):
        delta = next(sums)
        status = torus_positivity(model, delta)
        if status != "positive":
            raise HilbertRefusal(m, status)
        dim = model.eval_I([delta] * model.d) / df
        if dim.denominator != 1 or dim <= 0:
            raise ArithmeticError(f"dim B_{m} = {dim} is not a positive integer")
        out.append(dim)
    return out


def hilbert_degree(seq: Sequence[Fraction]) -> int:
    """Degree of the polynomial m -> dim B_m fitted through m = 1..len-1."""
    pts = [(m, seq[m]) for m in range(1, len(seq))]
    return degree_of(interpolate(pts))


def write_hilbert_csv(seq: Sequence[Fraction], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["m", "dim"])
        for m, v in enumerate(seq):
            w.writerow([m, str(v)])


def f_ample_witness(model, auto, L, n_cap: int) -> int | None:
    """Least n <= n_cap with Delta_n(f, L) positive on a torus, else None."""
    L = as_class(L, model.h)
    sums = _orbit_sums(auto, L)
    for n in range(n_cap + 1):
        if torus_positivity(model, next(sums)) == "positive":
            return n
    return None


# --- single-block torus diagnostics ----------------------------------------------


def cauchy_leading_matrix(d: int) -> RatMatrix:
    return RatMatrix(
        [[Fraction(1, (i + j + 1) * factorial(i) * factorial(j)) for j in range(d)] for i in range(d)]
    )


def cauchy_closed_form(d: int) -> Fraction:
    num = 1
    for p in range(d):
        num *= factorial(p)
    den = 1
    for p in range(d, 2 * d):
        den *= factorial(p)
    return Fraction(num, den)


@dataclass
class DegLCDiagnostic:
    d: int
    entries_ok: bool
    bad_entries: list[tuple[int, int]]
    leading_det: Fraction
    cauchy_value: Fraction
    volume_degree: int
    volume_leading: Fraction

    @property
    def ok(self) -> bool:
        return (
            self.entries_ok
            and self.leading_det == self.cauchy_value
            and self.volume_degree == self.d ** 2
            and self.volume_leading == factorial(self.d) * self.cauchy_value
        )


def deglc_diagnostic(model, auto) -> DegLCDiagnostic:
    """Seeded at b_dd on a single-Jordan-block torus.

    Each coordinate P_{d-i,d-j}(n) of Delta_n(b_dd) must have degree i+j+1
    and leading coefficient C(i+j, i)/(i+j+1)!; their leading terms form
    the Cauchy-type matrix whose determinant drives deg I(Delta_n^d) = d^2.
    """
    d = model.d
    seed = basis_vector(model.h, d * d - 1)
    dp = delta_poly(model, auto, seed)
    coords = [QPoly() for _ in range(model.h)]
    for poly, c in dp.terms():
        for a, x in enumerate(c):
            if x:
                coords[a] = coords[a] + poly.scale(x)
    bad = []
    for i in range(d):
        for j in range(d):
            p = coords[(d - 1 - i) * d + (d - 1 - j)]
            want = Fraction(comb(i + j, i), factorial(i + j + 1))
            if p.degree != i + j + 1 or p.leading_coefficient != want:
                bad.append((i, j))
    vol = expand_power(model, dp.terms(), d)
    return DegLCDiagnostic(
        d=d,
        entries_ok=not bad,
        bad_entries=bad,
        leading_det=cauchy_leading_matrix(d).det(),
        cauchy_value=cauchy_closed_form(d),
        volume_degree=degree_of(vol),
        volume_leading=vol.leading_coefficient,
    )
