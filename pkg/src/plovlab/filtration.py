"""Quasi-nef sequences, the filtration F'_i in F_i, and vanishing diagnostics.

All statements are about the least unipotent power G of the action and
about numerical triviality: a product of classes is "== 0" when it pairs to
zero with every complementary product of basis classes.  Because the model
has no H^{i,i} coordinates, invariance f*(L_i) = L_i is tested at that
level as well.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import PreconditionError, RatMatrix, rank_and_nullspace, vec_add, vec_is_zero
from .growth import nilpotent_orbit, two_sided_classes, unipotent_data
from .models import AutoAction, ClassVec, IntersectionModel, ModelError, as_class, basis_vector, torus_positivity


class FiltrationIntegrityError(ArithmeticError):
    def __init__(self, message: str, power: int, index: int):
        self.power = power
        self.index = index
        super().__init__(f"{message} (power {power}, index {index})")


# --- small linear algebra over subspaces ------------------------------------------


def _span_rank(vectors: Sequence[ClassVec]) -> int:
    if not vectors:
        return 0
    return RatMatrix(vectors).rank()


def _basis_of(vectors: Sequence[ClassVec]) -> list[ClassVec]:
    if not vectors:
        return []
    red, piv = RatMatrix(vectors).rref()
    return [tuple(red[i]) for i in range(len(piv))]


def in_span(v: ClassVec, basis: Sequence[ClassVec]) -> bool:
    if vec_is_zero(v):
        return True
    return _span_rank(list(basis) + [v]) == _span_rank(basis)


def contains(big: Sequence[ClassVec], small: Sequence[ClassVec]) -> bool:
    return all(in_span(v, big) for v in small)


# --- numerical equivalence -----------------------------------------------------------


def num_trivial(model: IntersectionModel, classes: Sequence[ClassVec]) -> bool:
    return model.is_numerically_trivial(list(classes))


def num_equal(model, lhs: Sequence[ClassVec], rhs: Sequence[ClassVec]) -> bool:
    return model.product_coords(list(lhs)) == model.product_coords(list(rhs))


def _coords_vector(model, classes, keys) -> list[Fraction]:
    pc = model.product_coords(list(classes))
    return [pc.get(k, Fraction(0)) for k in keys]


def annihilator(model: IntersectionModel, prefix: Sequence[ClassVec]) -> list[ClassVec]:
    """Basis of {alpha : prefix * alpha == 0}."""
    h = model.h
    if len(prefix) + 1 > model.d:
        return [basis_vector(h, i) for i in range(h)]
    cols = [model.product_coords(list(prefix) + [basis_vector(h, a)]) for a in range(h)]
    keys = sorted({k for c in cols for k in c}, key=repr)
    if not keys:
        return [basis_vector(h, i) for i in range(h)]
    mat = RatMatrix([[c.get(k, Fraction(0)) for c in cols] for k in keys])
    _, ker = rank_and_nullspace(mat)
    return ker


# --- sequences ----------------------------------------------------------------------------


@dataclass
class QuasiNefSeq:
    classes: list[ClassVec]
    provenance: list[str]

    def __len__(self):
        return len(self.classes)


@dataclass
class SeqCheck:
    index: int
    nonzero: bool
    invariant: bool
    nef_proxy: str | None = None
    witness: object = None


@dataclass
class VerificationReport:
    checks: list[SeqCheck]
    status: str  # "verified" | "unverified" | "failed"
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status != "failed"


def _invariance_witness(model, G: RatMatrix, prefix: Sequence[ClassVec]):
    images = [G.apply(c) for c in prefix]
    a = model.product_coords(images)
    b = model.product_coords(list(prefix))
    if a == b:
        return None
    for key in sorted(set(a) | set(b), key=repr):
        if a.get(key, 0) != b.get(key, 0):
            return key
    return None  # pragma: no cover


def verify_quasi_nef(model: IntersectionModel, auto: AutoAction, seq: QuasiNefSeq) -> VerificationReport:
    """Check each prefix product L_i for non-triviality and G-invariance (mod ==).

    Membership of L_i M_{i+1} in Nef(L_i) cannot be decided from I; on torus
    models each M_i is classified instead and a non-semidefinite class
    downgrades the sequence to "unverified".
    """
    G, _, _ = unipotent_data(auto)
    notes = [
        "invariance checked modulo numerical equivalence",
        "nef membership of L_i M_{i+1} assumed",
    ]
    if len(seq) != model.d:
        return VerificationReport([], "failed", notes + [f"need {model.d} classes, got {len(seq)}"])
    checks = []
    status = "verified"
    for i in range(1, model.d + 1):
        prefix = seq.classes[:i]
        nonzero = not num_trivial(model, prefix)
        wit = _invariance_witness(model, G, prefix)
        proxy = None
        if model.kind == "torus":
            try:
                proxy = torus_positivity(model, seq.classes[i - 1])
            except PreconditionError:
                proxy = "not-real"
            if proxy in ("indefinite", "not-real") and status == "verified":
                status = "unverified"
        checks.append(SeqCheck(i, nonzero, wit is None, proxy, wit))
        if not nonzero or wit is not None:
            status = "failed"
    return VerificationReport(checks, status, notes)


@dataclass
class Candidate:
    cls: ClassVec
    tag: str
    invariant: bool | None
    positivity: str | None


def canonical_candidates(model, auto) -> tuple[list[Candidate], str]:
    """N^k omega, N_k omega, N_{k-1} omega and the intermediate N^{2i} omega."""
    G, N, _ = unipotent_data(auto)
    w = model.omega
    orbit = nilpotent_orbit(N, w)
    k = len(orbit) - 1
    if k == 0:
        return [], "k = 0: omega itself is the only invariant class"
    two = two_sided_classes(auto, w, k + 1)
    raw = [(orbit[k], f"N^{k}omega", True), (two[k], f"N_{k}omega", True), (two[k - 1], f"N_{k - 1}omega", True)]
    raw += [(orbit[2 * i], f"N^{2 * i}omega", False) for i in range(k // 2 - 1, 0, -1)]
    out = []
    for c, tag, k_level in raw:
        inv = G.apply(c) == c if k_level else None
        pos = torus_positivity(model, c) if model.kind == "torus" else None
        out.append(Candidate(c, tag, inv, pos))
    return out, ""


def canonical_sequence(model, auto) -> QuasiNefSeq:
    """Greedy quasi-nef sequence from N^k omega, lower even powers, then omega.

    At each step the first candidate keeping L_i nonzero and invariant is
    taken; on tori, positive semidefinite candidates are tried first.
    """
    G, N, _ = unipotent_data(auto)
    w = model.omega
    orbit = nilpotent_orbit(N, w)
    k = len(orbit) - 1
    pool = [(orbit[j], f"N^{j}omega") for j in range(k - k % 2, 0, -2)] + [(w, "omega")]
    if model.kind == "torus":
        # semidefinite candidates first; an indefinite M_i can still give a
        # nef product L_{i-1} M_i, it only fails the per-class proxy
        pool.sort(key=lambda ct: torus_positivity(model, ct[0]) == "indefinite")
    chosen: list[ClassVec] = []
    tags: list[str] = []
    for _ in range(model.d):
        for c, tag in pool:
            trial = chosen + [c]
            if num_trivial(model, trial):
                continue
            if _invariance_witness(model, G, trial) is not None:
                continue
            chosen.append(c)
            tags.append(tag)
            break
        else:
            raise ModelError(f"no canonical candidate extends the sequence at step {len(chosen) + 1}")
    return QuasiNefSeq(chosen, tags)


# --- filtration -----------------------------------------------------------------------


@dataclass
class FiltrationData:
    F_bases: list[list[ClassVec]]  # F_0 .. F_d
    Fp_bases: list[list[ClassVec]]  # F'_1 .. F'_d
    jump_flags: list[bool]
    s_sequence: list[int]
    r: int
    s_sequence_inverse: list[int]
    chain_ok: bool
    quotient_dims: list[int]

    def dims(self) -> tuple[list[int], list[int]]:
        return [len(b) for b in self.F_bases], [len(b) for b in self.Fp_bases]


def _locate(model, F_bases, Fp_bases, N: RatMatrix, w: ClassVec, label: str) -> list[int]:
    d = model.d
    powers = nilpotent_orbit(N, w)
    s_seq: list[int] = []
    j = 1
    while 2 * j - 1 < len(powers):
        odd = powers[2 * j - 1]
        even = powers[2 * j] if 2 * j < len(powers) else tuple(Fraction(0) for _ in w)
        s = next(i for i in range(d + 1) if in_span(odd, F_bases[i]))
        if s == 0 or s > d - 1:
            raise FiltrationIntegrityError(f"{label}^{2 * j - 1} omega first lies in F_{s}", 2 * j - 1, s)
        if in_span(odd, Fp_bases[s - 1]):
            raise FiltrationIntegrityError(f"{label}^{2 * j - 1} omega lies in F'_{s}", 2 * j - 1, s)
        if not in_span(even, Fp_bases[s - 1]):
            raise FiltrationIntegrityError(f"{label}^{2 * j} omega not in F'_{s}", 2 * j, s)
        if in_span(even, F_bases[s - 1]):
            raise FiltrationIntegrityError(f"{label}^{2 * j} omega lies in F_{s - 1}", 2 * j, s - 1)
        if s_seq and s >= s_seq[-1]:
            raise FiltrationIntegrityError("s-sequence not strictly decreasing", 2 * j - 1, s)
        s_seq.append(s)
        j += 1
    return s_seq


def filtration_spaces(model: IntersectionModel, auto: AutoAction, seq: QuasiNefSeq) -> FiltrationData:
    """F_i = ann(L_i), F'_i by the jump criterion L_{i-1} M_i^2 == 0, and the s-sequence.

    The s-sequence is located for G and again for G^-1; both must agree.
    """
    d, h = model.d, model.h
    M = seq.classes
    F_bases: list[list[ClassVec]] = [[]]
    for i in range(1, d):
        F_bases.append(_basis_of(annihilator(model, M[:i])))
    F_bases.append([basis_vector(h, a) for a in range(h)])

    Fp_bases: list[list[ClassVec]] = []
    jumps: list[bool] = []
    for i in range(1, d + 1):
        jump = i == d or num_trivial(model, M[: i - 1] + [M[i - 1], M[i - 1]])
        jumps.append(jump)
        base = F_bases[i - 1]
        Fp_bases.append(_basis_of(base + [M[i - 1]]) if jump else list(base))

    chain_ok = True
    qdims = []
    for i in range(1, d + 1):
        lo, mid, hi = F_bases[i - 1], Fp_bases[i - 1], F_bases[i]
        chain_ok &= contains(mid, lo) and contains(hi, mid)
        qdims.append(len(mid) - len(lo))
    chain_ok &= all(q in (0, 1) for q in qdims)

    _, N, Np = unipotent_data(auto)
    s_seq = _locate(model, F_bases, Fp_bases, N, model.omega, "N")
    s_inv = _locate(model, F_bases, Fp_bases, Np, model.omega, "N'")
    if s_inv != s_seq:
        raise FiltrationIntegrityError(f"inverse s-sequence {s_inv} differs from {s_seq}", 0, 0)
    return FiltrationData(F_bases, Fp_bases, jumps, s_seq, len(s_seq), s_inv, chain_ok, qdims)


def vanishing_products(model, seq: QuasiNefSeq, data: FiltrationData) -> bool:
    """For eta_i in F'_i: L_j eta_{j+1}..eta_p == C L_p, and times eta in F_p it is == 0."""
    d = model.d
    etas = []
    for b in data.Fp_bases:
        v = tuple(Fraction(0) for _ in range(model.h))
        for t, vec in enumerate(b, start=1):
            v = vec_add(v, tuple(t * x for x in vec))
        etas.append(v)
    for p in range(1, d + 1):
        Lp = model.product_coords(seq.classes[:p])
        for j in range(0, p):
            prod = model.product_coords(seq.classes[:j] + etas[j:p])
            keys = set(prod) | set(Lp)
            ratios = {prod.get(k, 0) / Lp[k] for k in Lp} if Lp else set()
            if any(k not in Lp and prod.get(k, 0) for k in keys) or len(ratios) > 1:
                return False
            if p < d:
                for eta in data.F_bases[p]:
                    if not num_trivial(model, seq.classes[:j] + etas[j:p] + [eta]):
                        return False
    return True


# --- diagnostics ----------------------------------------------------------------------


@dataclass
class Diagnostic:
    tag: str
    statement: str
    passed: bool
    vacuous: bool = False


@dataclass
class DiagnosticsReport:
    k: int
    diagnostics: list[Diagnostic]
    geometric: bool

    @property
    def ok(self) -> bool:
        return all(d.passed for d in self.diagnostics)

    def findings(self) -> list[str]:
        label = "failure" if self.geometric else "hypothesis-violation"
        return [f"{label}: {d.tag}: {d.statement}" for d in self.diagnostics if not d.passed]


def vanishing_diagnostics(model: IntersectionModel, auto: AutoAction) -> DiagnosticsReport:
    d = model.d
    _, N, _ = unipotent_data(auto)
    w = model.omega
    orbit = nilpotent_orbit(N, w)
    k = len(orbit) - 1
    out: list[Diagnostic] = []
    if k == 0:
        out.append(Diagnostic("cor-vankk-1", "k = 0: nothing to test", True, vacuous=True))
        out.append(Diagnostic("lem-equiv2N", "k = 0: nothing to test", True, vacuous=True))
        return DiagnosticsReport(k, out, model.geometric)

    two = two_sided_classes(auto, w, k + 1)
    Nk, Nkm1, Nkw = two[k], two[k - 1], orbit[k]

    for i in range(d + 1):
        for j in range(d + 1 - i):
            if 2 * i + 2 * j > 2 * d - k and i + j >= 1:
                ok = num_trivial(model, [Nk] * i + [Nkm1] * j)
                out.append(Diagnostic("cor-vankk-1", f"N_{k}(w)^{i} N_{k - 1}(w)^{j} == 0", ok))

    if k == 2 and d >= 3:
        ok = num_trivial(model, [orbit[2]] * (d - 1))
        out.append(Diagnostic("lem-N2d-1", f"(N^2 w)^{d - 1} == 0", ok))

    sigma = [Nkw, Nk, Nkm1]
    m = 0
    while m < d and not num_trivial(model, [Nkw] * (m + 1)):
        m += 1
    ok = True
    for combo in itertools.combinations_with_replacement(range(3), m):
        if num_trivial(model, [sigma[t] for t in combo]):
            ok = False
    if m + 1 <= d:
        for combo in itertools.combinations_with_replacement(range(3), m + 1):
            if not num_trivial(model, [sigma[t] for t in combo]):
                ok = False
    out.append(Diagnostic("lem-equiv2N", f"mixed products of length {m} nonzero, length {m + 1} zero", ok))
    return DiagnosticsReport(k, out, model.geometric)
