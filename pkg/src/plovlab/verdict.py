"""Instantiate every known bound on Plov and k for one model and action."""

from __future__ import annotations

from dataclasses import dataclass, field

from .growth import GrowthReport, plov as compute_plov
from .models import AutoAction, IntersectionModel


@dataclass
class BoundCheck:
    tag: str
    statement: str
    lhs: int | None
    rhs: object
    relation: str
    passed: bool | None  # None: not applicable or informational

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "statement": self.statement,
            "lhs": None if self.lhs is None else str(self.lhs),
            "rhs": None if self.rhs is None else str(self.rhs),
            "relation": self.relation,
            "pass": self.passed,
        }


@dataclass
class BoundReport:
    d: int
    k: int | None
    plov: int
    gkdim: int
    model_kind: str
    checks: list[BoundCheck] = field(default_factory=list)

    def failures(self) -> list[BoundCheck]:
        return [c for c in self.checks if c.passed is False and c.relation != "conjecture"]

    @property
    def ok(self) -> bool:
        return not self.failures()

    def findings(self) -> list[str]:
        label = "regression" if self.model_kind == "geometric-gallery" else "hypothesis-violation"
        return [f"{label}: {c.tag}: {c.statement} with lhs={c.lhs}, rhs={c.rhs}" for c in self.failures()]

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "k": self.k,
            "plov": self.plov,
            "gkdim": self.gkdim,
            "model_kind": self.model_kind,
            "checks": [c.to_json() for c in self.checks],
        }


_RELATIONS = {
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "in": lambda a, b: a in b,
}


def _check(tag, statement, lhs, rhs, relation, applicable=True) -> BoundCheck:
    if not applicable:
        return BoundCheck(tag, statement, lhs, rhs, relation, None)
    return BoundCheck(tag, statement, lhs, rhs, relation, _RELATIONS[relation](lhs, rhs))


def bound_report(model: IntersectionModel, auto: AutoAction, growth: GrowthReport | None = None) -> BoundReport:
    """Evaluate each applicable bound on (d, k, Plov).

    k is read on the whole carrier space; product carriers omit Kuenneth
    cross terms, so every k-dependent check is marked not applicable there.
    """
    if growth is None:
        growth = compute_plov(model, auto, ladders=False, two_sided=False, oracle=False)
    d, p = model.d, growth.plov
    has_k = getattr(model, "supports_k", True)
    k = auto.cert.k if has_k else None
    kind = "geometric-gallery" if model.geometric else "synthetic"
    rep = BoundReport(d=d, k=k, plov=p, gkdim=growth.gkdim, model_kind=kind)
    c = rep.checks.append

    c(_check("gkdim", "GKdim = Plov + 1", growth.gkdim, p + 1, "=="))
    kk = k if has_k else 0
    c(_check("JBbound-even", "k is even: k mod 2 = 0", kk % 2, 0, "==", has_k))
    c(_check("JBbound", "k <= 2(d-1)", kk, 2 * (d - 1), "<=", has_k))
    c(_check("thmkeeler-lower", "d + k <= Plov", d + kk, p, "<=", has_k))
    c(_check("thmkeeler-upper", "Plov <= k(d-1) + d", p, kk * (d - 1) + d, "<=", has_k))
    c(_check("thmkeeler-k0", "k = 0 implies Plov = d", p, d, "==", has_k and kk == 0))
    c(_check("corkeeler", "Plov <= 2d^2 - 3d + 2", p, 2 * d * d - 3 * d + 2, "<="))
    c(_check("uniform", "d >= 3, k > 0: Plov <= k(d-1) + d - 2", p, kk * (d - 1) + d - 2, "<=", has_k and d >= 3 and kk > 0))
    c(_check("uniformdge4", "d >= 4: Plov <= 2d^2 - 3d - 2", p, 2 * d * d - 3 * d - 2, "<=", d >= 4))
    c(_check("thm-lb", "Plov >= d + 2k - 2", p, d + 2 * kk - 2, ">=", has_k))
    upper = d * d if d <= 3 else 2 * d * d - 3 * d - 2
    c(_check("cor-uniform-lower", "d <= Plov", d, p, "<="))
    c(_check("cor-uniform-upper", "Plov <= d^2 (d <= 3) or 2d^2 - 3d - 2 (d >= 4)", p, upper, "<="))
    c(_check("cor-d=3", "d = 3, k > 0: Plov = 2k + 1", p, 2 * kk + 1, "==", has_k and d == 3 and kk > 0))
    c(_check("cor-d=3-values", "d = 3: Plov in {3, 5, 9}", p, frozenset({3, 5, 9}), "in", d == 3))
    if model.kind == "torus" and auto.h10 is not None:
        parts = auto.h10_partition()
        c(_check("thm51", f"Plov = sum of squared H^(1,0) block sizes {list(parts)}", p, sum(x * x for x in parts), "=="))
    else:
        c(_check("thm51", "torus closed formula", p, None, "==", False))
    c(BoundCheck("mainquest2", "open question: Plov <= d^2", p, d * d, "conjecture", None))
    for chk in rep.checks:
        if isinstance(chk.rhs, frozenset):
            chk.rhs = "{" + ", ".join(str(v) for v in sorted(chk.rhs)) + "}"
    return rep
