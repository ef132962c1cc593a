"""End-to-end analysis of one (model, action) pair, serialized to plain JSON data.

Shared by the CLI and the gallery tests.  Output ordering is fixed so that
identical inputs give byte-identical reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .exact import format_rational
from .filtration import (
    FiltrationIntegrityError,
    QuasiNefSeq,
    canonical_sequence,
    filtration_spaces,
    vanishing_diagnostics,
    vanishing_products,
    verify_quasi_nef,
)
from .growth import plov as compute_plov
from .models import AutoAction, IntersectionModel, ModelError, validate
from .verdict import bound_report


@dataclass
class Analysis:
    report: dict
    findings: list[str] = field(default_factory=list)
    invalid: bool = False
    geometric: bool = True

    @property
    def exit_code(self) -> int:
        if self.invalid:
            return 1
        if self.findings and self.geometric:
            return 2
        return 0

    def to_json(self) -> str:
        return json.dumps(self.report, indent=2) + "\n"


def _vec(v) -> list[str]:
    return [format_rational(x) for x in v]


def _filtration_section(model, auto, k_supported: bool, k: int | None, seq: QuasiNefSeq | None) -> tuple[dict, list[str]]:
    findings: list[str] = []
    if seq is None:
        try:
            seq = canonical_sequence(model, auto)
        except ModelError as exc:
            return {"error": str(exc)}, [f"filtration: {exc}"]
    ver = verify_quasi_nef(model, auto, seq)
    out: dict = {
        "sequence": [{"tag": t, "class": _vec(c)} for t, c in zip(seq.provenance, seq.classes)],
        "status": ver.status,
        "checks": [
            {
                "index": c.index,
                "nonzero": c.nonzero,
                "invariant": c.invariant,
                "nef_proxy": c.nef_proxy,
                "witness": None if c.witness is None else list(c.witness),
            }
            for c in ver.checks
        ],
        "notes": ver.notes,
    }
    if not ver.passed:
        findings.append("filtration: quasi-nef sequence failed verification")
        return out, findings
    try:
        data = filtration_spaces(model, auto, seq)
    except FiltrationIntegrityError as exc:
        out["error"] = str(exc)
        return out, findings + [f"filtration: {exc}"]
    dims_F, dims_Fp = data.dims()
    out.update(
        {
            "dim_F": dims_F,
            "dim_F_prime": dims_Fp,
            "F_bases": [[_vec(v) for v in b] for b in data.F_bases],
            "F_prime_bases": [[_vec(v) for v in b] for b in data.Fp_bases],
            "jumps": data.jump_flags,
            "s_sequence": data.s_sequence,
            "s_sequence_inverse": data.s_sequence_inverse,
            "r": data.r,
            "chain_ok": data.chain_ok,
            "vanishing_products": vanishing_products(model, seq, data),
        }
    )
    if not data.chain_ok:
        findings.append("filtration: F_{i-1} <= F'_i <= F_i with quotient dimension <= 1 fails")
    if not out["vanishing_products"]:
        findings.append("filtration: vanishing products check fails")
    if k_supported and k and k != 2 * data.r:
        findings.append(f"filtration: k = {k} but 2r = {2 * data.r}")
    return out, findings


def analyze(
    model: IntersectionModel,
    auto: AutoAction,
    *,
    name: str | None = None,
    filtration: bool = False,
    diagnostics: bool = False,
    oracle: bool = False,
    sequences: Sequence[QuasiNefSeq] = (),
) -> Analysis:
    """Validate, compute growth data and bounds, optionally filtration and diagnostics.

    Raises :class:`~plovlab.growth.InfinitePlov` for actions that are not
    quasi-unipotent.  With ``filtration`` the canonical sequence is analyzed
    first, then every user-supplied one in ``sequences``; a failed user
    sequence is reported but is not a finding against the model.
    """
    val = validate(model, auto)
    head = {
        "model": {"name": name, "kind": model.kind, "d": model.d, "h": model.h, "geometric": model.geometric},
        "validation": [
            {"check": c.name, "pass": c.passed, "detail": c.detail, "witness": None if c.witness is None else list(c.witness)}
            for c in val.checks
        ],
    }
    if not val.ok:
        msgs = [f"invalid input: {c.name} fails ({c.detail}) witness {c.witness}" for c in val.failures()]
        return Analysis(head, msgs, invalid=True, geometric=model.geometric)

    growth = compute_plov(model, auto, oracle=oracle)
    bounds = bound_report(model, auto, growth)
    k_supported = getattr(model, "supports_k", True)
    cert = auto.cert
    rep: dict = {
        "d": bounds.d,
        "k": bounds.k,
        "plov": bounds.plov,
        "gkdim": bounds.gkdim,
    }
    rep.update(head)
    rep.update(
        {
            "order_M": growth.order_M,
            "jordan_partition": list(cert.jordan_partition) if k_supported else None,
            "rank_sequence": list(cert.rank_sequence) if k_supported else None,
            "P": growth.P.to_string("n"),
            "k_orbit": growth.k_orbit,
            "partial_degrees": growth.partial_degrees,
            "ladder_strict": growth.ladder_strict,
            "plov_two_sided": growth.plov_two_sided,
            "primed_partial_degrees": growth.primed_partial_degrees,
            "d_pol": growth.d_pol,
            "d_pol_bound": growth.d_pol_bound,
        }
    )
    if auto.h10 is not None:
        rep["h10_partition"] = list(auto.h10_partition())
    findings = list(bounds.findings())
    label = "regression" if model.geometric else "hypothesis-violation"
    if growth.plov_two_sided != growth.plov:
        findings.append(f"{label}: two-sided degree {growth.plov_two_sided} differs from plov {growth.plov}")
    if not growth.ladder_strict:
        findings.append(f"{label}: partial degrees {growth.partial_degrees} not strictly increasing")
    if growth.d_pol is not None and growth.d_pol_bound is not None and growth.d_pol > growth.d_pol_bound:
        findings.append(f"{label}: d_pol = {growth.d_pol} exceeds k*floor(d/2) = {growth.d_pol_bound}")
    if oracle:
        rep["oracle"] = {"closed_form": growth.P.to_string("n"), "interpolated": growth.oracle_poly.to_string("n"), "agreed": growth.oracle_agreed}
        if not growth.oracle_agreed:
            findings.append("regression: closed-form P(n) differs from the interpolated samples")
    rep["checks"] = [c.to_json() for c in bounds.checks]
    if filtration:
        rep["filtration"], extra = _filtration_section(model, auto, k_supported, bounds.k, None)
        findings += [f"{label}: {f}" for f in extra]
        if sequences:
            rep["user_filtrations"] = [_filtration_section(model, auto, k_supported, bounds.k, s)[0] for s in sequences]
    if diagnostics:
        diag = vanishing_diagnostics(model, auto)
        rep["diagnostics"] = [
            {"tag": x.tag, "statement": x.statement, "pass": x.passed, "vacuous": x.vacuous} for x in diag.diagnostics
        ]
        findings += [f"{label}: {x.tag}: {x.statement}" for x in diag.diagnostics if not x.passed]
    rep["findings"] = findings
    return Analysis(rep, findings, geometric=model.geometric)
