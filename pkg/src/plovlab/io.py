"""JSON model and automorphism files.

Model files come in three shapes::

    {"complex_dim": d, "h": h, "basis": [...], "intersection": [{"idx": [...], "val": "p/q"}], "kahler": [...]}
    {"type": "torus", "h10_matrix": [[int, ...], ...], "kahler": [...]}      # kahler optional
    {"type": "fujiki", "q": [[...]], "c": "p/q", "half_dim": m, "omega": [...]}

Automorphism files are ``{"matrix": [[...]]}`` with columns as images.
Quasi-nef sequence files are ``{"sequences": [[class, ...], ...]}``.
Rationals are written as strings ("3", "-1/2"); plain JSON integers are
accepted too, floats never.  Unknown keys are rejected.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .exact import DimensionError, PreconditionError, RatMatrix
from .filtration import QuasiNefSeq
from .models import AutoAction, IntersectionModel, ModelError, SparseModel, build_fujiki, build_torus


class InputError(ValueError):
    """Malformed input file; the message names the file and the offending key."""

    def __init__(self, source: str, key: str, message: str):
        super().__init__(f"{source}: {key}: {message}")
        self.source = source
        self.key = key


def _rational(value: Any, source: str, key: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(source, key, f"expected a rational string like \"1/2\", got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(source, key, f"not a rational: {value!r}") from None
    raise InputError(source, key, f"expected a rational string, got {type(value).__name__}")


def _int(value: Any, source: str, key: str, positive: bool = True) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(source, key, f"expected an integer, got {value!r}")
    if positive and value <= 0:
        raise InputError(source, key, f"must be positive, got {value}")
    return value


def _vector(value: Any, source: str, key: str) -> list[Fraction]:
    if not isinstance(value, list):
        raise InputError(source, key, "expected a list")
    return [_rational(x, source, f"{key}[{i}]") for i, x in enumerate(value)]


def _matrix(value: Any, source: str, key: str) -> RatMatrix:
    if not isinstance(value, list) or not value:
        raise InputError(source, key, "expected a non-empty list of rows")
    rows = [_vector(r, source, f"{key}[{i}]") for i, r in enumerate(value)]
    if any(len(r) != len(rows) for r in rows):
        raise InputError(source, key, "matrix must be square")
    return RatMatrix(rows)


def _keys(obj: dict, source: str, required: set[str], optional: set[str] = frozenset()) -> None:
    extra = sorted(set(obj) - required - set(optional))
    if extra:
        raise InputError(source, extra[0], "unknown key")
    missing = sorted(required - set(obj))
    if missing:
        raise InputError(source, missing[0], "missing required key")


def _read(path_or_text: str | Path) -> tuple[Any, str]:
    p = Path(path_or_text)
    try:
        is_file = p.is_file()
    except OSError:
        is_file = False
    if is_file:
        source = str(p)
        text = p.read_text(encoding="utf-8")
    else:
        source, text = "<inline>", str(path_or_text)
    try:
        return json.loads(text), source
    except json.JSONDecodeError as exc:
        if source == "<inline>" and not str(path_or_text).lstrip().startswith(("[", "{")):
            raise InputError(str(path_or_text), "-", "no such file") from None
        raise InputError(source, f"line {exc.lineno}", f"invalid JSON: {exc.msg}") from None


def parse_model(obj: Any, source: str = "<model>") -> tuple[IntersectionModel, AutoAction | None]:
    """Build a model; torus shorthand also yields its automorphism."""
    if not isinstance(obj, dict):
        raise InputError(source, "-", "model file must hold a JSON object")
    kind = obj.get("type")
    try:
        if kind == "torus":
            _keys(obj, source, {"type", "h10_matrix"}, {"kahler"})
            A = _matrix(obj["h10_matrix"], source, "h10_matrix")
            if not A.is_integral():
                raise InputError(source, "h10_matrix", "entries must be integers")
            omega = _vector(obj["kahler"], source, "kahler") if "kahler" in obj else None
            return build_torus(A, omega)
        if kind == "fujiki":
            _keys(obj, source, {"type", "q", "c", "half_dim", "omega"})
            q = _matrix(obj["q"], source, "q")
            model = build_fujiki(
                q,
                _rational(obj["c"], source, "c"),
                _int(obj["half_dim"], source, "half_dim"),
                _vector(obj["omega"], source, "omega"),
            )
            return model, None
        if kind is not None:
            raise InputError(source, "type", f"unknown model type {kind!r}")
        _keys(obj, source, {"complex_dim", "h", "basis", "intersection", "kahler"})
        d = _int(obj["complex_dim"], source, "complex_dim")
        h = _int(obj["h"], source, "h")
        basis = obj["basis"]
        if not isinstance(basis, list) or not all(isinstance(b, str) for b in basis):
            raise InputError(source, "basis", "expected a list of strings")
        if len(basis) != h:
            raise InputError(source, "basis", f"has {len(basis)} labels, h = {h}")
        entries = obj["intersection"]
        if not isinstance(entries, list):
            raise InputError(source, "intersection", "expected a list")
        tensor: dict[tuple[int, ...], Fraction] = {}
        for n, ent in enumerate(entries):
            key = f"intersection[{n}]"
            if not isinstance(ent, dict):
                raise InputError(source, key, "expected an object with idx and val")
            _keys(ent, f"{source}: {key}", {"idx", "val"})
            idx = ent["idx"]
            if not isinstance(idx, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in idx):
                raise InputError(source, f"{key}.idx", "expected a list of integers")
            if len(idx) != d or idx != sorted(idx):
                raise InputError(source, f"{key}.idx", f"must be {d} sorted indices")
            if any(not 0 <= i < h for i in idx):
                raise InputError(source, f"{key}.idx", f"index out of range 0..{h - 1}")
            if tuple(idx) in tensor:
                raise InputError(source, f"{key}.idx", f"duplicate entry {idx}")
            tensor[tuple(idx)] = _rational(ent["val"], source, f"{key}.val")
        omega = _vector(obj["kahler"], source, "kahler")
        if len(omega) != h:
            raise InputError(source, "kahler", f"has {len(omega)} coordinates, h = {h}")
        return SparseModel(d, basis, tensor, omega, geometric=False), None
    except (ModelError, DimensionError, PreconditionError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(source, kind or "model", str(exc)) from None


def parse_auto(obj: Any, model: IntersectionModel, source: str = "<auto>") -> AutoAction:
    if not isinstance(obj, dict):
        raise InputError(source, "-", "automorphism file must hold a JSON object")
    _keys(obj, source, {"matrix"})
    F = _matrix(obj["matrix"], source, "matrix")
    if F.rows != model.h:
        raise InputError(source, "matrix", f"is {F.rows}x{F.cols}, model has h = {model.h}")
    if F.det() == 0:
        raise InputError(source, "matrix", "matrix is singular")
    return AutoAction(F, name=Path(source).stem if source != "<auto>" else "F")


def parse_sequences(obj: Any, model: IntersectionModel, source: str = "<sequence>") -> list[QuasiNefSeq]:
    """``{"sequences": [[class, ...], ...]}``, each class a list of h rationals."""
    if not isinstance(obj, dict):
        raise InputError(source, "-", "sequence file must hold a JSON object")
    _keys(obj, source, {"sequences"})
    seqs = obj["sequences"]
    if not isinstance(seqs, list):
        raise InputError(source, "sequences", "expected a list of sequences")
    out = []
    for s, seq in enumerate(seqs):
        if not isinstance(seq, list) or len(seq) != model.d:
            raise InputError(source, f"sequences[{s}]", f"expected {model.d} classes")
        classes = []
        for i, c in enumerate(seq):
            v = _vector(c, source, f"sequences[{s}][{i}]")
            if len(v) != model.h:
                raise InputError(source, f"sequences[{s}][{i}]", f"has {len(v)} coordinates, h = {model.h}")
            classes.append(tuple(v))
        out.append(QuasiNefSeq(classes, ["user"] * model.d))
    return out


def load_sequences(path: str | Path, model: IntersectionModel) -> list[QuasiNefSeq]:
    obj, source = _read(path)
    return parse_sequences(obj, model, source)


def load_model(path: str | Path) -> tuple[IntersectionModel, AutoAction | None]:
    obj, source = _read(path)
    return parse_model(obj, source)


def load_auto(path: str | Path, model: IntersectionModel) -> AutoAction:
    obj, source = _read(path)
    return parse_auto(obj, model, source)


def load_h10(text_or_path: str | Path) -> tuple[IntersectionModel, AutoAction]:
    """``--h10-matrix`` value: inline JSON rows or a file holding them (or torus shorthand)."""
    obj, source = _read(text_or_path)
    if isinstance(obj, dict):
        model, auto = parse_model(obj, source)
        if auto is None:
            raise InputError(source, "type", "expected torus shorthand")
        return model, auto
    return parse_model({"type": "torus", "h10_matrix": obj}, source)
