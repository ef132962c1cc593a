"""Named models with known invariants, used as golden tests and CLI demos."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .exact import RatMatrix
from .models import (
    AutoAction,
    IntersectionModel,
    block_diagonal,
    build_fujiki,
    build_product,
    build_torus,
    jordan_block,
    jordan_torus,
)


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    build: Callable[[], tuple[IntersectionModel, AutoAction]]
    expected: dict = field(default_factory=dict)
    citation: str = ""


# hyperbolic plane plus a negative line: q(u, v) = 1, q(w, w) = -1
HK_Q = [[0, 0, 1], [0, -1, 0], [1, 0, 0]]
HK_OMEGA = [1, 0, 1]
# u -> u, w -> w + u, v -> v + w + u/2 (columns are images)
HK_PARABOLIC = RatMatrix.from_columns([[1, 0, 0], [1, 1, 0], [Fraction(1, 2), 1, 1]])
HK_INVOLUTION = RatMatrix([[1, 0, 0], [0, -1, 0], [0, 0, 1]])


def fujiki_pair(F: RatMatrix, half_dim: int, name: str) -> tuple[IntersectionModel, AutoAction]:
    return build_fujiki(HK_Q, 1, half_dim, HK_OMEGA), AutoAction(F, name=name)


def _rotation_order4():
    R = [[0, -1], [1, 0]]
    return build_torus(block_diagonal([R, [[1]]]))


def _product(p1, p2):
    def build():
        m1, a1 = jordan_torus(p1)
        m2, a2 = jordan_torus(p2)
        return build_product(m1, a1, m2, a2)

    return build


def _entries() -> list[GalleryEntry]:
    out = []
    for d in range(1, 6):
        out.append(
            GalleryEntry(
                f"identity-d{d}",
                lambda d=d: jordan_torus([1] * d),
                {"plov": d, "gkdim": d + 1, "k": 0, "order_M": 1},
                "trivial action: the volume grows like n^d",
            )
        )
    out.append(
        GalleryEntry(
            "rotation-order4",
            _rotation_order4,
            {"plov": 3, "gkdim": 4, "k": 0, "order_M": 4},
            "finite-order action on E^3: Plov = d after passing to f^M",
        )
    )
    for d in range(2, 6):
        out.append(
            GalleryEntry(
                f"torus-jordan-d{d}",
                lambda d=d: jordan_torus([d]),
                {"plov": d * d, "gkdim": d * d + 1, "k": 2 * (d - 1), "order_M": 1},
                "single Jordan block on E^d: Plov = d^2",
            )
        )
    for name, part, plov in (("torus-j21", [2, 1], 5), ("torus-j22", [2, 2], 8), ("torus-j31", [3, 1], 10)):
        out.append(
            GalleryEntry(
                name,
                lambda part=part: jordan_torus(part),
                {"plov": plov, "gkdim": plov + 1, "k": 2 * (part[0] - 1)},
                f"torus with H^(1,0) blocks {tuple(part)}: Plov = sum of squared block sizes",
            )
        )
    out.append(
        GalleryEntry(
            "product-j2xj2",
            _product([2], [2]),
            {"plov": 8, "gkdim": 9},
            "product of two E^2 Jordan actions: Plov is additive (4 + 4)",
        )
    )
    out.append(
        GalleryEntry(
            "product-j2xe1",
            _product([2], [1]),
            {"plov": 5, "gkdim": 6},
            "product of an E^2 Jordan action with the identity on E: 4 + 1",
        )
    )
    for dp, name in ((1, "fujiki-parabolic"), (2, "fujiki-parabolic-d2")):
        out.append(
            GalleryEntry(
                name,
                lambda dp=dp: fujiki_pair(HK_PARABOLIC, dp, "parabolic"),
                {"plov": 4 * dp, "gkdim": 4 * dp + 1, "k": 2},
                f"parabolic isometry of a Fujiki form, half dimension {dp}: Plov = 4 d'",
            )
        )
    out.append(
        GalleryEntry(
            "fujiki-finite",
            lambda: fujiki_pair(HK_INVOLUTION, 1, "involution"),
            {"plov": 2, "gkdim": 3, "k": 0, "order_M": 2},
            "finite-order isometry of a Fujiki form: Plov = 2 d'",
        )
    )
    return out


GALLERY: dict[str, GalleryEntry] = {e.name: e for e in _entries()}


def get(name: str) -> GalleryEntry:
    try:
        return GALLERY[name]
    except KeyError:
        raise KeyError(f"unknown gallery entry {name!r}; see `plovlab gallery list`") from None
