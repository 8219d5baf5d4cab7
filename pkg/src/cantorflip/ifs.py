"""Equicontractive interval iterated function systems on [0,1].

A system is N affine maps x -> b_i + r*x (or the reflected b_i + r*(1-x)),
all with one contraction ratio r in (0, 1/N], images ordered left to right
with pairwise disjoint interiors inside [0,1]. Words over {1..N} address
nested basic intervals: the image of [0,1] under the corresponding
composition, of length exactly r^n at depth n. The attractor has dimension
-log N / log r, which is 1 when r = 1/N (the images tile [0,1]).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .symbolic import LabelWord

__all__ = ["Interval", "IfsSpec", "canonical_spec", "interval", "dim_C"]

_TOL = 1e-9


@dataclass(frozen=True)
class Interval:
    """Closed subinterval of [0,1], stored as left endpoint plus length."""

    left: float
    length: float

    def __post_init__(self) -> None:
        if not self.length > 0:
            raise ValueError(f"interval length must be positive, got {self.length}")
        if self.left < -_TOL or self.left + self.length > 1 + _TOL:
            raise ValueError(
                f"interval [{self.left}, {self.left + self.length}] leaves [0,1]"
            )

    @property
    def right(self) -> float:
        return self.left + self.length

    @property
    def midpoint(self) -> float:
        return self.left + self.length / 2.0


@dataclass(frozen=True)
class IfsSpec:
    """N equicontractive affine maps with ratio r, translations and orientations.

    Map i sends [0,1] onto [b_i, b_i + r]; orientation -1 reverses it within
    the same image. Validation enforces containment in [0,1], left-to-right
    ordering, disjoint open images, and (unless r = 1/N, where the images
    necessarily tile) strictly positive gaps.
    """

    N: int
    r: float
    translations: tuple[float, ...]
    orientations: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.N < 2:
            raise ValueError(f"need at least 2 maps, got {self.N}")
        if not 0 < self.r:
            raise ValueError(f"contraction ratio must be positive, got {self.r}")
        if self.r > 1.0 / self.N + 1e-12:
            raise ValueError(
                f"contraction ratio {self.r} exceeds 1/N = {1.0 / self.N}; "
                "images of disjoint interiors no longer fit in [0,1]"
            )
        b = tuple(float(x) for x in self.translations)
        o = tuple(int(x) for x in self.orientations)
        object.__setattr__(self, "translations", b)
        object.__setattr__(self, "orientations", o)
        if len(b) != self.N:
            raise ValueError(f"expected {self.N} translations, got {len(b)}")
        if len(o) != self.N:
            raise ValueError(f"expected {self.N} orientations, got {len(o)}")
        for x in o:
            if x not in (-1, 1):
                raise ValueError(f"orientation must be +1 or -1, got {x}")
        for x in b:
            if x < -_TOL or x + self.r > 1 + _TOL:
                raise ValueError(f"image [{x}, {x + self.r}] leaves [0,1]")
        touching_allowed = 1.0 - self.N * self.r <= _TOL  # r = 1/N forces tiling
        for i in range(self.N - 1):
            gap = b[i + 1] - b[i] - self.r
            if gap < -1e-12:
                raise ValueError(
                    f"images {i + 1} and {i + 2} overlap (gap {gap}); "
                    "translations must be ordered with disjoint open images"
                )
            if gap <= 1e-12 and not touching_allowed:
                raise ValueError(
                    f"images {i + 1} and {i + 2} touch although r < 1/N; "
                    "touching images are only consistent with r = 1/N"
                )

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "r": self.r,
            "translations": list(self.translations),
            "orientations": list(self.orientations),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IfsSpec":
        N = data["N"]
        r = data["r"]
        translations = data.get("translations")
        orientations = data.get("orientations")
        if translations is None:
            return_spec = canonical_spec(N, r)
            translations = return_spec.translations
        if orientations is None:
            orientations = (1,) * N
        return cls(N, r, tuple(translations), tuple(orientations))


def canonical_spec(N: int, r: float) -> IfsSpec:
    """Orientation-preserving maps with equally spaced images.

    b_i = (i-1)(1-r)/(N-1), so the first image starts at 0, the last ends at
    1, and all gaps are equal. For N=2, r=1/3 this is the middle-thirds
    layout; for r = 1/N the images tile [0,1].
    """
    if N < 2:
        raise ValueError(f"need at least 2 maps, got {N}")
    b = tuple((i - 1) * (1.0 - r) / (N - 1) for i in range(1, N + 1))
    return IfsSpec(N, float(r), b, (1,) * N)


def _as_symbols(w: LabelWord | Sequence[int], N: int) -> tuple[int, ...]:
    if isinstance(w, LabelWord):
        if w.N != N:
            raise ValueError(f"word alphabet {w.N} does not match the system's N={N}")
        return w.symbols
    symbols = tuple(int(s) for s in w)
    for s in symbols:
        if not 1 <= s <= N:
            raise ValueError(f"label symbol {s} outside 1..{N}")
    return symbols


def interval(spec: IfsSpec, w: LabelWord | Sequence[int]) -> Interval:
    """Basic interval addressed by ``w``: image of [0,1] under the composition.

    The affine composition is accumulated left to right, so the rounding
    error of an endpoint grows only linearly with the depth. The length is
    r^len(w) up to that rounding.
    """
    symbols = _as_symbols(w, spec.N)
    a, c = 1.0, 0.0  # current composition x -> a*x + c
    for s in symbols:
        b = spec.translations[s - 1]
        if spec.orientations[s - 1] == 1:
            a, c = a * spec.r, c + a * b
        else:
            a, c = -a * spec.r, c + a * (b + spec.r)
    left = c + a if a < 0 else c
    return Interval(left, abs(a))


def dim_C(spec: IfsSpec) -> float:
    """Dimension of the attractor: -log N / log r (equals 1 when r = 1/N)."""
    return -math.log(spec.N) / math.log(spec.r)
