"""Potential shapes: symmetric Woods-Saxon, square, and cusp, barrier and well.

All shapes are even in x. Natural units hbar = c = m = 1 throughout, so x is
in inverse mass units and V0 in mass units.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["Shape", "PotentialSpec", "evaluate", "symmetry_check"]


class Shape(str, enum.Enum):
    WoodsSaxonBarrier = "WoodsSaxonBarrier"
    WoodsSaxonWell = "WoodsSaxonWell"
    SquareBarrier = "SquareBarrier"
    SquareWell = "SquareWell"
    CuspBarrier = "CuspBarrier"
    CuspWell = "CuspWell"


_WELLS = {Shape.WoodsSaxonWell, Shape.SquareWell, Shape.CuspWell}


@dataclass(frozen=True)
class PotentialSpec:
    """Shape plus parameters (a: steepness, L: half-width, V0: height/depth).

    The square shapes ignore a; the cusp shapes ignore L (their width is set
    by a alone, V = V0 exp(-|x|/a)).
    """

    shape: Shape
    a: float = 1.0
    L: float = 1.0
    V0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "shape", Shape(self.shape))
        for name in ("a", "L", "V0"):
            v = float(getattr(self, name))
            floor = 0.0 if name == "V0" else None  # V0 = 0 is the free case
            if not math.isfinite(v) or v < 0 or (floor is None and v == 0):
                raise DomainError(f"{name} must be finite and positive, got {v!r}")
            object.__setattr__(self, name, v)

    @property
    def is_well(self) -> bool:
        return self.shape in _WELLS

    def flipped(self) -> "PotentialSpec":
        """The barrier for a well and vice versa, same parameters."""
        pairs = {
            Shape.WoodsSaxonBarrier: Shape.WoodsSaxonWell,
            Shape.SquareBarrier: Shape.SquareWell,
            Shape.CuspBarrier: Shape.CuspWell,
        }
        inverse = {v: k for k, v in pairs.items()}
        return PotentialSpec(pairs.get(self.shape) or inverse[self.shape],
                             self.a, self.L, self.V0)

    def to_json(self) -> str:
        return json.dumps({"shape": self.shape.value, "a": self.a,
                           "L": self.L, "V0": self.V0})

    @classmethod
    def from_json(cls, text: str) -> "PotentialSpec":
        obj = json.loads(text)
        try:
            return cls(Shape(obj["shape"]), obj["a"], obj["L"], obj["V0"])
        except KeyError as missing:
            raise DomainError(f"potential JSON missing field {missing}") from None


def evaluate(spec: PotentialSpec, x):
    """V(x) for the given shape; accepts scalars or arrays.

    The Heaviside split of the Woods-Saxon barrier collapses to a single
    expression in |x| (with Theta(0) = 1 picking the x > 0 branch, which is
    continuous with the other one anyway).
    """
    ax = np.abs(np.asarray(x, dtype=float))
    shape = spec.shape
    if shape in (Shape.WoodsSaxonBarrier, Shape.WoodsSaxonWell):
        with np.errstate(over="ignore"):
            v = spec.V0 / (1.0 + np.exp(spec.a * (ax - spec.L)))
    elif shape in (Shape.SquareBarrier, Shape.SquareWell):
        v = np.where(ax <= spec.L, spec.V0, 0.0)
    else:
        v = spec.V0 * np.exp(-ax / spec.a)
    if spec.is_well:
        v = -v
    if np.isscalar(x) or np.asarray(x).ndim == 0:
        return float(v)
    return v


def symmetry_check(spec: PotentialSpec, x):
    """evaluate(spec, x) - evaluate(spec, -x); zero for these even shapes."""
    return evaluate(spec, x) - evaluate(spec, np.negative(x))
