"""Coordinate charts on the Minkowski plane.

The quadratic form s^2 = x1^2 - x2^2 splits the plane into four regions
separated by the isotropic lines x1 = +-x2.  Regions I/II (positive form)
carry polar coordinates (r, phi) with x = (+-r cosh phi, +-r sinh phi);
regions III/IV (negative form) carry (rho, chi) with
x = (+-rho sinh chi, +-rho cosh chi).  The hyperbolic angle is unbounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, IsotropicPointError

#: Default relative tolerance for isotropic-cone classification.
ISOTROPIC_TOL = 1e-12


class Region(Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    ISOTROPIC = "isotropic"


@dataclass(frozen=True)
class CartesianPoint:
    x1: float
    x2: float

    def __post_init__(self):
        if not (math.isfinite(self.x1) and math.isfinite(self.x2)):
            raise DomainError(f"non-finite Cartesian point ({self.x1}, {self.x2})")


@dataclass(frozen=True)
class PolarPoint:
    """Point in one of the four regions: (radius, hyperbolic angle)."""

    region: Region
    radius: float
    angle: float

    def __post_init__(self):
        if self.region not in (Region.I, Region.II, Region.III, Region.IV):
            raise DomainError(f"polar point needs a proper region, got {self.region}")
        if not (self.radius >= 0.0 and math.isfinite(self.radius)):
            raise DomainError(f"radius must be finite and >= 0, got {self.radius}")
        if not math.isfinite(self.angle):
            raise DomainError(f"angle must be finite, got {self.angle}")


def interval(p: CartesianPoint) -> float:
    """Quadratic form s^2 = x1^2 - x2^2."""
    return p.x1 * p.x1 - p.x2 * p.x2


def classify(p: CartesianPoint, tol: float = ISOTROPIC_TOL) -> Region:
    """Region of the plane containing p.

    Points with |x1^2 - x2^2| <= tol * (x1^2 + x2^2) are Isotropic (the
    tolerance is relative, so the cone test is scale invariant); the
    origin is Isotropic as well.
    """
    if tol < 0:
        raise DomainError("tol must be >= 0")
    s2 = interval(p)
    scale = p.x1 * p.x1 + p.x2 * p.x2
    if scale == 0.0 or abs(s2) <= tol * scale:
        return Region.ISOTROPIC
    if s2 > 0.0:
        return Region.I if p.x1 > 0 else Region.II
    return Region.III if p.x2 > 0 else Region.IV


def to_polar(p: CartesianPoint, tol: float = ISOTROPIC_TOL) -> PolarPoint:
    """Polar coordinates of a non-isotropic point.

    Regions I/II: radius sqrt(x1^2-x2^2), angle artanh(x2/x1).
    Regions III/IV: radius sqrt(x2^2-x1^2), angle artanh(x1/x2).
    """
    region = classify(p, tol)
    if region is Region.ISOTROPIC:
        raise IsotropicPointError(
            f"({p.x1}, {p.x2}) lies on the isotropic cone; no polar chart"
        )
    if region in (Region.I, Region.II):
        radius = math.sqrt(p.x1 * p.x1 - p.x2 * p.x2)
        angle = math.atanh(p.x2 / p.x1)
    else:
        radius = math.sqrt(p.x2 * p.x2 - p.x1 * p.x1)
        angle = math.atanh(p.x1 / p.x2)
    return PolarPoint(region, radius, angle)


def to_cartesian(q: PolarPoint) -> CartesianPoint:
    """Inverse chart; sign of both components follows the region."""
    if q.region is Region.I:
        return CartesianPoint(q.radius * math.cosh(q.angle), q.radius * math.sinh(q.angle))
    if q.region is Region.II:
        return CartesianPoint(-q.radius * math.cosh(q.angle), -q.radius * math.sinh(q.angle))
    if q.region is Region.III:
        return CartesianPoint(q.radius * math.sinh(q.angle), q.radius * math.cosh(q.angle))
    return CartesianPoint(-q.radius * math.sinh(q.angle), -q.radius * math.cosh(q.angle))
