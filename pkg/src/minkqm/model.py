"""Physical parameters, potentials and the radial equation coefficient.

The angular reduction Psi = u(r)/sqrt(r) * exp(i M phi)/sqrt(2 pi) turns
the stationary problem into u'' + Q(r) u = 0 with

    Q(r) = 2 m E / hbar^2 + (M^2 + 1/4)/r^2 - (2 m / hbar^2) U(r).

Note the sign of the inverse-square term: on this geometry it is
attractive for every real M, so all three systems share the
fall-to-center structure near r = 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError
from .geometry import Region

SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class PhysicalParams:
    """Mass and Planck constant; the units backbone of every formula."""

    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise DomainError(f"mass must be positive, got {self.mass}")
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise DomainError(f"hbar must be positive, got {self.hbar}")


NATURAL_UNITS = PhysicalParams(1.0, 1.0)


@dataclass(frozen=True)
class Free:
    pass


@dataclass(frozen=True)
class Oscillator:
    omega: float

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise DomainError(f"omega must be positive, got {self.omega}")


@dataclass(frozen=True)
class Coulomb:
    """Attractive Coulomb center, U = -alpha/r with alpha > 0."""

    alpha: float

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be positive, got {self.alpha}")


SystemKind = Free | Oscillator | Coulomb


def potential(kind: SystemKind, pp: PhysicalParams, r: float) -> float:
    """U(r) for the three angle-independent systems."""
    if isinstance(kind, Free):
        return 0.0
    if isinstance(kind, Oscillator):
        if r < 0:
            raise DomainError(f"r must be >= 0, got {r}")
        return 0.5 * pp.mass * kind.omega**2 * r * r
    if isinstance(kind, Coulomb):
        if r <= 0:
            raise DomainError(f"Coulomb potential needs r > 0, got {r}")
        return -kind.alpha / r
    raise TypeError(f"unknown system kind {kind!r}")


def effective_potential(
    kind: SystemKind, pp: PhysicalParams, m_ang: float, r: float
) -> float:
    """U_eff(r) = -(hbar^2/2m) (M^2 + 1/4)/r^2 + U(r).

    Strictly negative at every r > 0 for the free particle.
    """
    if r <= 0:
        raise DomainError(f"effective potential needs r > 0, got {r}")
    centrifugal = -(pp.hbar**2 / (2.0 * pp.mass)) * (m_ang * m_ang + 0.25) / (r * r)
    return centrifugal + potential(kind, pp, r)


def euclidean_effective_potential(
    pp: PhysicalParams, m_ang: float, alpha: float, r: float
) -> float:
    """Euclidean-plane Coulomb comparison: -(hbar^2/2m)(1/4 - M^2)/r^2 - alpha/r.

    Differs from the Coulomb effective_potential only in the sign carried
    by M^2; the two coincide identically at M = 0.
    """
    if r <= 0:
        raise DomainError(f"effective potential needs r > 0, got {r}")
    centrifugal = -(pp.hbar**2 / (2.0 * pp.mass)) * (0.25 - m_ang * m_ang) / (r * r)
    return centrifugal - alpha / r


def euclidean_effective_for(
    kind: SystemKind, pp: PhysicalParams, m_ang: float, r: float
) -> float:
    """Sign-flipped (Euclidean) effective potential for any of the three kinds."""
    if r <= 0:
        raise DomainError(f"effective potential needs r > 0, got {r}")
    centrifugal = -(pp.hbar**2 / (2.0 * pp.mass)) * (0.25 - m_ang * m_ang) / (r * r)
    return centrifugal + potential(kind, pp, r)


def angular_mode(m_ang: float, phi: float) -> complex:
    """Angular eigenfunction exp(i M phi)/sqrt(2 pi); unit modulus up to the norm."""
    return cmath.exp(1j * m_ang * phi) / SQRT_2PI


def radial_coefficient(
    kind: SystemKind, pp: PhysicalParams, m_ang: float, E: float, r: float
) -> float:
    """Coefficient Q(r) of u'' + Q u = 0; equals (2m/hbar^2)(E - U_eff)."""
    if r <= 0:
        raise DomainError(f"radial coefficient needs r > 0, got {r}")
    two_m_over_h2 = 2.0 * pp.mass / (pp.hbar**2)
    return (
        two_m_over_h2 * E
        + (m_ang * m_ang + 0.25) / (r * r)
        - two_m_over_h2 * potential(kind, pp, r)
    )


def hamiltonian_sign(region: Region) -> int:
    """Overall sign of the Hamiltonian: +1 in regions I/II, -1 in III/IV.

    In the negative-form regions both the kinetic and the potential term
    flip sign; solvers here run in regions I/II only.
    """
    if region in (Region.I, Region.II):
        return 1
    if region in (Region.III, Region.IV):
        return -1
    raise DomainError("no Hamiltonian sign on the isotropic cone")
