"""Analytic spectral machinery for the Coulomb, free and oscillator systems.

Two distinct spectral branches live here and are never mixed:

* the closed-form branch, where the confluent series terminates and the
  energy is complex for M != 0 (unstable decay states);
* the quantized-third branch, real negative (Coulomb/free) or real
  positive (oscillator) energies obtained from the phase condition
  f(E_n) = f(E_0) + pi n relative to a caller-supplied reference level.

A reference level is required because the attractive inverse-square tail
fixes only level *spacings*, never an absolute anchor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable

import numpy as np

from .errors import BracketError, ConsistencyError, DomainError, PoleError
from .model import PhysicalParams
from .specfun import (
    KummerParams,
    _kummer_m_ld,
    _ln_gamma_ld,
    DEFAULT_SERIES_TOL,
)

_UNIT_MODULUS_TOL = 1e-10
_DUALITY_TOL = 1e-12


class Branch(str, Enum):
    CLOSED_FORM_U1 = "closed_form_u1"
    QUANTIZED_THIRD = "quantized_third"
    DEEP_ASYMPTOTIC = "deep_asymptotic"
    SHALLOW_ASYMPTOTIC = "shallow_asymptotic"


@dataclass(frozen=True)
class SpectrumEntry:
    n: int
    m_ang: float
    energy: complex
    branch: Branch


@dataclass(frozen=True)
class ScaledCoulomb:
    """Bound-state scaling of the Coulomb problem at energy E < 0.

    r0 is the length unit, g the dimensionless strength (the effective
    principal quantum number: E = -m alpha^2 / (2 hbar^2 g^2)), and the
    radial variable below is always z = r/r0.
    """

    r0: float
    g: float
    energy: float

    def __post_init__(self):
        if not (self.r0 > 0 and math.isfinite(self.r0)):
            raise DomainError(f"r0 must be positive, got {self.r0}")
        if not (self.g > 0 and math.isfinite(self.g)):
            raise DomainError(f"g must be positive, got {self.g}")
        if not self.energy < 0:
            raise DomainError(f"scaling defined for E < 0, got {self.energy}")


@dataclass(frozen=True)
class ReflectionPhase:
    """Near-origin reflection phase of u ~ sqrt(r) sin(M ln r + gamma).

    gamma is reduced to [0, pi); gamma_raw is the unreduced companion used
    when a continuous phase is needed; beta = gamma - M ln r0 carries the
    energy dependence.
    """

    gamma: float
    beta: float
    gamma_raw: float


def coulomb_scaling(pp: PhysicalParams, alpha: float, energy: float) -> ScaledCoulomb:
    """Length unit r0 = hbar/(2 sqrt(-2mE)) and strength g = m alpha/(hbar sqrt(-2mE))."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if not energy < 0:
        raise DomainError(f"bound-state scaling needs E < 0, got E={energy}")
    root = math.sqrt(-2.0 * pp.mass * energy)
    return ScaledCoulomb(
        r0=pp.hbar / (2.0 * root),
        g=pp.mass * alpha / (pp.hbar * root),
        energy=energy,
    )


def _energy_from_g(pp: PhysicalParams, alpha: float, g: float) -> float:
    s2 = g * g
    return -(pp.mass * alpha * alpha) / (2.0 * pp.hbar * pp.hbar * s2)


def coulomb_closed_spectrum(
    pp: PhysicalParams, alpha: float, n: int, m_ang: float
) -> complex:
    """Closed-form level -m alpha^2 / (2 hbar^2 (n + 1/2 + iM)^2).

    Real (and equal to the Euclidean-plane ladder) exactly when M = 0;
    complex decay states otherwise.  M -> -M conjugates the energy.
    """
    if n < 0:
        raise DomainError(f"level index must be >= 0, got {n}")
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    w = complex(n + 0.5, m_ang)
    return -(pp.mass * alpha * alpha) / (2.0 * pp.hbar * pp.hbar * (w * w))


def shallow_spectrum(pp: PhysicalParams, alpha: float, g0: float, n: int) -> float:
    """Rydberg-like level -m alpha^2/(2 hbar^2 (n+g0)^2) of the shallow regime."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    s = n + g0
    if not s > 0:
        raise DomainError(f"n + g0 must be positive, got {s}")
    return -(pp.mass * alpha * alpha) / (2.0 * pp.hbar * pp.hbar * (s * s))


def deep_ladder(energy0: float, m_ang: float, n: int) -> float:
    """Geometric ladder E_n = E0 exp(2 pi n / M); exact for the free particle,
    asymptotic (deep levels) for the Coulomb system."""
    if not energy0 < 0:
        raise DomainError(f"ladder anchor must be negative, got {energy0}")
    if m_ang == 0:
        raise DomainError("ladder undefined at M = 0")
    return energy0 * math.exp(2.0 * math.pi * n / m_ang)


def free_spectrum(energy0: float, m_ang: float, n: int) -> float:
    """Free-particle discrete level; the same geometric ladder, exact at alpha = 0.

    Only E < 0 is discrete; positive energies belong to the continuum and
    are not enumerated here.
    """
    if not energy0 < 0:
        raise DomainError(
            f"free discrete spectrum needs E0 < 0 (E > 0 is the continuum), got {energy0}"
        )
    return deep_ladder(energy0, m_ang, n)


# --------------------------------------------------------------------------
# wavefunctions (unnormalized, leading constant 1, argument z = r/r0)

def _u1_ld(g: float, m_ang: float, z: float, tol: float):
    params = KummerParams(complex(0.5 - g, m_ang), complex(1.0, 2.0 * m_ang))
    zl = np.clongdouble(z)
    lnz = np.log(zl)
    pref = np.exp(-zl / 2 + np.clongdouble(0.5) * lnz + np.clongdouble(1j * m_ang) * lnz)
    return pref * _kummer_m_ld(params, z, tol, 10_000)


def _u2_ld(g: float, m_ang: float, z: float, tol: float):
    params = KummerParams(complex(0.5 - g, -m_ang), complex(1.0, -2.0 * m_ang))
    zl = np.clongdouble(z)
    lnz = np.log(zl)
    pref = np.exp(-zl / 2 + np.clongdouble(0.5) * lnz - np.clongdouble(1j * m_ang) * lnz)
    return pref * _kummer_m_ld(params, z, tol, 10_000)


def coulomb_u1(
    g: float, m_ang: float, z: float, tol: float = DEFAULT_SERIES_TOL
) -> complex:
    """First radial solution e^{-z/2} sqrt(z) z^{iM} F(iM + 1/2 - g, 2iM + 1, z).

    Unnormalized; |u1| ~ sqrt(z) as z -> 0 regardless of M (the z^{iM}
    factor has unit modulus).  The amplitude depends only on (g, M, z).
    """
    if z <= 0:
        raise DomainError(f"z must be positive, got {z}")
    return complex(_u1_ld(g, m_ang, z, tol))


def coulomb_u2(
    g: float, m_ang: float, z: float, tol: float = DEFAULT_SERIES_TOL
) -> complex:
    """Second radial solution; the M -> -M mirror of u1, and its complex
    conjugate for real parameters."""
    if z <= 0:
        raise DomainError(f"z must be positive, got {z}")
    return complex(_u2_ld(g, m_ang, z, tol))


def coulomb_third(
    g: float,
    m_ang: float,
    z: float,
    gamma: float | None = None,
    tol: float = DEFAULT_SERIES_TOL,
) -> complex:
    """Superposition u1 - e^{-2i gamma} u2 (leading constant 1).

    With gamma = None the reflection phase that kills the growing
    exponential is solved for automatically.  The two series cancel
    against each other at large z; extended-precision accumulation keeps
    the combination trustworthy up to z of roughly 60-70, beyond which the
    asymptotic form should be used instead.
    """
    if z <= 0:
        raise DomainError(f"z must be positive, got {z}")
    if gamma is None:
        gamma = gamma_phase(g, m_ang).gamma
    phase = np.exp(np.clongdouble(-2j) * np.clongdouble(gamma))
    return complex(_u1_ld(g, m_ang, z, tol) - phase * _u2_ld(g, m_ang, z, tol))


def coulomb_u1_asymptotic(g: float, m_ang: float, z: float) -> complex:
    """Leading large-z form of u1: e^{z/2} z^{-g} Gamma(1+2iM)/Gamma(1/2+iM-g)."""
    if z <= 0:
        raise DomainError(f"z must be positive, got {z}")
    a = complex(0.5 - g, m_ang)
    c = complex(1.0, 2.0 * m_ang)
    expo = (
        _ln_gamma_ld(c)
        - _ln_gamma_ld(a)
        + np.clongdouble(z) / 2
        - np.clongdouble(g) * np.log(np.clongdouble(z))
    )
    return complex(np.exp(expo))


def coulomb_third_asymptotic(
    g: float, m_ang: float, z: float, gamma: float
) -> complex:
    """Growing-branch amplitude of the third solution at large z.

    e^{z/2} z^{-g} [K1 - e^{-2i gamma} K2] with the Gamma-ratio
    coefficients of the two basis solutions; identically zero (up to
    rounding) when gamma solves the decay condition.
    """
    if z <= 0:
        raise DomainError(f"z must be positive, got {z}")
    a = complex(0.5 - g, m_ang)
    c = complex(1.0, 2.0 * m_ang)
    k1 = _ln_gamma_ld(c) - _ln_gamma_ld(a)
    k2 = _ln_gamma_ld(c.conjugate()) - _ln_gamma_ld(a.conjugate())
    envelope = np.exp(
        np.clongdouble(z) / 2 - np.clongdouble(g) * np.log(np.clongdouble(z))
    )
    coeff = np.exp(k1) - np.exp(np.clongdouble(-2j) * np.clongdouble(gamma) + k2)
    return complex(envelope * coeff)


# --------------------------------------------------------------------------
# reflection phase and quantization condition

def gamma_phase(g: float, m_ang: float, r0: float | None = None) -> ReflectionPhase:
    """Reflection phase gamma solving the decay condition at infinity.

    e^{-2i gamma} = Gamma(1+2iM) Gamma(1/2-iM-g) /
                    [Gamma(1-2iM) Gamma(1/2+iM-g)]

    The right-hand side is a ratio of conjugate products, so it has unit
    modulus; this is verified to 1e-10 as an internal cross-check.  gamma
    is reduced to [0, pi); the unreduced value is kept alongside.  beta =
    gamma - M ln r0 uses the supplied r0, defaulting to the natural-units
    value r0 = g/2 (hbar = m = alpha = 1).

    At M = 0 the phase is identically zero except at g - 1/2 equal to a
    non-negative integer, where the Gamma factors sit on poles (these are
    exactly the closed-form levels) and PoleError is raised.
    """
    if g <= 0:
        raise DomainError(f"g must be positive, got {g}")
    if r0 is None:
        r0 = g / 2.0
    if r0 <= 0:
        raise DomainError(f"r0 must be positive, got {r0}")

    if m_ang == 0.0:
        k = round(g - 0.5)
        if k >= 0 and abs(g - 0.5 - k) <= 1e-12:
            raise PoleError(
                f"gamma undefined at M=0, g={g}: Gamma pole (closed-form level n={k})"
            )
        return ReflectionPhase(gamma=0.0, beta=0.0, gamma_raw=0.0)

    num = _ln_gamma_ld(complex(1.0, 2.0 * m_ang)) + _ln_gamma_ld(
        complex(0.5 - g, -m_ang)
    )
    den = _ln_gamma_ld(complex(1.0, -2.0 * m_ang)) + _ln_gamma_ld(
        complex(0.5 - g, m_ang)
    )
    rhs = np.exp(num - den)
    if abs(float(np.abs(rhs)) - 1.0) > _UNIT_MODULUS_TOL:
        raise ConsistencyError(
            f"reflection ratio lost unit modulus: |RHS| = {float(np.abs(rhs))!r}"
        )
    gamma_raw = float(np.longdouble(-0.5) * np.imag(num - den))
    gamma = math.fmod(gamma_raw, math.pi)
    if gamma < 0.0:
        gamma += math.pi
    return ReflectionPhase(
        gamma=gamma, beta=gamma - m_ang * math.log(r0), gamma_raw=gamma_raw
    )


def quantization_f(g: float, m_ang: float) -> float:
    """Phase function f = -M ln g + arg Gamma(1/2 - g + iM) - arg Gamma(1 + 2iM).

    The Gamma argument is the continuous (analytic) one, not reduced mod
    2 pi, so f is continuous along any pole-free path in g; for M != 0
    there are no poles at all.  Deep regime (g -> 0): f ~ -M ln g.
    Shallow regime (g -> inf): f ~ -pi g (for M > 0).
    """
    if g <= 0:
        raise DomainError(f"g must be positive, got {g}")
    w = complex(0.5 - g, m_ang)
    if m_ang == 0.0:
        k = round(g - 0.5)
        if k >= 0 and abs(g - 0.5 - k) <= 1e-12:
            raise PoleError(f"quantization function hits a Gamma pole at g={g}, M=0")
    value = (
        np.longdouble(-m_ang) * np.log(np.longdouble(g))
        + np.imag(_ln_gamma_ld(w))
        - np.imag(_ln_gamma_ld(complex(1.0, 2.0 * m_ang)))
    )
    return float(value)


def _bracket_and_bisect(
    f: Callable[[float], float],
    x0: float,
    f0: float,
    target: float,
    slope_sign: float,
    step: float,
    max_steps: int,
    tol_x: float,
    describe: Callable[[float], str],
) -> float:
    """March along a monotone f from x0 until target is bracketed, then bisect."""
    if f0 == target:
        return x0
    direction = 1.0 if (target - f0) * slope_sign > 0 else -1.0
    x_prev, f_prev = x0, f0
    for k in range(1, max_steps + 1):
        x = x0 + direction * k * step
        fx = f(x)
        if (f_prev - target) * (fx - target) <= 0.0:
            lo, hi, flo = x_prev, x, f_prev
            for _ in range(300):
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if (flo - target) * (fm - target) <= 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
                if abs(hi - lo) <= tol_x:
                    break
            return 0.5 * (lo + hi)
        x_prev, f_prev = x, fx
    x_end = x0 + direction * max_steps * step
    raise BracketError(
        f"no sign change for target {target:.6g} inside the scan window "
        f"[{describe(min(x0, x_end))}, {describe(max(x0, x_end))}]"
    )


def solve_quantized_spectrum(
    pp: PhysicalParams,
    alpha: float,
    m_ang: float,
    energy0: float,
    n_range: Iterable[int],
    tol: float = 1e-10,
    points_per_decade: int = 64,
    max_decades: float = 160.0,
) -> list[SpectrumEntry]:
    """Levels of the third-solution condition f(E_n) = f(E_0) + pi n.

    n > 0 walks toward deeper (more negative) energies, n < 0 toward the
    shallow Rydberg-like end; n = 0 returns the anchor itself.  alpha = 0
    selects the free particle, for which the condition is exactly the
    geometric ladder.  Bracketing scans a geometric grid (points_per_decade
    per decade of the scan variable) and refines by bisection to relative
    energy tolerance tol.
    """
    if m_ang == 0.0:
        raise DomainError("quantized spectrum needs M != 0")
    if not energy0 < 0:
        raise DomainError(
            f"reference level must be negative (E > 0 is the continuous "
            f"spectrum), got {energy0}"
        )
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    if tol <= 0:
        raise DomainError("tol must be positive")

    step = math.log(10.0) / points_per_decade
    max_steps = int(points_per_decade * max_decades)
    tol_x = tol / 2.0

    entries: list[SpectrumEntry] = []
    if alpha > 0.0:
        g0 = coulomb_scaling(pp, alpha, energy0).g
        x0 = math.log(g0)

        def f_of_x(x: float) -> float:
            return quantization_f(math.exp(x), m_ang)

        def describe(x: float) -> str:
            return f"E={_energy_from_g(pp, alpha, math.exp(x)):.6g}"

        f0 = f_of_x(x0)
        slope = -1.0 if m_ang > 0 else 1.0  # f decreasing in ln g for M > 0
        for n in n_range:
            if n == 0:
                entries.append(
                    SpectrumEntry(0, m_ang, complex(energy0, 0.0), Branch.QUANTIZED_THIRD)
                )
                continue
            target = f0 + math.pi * n
            xn = _bracket_and_bisect(
                f_of_x, x0, f0, target, slope, step, max_steps, tol_x, describe
            )
            energy = _energy_from_g(pp, alpha, math.exp(xn))
            entries.append(
                SpectrumEntry(n, m_ang, complex(energy, 0.0), Branch.QUANTIZED_THIRD)
            )
    else:
        # Free particle: f(E) = -M ln r0(E) up to a constant that cancels.
        x0 = math.log(-energy0)

        def f_free(x: float) -> float:
            root = math.sqrt(2.0 * pp.mass) * math.exp(0.5 * x)
            return m_ang * math.log(2.0 * root / pp.hbar)

        def describe(x: float) -> str:
            return f"E={-math.exp(x):.6g}"

        f0 = f_free(x0)
        slope = 0.5 if m_ang > 0 else -0.5
        for n in n_range:
            if n == 0:
                entries.append(
                    SpectrumEntry(0, m_ang, complex(energy0, 0.0), Branch.QUANTIZED_THIRD)
                )
                continue
            target = f0 + math.pi * n
            xn = _bracket_and_bisect(
                f_free, x0, f0, target, slope, step, max_steps, tol_x, describe
            )
            entries.append(
                SpectrumEntry(n, m_ang, complex(-math.exp(xn), 0.0), Branch.QUANTIZED_THIRD)
            )
    return entries


# --------------------------------------------------------------------------
# Coulomb <-> oscillator duality

@dataclass(frozen=True)
class DualityMap:
    """Substitution r0 r = rho^2, phi = 2 phi mapping Coulomb data to
    oscillator data: r0 E_osc = 4 alpha, m omega^2 r0^2 = -8 E_C,
    M_osc = 2 M_C."""

    r0_scale: float
    alpha: float
    e_coulomb: float
    omega: float
    e_osc: float
    m_coulomb: float
    m_osc: float


def duality_forward(
    pp: PhysicalParams,
    alpha: float,
    e_coulomb: float,
    m_coulomb: float,
    r0_scale: float,
) -> DualityMap:
    """Map a Coulomb level to the dual oscillator, checking the energy relation.

    omega = sqrt(-8 E_C / (m r0^2)), E_osc = 4 alpha / r0, M_osc = 2 M_C.
    The equivalent relation E_osc = 2 alpha omega sqrt(m) / sqrt(-2 E_C)
    (positive branch) is verified to 1e-12 relative as a consistency check.
    """
    if not e_coulomb < 0:
        raise DomainError(f"duality needs E_coulomb < 0, got {e_coulomb}")
    if r0_scale <= 0:
        raise DomainError(f"r0_scale must be positive, got {r0_scale}")
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    omega = math.sqrt(-8.0 * e_coulomb / (pp.mass * r0_scale * r0_scale))
    e_osc = 4.0 * alpha / r0_scale
    e_osc_alt = 2.0 * alpha * omega * math.sqrt(pp.mass) / math.sqrt(-2.0 * e_coulomb)
    if abs(e_osc - e_osc_alt) > _DUALITY_TOL * abs(e_osc):
        raise ConsistencyError(
            f"duality energy relation violated: {e_osc} vs {e_osc_alt}"
        )
    return DualityMap(
        r0_scale=r0_scale,
        alpha=alpha,
        e_coulomb=e_coulomb,
        omega=omega,
        e_osc=e_osc,
        m_coulomb=m_coulomb,
        m_osc=2.0 * m_coulomb,
    )


# --------------------------------------------------------------------------
# oscillator spectra and wavefunctions

def oscillator_closed_spectrum(
    pp: PhysicalParams, omega: float, n: int, m_osc: float
) -> complex:
    """Closed-form oscillator level hbar omega (2n + 1 + i M_osc)."""
    if n < 0:
        raise DomainError(f"level index must be >= 0, got {n}")
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    hw = pp.hbar * omega
    return complex(hw * (2 * n + 1), hw * m_osc)


def oscillator_wavefunction(
    pp: PhysicalParams,
    omega: float,
    n: int,
    m_osc: float,
    rho: float,
    phi: float,
    tol: float = DEFAULT_SERIES_TOL,
) -> complex:
    """Unnormalized oscillator amplitude
    rho^{iM} e^{-m omega rho^2 / 2 hbar} F(-n, 1 + iM, m omega rho^2/hbar) e^{iM phi}.

    The Kummer factor is a degree-n polynomial in m omega rho^2 / hbar.
    """
    if rho <= 0:
        raise DomainError(f"rho must be positive, got {rho}")
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    x = pp.mass * omega * rho * rho / pp.hbar
    params = KummerParams(complex(-n, 0.0), complex(1.0, m_osc))
    lnrho = np.log(np.clongdouble(rho))
    pref = np.exp(
        np.clongdouble(1j * m_osc) * lnrho
        - np.clongdouble(x) / 2
        + np.clongdouble(1j * m_osc * phi)
    )
    return complex(pref * _kummer_m_ld(params, x, tol, 10_000))


def oscillator_quantized_spectrum(
    pp: PhysicalParams,
    omega: float,
    m_osc: float,
    energy0: float,
    n_range: Iterable[int],
    tol: float = 1e-10,
    points_per_decade: int = 64,
    max_decades: float = 160.0,
) -> list[SpectrumEntry]:
    """Oscillator levels of the third-solution condition, with g = E/(2 hbar omega).

    The phase function is the Coulomb one evaluated at M_C = M_osc/2.
    Indices follow the energy: n > 0 climbs (spacing -> 2 hbar omega),
    n < 0 descends toward E = 0+ on the geometric ladder
    E_n = E_0 exp(2 pi n / M_osc), so the descending levels carry
    n = -1, -2, ... as they condense.
    """
    if m_osc == 0.0:
        raise DomainError("quantized spectrum needs M_osc != 0")
    if not energy0 > 0:
        raise DomainError(f"oscillator reference level must be positive, got {energy0}")
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if tol <= 0:
        raise DomainError("tol must be positive")

    m_c = 0.5 * m_osc
    two_hw = 2.0 * pp.hbar * omega
    g0 = energy0 / two_hw
    x0 = math.log(g0)

    def f_of_x(x: float) -> float:
        return quantization_f(math.exp(x), m_c)

    def describe(x: float) -> str:
        return f"E={two_hw * math.exp(x):.6g}"

    step = math.log(10.0) / points_per_decade
    max_steps = int(points_per_decade * max_decades)
    tol_x = tol / 2.0
    f0 = f_of_x(x0)
    slope = -1.0 if m_c > 0 else 1.0

    entries: list[SpectrumEntry] = []
    for n in n_range:
        if n == 0:
            entries.append(
                SpectrumEntry(0, m_osc, complex(energy0, 0.0), Branch.QUANTIZED_THIRD)
            )
            continue
        # Rising energy for rising n: the condition reads f(g_n) = f(g_0) - pi n.
        target = f0 - math.pi * n
        xn = _bracket_and_bisect(
            f_of_x, x0, f0, target, slope, step, max_steps, tol_x, describe
        )
        energy = two_hw * math.exp(xn)
        entries.append(
            SpectrumEntry(n, m_osc, complex(energy, 0.0), Branch.QUANTIZED_THIRD)
        )
    return entries
