"""Independent numerical verification path for the radial problem.

Everything here works directly on the ODE u'' + Q(r) u = 0 and never
touches the Gamma-function machinery, so agreement with the analytic
solvers is a genuine cross-check.

The workhorse direction is *inward*: the solution decaying at infinity is
unique up to scale, so integrating from r_max toward the origin needs no
knowledge of the reflection phase; the phase is then read off by fitting
u/sqrt(r) against sin/cos of M ln r near the origin, where the
inverse-square term dominates.  Integration runs on a grid uniform in
x = ln r with the transformed equation

    v'' + W(x) v = 0,   v = u/sqrt(r),   W = r^2 Q(r) - 1/4,

which near the origin tends to the constant M^2 (v oscillates uniformly
in x there, ideal for the fit) and needs no grid stitching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .errors import (
    DomainError,
    FitQualityError,
    InsufficientRootsError,
)
from .model import Coulomb, Free, Oscillator, PhysicalParams, SystemKind, radial_coefficient

_RENORM_LIMIT = 1e100
_STABILITY_BOUND = 0.01  # h^2 * max|coefficient| must stay below this


@dataclass(frozen=True)
class ShootingConfig:
    """Grid window for one radial integration; steps is the point count.

    decay_threshold is the |u(r_max)|/max|u| ratio below which a solution
    counts as decayed at the outer edge (see RadialSolution.decay_ratio).
    """

    r_min: float
    r_max: float
    steps: int = 6000
    decay_threshold: float = 1e-6

    def __post_init__(self):
        if not (0 < self.r_min < self.r_max):
            raise DomainError(
                f"need 0 < r_min < r_max, got ({self.r_min}, {self.r_max})"
            )
        if self.steps < 1000:
            raise DomainError(f"steps must be >= 1000, got {self.steps}")
        if not self.decay_threshold > 0:
            raise DomainError("decay_threshold must be positive")

    def rescaled(self, factor: float) -> "ShootingConfig":
        return ShootingConfig(
            self.r_min * factor, self.r_max * factor, self.steps, self.decay_threshold
        )


def bound_state_length(pp: PhysicalParams, energy: float) -> float:
    """Decay length unit r0 = hbar / (2 sqrt(-2 m E)); defined for any E < 0."""
    if not energy < 0:
        raise DomainError(f"length unit needs E < 0, got {energy}")
    return pp.hbar / (2.0 * math.sqrt(-2.0 * pp.mass * energy))


def scaled_config(
    pp: PhysicalParams,
    energy: float,
    min_factor: float = 1e-4,
    max_factor: float = 50.0,
    steps: int = 6000,
    decay_threshold: float = 1e-6,
) -> ShootingConfig:
    """Config spanning [min_factor, max_factor] in units of r0(E)."""
    r0 = bound_state_length(pp, energy)
    return ShootingConfig(min_factor * r0, max_factor * r0, steps, decay_threshold)


@dataclass(frozen=True)
class RadialSolution:
    """Sampled radial amplitude u(r) with the data that produced it.

    Stored values are rescaled by exp(-log_scale) whenever the raw
    amplitude passes 1e100 during integration; the true solution is
    u_values * exp(log_scale) (overall scale is arbitrary for a linear
    homogeneous equation anyway).
    """

    r_grid: np.ndarray
    u_values: np.ndarray
    energy: float
    m_ang: float
    kind: SystemKind
    log_scale: float = 0.0

    def __post_init__(self):
        r = np.asarray(self.r_grid, dtype=float)
        u = np.asarray(self.u_values, dtype=complex)
        if r.ndim != 1 or u.ndim != 1 or r.size != u.size:
            raise DomainError("r_grid and u_values must be 1-d and equally long")
        if r.size < 3:
            raise DomainError("need at least 3 grid points")
        if not np.all(np.diff(r) > 0):
            raise DomainError("r_grid must be strictly increasing")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(u.view(float)))):
            raise DomainError("non-finite grid or amplitude values")
        object.__setattr__(self, "r_grid", r)
        object.__setattr__(self, "u_values", u)

    def decay_ratio(self) -> float:
        """|u| at the outer edge relative to the global maximum."""
        mags = np.abs(self.u_values)
        return float(mags[-1] / mags.max())


def _numerov(
    coef: np.ndarray,
    h: float,
    start: tuple[complex, complex],
    inward: bool,
) -> tuple[np.ndarray, float]:
    """Propagate y'' + coef * y = 0 on a uniform grid; O(h^6) local error.

    start holds y at the first two grid points in the direction of travel.
    Uses the summed form of the recurrence (the running first difference of
    z = (1 + h^2 coef/12) y is updated each step), which keeps roundoff
    growth linear in the step count instead of quadratic.
    Returns (values in grid order, accumulated log scale).
    """
    n = coef.size
    h2 = h * h
    w = 1.0 + (h2 / 12.0) * coef  # Numerov weights
    y = np.zeros(n, dtype=complex)
    log_scale = 0.0
    if inward:
        y[n - 1], y[n - 2] = start
        rng = range(n - 3, -1, -1)
        offs = 1
    else:
        y[0], y[1] = start
        rng = range(2, n)
        offs = -1
    i_prev = n - 2 if inward else 1
    i_first = n - 1 if inward else 0
    z_curr = w[i_prev] * y[i_prev]
    diff = z_curr - w[i_first] * y[i_first]
    for i in rng:
        diff = diff - h2 * coef[i + offs] * y[i + offs]
        z_curr = z_curr + diff
        y[i] = z_curr / w[i]
        mag = abs(y[i])
        if mag > _RENORM_LIMIT:
            y /= mag  # rescales the untouched tail too; it is overwritten later
            z_curr /= mag
            diff /= mag
            log_scale += math.log(mag)
    return y, log_scale


def _coef_values(
    kind: SystemKind,
    pp: PhysicalParams,
    m_ang: float,
    energy: float,
    r: np.ndarray,
    transformed: bool,
) -> np.ndarray:
    """Q(r) on the grid, or W = r^2 Q - 1/4 for the log-variable equation."""
    two_m_over_h2 = 2.0 * pp.mass / (pp.hbar * pp.hbar)
    if isinstance(kind, Free):
        u_pot = np.zeros_like(r)
    elif isinstance(kind, Coulomb):
        u_pot = -kind.alpha / r
    elif isinstance(kind, Oscillator):
        u_pot = 0.5 * pp.mass * kind.omega**2 * r * r
    else:
        raise TypeError(f"unknown system kind {kind!r}")
    q = two_m_over_h2 * (energy - u_pot) + (m_ang * m_ang + 0.25) / (r * r)
    if transformed:
        return r * r * q - 0.25
    return q


def _check_stability(h: float, coef: np.ndarray):
    worst = h * h * float(np.max(np.abs(coef)))
    if worst > _STABILITY_BOUND:
        raise DomainError(
            f"grid too coarse: h^2 max|coef| = {worst:.3g} > {_STABILITY_BOUND}; "
            "increase steps"
        )


def integrate_radial(
    kind: SystemKind,
    pp: PhysicalParams,
    m_ang: float,
    energy: float,
    cfg: ShootingConfig,
    direction: Literal["outward", "inward"],
    start_values: tuple[complex, complex],
    spacing: Literal["linear", "log"] = "linear",
    q_func: Callable[[np.ndarray], np.ndarray] | None = None,
) -> RadialSolution:
    """Numerov integration of u'' + Q(r) u = 0 over the configured window.

    start_values are u at the first two grid points in the direction of
    travel (the two smallest r for outward, the two largest for inward).
    spacing "log" integrates the transformed equation on a grid uniform in
    ln r; q_func, when given, replaces the model coefficient (for
    constant-coefficient validation runs).
    """
    if direction not in ("outward", "inward"):
        raise DomainError(f"direction must be outward or inward, got {direction!r}")
    inward = direction == "inward"

    if spacing == "linear":
        r = np.linspace(cfg.r_min, cfg.r_max, cfg.steps)
        h = r[1] - r[0]
        coef = q_func(r) if q_func is not None else _coef_values(
            kind, pp, m_ang, energy, r, transformed=False
        )
        if not np.all(np.isfinite(coef)):
            raise DomainError("coefficient not finite on the grid")
        _check_stability(h, coef)
        u, log_scale = _numerov(coef, h, start_values, inward)
    elif spacing == "log":
        x = np.linspace(math.log(cfg.r_min), math.log(cfg.r_max), cfg.steps)
        r = np.exp(x)
        h = x[1] - x[0]
        if q_func is not None:
            coef = r * r * q_func(r) - 0.25
        else:
            coef = _coef_values(kind, pp, m_ang, energy, r, transformed=True)
        if not np.all(np.isfinite(coef)):
            raise DomainError("coefficient not finite on the grid")
        _check_stability(h, coef)
        sqrt_r = np.sqrt(r)
        if inward:
            v_start = (start_values[0] / sqrt_r[-1], start_values[1] / sqrt_r[-2])
        else:
            v_start = (start_values[0] / sqrt_r[0], start_values[1] / sqrt_r[1])
        v, log_scale = _numerov(coef, h, v_start, inward)
        u = v * sqrt_r
    else:
        raise DomainError(f"spacing must be linear or log, got {spacing!r}")

    return RadialSolution(r, u, energy, m_ang, kind, log_scale)


def _phase_fit(x: np.ndarray, v: np.ndarray, m_ang: float) -> tuple[float, float, float]:
    """Fit v(x) = a sin(Mx) + b cos(Mx); returns (beta mod pi, amplitude, rel rms)."""
    design = np.column_stack([np.sin(m_ang * x), np.cos(m_ang * x)])
    sol, *_ = np.linalg.lstsq(design, v, rcond=None)
    a, b = float(sol[0]), float(sol[1])
    amp = math.hypot(a, b)
    if amp == 0.0:
        raise FitQualityError("zero amplitude in phase fit window")
    resid = v - design @ sol
    rel = float(np.sqrt(np.mean(resid * resid))) / amp
    beta = math.fmod(math.atan2(b, a), math.pi)
    if beta < 0.0:
        beta += math.pi
    return beta, amp, rel


def inward_phase(
    kind: SystemKind,
    pp: PhysicalParams,
    m_ang: float,
    energy: float,
    cfg: ShootingConfig,
    fit_residual_tol: float = 1e-4,
) -> float:
    """Near-origin phase beta of u ~ sqrt(r) sin(M ln r + beta), in [0, pi).

    Integrates inward from r_max with the decaying start u ~ e^{-kappa r}
    (kappa = sqrt(-2mE)/hbar); the start transient dies out going inward,
    so its crudeness is harmless.  The phase is fit on r in
    [r_min, 10 r_min].  Raises FitQualityError when the rms residual
    exceeds fit_residual_tol of the fitted amplitude (grid too coarse or
    r_min not deep enough inside the inverse-square region).

    The returned value is reduced mod pi; callers scanning in energy must
    unwind it themselves (see shoot_eigenvalues).
    """
    if m_ang == 0.0:
        raise DomainError("phase extraction needs M != 0")
    if not energy < 0:
        raise DomainError(f"need E < 0, got {energy}")
    kappa = math.sqrt(-2.0 * pp.mass * energy) / pp.hbar

    x_min = math.log(cfg.r_min)
    x_max = math.log(cfg.r_max)
    x = np.linspace(x_min, x_max, cfg.steps)
    r = np.exp(x)
    h = x[1] - x[0]
    coef = _coef_values(kind, pp, m_ang, energy, r, transformed=True)
    _check_stability(h, coef)

    # decaying start, v = u/sqrt(r) with u ~ e^{-kappa r}
    v_end = 1.0
    v_prev = math.exp(kappa * (r[-1] - r[-2])) * math.sqrt(r[-1] / r[-2]) * v_end

    n = coef.size
    h2 = h * h
    w = 1.0 + (h2 / 12.0) * coef
    v = np.zeros(n, dtype=float)
    v[n - 1] = v_end
    v[n - 2] = v_prev
    z_curr = w[n - 2] * v_prev
    diff = z_curr - w[n - 1] * v_end
    for i in range(n - 3, -1, -1):
        diff = diff - h2 * coef[i + 1] * v[i + 1]
        z_curr = z_curr + diff
        v[i] = z_curr / w[i]
        mag = abs(v[i])
        if mag > _RENORM_LIMIT:
            v /= mag
            z_curr /= mag
            diff /= mag
    window = x <= x_min + math.log(10.0)
    beta, _, rel = _phase_fit(x[window], v[window], m_ang)
    if rel > fit_residual_tol:
        raise FitQualityError(
            f"phase fit residual {rel:.3e} exceeds {fit_residual_tol:.1e} "
            f"(E={energy:.6g}, r_min={cfg.r_min:.3g})"
        )
    return beta


def _lift(raw: float, reference: float) -> float:
    """Shift raw by a multiple of pi to land nearest the reference."""
    return raw + math.pi * round((reference - raw) / math.pi)


def shoot_eigenvalues(
    kind: SystemKind,
    pp: PhysicalParams,
    m_ang: float,
    e_window: tuple[float, float],
    count: int,
    cfg: ShootingConfig,
    tol: float = 1e-6,
) -> list[float]:
    """Eigenvalues from the numeric phase condition beta(E_n) = beta(E_0) + pi n.

    The anchor E_0 is the upper (least negative) endpoint of e_window; the
    scan walks toward the deeper endpoint, unwinding the mod-pi phase
    continuously, and returns the first `count` crossings refined by
    bisection to relative energy tolerance tol.  cfg describes the grid at
    the anchor energy; windows at other energies are the same grid
    rescaled by r0(E)/r0(E_0).

    Raises InsufficientRootsError when fewer than count crossings lie in
    the window.
    """
    e_lo, e_hi = e_window
    if not (e_lo < e_hi < 0):
        raise DomainError(f"window must satisfy e_lo < e_hi < 0, got {e_window}")
    if count < 1:
        raise DomainError("count must be >= 1")
    if m_ang == 0.0:
        raise DomainError("phase condition needs M != 0")

    r0_anchor = bound_state_length(pp, e_hi)
    alpha = kind.alpha if isinstance(kind, Coulomb) else 0.0

    def beta_raw(x: float) -> float:
        energy = -math.exp(x)
        factor = bound_state_length(pp, energy) / r0_anchor
        return inward_phase(kind, pp, m_ang, energy, cfg.rescaled(factor))

    def scan_step(x: float) -> float:
        # local level density: dbeta/dln|E| ~ |M|/2 deep, pi g/2 shallow
        g_here = 0.0
        if alpha > 0.0:
            g_here = pp.mass * alpha / (pp.hbar * math.sqrt(2.0 * pp.mass * math.exp(x)))
        return (math.pi / 6.0) / (abs(m_ang) / 2.0 + math.pi * g_here / 2.0)

    x_start = math.log(-e_hi)
    x_stop = math.log(-e_lo)
    sgn = math.copysign(1.0, m_ang)

    xs = [x_start]
    lifted = [beta_raw(x_start)]
    found: list[float] = []
    n_next = 1
    while n_next <= count:
        target = lifted[0] + sgn * math.pi * n_next
        # extend the scan until the target is bracketed or the window ends
        while True:
            seg = None
            for j in range(len(xs) - 1):
                if (lifted[j] - target) * (lifted[j + 1] - target) <= 0.0:
                    seg = j
                    break
            if seg is not None:
                break
            x_prev = xs[-1]
            if x_prev >= x_stop:
                raise InsufficientRootsError(
                    f"only {n_next - 1} of {count} phase crossings inside "
                    f"E in [{e_lo:.6g}, {e_hi:.6g}]"
                )
            x_new = min(x_prev + scan_step(x_prev), x_stop)
            raw = beta_raw(x_new)
            xs.append(x_new)
            lifted.append(_lift(raw, lifted[-1]))
        # bisect inside the bracketing segment
        lo, hi = xs[seg], xs[seg + 1]
        b_lo, b_hi = lifted[seg], lifted[seg + 1]
        for _ in range(200):
            if abs(hi - lo) <= tol:
                break
            mid = 0.5 * (lo + hi)
            ref = b_lo + (b_hi - b_lo) * (mid - lo) / (hi - lo)
            b_mid = _lift(beta_raw(mid), ref)
            if (b_lo - target) * (b_mid - target) <= 0.0:
                hi, b_hi = mid, b_mid
            else:
                lo, b_lo = mid, b_mid
        found.append(-math.exp(0.5 * (lo + hi)))
        n_next += 1
    return found


def ode_residual(sol: RadialSolution, pp: PhysicalParams) -> float:
    """Scaled defect of u'' + Q u = 0: max |u''_fd + Q u| / max |Q u|.

    Central three-point second difference (handles smoothly varying
    grids); interior points only.
    """
    r = sol.r_grid
    u = sol.u_values
    q = np.array(
        [radial_coefficient(sol.kind, pp, sol.m_ang, sol.energy, ri) for ri in r]
    )
    h_minus = r[1:-1] - r[:-2]
    h_plus = r[2:] - r[1:-1]
    d2 = 2.0 * (
        (u[2:] - u[1:-1]) / h_plus - (u[1:-1] - u[:-2]) / h_minus
    ) / (h_plus + h_minus)
    residual = np.abs(d2 + q[1:-1] * u[1:-1])
    scale = np.max(np.abs(q * u))
    if scale == 0.0:
        raise DomainError("trivial solution; residual scale undefined")
    return float(np.max(residual) / scale)
